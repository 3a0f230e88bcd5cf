//! Next best approximation after a known record, found by complete box
//! enumeration with a growing norm bound.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::shell::{certified_min, restricted_norm};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_box, BoxLimits, BoxResult};
use crate::numeric::{pow2, Rational};
use crate::real_enclosure::{
    abs_value, compare_abs, depth_schedule, AbsOrder, AbsValue, LinearFormTarget,
};

/// Upper bound on `|q·ξ*|` within a factor 2 of the true value, or `None` for an exact zero.
pub fn value_upper(
    q: &[BigInt],
    target: &LinearFormTarget,
    max_depth: u64,
) -> Result<Option<Rational>> {
    for d in depth_schedule(max_depth) {
        match abs_value(q, target, d) {
            AbsValue::Exact(r) => return Ok(if r.is_zero() { None } else { Some(r) }),
            AbsValue::Approx(f) => {
                if f.lo.is_positive() && f.hi <= (&f.lo << 1u32) {
                    return Ok(Some(Rational::new(f.hi.clone(), pow2(f.bits))));
                }
            }
        }
    }
    Err(Error::exhausted(q, q))
}

enum Probe {
    Empty,
    Found(Vec<Vec<BigInt>>),
    TooMany,
}

fn probe(
    target: &LinearFormTarget,
    q: &[BigInt],
    qnorm: &BigInt,
    n_max: &BigInt,
    delta: &Rational,
    depth: u64,
    limits: BoxLimits,
) -> Result<Probe> {
    let pts = match enumerate_box(target, n_max, delta, limits) {
        BoxResult::TooMany => return Ok(Probe::TooMany),
        BoxResult::Points(p) => p,
    };
    let mut found = Vec::new();
    for x in pts {
        if restricted_norm(&x) <= *qnorm {
            continue;
        }
        match compare_abs(&x, q, target, depth)? {
            AbsOrder::Less => found.push(x),
            AbsOrder::Greater => {}
            AbsOrder::Undecided => return Err(Error::exhausted(&x, q)),
        }
    }
    Ok(if found.is_empty() {
        Probe::Empty
    } else {
        Probe::Found(found)
    })
}

/// Geometric midpoint of `lo < hi` (arithmetic when close).
fn mid(lo: &BigInt, hi: &BigInt) -> BigInt {
    let gap = hi - lo;
    if gap <= BigInt::from(2) * lo {
        return lo + (gap >> 1u32);
    }
    let b = (lo.bits() + hi.bits()) / 2;
    let m = pow2(b);
    if &m <= lo || &m >= hi {
        lo + (gap >> 1u32)
    } else {
        m
    }
}

/// The record following `q` with norm at most `q_max`, if any.
pub fn successor(
    target: &LinearFormTarget,
    q: &[BigInt],
    q_max: &BigInt,
    depth: u64,
    limits: BoxLimits,
) -> Result<Option<Vec<BigInt>>> {
    let qnorm = restricted_norm(q);
    if qnorm >= *q_max {
        return Ok(None);
    }
    let Some(delta) = value_upper(q, target, depth)? else {
        return Ok(None);
    };
    let n = target.n() as u64;
    // Dirichlet: a vector of norm about delta^(-1/n) does better than delta
    let nl = (delta.denom().bits() as i64 - delta.numer().bits() as i64).max(0) as u64;
    let guess = pow2(nl / n);
    let mut cur = guess.max(&qnorm + BigInt::one()).min(q_max.clone());
    let mut last_empty = qnorm.clone();
    let mut crowded: Option<BigInt> = None;
    let mut step = 1u64;
    loop {
        match probe(target, q, &qnorm, &cur, &delta, depth, limits)? {
            Probe::Found(found) => {
                let best = found
                    .iter()
                    .map(|x| restricted_norm(x))
                    .min()
                    .expect("nonempty");
                let at: Vec<Vec<BigInt>> = found
                    .into_iter()
                    .filter(|x| restricted_norm(x) == best)
                    .collect();
                let (v, _) = certified_min(target, at, depth)?;
                return Ok(Some(v));
            }
            Probe::Empty => {
                if cur == *q_max {
                    return Ok(None);
                }
                last_empty = cur.clone();
                cur = match &crowded {
                    Some(hi) if hi - &last_empty <= BigInt::one() => {
                        return Err(Error::RangeTooLarge(format!(
                            "more than {} candidates at norm {}",
                            limits.max_points, hi
                        )));
                    }
                    Some(hi) => mid(&last_empty, hi),
                    None => {
                        let next = (&cur << step).min(q_max.clone());
                        step = (step * 2).min(16);
                        next
                    }
                };
            }
            Probe::TooMany => {
                if &cur - &last_empty <= BigInt::one() {
                    return Err(Error::RangeTooLarge(format!(
                        "more than {} candidates at norm {}",
                        limits.max_points, cur
                    )));
                }
                crowded = Some(cur.clone());
                cur = mid(&last_empty, &cur);
            }
        }
    }
}
