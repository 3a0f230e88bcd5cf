//! Best approximations of the linear form `q·(ξ,1)`: the records of
//! `min |b·ξ*|` over `0 < ‖b̂‖ <= Q` as `Q` grows.

pub mod shell;
pub mod successor;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_box, sign_normalize, BoxLimits, BoxResult};
use crate::numeric::{format_rational, gcd_all, log2_rat, parse_rational, rat_to_f64, to_strings};
use crate::real_enclosure::{
    abs_value, compare_abs, AbsOrder, AbsValue, Enclosure, LinearFormTarget, TargetSpec,
};
use shell::{
    candidates_for, certified_min, cube_size, cube_vector, fixed_coords, full_norm, record_bounds,
    restricted_norm, scan, shell_size, shell_vector,
};
pub use successor::successor;

/// Default refinement cap in bits (`2^-DEFAULT_DEPTH` absolute accuracy).
pub const DEFAULT_DEPTH: u64 = 1 << 20;

/// Exhaustive search is used when `(2Q+1)^n` stays below this.
pub const AUTO_EXHAUSTIVE_LIMIT: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormConvention {
    /// `‖q̂‖`: max-norm of the first `n` coordinates.
    Restricted,
    /// `‖q‖`: max-norm of all `n+1` coordinates.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Shell-by-shell enumeration of every `x̂`.
    Exhaustive,
    /// Successor search by complete box enumeration in an embedding lattice.
    Lattice,
    Auto,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub depth: u64,
    pub strategy: Strategy,
    pub norm: NormConvention,
    pub limits: BoxLimits,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            depth: DEFAULT_DEPTH,
            strategy: Strategy::Auto,
            norm: NormConvention::Restricted,
            limits: BoxLimits::default(),
        }
    }
}

/// One best approximation `q_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestApproxRecord {
    pub index: usize,
    pub q: Vec<BigInt>,
    pub restricted_norm: BigInt,
    pub value_enclosure: Enclosure,
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    index: usize,
    q: Vec<String>,
    norm: String,
    value_lo: String,
    value_hi: String,
}

impl Serialize for BestApproxRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RecordJson {
            index: self.index,
            q: to_strings(&self.q),
            norm: self.restricted_norm.to_string(),
            value_lo: format_rational(self.value_enclosure.lo()),
            value_hi: format_rational(self.value_enclosure.hi()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BestApproxRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = RecordJson::deserialize(d)?;
        let q: Vec<BigInt> =
            r.q.iter()
                .map(|s| s.trim().parse().map_err(D::Error::custom))
                .collect::<std::result::Result<_, _>>()?;
        let norm = r.norm.trim().parse().map_err(D::Error::custom)?;
        let lo = parse_rational(&r.value_lo).map_err(D::Error::custom)?;
        let hi = parse_rational(&r.value_hi).map_err(D::Error::custom)?;
        Ok(BestApproxRecord {
            index: r.index,
            q,
            restricted_norm: norm,
            value_enclosure: Enclosure::new(lo, hi).map_err(D::Error::custom)?,
        })
    }
}

impl BestApproxRecord {
    /// `log10` of the midpoint of the value enclosure.
    pub fn log10_value(&self) -> f64 {
        log2_rat(&self.value_enclosure.mid()) * std::f64::consts::LOG10_2
    }
}

/// Why a search ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StopReason {
    QmaxReached,
    /// The last record has `q·ξ* = 0`.
    ExactZero,
    PrecisionExhausted {
        a: Vec<String>,
        b: Vec<String>,
    },
    RangeTooLarge {
        detail: String,
    },
}

/// Records of one target up to a norm bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestApproxSequence {
    pub target: TargetSpec,
    pub records: Vec<BestApproxRecord>,
    #[serde(with = "crate::numeric::serde_bigint")]
    pub q_max: BigInt,
    pub norm_convention: NormConvention,
    pub stop: StopReason,
}

impl BestApproxSequence {
    /// The error that cut the search short, if any.
    pub fn error(&self) -> Option<Error> {
        match &self.stop {
            StopReason::PrecisionExhausted { a, b } => Some(Error::PrecisionExhausted {
                a: a.clone(),
                b: b.clone(),
            }),
            StopReason::RangeTooLarge { detail } => Some(Error::RangeTooLarge(detail.clone())),
            _ => None,
        }
    }

    /// The sequence, or the error if the search was cut short.
    pub fn complete(self) -> Result<Self> {
        match self.error() {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }

    pub fn vectors(&self) -> Vec<Vec<BigInt>> {
        self.records.iter().map(|r| r.q.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// CSV lines `index,norm,log10_value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,norm,log10_value\n");
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{:.6}\n",
                r.index,
                r.restricted_norm,
                r.log10_value()
            ));
        }
        s
    }
}

/// `q / gcd(q)` with the first nonzero coordinate of `q̂` positive.
pub fn canonicalize(q: &[BigInt]) -> Result<Vec<BigInt>> {
    let g = gcd_all(q);
    if g.is_zero() {
        return Err(Error::InvalidArgument(
            "canonicalize of the zero vector".into(),
        ));
    }
    let mut v: Vec<BigInt> = q.iter().map(|x| x / &g).collect();
    sign_normalize(&mut v);
    Ok(v)
}

/// Best approximations with `‖q̂‖ <= q_max`, restricted norm, automatic strategy.
pub fn best_approximations(
    target: &LinearFormTarget,
    q_max: &BigInt,
    depth: u64,
) -> Result<BestApproxSequence> {
    best_approximations_with(
        target,
        q_max,
        SearchOptions {
            depth,
            ..SearchOptions::default()
        },
    )
}

struct Found {
    q: Vec<BigInt>,
    value: AbsValue,
}

/// Best approximations under explicit options. Certification failures end the
/// search and are reported in `stop` together with the certified prefix.
pub fn best_approximations_with(
    target: &LinearFormTarget,
    q_max: &BigInt,
    opts: SearchOptions,
) -> Result<BestApproxSequence> {
    if q_max < &BigInt::one() {
        return Err(Error::InvalidArgument("Q_max must be >= 1".into()));
    }
    let n = target.n();
    let small = q_max
        .to_u64()
        .filter(|&q| ((2 * q + 1) as f64).powi(n as i32) <= AUTO_EXHAUSTIVE_LIMIT);
    let exhaustive = match opts.strategy {
        Strategy::Exhaustive => true,
        Strategy::Lattice => false,
        Strategy::Auto => small.is_some(),
    };
    if opts.norm == NormConvention::Full && !exhaustive {
        return Err(Error::Unsupported(
            "the full-norm convention needs exhaustive search".into(),
        ));
    }
    let mut found: Vec<Found> = Vec::new();
    let stop = if exhaustive {
        let qm = q_max
            .to_u64()
            .ok_or_else(|| Error::RangeTooLarge(format!("exhaustive search to {q_max}")))?;
        exhaustive_search(target, qm, opts, &mut found)
    } else {
        lattice_search(target, q_max, opts, &mut found)
    };
    let stop = match stop {
        Ok(s) => s,
        Err(Error::PrecisionExhausted { a, b }) => StopReason::PrecisionExhausted { a, b },
        Err(Error::RangeTooLarge(detail)) => StopReason::RangeTooLarge { detail },
        Err(e) => return Err(e),
    };
    let records = finalize(target, &found, opts.depth);
    Ok(BestApproxSequence {
        target: target.spec(),
        records,
        q_max: q_max.clone(),
        norm_convention: opts.norm,
        stop,
    })
}

fn push_record(found: &mut Vec<Found>, q: Vec<BigInt>, value: AbsValue) -> bool {
    let zero = value.is_exact_zero();
    found.push(Found { q, value });
    zero
}

fn exhaustive_search(
    target: &LinearFormTarget,
    q_max: u64,
    opts: SearchOptions,
    found: &mut Vec<Found>,
) -> Result<StopReason> {
    let n = target.n();
    let full = opts.norm == NormConvention::Full;
    let fc_max = fixed_coords(target, q_max);
    let mag: f64 = target
        .coords()
        .iter()
        .map(|c| c.approx_f64().abs())
        .sum::<f64>()
        * (1.0 + 1e-9)
        + 1e-12;
    for q in 1..=q_max {
        let mut cands: Vec<Vec<BigInt>> = Vec::new();
        match &fc_max {
            Some(fc) => {
                let cut = found
                    .last()
                    .and_then(|r| record_bounds(fc, &r.q))
                    .map(|(_, hi)| hi);
                let clamp = if full { Some(q as i64) } else { None };
                let size =
                    shell_size(n, q).ok_or_else(|| Error::RangeTooLarge(format!("shell {q}")))?;
                let mut c = scan(fc, size, |i| shell_vector(n, q, i), clamp, cut);
                if full && q > 1 {
                    // ‖x̂‖ < q with constant term ±q
                    let rec = found.last().map(|r| r.value.to_enclosure().hi().clone());
                    let reach =
                        (q - 1) as f64 * mag + rec.map_or(f64::INFINITY, |r| rat_to_f64(&r));
                    if reach >= q as f64 {
                        let inner = cube_size(n, q - 1).expect("smaller than the shell");
                        let mut more =
                            scan(fc, inner, |i| cube_vector(n, q - 1, i), Some(q as i64), cut);
                        more.retain(|cd| cd.c.unsigned_abs() == q);
                        c.extend(more);
                    }
                }
                if full && q == 1 {
                    // (0,...,0,1) has full norm 1
                    let mut v: Vec<BigInt> = vec![BigInt::zero(); n];
                    v.push(BigInt::one());
                    cands.push(v);
                }
                let best_hi = c.iter().map(|x| x.hi).min();
                if let Some(b) = best_hi {
                    cands.extend(c.iter().filter(|x| x.lo <= b).map(|x| x.vector()));
                }
            }
            None => {
                return Err(Error::RangeTooLarge(format!(
                    "no 128-bit working precision for exhaustive search to {q_max}"
                )));
            }
        }
        if cands.is_empty() {
            continue;
        }
        let (best, val) = certified_min(target, cands, opts.depth)?;
        let better = match found.last() {
            None => true,
            Some(r) => match compare_abs(&best, &r.q, target, opts.depth)? {
                AbsOrder::Less => true,
                AbsOrder::Greater => false,
                AbsOrder::Undecided => {
                    if target.exact_values().is_some() {
                        false
                    } else {
                        return Err(Error::exhausted(&best, &r.q));
                    }
                }
            },
        };
        if better && push_record(found, best, val) {
            return Ok(StopReason::ExactZero);
        }
    }
    Ok(StopReason::QmaxReached)
}

fn lattice_search(
    target: &LinearFormTarget,
    q_max: &BigInt,
    opts: SearchOptions,
    found: &mut Vec<Found>,
) -> Result<StopReason> {
    let first = exhaustive_search(
        target,
        1,
        SearchOptions {
            strategy: Strategy::Exhaustive,
            ..opts
        },
        found,
    )?;
    if first == StopReason::ExactZero {
        return Ok(first);
    }
    loop {
        let last = &found.last().expect("first record").q;
        match successor(target, last, q_max, opts.depth, opts.limits)? {
            None => return Ok(StopReason::QmaxReached),
            Some(v) => {
                let val = abs_value(&v, target, 64);
                if push_record(found, v, val) {
                    return Ok(StopReason::ExactZero);
                }
            }
        }
    }
}

/// Value enclosures at one common depth, fine enough that consecutive records
/// are disjoint and every width is below `value / 2^24`.
fn finalize(target: &LinearFormTarget, found: &[Found], max_depth: u64) -> Vec<BestApproxRecord> {
    let need = found
        .iter()
        .map(|f| f.value.neg_log2_hi())
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let mut d = (need.ceil() as u64 + 48).max(64).min(max_depth.max(64));
    let vals = loop {
        let vals: Vec<AbsValue> = found.iter().map(|f| abs_value(&f.q, target, d)).collect();
        let sharp = vals.iter().all(|v| match v {
            AbsValue::Exact(_) => true,
            AbsValue::Approx(f) => (&f.hi - &f.lo) << 24u32 <= f.lo,
        });
        let disjoint = vals.windows(2).all(|w| w[1].below(&w[0]));
        if (sharp && disjoint) || d >= max_depth {
            break vals;
        }
        d = (d + d / 2).min(max_depth);
    };
    found
        .iter()
        .zip(vals)
        .enumerate()
        .map(|(i, (f, v))| BestApproxRecord {
            index: i + 1,
            restricted_norm: restricted_norm(&f.q),
            q: f.q.clone(),
            value_enclosure: v.to_enclosure(),
        })
        .collect()
}

/// Brute-force limit of [`verify_is_best`], in vectors `x̂`.
pub const VERIFY_BRUTE_LIMIT: f64 = 1e7;

/// Whether no `b` with `0 < ‖b̂‖ <= ‖q̂‖` has certified smaller `|b·ξ*|`.
pub fn verify_is_best(target: &LinearFormTarget, q: &[BigInt], depth: u64) -> Result<bool> {
    let n = target.n();
    if q.len() != n + 1 {
        return Err(Error::InvalidArgument("vector length must be n+1".into()));
    }
    let norm = restricted_norm(q);
    if norm.is_zero() {
        return Err(Error::InvalidArgument("‖q̂‖ must be at least 1".into()));
    }
    let mut q = q.to_vec();
    sign_normalize(&mut q);
    let check = |x: &Vec<BigInt>| -> Result<bool> {
        if *x == q {
            return Ok(false);
        }
        match compare_abs(x, &q, target, depth)? {
            AbsOrder::Less => Ok(true),
            AbsOrder::Greater => Ok(false),
            AbsOrder::Undecided if target.exact_values().is_some() => Ok(false),
            AbsOrder::Undecided => Err(Error::exhausted(x, &q)),
        }
    };
    let small = norm
        .to_u64()
        .filter(|&m| ((2 * m + 1) as f64).powi(n as i32) <= VERIFY_BRUTE_LIMIT);
    if let Some(m) = small {
        let fc = fixed_coords(target, m)
            .ok_or_else(|| Error::RangeTooLarge("no working precision".into()))?;
        let (_, qhi) = record_bounds(&fc, &q)
            .ok_or_else(|| Error::RangeTooLarge("record too large".into()))?;
        let total = cube_size(n, m).expect("bounded");
        let suspects: Vec<Vec<BigInt>> = (0..total)
            .into_par_iter()
            .flat_map_iter(|i| {
                let x = cube_vector(n, m, i);
                candidates_for(&fc, &x, None)
                    .into_iter()
                    .filter(move |c| c.lo < qhi)
                    .map(|c| c.vector())
            })
            .collect();
        for mut x in suspects {
            sign_normalize(&mut x);
            if check(&x)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let delta = match successor::value_upper(&q, target, depth)? {
        None => return Ok(true),
        Some(d) => d,
    };
    match enumerate_box(target, &norm, &delta, BoxLimits::default()) {
        BoxResult::TooMany => Err(Error::RangeTooLarge(format!("box at norm {norm}"))),
        BoxResult::Points(p) => {
            for x in p {
                if check(&x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Position of `v` (up to sign) in a vector list.
pub fn position_of(list: &[Vec<BigInt>], v: &[BigInt]) -> Option<usize> {
    let mut c = v.to_vec();
    sign_normalize(&mut c);
    list.iter().position(|x| {
        let mut y = x.clone();
        sign_normalize(&mut y);
        y == c
    })
}

/// Whether the vector is primitive.
pub fn is_primitive(q: &[BigInt]) -> bool {
    gcd_all(q).is_one()
}

/// Norm of `q` under a convention.
pub fn norm_of(q: &[BigInt], convention: NormConvention) -> BigInt {
    match convention {
        NormConvention::Restricted => restricted_norm(q),
        NormConvention::Full => full_norm(q),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, int_vec, rat};
    use crate::real_enclosure::RealSource;

    fn golden() -> LinearFormTarget {
        LinearFormTarget::new(vec![RealSource::golden_fraction()]).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(
            canonicalize(&int_vec(&[-2, 0, 1])).unwrap(),
            int_vec(&[2, 0, -1])
        );
        assert_eq!(
            canonicalize(&int_vec(&[4, 0, -2])).unwrap(),
            int_vec(&[2, 0, -1])
        );
        assert_eq!(
            canonicalize(&int_vec(&[0, 9, -1])).unwrap(),
            int_vec(&[0, 9, -1])
        );
    }

    #[test]
    fn golden_ratio_gives_fibonacci_norms() {
        let s = best_approximations(&golden(), &int(13), 256)
            .unwrap()
            .complete()
            .unwrap();
        let norms: Vec<i64> = s
            .records
            .iter()
            .map(|r| r.restricted_norm.to_i64().unwrap())
            .collect();
        assert_eq!(norms, vec![1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn lattice_and_exhaustive_agree_on_golden_ratio() {
        let t = golden();
        let mk = |s| SearchOptions {
            depth: 512,
            strategy: s,
            ..SearchOptions::default()
        };
        let a = best_approximations_with(&t, &int(5000), mk(Strategy::Exhaustive)).unwrap();
        let b = best_approximations_with(&t, &int(5000), mk(Strategy::Lattice)).unwrap();
        assert_eq!(a.vectors(), b.vectors());
        assert_eq!(a.records.last().unwrap().restricted_norm, int(4181));
    }

    #[test]
    fn rational_target_stops_at_exact_zero() {
        let t = LinearFormTarget::rationals(&[rat(1, 3)]);
        let s = best_approximations(&t, &int(10), 64).unwrap();
        assert_eq!(s.stop, StopReason::ExactZero);
        assert_eq!(s.records.last().unwrap().q, int_vec(&[3, -1]));
    }

    #[test]
    fn verify_examples() {
        let t = golden();
        assert!(verify_is_best(&t, &int_vec(&[8, -5]), 128).unwrap());
        assert!(!verify_is_best(&t, &int_vec(&[7, -4]), 128).unwrap());
        assert!(verify_is_best(&t, &int_vec(&[0, 5]), 128).is_err());
    }
}
