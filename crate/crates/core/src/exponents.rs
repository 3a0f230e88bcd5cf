//! Finite-data estimates of the exponents `ω` and `ω̂` from a best-approximation sequence.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bestapprox::{BestApproxRecord, BestApproxSequence};
use crate::error::{Error, Result};
use crate::logs::{ln_int, ln_rat, ratio_bounds, LnInterval};
use crate::numeric::{ceil_rat, floor_rat, pow2, rat, to_strings, Rational};
use crate::real_enclosure::Enclosure;

const LN_BITS: u64 = 64;
/// Estimates are rounded outward to this many fractional bits.
const ROUND_BITS: u64 = 40;

fn outward(lo: Rational, hi: Rational) -> Enclosure {
    let s = Rational::from_integer(pow2(ROUND_BITS));
    let l = Rational::new(floor_rat(&(&lo * &s)), pow2(ROUND_BITS));
    let h = Rational::new(ceil_rat(&(&hi * &s)), pow2(ROUND_BITS));
    Enclosure::new(l, h).expect("ordered")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordExponents {
    pub index: usize,
    /// `-log|q_j·ξ*| / log‖q̂_j‖`; absent when `‖q̂_j‖ = 1`.
    pub o: Option<Enclosure>,
    /// `-log|q_j·ξ*| / log‖q̂_{j+1}‖`; absent for the last record.
    pub u: Option<Enclosure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub records: Vec<RecordExponents>,
    /// Number of trailing records summarized.
    pub window: usize,
    /// Largest `o_j` in the window, as a proxy for `ω`.
    pub omega: Option<Enclosure>,
    /// Smallest `u_j` in the window, as a proxy for `ω̂`.
    pub omega_hat: Option<Enclosure>,
}

impl ExponentEstimate {
    /// Rows `j,o_lo,o_hi,u_lo,u_hi` with empty fields where undefined.
    pub fn to_csv(&self) -> String {
        let f = |e: &Option<Enclosure>| match e {
            Some(e) => format!(
                "{:.12},{:.12}",
                crate::numeric::rat_to_f64(e.lo()),
                crate::numeric::rat_to_f64(e.hi())
            ),
            None => ",".to_string(),
        };
        let mut s = String::from("j,o_lo,o_hi,u_lo,u_hi\n");
        for r in &self.records {
            s.push_str(&format!("{},{},{}\n", r.index, f(&r.o), f(&r.u)));
        }
        s
    }
}

/// Interval containing `-ln|q·ξ*|`.
fn neg_log_value(r: &BestApproxRecord) -> Result<(LnInterval, LnInterval)> {
    let e = &r.value_enclosure;
    if !(e.lo() > &Rational::zero()) {
        return Err(Error::ZeroValue(to_strings(&r.q)));
    }
    Ok((ln_rat(e.hi(), LN_BITS).neg(), ln_rat(e.lo(), LN_BITS).neg()))
}

fn exponent_interval(num: &(LnInterval, LnInterval), norm: &BigInt) -> Option<Enclosure> {
    if norm <= &BigInt::one() {
        return None;
    }
    let d = ln_int(norm, LN_BITS);
    let (lo, _) = ratio_bounds(&num.0, &d)?;
    let (_, hi) = ratio_bounds(&num.1, &d)?;
    Some(outward(lo, hi))
}

/// Default summary window `⌈m/3⌉`.
pub fn default_window(m: usize) -> usize {
    m.div_ceil(3)
}

pub fn estimate_exponents(
    seq: &BestApproxSequence,
    window: Option<usize>,
) -> Result<ExponentEstimate> {
    let recs = &seq.records;
    if recs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} records, need at least 3",
            recs.len()
        )));
    }
    let mut out = Vec::with_capacity(recs.len());
    for (i, r) in recs.iter().enumerate() {
        let num = neg_log_value(r)?;
        let o = exponent_interval(&num, &r.restricted_norm);
        let u = recs
            .get(i + 1)
            .and_then(|s| exponent_interval(&num, &s.restricted_norm));
        out.push(RecordExponents {
            index: r.index,
            o,
            u,
        });
    }
    let window = window
        .unwrap_or_else(|| default_window(out.len()))
        .clamp(1, out.len());
    let tail = &out[out.len() - window..];
    let omega = summarize(tail.iter().filter_map(|r| r.o.as_ref()), true);
    let omega_hat = summarize(tail.iter().filter_map(|r| r.u.as_ref()), false);
    Ok(ExponentEstimate {
        records: out,
        window,
        omega,
        omega_hat,
    })
}

/// Endpoint-wise maximum (or minimum) of a family of intervals.
fn summarize<'a>(it: impl Iterator<Item = &'a Enclosure>, take_max: bool) -> Option<Enclosure> {
    let mut acc: Option<(Rational, Rational)> = None;
    for e in it {
        acc = Some(match acc {
            None => (e.lo().clone(), e.hi().clone()),
            Some((l, h)) if take_max => (l.max(e.lo().clone()), h.max(e.hi().clone())),
            Some((l, h)) => (l.min(e.lo().clone()), h.min(e.hi().clone())),
        });
    }
    acc.map(|(l, h)| Enclosure::new(l, h).expect("ordered"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FastoReport {
    /// Summaries of `ω(ξ_1)` and `ω(ξ_2)` from the records supported on `H_1` and `H_2`.
    pub omega: [Option<Enclosure>; 2],
    pub counts: [usize; 2],
    #[serde(with = "crate::numeric::serde_rational")]
    pub threshold: Rational,
    pub pass: bool,
}

/// Relative tolerance applied to the bound 4.
pub fn default_fasto_tolerance() -> Rational {
    rat(1, 10)
}

/// Reads single-number approximations to `ξ_1`, `ξ_2` off the `H_1`/`H_2` records
/// and checks that both ordinary exponents exceed `4(1 - tol)`.
pub fn fasto_check(seq: &BestApproxSequence, tol: &Rational) -> Result<FastoReport> {
    if seq.target.coords.len() != 2 {
        return Err(Error::InvalidArgument(
            "fasto_check needs a target in R^2".into(),
        ));
    }
    let mut omega = [None, None];
    let mut counts = [0, 0];
    for i in 0..2 {
        let other = 1 - i;
        let sub: Vec<&BestApproxRecord> = seq
            .records
            .iter()
            .filter(|r| r.q[other].is_zero() && r.restricted_norm > BigInt::one())
            .collect();
        counts[i] = sub.len();
        if sub.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "{} records supported on H_{}",
                sub.len(),
                i + 1
            )));
        }
        let mut es = Vec::new();
        for r in &sub[sub.len() - default_window(sub.len())..] {
            let num = neg_log_value(r)?;
            es.extend(exponent_interval(&num, &r.restricted_norm));
        }
        omega[i] = summarize(es.iter(), true);
    }
    let threshold = rat(4, 1) * (rat(1, 1) - tol);
    let pass = omega
        .iter()
        .all(|o| o.as_ref().is_some_and(|e| e.lo() >= &threshold));
    Ok(FastoReport {
        omega,
        counts,
        threshold,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bestapprox::{best_approximations_with, SearchOptions, Strategy};
    use crate::numeric::rat_to_f64;
    use crate::real_enclosure::{LinearFormTarget, RealSource};

    #[test]
    fn golden_ratio_exponents_tend_to_one() {
        let t = LinearFormTarget::new(vec![RealSource::golden_fraction()]).unwrap();
        let opts = SearchOptions {
            strategy: Strategy::Lattice,
            ..SearchOptions::default()
        };
        let seq =
            best_approximations_with(&t, &num_traits::pow(BigInt::from(10), 30), opts).unwrap();
        let est = estimate_exponents(&seq, None).unwrap();
        for r in &est.records {
            if let (Some(o), Some(u)) = (&r.o, &r.u) {
                assert!(o.lo() >= u.lo() && o.hi() >= u.hi());
            }
        }
        let last = est.records.iter().rev().find(|r| r.u.is_some()).unwrap();
        let o = rat_to_f64(&last.o.as_ref().unwrap().mid());
        let u = rat_to_f64(&last.u.as_ref().unwrap().mid());
        assert!((o - 1.0).abs() < 0.02 && (u - 1.0).abs() < 0.02, "{o} {u}");
        assert!(rat_to_f64(est.omega_hat.unwrap().hi()) >= 0.9);
    }

    #[test]
    fn too_few_records() {
        let t = LinearFormTarget::new(vec![RealSource::golden_fraction()]).unwrap();
        let seq = best_approximations_with(&t, &BigInt::from(2), SearchOptions::default()).unwrap();
        assert!(matches!(
            estimate_exponents(&seq, None),
            Err(Error::InsufficientData(_))
        ));
    }
}
