//! Complete enumeration of the integer vectors `x` with `‖x̂‖ <= N` and
//! `|x·ξ*| <= delta`, via an embedding lattice, LLL and exact Fincke–Pohst.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::enumerate::{short_vectors, Enumerated};
use super::lll::lll_reduce;
use crate::numeric::{ceil_rat, pow2, round_div, Rational};
use crate::real_enclosure::LinearFormTarget;

/// Candidates found in the box (a superset of the exact solutions; callers
/// filter by certified comparisons).
#[derive(Clone, Debug)]
pub enum BoxResult {
    Points(Vec<Vec<BigInt>>),
    TooMany,
}

#[derive(Clone, Copy, Debug)]
pub struct BoxLimits {
    pub max_points: usize,
    pub max_nodes: u64,
}

impl Default for BoxLimits {
    fn default() -> Self {
        BoxLimits {
            max_points: 4096,
            max_nodes: 200_000,
        }
    }
}

/// Sign normalization: first nonzero coordinate of `x̂` positive, or of `x` when `x̂ = 0`.
pub fn sign_normalize(x: &mut [BigInt]) {
    if let Some(f) = x.iter().find(|v| !v.is_zero()) {
        if f.is_negative() {
            for v in x.iter_mut() {
                *v = -&*v;
            }
        }
    }
}

/// All integer `x` (up to sign) with `1 <= ‖x̂‖ <= n_max` and `|x·ξ*| <= delta`,
/// plus possibly a few more with slightly larger value.
pub fn enumerate_box(
    target: &LinearFormTarget,
    n_max: &BigInt,
    delta: &Rational,
    limits: BoxLimits,
) -> BoxResult {
    assert!(n_max.is_positive() && delta.is_positive());
    let n = target.n();
    // fixed-point precision making the coordinate error N·Σw at most delta/4
    let mut bits = 16 + n_max.bits() + ceil_rat(&delta.recip()).bits();
    let (los, werr) = loop {
        let fs: Vec<_> = target.coords().iter().map(|c| c.fixed(bits)).collect();
        let w: BigInt = fs.iter().map(|f| &f.hi - &f.lo).sum();
        let err = n_max * &w;
        // err/2^bits <= delta/4
        let lhs = Rational::from_integer(&err << 2u32);
        if lhs <= delta * Rational::from_integer(pow2(bits)) {
            break (fs.iter().map(|f| f.lo.clone()).collect::<Vec<_>>(), err);
        }
        bits += 32;
    };
    let scale = pow2(bits);
    let y_bound =
        ceil_rat(&(delta * Rational::from_integer(scale.clone()))) + &werr + BigInt::one();
    let k = round_div(&y_bound, n_max).max(BigInt::one());
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut r = vec![BigInt::zero(); n + 1];
        r[i] = k.clone();
        r[n] = los[i].clone();
        rows.push(r);
    }
    let mut last = vec![BigInt::zero(); n + 1];
    last[n] = scale.clone();
    rows.push(last);
    lll_reduce(&mut rows, 5_000_000);
    let kn = &k * n_max;
    let bound = BigInt::from(n as u64) * &kn * &kn + &y_bound * &y_bound;
    let Some(res) = short_vectors(
        &rows,
        &bound,
        limits.max_points.saturating_mul(4),
        limits.max_nodes,
    ) else {
        return BoxResult::Points(Vec::new());
    };
    let coeffs = match res {
        Enumerated::TooMany => return BoxResult::TooMany,
        Enumerated::Points(p) => p,
    };
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for c in coeffs {
        let mut v = vec![BigInt::zero(); n + 1];
        for (ci, row) in c.iter().zip(&rows) {
            if ci.is_zero() {
                continue;
            }
            for (a, b) in v.iter_mut().zip(row) {
                *a += ci * b;
            }
        }
        if v[n].abs() > y_bound {
            continue;
        }
        let mut x = Vec::with_capacity(n + 1);
        let mut ok = true;
        let mut acc = v[n].clone();
        for i in 0..n {
            let xi = &v[i] / &k;
            if xi.abs() > *n_max {
                ok = false;
                break;
            }
            acc -= &xi * &los[i];
            x.push(xi);
        }
        if !ok || x.iter().all(|t| t.is_zero()) {
            continue;
        }
        debug_assert!((&acc % &scale).is_zero());
        x.push(acc / &scale);
        sign_normalize(&mut x);
        out.push(x);
    }
    out.sort();
    out.dedup();
    if out.len() > limits.max_points {
        return BoxResult::TooMany;
    }
    BoxResult::Points(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int_vec, rat};
    use crate::real_enclosure::RealSource;

    #[test]
    fn finds_fibonacci_pair() {
        let t = LinearFormTarget::new(vec![RealSource::golden_fraction()]).unwrap();
        // |89 φ - 55| ≈ 0.0050
        let BoxResult::Points(p) =
            enumerate_box(&t, &BigInt::from(100), &rat(6, 1000), BoxLimits::default())
        else {
            panic!()
        };
        assert!(p.contains(&int_vec(&[89, -55])));
        assert!(!p.contains(&int_vec(&[55, -34])));
    }
}
