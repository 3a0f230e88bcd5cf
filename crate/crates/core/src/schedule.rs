//! Exponent chains `p_1^{e_1} < p_2^{e_2} < ... < p_k^{e_k} < p_1^{e_{k+1}} < ...`
//! in which each power is roughly the `tau`-th power of its predecessor.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::logs::{ln_int, ratio_bounds};
use crate::numeric::{floor_rat, serde_rational, Rational};

/// Rule generating an interleaved exponent chain over `primes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSchedule {
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    pub primes: Vec<u64>,
}

impl ChainSchedule {
    pub fn new(tau: Rational, primes: Vec<u64>) -> Self {
        assert!(!primes.is_empty(), "a chain needs at least one prime");
        assert!(tau > Rational::one(), "chain growth needs tau > 1");
        ChainSchedule { tau, primes }
    }

    pub fn k(&self) -> usize {
        self.primes.len()
    }

    /// First `count` chain exponents; position `m` belongs to prime `m mod k`.
    pub fn chain(&self, count: usize) -> Vec<u64> {
        let k = self.primes.len();
        let mut out: Vec<u64> = Vec::with_capacity(count);
        for m in 0..count {
            if m == 0 {
                out.push(1);
                continue;
            }
            let prev = out[m - 1];
            let pp = self.primes[(m - 1) % k];
            let p = self.primes[m % k];
            let mut e = round_scaled_log_ratio(&self.tau, prev, pp, p);
            if m >= k {
                e = e.max(out[m - k] + 1);
            }
            e = e.max(1);
            while !power_exceeds(p, e, pp, prev) {
                e += 1;
            }
            out.push(e);
        }
        out
    }

    /// Exponents of coordinate `index` (positions `index`, `index + k`, ...).
    pub fn coordinate(&self, index: usize, count: usize) -> Vec<u64> {
        let k = self.primes.len();
        let chain = self.chain(index + k * count);
        (0..count).map(|t| chain[index + t * k]).collect()
    }
}

/// Nearest integer to `tau * e * ln(a) / ln(b)`, certified.
pub fn round_scaled_log_ratio(tau: &Rational, e: u64, a: u64, b: u64) -> u64 {
    let mut bits = 64 + 2 * (64 - e.leading_zeros() as u64);
    loop {
        let la = ln_int(&BigInt::from(a), bits);
        let lb = ln_int(&BigInt::from(b), bits);
        let (lo, hi) = ratio_bounds(&la, &lb).expect("ln of a prime is positive");
        let s = tau * Rational::from_integer(BigInt::from(e));
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let rl = floor_rat(&(&lo * &s + &half));
        let rh = floor_rat(&(&hi * &s + &half));
        if rl == rh {
            assert!(!rl.is_negative());
            return u64::try_from(rl).expect("exponent fits in u64");
        }
        bits *= 2;
        assert!(bits < 1 << 16, "log ratio rounding did not settle");
    }
}

/// Whether `p^e > q^f`, certified.
pub fn power_exceeds(p: u64, e: u64, q: u64, f: u64) -> bool {
    if p == q {
        return e > f;
    }
    let mut bits = 64 + 2 * (64 - e.max(f).leading_zeros() as u64);
    loop {
        let lp = ln_int(&BigInt::from(p), bits).scale_by(&BigInt::from(e));
        let lq = ln_int(&BigInt::from(q), bits).scale_by(&BigInt::from(f));
        if lp.lo > lq.hi {
            return true;
        }
        if lp.hi < lq.lo {
            return false;
        }
        if bits > 4096 {
            // distinct primes: p^e = q^f only when both exponents vanish
            let x = num_traits::pow(BigInt::from(p), e as usize);
            let y = num_traits::pow(BigInt::from(q), f as usize);
            return x > y;
        }
        bits *= 2;
    }
}

/// Whether `base^e >= 2^k`, certified.
pub fn power_at_least_pow2(base: u64, e: u64, k: u64) -> bool {
    if base.is_power_of_two() {
        let s = base.trailing_zeros() as u64;
        return e.checked_mul(s).is_none_or(|v| v >= k);
    }
    let est = e as f64 * (base as f64).log2();
    let kf = k as f64;
    let margin = 1e-9 * kf.max(est) + 1e-6;
    if est > kf + margin {
        return true;
    }
    if est < kf - margin {
        return false;
    }
    let x = num_traits::pow(BigInt::from(base), e as usize);
    x.bits() > k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn theorem8_chain_for_tau_three() {
        let s = ChainSchedule::new(rat(3, 1), vec![2, 3]);
        let c = s.chain(8);
        assert_eq!(c[..6], [1, 2, 10, 19, 90, 170]);
        assert_eq!(s.coordinate(0, 3), vec![1, 10, 90]);
        assert_eq!(s.coordinate(1, 3), vec![2, 19, 170]);
    }

    #[test]
    fn three_prime_chain() {
        let s = ChainSchedule::new(rat(7, 2), vec![2, 3, 5]);
        assert_eq!(s.chain(7), vec![1, 2, 5, 41, 91, 217, 1764]);
    }

    #[test]
    fn power_comparisons() {
        assert!(power_exceeds(3, 2, 2, 3));
        assert!(!power_exceeds(2, 3, 3, 2));
        assert!(power_at_least_pow2(3, 2, 3));
        assert!(!power_at_least_pow2(3, 2, 4));
        assert!(power_at_least_pow2(2, 10, 10));
        assert!(!power_at_least_pow2(2, 9, 10));
    }
}
