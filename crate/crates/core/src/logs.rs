//! Certified natural logarithms in fixed point.
//!
//! `ln x = k ln 2 + 2 atanh((m-1)/(m+1))` with `x = m 2^k`, `m` in `[1,2)`.
//! Every truncation in the series rounds down, so the computed sum is a lower
//! bound and a fixed number of ulps bounds it from above.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::numeric::{dyadic, pow2, rat_to_f64, Rational};

/// `ln` of some positive real lies in `[lo, hi] / 2^scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LnInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub scale: u64,
}

impl LnInterval {
    pub fn lo_rat(&self) -> Rational {
        dyadic(self.lo.clone(), self.scale)
    }

    pub fn hi_rat(&self) -> Rational {
        dyadic(self.hi.clone(), self.scale)
    }

    pub fn sub(&self, o: &LnInterval) -> LnInterval {
        assert_eq!(self.scale, o.scale);
        LnInterval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
            scale: self.scale,
        }
    }

    pub fn add(&self, o: &LnInterval) -> LnInterval {
        assert_eq!(self.scale, o.scale);
        LnInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            scale: self.scale,
        }
    }

    pub fn neg(&self) -> LnInterval {
        LnInterval {
            lo: -&self.hi,
            hi: -&self.lo,
            scale: self.scale,
        }
    }

    /// Multiplication by a non-negative integer.
    pub fn scale_by(&self, k: &BigInt) -> LnInterval {
        assert!(!k.is_negative());
        LnInterval {
            lo: &self.lo * k,
            hi: &self.hi * k,
            scale: self.scale,
        }
    }

    pub fn mid_f64(&self) -> f64 {
        (rat_to_f64(&self.lo_rat()) + rat_to_f64(&self.hi_rat())) / 2.0
    }
}

/// `2 atanh(Y / 2^w)` from below, plus the ulp budget of the upper bound.
fn atanh2_fixed(y: &BigInt, w: u64) -> (BigInt, BigInt) {
    let y2 = (y * y) >> w;
    let mut p = y.clone();
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !p.is_zero() {
        sum += &p / BigInt::from(2 * i + 1);
        p = (&p * &y2) >> w;
        i += 1;
    }
    // floors in p, y2, the quotients and the omitted tail each lose at most a
    // few ulps per term; the terms shrink by a factor of at least 9.
    let err = BigInt::from(2 * i + 16);
    (sum << 1u32, err << 1u32)
}

fn ln2_fixed(w: u64) -> (BigInt, BigInt) {
    let y = pow2(w) / BigInt::from(3);
    let (v, e) = atanh2_fixed(&y, w);
    (v, e + BigInt::from(4))
}

/// Certified `ln x` for an integer `x >= 1`, accurate to roughly `2^-bits`.
pub fn ln_int(x: &BigInt, bits: u64) -> LnInterval {
    assert!(x.is_positive(), "ln of a non-positive integer");
    let k = x.bits() - 1;
    let guard = 24 + 64 - (k.max(1)).leading_zeros() as u64;
    let w = bits + guard;
    if x.is_one() {
        return LnInterval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            scale: w,
        };
    }
    // mantissa m = x / 2^k in [1,2) to w fractional bits, rounded down
    let m = if k >= w { x >> (k - w) } else { x << (w - k) };
    let exact_m = k <= w;
    let one = pow2(w);
    let y = ((&m - &one) << w) / (&m + &one);
    let (lm, em) = atanh2_fixed(&y, w);
    // ulps lost by rounding y down, and by m itself when x was shifted right
    let mut hi_m = &lm + &em + BigInt::from(4);
    if !exact_m {
        hi_m += BigInt::from(2);
    }
    let (l2, e2) = ln2_fixed(w);
    let kb = BigInt::from(k);
    LnInterval {
        lo: &kb * &l2 + &lm,
        hi: &kb * (&l2 + &e2) + hi_m,
        scale: w,
    }
}

/// Certified `ln r` for a positive rational.
pub fn ln_rat(r: &Rational, bits: u64) -> LnInterval {
    assert!(r.is_positive(), "ln of a non-positive rational");
    let a = ln_int(r.numer(), bits);
    let b = ln_int(r.denom(), bits);
    let w = a.scale.max(b.scale);
    align(&a, w).sub(&align(&b, w))
}

/// Re-expresses an interval at a finer scale (exact).
pub fn align(a: &LnInterval, w: u64) -> LnInterval {
    assert!(w >= a.scale);
    let s = w - a.scale;
    LnInterval {
        lo: &a.lo << s,
        hi: &a.hi << s,
        scale: w,
    }
}

/// Certified bounds of `num / den` for intervals with `den > 0`, as rationals.
pub fn ratio_bounds(num: &LnInterval, den: &LnInterval) -> Option<(Rational, Rational)> {
    let w = num.scale.max(den.scale);
    let n = align(num, w);
    let d = align(den, w);
    if !d.lo.is_positive() {
        return None;
    }
    let pick = |a: &BigInt, b: &BigInt| Rational::new(a.clone(), b.clone());
    let lo = if n.lo.is_negative() {
        pick(&n.lo, &d.lo)
    } else {
        pick(&n.lo, &d.hi)
    };
    let hi = if n.hi.is_negative() {
        pick(&n.hi, &d.hi)
    } else {
        pick(&n.hi, &d.lo)
    };
    Some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    #[test]
    fn ln2_and_ln3_enclose_known_values() {
        let l2 = ln_int(&int(2), 80);
        assert!(rat_to_f64(&l2.lo_rat()) <= std::f64::consts::LN_2 + 1e-15);
        assert!(rat_to_f64(&l2.hi_rat()) >= std::f64::consts::LN_2 - 1e-15);
        let l3 = ln_int(&int(3), 80);
        let w = &l3.hi - &l3.lo;
        assert!(w.bits() < l3.scale - 70);
        assert!((l3.mid_f64() - 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn ln_of_huge_power_is_exact_multiple() {
        let x = pow2(70000) * BigInt::from(3);
        let l = ln_int(&x, 64);
        let expect = 70000.0 * std::f64::consts::LN_2 + 3f64.ln();
        assert!((l.mid_f64() - expect).abs() / expect < 1e-14);
        assert!(rat_to_f64(&l.lo_rat()) <= expect * (1.0 + 1e-15));
    }

    #[test]
    fn ln_rational_sign() {
        let l = ln_rat(&rat(1, 1000), 64);
        assert!((l.mid_f64() + 1000f64.ln()).abs() < 1e-12);
        assert!(l.lo <= l.hi);
    }

    #[test]
    fn ratio_of_logs() {
        let a = ln_int(&int(3), 64);
        let b = ln_int(&int(2), 64);
        let (lo, hi) = ratio_bounds(&a, &b).unwrap();
        let v = 3f64.log2();
        assert!(rat_to_f64(&lo) <= v && v <= rat_to_f64(&hi));
    }
}
