//! Floating point with an `f64` mantissa and a wide exponent, for Gram–Schmidt
//! data of lattices whose entries have far more than 1024 bits.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use std::cmp::Ordering;

/// `m * 2^e` with `m = 0` or `0.5 <= |m| < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XFloat {
    m: f64,
    e: i64,
}

fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    if exp == 0 {
        let (f, e) = frexp(x * 2f64.powi(64));
        return (f, e - 64);
    }
    let f = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (f, exp - 1022)
}

#[allow(clippy::should_implement_trait)]
impl XFloat {
    pub const ZERO: XFloat = XFloat { m: 0.0, e: 0 };

    fn norm(m: f64, e: i64) -> XFloat {
        if m == 0.0 {
            return XFloat::ZERO;
        }
        let (f, k) = frexp(m);
        XFloat { m: f, e: e + k }
    }

    /// `m * 2^s`.
    pub fn from_mant_shift(m: i64, s: u64) -> XFloat {
        XFloat::norm(m as f64, s as i64)
    }

    pub fn from_f64(x: f64) -> XFloat {
        XFloat::norm(x, 0)
    }

    pub fn from_bigint(x: &BigInt) -> XFloat {
        let b = x.bits();
        if b <= 960 {
            return XFloat::norm(x.to_f64().expect("finite"), 0);
        }
        let s = b - 64;
        let top = (x.abs() >> s).to_f64().expect("finite");
        let v = XFloat::norm(top, s as i64);
        if x.is_negative() {
            v.neg()
        } else {
            v
        }
    }

    pub fn is_zero(self) -> bool {
        self.m == 0.0
    }

    pub fn neg(self) -> XFloat {
        XFloat {
            m: -self.m,
            e: self.e,
        }
    }

    pub fn abs(self) -> XFloat {
        XFloat {
            m: self.m.abs(),
            e: self.e,
        }
    }

    pub fn mul(self, o: XFloat) -> XFloat {
        XFloat::norm(self.m * o.m, self.e + o.e)
    }

    pub fn div(self, o: XFloat) -> XFloat {
        assert!(!o.is_zero(), "XFloat division by zero");
        XFloat::norm(self.m / o.m, self.e - o.e)
    }

    pub fn add(self, o: XFloat) -> XFloat {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let d = self.e - o.e;
        if d > 64 {
            return self;
        }
        if d < -64 {
            return o;
        }
        if d >= 0 {
            XFloat::norm(self.m + o.m * 2f64.powi(-d as i32), self.e)
        } else {
            XFloat::norm(self.m * 2f64.powi(d as i32) + o.m, o.e)
        }
    }

    pub fn sub(self, o: XFloat) -> XFloat {
        self.add(o.neg())
    }

    /// Multiplication by a small factor.
    pub fn scale(self, f: f64) -> XFloat {
        XFloat::norm(self.m * f, self.e)
    }

    /// `log2 |x|`, `-inf` for zero.
    pub fn log2(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.m.abs().log2() + self.e as f64
        }
    }

    pub fn cmp_abs(self, o: XFloat) -> Ordering {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        self.e
            .cmp(&o.e)
            .then(self.m.abs().partial_cmp(&o.m.abs()).expect("finite"))
    }

    pub fn lt(self, o: XFloat) -> bool {
        self.sub(o).m < 0.0
    }

    /// Nearest integer as `mant * 2^shift`; exact below `2^53`, 53 leading bits above.
    pub fn round_int(self) -> (i64, u64) {
        if self.is_zero() || self.e < 0 {
            return (0, 0);
        }
        if self.e <= 53 {
            return ((self.m * 2f64.powi(self.e as i32)).round() as i64, 0);
        }
        ((self.m * 2f64.powi(53)) as i64, (self.e - 53) as u64)
    }
}

/// `x * m * 2^s` without forming the big multiplier.
pub fn mul_shift(x: &BigInt, m: i64, s: u64) -> BigInt {
    (x * m) << s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_arithmetic() {
        let big = BigInt::from(3) << 5000u32;
        let x = XFloat::from_bigint(&big);
        assert!((x.log2() - (5000.0 + 3f64.log2())).abs() < 1e-9);
        let y = x.div(XFloat::from_bigint(&(BigInt::from(1) << 4999u32)));
        assert_eq!(y.round_int(), (6, 0));
        let z = XFloat::from_f64(2.5).sub(XFloat::from_f64(0.75));
        assert!((z.log2() - 1.75f64.log2()).abs() < 1e-12);
        let (m, s) = x.round_int();
        assert_eq!(s, 5002 - 53);
        assert_eq!(mul_shift(&BigInt::from(1), m, s), big);
        assert!(m > 0);
    }
}
