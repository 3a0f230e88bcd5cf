//! Exact integer and rational helpers shared by every module.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// `2^k` as an integer.
pub fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// Floor of `a / b` for `b > 0`.
pub fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

/// Ceiling of `a / b` for `b > 0`.
pub fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Nearest integer to `a / b` for `b > 0`, halves rounded up.
pub fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * two))
}

/// Floor of a rational.
pub fn floor_rat(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Ceiling of a rational.
pub fn ceil_rat(r: &Rational) -> BigInt {
    ceil_div(r.numer(), r.denom())
}

/// `floor(x^(1/k))` for `x >= 0`.
pub fn iroot(x: &BigInt, k: u32) -> BigInt {
    assert!(!x.is_negative(), "iroot of a negative integer");
    let u = x.magnitude();
    BigInt::from_biguint(Sign::Plus, u.nth_root(k))
}

pub fn isqrt(x: &BigInt) -> BigInt {
    iroot(x, 2)
}

/// Number of bits of `|x|` (0 for zero).
pub fn bit_len(x: &BigInt) -> u64 {
    x.bits()
}

/// Smallest `k >= 0` with `2^k >= x`, for `x >= 1`.
pub fn ceil_log2(x: &BigInt) -> u64 {
    if x <= &BigInt::one() {
        return 0;
    }
    let b = x.bits();
    if (x - BigInt::one()).bits() < b {
        b - 1
    } else {
        b
    }
}

/// The dyadic rational `num / 2^bits`, reduced without a general gcd.
pub fn dyadic(num: BigInt, bits: u64) -> Rational {
    if num.is_zero() {
        return Rational::zero();
    }
    let tz = num.trailing_zeros().unwrap_or(0).min(bits);
    let n = num >> tz;
    Rational::new_raw(n, pow2(bits - tz))
}

/// Builds `num / den` when every prime factor of `den` is known, avoiding a big gcd.
pub fn reduce_known(mut num: BigInt, mut den: BigInt, primes: &[u64]) -> Rational {
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    if num.is_zero() {
        return Rational::zero();
    }
    for &p in primes {
        if p == 2 {
            let t = num
                .trailing_zeros()
                .unwrap_or(0)
                .min(den.trailing_zeros().unwrap_or(0));
            if t > 0 {
                num >>= t;
                den >>= t;
            }
            continue;
        }
        let pb = BigInt::from(p);
        loop {
            let (qd, rd) = den.div_rem(&pb);
            if !rd.is_zero() {
                break;
            }
            let (qn, rn) = num.div_rem(&pb);
            if !rn.is_zero() {
                break;
            }
            num = qn;
            den = qd;
        }
    }
    Rational::new_raw(num, den)
}

/// Small prime factors of `x` found by trial division up to `limit`, with the cofactor.
pub fn trial_factor(x: &BigUint, limit: u64) -> (Vec<u64>, BigUint) {
    let mut rest = x.clone();
    let mut found = Vec::new();
    if rest.is_zero() {
        return (found, rest);
    }
    let mut p = 2u64;
    while p <= limit {
        let pb = BigUint::from(p);
        if (&rest % &pb).is_zero() {
            found.push(p);
            while (&rest % &pb).is_zero() {
                rest /= &pb;
            }
        }
        if rest.is_one() {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (found, rest)
}

pub fn is_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let r = isqrt(x);
    &r * &r == *x
}

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    let mut c = 2u64;
    while out.len() < k {
        if out.iter().all(|&p| !c.is_multiple_of(p)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Parses `p/q`, an integer, a decimal such as `2.5` or scientific notation such as `1e-6`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((a, b)) = t.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// `p/q` or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest `f64` to a rational, also for numerators and denominators far outside the `f64` range.
pub fn rat_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (r.numer() << shift as u64).div_floor(r.denom())
    } else {
        r.numer().div_floor(&(r.denom() << (-shift) as u64))
    };
    let m = scaled.to_f64().unwrap_or(f64::NAN);
    ldexp(m, -shift)
}

/// `log2` of a positive rational, accurate to about 1e-15 relative in the mantissa.
pub fn log2_rat(r: &Rational) -> f64 {
    if !r.is_positive() {
        return f64::NEG_INFINITY;
    }
    let e = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if e >= 0 {
        Rational::new(r.numer().clone(), r.denom() << e as u64)
    } else {
        Rational::new(r.numer() << (-e) as u64, r.denom().clone())
    };
    rat_to_f64(&scaled).log2() + e as f64
}

/// `x * 2^k` without intermediate overflow for moderate `k`.
pub fn ldexp(x: f64, k: i64) -> f64 {
    let mut x = x;
    let mut k = k;
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

/// Exact rational value of a finite `f64`.
pub fn rat_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Certified decimal rendering of a value known to lie in `[lo, hi]`: returns the
/// digits on which both endpoints agree when truncated, up to `digits` places.
pub fn common_decimal_prefix(lo: &Rational, hi: &Rational, digits: usize) -> String {
    let a = decimal_truncate(lo, digits);
    let b = decimal_truncate(hi, digits);
    let mut out = String::new();
    for (x, y) in a.chars().zip(b.chars()) {
        if x != y {
            break;
        }
        out.push(x);
    }
    out
}

/// Decimal expansion of `r` truncated towards negative infinity to `digits` places.
pub fn decimal_truncate(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let v = floor_rat(&(r * Rational::from_integer(scale.clone())));
    let neg = v.is_negative();
    let (ip, fp) = v.abs().div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&ip.to_string());
    if digits > 0 {
        s.push('.');
        let f = fp.to_string();
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

pub fn to_strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn parse_int_vec(v: &[String]) -> Result<Vec<BigInt>, Error> {
    v.iter()
        .map(|s| {
            s.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
        })
        .collect()
}

/// Parses a comma separated integer vector such as `2,0,-1`.
pub fn parse_int_list(s: &str) -> Result<Vec<BigInt>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("not an integer: {p:?}")))
        })
        .collect()
}

pub fn int_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) mod serde_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_opt_rational {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(format_rational).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub(crate) mod serde_bigint {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| s.trim().parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod serde_bigint_mat {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = v
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| {
                r.iter()
                    .map(|s| s.trim().parse().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("5/2").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("2.5").unwrap(), rat(5, 2));
        assert_eq!(parse_rational("1e-6").unwrap(), rat(1, 1_000_000));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3, 1));
        assert_eq!(parse_rational("-.25").unwrap(), rat(-1, 4));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn rounding_helpers() {
        assert_eq!(round_div(&int(7), &int(2)), int(4));
        assert_eq!(round_div(&int(-7), &int(2)), int(-3));
        assert_eq!(ceil_div(&int(-7), &int(2)), int(-3));
        assert_eq!(floor_div(&int(-7), &int(2)), int(-4));
        assert_eq!(ceil_log2(&int(1024)), 10);
        assert_eq!(ceil_log2(&int(1025)), 11);
    }

    #[test]
    fn dyadic_and_known_reduction_agree_with_gcd() {
        let r = dyadic(int(12), 5);
        assert_eq!(r, rat(3, 8));
        let r = reduce_known(int(18), int(12), &[2, 3]);
        assert_eq!(r, rat(3, 2));
        assert_eq!(r.numer(), &int(3));
    }

    #[test]
    fn f64_conversion_of_tiny_values() {
        let r = dyadic(int(3), 5000);
        let x = rat_to_f64(&r);
        assert_eq!(x, 0.0);
        let r = Rational::new(int(1), int(3));
        assert!((rat_to_f64(&r) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal_truncate(&rat(1, 3), 4), "0.3333");
        assert_eq!(
            common_decimal_prefix(&rat(1, 3), &rat(3334, 10000), 6),
            "0.333"
        );
    }
}
