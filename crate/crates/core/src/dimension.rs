//! Closed-form dimension values and template contraction rates.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    common_decimal_prefix, format_rational, isqrt, rat, rat_to_f64, serde_rational, Rational,
};

/// Decimal digits carried for irrational constants.
pub const DIGITS: usize = 64;

/// A dimension value with its exact form and a certified decimal expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimValue {
    pub value: f64,
    pub exact: String,
    pub decimal: String,
}

impl DimValue {
    fn rational(r: &Rational) -> DimValue {
        DimValue {
            value: rat_to_f64(r),
            exact: format_rational(r),
            decimal: common_decimal_prefix(r, r, DIGITS),
        }
    }

    /// `a + b sqrt(k)` with rational `a`, `b`.
    fn surd(a: &Rational, b: &Rational, k: u64, exact: String) -> DimValue {
        let (lo, hi) = sqrt_bounds(k, DIGITS + 8);
        let (x, y) = (a + b * &lo, a + b * &hi);
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        DimValue {
            value: rat_to_f64(&((&lo + &hi) / rat(2, 1))),
            exact,
            decimal: common_decimal_prefix(&lo, &hi, DIGITS),
        }
    }
}

/// `sqrt(k)` in `[s, s + 10^-digits]`.
fn sqrt_bounds(k: u64, digits: usize) -> (Rational, Rational) {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let s = isqrt(&(BigInt::from(k) * &scale * &scale));
    let lo = Rational::new(s.clone(), scale.clone());
    let hi = Rational::new(s + 1, scale);
    (lo, hi)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaDims {
    pub n: usize,
    pub hausdorff: DimValue,
    pub packing: DimValue,
}

/// Hausdorff and packing dimension of the set of `ξ ∈ R^n` with `R(ξ) <= 3`.
pub fn gamma_dims(n: usize) -> Result<GammaDims> {
    if n < 3 {
        return Err(Error::Unsupported(
            "n < 3: the complement of the set is a countable union of rational hyperplanes".into(),
        ));
    }
    let hausdorff = if n == 3 {
        DimValue::surd(&rat(17, 8), &rat(-1, 8), 13, "(17-sqrt(13))/8".into())
    } else {
        DimValue::rational(&(rat(n as i64 - 2, 1) + rat(2, n as i64)))
    };
    Ok(GammaDims {
        n,
        hausdorff,
        packing: DimValue::rational(&rat(n as i64 - 1, 1)),
    })
}

/// `2/w` for `w >= 2 + sqrt(2)`; `w = inf` gives 0.
pub fn v_of_w(w: f64) -> Result<f64> {
    let edge = 2.0 + std::f64::consts::SQRT_2;
    if w.is_nan() || w < edge * (1.0 - 4.0 * f64::EPSILON) {
        return Err(Error::Unsupported(format!("w = {w} is below 2+sqrt(2)")));
    }
    Ok(if w.is_infinite() { 0.0 } else { 2.0 / w })
}

/// `g(τ) = (τ² - (nτ+1)/2) / ((τ²-1)(nτ+1)/2)`.
pub fn taurin_integrand(n: usize, tau: &Rational) -> Rational {
    let half = (rat(n as i64, 1) * tau + rat(1, 1)) / rat(2, 1);
    let t2 = tau * tau;
    (&t2 - &half) / ((&t2 - rat(1, 1)) * half)
}

fn taurin_f64(n: usize, t: f64) -> f64 {
    let h = (n as f64 * t + 1.0) / 2.0;
    (t * t - h) / ((t * t - 1.0) * h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaBounds {
    pub n: usize,
    pub w: f64,
    /// `n - 2 + 1/(w² + 1)`.
    pub simple: f64,
    /// `n - 2 + g(τ*)` at the rational maximizer found; a valid lower bound as is.
    pub taurin: DimValue,
    #[serde(with = "serde_rational")]
    pub tau_star: Rational,
    pub tail_checked: bool,
}

/// Golden-section tolerance on `τ`.
pub const TAURIN_TOL: f64 = 1e-8;

/// Maximizer of `g` over `τ > n`: golden section on `[n, 10n]`, rounded to a
/// dyadic rational. The flag records that `g` at `10n·2^k`, `k < 5`, stays below.
pub fn taurin_argmax(n: usize) -> (Rational, bool) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (n as f64, 10.0 * n as f64);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    while b - a > TAURIN_TOL {
        if taurin_f64(n, c) > taurin_f64(n, d) {
            b = d;
        } else {
            a = c;
        }
        c = b - phi * (b - a);
        d = a + phi * (b - a);
    }
    let t = Rational::from_float((a + b) / 2.0).expect("finite");
    let scale = Rational::from_integer(BigInt::one() << 40u32);
    let t = (t * &scale).round() / scale;
    let gt = taurin_integrand(n, &t);
    let tail_ok = [1i64, 2, 4, 8, 16]
        .iter()
        .all(|k| taurin_integrand(n, &rat(10 * k * n as i64, 1)) < gt);
    (t, tail_ok)
}

pub fn theta_lower_bounds(n: usize, w: f64) -> Result<ThetaBounds> {
    if n < 2 || w.is_nan() || w < n as f64 {
        return Err(Error::InvalidArgument("need n >= 2 and w >= n".into()));
    }
    let (tau_star, tail_checked) = taurin_argmax(n);
    let v = rat(n as i64 - 2, 1) + taurin_integrand(n, &tau_star);
    Ok(ThetaBounds {
        n,
        w,
        simple: n as f64 - 2.0 + 1.0 / (w * w + 1.0),
        taurin: DimValue {
            value: rat_to_f64(&v),
            exact: format!("n-2+g({})", format_rational(&tau_star)),
            decimal: common_decimal_prefix(&v, &v, 20),
        },
        tau_star,
        tail_checked,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiscBounds {
    pub n: usize,
    pub k: usize,
    /// Upper bound `7/5` for the Hausdorff dimension in the plane (`n = 2` only).
    #[serde(with = "crate::numeric::serde_opt_rational")]
    pub theta2_upper: Option<Rational>,
    /// `n - 1 + k/(n+1)`.
    #[serde(with = "serde_rational")]
    pub y_bound: Rational,
    /// `jarnik(4) = 2/5`.
    #[serde(with = "serde_rational")]
    pub jarnik_at_4: Rational,
}

/// Dimension `2/(w+1)` of the reals with ordinary exponent at least `w`.
pub fn jarnik(w: &Rational) -> Rational {
    rat(2, 1) / (w + rat(1, 1))
}

pub fn misc_bounds(n: usize, k: usize) -> Result<MiscBounds> {
    if n < 2 || k < 2 || k > n {
        return Err(Error::InvalidArgument("need n >= 2 and 2 <= k <= n".into()));
    }
    Ok(MiscBounds {
        n,
        k,
        theta2_upper: (n == 2).then(|| rat(1, 1) + jarnik(&rat(4, 1))),
        y_bound: rat(n as i64 - 1, 1) + rat(k as i64, n as i64 + 1),
        jarnik_at_4: jarnik(&rat(4, 1)),
    })
}

/// `1/(τ²+1)`.
pub fn sun_dimension(tau: &Rational) -> Result<Rational> {
    if tau <= &rat(1, 1) {
        return Err(Error::InvalidArgument("need tau > 1".into()));
    }
    Ok(rat(1, 1) / (tau * tau + rat(1, 1)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateSpec {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    #[serde(with = "serde_rational")]
    pub eps: Rational,
}

impl TemplateSpec {
    /// Breakpoints of one period divided by `t_j`: `1, (nτ+1+ε)/2, nτ+ε, τ²`.
    pub fn breakpoints(&self) -> [Rational; 4] {
        let nt = rat(self.n as i64, 1) * &self.tau + &self.eps;
        [
            rat(1, 1),
            (&nt + rat(1, 1)) / rat(2, 1),
            nt,
            &self.tau * &self.tau,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let [one, a, c, b] = self.breakpoints();
        if self.eps.is_negative() {
            return Err(Error::InvalidTemplate("eps < 0".into()));
        }
        if !(one < a && a < c && c < b) {
            return Err(Error::InvalidTemplate(format!(
                "breakpoints not increasing: 1, {}, {}, {}",
                format_rational(&a),
                format_rational(&c),
                format_rational(&b)
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalRate {
    /// Interval endpoints divided by `t_j`.
    #[serde(with = "serde_rational")]
    pub from: Rational,
    #[serde(with = "serde_rational")]
    pub to: Rational,
    pub slope_f1: i32,
    pub rate: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionResult {
    /// Scanned liminf of the running average of the local contraction rate.
    pub delta_lower: f64,
    /// Scanned limsup.
    pub delta_upper: f64,
    /// Exact limits of the scan, `(b-a)/((b-1)a)` and `(b-a)/(b-1)` with `a = (nτ+1+ε)/2`, `b = τ²`.
    #[serde(with = "serde_rational")]
    pub closed_lower: Rational,
    #[serde(with = "serde_rational")]
    pub closed_upper: Rational,
    /// The stated packing limit `(τ² - (nτ+1)/2)/(τ² - τ)`.
    #[serde(with = "serde_rational")]
    pub stated_upper: Rational,
    pub rates: Vec<IntervalRate>,
}

/// Periods simulated by the scan; the last three are measured.
pub const SCAN_PERIODS: usize = 12;
/// Sample points per period, in addition to the breakpoints.
pub const SCAN_SAMPLES: usize = 10_000;

pub fn template_rates(spec: &TemplateSpec) -> Result<ContractionResult> {
    spec.validate()?;
    let [_, a, c, b] = spec.breakpoints();
    let rates = vec![
        IntervalRate {
            from: rat(1, 1),
            to: a.clone(),
            slope_f1: -1,
            rate: 0,
        },
        IntervalRate {
            from: a.clone(),
            to: c.clone(),
            slope_f1: 1,
            rate: 1,
        },
        IntervalRate {
            from: c.clone(),
            to: b.clone(),
            slope_f1: 0,
            rate: 1,
        },
    ];
    // running average A(x t_j) = (I(t_j)/t_j + ∫_1^x rate) / x on one period;
    // I(t_{j+1})/t_{j+1} = (I(t_j)/t_j + (b - a)) / b
    let (af, bf, cf) = (rat_to_f64(&a), rat_to_f64(&b), rat_to_f64(&c));
    let integral = |x: f64| -> f64 {
        rates
            .iter()
            .map(|r| {
                let (lo, hi) = (rat_to_f64(&r.from), rat_to_f64(&r.to));
                r.rate as f64 * (x.min(hi) - lo).max(0.0)
            })
            .sum()
    };
    let mut xs: Vec<f64> = (0..=SCAN_SAMPLES)
        .map(|i| bf.powf(i as f64 / SCAN_SAMPLES as f64))
        .collect();
    xs.extend([1.0, af, cf, bf]);
    let mut carry = 0.0f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in 0..SCAN_PERIODS {
        if p + 3 >= SCAN_PERIODS {
            for &x in &xs {
                let v = (carry + integral(x)) / x;
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        carry = (carry + integral(bf)) / bf;
    }
    let one = rat(1, 1);
    let closed_lower = (&b - &a) / ((&b - &one) * &a);
    let closed_upper = (&b - &a) / (&b - &one);
    let half = (rat(spec.n as i64, 1) * &spec.tau + &one) / rat(2, 1);
    let stated_upper = (&b - &half) / (&b - &spec.tau);
    Ok(ContractionResult {
        delta_lower: lo,
        delta_upper: hi,
        closed_lower,
        closed_upper,
        stated_upper,
        rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        let g = gamma_dims(3).unwrap();
        assert!(g.hausdorff.decimal.starts_with("1.6743"));
        assert_eq!(g.packing.value, 2.0);
        assert_eq!(gamma_dims(4).unwrap().hausdorff.value, 2.5);
        assert_eq!(gamma_dims(10).unwrap().hausdorff.exact, "41/5");
        assert!(matches!(gamma_dims(2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn v_of_w_values() {
        assert_eq!(v_of_w(4.0).unwrap(), 0.5);
        assert!((v_of_w(2.0 + 2f64.sqrt()).unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(v_of_w(f64::INFINITY).unwrap(), 0.0);
        assert!(v_of_w(3.0).is_err());
    }

    #[test]
    fn taurin_at_n() {
        assert_eq!(taurin_integrand(3, &rat(3, 1)), rat(1, 10));
    }

    #[test]
    fn misc_values() {
        let m = misc_bounds(2, 2).unwrap();
        assert_eq!(m.y_bound, rat(5, 3));
        assert_eq!(m.theta2_upper, Some(rat(7, 5)));
        assert_eq!(m.jarnik_at_4, rat(2, 5));
        assert_eq!(misc_bounds(5, 3).unwrap().y_bound, rat(9, 2));
        assert_eq!(sun_dimension(&rat(2, 1)).unwrap(), rat(1, 5));
        assert_eq!(sun_dimension(&rat(3, 1)).unwrap(), rat(1, 10));
    }

    #[test]
    fn degenerate_template() {
        let s = TemplateSpec {
            n: 3,
            tau: rat(3, 1),
            eps: rat(0, 1),
        };
        assert!(matches!(template_rates(&s), Err(Error::InvalidTemplate(_))));
    }
}
