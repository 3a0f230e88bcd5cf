//! Refinable exact enclosures of real numbers and certified evaluation of
//! integer linear forms `q·(ξ,1)`.
//!
//! Two views are offered. [`enclose`] returns exact rational intervals in
//! lowest terms. Internally, hot paths use [`FixedInterval`]s, dyadic
//! intervals on a `2^-bits` grid that avoid big gcd computations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{
    ceil_div, ceil_log2, ceil_rat, dyadic, floor_div, format_rational, is_square, isqrt,
    parse_rational, pow2, rat_to_f64, reduce_known, trial_factor, Rational,
};
use crate::schedule::{power_at_least_pow2, ChainSchedule};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "enclosure with lo {} > hi {}",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Enclosure { lo, hi })
    }

    pub fn point(v: Rational) -> Self {
        Enclosure {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Strictly separated intervals.
    pub fn disjoint(&self, other: &Enclosure) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    /// Enclosure of `|x|` for `x` in this interval.
    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Enclosure {
                lo: -&self.hi,
                hi: -&self.lo,
            }
        } else {
            let m = if -&self.lo > self.hi {
                -&self.lo
            } else {
                self.hi.clone()
            };
            Enclosure {
                lo: Rational::zero(),
                hi: m,
            }
        }
    }

    pub fn mid_f64(&self) -> f64 {
        (rat_to_f64(&self.lo) + rat_to_f64(&self.hi)) / 2.0
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

impl Serialize for Enclosure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Enclosure", 2)?;
        st.serialize_field("lo", &format_rational(&self.lo))?;
        st.serialize_field("hi", &format_rational(&self.hi))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Enclosure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lo: String,
            hi: String,
        }
        let r = Raw::deserialize(d)?;
        let lo = parse_rational(&r.lo).map_err(serde::de::Error::custom)?;
        let hi = parse_rational(&r.hi).map_err(serde::de::Error::custom)?;
        Enclosure::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Dyadic interval `[lo, hi] / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u64,
}

impl FixedInterval {
    pub fn exact_int(v: BigInt, bits: u64) -> Self {
        let x = v << bits;
        FixedInterval {
            lo: x.clone(),
            hi: x,
            bits,
        }
    }

    /// Outward rounding to a coarser grid.
    pub fn coarsen(&self, bits: u64) -> FixedInterval {
        if bits >= self.bits {
            let s = bits - self.bits;
            return FixedInterval {
                lo: &self.lo << s,
                hi: &self.hi << s,
                bits,
            };
        }
        let s = self.bits - bits;
        let d = pow2(s);
        FixedInterval {
            lo: floor_div(&self.lo, &d),
            hi: ceil_div(&self.hi, &d),
            bits,
        }
    }

    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn to_enclosure(&self) -> Enclosure {
        Enclosure {
            lo: dyadic(self.lo.clone(), self.bits),
            hi: dyadic(self.hi.clone(), self.bits),
        }
    }

    /// Interval of `|x|`.
    pub fn abs(&self) -> FixedInterval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            FixedInterval {
                lo: -&self.hi,
                hi: -&self.lo,
                bits: self.bits,
            }
        } else {
            let m = if -&self.lo > self.hi {
                -&self.lo
            } else {
                self.hi.clone()
            };
            FixedInterval {
                lo: BigInt::zero(),
                hi: m,
                bits: self.bits,
            }
        }
    }

    /// Whether every point of `self` is strictly below every point of `other`.
    pub fn below(&self, other: &FixedInterval) -> bool {
        let b = self.bits.max(other.bits);
        (&self.hi << (b - self.bits)) < (&other.lo << (b - other.bits))
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }
}

/// Continuation of a continued fraction after its explicit prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CfTail {
    Terminate,
    Periodic(Vec<BigInt>),
}

/// Continued fraction `[a_0; a_1, a_2, ...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub quotients: Vec<BigInt>,
    pub tail: CfTail,
}

impl ContinuedFraction {
    fn quotient(&self, j: usize) -> Option<BigInt> {
        if j < self.quotients.len() {
            return Some(self.quotients[j].clone());
        }
        match &self.tail {
            CfTail::Terminate => None,
            CfTail::Periodic(p) => Some(p[(j - self.quotients.len()) % p.len()].clone()),
        }
    }
}

/// `(p + sqrt(q)) / r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
}

/// Generator of further exponents of a lacunary series from an exponent chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LacunarySchedule {
    #[serde(flatten)]
    pub chain: ChainSchedule,
    pub index: usize,
}

/// `Σ_t base^{-e_t}`; infinite when a schedule is attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LacunarySeries {
    pub base: u64,
    pub exponents: Vec<u64>,
    pub schedule: Option<LacunarySchedule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceKind {
    Rational(Rational),
    Lacunary(LacunarySeries),
    ContinuedFraction(ContinuedFraction),
    Quadratic(QuadraticSurd),
}

#[derive(Default)]
struct SourceCache {
    fixed: BTreeMap<u64, Arc<FixedInterval>>,
    exponents: Vec<u64>,
    convergents: Vec<(BigInt, BigInt)>,
}

const FIXED_CACHE_ENTRIES: usize = 24;

/// A real number that can be enclosed to any requested width.
pub struct RealSource {
    kind: SourceKind,
    cache: Mutex<SourceCache>,
}

impl Clone for RealSource {
    fn clone(&self) -> Self {
        RealSource::from_valid(self.kind.clone())
    }
}

impl fmt::Debug for RealSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealSource")
            .field("kind", &self.kind)
            .finish()
    }
}

impl PartialEq for RealSource {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl RealSource {
    fn from_valid(kind: SourceKind) -> Self {
        let mut cache = SourceCache::default();
        if let SourceKind::Lacunary(l) = &kind {
            cache.exponents = l.exponents.clone();
        }
        RealSource {
            kind,
            cache: Mutex::new(cache),
        }
    }

    /// Validates and wraps a source description.
    pub fn new(kind: SourceKind) -> Result<Self> {
        match &kind {
            SourceKind::Rational(_) => {}
            SourceKind::Lacunary(l) => validate_lacunary(l)?,
            SourceKind::ContinuedFraction(c) => {
                if c.quotients.is_empty() {
                    return Err(Error::InvalidArgument(
                        "continued fraction needs a_0".into(),
                    ));
                }
                if c.quotients[1..].iter().any(|a| a < &BigInt::one()) {
                    return Err(Error::InvalidArgument(
                        "partial quotients a_j, j >= 1, must be >= 1".into(),
                    ));
                }
                if let CfTail::Periodic(p) = &c.tail {
                    if p.is_empty() || p.iter().any(|a| a < &BigInt::one()) {
                        return Err(Error::InvalidArgument(
                            "periodic tail must be nonempty with entries >= 1".into(),
                        ));
                    }
                }
            }
            SourceKind::Quadratic(s) => {
                if !s.q.is_positive() || is_square(&s.q) {
                    return Err(Error::InvalidArgument(
                        "quadratic source needs a positive non-square q".into(),
                    ));
                }
                if s.r.is_zero() {
                    return Err(Error::InvalidArgument("quadratic source with r = 0".into()));
                }
            }
        }
        Ok(RealSource::from_valid(kind))
    }

    pub fn rational(v: Rational) -> Self {
        RealSource::from_valid(SourceKind::Rational(v))
    }

    pub fn quadratic(p: i64, q: i64, r: i64) -> Result<Self> {
        RealSource::new(SourceKind::Quadratic(QuadraticSurd {
            p: BigInt::from(p),
            q: BigInt::from(q),
            r: BigInt::from(r),
        }))
    }

    /// `(sqrt 5 - 1) / 2`.
    pub fn golden_fraction() -> Self {
        RealSource::quadratic(-1, 5, 2).expect("valid surd")
    }

    pub fn lacunary(
        base: u64,
        exponents: Vec<u64>,
        schedule: Option<LacunarySchedule>,
    ) -> Result<Self> {
        RealSource::new(SourceKind::Lacunary(LacunarySeries {
            base,
            exponents,
            schedule,
        }))
    }

    pub fn continued_fraction(quotients: Vec<BigInt>, tail: CfTail) -> Result<Self> {
        RealSource::new(SourceKind::ContinuedFraction(ContinuedFraction {
            quotients,
            tail,
        }))
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    /// The exact value when the source is a rational number.
    pub fn exact_value(&self) -> Option<Rational> {
        match &self.kind {
            SourceKind::Rational(r) => Some(r.clone()),
            SourceKind::Lacunary(l) if l.schedule.is_none() => {
                let b = BigInt::from(l.base);
                let mut s = Rational::zero();
                for &e in &l.exponents {
                    s += Rational::new(BigInt::one(), num_traits::pow(b.clone(), e as usize));
                }
                Some(s)
            }
            SourceKind::ContinuedFraction(c) if c.tail == CfTail::Terminate => {
                let n = c.quotients.len();
                let (h, k) = self.convergent(n - 1).expect("finite expansion");
                Some(Rational::new(h, k))
            }
            _ => None,
        }
    }

    pub fn approx_f64(&self) -> f64 {
        let f = self.fixed(80);
        (rat_to_f64(&dyadic(f.lo.clone(), f.bits)) + rat_to_f64(&dyadic(f.hi.clone(), f.bits)))
            / 2.0
    }

    /// `t`-th exponent (0-based) of a lacunary source.
    fn lac_exponent(&self, l: &LacunarySeries, t: usize) -> Option<u64> {
        if t < l.exponents.len() {
            return Some(l.exponents[t]);
        }
        let sch = l.schedule.as_ref()?;
        let mut c = self.cache.lock().expect("cache lock");
        if t >= c.exponents.len() {
            let want = (t + 1).max(2 * c.exponents.len());
            c.exponents = sch.chain.coordinate(sch.index, want);
        }
        Some(c.exponents[t])
    }

    /// Convergent `h_j / k_j` of a continued-fraction source.
    fn convergent(&self, j: usize) -> Option<(BigInt, BigInt)> {
        let SourceKind::ContinuedFraction(cf) = &self.kind else {
            return None;
        };
        let mut c = self.cache.lock().expect("cache lock");
        while c.convergents.len() <= j {
            let i = c.convergents.len();
            let a = cf.quotient(i)?;
            let (h1, k1, h2, k2) = match i {
                0 => (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()),
                1 => {
                    let (h, k) = &c.convergents[0];
                    (h.clone(), k.clone(), BigInt::one(), BigInt::zero())
                }
                _ => {
                    let (h, k) = &c.convergents[i - 1];
                    let (hh, kk) = &c.convergents[i - 2];
                    (h.clone(), k.clone(), hh.clone(), kk.clone())
                }
            };
            c.convergents.push((&a * h1 + h2, &a * k1 + k2));
        }
        Some(c.convergents[j].clone())
    }

    /// Dyadic enclosure on the `2^-bits` grid. A pure function of `bits`.
    pub fn fixed(&self, bits: u64) -> Arc<FixedInterval> {
        let level = bits.div_ceil(64).max(1) * 64;
        {
            let c = self.cache.lock().expect("cache lock");
            if let Some(f) = c.fixed.get(&level) {
                if level == bits {
                    return f.clone();
                }
                return Arc::new(f.coarsen(bits));
            }
        }
        let f = Arc::new(self.compute_fixed(level));
        {
            let mut c = self.cache.lock().expect("cache lock");
            if c.fixed.len() >= FIXED_CACHE_ENTRIES {
                let first = *c.fixed.keys().next().expect("nonempty");
                c.fixed.remove(&first);
            }
            c.fixed.insert(level, f.clone());
        }
        if level == bits {
            f
        } else {
            Arc::new(f.coarsen(bits))
        }
    }

    fn compute_fixed(&self, bits: u64) -> FixedInterval {
        match &self.kind {
            SourceKind::Rational(r) => {
                let x = r.numer() << bits;
                FixedInterval {
                    lo: floor_div(&x, r.denom()),
                    hi: ceil_div(&x, r.denom()),
                    bits,
                }
            }
            SourceKind::Quadratic(s) => {
                let sq = isqrt(&(&s.q << (2 * bits)));
                let nl = (&s.p << bits) + &sq;
                let nh = &nl + BigInt::one();
                let (lo, hi) = if s.r.is_positive() {
                    (nl.div_floor(&s.r), ceil_signed(&nh, &s.r))
                } else {
                    (nh.div_floor(&s.r), ceil_signed(&nl, &s.r))
                };
                FixedInterval { lo, hi, bits }
            }
            SourceKind::Lacunary(l) => self.lacunary_fixed(l, bits),
            SourceKind::ContinuedFraction(_) => self.cf_fixed(bits),
        }
    }

    fn lacunary_fixed(&self, l: &LacunarySeries, bits: u64) -> FixedInterval {
        let one = pow2(bits);
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        let mut t = 0usize;
        loop {
            let Some(e) = self.lac_exponent(l, t) else {
                return FixedInterval { lo, hi, bits };
            };
            if power_at_least_pow2(l.base, e, bits + 1) {
                // tail < 2 / D_{t+1} <= 2^-bits
                return FixedInterval {
                    lo,
                    hi: hi + BigInt::one(),
                    bits,
                };
            }
            if l.base == 2 {
                let term = pow2(bits - e);
                lo += &term;
                hi += term;
            } else {
                let d = num_traits::pow(BigInt::from(l.base), e as usize);
                lo += one.div_floor(&d);
                hi += ceil_div(&one, &d);
            }
            t += 1;
        }
    }

    fn cf_fixed(&self, bits: u64) -> FixedInterval {
        let target = pow2(bits);
        let mut j = 0usize;
        loop {
            let (h, k) = self.convergent(j).expect("a_0 exists");
            match self.convergent(j + 1) {
                None => {
                    let x = &h << bits;
                    return FixedInterval {
                        lo: x.div_floor(&k),
                        hi: ceil_div(&x, &k),
                        bits,
                    };
                }
                Some((h2, k2)) => {
                    if &k * &k2 >= target {
                        let a = (&h << bits, k);
                        let b = (&h2 << bits, k2);
                        let (la, ha) = (a.0.div_floor(&a.1), ceil_div(&a.0, &a.1));
                        let (lb, hb) = (b.0.div_floor(&b.1), ceil_div(&b.0, &b.1));
                        return FixedInterval {
                            lo: la.min(lb),
                            hi: ha.max(hb),
                            bits,
                        };
                    }
                }
            }
            j += 1;
        }
    }

    /// Partial-sum enclosure `[S_j, S_j + 2/D_{j+1}]` of a lacunary source after `j` terms.
    pub fn partial_enclosure(&self, j: usize) -> Result<Enclosure> {
        let SourceKind::Lacunary(l) = &self.kind else {
            return Err(Error::InvalidArgument("not a lacunary source".into()));
        };
        Ok(self.lacunary_partial(l, j))
    }

    fn lacunary_partial(&self, l: &LacunarySeries, m: usize) -> Enclosure {
        let b = BigInt::from(l.base);
        let mut primes = vec![2u64];
        primes.extend(trial_factor(&num_bigint::BigUint::from(l.base), l.base).0);
        let (f, em) = if m == 0 {
            (BigInt::zero(), 0u64)
        } else {
            let em = self.lac_exponent(l, m - 1).expect("term exists");
            let mut f = BigInt::zero();
            for t in 0..m {
                let et = self.lac_exponent(l, t).expect("term exists");
                f += num_traits::pow(b.clone(), (em - et) as usize);
            }
            (f, em)
        };
        let dm = num_traits::pow(b.clone(), em as usize);
        let lo = if f.is_zero() {
            Rational::zero()
        } else {
            // F ≡ 1 (mod base), hence coprime to D_m
            Rational::new_raw(f.clone(), dm.clone())
        };
        match self.lac_exponent(l, m) {
            None => Enclosure::point(lo),
            Some(en) => {
                let num = &f * num_traits::pow(b.clone(), (en - em) as usize) + BigInt::from(2);
                let den = num_traits::pow(b, en as usize);
                let hi = reduce_known(num, den, &primes);
                Enclosure { lo, hi }
            }
        }
    }

    /// Enclosure of width at most `eps` (see [`enclose`]).
    pub fn enclose(&self, eps: &Rational) -> Result<Enclosure> {
        enclose(self, eps)
    }

    /// Number of explicitly stored exponents or quotients.
    pub fn prefix_len(&self) -> usize {
        match &self.kind {
            SourceKind::Lacunary(l) => l.exponents.len(),
            SourceKind::ContinuedFraction(c) => c.quotients.len(),
            _ => 0,
        }
    }

    /// Partial quotients of the continued fraction expansion that are
    /// certified by a dyadic enclosure at `bits`; stops early when undetermined.
    pub fn partial_quotients(&self, count: usize, bits: u64) -> Vec<BigInt> {
        if let Some(v) = self.exact_value() {
            return rational_cf(&v, count);
        }
        let f = self.fixed(bits);
        let mut lo = dyadic(f.lo.clone(), f.bits);
        let mut hi = dyadic(f.hi.clone(), f.bits);
        let mut out = Vec::new();
        while out.len() < count {
            let a = lo.floor();
            let b = hi.floor();
            if a != b || lo == a || hi == b {
                break;
            }
            out.push(a.to_integer());
            let nlo = (&hi - &b).recip();
            let nhi = (&lo - &a).recip();
            lo = nlo;
            hi = nhi;
        }
        out
    }
}

fn rational_cf(v: &Rational, count: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut x = v.clone();
    while out.len() < count {
        let a = x.floor();
        out.push(a.to_integer());
        let f = &x - &a;
        if f.is_zero() {
            break;
        }
        x = f.recip();
    }
    out
}

fn ceil_signed(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn validate_lacunary(l: &LacunarySeries) -> Result<()> {
    if l.base < 2 {
        return Err(Error::InvalidArgument("lacunary base must be >= 2".into()));
    }
    let mut exps = l.exponents.clone();
    if let Some(s) = &l.schedule {
        if s.index >= s.chain.k() {
            return Err(Error::InvalidArgument("schedule index out of range".into()));
        }
        if s.chain.primes[s.index] != l.base {
            return Err(Error::InvalidArgument(
                "schedule prime differs from the series base".into(),
            ));
        }
        let want = s.chain.coordinate(s.index, l.exponents.len() + 2);
        if want[..l.exponents.len()] != l.exponents[..] {
            return Err(Error::InvalidArgument(
                "exponent prefix disagrees with its schedule".into(),
            ));
        }
        exps = want;
    }
    if exps.is_empty() {
        return Err(Error::InvalidArgument(
            "lacunary series without terms".into(),
        ));
    }
    if exps[0] == 0 {
        return Err(Error::InvalidArgument(
            "lacunary exponents must be positive".into(),
        ));
    }
    for w in exps.windows(2) {
        // D_{t+1} > 2 D_t  <=>  base^(e_{t+1}-e_t) > 2
        if w[1] <= w[0] || !base_gap_ok(l.base, w[1] - w[0]) {
            return Err(Error::InvalidArgument(format!(
                "lacunary terms violate D_(j+1) > 2 D_j at exponents {} -> {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn base_gap_ok(base: u64, gap: u64) -> bool {
    (base as f64).powf(gap as f64) > 2.0 + 1e-9
}

/// A point `ξ ∈ ℝ^n` together with the implicit last coordinate 1.
#[derive(Clone, Debug)]
pub struct LinearFormTarget {
    coords: Vec<Arc<RealSource>>,
    exact: Option<Vec<Rational>>,
}

impl LinearFormTarget {
    pub fn new(coords: Vec<RealSource>) -> Result<Self> {
        LinearFormTarget::from_shared(coords.into_iter().map(Arc::new).collect())
    }

    pub fn from_shared(coords: Vec<Arc<RealSource>>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("target needs n >= 1".into()));
        }
        let exact: Option<Vec<Rational>> = coords.iter().map(|c| c.exact_value()).collect();
        Ok(LinearFormTarget { coords, exact })
    }

    pub fn rationals(values: &[Rational]) -> Self {
        LinearFormTarget::new(values.iter().cloned().map(RealSource::rational).collect())
            .expect("nonempty")
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Arc<RealSource>] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &RealSource {
        &self.coords[i]
    }

    /// Exact coordinates when every coordinate is rational.
    pub fn exact_values(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    /// Sub-target with the selected coordinates.
    pub fn select(&self, idx: &[usize]) -> Result<LinearFormTarget> {
        LinearFormTarget::from_shared(idx.iter().map(|&i| self.coords[i].clone()).collect())
    }

    pub fn spec(&self) -> TargetSpec {
        TargetSpec {
            n: self.n(),
            coords: self.coords.iter().map(|c| SourceSpec::from(&**c)).collect(),
        }
    }
}

/// Requested-accuracy enclosure of a source, width at most `eps`.
///
/// Calls with smaller `eps` return nested intervals.
pub fn enclose(source: &RealSource, eps: &Rational) -> Result<Enclosure> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    match &source.kind {
        SourceKind::Rational(r) => Ok(Enclosure::point(r.clone())),
        SourceKind::Lacunary(l) => {
            let k = ceil_log2(&ceil_rat(&eps.recip()));
            let mut m = 0usize;
            loop {
                match source.lac_exponent(l, m) {
                    None => break,
                    Some(e) if power_at_least_pow2(l.base, e, k + 1) => break,
                    Some(_) => m += 1,
                }
            }
            Ok(source.lacunary_partial(l, m))
        }
        SourceKind::Quadratic(s) => {
            let r_abs = s.r.abs();
            let need = ceil_rat(&(Rational::from_integer(r_abs) * eps).recip());
            let d = ceil_log2(&need.max(BigInt::one()));
            let sq = isqrt(&(&s.q << (2 * d)));
            let den = &s.r << d;
            let a = Rational::new((&s.p << d) + &sq, den.clone());
            let b = Rational::new((&s.p << d) + &sq + BigInt::one(), den);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            Ok(Enclosure { lo, hi })
        }
        SourceKind::ContinuedFraction(_) => {
            let mut j = 0usize;
            loop {
                let (h, k) = source.convergent(j).expect("a_0 exists");
                match source.convergent(j + 1) {
                    None => return Ok(Enclosure::point(Rational::new(h, k))),
                    Some((h2, k2)) => {
                        let w = Rational::new(BigInt::one(), &k * &k2);
                        if &w <= eps {
                            let a = Rational::new_raw(h, k);
                            let b = Rational::new_raw(h2, k2);
                            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                            return Ok(Enclosure { lo, hi });
                        }
                    }
                }
                j += 1;
            }
        }
    }
}

fn check_len(q: &[BigInt], target: &LinearFormTarget) -> Result<()> {
    if q.len() != target.n() + 1 {
        return Err(Error::InvalidArgument(format!(
            "vector of length {} for a target with n = {}",
            q.len(),
            target.n()
        )));
    }
    Ok(())
}

/// Enclosure of `q·ξ*` of width at most `eps`, together with the coordinate
/// enclosures it was computed from by exact interval arithmetic.
pub fn linear_form_enclose_detailed(
    q: &[BigInt],
    target: &LinearFormTarget,
    eps: &Rational,
) -> Result<(Enclosure, Vec<Enclosure>)> {
    check_len(q, target)?;
    if q.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidArgument("q must be nonzero".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let n = target.n();
    let s: BigInt = q[..n].iter().map(|x| x.abs()).sum();
    let ce = if s.is_zero() {
        eps.clone()
    } else {
        eps / Rational::from_integer(s)
    };
    let mut coords = Vec::with_capacity(n);
    for i in 0..n {
        coords.push(enclose(&target.coords[i], &ce)?);
    }
    Ok((interval_form(q, &coords), coords))
}

/// Exact interval evaluation of `q·(x,1)` for `x` in the given boxes.
pub fn interval_form(q: &[BigInt], coords: &[Enclosure]) -> Enclosure {
    let n = coords.len();
    // common-denominator accumulation, then a single normalisation per endpoint
    let mut lo_num = q[n].clone();
    let mut hi_num = q[n].clone();
    let mut den = BigInt::one();
    for i in 0..n {
        let (a, b) = if q[i].is_negative() {
            (&coords[i].hi, &coords[i].lo)
        } else {
            (&coords[i].lo, &coords[i].hi)
        };
        let d = a.denom() * b.denom();
        let ta = &q[i] * a.numer() * b.denom();
        let tb = &q[i] * b.numer() * a.denom();
        lo_num = lo_num * &d + ta * &den;
        hi_num = hi_num * &d + tb * &den;
        den *= d;
    }
    Enclosure {
        lo: Rational::new(lo_num, den.clone()),
        hi: Rational::new(hi_num, den),
    }
}

/// Enclosure of `q·ξ* = q_1 ξ_1 + ... + q_n ξ_n + q_{n+1}` of width at most `eps`.
pub fn linear_form_enclose(
    q: &[BigInt],
    target: &LinearFormTarget,
    eps: &Rational,
) -> Result<Enclosure> {
    Ok(linear_form_enclose_detailed(q, target, eps)?.0)
}

/// Certified `|q·ξ*|`: exact for rational targets, dyadic otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbsValue {
    Exact(Rational),
    Approx(FixedInterval),
}

impl AbsValue {
    pub fn below(&self, other: &AbsValue) -> bool {
        match (self, other) {
            (AbsValue::Exact(a), AbsValue::Exact(b)) => a < b,
            (AbsValue::Approx(a), AbsValue::Approx(b)) => a.below(b),
            (AbsValue::Exact(a), AbsValue::Approx(b)) => a.numer() << b.bits < &b.lo * a.denom(),
            (AbsValue::Approx(a), AbsValue::Exact(b)) => &a.hi * b.denom() < b.numer() << a.bits,
        }
    }

    pub fn to_enclosure(&self) -> Enclosure {
        match self {
            AbsValue::Exact(r) => Enclosure::point(r.clone()),
            AbsValue::Approx(f) => f.to_enclosure(),
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self, AbsValue::Exact(r) if r.is_zero())
    }

    /// Whether 0 is a possible value.
    pub fn may_vanish(&self) -> bool {
        match self {
            AbsValue::Exact(r) => r.is_zero(),
            AbsValue::Approx(f) => !f.lo.is_positive(),
        }
    }

    /// `-log2` of the upper endpoint, roughly; used for precision planning.
    pub fn neg_log2_hi(&self) -> f64 {
        match self {
            AbsValue::Exact(r) => {
                if r.is_zero() {
                    f64::INFINITY
                } else {
                    r.denom().bits() as f64 - r.numer().bits() as f64
                }
            }
            AbsValue::Approx(f) => {
                if f.hi.is_zero() {
                    f64::INFINITY
                } else {
                    f.bits as f64 - f.hi.bits() as f64
                }
            }
        }
    }
}

/// Dyadic enclosure of `q·ξ*` at `bits` (signed).
pub fn form_fixed(q: &[BigInt], target: &LinearFormTarget, bits: u64) -> FixedInterval {
    let n = target.n();
    let mut lo = &q[n] << bits;
    let mut hi = lo.clone();
    for i in 0..n {
        if q[i].is_zero() {
            continue;
        }
        let f = target.coords[i].fixed(bits);
        if q[i].is_positive() {
            lo += &q[i] * &f.lo;
            hi += &q[i] * &f.hi;
        } else {
            lo += &q[i] * &f.hi;
            hi += &q[i] * &f.lo;
        }
    }
    FixedInterval { lo, hi, bits }
}

/// `|q·ξ*|` to absolute accuracy about `2^-depth`.
pub fn abs_value(q: &[BigInt], target: &LinearFormTarget, depth: u64) -> AbsValue {
    if let Some(ex) = &target.exact {
        let n = target.n();
        let mut v = Rational::from_integer(q[n].clone());
        for i in 0..n {
            if !q[i].is_zero() {
                v += Rational::from_integer(q[i].clone()) * &ex[i];
            }
        }
        return AbsValue::Exact(v.abs());
    }
    let s: BigInt = q[..target.n()].iter().map(|x| x.abs()).sum();
    let guard = s.bits() + 4;
    AbsValue::Approx(form_fixed(q, target, depth + guard).abs())
}

/// Outcome of comparing `|qa·ξ*|` with `|qb·ξ*|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AbsOrder {
    Less,
    Greater,
    Undecided,
}

/// Depths tried by comparisons: 32, 64, 128, ... capped at `max_depth`.
pub fn depth_schedule(max_depth: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 32u64.min(max_depth);
    loop {
        out.push(d);
        if d >= max_depth {
            return out;
        }
        d = (d * 2).min(max_depth);
    }
}

/// Certified comparison of `|qa·ξ*|` and `|qb·ξ*|`, with the depth at which it was decided.
pub fn compare_abs_with_depth(
    qa: &[BigInt],
    qb: &[BigInt],
    target: &LinearFormTarget,
    max_depth: u64,
) -> Result<(AbsOrder, u64)> {
    check_len(qa, target)?;
    check_len(qb, target)?;
    if qa.iter().all(|x| x.is_zero()) || qb.iter().all(|x| x.is_zero()) {
        return Err(Error::InvalidArgument(
            "compared vectors must be nonzero".into(),
        ));
    }
    if target.exact.is_some() {
        let a = abs_value(qa, target, 0);
        let b = abs_value(qb, target, 0);
        let o = if a.below(&b) {
            AbsOrder::Less
        } else if b.below(&a) {
            AbsOrder::Greater
        } else {
            AbsOrder::Undecided
        };
        return Ok((o, 0));
    }
    if same_up_to_sign(qa, qb) {
        // identical absolute values: refinement cannot separate them
        return Ok((AbsOrder::Undecided, max_depth));
    }
    for d in depth_schedule(max_depth) {
        let a = abs_value(qa, target, d);
        let b = abs_value(qb, target, d);
        if a.below(&b) {
            return Ok((AbsOrder::Less, d));
        }
        if b.below(&a) {
            return Ok((AbsOrder::Greater, d));
        }
    }
    Ok((AbsOrder::Undecided, max_depth))
}

/// Certified comparison of `|qa·ξ*|` and `|qb·ξ*|` using at most `max_depth` bits.
pub fn compare_abs(
    qa: &[BigInt],
    qb: &[BigInt],
    target: &LinearFormTarget,
    max_depth: u64,
) -> Result<AbsOrder> {
    Ok(compare_abs_with_depth(qa, qb, target, max_depth)?.0)
}

fn same_up_to_sign(a: &[BigInt], b: &[BigInt]) -> bool {
    a == b || a.iter().zip(b).all(|(x, y)| x == &-y)
}

/// Serialized form of a [`RealSource`]; integers travel as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSpec {
    Rational {
        value: String,
    },
    Lacunary {
        base: u64,
        exponents: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        schedule: Option<LacunarySchedule>,
    },
    ContinuedFraction {
        quotients: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        periodic_tail: Option<Vec<String>>,
    },
    Quadratic {
        p: String,
        q: String,
        r: String,
    },
}

impl From<&RealSource> for SourceSpec {
    fn from(s: &RealSource) -> Self {
        match &s.kind {
            SourceKind::Rational(r) => SourceSpec::Rational {
                value: format_rational(r),
            },
            SourceKind::Lacunary(l) => SourceSpec::Lacunary {
                base: l.base,
                exponents: l.exponents.clone(),
                schedule: l.schedule.clone(),
            },
            SourceKind::ContinuedFraction(c) => SourceSpec::ContinuedFraction {
                quotients: c.quotients.iter().map(|a| a.to_string()).collect(),
                periodic_tail: match &c.tail {
                    CfTail::Terminate => None,
                    CfTail::Periodic(p) => Some(p.iter().map(|a| a.to_string()).collect()),
                },
            },
            SourceKind::Quadratic(q) => SourceSpec::Quadratic {
                p: q.p.to_string(),
                q: q.q.to_string(),
                r: q.r.to_string(),
            },
        }
    }
}

fn parse_big(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

impl TryFrom<&SourceSpec> for RealSource {
    type Error = Error;

    fn try_from(s: &SourceSpec) -> Result<Self> {
        let kind = match s {
            SourceSpec::Rational { value } => SourceKind::Rational(parse_rational(value)?),
            SourceSpec::Lacunary {
                base,
                exponents,
                schedule,
            } => SourceKind::Lacunary(LacunarySeries {
                base: *base,
                exponents: exponents.clone(),
                schedule: schedule.clone(),
            }),
            SourceSpec::ContinuedFraction {
                quotients,
                periodic_tail,
            } => SourceKind::ContinuedFraction(ContinuedFraction {
                quotients: quotients
                    .iter()
                    .map(|a| parse_big(a))
                    .collect::<Result<_>>()?,
                tail: match periodic_tail {
                    None => CfTail::Terminate,
                    Some(p) => {
                        CfTail::Periodic(p.iter().map(|a| parse_big(a)).collect::<Result<_>>()?)
                    }
                },
            }),
            SourceSpec::Quadratic { p, q, r } => SourceKind::Quadratic(QuadraticSurd {
                p: parse_big(p)?,
                q: parse_big(q)?,
                r: parse_big(r)?,
            }),
        };
        RealSource::new(kind)
    }
}

/// Serialized form of a [`LinearFormTarget`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub n: usize,
    pub coords: Vec<SourceSpec>,
}

impl TargetSpec {
    pub fn build(&self) -> Result<LinearFormTarget> {
        if self.coords.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "target declares n = {} but lists {} coordinates",
                self.n,
                self.coords.len()
            )));
        }
        let c: Vec<RealSource> = self
            .coords
            .iter()
            .map(RealSource::try_from)
            .collect::<Result<_>>()?;
        LinearFormTarget::new(c)
    }
}

/// Lossy `f64` view of a fixed interval midpoint (diagnostics only).
pub fn fixed_mid_f64(f: &FixedInterval) -> f64 {
    let s = &f.lo + &f.hi;
    let m = dyadic(s, f.bits + 1);
    rat_to_f64(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int_vec, rat};

    fn w1_xi1() -> RealSource {
        let sch = LacunarySchedule {
            chain: ChainSchedule::new(rat(3, 1), vec![2, 3]),
            index: 0,
        };
        RealSource::lacunary(2, vec![1, 10], Some(sch)).unwrap()
    }

    #[test]
    fn rational_enclosure_is_exact() {
        let s = RealSource::rational(rat(1, 3));
        assert_eq!(
            enclose(&s, &rat(1, 100)).unwrap(),
            Enclosure::point(rat(1, 3))
        );
    }

    #[test]
    fn lacunary_enclosure_contains_partial_sum() {
        let s = w1_xi1();
        let e = enclose(&s, &rat(1, 1_000_000)).unwrap();
        assert!(e.width() <= rat(1, 1_000_000));
        let p = rat(1, 2) + rat(1, 1024);
        assert!(e.contains(&p) || e.lo() >= &p);
        assert!(e.lo() >= &p);
        assert!(e.hi() < &(p + rat(1, 1 << 20)));
    }

    #[test]
    fn golden_enclosure() {
        let s = RealSource::golden_fraction();
        let e = enclose(&s, &rat(1, 10_000)).unwrap();
        assert!(e.width() <= rat(1, 10_000));
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        assert!(rat_to_f64(e.lo()) <= phi && phi <= rat_to_f64(e.hi()));
    }

    #[test]
    fn fixed_contains_enclosure_value() {
        let s = RealSource::golden_fraction();
        for bits in [10u64, 64, 100, 333] {
            let f = s.fixed(bits);
            let e = f.to_enclosure();
            let fine = enclose(&s, &rat(1, 1 << 40)).unwrap();
            assert!(e.lo() <= fine.hi() && fine.lo() <= e.hi());
        }
    }

    #[test]
    fn constant_term_only() {
        let t = LinearFormTarget::new(vec![w1_xi1(), RealSource::rational(rat(1, 9))]).unwrap();
        let e = linear_form_enclose(&int_vec(&[0, 0, 1]), &t, &rat(1, 100)).unwrap();
        assert_eq!(e, Enclosure::point(rat(1, 1)));
    }

    #[test]
    fn rational_cancellation() {
        let t = LinearFormTarget::rationals(&[rat(1, 3), rat(1, 3)]);
        let e = linear_form_enclose(&int_vec(&[1, -1, 0]), &t, &rat(1, 100)).unwrap();
        assert_eq!(e, Enclosure::point(rat(0, 1)));
    }

    #[test]
    fn exact_rational_comparison_at_depth_zero() {
        let t = LinearFormTarget::rationals(&[rat(1, 2)]);
        let (o, d) = compare_abs_with_depth(&int_vec(&[1, 0]), &int_vec(&[0, 1]), &t, 0).unwrap();
        assert_eq!(o, AbsOrder::Less);
        assert_eq!(d, 0);
    }

    #[test]
    fn equal_vectors_undecided() {
        let t = LinearFormTarget::new(vec![RealSource::golden_fraction()]).unwrap();
        let q = int_vec(&[3, -2]);
        assert_eq!(compare_abs(&q, &q, &t, 200).unwrap(), AbsOrder::Undecided);
    }

    #[test]
    fn continued_fraction_of_golden_ratio() {
        let s =
            RealSource::continued_fraction(int_vec(&[0]), CfTail::Periodic(int_vec(&[1]))).unwrap();
        let g = RealSource::golden_fraction();
        let a = s.fixed(200);
        let b = g.fixed(200);
        assert!((&a.lo - &b.lo).abs() < BigInt::from(8));
        let e = enclose(&s, &rat(1, 1000)).unwrap();
        assert!(e.width() <= rat(1, 1000));
        assert_eq!(
            g.partial_quotients(10, 128),
            int_vec(&[0, 1, 1, 1, 1, 1, 1, 1, 1, 1])
        );
    }

    #[test]
    fn lacunary_rejects_dense_terms() {
        assert!(RealSource::lacunary(2, vec![1, 2], None).is_err());
        assert!(RealSource::lacunary(3, vec![1, 2], None).is_ok());
    }

    #[test]
    fn spec_round_trip() {
        let t = LinearFormTarget::new(vec![w1_xi1(), RealSource::golden_fraction()]).unwrap();
        let js = serde_json::to_string(&t.spec()).unwrap();
        let back: TargetSpec = serde_json::from_str(&js).unwrap();
        let t2 = back.build().unwrap();
        assert_eq!(t2.spec(), t.spec());
        assert!(js.contains("\"kind\":\"lacunary\""));
    }
}
