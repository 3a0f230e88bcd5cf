//! Explicit targets whose large best approximations lie in prescribed
//! sublattices: two-prime lacunary pairs, continued-fraction pairs with
//! coprime denominators, `k`-prime lacunary families and their embeddings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bestapprox::{canonicalize, BestApproxSequence};
use crate::error::{Error, Result};
use crate::logs::{align, ln_int, LnInterval};
use crate::numeric::{
    first_primes, iroot, log2_rat, rat, round_div, serde_bigint_mat, serde_bigint_vec,
    serde_rational, trial_factor, Rational,
};
use crate::real_enclosure::{
    CfTail, LacunarySchedule, LinearFormTarget, RealSource, SourceSpec, TargetSpec,
};
use crate::schedule::ChainSchedule;

/// Deviation `|e_to ln p_to - tau e_from ln p_from|` of one growth step, with
/// the bound `ln p_to` it is certified against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthStep {
    pub prime_from: u64,
    pub exp_from: u64,
    pub prime_to: u64,
    pub exp_to: u64,
    pub deviation: f64,
    pub bound: f64,
}

const LN_BITS: u64 = 96;

fn ln_prime_pow(p: u64, e: u64) -> LnInterval {
    ln_int(&BigInt::from(p), LN_BITS).scale_by(&BigInt::from(e))
}

/// Certifies `|e_to ln p_to - tau e_from ln p_from| <= ln p_to`.
fn growth_step(tau: &Rational, pf: u64, ef: u64, pt: u64, et: u64) -> Result<GrowthStep> {
    let (num, den) = (tau.numer().clone(), tau.denom().clone());
    let a = ln_prime_pow(pt, et).scale_by(&den);
    let b = ln_prime_pow(pf, ef).scale_by(&num);
    let w = a.scale.max(b.scale);
    let d = align(&a, w).sub(&align(&b, w));
    let lim = align(&ln_int(&BigInt::from(pt), LN_BITS).scale_by(&den), w);
    if d.hi > lim.lo || -&d.lo > lim.lo {
        return Err(Error::InvalidArgument(format!(
            "growth step {pf}^{ef} -> {pt}^{et} exceeds its constant"
        )));
    }
    let dev = d.mid_f64() / den.to_f64().unwrap_or(f64::NAN);
    Ok(GrowthStep {
        prime_from: pf,
        exp_from: ef,
        prime_to: pt,
        exp_to: et,
        deviation: dev.abs(),
        bound: (pt as f64).ln(),
    })
}

fn pow_u(p: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `F_j = D_j (D_1^{-1} + ... + D_j^{-1})` for `D_t = p^{e_t}`.
fn partial_numerators(p: u64, exps: &[u64]) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(exps.len());
    for (j, &e) in exps.iter().enumerate() {
        let f = if j == 0 {
            BigInt::one()
        } else {
            &out[j - 1] * pow_u(p, e - exps[j - 1]) + BigInt::one()
        };
        out.push(f);
    }
    out
}

/// `D e_i - F e_{n+1}` in `ℤ^{n+1}` (`i` zero-based).
fn axis_vector(n: usize, i: usize, d: &BigInt, f: &BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n + 1];
    v[i] = d.clone();
    v[n] = -f;
    v
}

fn lacunary_source(chain: &ChainSchedule, index: usize, exps: &[u64]) -> Result<RealSource> {
    RealSource::lacunary(
        chain.primes[index],
        exps.to_vec(),
        Some(LacunarySchedule {
            chain: chain.clone(),
            index,
        }),
    )
}

/// The two-prime lacunary pair `ξ_1 = Σ 2^{-α_j}`, `ξ_2 = Σ 3^{-β_j}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem8Instance {
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    pub terms: usize,
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
    #[serde(rename = "A", with = "serde_bigint_vec")]
    pub a: Vec<BigInt>,
    #[serde(rename = "B", with = "serde_bigint_vec")]
    pub b: Vec<BigInt>,
    #[serde(rename = "F", with = "serde_bigint_vec")]
    pub f: Vec<BigInt>,
    #[serde(rename = "G", with = "serde_bigint_vec")]
    pub g: Vec<BigInt>,
    #[serde(with = "serde_bigint_mat")]
    pub v: Vec<Vec<BigInt>>,
    #[serde(with = "serde_bigint_mat")]
    pub w: Vec<Vec<BigInt>>,
    pub growth: Vec<GrowthStep>,
    pub target: TargetSpec,
}

/// `tau^2 - 2 tau - 1 > 0`, i.e. `tau > 1 + sqrt 2`.
pub fn tau_exceeds_one_plus_sqrt2(tau: &Rational) -> bool {
    tau.is_positive() && tau * tau - tau * rat(2, 1) - rat(1, 1) > Rational::zero()
}

pub fn build_theorem8(tau: &Rational, terms: usize) -> Result<Theorem8Instance> {
    if !tau_exceeds_one_plus_sqrt2(tau) {
        return Err(Error::InvalidTau(format!("{tau} <= 1 + sqrt 2")));
    }
    if terms < 1 {
        return Err(Error::InvalidArgument(
            "at least one term is required".into(),
        ));
    }
    let chain = ChainSchedule::new(tau.clone(), vec![2, 3]);
    let alpha = chain.coordinate(0, terms);
    let beta = chain.coordinate(1, terms);
    let a: Vec<BigInt> = alpha.iter().map(|&e| pow_u(2, e)).collect();
    let b: Vec<BigInt> = beta.iter().map(|&e| pow_u(3, e)).collect();
    let f = partial_numerators(2, &alpha);
    let g = partial_numerators(3, &beta);
    let v = (0..terms)
        .map(|j| axis_vector(2, 0, &a[j], &f[j]))
        .collect();
    let w = (0..terms)
        .map(|j| axis_vector(2, 1, &b[j], &g[j]))
        .collect();
    let mut growth = Vec::new();
    for j in 0..terms {
        growth.push(growth_step(tau, 2, alpha[j], 3, beta[j])?);
        if j + 1 < terms {
            growth.push(growth_step(tau, 3, beta[j], 2, alpha[j + 1])?);
        }
    }
    let xi1 = lacunary_source(&chain, 0, &alpha)?;
    let xi2 = lacunary_source(&chain, 1, &beta)?;
    let target = LinearFormTarget::new(vec![xi1, xi2])?.spec();
    let inst = Theorem8Instance {
        tau: tau.clone(),
        terms,
        alpha,
        beta,
        a,
        b,
        f,
        g,
        v,
        w,
        growth,
        target,
    };
    inst.check_invariants()?;
    Ok(inst)
}

impl Theorem8Instance {
    pub fn target(&self) -> Result<LinearFormTarget> {
        self.target.build()
    }

    /// Interleaving of the exponents, parity of `F_j`, `G_j ≡ 1 (mod 3)`.
    pub fn check_invariants(&self) -> Result<()> {
        let mut prev = 0u64;
        let three = BigInt::from(3);
        for j in 0..self.terms {
            if !(self.alpha[j] > prev && self.alpha[j] < self.beta[j]) {
                return Err(Error::InvalidArgument(format!(
                    "exponents not interleaved at j = {}",
                    j + 1
                )));
            }
            if self.a[j] >= self.b[j] || (j + 1 < self.terms && self.b[j] >= self.a[j + 1]) {
                return Err(Error::InvalidArgument(format!(
                    "A_j < B_j < A_(j+1) fails at j = {}",
                    j + 1
                )));
            }
            prev = self.beta[j];
            if self.f[j].is_even() {
                return Err(Error::InvalidArgument(format!("F_{} is even", j + 1)));
            }
            if self.g[j].mod_floor(&three) != BigInt::one() {
                return Err(Error::InvalidArgument(format!(
                    "G_{} is not 1 mod 3",
                    j + 1
                )));
            }
        }
        Ok(())
    }
}

/// `v_1, w_1, v_2, w_2, ...` in canonical form.
pub fn predicted_tail_t8(inst: &Theorem8Instance) -> Vec<Vec<BigInt>> {
    let mut out = Vec::with_capacity(2 * inst.terms);
    for j in 0..inst.terms {
        out.push(canonicalize(&inst.v[j]).expect("nonzero"));
        out.push(canonicalize(&inst.w[j]).expect("nonzero"));
    }
    out
}

/// A pair of continued fractions whose convergent denominators alternate with
/// growth `tau` and satisfy `(s_{1,j}, s_{2,j}) = 1 = (s_{2,j}, s_{1,j+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfInstance {
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    pub terms: usize,
    pub window: usize,
    #[serde(with = "serde_bigint_vec")]
    pub a1: Vec<BigInt>,
    #[serde(with = "serde_bigint_vec")]
    pub a2: Vec<BigInt>,
    #[serde(with = "serde_bigint_vec")]
    pub s1: Vec<BigInt>,
    #[serde(with = "serde_bigint_vec")]
    pub r1: Vec<BigInt>,
    #[serde(with = "serde_bigint_vec")]
    pub s2: Vec<BigInt>,
    #[serde(with = "serde_bigint_vec")]
    pub r2: Vec<BigInt>,
    /// Small primes (trial division) of `s_{1,j} s_{1,j+1}`.
    pub avoided_primes: Vec<Vec<u64>>,
    /// Position in the scan order of the accepted `a_{2,j}` and `a_{1,j+1}`.
    pub scan_positions: Vec<(usize, Option<usize>)>,
    pub target: TargetSpec,
}

/// Trial-division limit for the diagnostic prime sets.
pub const AVOIDED_PRIME_LIMIT: u64 = 10_000;

pub const DEFAULT_CF_WINDOW: usize = 64;

/// `floor(x^tau)` for a positive integer `x` and rational `tau`.
fn int_power_rational(x: &BigInt, tau: &Rational) -> BigInt {
    let p = tau.numer().to_usize().expect("small numerator");
    let q = tau.denom().to_u32().expect("small denominator");
    iroot(&num_traits::pow(x.clone(), p), q)
}

/// Candidates `a >= 1` ordered by distance to `center`, ties upward first.
fn scan_order(center: &BigInt, window: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(window);
    let mut d = 0i64;
    while out.len() < window {
        for c in [center + d, center - d] {
            if c >= BigInt::one() && !out.contains(&c) && out.len() < window {
                out.push(c);
            }
        }
        d += 1;
        if d > window as i64 * 2 + 2 {
            break;
        }
    }
    out
}

/// Next partial quotient near `target / s_prev` keeping the new denominator
/// coprime to `avoid`.
fn choose_quotient(
    target: &BigInt,
    s_prev: &BigInt,
    s_prev2: &BigInt,
    avoid: &BigInt,
    window: usize,
) -> Option<(BigInt, BigInt, usize)> {
    let center = round_div(&(target - s_prev2), s_prev).max(BigInt::one());
    for (pos, a) in scan_order(&center, window).into_iter().enumerate() {
        let s = s_prev2 + &a * s_prev;
        if s.gcd(avoid).is_one() {
            return Some((a, s, pos));
        }
    }
    None
}

pub fn build_cf_pair(tau: &Rational, terms: usize, window: usize) -> Result<CfInstance> {
    if *tau <= rat(2, 1) {
        return Err(Error::InvalidTau(format!("{tau} <= 2")));
    }
    if terms < 1 || window < 1 {
        return Err(Error::InvalidArgument(
            "terms and window must be positive".into(),
        ));
    }
    // convergents of [0; a_1, a_2, ...]: s_0 = 1, s_{-1} = 0, r_0 = 0, r_{-1} = 1
    let (mut s1, mut r1) = (vec![BigInt::from(2)], vec![BigInt::one()]);
    let mut a1 = vec![BigInt::from(2)];
    let (mut s2, mut r2, mut a2): (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) =
        (vec![], vec![], vec![]);
    let mut positions = Vec::new();
    let prev = |v: &Vec<BigInt>, j: usize, zero: BigInt, one: BigInt| -> (BigInt, BigInt) {
        // (x_{j-1}, x_{j-2}) for a 0-based position j
        match j {
            0 => (one, zero),
            1 => (v[0].clone(), one),
            _ => (v[j - 1].clone(), v[j - 2].clone()),
        }
    };
    for j in 0..terms {
        let t = int_power_rational(&s1[j], tau);
        let (sp, sp2) = prev(&s2, j, BigInt::zero(), BigInt::one());
        let (rp, rp2) = prev(&r2, j, BigInt::one(), BigInt::zero());
        let (a, s, pos2) = choose_quotient(&t, &sp, &sp2, &s1[j], window)
            .ok_or(Error::CoprimeWindowExhausted(j + 1))?;
        r2.push(&rp2 + &a * &rp);
        s2.push(s);
        a2.push(a);
        let mut pos1 = None;
        if j + 1 < terms {
            let t = int_power_rational(&s2[j], tau);
            let (sp, sp2) = prev(&s1, j + 1, BigInt::zero(), BigInt::one());
            let (rp, rp2) = prev(&r1, j + 1, BigInt::one(), BigInt::zero());
            let (a, s, p) = choose_quotient(&t, &sp, &sp2, &s2[j], window)
                .ok_or(Error::CoprimeWindowExhausted(j + 1))?;
            r1.push(&rp2 + &a * &rp);
            s1.push(s);
            a1.push(a);
            pos1 = Some(p);
        }
        positions.push((pos2, pos1));
    }
    let avoided_primes = (0..terms)
        .map(|j| {
            let mut prod = s1[j].clone();
            if j + 1 < terms {
                prod *= &s1[j + 1];
            }
            let (mut ps, _) = trial_factor(prod.magnitude(), AVOIDED_PRIME_LIMIT);
            ps.dedup();
            ps
        })
        .collect();
    let mk = |a: &[BigInt]| {
        let mut q = vec![BigInt::zero()];
        q.extend_from_slice(a);
        RealSource::continued_fraction(q, CfTail::Periodic(vec![BigInt::one()]))
    };
    let target = LinearFormTarget::new(vec![mk(&a1)?, mk(&a2)?])?.spec();
    let inst = CfInstance {
        tau: tau.clone(),
        terms,
        window,
        a1,
        a2,
        s1,
        r1,
        s2,
        r2,
        avoided_primes,
        scan_positions: positions,
        target,
    };
    inst.check_coprimality()?;
    Ok(inst)
}

impl CfInstance {
    pub fn target(&self) -> Result<LinearFormTarget> {
        self.target.build()
    }

    /// All gcds `(s_{1,j}, s_{2,j})` and `(s_{2,j}, s_{1,j+1})`, in that order.
    pub fn required_gcds(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for j in 0..self.terms {
            out.push(self.s1[j].gcd(&self.s2[j]));
            if j + 1 < self.terms {
                out.push(self.s2[j].gcd(&self.s1[j + 1]));
            }
        }
        out
    }

    pub fn check_coprimality(&self) -> Result<()> {
        if self.required_gcds().iter().all(|g| g.is_one()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "coprimality of convergent denominators fails".into(),
            ))
        }
    }

    /// `g_j = s_{1,j} e_1 - r_{1,j} e_3` and `h_j = s_{2,j} e_2 - r_{2,j} e_3`, interleaved.
    pub fn predicted_tail(&self) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        for j in 0..self.terms {
            out.push(canonicalize(&axis_vector(2, 0, &self.s1[j], &self.r1[j])).expect("nonzero"));
            out.push(canonicalize(&axis_vector(2, 1, &self.s2[j], &self.r2[j])).expect("nonzero"));
        }
        out
    }

    /// Certified `ln s_{2,j} - tau ln s_{1,j}` (as a midpoint) and the per-step
    /// tolerance `ln s_{2,j-1} + ln 2`, for `j >= 2`.
    pub fn growth_deviations(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let t = self.tau.numer().to_f64().unwrap_or(f64::NAN)
            / self.tau.denom().to_f64().unwrap_or(f64::NAN);
        for j in 1..self.terms {
            let d = ln_int(&self.s2[j], 64).mid_f64() - t * ln_int(&self.s1[j], 64).mid_f64();
            let tol = ln_int(&self.s2[j - 1], 64).mid_f64() + std::f64::consts::LN_2;
            out.push((d, tol));
        }
        out
    }
}

/// Lacunary series over the first `k` primes with interleaved growth `tau`,
/// embedded in `ℝ^n` with quadratic irrationals in the remaining coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KLatticeInstance {
    pub n: usize,
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub tau: Rational,
    pub terms: usize,
    pub primes: Vec<u64>,
    pub alpha: Vec<Vec<u64>>,
    #[serde(rename = "A", with = "serde_bigint_mat")]
    pub a: Vec<Vec<BigInt>>,
    #[serde(rename = "F", with = "serde_bigint_mat")]
    pub f: Vec<Vec<BigInt>>,
    pub growth: Vec<GrowthStep>,
    pub target: TargetSpec,
}

/// `(tau^k - 1) / tau^(k-1) > k`.
pub fn k_lattice_tau_ok(tau: &Rational, k: usize) -> bool {
    let tk1 = num_traits::pow(tau.clone(), k - 1);
    let tk = &tk1 * tau;
    tau.is_positive() && (tk - rat(1, 1)) > tk1 * rat(k as i64, 1)
}

pub fn build_k_lattice(
    n: usize,
    k: usize,
    tau: &Rational,
    terms: usize,
) -> Result<KLatticeInstance> {
    if !(2 <= k && k <= n) {
        return Err(Error::InvalidArgument("need 2 <= k <= n".into()));
    }
    if terms < 1 {
        return Err(Error::InvalidArgument(
            "at least one term is required".into(),
        ));
    }
    if !k_lattice_tau_ok(tau, k) {
        return Err(Error::InvalidTau(format!(
            "(tau^k - 1)/tau^(k-1) <= k for tau = {tau}, k = {k}"
        )));
    }
    let primes = first_primes(k);
    let chain = ChainSchedule::new(tau.clone(), primes.clone());
    let flat = chain.chain(k * terms);
    let alpha: Vec<Vec<u64>> = (0..k)
        .map(|i| (0..terms).map(|j| flat[i + j * k]).collect())
        .collect();
    let a: Vec<Vec<BigInt>> = (0..k)
        .map(|i| alpha[i].iter().map(|&e| pow_u(primes[i], e)).collect())
        .collect();
    let f: Vec<Vec<BigInt>> = (0..k)
        .map(|i| partial_numerators(primes[i], &alpha[i]))
        .collect();
    let mut growth = Vec::new();
    for m in 1..flat.len() {
        growth.push(growth_step(
            tau,
            primes[(m - 1) % k],
            flat[m - 1],
            primes[m % k],
            flat[m],
        )?);
    }
    let mut coords = Vec::with_capacity(n);
    for i in 0..k {
        coords.push(lacunary_source(&chain, i, &alpha[i])?);
    }
    for p in first_primes(n).into_iter().skip(k) {
        // sqrt p - floor(sqrt p)
        let fl = iroot(&BigInt::from(p), 2).to_i64().expect("small");
        coords.push(RealSource::quadratic(-fl, p as i64, 1)?);
    }
    let target = LinearFormTarget::new(coords)?.spec();
    let inst = KLatticeInstance {
        n,
        k,
        tau: tau.clone(),
        terms,
        primes,
        alpha,
        a,
        f,
        growth,
        target,
    };
    inst.check_invariants()?;
    Ok(inst)
}

impl KLatticeInstance {
    pub fn target(&self) -> Result<LinearFormTarget> {
        self.target.build()
    }

    /// `v_{i,j}` (both indices zero-based).
    pub fn vector(&self, i: usize, j: usize) -> Vec<BigInt> {
        axis_vector(self.n, i, &self.a[i][j], &self.f[i][j])
    }

    /// Strict interleaving `A_{1,1} < ... < A_{k,1} < A_{1,2} < ...` and `F_{i,j} ≡ 1 (mod p_i)`.
    pub fn check_invariants(&self) -> Result<()> {
        let mut prev = BigInt::zero();
        for j in 0..self.terms {
            for i in 0..self.k {
                if self.a[i][j] <= prev {
                    return Err(Error::InvalidArgument(format!(
                        "A not interleaved at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
                prev = self.a[i][j].clone();
                let p = BigInt::from(self.primes[i]);
                if self.f[i][j].mod_floor(&p) != BigInt::one() % &p {
                    return Err(Error::InvalidArgument(format!(
                        "F_({},{}) is not 1 mod p",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// All `v_{i,j}` ordered by norm, canonical.
pub fn predicted_tail_k(inst: &KLatticeInstance) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for j in 0..inst.terms {
        for i in 0..inst.k {
            out.push(canonicalize(&inst.vector(i, j)).expect("nonzero"));
        }
    }
    out
}

/// Partial quotients inspected when accepting a tail coordinate.
pub const TAIL_CHECK_DEPTH: usize = 48;
/// Largest partial quotient accepted for a declared badly approximable tail.
pub const TAIL_QUOTIENT_BOUND: u64 = 1000;

/// The pair of a [`Theorem8Instance`] completed by badly approximable tail
/// coordinates `ξ_3, ..., ξ_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremNeuInstance {
    pub n: usize,
    /// Admissible `σ` lie strictly between these bounds: `3n - 4` and `(tau^2 - 1)/tau`.
    #[serde(with = "serde_rational")]
    pub sigma_min: Rational,
    #[serde(with = "serde_rational")]
    pub sigma_max: Rational,
    pub pair: Theorem8Instance,
    pub tail: Vec<SourceSpec>,
    /// Largest of the first [`TAIL_CHECK_DEPTH`] partial quotients per tail coordinate.
    pub tail_quotient_max: Vec<u64>,
    /// Declared, not certified: the tail has `ω = n - 2`.
    pub tail_assumption: String,
    #[serde(with = "serde_bigint_mat")]
    pub candidates: Vec<Vec<BigInt>>,
    pub target: TargetSpec,
}

/// `(tau^2 - 1)/tau`.
pub fn uniform_exponent_t8(tau: &Rational) -> Rational {
    (tau * tau - rat(1, 1)) / tau
}

pub fn build_theorem_neu(
    n: usize,
    tau: &Rational,
    tail: &[RealSource],
    terms: usize,
) -> Result<TheoremNeuInstance> {
    if n < 3 {
        return Err(Error::InvalidArgument("n >= 3 is required".into()));
    }
    if tail.len() != n - 2 {
        return Err(Error::InvalidArgument(format!(
            "expected {} tail coordinates",
            n - 2
        )));
    }
    let bound = rat(3 * n as i64 - 4, 1);
    let wh = uniform_exponent_t8(tau);
    if !tau.is_positive() || wh <= bound {
        return Err(Error::InvalidTau(format!(
            "(tau^2 - 1)/tau = {wh} <= {bound}"
        )));
    }
    let pair = build_theorem8(tau, terms)?;
    let mut maxima = Vec::new();
    for (t, s) in tail.iter().enumerate() {
        if s.exact_value().is_some() {
            return Err(Error::InvalidArgument(format!(
                "tail coordinate {} is rational",
                t + 3
            )));
        }
        let pq = s.partial_quotients(TAIL_CHECK_DEPTH + 1, 1024);
        if pq.len() < TAIL_CHECK_DEPTH + 1 {
            return Err(Error::InvalidArgument(format!(
                "tail coordinate {}: partial quotients not resolved to depth {TAIL_CHECK_DEPTH}",
                t + 3
            )));
        }
        let m = pq[1..]
            .iter()
            .max()
            .and_then(|x| x.to_u64())
            .unwrap_or(u64::MAX);
        if m > TAIL_QUOTIENT_BOUND {
            return Err(Error::InvalidArgument(format!(
                "tail coordinate {} has a partial quotient above {TAIL_QUOTIENT_BOUND}",
                t + 3
            )));
        }
        maxima.push(m);
    }
    let mut coords: Vec<RealSource> = pair
        .target()?
        .coords()
        .iter()
        .map(|c| (**c).clone())
        .collect();
    coords.extend(tail.iter().cloned());
    let target = LinearFormTarget::new(coords)?.spec();
    let embed = |q: &[BigInt]| {
        let mut v = vec![BigInt::zero(); n + 1];
        v[0] = q[0].clone();
        v[1] = q[1].clone();
        v[n] = q[2].clone();
        v
    };
    let candidates = predicted_tail_t8(&pair).iter().map(|q| embed(q)).collect();
    Ok(TheoremNeuInstance {
        n,
        sigma_min: bound,
        sigma_max: wh,
        tail: tail.iter().map(SourceSpec::from).collect(),
        tail_quotient_max: maxima,
        tail_assumption: format!(
            "bounded partial quotients (<= {TAIL_QUOTIENT_BOUND}) to depth {TAIL_CHECK_DEPTH} taken as omega = n - 2"
        ),
        pair,
        candidates,
        target,
    })
}

impl TheoremNeuInstance {
    pub fn target(&self) -> Result<LinearFormTarget> {
        self.target.build()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MoschusVerdict {
    Decaying,
    NotDecaying,
    InsufficientData,
}

/// Terms `t_j = ‖q_{j+1}‖^n log‖q_{j+1}‖ |q_j·ξ*|` of a computed sequence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoschusReport {
    pub n: usize,
    /// `log10 t_j` from upper endpoints, `j = 1, ..., m-1` (`-inf` when `‖q_{j+1}‖ = 1`).
    pub log10_terms: Vec<f64>,
    /// `log10 (t_{j+1} / t_j)` for consecutive positive terms.
    pub log10_ratios: Vec<f64>,
    /// One-based index of the first ratio inspected.
    pub j0: Option<usize>,
    pub verdict: MoschusVerdict,
    pub note: String,
}

pub fn moschus_condition_check(seq: &BestApproxSequence, n: usize) -> Result<MoschusReport> {
    if seq.target.n != 2 {
        return Err(Error::InvalidArgument(
            "the summability check needs a pair (n = 2 target)".into(),
        ));
    }
    if n < 3 {
        return Err(Error::InvalidArgument("n >= 3 is required".into()));
    }
    let recs = &seq.records;
    let mut terms = Vec::new();
    for j in 0..recs.len().saturating_sub(1) {
        let norm = &recs[j + 1].restricted_norm;
        let nr = Rational::from_integer(norm.clone());
        let l2 = log2_rat(&nr);
        let lnn = l2 * std::f64::consts::LN_2;
        let val = log2_rat(recs[j].value_enclosure.hi());
        let t = if lnn <= 0.0 {
            f64::NEG_INFINITY
        } else {
            (n as f64 * l2 + val) * std::f64::consts::LOG10_2 + lnn.log10()
        };
        terms.push(t);
    }
    let ratios: Vec<f64> = terms
        .windows(2)
        .filter(|w| w[0].is_finite() && w[1].is_finite())
        .map(|w| w[1] - w[0])
        .collect();
    let (j0, verdict) = if ratios.is_empty() {
        (None, MoschusVerdict::InsufficientData)
    } else {
        let start = ratios.len() / 2;
        let ok = ratios[start..].iter().all(|&r| r < 0.0);
        (
            Some(start + 1),
            if ok {
                MoschusVerdict::Decaying
            } else {
                MoschusVerdict::NotDecaying
            },
        )
    };
    Ok(MoschusReport {
        n,
        log10_terms: terms,
        log10_ratios: ratios,
        j0,
        verdict,
        note: "finite-data heuristic for the summability hypothesis, not a proof".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int_vec;

    #[test]
    fn theorem8_small_instance() {
        let t = build_theorem8(&rat(3, 1), 2).unwrap();
        assert_eq!(t.alpha, vec![1, 10]);
        assert_eq!(t.beta, vec![2, 19]);
        assert_eq!(t.f, int_vec(&[1, 513]));
        assert_eq!(t.g, int_vec(&[1, 129140164]));
        assert_eq!(
            predicted_tail_t8(&t),
            vec![
                int_vec(&[2, 0, -1]),
                int_vec(&[0, 9, -1]),
                int_vec(&[1024, 0, -513]),
                int_vec(&[0, 1162261467, -129140164])
            ]
        );
        assert!(matches!(
            build_theorem8(&rat(2, 1), 2),
            Err(Error::InvalidTau(_))
        ));
    }

    #[test]
    fn k_lattice_tau_condition() {
        assert!(build_k_lattice(3, 3, &rat(7, 2), 2).is_ok());
        assert!(matches!(
            build_k_lattice(3, 3, &rat(3, 1), 2),
            Err(Error::InvalidTau(_))
        ));
    }

    #[test]
    fn cf_pair_is_coprime() {
        let c = build_cf_pair(&rat(5, 2), 4, 64).unwrap();
        assert!(c.required_gcds().iter().all(|g| g.is_one()));
        assert!(matches!(
            build_cf_pair(&rat(2, 1), 4, 64),
            Err(Error::InvalidTau(_))
        ));
    }

    #[test]
    fn neu_tau_condition() {
        let g = RealSource::golden_fraction();
        assert!(build_theorem_neu(3, &rat(6, 1), std::slice::from_ref(&g), 3).is_ok());
        assert!(matches!(
            build_theorem_neu(3, &rat(5, 1), &[g], 3),
            Err(Error::InvalidTau(_))
        ));
    }
}
