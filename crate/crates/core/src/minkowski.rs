//! Successive minima of the boxes `|x_i| <= Q`, `|x·ξ*| <= c Q^{-e}` by
//! exhaustive enumeration, and the finite checks built on them.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bestapprox::shell::{
    abs_bounds, cube_size, cube_vector, fixed_coords, form_ulps, FixedCoords,
};
use crate::bestapprox::{best_approximations_with, SearchOptions, Strategy};
use crate::constructions::TheoremNeuInstance;
use crate::error::{Error, Result};
use crate::lattice::rank;
use crate::numeric::{format_rational, log2_rat, rat, rat_to_f64, serde_rational, Rational};
use crate::real_enclosure::{abs_value, depth_schedule, AbsValue, Enclosure, LinearFormTarget};

/// Largest `(2N+1)^n` enumerated.
pub const DESK_CAP: f64 = 1e9;

/// The box `|x_i| <= Q` (`i <= n`), `|x·ξ*| <= c Q^{-exponent}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSpec {
    #[serde(with = "serde_rational")]
    pub q: Rational,
    #[serde(with = "serde_rational")]
    pub exponent: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
}

impl BoxSpec {
    pub fn new(q: Rational, exponent: Rational, c: Rational) -> Result<Self> {
        if q < Rational::one() || !c.is_positive() {
            return Err(Error::InvalidArgument("need Q >= 1 and c > 0".into()));
        }
        if !exponent.is_integer() {
            return Err(Error::Unsupported("non-integral box exponents".into()));
        }
        Ok(BoxSpec { q, exponent, c })
    }

    /// Half-width `c Q^{-exponent}` of the last constraint.
    pub fn delta(&self) -> Rational {
        let e = self.exponent.to_integer().to_i32().expect("small exponent");
        &self.c * rat_pow(&self.q, -e)
    }

    /// `2^{n+1} c Q^{n - exponent}`.
    pub fn volume(&self, n: usize) -> Rational {
        let e = self.exponent.to_integer().to_i32().expect("small exponent");
        rat(1 << (n + 1), 1) * &self.c * rat_pow(&self.q, n as i32 - e)
    }
}

fn rat_pow(x: &Rational, e: i32) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuccessiveMinimaResult {
    pub lambdas: Vec<Enclosure>,
    #[serde(with = "crate::numeric::serde_bigint_mat")]
    pub witnesses: Vec<Vec<BigInt>>,
    #[serde(with = "serde_rational")]
    pub product_lower: Rational,
    #[serde(with = "serde_rational")]
    pub product_upper: Rational,
    /// `[2^{-(n+1)}/(c (n+1)!), 2^{n+1}/c]`, declared when `exponent = n`.
    pub minkowski_bounds: Option<(String, String)>,
    pub within_bounds: Option<bool>,
    /// Some minimum may be attained outside `‖x̂‖ <= search_bound`.
    pub partial: bool,
}

/// Enclosure of `|q·ξ*|` with relative width at most `2^-40`, or the best available.
fn sharp_abs(q: &[BigInt], target: &LinearFormTarget, max_depth: u64) -> Enclosure {
    let mut last = None;
    for d in depth_schedule(max_depth) {
        let v = abs_value(q, target, d);
        let e = v.to_enclosure();
        let done = match &v {
            AbsValue::Exact(_) => true,
            AbsValue::Approx(_) => e.lo().is_positive() && e.width() * rat(1 << 40, 1) <= *e.lo(),
        };
        if done {
            return e;
        }
        last = Some(e);
    }
    last.expect("at least one depth")
}

fn check_cap(n: usize, bound: u64) -> Result<()> {
    if ((2 * bound + 1) as f64).powi(n as i32) > DESK_CAP {
        return Err(Error::RangeTooLarge(format!(
            "(2*{bound}+1)^{n} exceeds the desk cap"
        )));
    }
    Ok(())
}

fn working_coords(target: &LinearFormTarget, bound: u64) -> Result<FixedCoords> {
    fixed_coords(target, bound.max(1))
        .ok_or_else(|| Error::RangeTooLarge("no 128-bit working precision".into()))
}

fn to_vec(xhat: &[i64], c: i128) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = xhat.iter().map(|&x| BigInt::from(x)).collect();
    v.push(BigInt::from(c));
    v
}

/// All `(x̂, c)` with `0 < ‖x̂‖ <= bound` (up to sign) and `|x·ξ*| <= delta`
/// according to the fixed-point bounds; a superset of the true solutions.
fn scan_small(
    fc: &FixedCoords,
    n: usize,
    bound: u64,
    delta: f64,
    nearest_only: bool,
) -> Vec<Vec<BigInt>> {
    if bound == 0 {
        return Vec::new();
    }
    let one: i128 = 1 << fc.bits;
    let dulps = (delta * (one as f64) * (1.0 + 1e-9)).min(1e36) as i128 + 2;
    let total = cube_size(n, bound).expect("checked against the cap");
    const CHUNK: u64 = 1 << 14;
    (0..total.div_ceil(CHUNK))
        .into_par_iter()
        .flat_map_iter(|ch| {
            let mut out = Vec::new();
            for idx in ch * CHUNK..((ch + 1) * CHUNK).min(total) {
                let x = cube_vector(n, bound, idx);
                let (s, w) = form_ulps(fc, &x);
                let (lo, hi) = if nearest_only {
                    (-((s + w) >> fc.bits) - 1, -((s - w) >> fc.bits))
                } else {
                    (
                        (-(s + w) - dulps).div_euclid(one),
                        (-(s - w) + dulps).div_euclid(one) + 1,
                    )
                };
                for c in lo..=hi {
                    let (l, _) = abs_bounds(s - w + c * one, s + w + c * one);
                    if l <= dulps {
                        out.push(to_vec(&x, c));
                    }
                }
            }
            out
        })
        .collect()
}

/// Greedy choice of independent vectors in order of the given weights.
fn greedy(items: &[(Vec<BigInt>, Rational)], want: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        items[a]
            .1
            .cmp(&items[b].1)
            .then(items[a].0.cmp(&items[b].0))
    });
    let mut picked: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for i in order {
        if picked.len() == want {
            break;
        }
        basis.push(items[i].0.clone());
        if rank(&basis) == basis.len() {
            picked.push(i);
        } else {
            basis.pop();
        }
    }
    picked
}

pub fn successive_minima(
    target: &LinearFormTarget,
    bx: &BoxSpec,
    search_bound: u64,
    depth: u64,
) -> Result<SuccessiveMinimaResult> {
    let n = target.n();
    check_cap(n, search_bound)?;
    let fc = working_coords(target, search_bound)?;
    let delta = bx.delta();
    let qf = rat_to_f64(&bx.q);
    let df = rat_to_f64(&delta);
    let gauge = |norm: &BigInt, l: &Rational| -> Rational {
        let a = Rational::from_integer(norm.clone()) / &bx.q;
        let b = l / &delta;
        a.max(b)
    };
    let mut t = 1.0f64;
    let t_all = (search_bound as f64 / qf).max(1.0 / df) * 4.0;
    loop {
        let reach = ((t * qf).floor() as u64).min(search_bound);
        let mut cands = scan_small(&fc, n, reach, t * df, true);
        let mut unit = vec![BigInt::zero(); n];
        unit.push(BigInt::one());
        cands.push(unit);
        let items: Vec<(Vec<BigInt>, Enclosure)> = cands
            .into_par_iter()
            .map(|v| {
                let e = sharp_abs(&v, target, depth);
                let nrm = v[..n].iter().map(|x| x.abs()).max().unwrap_or_default();
                let g = Enclosure::new(gauge(&nrm, e.lo()), gauge(&nrm, e.hi())).expect("ordered");
                (v, g)
            })
            .collect();
        let hi_items: Vec<(Vec<BigInt>, Rational)> = items
            .iter()
            .map(|(v, g)| (v.clone(), g.hi().clone()))
            .collect();
        let lo_items: Vec<(Vec<BigInt>, Rational)> = items
            .iter()
            .map(|(v, g)| (v.clone(), g.lo().clone()))
            .collect();
        let up = greedy(&hi_items, n + 1);
        let lo = greedy(&lo_items, n + 1);
        let complete =
            up.len() == n + 1 && rat_to_f64(&hi_items[*up.last().expect("nonempty")].1) <= t;
        if complete || t > t_all {
            let mut lambdas = Vec::new();
            let mut witnesses = Vec::new();
            let mut run_hi = Rational::zero();
            for (k, &i) in up.iter().enumerate() {
                run_hi = run_hi.max(hi_items[i].1.clone());
                let l = lo
                    .get(k)
                    .map(|&j| lo_items[j].1.clone())
                    .unwrap_or_else(Rational::zero);
                lambdas
                    .push(Enclosure::new(l.min(run_hi.clone()), run_hi.clone()).expect("ordered"));
                witnesses.push(hi_items[i].0.clone());
            }
            let nq = Rational::from_integer(BigInt::from(search_bound)) / &bx.q;
            let partial = up.len() < n + 1 || lambdas.iter().any(|l| *l.hi() > nq);
            // points outside the range have gauge above N/Q
            if partial {
                for l in lambdas.iter_mut() {
                    if *l.lo() > nq {
                        *l = Enclosure::new(nq.clone(), l.hi().clone()).expect("ordered");
                    }
                }
            }
            let product_lower = lambdas.iter().fold(Rational::one(), |a, l| a * l.lo());
            let product_upper = lambdas.iter().fold(Rational::one(), |a, l| a * l.hi());
            let (minkowski_bounds, within_bounds) =
                if bx.exponent == rat(n as i64, 1) && up.len() == n + 1 {
                    let fact: i64 = (1..=(n as i64 + 1)).product();
                    let k1 = rat(1, 1 << (n + 1)) / (&bx.c * rat(fact, 1));
                    let k2 = rat(1 << (n + 1), 1) / &bx.c;
                    let ok = product_lower >= k1 && product_upper <= k2;
                    (Some((format_rational(&k1), format_rational(&k2))), Some(ok))
                } else {
                    (None, None)
                };
            return Ok(SuccessiveMinimaResult {
                lambdas,
                witnesses,
                product_lower,
                product_upper,
                minkowski_bounds,
                within_bounds,
                partial,
            });
        }
        t *= 4.0;
    }
}

/// Certified `|q·ξ*| < delta` (strict), refining as needed.
fn strictly_below(
    q: &[BigInt],
    target: &LinearFormTarget,
    delta: &Rational,
    max_depth: u64,
) -> Result<bool> {
    for d in depth_schedule(max_depth) {
        let e = abs_value(q, target, d).to_enclosure();
        if e.hi() < delta {
            return Ok(true);
        }
        if e.lo() >= delta {
            return Ok(false);
        }
    }
    Err(Error::exhausted(q, q))
}

/// Largest independent subset (greedy, in enumeration order) of a solution set.
fn independent_subset(sols: &[Vec<BigInt>], want: usize) -> Vec<Vec<BigInt>> {
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut sorted = sols.to_vec();
    sorted.sort_by(|a, b| {
        let na = a.iter().map(|x| x.abs()).max();
        let nb = b.iter().map(|x| x.abs()).max();
        na.cmp(&nb).then(a.cmp(b))
    });
    for v in sorted {
        if basis.len() == want {
            break;
        }
        basis.push(v);
        if rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

/// Integer solutions of `‖x̂‖ <= bound`, `|x·ξ*| < delta`, `x ≠ 0`, up to sign.
fn solutions_below(
    target: &LinearFormTarget,
    bound: u64,
    delta: &Rational,
    depth: u64,
) -> Result<Vec<Vec<BigInt>>> {
    let n = target.n();
    check_cap(n, bound)?;
    let fc = working_coords(target, bound)?;
    let df = rat_to_f64(delta);
    let mut cands = scan_small(&fc, n, bound, df, false);
    // x̂ = 0: constants 0 < c < delta
    let mut c = BigInt::one();
    while Rational::from_integer(c.clone()) < *delta && c <= BigInt::from(n + 1) {
        let mut v = vec![BigInt::zero(); n];
        v.push(c.clone());
        cands.push(v);
        c += 1;
    }
    let flags: Vec<Result<bool>> = cands
        .par_iter()
        .map(|v| strictly_below(v, target, delta, depth))
        .collect();
    let mut out = Vec::new();
    for (v, f) in cands.into_iter().zip(flags) {
        if f? {
            out.push(v);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemurReport {
    pub q: u64,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    /// Maximal number of linearly independent solutions.
    pub count: usize,
    #[serde(with = "crate::numeric::serde_bigint_mat")]
    pub witnesses: Vec<Vec<BigInt>>,
}

/// Independent solutions of `|b_i| <= Q`, `|b·ξ*| < c Q^{-n}`.
pub fn lemur_check(
    target: &LinearFormTarget,
    q: u64,
    c: &Rational,
    depth: u64,
) -> Result<LemurReport> {
    if q < 1 || !c.is_positive() {
        return Err(Error::InvalidArgument("need Q >= 1 and c > 0".into()));
    }
    let n = target.n();
    let delta = c / rat_pow(&Rational::from_integer(BigInt::from(q)), n as i32);
    let sols = solutions_below(target, q, &delta, depth)?;
    let w = independent_subset(&sols, n + 1);
    Ok(LemurReport {
        q,
        c: c.clone(),
        count: w.len(),
        witnesses: w,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemurSweep {
    pub q: u64,
    pub steps: Vec<LemurReport>,
    /// Largest tested `c` with at most `n` independent solutions.
    pub largest_c_ok: Option<String>,
}

/// `c = c_start, c_start/2, ...` for `count` steps.
pub fn lemur_sweep(
    target: &LinearFormTarget,
    q: u64,
    c_start: &Rational,
    count: usize,
    depth: u64,
) -> Result<LemurSweep> {
    let n = target.n();
    let mut steps = Vec::new();
    let mut c = c_start.clone();
    for _ in 0..count {
        steps.push(lemur_check(target, q, &c, depth)?);
        c /= rat(2, 1);
    }
    let largest_c_ok = steps
        .iter()
        .find(|s| s.count <= n)
        .map(|s| format_rational(&s.c));
    Ok(LemurSweep {
        q,
        steps,
        largest_c_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum LlamaStatus {
    Found,
    Failure,
    /// A tail coordinate is rational, so the form has exact zeros.
    NonIrrational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlamaResult {
    pub status: LlamaStatus,
    #[serde(with = "crate::numeric::serde_bigint_mat")]
    pub vectors: Vec<Vec<BigInt>>,
    /// `exhaustive` or `best_approximations`.
    pub method: String,
}

/// Vectors are found exhaustively while `(2Q+1)^m` stays below this.
pub const LLAMA_EXHAUSTIVE_LIMIT: f64 = 1e7;

/// Certified `|u·ξ*| <= Q^{-m+eps}`: `|L|^d Q^{md} <= Q^p` for `eps = p/d`.
fn llama_bound_holds(
    u: &[BigInt],
    target: &LinearFormTarget,
    q: &BigInt,
    eps: &Rational,
    depth: u64,
) -> Result<bool> {
    let m = target.n() as u64;
    let p = eps
        .numer()
        .to_i64()
        .ok_or_else(|| Error::InvalidArgument("eps too large".into()))?;
    let d = eps
        .denom()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("eps too large".into()))?;
    let qr = Rational::from_integer(q.clone());
    let lhs_scale = rat_pow(&qr, (m * d) as i32);
    let rhs = rat_pow(&qr, p as i32);
    for dd in depth_schedule(depth) {
        let e = abs_value(u, target, dd).to_enclosure();
        let hi = num_traits::pow(e.hi().clone(), d as usize) * &lhs_scale;
        if hi <= rhs {
            return Ok(true);
        }
        let lo = num_traits::pow(e.lo().clone(), d as usize) * &lhs_scale;
        if lo > rhs {
            return Ok(false);
        }
    }
    Err(Error::exhausted(u, u))
}

/// `n-1 = m+1` independent `u` with `‖û‖ <= Q` and `|u·(ξ_3, ..., ξ_n, 1)| <= Q^{-m+eps}`.
pub fn llama_solutions(
    tail: &LinearFormTarget,
    q: &BigInt,
    eps: &Rational,
    depth: u64,
) -> Result<LlamaResult> {
    let m = tail.n();
    if q < &BigInt::one() || !eps.is_positive() {
        return Err(Error::InvalidArgument("need Q >= 1 and eps > 0".into()));
    }
    if tail.coords().iter().any(|c| c.exact_value().is_some()) {
        return Ok(LlamaResult {
            status: LlamaStatus::NonIrrational,
            vectors: Vec::new(),
            method: "none".into(),
        });
    }
    let small = q
        .to_u64()
        .filter(|&b| ((2 * b + 1) as f64).powi(m as i32) <= LLAMA_EXHAUSTIVE_LIMIT);
    let (cands, method) = match small {
        Some(b) => {
            // every solution has |L| <= Q^{-m+eps} <= 1
            let lq = log2_rat(&Rational::from_integer(q.clone()));
            let df = (lq * (rat_to_f64(eps) - m as f64)).exp2() * (1.0 + 1e-6);
            let fc = working_coords(tail, b)?;
            let mut c = scan_small(&fc, m, b, df, false);
            let mut e = vec![BigInt::zero(); m];
            e.push(BigInt::one());
            c.push(e);
            (c, "exhaustive")
        }
        None => {
            let opts = SearchOptions {
                depth,
                strategy: Strategy::Lattice,
                ..SearchOptions::default()
            };
            let seq = best_approximations_with(tail, q, opts)?.complete()?;
            let mut c = seq.vectors();
            let mut e = vec![BigInt::zero(); m];
            e.push(BigInt::one());
            c.push(e);
            (c, "best_approximations")
        }
    };
    let mut sols = Vec::new();
    for u in cands {
        if llama_bound_holds(&u, tail, q, eps, depth)? {
            sols.push(u);
        }
    }
    let vectors = independent_subset_large_first(&sols, m + 1);
    let status = if vectors.len() == m + 1 {
        LlamaStatus::Found
    } else {
        LlamaStatus::Failure
    };
    Ok(LlamaResult {
        status,
        vectors,
        method: method.into(),
    })
}

/// Independent subset preferring large norms (the strongest approximations).
fn independent_subset_large_first(sols: &[Vec<BigInt>], want: usize) -> Vec<Vec<BigInt>> {
    let mut sorted = sols.to_vec();
    let n = sorted.first().map_or(0, |v| v.len() - 1);
    sorted.sort_by(|a, b| {
        let na = a[..n].iter().map(|x| x.abs()).max();
        let nb = b[..n].iter().map(|x| x.abs()).max();
        nb.cmp(&na).then(a.cmp(b))
    });
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for v in sorted {
        if basis.len() == want {
            break;
        }
        basis.push(v);
        if rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    basis
}

/// Required scaling of one vector against `K(T)`, as `log_T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledVector {
    pub label: String,
    #[serde(with = "crate::numeric::serde_bigint_vec")]
    pub q: Vec<BigInt>,
    /// `log_T max(‖x̂‖/T, |x·ξ*| T^n)`.
    pub log_t_scaling: f64,
    /// Predicted bound `log_T` from the proof (up to constants).
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeuAuditReport {
    pub n: usize,
    pub j: usize,
    #[serde(with = "serde_rational")]
    pub sigma: Rational,
    /// `3(n-σ)/(1+σ) + 2(n-2)/(n-1)`: the product exponent at `ε = 0`.
    #[serde(with = "serde_rational")]
    pub exponent_at_zero: Rational,
    /// The exponent is negative exactly for `ε` below this.
    #[serde(with = "serde_rational")]
    pub eps_threshold: Rational,
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    #[serde(with = "serde_rational")]
    pub exponent: Rational,
    pub log2_t: f64,
    pub log2_q: f64,
    pub llama: LlamaResult,
    pub vectors: Vec<ScaledVector>,
    /// `v_{j,1} v_{j+1,2} - v_{j+1,1} v_{j,2} ≠ 0`.
    pub planes_transversal: bool,
    /// Rank of `{v_j, v_{j+1}, y_1, ..., y_{n-1}}`.
    pub span_rank: usize,
    pub pass: bool,
}

/// `3(n-σ)/(1+σ) + 2(n-2)/(n-1) + 3(n-2)ε`.
pub fn neu_exponent(n: usize, sigma: &Rational, eps: &Rational) -> Rational {
    let nr = rat(n as i64, 1);
    rat(3, 1) * (&nr - sigma) / (rat(1, 1) + sigma)
        + rat(2 * (n as i64 - 2), n as i64 - 1)
        + rat(3 * (n as i64 - 2), 1) * eps
}

/// Llama parameter used by the audit when the proof's `Q` exceeds desk scale.
pub const AUDIT_LLAMA_Q_CAP_BITS: u64 = 256;

pub fn theorem_neu_box_audit(
    inst: &TheoremNeuInstance,
    j: usize,
    sigma: &Rational,
    eps: Option<Rational>,
    depth: u64,
) -> Result<NeuAuditReport> {
    let n = inst.n;
    if !(sigma > &inst.sigma_min && sigma < &inst.sigma_max) {
        return Err(Error::InvalidArgument(format!(
            "sigma must lie strictly between {} and {}",
            inst.sigma_min, inst.sigma_max
        )));
    }
    if j < 1 || j + 1 > inst.candidates.len() {
        return Err(Error::InvalidArgument(format!(
            "j must be in 1..={}",
            inst.candidates.len() - 1
        )));
    }
    let e0 = neu_exponent(n, sigma, &Rational::zero());
    let thr = -&e0 / rat(3 * (n as i64 - 2), 1);
    let eps = eps.unwrap_or_else(|| {
        if thr.is_positive() {
            &thr / rat(2, 1)
        } else {
            rat(1, 100)
        }
    });
    let e = neu_exponent(n, sigma, &eps);
    let target = inst.target()?;
    let vj = inst.candidates[j - 1].clone();
    let vj1 = inst.candidates[j].clone();
    let norm1 = vj1[..n].iter().map(|x| x.abs()).max().unwrap_or_default();
    let l2n = log2_rat(&Rational::from_integer(norm1));
    let sf = rat_to_f64(sigma);
    let log2_t = l2n * (sf + 1.0) / (n as f64 + 1.0);
    let log2_q = l2n * (sf + 1.0) / (n as f64 - 1.0);
    let llama_q = if log2_q < AUDIT_LLAMA_Q_CAP_BITS as f64 {
        BigInt::from(log2_q.exp2().floor().max(1.0) as u128)
    } else {
        BigInt::one() << AUDIT_LLAMA_Q_CAP_BITS
    };
    let tail = LinearFormTarget::from_shared(target.coords()[2..].to_vec())?;
    let llama = llama_solutions(&tail, &llama_q, &eps, depth)?;
    let ys: Vec<Vec<BigInt>> = llama
        .vectors
        .iter()
        .map(|u| {
            let mut y = vec![BigInt::zero(), BigInt::zero()];
            y.extend(u.iter().cloned());
            y
        })
        .collect();
    let scale = |q: &[BigInt]| -> f64 {
        let nrm = q[..n].iter().map(|x| x.abs()).max().unwrap_or_default();
        let a = if nrm.is_zero() {
            f64::NEG_INFINITY
        } else {
            log2_rat(&Rational::from_integer(nrm)) - log2_t
        };
        let v = sharp_abs(q, &target, depth);
        let b = log2_rat(v.hi()) + n as f64 * log2_t;
        a.max(b) / log2_t
    };
    let first = (n as f64 - sf) / (1.0 + sf);
    let later = 2.0 / (n as f64 - 1.0) + 3.0 * rat_to_f64(&eps);
    let mut vectors = vec![
        ScaledVector {
            label: format!("v_{j}"),
            log_t_scaling: scale(&vj),
            predicted: first,
            q: vj.clone(),
        },
        ScaledVector {
            label: format!("v_{}", j + 1),
            log_t_scaling: scale(&vj1),
            predicted: first,
            q: vj1.clone(),
        },
    ];
    for (i, y) in ys.iter().enumerate() {
        vectors.push(ScaledVector {
            label: format!("y_{}", i + 1),
            log_t_scaling: scale(y),
            predicted: later,
            q: y.clone(),
        });
    }
    let minor = &vj[0] * &vj1[1] - &vj1[0] * &vj[1];
    let mut all = vec![vj, vj1];
    all.extend(ys);
    let span_rank = rank(&all);
    let pass = e.is_negative()
        && !minor.is_zero()
        && span_rank == n + 1
        && llama.status == LlamaStatus::Found;
    Ok(NeuAuditReport {
        n,
        j,
        sigma: sigma.clone(),
        exponent_at_zero: e0,
        eps_threshold: thr,
        eps,
        exponent: e,
        log2_t,
        log2_q,
        llama,
        vectors,
        planes_transversal: !minor.is_zero(),
        span_rank,
        pass,
    })
}
