//! End-to-end verification reports over the constructions.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bestapprox::{
    best_approximations_with, position_of, BestApproxSequence, SearchOptions, StopReason, Strategy,
};
use crate::constructions::{
    build_cf_pair, build_k_lattice, build_theorem8, build_theorem_neu, predicted_tail_k,
    predicted_tail_t8, TheoremNeuInstance,
};
use crate::dimension::{gamma_dims, misc_bounds, theta_lower_bounds};
use crate::error::{Error, Result};
use crate::exponents::{default_fasto_tolerance, estimate_exponents, fasto_check};
use crate::lattice::{
    abs_max, fractional_combination_counterexample, h_membership, primitive_pair_check, r_estimate,
    rank, supported_on,
};
use crate::minkowski::{lemur_check, successive_minima, theorem_neu_box_audit, BoxSpec};
use crate::numeric::{format_rational, rat, rat_to_f64, to_strings, Rational};
use crate::real_enclosure::{LinearFormTarget, RealSource};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    InsufficientData,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instance: Value,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    /// No check failed.
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn status_of(&self, name: &str) -> Option<Status> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.status)
    }

    /// Canonical JSON (no timings).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Wall-clock time per check, kept apart from the canonical report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub seconds: Vec<(String, f64)>,
}

struct Runner {
    checks: Vec<Check>,
    stats: RunStats,
}

impl Runner {
    fn new() -> Self {
        Runner {
            checks: Vec::new(),
            stats: RunStats::default(),
        }
    }

    fn push(&mut self, name: &str, status: Status, details: Value) {
        self.checks.push(Check {
            name: name.into(),
            status,
            details,
        });
    }

    /// Runs one check; errors become FAIL, or SKIP / INSUFFICIENT_DATA for budget cases.
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<(Status, Value)>) {
        let t = Instant::now();
        let (status, details) = match f() {
            Ok(x) => x,
            Err(e) => (
                error_status(&e),
                json!({"error": e.code(), "message": e.to_string()}),
            ),
        };
        self.stats
            .seconds
            .push((name.into(), t.elapsed().as_secs_f64()));
        self.push(name, status, details);
    }

    fn finish(self, instance: Value) -> (VerificationReport, RunStats) {
        (
            VerificationReport {
                instance,
                checks: self.checks,
            },
            self.stats,
        )
    }
}

fn error_status(e: &Error) -> Status {
    match e {
        Error::RangeTooLarge(_) => Status::Skip,
        Error::InsufficientData(_) => Status::InsufficientData,
        _ => Status::Fail,
    }
}

fn pass_if(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn vec_json(v: &[BigInt]) -> Value {
    json!(to_strings(v))
}

fn search(target: &LinearFormTarget, q_max: &BigInt, depth: u64) -> Result<BestApproxSequence> {
    let opts = SearchOptions {
        depth,
        strategy: Strategy::Auto,
        ..SearchOptions::default()
    };
    best_approximations_with(target, q_max, opts)
}

fn restricted(q: &[BigInt]) -> BigInt {
    abs_max(&q[..q.len() - 1])
}

/// Minimum number of predicted vectors in range for a tail comparison.
pub const MIN_TAIL: usize = 3;

/// Agreement of the computed records with the predicted vectors in range,
/// from the first predicted vector found onward. Returns the agreed tail.
fn tail_agreement(
    seq: &BestApproxSequence,
    predicted: &[Vec<BigInt>],
) -> (Status, Value, Vec<Vec<BigInt>>) {
    let in_range: Vec<Vec<BigInt>> = predicted
        .iter()
        .filter(|v| restricted(v) <= seq.q_max)
        .cloned()
        .collect();
    if let StopReason::ExactZero = seq.stop {
        return (
            Status::Fail,
            json!({"reason": "exact zero found"}),
            Vec::new(),
        );
    }
    if in_range.len() < MIN_TAIL {
        return (
            Status::Skip,
            json!({"reason": "insufficient range", "predicted_in_range": in_range.len()}),
            Vec::new(),
        );
    }
    let recs = seq.vectors();
    let first = in_range
        .iter()
        .enumerate()
        .find_map(|(k, v)| position_of(&recs, v).map(|r| (k, r)));
    let Some((k, r)) = first else {
        return (
            Status::Fail,
            json!({"reason": "no predicted vector among the records"}),
            Vec::new(),
        );
    };
    let got = &recs[r..];
    let want = &in_range[k..];
    if got == want {
        let details = json!({
            "first_predicted": k + 1,
            "first_record": r + 1,
            "agreed": want.len(),
        });
        (Status::Pass, details, want.to_vec())
    } else {
        let m = got
            .iter()
            .zip(want)
            .position(|(a, b)| a != b)
            .unwrap_or(got.len().min(want.len()));
        let details = json!({
            "first_predicted": k + 1,
            "first_record": r + 1,
            "mismatch_at_record": r + m + 1,
            "computed": got.get(m).map(|v| vec_json(v)),
            "predicted": want.get(m).map(|v| vec_json(v)),
            "computed_len": got.len(),
            "predicted_len": want.len(),
        });
        (Status::Fail, details, Vec::new())
    }
}

/// Each vector lies in exactly one `H_i`, and the indices cycle `1, ..., k`.
fn alternation(tail: &[Vec<BigInt>], k: usize) -> (Status, Value) {
    if tail.len() < 2 {
        return (Status::Skip, json!({"reason": "no agreed tail"}));
    }
    let mut prev: Option<usize> = None;
    for (j, v) in tail.iter().enumerate() {
        let h = h_membership(v);
        if h.len() != 1 {
            return (
                Status::Fail,
                json!({"index": j + 1, "vector": vec_json(v), "memberships": h}),
            );
        }
        if let Some(p) = prev {
            if h[0] != p % k + 1 {
                return (
                    Status::Fail,
                    json!({"index": j + 1, "vector": vec_json(v), "expected": p % k + 1}),
                );
            }
        }
        prev = Some(h[0]);
    }
    (Status::Pass, json!({"length": tail.len()}))
}

/// Relative tolerance for exponent matching.
pub fn exponent_tolerance() -> f64 {
    0.1
}

fn exponent_match(
    seq: &BestApproxSequence,
    omega: &Rational,
    omega_hat: &Rational,
) -> Result<(Status, Value)> {
    let est = estimate_exponents(seq, None)?;
    let (Some(o), Some(u)) = (&est.omega, &est.omega_hat) else {
        return Ok((Status::InsufficientData, json!({"reason": "no summary"})));
    };
    let (om, um) = (rat_to_f64(&o.mid()), rat_to_f64(&u.mid()));
    let (ot, ut) = (rat_to_f64(omega), rat_to_f64(omega_hat));
    let tol = exponent_tolerance();
    let ok = (om - ot).abs() <= tol * ot && (um - ut).abs() <= tol * ut;
    Ok((
        pass_if(ok),
        json!({
            "omega_est": format!("{om:.6}"),
            "omega_hat_est": format!("{um:.6}"),
            "omega_target": format_rational(omega),
            "omega_hat_target": format_rational(omega_hat),
            "window": est.window,
        }),
    ))
}

fn r_check(
    seq: &BestApproxSequence,
    expected: usize,
    tail: &[Vec<BigInt>],
) -> Result<(Status, Value)> {
    let recs: Vec<Vec<BigInt>> = match tail.is_empty() {
        true => seq.vectors(),
        false => tail.to_vec(),
    };
    let window = recs.len().saturating_sub(3).max(1);
    let f = r_estimate(&recs, window)?;
    Ok((
        pass_if(f.spanned_dim == expected),
        json!({"spanned_dim": f.spanned_dim, "stable": f.stable, "suffix_ranks": f.suffix_ranks, "expected": expected}),
    ))
}

/// Desk-scale Minkowski checks at the given `Q`: three independent solutions
/// are excluded at `c = 1/8`, and the product of minima lies in the declared range.
fn minkowski_checks(r: &mut Runner, target: &LinearFormTarget, qs: &[BigInt], depth: u64) {
    for q in qs {
        let Some(qv) = u64::try_from(q).ok().filter(|&x| x <= 16_000) else {
            r.push(
                &format!("lemur_q{q}"),
                Status::Skip,
                json!({"reason": "beyond desk cap"}),
            );
            continue;
        };
        r.run(&format!("lemur_q{qv}"), || {
            let rep = lemur_check(target, qv, &rat(1, 8), depth)?;
            Ok((
                pass_if(rep.count <= 2),
                json!({"count": rep.count, "c": "1/8"}),
            ))
        });
        r.run(&format!("minima_q{qv}"), || {
            let bx = BoxSpec::new(rat(qv as i64, 1), rat(2, 1), rat(1, 1))?;
            // widen the enumeration until no minimum can lie outside it
            let mut bound = qv;
            let mut m = successive_minima(target, &bx, bound, depth)?;
            while m.partial
                && bound < 4 * qv
                && ((4 * bound + 1) as f64).powi(target.n() as i32) <= crate::minkowski::DESK_CAP
            {
                bound *= 2;
                m = successive_minima(target, &bx, bound, depth)?;
            }
            let status = match m.within_bounds {
                Some(true) => Status::Pass,
                Some(false) => Status::Fail,
                None => Status::Skip,
            };
            Ok((
                status,
                json!({
                    "product_lower": format!("{:.6e}", rat_to_f64(&m.product_lower)),
                    "product_upper": format!("{:.6e}", rat_to_f64(&m.product_upper)),
                    "bounds": m.minkowski_bounds,
                    "partial": m.partial,
                    "search_bound": bound,
                }),
            ))
        });
    }
}

fn primitivity(pred: &[Vec<BigInt>]) -> Result<(Status, Value)> {
    let mut pairs = 0;
    for w in pred.windows(2) {
        if !primitive_pair_check(&w[0], &w[1])? {
            return Ok((
                Status::Fail,
                json!({"u": vec_json(&w[0]), "v": vec_json(&w[1]), "reason": "minors not coprime"}),
            ));
        }
        if let Some((g, h)) = fractional_combination_counterexample(&w[0], &w[1], 30) {
            return Ok((
                Status::Fail,
                json!({"u": vec_json(&w[0]), "v": vec_json(&w[1]), "g": format_rational(&g), "h": format_rational(&h)}),
            ));
        }
        pairs += 1;
    }
    Ok((Status::Pass, json!({"pairs": pairs, "max_denominator": 30})))
}

fn default_q_max(pred: &[Vec<BigInt>]) -> BigInt {
    pred.last()
        .map(|v| restricted(v))
        .unwrap_or_else(BigInt::one)
}

pub fn run_verify_t8(
    tau: &Rational,
    terms: usize,
    q_max: Option<BigInt>,
    depth: u64,
) -> (VerificationReport, RunStats) {
    let mut r = Runner::new();
    let mut instance = json!({"kind": "t8", "tau": format_rational(tau), "terms": terms});
    let inst = match build_theorem8(tau, terms) {
        Ok(i) => i,
        Err(e) => {
            r.push(
                "build",
                Status::Fail,
                json!({"error": e.code(), "message": e.to_string()}),
            );
            return r.finish(instance);
        }
    };
    let pred = predicted_tail_t8(&inst);
    let q_max = q_max.unwrap_or_else(|| inst.a[terms - 1].clone());
    instance["q_max"] = json!(q_max.to_string());
    r.push(
        "build",
        Status::Pass,
        json!({"alpha": inst.alpha, "beta": inst.beta}),
    );
    r.run("growth", || {
        let bad: Vec<usize> = inst
            .growth
            .iter()
            .enumerate()
            .filter(|(_, g)| g.deviation > g.bound)
            .map(|(i, _)| i)
            .collect();
        Ok((
            pass_if(bad.is_empty()),
            json!({"steps": inst.growth.len(), "violations": bad}),
        ))
    });
    r.run("primitivity", || primitivity(&pred));
    let target = match inst.target() {
        Ok(t) => t,
        Err(e) => {
            r.push("target", Status::Fail, json!({"error": e.code()}));
            return r.finish(instance);
        }
    };
    let seq = match search(&target, &q_max, depth) {
        Ok(s) => s,
        Err(e) => {
            r.push(
                "best_approximations",
                error_status(&e),
                json!({"error": e.code(), "message": e.to_string()}),
            );
            return r.finish(instance);
        }
    };
    let stop_ok = matches!(seq.stop, StopReason::QmaxReached);
    r.push(
        "best_approximations",
        if stop_ok { Status::Pass } else { Status::Skip },
        json!({"records": seq.len(), "stop": seq.stop}),
    );
    let (st, det, tail) = tail_agreement(&seq, &pred);
    r.push("tail_agreement", st, det);
    let (st, det) = alternation(&tail, 2);
    r.push("alternation", st, det);
    r.run("primitive_records", || {
        let bad: Vec<usize> = seq
            .vectors()
            .iter()
            .enumerate()
            .filter(|(_, v)| !crate::bestapprox::is_primitive(v))
            .map(|(i, _)| i + 1)
            .collect();
        Ok((pass_if(bad.is_empty()), json!({"non_primitive": bad})))
    });
    r.run("r_estimate", || r_check(&seq, 3, &[]));
    minkowski_checks(
        &mut r,
        &target,
        &[
            inst.b[0].clone(),
            inst.a.get(1).cloned().unwrap_or_default(),
        ],
        depth,
    );
    let omega = tau * tau - rat(1, 1);
    let omega_hat = &omega / tau;
    r.run("exponents", || exponent_match(&seq, &omega, &omega_hat));
    r.run("fasto", || {
        let f = fasto_check(&seq, &default_fasto_tolerance())?;
        Ok((
            pass_if(f.pass),
            serde_json::to_value(&f).expect("serializable"),
        ))
    });
    r.finish(instance)
}

pub fn run_verify_cf(
    tau: &Rational,
    terms: usize,
    window: usize,
    q_max: Option<BigInt>,
    depth: u64,
) -> (VerificationReport, RunStats) {
    let mut r = Runner::new();
    let mut instance =
        json!({"kind": "cf", "tau": format_rational(tau), "terms": terms, "window": window});
    let inst = match build_cf_pair(tau, terms, window) {
        Ok(i) => i,
        Err(e) => {
            r.push(
                "build",
                Status::Fail,
                json!({"error": e.code(), "message": e.to_string()}),
            );
            return r.finish(instance);
        }
    };
    r.push(
        "build",
        Status::Pass,
        json!({"scan_positions": inst.scan_positions}),
    );
    r.run("coprimality", || {
        let g = inst.required_gcds();
        let bad: Vec<usize> = g
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_one())
            .map(|(i, _)| i)
            .collect();
        Ok((
            pass_if(bad.is_empty()),
            json!({"gcds": g.len(), "violations": bad}),
        ))
    });
    r.run("growth", || {
        let d = inst.growth_deviations();
        let bad: Vec<usize> = d
            .iter()
            .enumerate()
            .filter(|(_, (x, t))| x.abs() > *t)
            .map(|(i, _)| i + 2)
            .collect();
        Ok((
            pass_if(bad.is_empty()),
            json!({"steps": d.len(), "violations": bad}),
        ))
    });
    let pred = inst.predicted_tail();
    r.run("primitivity", || primitivity(&pred));
    // the last convergents need partial quotients beyond the built range
    let q_max = q_max.unwrap_or_else(|| inst.s2[terms.saturating_sub(2)].clone());
    instance["q_max"] = json!(q_max.to_string());
    let target = match inst.target() {
        Ok(t) => t,
        Err(e) => {
            r.push("target", Status::Fail, json!({"error": e.code()}));
            return r.finish(instance);
        }
    };
    let seq = match search(&target, &q_max, depth) {
        Ok(s) => s,
        Err(e) => {
            r.push(
                "best_approximations",
                error_status(&e),
                json!({"error": e.code(), "message": e.to_string()}),
            );
            return r.finish(instance);
        }
    };
    r.push(
        "best_approximations",
        Status::Pass,
        json!({"records": seq.len(), "stop": seq.stop}),
    );
    let (st, det, tail) = tail_agreement(&seq, &pred);
    r.push("tail_agreement", st, det);
    let (st, det) = alternation(&tail, 2);
    r.push("alternation", st, det);
    let omega = tau * tau;
    r.run("exponents", || exponent_match(&seq, &omega, tau));
    r.run("fasto", || {
        let f = fasto_check(&seq, &default_fasto_tolerance())?;
        Ok((
            pass_if(f.pass),
            serde_json::to_value(&f).expect("serializable"),
        ))
    });
    r.finish(instance)
}

pub fn run_verify_klattice(
    n: usize,
    k: usize,
    tau: &Rational,
    terms: usize,
    q_max: Option<BigInt>,
    depth: u64,
) -> (VerificationReport, RunStats) {
    let mut r = Runner::new();
    let mut instance =
        json!({"kind": "klattice", "n": n, "k": k, "tau": format_rational(tau), "terms": terms});
    let inst = match build_k_lattice(n, k, tau, terms) {
        Ok(i) => i,
        Err(e) => {
            r.push(
                "build",
                Status::Fail,
                json!({"error": e.code(), "message": e.to_string()}),
            );
            return r.finish(instance);
        }
    };
    r.push(
        "build",
        Status::Pass,
        json!({"alpha": inst.alpha, "primes": inst.primes}),
    );
    let pred = predicted_tail_k(&inst);
    r.run("exclusive_membership", || {
        let bad: Vec<usize> = pred
            .iter()
            .enumerate()
            .filter(|(_, v)| h_membership(v).len() != 1)
            .map(|(i, _)| i + 1)
            .collect();
        Ok((
            pass_if(bad.is_empty()),
            json!({"vectors": pred.len(), "violations": bad}),
        ))
    });
    r.run("in_l_nk", || {
        let keep: Vec<usize> = (0..k).chain(std::iter::once(n)).collect();
        let ok = pred.iter().all(|v| supported_on(v, &keep));
        let span = rank(&pred);
        Ok((
            pass_if(ok && span == (k + 1).min(pred.len())),
            json!({"span": span}),
        ))
    });
    let q_max = q_max.unwrap_or_else(|| default_q_max(&pred));
    instance["q_max"] = json!(q_max.to_string());
    let target = match inst.target() {
        Ok(t) => t,
        Err(e) => {
            r.push("target", Status::Fail, json!({"error": e.code()}));
            return r.finish(instance);
        }
    };
    let seq = match search(&target, &q_max, depth) {
        Ok(s) => s,
        Err(e) => {
            r.push(
                "best_approximations",
                error_status(&e),
                json!({"error": e.code(), "message": e.to_string()}),
            );
            return r.finish(instance);
        }
    };
    r.push(
        "best_approximations",
        Status::Pass,
        json!({"records": seq.len(), "stop": seq.stop}),
    );
    let (st, det, tail) = tail_agreement(&seq, &pred);
    r.push("tail_agreement", st, det);
    let (st, det) = alternation(&tail, k);
    r.push("alternation", st, det);
    r.run("r_estimate", || r_check(&seq, k + 1, &tail));
    r.finish(instance)
}

/// `(√5-1)/2` followed by `√p - ⌊√p⌋` for `p = 2, 3, 7, 11, ...` (skipping 5).
pub fn default_neu_tail(count: usize) -> Result<Vec<RealSource>> {
    let mut out = vec![RealSource::golden_fraction()];
    for p in crate::numeric::first_primes(count + 1)
        .into_iter()
        .filter(|&p| p != 5)
    {
        let fl = crate::numeric::isqrt(&BigInt::from(p));
        let fl = i64::try_from(fl).expect("small");
        out.push(RealSource::quadratic(-fl, p as i64, 1)?);
    }
    out.truncate(count);
    Ok(out)
}

/// `σ = (3n-4 + (τ²-1)/τ) / 2`, the midpoint of the admissible range.
pub fn default_sigma(inst: &TheoremNeuInstance) -> Rational {
    (&inst.sigma_min + &inst.sigma_max) / rat(2, 1)
}

#[allow(clippy::too_many_arguments)]
pub fn run_verify_neu(
    n: usize,
    tau: &Rational,
    terms: usize,
    q_max: Option<BigInt>,
    depth: u64,
    sigma: Option<Rational>,
    audit_j: usize,
) -> (VerificationReport, RunStats) {
    let mut r = Runner::new();
    let mut instance = json!({"kind": "neu", "n": n, "tau": format_rational(tau), "terms": terms});
    let built =
        default_neu_tail(n.saturating_sub(2)).and_then(|t| build_theorem_neu(n, tau, &t, terms));
    let inst = match built {
        Ok(i) => i,
        Err(e) => {
            r.push(
                "build",
                Status::Fail,
                json!({"error": e.code(), "message": e.to_string()}),
            );
            return r.finish(instance);
        }
    };
    r.push(
        "build",
        Status::Pass,
        json!({"sigma_range": [format_rational(&inst.sigma_min), format_rational(&inst.sigma_max)], "tail_assumption": inst.tail_assumption}),
    );
    let q_max = q_max.unwrap_or_else(|| inst.pair.a[terms - 1].clone());
    instance["q_max"] = json!(q_max.to_string());
    let target = match inst.target() {
        Ok(t) => t,
        Err(e) => {
            r.push("target", Status::Fail, json!({"error": e.code()}));
            return r.finish(instance);
        }
    };
    let seq = match search(&target, &q_max, depth) {
        Ok(s) => s,
        Err(e) => {
            r.push(
                "best_approximations",
                error_status(&e),
                json!({"error": e.code(), "message": e.to_string()}),
            );
            return r.finish(instance);
        }
    };
    r.push(
        "best_approximations",
        Status::Pass,
        json!({"records": seq.len(), "stop": seq.stop}),
    );
    let threshold = inst
        .pair
        .a
        .get(1)
        .cloned()
        .unwrap_or_else(|| inst.pair.a[0].clone());
    let tail: Vec<Vec<BigInt>> = seq
        .vectors()
        .into_iter()
        .filter(|v| restricted(v) >= threshold)
        .collect();
    r.run("tail_in_l_n3", || {
        if tail.is_empty() {
            return Ok((
                Status::Skip,
                json!({"reason": "no records at or above A_2"}),
            ));
        }
        let keep = [0, 1, n];
        let bad: Vec<Value> = tail
            .iter()
            .filter(|v| !supported_on(v, &keep))
            .map(|v| vec_json(v))
            .collect();
        Ok((
            pass_if(bad.is_empty()),
            json!({"checked": tail.len(), "threshold": threshold.to_string(), "violations": bad}),
        ))
    });
    r.run("transversal_planes", || {
        if tail.len() < 2 {
            return Ok((
                Status::Skip,
                json!({"reason": "fewer than two tail records"}),
            ));
        }
        for w in tail.windows(2) {
            let d = &w[0][0] * &w[1][1] - &w[1][0] * &w[0][1];
            if d.is_zero() {
                return Ok((
                    Status::Fail,
                    json!({"u": vec_json(&w[0]), "v": vec_json(&w[1])}),
                ));
            }
        }
        Ok((Status::Pass, json!({"pairs": tail.len() - 1})))
    });
    let (st, det, _) = tail_agreement(&seq, &inst.candidates);
    r.push("tail_agreement", st, det);
    let sigma = sigma.unwrap_or_else(|| default_sigma(&inst));
    instance["sigma"] = json!(format_rational(&sigma));
    r.run("box_audit", || {
        let rep = theorem_neu_box_audit(&inst, audit_j, &sigma, None, depth)?;
        Ok((
            pass_if(rep.pass),
            serde_json::to_value(&rep).expect("serializable"),
        ))
    });
    r.finish(instance)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimRow {
    pub set: String,
    pub n: usize,
    pub k: Option<usize>,
    pub dimension: String,
    pub lower: Option<String>,
    pub upper: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimsTable {
    pub rows: Vec<DimRow>,
}

impl DimsTable {
    pub fn to_csv(&self) -> String {
        let o = |x: &Option<String>| x.clone().unwrap_or_default();
        let mut s = String::from("set,n,k,dimension,lower,upper\n");
        for r in &self.rows {
            let k = r.k.map(|k| k.to_string()).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.set,
                r.n,
                k,
                r.dimension,
                o(&r.lower),
                o(&r.upper)
            ));
        }
        s
    }
}

fn f12(x: f64) -> String {
    format!("{x:.12}")
}

pub fn run_report_dims(
    ns: std::ops::RangeInclusive<usize>,
    ks: Option<std::ops::RangeInclusive<usize>>,
) -> Result<DimsTable> {
    let mut rows = Vec::new();
    for n in ns {
        if n < 2 {
            return Err(Error::InvalidArgument("n >= 2 is required".into()));
        }
        let theta = theta_lower_bounds(n, n as f64)?;
        if n == 2 {
            let m = misc_bounds(2, 2)?;
            rows.push(DimRow {
                set: "Theta".into(),
                n,
                k: None,
                dimension: "hausdorff".into(),
                lower: Some(f12(theta.taurin.value)),
                upper: m.theta2_upper.as_ref().map(format_rational),
            });
            rows.push(DimRow {
                set: "Theta".into(),
                n,
                k: None,
                dimension: "packing".into(),
                lower: Some("1".into()),
                upper: None,
            });
        } else {
            let g = gamma_dims(n)?;
            let h = g.hausdorff.decimal[..g.hausdorff.decimal.len().min(14)].to_string();
            rows.push(DimRow {
                set: "Gamma".into(),
                n,
                k: None,
                dimension: "hausdorff".into(),
                lower: Some(h.clone()),
                upper: Some(h.clone()),
            });
            rows.push(DimRow {
                set: "Gamma".into(),
                n,
                k: None,
                dimension: "packing".into(),
                lower: Some(g.packing.exact.clone()),
                upper: Some(g.packing.exact.clone()),
            });
            rows.push(DimRow {
                set: "Theta".into(),
                n,
                k: None,
                dimension: "hausdorff".into(),
                lower: Some(f12(theta.taurin.value)),
                upper: Some(h),
            });
            rows.push(DimRow {
                set: "Theta".into(),
                n,
                k: None,
                dimension: "packing".into(),
                lower: Some(g.packing.exact.clone()),
                upper: Some(g.packing.exact),
            });
        }
        let kr = ks.clone().unwrap_or(2..=n);
        for k in kr.filter(|&k| k >= 2 && k <= n) {
            let m = misc_bounds(n, k)?;
            rows.push(DimRow {
                set: "Y".into(),
                n,
                k: Some(k),
                dimension: "hausdorff".into(),
                lower: None,
                upper: Some(format_rational(&m.y_bound)),
            });
        }
    }
    Ok(DimsTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_tau_gives_single_failure() {
        let (rep, _) = run_verify_t8(&rat(2, 1), 4, None, 1 << 12);
        assert_eq!(rep.checks.len(), 1);
        assert_eq!(rep.checks[0].status, Status::Fail);
        assert!(!rep.ok());
    }

    #[test]
    fn small_range_skips_tail() {
        let (rep, _) = run_verify_t8(&rat(3, 1), 4, Some(BigInt::from(10)), 1 << 12);
        assert_eq!(rep.status_of("tail_agreement"), Some(Status::Skip));
        assert_eq!(rep.status_of("primitivity"), Some(Status::Pass));
        assert_eq!(rep.status_of("growth"), Some(Status::Pass));
    }

    #[test]
    fn dims_table_rows() {
        let t = run_report_dims(2..=5, None).unwrap();
        let y: Vec<&DimRow> = t.rows.iter().filter(|r| r.set == "Y" && r.n == 5).collect();
        assert_eq!(y.len(), 4);
        assert_eq!(y[1].upper.as_deref(), Some("9/2"));
        let th2 = t
            .rows
            .iter()
            .find(|r| r.set == "Theta" && r.n == 2)
            .unwrap();
        assert_eq!(th2.upper.as_deref(), Some("7/5"));
        assert!(t.to_csv().starts_with("set,n,k"));
    }
}
