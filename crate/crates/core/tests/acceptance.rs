//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Criteria 5 and 6 each contain one sub-check whose stated value disagrees with
//! the formula it is attributed to; those lines print FAIL and are listed in
//! `KNOWN_FAILURES`. Any other failure makes the target exit non-zero.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use linform_core::bestapprox::{best_approximations, DEFAULT_DEPTH};
use linform_core::constructions::{
    build_cf_pair, build_k_lattice, build_theorem8, build_theorem_neu, predicted_tail_k,
    predicted_tail_t8,
};
use linform_core::dimension::{
    gamma_dims, misc_bounds, template_rates, theta_lower_bounds, TemplateSpec,
};
use linform_core::exponents::estimate_exponents;
use linform_core::lattice::tools::{
    abs_max, fractional_combination_counterexample, primitive_pair_check, r_estimate, two_minors,
};
use linform_core::minkowski::{lemur_check, successive_minima, theorem_neu_box_audit, BoxSpec};
use linform_core::numeric::{rat, rat_to_f64, Rational};
use linform_core::real_enclosure::LinearFormTarget;
use linform_core::verify::default_neu_tail;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// Sub-checks expected to fail: (criterion, sub-check name).
const KNOWN_FAILURES: &[(usize, &str)] = &[(5, "theta n=2"), (6, "delta_upper")];

struct Sub {
    name: String,
    ok: bool,
    detail: String,
}

fn sub(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Sub {
    Sub {
        name: name.into(),
        ok,
        detail: detail.into(),
    }
}

struct Outcome {
    subs: Vec<Sub>,
    seconds: f64,
}

fn timed(f: impl FnOnce() -> Vec<Sub>) -> Outcome {
    let t = Instant::now();
    let subs = f();
    Outcome {
        subs,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn restricted(q: &[BigInt]) -> BigInt {
    abs_max(&q[..q.len() - 1])
}

/// Whether `seq` contains the predicted vectors of norm at most `q_max` as a
/// contiguous suffix, starting at the first record that is predicted.
fn tail_matches(
    seq: &[Vec<BigInt>],
    predicted: &[Vec<BigInt>],
    q_max: &BigInt,
) -> (bool, usize, String) {
    let in_range: Vec<&Vec<BigInt>> = predicted
        .iter()
        .filter(|p| &restricted(p) <= q_max)
        .collect();
    let Some(start) = seq.iter().position(|q| in_range.contains(&q)) else {
        return (false, 0, "no predicted vector among the records".into());
    };
    let first = in_range.iter().position(|p| *p == &seq[start]).unwrap();
    let tail = &seq[start..];
    let expect = &in_range[first..];
    let ok = tail.len() == expect.len() && tail.iter().zip(expect).all(|(a, b)| a == *b);
    (
        ok,
        tail.len(),
        format!(
            "record {} = predicted {}, {} agreeing",
            start + 1,
            first + 1,
            tail.len()
        ),
    )
}

/// Supports alternate between `x_2 = 0` and `x_1 = 0`.
fn alternates(tail: &[Vec<BigInt>]) -> bool {
    let side = |q: &Vec<BigInt>| match (q[0].is_zero(), q[1].is_zero()) {
        (false, true) => Some(0),
        (true, false) => Some(1),
        _ => None,
    };
    tail.windows(2)
        .all(|w| matches!((side(&w[0]), side(&w[1])), (Some(a), Some(b)) if a != b))
}

fn criteria_1_4_7() -> (Outcome, Outcome, Outcome) {
    let t = Instant::now();
    let inst = build_theorem8(&rat(3, 1), 5).unwrap();
    let target = inst.target().unwrap();
    let q_max = inst.a[4].clone();
    let seq = best_approximations(&target, &q_max, DEFAULT_DEPTH).unwrap();
    let vectors = seq.vectors();
    let predicted = predicted_tail_t8(&inst);
    let (agree, len, detail) = tail_matches(&vectors, &predicted, &q_max);
    let alt = alternates(&vectors[vectors.len() - len..]);
    let c1 = Outcome {
        subs: vec![
            sub(
                "tail agreement",
                agree && seq.error().is_none(),
                format!("{} records up to A_5 = 2^7270; {detail}", seq.len()),
            ),
            sub("alternation", alt, format!("{len} tail records")),
        ],
        seconds: t.elapsed().as_secs_f64(),
    };

    let c4_pair = timed(|| {
        let r = r_estimate(&vectors, vectors.len() - 3).unwrap();
        let inside = r.basis_witness.dim_ambient == 3 && r.basis_witness.rank == 3;
        vec![sub(
            "pair",
            r.spanned_dim == 3 && r.stable && inside,
            format!(
                "spanned_dim {}, stable {}, suffix ranks {:?}",
                r.spanned_dim, r.stable, r.suffix_ranks
            ),
        )]
    });

    let c7 = timed(|| minkowski_subs(&target));
    (c1, c4_pair, c7)
}

fn minkowski_subs(target: &LinearFormTarget) -> Vec<Sub> {
    let mut out = Vec::new();
    for q in [9u64, 1024] {
        let lemur = lemur_check(target, q, &rat(1, 8), DEFAULT_DEPTH).unwrap();
        out.push(sub(
            format!("lemur Q={q}"),
            lemur.count <= 2,
            format!("{} independent solutions", lemur.count),
        ));
        let bx = BoxSpec::new(rat(q as i64, 1), rat(2, 1), rat(1, 1)).unwrap();
        let mut bound = q;
        let mut m = successive_minima(target, &bx, bound, DEFAULT_DEPTH).unwrap();
        while m.partial && bound < 4 * q {
            bound *= 2;
            m = successive_minima(target, &bx, bound, DEFAULT_DEPTH).unwrap();
        }
        let (k1, k2) = m.minkowski_bounds.clone().unwrap_or_default();
        out.push(sub(
            format!("minima Q={q}"),
            m.within_bounds == Some(true),
            format!(
                "product in [{:.4}, {:.4}], constants [{k1}, {k2}]",
                rat_to_f64(&m.product_lower),
                rat_to_f64(&m.product_upper)
            ),
        ));
    }
    out
}

fn criteria_2_3() -> (Outcome, Outcome) {
    let inst = build_theorem8(&rat(3, 1), 6).unwrap();
    let c2 = timed(|| {
        let target = inst.target().unwrap();
        let seq = best_approximations(&target, &inst.b[4], DEFAULT_DEPTH).unwrap();
        let est = estimate_exponents(&seq, None).unwrap();
        let far = |e: &linform_core::real_enclosure::Enclosure, x: f64| {
            (rat_to_f64(e.lo()) - x)
                .abs()
                .max((rat_to_f64(e.hi()) - x).abs())
        };
        let omega = est.omega.unwrap();
        let omega_hat = est.omega_hat.unwrap();
        let d1 = far(&omega, 8.0);
        let d2 = far(&omega_hat, 8.0 / 3.0);
        vec![
            sub(
                "omega",
                d1 <= 0.8,
                format!("{omega} (|est - 8| <= {d1:.4}) from {} records", seq.len()),
            ),
            sub(
                "omega_hat",
                d2 <= 0.27,
                format!("{omega_hat} (|est - 8/3| <= {d2:.4})"),
            ),
        ]
    });
    let c3 = timed(|| {
        let mut pairs = Vec::new();
        for j in 0..5 {
            pairs.push((format!("(v{}, w{})", j + 1, j + 1), &inst.v[j], &inst.w[j]));
            pairs.push((
                format!("(w{}, v{})", j + 1, j + 2),
                &inst.w[j],
                &inst.v[j + 1],
            ));
        }
        let mut bad = Vec::new();
        for (name, u, v) in &pairs {
            let g = two_minors(u, v)
                .iter()
                .fold(BigInt::zero(), |g, m| g.gcd(m));
            let ok = primitive_pair_check(u, v).unwrap()
                && g.is_one()
                && fractional_combination_counterexample(u, v, 30).is_none();
            if !ok {
                bad.push(name.clone());
            }
        }
        vec![sub(
            "pairs",
            bad.is_empty(),
            format!("{} pairs, minors coprime, no rational point with denominator <= 30; failing {bad:?}", pairs.len()),
        )]
    });
    (c2, c3)
}

fn criterion_4_klattice() -> Outcome {
    timed(|| {
        let inst = build_k_lattice(3, 3, &rat(7, 2), 2).unwrap();
        let target = inst.target().unwrap();
        let predicted = predicted_tail_k(&inst);
        let q_max = restricted(predicted.last().unwrap());
        let seq = best_approximations(&target, &q_max, DEFAULT_DEPTH).unwrap();
        let r = r_estimate(&seq.vectors(), seq.len() - 3).unwrap();
        vec![sub(
            "k-lattice",
            r.spanned_dim == 4,
            format!(
                "n=3, k=3, tau=7/2: spanned_dim {} over {} records",
                r.spanned_dim,
                seq.len()
            ),
        )]
    })
}

fn criterion_5() -> Outcome {
    timed(|| {
        let mut out = Vec::new();
        let g = gamma_dims(3).unwrap();
        out.push(sub(
            "gamma n=3",
            (g.hausdorff.value - 1.6743).abs() < 1e-4,
            format!("{:.12}", g.hausdorff.value),
        ));
        for (n, stated) in [(2, 0.2023), (3, 1.1009), (4, 2.0590)] {
            let t = theta_lower_bounds(n, n as f64).unwrap();
            out.push(sub(
                format!("theta n={n}"),
                (t.taurin.value - stated).abs() < 1e-4,
                format!("{:.12} vs {stated}", t.taurin.value),
            ));
        }
        let m = misc_bounds(2, 2).unwrap();
        out.push(sub(
            "misc",
            m.y_bound == rat(5, 3) && m.theta2_upper == Some(rat(7, 5)),
            format!(
                "y_bound {}, theta2_upper {:?}",
                m.y_bound,
                m.theta2_upper.map(|x| x.to_string())
            ),
        ));
        out
    })
}

fn criterion_6() -> Outcome {
    timed(|| {
        let spec = TemplateSpec {
            n: 2,
            tau: rat(3, 1),
            eps: rat(1, 1_000_000),
        };
        let r = template_rates(&spec).unwrap();
        vec![
            sub(
                "delta_upper",
                (r.delta_upper - 11.0 / 12.0).abs() < 1e-3,
                format!("{:.6} vs 11/12", r.delta_upper),
            ),
            sub(
                "delta_lower",
                (r.delta_lower - 11.0 / 56.0).abs() < 1e-3,
                format!("{:.6} vs 11/56", r.delta_lower),
            ),
        ]
    })
}

fn criterion_8() -> Outcome {
    timed(|| {
        let tail = default_neu_tail(1).unwrap();
        let inst = build_theorem_neu(3, &rat(6, 1), &tail, 3).unwrap();
        let target = inst.target().unwrap();
        let (a2, a3) = (&inst.pair.a[1], &inst.pair.a[2]);
        let seq = best_approximations(&target, a3, DEFAULT_DEPTH).unwrap();
        let large: Vec<&Vec<BigInt>> = seq
            .records
            .iter()
            .filter(|r| &r.restricted_norm >= a2)
            .map(|r| &r.q)
            .collect();
        let zero_third = !large.is_empty() && large.iter().all(|q| q[2].is_zero());
        let sigma = rat(21, 4);
        let audit = theorem_neu_box_audit(&inst, 1, &sigma, None, DEFAULT_DEPTH).unwrap();
        vec![
            sub(
                "third coordinate",
                zero_third && seq.error().is_none(),
                format!("{} of {} records have norm >= A_2", large.len(), seq.len()),
            ),
            sub(
                "box audit",
                audit.exponent < Rational::zero(),
                format!(
                    "exponent {} at sigma 21/4, eps {}",
                    audit.exponent, audit.eps
                ),
            ),
        ]
    })
}

fn criterion_9() -> Outcome {
    timed(|| {
        let inst = build_cf_pair(&rat(5, 2), 6, 64).unwrap();
        let mut gcds = Vec::new();
        for j in 0..inst.s1.len() {
            gcds.push(inst.s1[j].gcd(&inst.s2[j]));
            if j + 1 < inst.s1.len() {
                gcds.push(inst.s2[j].gcd(&inst.s1[j + 1]));
            }
        }
        let ok = gcds.iter().all(One::is_one) && inst.required_gcds().iter().all(One::is_one);
        vec![sub(
            "gcds",
            ok,
            format!("{} gcds, all equal to 1: {ok}", gcds.len()),
        )]
    })
}

fn run_property<S: Strategy>(
    name: &str,
    cases: u32,
    strat: S,
    f: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Sub {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    match runner.run(&strat, f) {
        Ok(()) => sub(name, true, format!("{cases} cases")),
        Err(e) => sub(name, false, e.to_string()),
    }
}

fn criterion_10() -> Outcome {
    timed(|| {
        vec![
            run_property(
                "nested refinement",
                64,
                (source(), 1u32..80, 1u32..80),
                |(s, k, e)| nested_refinement(&s, k, e),
            ),
            run_property(
                "linear form",
                64,
                (surd_pair(), small_vector(2), 4u32..120),
                |(t, q, k)| linearity(&t, &q, k),
            ),
            run_property(
                "compare_abs antisymmetry",
                64,
                (surd_pair(), small_vector(2), small_vector(2)),
                |(t, a, b)| antisymmetry(&t, &a, &b),
            ),
            run_property(
                "sequence monotonicity",
                24,
                (surd_pair(), 5i64..30),
                |(t, q)| monotone_and_oracle(&t, q),
            ),
            run_property("o_j >= u_j", 16, surd_pair(), |t| o_dominates_u(&t, 20_000)),
            run_property(
                "lemur monotone in c",
                24,
                (surd_pair(), 2u64..40, 1u32..6),
                |(t, q, h)| lemur_monotone(&t, q, h),
            ),
            run_property("report determinism", 2, Just(5usize), reports_deterministic),
        ]
    })
}

fn main() -> ExitCode {
    let total = Instant::now();
    let (o1, o4a, o7, o2, o3, o4b, o5, o6, o8, o9, o10) = std::thread::scope(|s| {
        let h147 = s.spawn(criteria_1_4_7);
        let h23 = s.spawn(criteria_2_3);
        let h4 = s.spawn(criterion_4_klattice);
        let h8 = s.spawn(criterion_8);
        let h10 = s.spawn(criterion_10);
        let (o5, o6, o9) = (criterion_5(), criterion_6(), criterion_9());
        let (o1, o4a, o7) = h147.join().unwrap();
        let (o2, o3) = h23.join().unwrap();
        (
            o1,
            o4a,
            o7,
            o2,
            o3,
            h4.join().unwrap(),
            o5,
            o6,
            h8.join().unwrap(),
            o9,
            h10.join().unwrap(),
        )
    });
    let o4 = Outcome {
        seconds: o4a.seconds + o4b.seconds,
        subs: o4a.subs.into_iter().chain(o4b.subs).collect(),
    };
    let all = [o1, o2, o3, o4, o5, o6, o7, o8, o9, o10];
    let mut unexpected = Vec::new();
    for (i, o) in all.iter().enumerate() {
        let c = i + 1;
        let pass = o.subs.iter().all(|s| s.ok);
        let parts: Vec<String> = o
            .subs
            .iter()
            .map(|s| {
                format!(
                    "{} {} ({})",
                    s.name,
                    if s.ok { "ok" } else { "FAILED" },
                    s.detail
                )
            })
            .collect();
        println!(
            "criterion {c:>2}: {} [{:.1} s] {}",
            if pass { "PASS" } else { "FAIL" },
            o.seconds,
            parts.join("; ")
        );
        for s in o.subs.iter().filter(|s| !s.ok) {
            if !KNOWN_FAILURES.contains(&(c, s.name.as_str())) {
                unexpected.push(format!("criterion {c}: {}", s.name));
            }
        }
    }
    if all[4].seconds >= 1.0 {
        unexpected.push(format!("criterion 5 took {:.2} s", all[4].seconds));
    }
    println!("total {:.1} s", total.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        println!("all failures are the documented ones: {KNOWN_FAILURES:?}");
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
