#![allow(dead_code)]

use linform_core::bestapprox::{best_approximations, BestApproxSequence};
use linform_core::exponents::estimate_exponents;
use linform_core::minkowski::lemur_check;
use linform_core::numeric::Rational;
use linform_core::real_enclosure::{
    compare_abs_with_depth, linear_form_enclose, linear_form_enclose_detailed, AbsOrder, CfTail,
    Enclosure, LinearFormTarget, RealSource,
};
use linform_core::verify::{run_report_dims, run_verify_klattice};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const DEPTH: u64 = 1 << 12;

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn pow2_inv(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

fn is_square(q: i64) -> bool {
    let r = (q as f64).sqrt().round() as i64;
    r * r == q
}

/// `(p + sqrt(q)) / r` with `q` not a square.
pub fn surd() -> impl Strategy<Value = RealSource> {
    (-6i64..=6, 2i64..60, 1i64..8)
        .prop_filter("square radicand", |(_, q, _)| !is_square(*q))
        .prop_map(|(p, q, r)| RealSource::quadratic(p, q, r).expect("valid surd"))
}

pub fn source() -> impl Strategy<Value = RealSource> {
    let rational = (-50i64..50, 1i64..40)
        .prop_map(|(a, b)| RealSource::rational(Rational::new(a.into(), b.into())));
    let lacunary = (2u64..6, 1u64..4, prop::collection::vec(2u64..6, 1..6)).prop_map(
        |(base, first, steps)| {
            let mut e = vec![first];
            for s in steps {
                e.push(e.last().unwrap() + s);
            }
            RealSource::lacunary(base, e, None).expect("lacunary")
        },
    );
    let cf = (
        prop::collection::vec(1i64..30, 1..8),
        prop::option::of(prop::collection::vec(1i64..6, 1..4)),
    )
        .prop_map(|(a, t)| {
            let tail = match t {
                Some(p) => CfTail::Periodic(big(&p)),
                None => CfTail::Terminate,
            };
            RealSource::continued_fraction(big(&a), tail).expect("cf")
        });
    prop_oneof![rational, surd(), lacunary, cf]
}

/// Pair of independent quadratic irrationals.
pub fn surd_pair() -> impl Strategy<Value = LinearFormTarget> {
    (3i64..40, 3i64..40, 1i64..5)
        .prop_filter("need distinct non-square radicands", |(a, b, _)| {
            !is_square(*a) && !is_square(*b) && !is_square(a * b)
        })
        .prop_map(|(a, b, r)| {
            LinearFormTarget::new(vec![
                RealSource::quadratic(0, a, r).unwrap(),
                RealSource::quadratic(1, b, r + 1).unwrap(),
            ])
            .unwrap()
        })
}

fn subset(inner: &Enclosure, outer: &Enclosure) -> bool {
    outer.lo() <= inner.lo() && inner.hi() <= outer.hi()
}

pub fn nested_refinement(src: &RealSource, k: u32, extra: u32) -> Result<(), TestCaseError> {
    let eps = pow2_inv(k);
    let fine = pow2_inv(k + extra);
    let a = src.enclose(&eps).unwrap();
    let b = src.enclose(&fine).unwrap();
    prop_assert!(a.width() <= eps && b.width() <= fine);
    prop_assert!(subset(&b, &a), "{a} does not contain {b}");
    if let Some(v) = src.exact_value() {
        prop_assert!(b.contains(&v));
    }
    Ok(())
}

/// Endpoints recomputed from the coordinate boxes by hand.
pub fn linearity(target: &LinearFormTarget, q: &[BigInt], k: u32) -> Result<(), TestCaseError> {
    let eps = pow2_inv(k);
    let (e, coords) = linear_form_enclose_detailed(q, target, &eps).unwrap();
    let n = coords.len();
    let mut lo = Rational::from_integer(q[n].clone());
    let mut hi = lo.clone();
    for i in 0..n {
        let c = Rational::from_integer(q[i].clone());
        let (a, b) = (&c * coords[i].lo(), &c * coords[i].hi());
        lo += a.clone().min(b.clone());
        hi += a.max(b);
    }
    prop_assert_eq!(e.lo(), &lo);
    prop_assert_eq!(e.hi(), &hi);
    prop_assert!(e.width() <= eps);
    Ok(())
}

pub fn antisymmetry(
    target: &LinearFormTarget,
    qa: &[BigInt],
    qb: &[BigInt],
) -> Result<(), TestCaseError> {
    let (ab, da) = compare_abs_with_depth(qa, qb, target, DEPTH).unwrap();
    let (ba, db) = compare_abs_with_depth(qb, qa, target, DEPTH).unwrap();
    let flipped = match ab {
        AbsOrder::Less => AbsOrder::Greater,
        AbsOrder::Greater => AbsOrder::Less,
        AbsOrder::Undecided => AbsOrder::Undecided,
    };
    prop_assert_eq!(ba, flipped);
    prop_assert_eq!(da, db);
    Ok(())
}

/// Records of a plane target by enumerating every `x̂` with `‖x̂‖ <= q_max`.
pub fn brute_force_records(target: &LinearFormTarget, q_max: i64) -> Vec<Vec<BigInt>> {
    let eps = pow2_inv(96);
    let mut best: Option<Rational> = None;
    let mut out = Vec::new();
    for norm in 1..=q_max {
        let mut shell: Option<(Rational, Vec<BigInt>)> = None;
        for a in -norm..=norm {
            for b in -norm..=norm {
                if a.abs().max(b.abs()) != norm || (a < 0 || (a == 0 && b < 0)) {
                    continue;
                }
                let e = linear_form_enclose(&big(&[a, b, 0]), target, &eps).unwrap();
                let m = e.mid();
                let c = -m.round();
                let v = (&m + &c).abs();
                let q = vec![BigInt::from(a), BigInt::from(b), c.to_integer()];
                if shell.as_ref().is_none_or(|(s, _)| &v < s) {
                    shell = Some((v, q));
                }
            }
        }
        let (v, q) = shell.expect("nonempty shell");
        if best.as_ref().is_none_or(|b| &v < b) {
            best = Some(v);
            out.push(q);
        }
    }
    out
}

pub fn sequence_invariants(seq: &BestApproxSequence) -> Result<(), TestCaseError> {
    for w in seq.records.windows(2) {
        prop_assert!(w[0].restricted_norm < w[1].restricted_norm);
        prop_assert!(w[1].value_enclosure.hi() < w[0].value_enclosure.lo());
        // weak Dirichlet form
        let inv = Rational::new(BigInt::one(), w[1].restricted_norm.clone());
        prop_assert!(w[0].value_enclosure.hi() < &inv);
    }
    Ok(())
}

pub fn monotone_and_oracle(target: &LinearFormTarget, q_max: i64) -> Result<(), TestCaseError> {
    let seq = best_approximations(target, &BigInt::from(q_max), DEPTH).unwrap();
    sequence_invariants(&seq)?;
    prop_assert_eq!(seq.vectors(), brute_force_records(target, q_max));
    Ok(())
}

pub fn o_dominates_u(target: &LinearFormTarget, q_max: i64) -> Result<(), TestCaseError> {
    let seq = best_approximations(target, &BigInt::from(q_max), DEPTH).unwrap();
    let Ok(est) = estimate_exponents(&seq, None) else {
        return Ok(());
    };
    for r in &est.records {
        if let (Some(o), Some(u)) = (&r.o, &r.u) {
            prop_assert!(o.lo() >= u.lo() && o.hi() >= u.hi(), "record {}", r.index);
        }
    }
    Ok(())
}

pub fn lemur_monotone(
    target: &LinearFormTarget,
    q: u64,
    halvings: u32,
) -> Result<(), TestCaseError> {
    let c = Rational::from_integer(BigInt::from(2));
    let small = &c * pow2_inv(halvings);
    let a = lemur_check(target, q, &c, DEPTH).unwrap();
    let b = lemur_check(target, q, &small, DEPTH).unwrap();
    prop_assert!(b.count <= a.count);
    Ok(())
}

pub fn reports_deterministic(n_max: usize) -> Result<(), TestCaseError> {
    let a = run_report_dims(2..=n_max, None).unwrap();
    let b = run_report_dims(2..=n_max, None).unwrap();
    prop_assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let tau = Rational::new(7.into(), 2.into());
    let (r1, _) = run_verify_klattice(3, 3, &tau, 2, None, DEPTH);
    let (r2, _) = run_verify_klattice(3, 3, &tau, 2, None, DEPTH);
    prop_assert_eq!(r1.to_json(), r2.to_json());
    Ok(())
}

pub fn small_vector(n: usize) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(-40i64..40, n + 1)
        .prop_filter("nonzero", |v| v.iter().any(|x| *x != 0))
        .prop_map(|v| big(&v))
}
