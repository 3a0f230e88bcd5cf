mod common;

use common::*;
use linform_core::bestapprox::{best_approximations_with, SearchOptions, Strategy};
use linform_core::constructions::{build_cf_pair, build_k_lattice, build_theorem8};
use linform_core::dimension::{gamma_dims, template_rates, theta_lower_bounds, TemplateSpec};
use linform_core::numeric::{rat, rat_to_f64, Rational};
use linform_core::real_enclosure::{LinearFormTarget, RealSource};
use num_bigint::BigInt;
use num_integer::Integer;

/// Interleaved exponent chain by floating-point rounding of `tau · e · ln p_prev / ln p`.
fn chain_oracle(tau: f64, primes: &[u64], count: usize) -> Vec<u64> {
    let k = primes.len();
    let mut out: Vec<u64> = vec![1];
    for m in 1..count {
        let (pp, p) = (primes[(m - 1) % k] as f64, primes[m % k] as f64);
        let prev = out[m - 1] as f64;
        let mut e = (tau * prev * pp.ln() / p.ln()).round() as u64;
        if m >= k {
            e = e.max(out[m - k] + 1);
        }
        while (e as f64) * p.ln() <= prev * pp.ln() {
            e += 1;
        }
        out.push(e);
    }
    out
}

#[test]
fn pair_exponents_match_float_rounding() {
    for (num, den, terms) in [(3, 1, 6), (6, 1, 3), (5, 2, 5), (4, 1, 4)] {
        let inst = build_theorem8(&rat(num, den), terms).unwrap();
        let chain = chain_oracle(num as f64 / den as f64, &[2, 3], 2 * terms);
        let alpha: Vec<u64> = chain.iter().step_by(2).copied().collect();
        let beta: Vec<u64> = chain.iter().skip(1).step_by(2).copied().collect();
        assert_eq!(inst.alpha, alpha, "tau = {num}/{den}");
        assert_eq!(inst.beta, beta, "tau = {num}/{den}");
    }
    let inst = build_theorem8(&rat(3, 1), 5).unwrap();
    assert_eq!(inst.a[1], BigInt::from(1024));
    assert_eq!(inst.a[2], BigInt::from(1) << 90);
}

#[test]
fn three_prime_exponents_match_float_rounding() {
    let inst = build_k_lattice(3, 3, &rat(7, 2), 3).unwrap();
    let chain = chain_oracle(3.5, &[2, 3, 5], 9);
    for i in 0..3 {
        let col: Vec<u64> = chain.iter().skip(i).step_by(3).copied().collect();
        assert_eq!(inst.alpha[i], col);
    }
}

#[test]
fn cf_denominators_are_coprime_by_euclid() {
    let inst = build_cf_pair(&rat(5, 2), 6, 64).unwrap();
    for j in 0..inst.s1.len().min(inst.s2.len()) {
        assert!(inst.s1[j].gcd(&inst.s2[j]) == BigInt::from(1), "j = {j}");
        if let Some(next) = inst.s1.get(j + 1) {
            assert!(inst.s2[j].gcd(next) == BigInt::from(1), "j = {j}");
        }
    }
    // r_j / s_j is the convergent [0; a_1, ..., a_j], evaluated backwards
    for (r, s, a) in [
        (&inst.r1, &inst.s1, &inst.a1),
        (&inst.r2, &inst.s2, &inst.a2),
    ] {
        for j in 0..s.len() {
            let mut x = Rational::from_integer(a[j].clone());
            for q in a[..j].iter().rev() {
                x = Rational::from_integer(q.clone()) + x.recip();
            }
            assert_eq!(
                x.recip(),
                Rational::new(r[j].clone(), s[j].clone()),
                "j = {j}"
            );
        }
    }
}

#[test]
fn engine_matches_brute_force_on_fixed_targets() {
    let targets = [
        LinearFormTarget::new(vec![
            RealSource::golden_fraction(),
            RealSource::quadratic(0, 2, 1).unwrap(),
        ])
        .unwrap(),
        LinearFormTarget::new(vec![
            RealSource::quadratic(0, 3, 1).unwrap(),
            RealSource::quadratic(0, 7, 2).unwrap(),
        ])
        .unwrap(),
    ];
    for t in &targets {
        monotone_and_oracle(t, 60).unwrap();
    }
}

#[test]
fn exhaustive_and_lattice_routes_agree() {
    let t = LinearFormTarget::new(vec![
        RealSource::quadratic(0, 5, 1).unwrap(),
        RealSource::quadratic(1, 11, 3).unwrap(),
    ])
    .unwrap();
    let q = BigInt::from(400);
    let run = |strategy| {
        best_approximations_with(
            &t,
            &q,
            SearchOptions {
                strategy,
                ..SearchOptions::default()
            },
        )
        .unwrap()
    };
    assert_eq!(
        run(Strategy::Exhaustive).vectors(),
        run(Strategy::Lattice).vectors()
    );
}

#[test]
fn gamma_three_matches_closed_form() {
    let g = gamma_dims(3).unwrap();
    let closed = (17.0 - 13f64.sqrt()) / 8.0;
    assert!((g.hausdorff.value - closed).abs() < 1e-12);
    assert!(g.hausdorff.decimal.starts_with("1.6743"));
}

/// Maximum of `g(τ) = (τ² - (nτ+1)/2) / ((τ²-1)(nτ+1)/2)` on a fine grid.
fn taurin_grid_max(n: usize) -> f64 {
    let g = |t: f64| {
        let h = (n as f64 * t + 1.0) / 2.0;
        (t * t - h) / ((t * t - 1.0) * h)
    };
    let mut best = f64::MIN;
    let mut t = n as f64;
    while t < 200.0 * n as f64 {
        best = best.max(g(t));
        t += 1e-4;
    }
    best
}

#[test]
fn taurin_matches_grid_search() {
    for n in 2..=5 {
        let t = theta_lower_bounds(n, n as f64).unwrap();
        let grid = n as f64 - 2.0 + taurin_grid_max(n);
        assert!(
            (t.taurin.value - grid).abs() < 1e-7,
            "n = {n}: {} vs {grid}",
            t.taurin.value
        );
        assert!(t.taurin.value >= grid - 1e-9);
    }
}

#[test]
fn template_rates_match_breakpoint_formulas() {
    for (n, tau) in [(2, 3.0), (2, 5.0), (3, 4.0), (4, 6.5)] {
        let eps = 1e-6;
        let spec = TemplateSpec {
            n,
            tau: rat((tau * 10.0) as i64, 10),
            eps: rat(1, 1_000_000),
        };
        let r = template_rates(&spec).unwrap();
        let a = (n as f64 * tau + 1.0 + eps) / 2.0;
        let b = tau * tau;
        let upper = (b - a) / (b - 1.0);
        let lower = (b - a) / ((b - 1.0) * a);
        assert!((r.delta_upper - upper).abs() < 1e-3, "n = {n}, tau = {tau}");
        assert!((r.delta_lower - lower).abs() < 1e-3, "n = {n}, tau = {tau}");
        assert!((rat_to_f64(&r.closed_upper) - upper).abs() < 1e-9);
    }
}
