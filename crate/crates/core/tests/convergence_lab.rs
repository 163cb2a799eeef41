mod common;

use common::{admissible_lambdas, q, random_params, sample};
use heunlab_core::convergence::domain::quadratic_radius;
use heunlab_core::convergence::{
    boundary_probe, classify_case, dominating_series_check, empirical_radius, eta_z,
    find_proof_constants, CaseTag, DomainSpec, ProbeOptions, ProbeSeries, Verdict,
};
use heunlab_core::heun::{heun_recurrence, HeunParams};
use heunlab_core::recurrence::{limit_profile, stream_coefficients, RecurrenceSpec};
use heunlab_core::{Complex, Float, Precision, Rational, RealScalar, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: Precision = Precision::DEFAULT;

fn f(v: &Rational) -> Float {
    v.to_float(P)
}

/// `10^(-p/2)` at 256 bits, read as `2^(-128)`.
fn half_tol() -> Float {
    Float::pow2(-128, P)
}

#[test]
fn eta_z_and_radius_for_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let a = Float::from_f64(rng.gen_range(1e-3..10.0), P);
        let b = Float::from_f64(rng.gen_range(1e-3..10.0), P);
        let e = eta_z(&a, &b).unwrap();
        assert!(e.residual().abs() <= half_tol());
        let bisect = DomainSpec::new(vec![a.clone(), b.clone()]).unwrap();
        assert!((bisect.boundary_radius().clone() - &quadratic_radius(&a, &b)).abs() <= half_tol());
        let one = Float::from_i64(1, P);
        assert!((bisect.weighted_sum(bisect.boundary_radius()) - &one).abs() <= half_tol());
    }
}

proptest! {
    #[test]
    fn membership_is_phase_invariant(r in 0.0f64..1.2, theta in 0.0f64..6.3, a in 0.1f64..4.0, b in 0.1f64..4.0) {
        let d = DomainSpec::new(vec![Float::from_f64(a, P), Float::from_f64(b, P)]).unwrap();
        let x = Complex::from_parts_f64(r * theta.cos(), r * theta.sin(), P);
        let on_axis = Complex::from_float(x.modulus());
        prop_assert_eq!(d.contains(&x), d.contains(&on_axis));
    }
}

/// Sub-leading coefficients read off the Heun recurrence by hand:
/// `Ω = 2λ + (α+β−δ+a(γ+δ−1))/(1+a)`, `ω = θ = 1+γ+2λ`, `Θ = α+β−2+2λ`.
fn oracle_case(p: &HeunParams<Rational>, lambda: &Rational) -> CaseTag {
    let two_l = Rational::from_int(2) * lambda;
    let one = q(1, 1);
    let lin = p.alpha.clone() + &p.beta - &p.delta + &(p.a.clone() * &(p.gamma.clone() + &p.delta - &one));
    let big_omega = two_l.clone() + &(lin / &(one.clone() + &p.a));
    let omega = one.clone() + &p.gamma + &two_l;
    let big_theta = p.alpha.clone() + &p.beta - &Rational::from_int(2) + &two_l;
    match (big_omega >= omega, big_theta >= omega) {
        (false, false) => CaseTag::Case1,
        (true, true) => CaseTag::Case2,
        (true, false) => CaseTag::Case3,
        (false, true) => CaseTag::Case4,
    }
}

#[test]
fn classification_matches_hand_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut seen = std::collections::HashSet::new();
    for _ in 0..200 {
        let p = random_params(&mut rng);
        if p.a < q(0, 1) {
            continue;
        }
        for lambda in admissible_lambdas(&p) {
            let lp = limit_profile(&heun_recurrence(&p, &lambda).unwrap()).unwrap();
            let tag = classify_case(&lp).unwrap();
            assert_eq!(tag, oracle_case(&p, &lambda), "{p:?}");
            seen.insert(tag);
        }
    }
    assert_eq!(seen.len(), 4);
}

/// Re-evaluates every inequality the search claims over `[N, N_check]`.
fn reverify(spec: &RecurrenceSpec<Rational>, eps: &Rational, n_check: u64) {
    let pc = find_proof_constants(spec, eps, n_check).unwrap();
    let lp = limit_profile(spec).unwrap();
    let one = q(1, 1);
    assert!(pc.n > pc.h_b);
    let holds = |n: u64| {
        [(1, pc.h_a), (2, pc.h_b)].iter().all(|&(lag, h)| {
            let bar = (spec.alpha(lag, n as i64).unwrap() / &lp.limits[lag - 1]).abs();
            let mid = one.clone() - &q(h as i64, n as i64);
            bar > mid && mid > one.clone() - eps
        })
    };
    for n in pc.n..=n_check {
        assert!(holds(n), "fails at n = {n}");
    }
    for (lag, floor) in [(1, pc.a_root_floor), (2, pc.b_root_floor)] {
        if let Some(floor) = floor {
            for n in floor.max(1)..=n_check {
                let bar = spec.alpha(lag, n as i64).unwrap() / &lp.limits[lag - 1];
                assert!(bar > one, "lag {lag} at {n} below its root floor {floor}");
            }
        }
    }
    // N is minimal unless a side constraint pins it
    let prev = pc.n - 1;
    let pinned = prev <= pc.h_b
        || q(prev as i64, 1) * eps <= q(pc.h_a.max(pc.h_b) as i64, 1)
        || pc.a_root_floor.is_some_and(|f| prev < f)
        || pc.b_root_floor.is_some_and(|f| prev < f);
    assert!(pinned || !holds(prev), "N = {} is not minimal", pc.n);
}

#[test]
fn proof_constants_reverify_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let eps = q(1, 100);
    for _ in 0..15 {
        let p = random_params(&mut rng);
        for lambda in admissible_lambdas(&p) {
            reverify(&heun_recurrence(&p, &lambda).unwrap(), &eps, 3000);
        }
    }
}

#[test]
fn dominating_series_holds_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let p = random_params(&mut rng);
        let spec = heun_recurrence(&p, &q(0, 1)).unwrap();
        let d = DomainSpec::new(vec![p.big_a().abs(), p.big_b().abs()]).unwrap();
        let r = d.boundary_radius().to_f64();
        for frac in [(1, 4), (1, 2), (9, 10)] {
            let x = q((r * 1000.0) as i64 * frac.0, 1000 * frac.1);
            for (n_big, m) in [(2, 30), (10, 40)] {
                let c = dominating_series_check(&spec, n_big, &x, m).unwrap();
                assert!(c.holds, "{p:?} x={x} N={n_big}");
            }
        }
    }
}

#[test]
fn empirical_radius_contains_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..6 {
        let p = random_params(&mut rng);
        let spec = heun_recurrence(&p, &q(0, 1)).unwrap().map(P, f);
        let s = stream_coefficients(&spec, 2000).unwrap();
        let d = DomainSpec::new(vec![p.big_a().abs(), p.big_b().abs()]).unwrap();
        let r_star = d.boundary_radius().to_f64();
        let r = empirical_radius(&s).unwrap();
        // Poincaré–Perron: characteristic roots 1 and 1/a
        let a = p.a.to_f64();
        assert!(r >= r_star - 1e-3, "{r} < {r_star}");
        assert!((r - a.abs().min(1.0)).abs() < 1e-2, "{r} vs {a}");
    }
}

/// `u_n = |c̄_n| r*^n ~ n^s` with `s = (η a₁ + z b₁)/(1+z)`.
fn modulus_tail_exponent(p: &HeunParams<Rational>) -> f64 {
    let lp = limit_profile(&heun_recurrence(p, &q(0, 1)).unwrap()).unwrap();
    let sl = lp.three_term.unwrap();
    let a1 = (sl.big_omega - &sl.omega).to_f64();
    let b1 = (sl.big_theta - &sl.theta).to_f64();
    let e = eta_z(&f(&p.big_a().abs()), &f(&p.big_b().abs())).unwrap();
    let (eta, z) = (e.eta.to_f64(), e.z.to_f64());
    (eta * a1 + z * b1) / (1.0 + z)
}

#[test]
fn modulus_probe_on_boundary() {
    let p = HeunParams::new(q(2, 1), q(1, 1), q(3, 1), q(3, 1), q(1, 1), q(1, 1)).unwrap();
    let spec = heun_recurrence(&p, &q(0, 1)).unwrap();
    let r = quadratic_radius(&f(&q(3, 2)), &f(&q(1, 2)));
    let opts = ProbeOptions::new(1 << 16, 64, ProbeSeries::Modulus { offset: 0 });
    let d = boundary_probe(&spec, &r, &opts).unwrap();
    assert_eq!(d.verdict, Verdict::DivergesEmpirically);
    let s = modulus_tail_exponent(&p);
    assert!((d.fitted_tail_exponent.unwrap() - s).abs() < 0.02, "{:?} vs {s}", d.fitted_tail_exponent);
    assert!((d.fitted_rho.unwrap() - 1.0).abs() < 1e-5);

    let inside = r.clone() * &Float::from_f64(0.99, P);
    let d = boundary_probe(&spec, &inside, &opts).unwrap();
    assert_eq!(d.verdict, Verdict::ConvergesEmpirically);
}

#[test]
fn signed_sample_converges_on_boundary() {
    let spec = heun_recurrence(&sample(), &q(0, 1)).unwrap();
    let r = quadratic_radius(&f(&q(3, 2)), &f(&q(1, 2)));
    let opts = ProbeOptions::new(1 << 12, 16, ProbeSeries::Signed);
    let d = boundary_probe(&spec, &r, &opts).unwrap();
    assert_eq!(d.verdict, Verdict::ConvergesEmpirically);
    // root test: ρ = max(1, 1/|a|) r*
    assert!((d.fitted_rho.unwrap() - r.to_f64()).abs() < 1e-3);
}
