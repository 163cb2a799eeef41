mod common;

use common::{admissible_lambdas, q, random_params, sample};
use heunlab_core::heun::{heun_eval, heun_recurrence, local_solution, ode_residual, HeunParams};
use heunlab_core::recurrence::{limit_profile, stream_values};
use heunlab_core::{Complex, Error, Float, Precision, Scalar};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn frobenius_residual_vanishes_for_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..12 {
        let p = random_params(&mut rng);
        for lambda in admissible_lambdas(&p) {
            let d = stream_values(&heun_recurrence(&p, &lambda).unwrap(), 60).unwrap();
            let res = ode_residual(&p, &lambda, &d, 60).unwrap();
            assert!(res[..=58].iter().all(Scalar::is_zero), "{p:?} λ={lambda}");
            assert!(res[59..].iter().any(|r| !r.is_zero()));
        }
    }
}

#[test]
fn frobenius_residual_complex_float_path() {
    let prec = Precision::DEFAULT;
    let c = |re, im| Complex::from_parts_f64(re, im, prec);
    let p = HeunParams::new(c(2.0, 1.0), c(0.5, -0.25), c(1.5, 0.5), c(-0.75, 0.0), c(0.5, 1.0), c(1.25, 0.0)).unwrap();
    let lambda = Complex::one(prec) - &p.gamma;
    for l in [Complex::zero(prec), lambda] {
        let d = stream_values(&heun_recurrence(&p, &l).unwrap(), 40).unwrap();
        let scale = d.iter().map(|v| v.modulus()).fold(Float::from_i64(1, prec), Float::max);
        let res = ode_residual(&p, &l, &d, 40).unwrap();
        for r in &res[..=38] {
            assert!(r.modulus() <= Float::pow2(8 - 256 + 16, prec) * &scale);
        }
    }
}

#[test]
fn limits_are_exact_for_every_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..30 {
        let p = random_params(&mut rng);
        for lambda in admissible_lambdas(&p) {
            let lp = limit_profile(&heun_recurrence(&p, &lambda).unwrap()).unwrap();
            assert_eq!(lp.limits, vec![p.big_a(), p.big_b()]);
            let sl = lp.three_term.unwrap();
            assert_eq!((sl.t_a, sl.t_b), (2, 2));
        }
    }
}

#[test]
fn indicial_poles_are_rejected() {
    let p = HeunParams::new(q(2, 1), q(1, 1), q(1, 1), q(1, 1), q(3, 1), q(1, 1)).unwrap();
    assert!(matches!(heun_recurrence(&p, &q(-2, 1)), Err(Error::IndicialPole { .. })));
    let p = HeunParams::new(q(2, 1), q(1, 1), q(1, 1), q(1, 1), q(-1, 1), q(1, 1)).unwrap();
    assert!(matches!(heun_recurrence(&p, &q(0, 1)), Err(Error::IndicialPole { .. })));
    assert!(local_solution(&sample(), &q(1, 3), 5).is_err());
}

/// Terms decay geometrically inside the domain, so each halving of `log tol`
/// costs a bounded number of extra terms.
#[test]
fn eval_cost_grows_logarithmically_in_tol() {
    let prec = Precision::DEFAULT;
    let pf = HeunParams::new(
        Float::from_i64(2, prec),
        Float::from_i64(1, prec),
        Float::from_i64(1, prec),
        Float::from_i64(1, prec),
        Float::from_i64(1, prec),
        Float::from_i64(1, prec),
    )
    .unwrap();
    let x = Float::from_f64(0.3, prec);
    let used = |digits: i64| {
        let tol = Float::from_f64(10f64.powi(-(digits as i32)), prec);
        let e = heun_eval(&pf, &Float::from_i64(0, prec), &x, &tol, 10_000, false).unwrap();
        assert!(e.converged);
        e.n_used as f64
    };
    // |d_n| x^n ~ 0.3^n, so one decade costs about 1.9 terms
    let per_decade = std::f64::consts::LN_10 / (1.0f64 / 0.3).ln();
    let n10 = used(10);
    let n20 = used(20);
    let n40 = used(40);
    assert!(n20 - n10 <= 10.0 * per_decade * 1.3 + 5.0, "{n10} {n20}");
    assert!(n40 - n20 <= 20.0 * per_decade * 1.3 + 5.0, "{n20} {n40}");
}

#[test]
fn local_solution_carries_domain() {
    let s = local_solution(&sample(), &q(0, 1), 10).unwrap();
    assert_eq!(s.domain.limits(), &[q(3, 2), q(1, 2)]);
    assert_eq!(s.stream.values[2], q(5, 16));
}
