mod common;

use common::q;
use heunlab_core::poly::{Polynomial, RationalFn};
use heunlab_core::recurrence::stream_values;
use heunlab_core::special::{
    hyp2f1_series, pochhammer, pochhammer_bound_floor, pochhammer_ratio_lower_bound, Hyp2F1Params,
};
use heunlab_core::{Complex, Float, Precision, Rational, RealScalar, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn pochhammer_step(a in rational(), n in 0u64..40) {
        prop_assert_eq!(pochhammer(&a, n + 1), pochhammer(&a, n) * &(a.clone() + &Rational::from_int(n as i64)));
    }

    #[test]
    fn hyp2f1_at_zero_is_one(a in rational(), b in rational(), c in rational()) {
        prop_assume!(!(c.is_integer() && c <= q(0, 1)));
        let p = Hyp2F1Params::new(a, b, c).unwrap();
        let s = hyp2f1_series(&p, &q(0, 1), &q(1, 1_000_000), 100).unwrap();
        prop_assert_eq!(s.value, q(1, 1));
        prop_assert!(s.converged);
    }

    #[test]
    fn hyp2f1_at_zero_is_one_complex(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let prec = Precision::DEFAULT;
        let z = Complex::from_parts_f64(re, im, prec);
        let c = Complex::from_parts_f64(re + 0.5, 1.0, prec);
        let p = Hyp2F1Params::new(z.clone(), z, c).unwrap();
        let s = hyp2f1_series(&p, &Complex::zero(prec), &Float::pow2(-100, prec), 100).unwrap();
        prop_assert_eq!(s.value, Complex::one(prec));
    }
}

/// Every sampled tuple with `i2r1` at or above the floor satisfies the bound.
#[test]
fn pochhammer_ratio_bound_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let prec = Precision::DEFAULT;
    let mut violations = Vec::new();
    for _ in 0..1000 {
        let h2 = rng.gen_range(0..=7u64);
        let n_big = h2 + rng.gen_range(1..=60u64);
        let r = rng.gen_range(0..=5u64);
        let i2r = rng.gen_range(0..=20u64);
        let floor = pochhammer_bound_floor(n_big, h2, r, i2r).unwrap().max(4);
        let i2r1 = floor + rng.gen_range(0..=200u64);
        let b = pochhammer_ratio_lower_bound(n_big, h2, r, i2r, i2r1, prec).unwrap();
        if !b.holds {
            violations.push((n_big, h2, r, i2r, i2r1));
        }
    }
    assert!(violations.is_empty(), "{violations:?}");
}

#[test]
fn pochhammer_ratio_bound_rejects_small_n() {
    assert!(pochhammer_ratio_lower_bound(3, 3, 0, 0, 5, Precision::DEFAULT).is_err());
    assert!(pochhammer_bound_floor(2, 4, 0, 0).is_err());
}

/// Direct product oracle against the log-Gamma branch (`i2r1 > 10^5`).
#[test]
fn pochhammer_ratio_large_index_matches_asymptotics() {
    let prec = Precision::DEFAULT;
    let b = pochhammer_ratio_lower_bound(20, 3, 1, 2, 200_000, prec).unwrap();
    assert!(b.holds);
    // lhs ~ Γ(c)/Γ(b) n^{-h/2} = 2 rhs
    let ratio = b.lhs.to_f64() / b.rhs.to_f64();
    assert!((ratio - 2.0).abs() < 1e-3, "{ratio}");
}

#[test]
fn exact_and_float_paths_agree() {
    let prec = Precision::DEFAULT;
    let num = Polynomial::new(vec![q(1, 3), q(7, 5), q(2, 1)], ());
    let den = Polynomial::new(vec![q(3, 1), q(4, 1), q(1, 1)], ());
    let spec_q = heunlab_core::recurrence::RecurrenceSpec::new(vec![
        RationalFn::new(num, den.clone()).unwrap(),
        RationalFn::new(Polynomial::new(vec![q(-1, 2), q(-1, 7)], ()), den).unwrap(),
    ])
    .unwrap();
    let spec_f = spec_q.map(prec, |v| v.to_float(prec));
    let exact = stream_values(&spec_q, 120).unwrap();
    let float = stream_values(&spec_f, 120).unwrap();
    let tol = Float::from_f64(1e-60, prec);
    for (e, f) in exact.iter().zip(&float) {
        let e = e.to_float(prec);
        let err = (e.clone() - f).abs();
        assert!(err <= tol.clone() * &e.abs().max(Float::from_i64(1, prec)), "{e} vs {f}");
    }
}

#[test]
fn hyp2f1_reference_values() {
    let one = q(1, 1);
    let p = Hyp2F1Params::new(one.clone(), one.clone(), one.clone()).unwrap();
    let s = hyp2f1_series(&p, &q(1, 2), &q(1, 1 << 40), 1000).unwrap();
    assert!(s.converged);
    assert!((s.value - &q(2, 1)).abs() < q(1, 1 << 39));
    let prec = Precision::bits(64);
    let pf = Hyp2F1Params::new(Float::from_i64(1, prec), Float::from_i64(1, prec), Float::from_i64(1, prec)).unwrap();
    let s = hyp2f1_series(&pf, &Float::from_i64(1, prec), &Float::pow2(-60, prec), 100_000).unwrap();
    assert!(!s.converged);
}
