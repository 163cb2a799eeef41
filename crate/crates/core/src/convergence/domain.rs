//! The absolute-convergence domain `Σ |α_m| |x|^m < 1`, its boundary radius,
//! the `η`/`z` split on the boundary, and Gauss's boundary test.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Float, Precision, RealScalar, Scalar};

/// Moduli of the coefficient limits and the radius where their weighted sum
/// reaches one.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec<R: RealScalar> {
    limits: Vec<R>,
    radius: Float,
}

impl<R: RealScalar> DomainSpec<R> {
    /// `limits[m-1] = |α_m|`. Fails if every limit vanishes.
    pub fn new(limits: Vec<R>) -> Result<Self> {
        let ctx = limits
            .first()
            .map(Scalar::ctx)
            .ok_or(Error::AllZeroLimits)?;
        Self::with_precision(limits, R::working_precision(ctx))
    }

    pub fn with_precision(limits: Vec<R>, prec: Precision) -> Result<Self> {
        let limits: Vec<R> = limits.iter().map(RealScalar::abs).collect();
        let floats: Vec<Float> = limits.iter().map(|v| v.to_float(prec)).collect();
        let radius = bisect_radius(&floats, prec)?;
        Ok(DomainSpec { limits, radius })
    }

    pub fn limits(&self) -> &[R] {
        &self.limits
    }

    /// `r*` with `Σ |α_m| r*^m = 1`, found by bisection.
    pub fn boundary_radius(&self) -> &Float {
        &self.radius
    }

    /// `Σ |α_m| r^m`.
    pub fn weighted_sum(&self, r: &R) -> R {
        let mut acc = R::zero(r.ctx());
        let mut pow = r.clone();
        for l in &self.limits {
            acc += &(l.clone() * &pow);
            pow = pow * r;
        }
        acc
    }

    /// `Σ |α_m| |x|^m < 1`; depends on `x` only through `|x|`.
    pub fn contains<S: Scalar<Real = R>>(&self, x: &S) -> bool {
        let m = x.modulus();
        self.weighted_sum(&m) < R::one(m.ctx())
    }
}

/// See [`DomainSpec::contains`].
pub fn domain_membership<S: Scalar>(d: &DomainSpec<S::Real>, x: &S) -> bool {
    d.contains(x)
}

/// See [`DomainSpec::boundary_radius`].
pub fn boundary_radius<R: RealScalar>(d: &DomainSpec<R>) -> Float {
    d.boundary_radius().clone()
}

fn weighted_float(limits: &[Float], r: &Float) -> Float {
    let mut acc = Float::from_i64(0, r.precision());
    let mut pow = r.clone();
    for l in limits {
        acc += &(l.clone() * &pow);
        pow = pow * r;
    }
    acc
}

fn bisect_radius(limits: &[Float], prec: Precision) -> Result<Float> {
    if limits.iter().all(Float::is_zero) {
        return Err(Error::AllZeroLimits);
    }
    let w = prec.guarded(16);
    let limits: Vec<Float> = limits.iter().map(|l| l.clone().round_to(w)).collect();
    let one = Float::from_i64(1, w);
    let mut hi = one.clone();
    while weighted_float(&limits, &hi) < one {
        hi = hi * &Float::from_i64(2, w);
    }
    let mut lo = Float::from_i64(0, w);
    let mut half_hi = hi.clone() / &Float::from_i64(2, w);
    while weighted_float(&limits, &half_hi) >= one {
        hi = half_hi;
        half_hi = hi.clone() / &Float::from_i64(2, w);
    }
    if !half_hi.is_zero() {
        lo = half_hi;
    }
    // Each step halves the bracket; stop once it is below 2^-(bits) relative.
    let half = Float::from_i64(1, w) / &Float::from_i64(2, w);
    for _ in 0..w.get() + 8 {
        let mid = (lo.clone() + &hi) * &half;
        if mid == lo || mid == hi {
            break;
        }
        if weighted_float(&limits, &mid) < one {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(((lo + &hi) * &half).round_to(prec))
}

/// Positive root of `|B| r² + |A| r = 1`, written as `2 / (|A| + √(|A|² + 4|B|))`
/// so that neither `|A|` nor `|B|` may vanish into a cancellation.
pub fn quadratic_radius(a_abs: &Float, b_abs: &Float) -> Float {
    let prec = a_abs.precision().max(b_abs.precision());
    let w = prec.guarded(16);
    let a = a_abs.clone().round_to(w);
    let b = b_abs.clone().round_to(w);
    let disc = a.clone() * &a + Float::from_i64(4, w) * &b;
    (Float::from_i64(2, w) / (a + disc.sqrt())).round_to(prec)
}

/// `η = |A| r*`, `z = |B| r*²` on the boundary, where `η + z = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaZ {
    pub radius: Float,
    pub eta: Float,
    pub z: Float,
}

impl EtaZ {
    /// `η + z − 1`.
    pub fn residual(&self) -> Float {
        self.eta.clone() + &self.z - Float::from_i64(1, self.eta.precision())
    }
}

/// Requires `|A|, |B| > 0`.
pub fn eta_z(a_abs: &Float, b_abs: &Float) -> Result<EtaZ> {
    if a_abs.is_zero() || a_abs.is_sign_negative() || b_abs.is_zero() || b_abs.is_sign_negative() {
        return Err(Error::DomainError(format!(
            "eta/z split needs |A|, |B| > 0, got {a_abs:?}, {b_abs:?}"
        )));
    }
    let prec = a_abs.precision().max(b_abs.precision());
    let w = prec.guarded(16);
    let r = quadratic_radius(&a_abs.clone().round_to(w), &b_abs.clone().round_to(w));
    let eta = a_abs.clone().round_to(w) * &r;
    let z = b_abs.clone().round_to(w) * &r * &r;
    let out = EtaZ {
        radius: r.round_to(prec),
        eta: eta.round_to(prec),
        z: z.round_to(prec),
    };
    debug_assert!(out.residual().abs() <= prec.half_tolerance());
    Ok(out)
}

/// Gauss's criterion for `₂F₁(a, b; c; x)` on `|x| = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussVerdict {
    AbsConvergent,
    NotAbsConvergent,
}

/// Absolutely convergent on `|x| = 1` iff `Re c > Re a + Re b`.
pub fn gauss_boundary_test<S: Scalar>(a: &S, b: &S, c: &S) -> Result<GaussVerdict> {
    if c.as_integer().is_some_and(|v| v <= 0) {
        return Err(Error::InvalidC(format!("{c:?}")));
    }
    Ok(if c.re() > a.re() + b.re() {
        GaussVerdict::AbsConvergent
    } else {
        GaussVerdict::NotAbsConvergent
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Complex, Rational};
    use alloc::vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn f(v: &Rational) -> Float {
        v.to_float(Precision::DEFAULT)
    }

    #[test]
    fn hypergeometric_membership() {
        let d = DomainSpec::new(vec![q(1, 1)]).unwrap();
        assert!(d.contains(&q(99, 100)));
        assert!(!d.contains(&q(1, 1)));
        assert!(!d.contains(&q(-101, 100)));
        assert_eq!(d.boundary_radius(), &Float::from_i64(1, Precision::DEFAULT));
    }

    #[test]
    fn heun_sample_membership() {
        let d = DomainSpec::new(vec![q(3, 2), q(-1, 2)]).unwrap();
        assert_eq!(d.weighted_sum(&q(1, 2)), q(7, 8));
        assert!(d.contains(&q(1, 2)));
        assert!(d.contains(&q(0, 1)));
    }

    #[test]
    fn radius_quadratic_oracle() {
        let p = Precision::DEFAULT;
        let sqrt17 = Float::from_i64(17, p).sqrt();
        let expect = (sqrt17 - Float::from_i64(3, p)) / Float::from_i64(2, p);
        let d = DomainSpec::new(vec![q(3, 2), q(1, 2)]).unwrap();
        let tol = Float::pow2(-200, p);
        assert!((d.boundary_radius().clone() - &expect).abs() < tol);
        assert!((quadratic_radius(&f(&q(3, 2)), &f(&q(1, 2))) - &expect).abs() < tol);
        let r = quadratic_radius(&Float::from_i64(2, p), &Float::from_i64(1, p));
        let expect = Float::from_i64(2, p).sqrt() - Float::from_i64(1, p);
        assert!((r - expect).abs() < tol);
    }

    #[test]
    fn radius_errors_and_degenerate_shapes() {
        assert_eq!(
            DomainSpec::new(vec![q(0, 1), q(0, 1)]),
            Err(Error::AllZeroLimits)
        );
        // only |B|: r* = 1/√|B|
        let d = DomainSpec::new(vec![q(0, 1), q(1, 4)]).unwrap();
        assert!((d.boundary_radius().to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn eta_z_examples() {
        let e = eta_z(&f(&q(3, 2)), &f(&q(1, 2))).unwrap();
        assert!((e.eta.to_f64() - 0.842329).abs() < 1e-6);
        assert!((e.z.to_f64() - 0.157671).abs() < 1e-6);
        assert!(e.residual().abs() < Float::pow2(-128, Precision::DEFAULT));
        let one = Float::from_i64(1, Precision::DEFAULT);
        let e = eta_z(&one, &one).unwrap();
        let golden = (Float::from_i64(5, Precision::DEFAULT).sqrt() - &one) / Float::from_i64(2, Precision::DEFAULT);
        assert!((e.radius.clone() - &golden).abs() < Float::pow2(-200, Precision::DEFAULT));
        assert!((e.z.clone() - golden.clone() * &golden).abs() < Float::pow2(-200, Precision::DEFAULT));
        assert!(eta_z(&Float::from_i64(0, Precision::DEFAULT), &one).is_err());
    }

    #[test]
    fn gauss_examples() {
        let h = q(1, 2);
        assert_eq!(gauss_boundary_test(&h, &h, &q(2, 1)), Ok(GaussVerdict::AbsConvergent));
        let one = q(1, 1);
        assert_eq!(gauss_boundary_test(&one, &one, &one), Ok(GaussVerdict::NotAbsConvergent));
        let c = q(2, 1) + q(1, 1_000_000_000);
        assert_eq!(gauss_boundary_test(&one, &one, &c), Ok(GaussVerdict::AbsConvergent));
        assert!(matches!(gauss_boundary_test(&one, &one, &q(0, 1)), Err(Error::InvalidC(_))));
        let p = Precision::DEFAULT;
        let cz = Complex::from_parts_f64(2.5, 1.0, p);
        let az = Complex::from_parts_f64(1.0, -3.0, p);
        assert_eq!(gauss_boundary_test(&az, &az, &cz), Ok(GaussVerdict::AbsConvergent));
    }

    #[test]
    fn membership_is_phase_invariant() {
        let p = Precision::DEFAULT;
        let d = DomainSpec::new(vec![Float::from_f64(1.5, p), Float::from_f64(0.5, p)]).unwrap();
        for (re, im) in [(0.3, 0.4), (0.0, 0.56), (-0.56, 0.0), (0.4, -0.4)] {
            let x = Complex::from_parts_f64(re, im, p);
            let xr = Complex::from_float(x.modulus());
            assert_eq!(d.contains(&x), d.contains(&xr));
        }
    }
}
