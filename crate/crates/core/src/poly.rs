//! Polynomials and rational functions in the recurrence index `n`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Precision, RealScalar, Scalar};

/// Polynomial with coefficients stored lowest degree first.
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient is nonzero unless the polynomial is identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S: Scalar> {
    coeffs: Vec<S>,
    ctx: S::Ctx,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(mut coeffs: Vec<S>, ctx: S::Ctx) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs, ctx }
    }

    pub fn zero(ctx: S::Ctx) -> Self {
        Polynomial {
            coeffs: Vec::new(),
            ctx,
        }
    }

    pub fn constant(c: S) -> Self {
        let ctx = c.ctx();
        Polynomial::new(vec![c], ctx)
    }

    /// `n + shift`.
    pub fn linear(shift: S) -> Self {
        let ctx = shift.ctx();
        Polynomial::new(vec![shift, S::one(ctx)], ctx)
    }

    /// `c · n^degree`.
    pub fn monomial(c: S, degree: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![S::zero(ctx); degree];
        coeffs.push(c);
        Polynomial::new(coeffs, ctx)
    }

    pub fn ctx(&self) -> S::Ctx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `n^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| S::zero(self.ctx))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Horner evaluation at an integer index.
    pub fn eval_int(&self, n: i64) -> S {
        self.eval(&S::from_i64(n, self.ctx))
    }

    pub fn eval(&self, x: &S) -> S {
        let mut acc = S::zero(self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &S) -> Self {
        Polynomial::new(
            self.coeffs.iter().map(|a| a.clone() * c).collect(),
            self.ctx,
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new(
            (0..len).map(|i| self.coeff(i) + &other.coeff(i)).collect(),
            self.ctx,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one(self.ctx)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.ctx);
        }
        let mut out = vec![S::zero(self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a.clone() * b);
            }
        }
        Polynomial::new(out, self.ctx)
    }

    /// `p(n + offset)`, expanded.
    pub fn shift(&self, offset: i64) -> Self {
        if offset == 0 {
            return self.clone();
        }
        let step = Polynomial::linear(S::from_i64(offset, self.ctx));
        let mut acc = Polynomial::zero(self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&step).add(&Polynomial::constant(c.clone()));
        }
        acc
    }

    /// Splits off the leading coefficient: `(C_t, p / C_t)`.
    /// The monic factor has a leading coefficient of exactly one in every tier.
    pub fn monic(&self) -> Option<(S, Self)> {
        let lead = self.leading()?.clone();
        let mut coeffs: Vec<S> = self.coeffs.iter().map(|a| a.clone() / &lead).collect();
        *coeffs.last_mut()? = S::one(self.ctx);
        Some((lead, Polynomial::new(coeffs, self.ctx)))
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * &S::from_i64(i as i64, self.ctx))
                .collect(),
            self.ctx,
        )
    }

    /// Euclidean division `self = q · d + r` with `deg r < deg d`. Panics if
    /// `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(self.ctx); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let f = rem[top].clone() / &lead;
            let shift = top - dd;
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[shift + i] = rem[shift + i].clone() - f.clone() * c;
            }
            quot[shift] = f;
            // the top coefficient is eliminated by construction
            rem.pop();
        }
        (Polynomial::new(quot, self.ctx), Polynomial::new(rem, self.ctx))
    }

    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(f).collect(), ctx)
    }

    /// Real parts of the coefficients.
    pub fn real_part(&self) -> Polynomial<S::Real> {
        self.map(self.ctx, |c| c.re())
    }

    /// Imaginary parts of the coefficients.
    pub fn imag_part(&self) -> Polynomial<S::Real> {
        self.map(self.ctx, |c| c.im())
    }

    /// Cauchy bound `1 + max |c_i / c_t|` on the moduli of the roots, in `f64`.
    pub fn cauchy_root_bound(&self) -> Option<f64> {
        let lead = self.leading()?.modulus().to_float(Precision::bits(64)).to_f64();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.modulus().to_float(Precision::bits(64)).to_f64() / lead)
            .fold(0.0, f64::max);
        Some(1.0 + max)
    }
}

/// Largest integer index scanned when isolating nonnegative integer poles.
pub const POLE_SCAN_LIMIT: f64 = (1u64 << 24) as f64;

/// Ratio of two polynomials in `n`, with its nonnegative integer poles.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn<S: Scalar> {
    num: Polynomial<S>,
    den: Polynomial<S>,
    poles: Vec<i64>,
}

impl<S: Scalar> RationalFn<S> {
    /// Fails if `den` is identically zero or its root bound exceeds
    /// [`POLE_SCAN_LIMIT`].
    pub fn new(num: Polynomial<S>, den: Polynomial<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidRecurrence("zero denominator polynomial"));
        }
        let bound = den.cauchy_root_bound().unwrap_or(0.0);
        if !(bound <= POLE_SCAN_LIMIT) {
            return Err(Error::InvalidRecurrence(
                "denominator roots too large to isolate",
            ));
        }
        let poles = (0..=bound as i64)
            .filter(|&n| den.eval_int(n).is_zero())
            .collect();
        Ok(RationalFn { num, den, poles })
    }

    /// Constant rational function.
    pub fn constant(c: S) -> Self {
        let one = S::one(c.ctx());
        RationalFn {
            num: Polynomial::constant(c),
            den: Polynomial::constant(one),
            poles: Vec::new(),
        }
    }

    pub fn num(&self) -> &Polynomial<S> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<S> {
        &self.den
    }

    /// Nonnegative integer roots of the denominator, ascending.
    pub fn poles(&self) -> &[i64] {
        &self.poles
    }

    pub fn has_pole(&self, n: i64) -> bool {
        self.poles.binary_search(&n).is_ok()
    }

    /// `num(n) / den(n)`; `lag` labels the error.
    pub fn eval_checked(&self, n: i64, lag: usize) -> Result<S> {
        if self.has_pole(n) {
            return Err(Error::PoleAtIndex { lag, index: n });
        }
        let den = self.den.eval_int(n);
        if den.is_zero() {
            return Err(Error::PoleAtIndex { lag, index: n });
        }
        Ok(self.num.eval_int(n) / den)
    }

    pub fn eval(&self, n: i64) -> Result<S> {
        self.eval_checked(n, 1)
    }

    /// `lim_{n→∞}`, when the degrees allow a finite limit.
    pub fn limit(&self) -> Option<S> {
        let dd = self.den.degree()?;
        match self.num.degree() {
            None => Some(S::zero(self.num.ctx())),
            Some(dn) if dn < dd => Some(S::zero(self.num.ctx())),
            Some(dn) if dn == dd => Some(self.num.leading()?.clone() / self.den.leading()?),
            _ => None,
        }
    }

    /// Reindexes `n ↦ n + offset` (offset ≥ 0).
    pub fn shift(&self, offset: i64) -> Self {
        assert!(offset >= 0, "negative shift");
        RationalFn {
            num: self.num.shift(offset),
            den: self.den.shift(offset),
            poles: self
                .poles
                .iter()
                .filter(|&&p| p >= offset)
                .map(|&p| p - offset)
                .collect(),
        }
    }

    /// Converts coefficients, keeping the pole set computed in `S`.
    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> RationalFn<T> {
        RationalFn {
            num: self.num.map(ctx, &f),
            den: self.den.map(ctx, &f),
            poles: self.poles.clone(),
        }
    }
}
