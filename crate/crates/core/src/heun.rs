//! Local Heun functions around `x = 0`.
//!
//! ```text
//! y'' + (γ/x + δ/(x-1) + ε/(x-a)) y' + (αβx - q) / (x(x-1)(x-a)) y = 0,
//! ε = α + β - γ - δ + 1.
//! ```
//!
//! Inserting `y = Σ d_n x^{n+λ}` gives the three-term recurrence
//! `d_{n+1} = A_n d_n + B_n d_{n-1}` with
//!
//! ```text
//! A_n = [(1+a)m² + (α+β-δ + a(γ+δ-1)) m + q] / (a (n+1+λ)(n+γ+λ)),   m = n+λ
//! B_n = -(n-1+λ+α)(n-1+λ+β) / (a (n+1+λ)(n+γ+λ))
//! ```
//!
//! so that `A_n → (1+a)/a` and `B_n → -1/a`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::convergence::DomainSpec;
use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalFn};
use crate::recurrence::{limit_profile, stream_coefficients, CoefficientStream, RecurrenceSpec};
use crate::scalar::Scalar;

/// Parameters of Heun's equation. `ε` is always derived.
#[derive(Clone, Debug, PartialEq)]
pub struct HeunParams<S: Scalar> {
    pub a: S,
    pub q: S,
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    pub delta: S,
}

impl<S: Scalar> HeunParams<S> {
    /// Rejects `a = 0` and `a = 1`.
    pub fn new(a: S, q: S, alpha: S, beta: S, gamma: S, delta: S) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::InvalidParams("a must be nonzero"));
        }
        if (a.clone() - S::one(a.ctx())).is_zero() {
            return Err(Error::InvalidParams("a must differ from 1"));
        }
        Ok(HeunParams {
            a,
            q,
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    pub fn epsilon(&self) -> S {
        self.alpha.clone() + &self.beta - &self.gamma - &self.delta + S::one(self.ctx())
    }

    pub fn ctx(&self) -> S::Ctx {
        self.a.ctx()
    }

    /// `A = (1+a)/a`.
    pub fn big_a(&self) -> S {
        (S::one(self.ctx()) + &self.a) / &self.a
    }

    /// `B = -1/a`.
    pub fn big_b(&self) -> S {
        -(S::one(self.ctx()) / &self.a)
    }
}

/// The exponents `0` and `1-γ` at `x = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicialRoots<S: Scalar> {
    pub first: S,
    pub second: S,
    /// The roots differ by an integer, so the second solution may carry a
    /// logarithm.
    pub logarithmic: bool,
}

pub fn indicial_roots<S: Scalar>(p: &HeunParams<S>) -> IndicialRoots<S> {
    let ctx = p.ctx();
    let second = S::one(ctx) - &p.gamma;
    IndicialRoots {
        first: S::zero(ctx),
        logarithmic: second.as_integer().is_some(),
        second,
    }
}

/// The recurrence for the exponent `λ`. `A_n` is used from `n = 0`
/// (`d_1 = A_0`) and `B_n` from `n = 1`.
pub fn heun_recurrence<S: Scalar>(p: &HeunParams<S>, lambda: &S) -> Result<RecurrenceSpec<S>> {
    let ctx = p.ctx();
    let one = S::one(ctx);
    let two = S::from_i64(2, ctx);
    let l = lambda.clone();
    for root in [-(one.clone() + &l), -(p.gamma.clone() + &l)] {
        if let Some(index) = root.as_integer().filter(|&i| i >= 0) {
            return Err(Error::IndicialPole {
                lambda: format!("{lambda:?}"),
                index,
            });
        }
    }
    let a = &p.a;
    let one_plus_a = one.clone() + a;
    // m = n + λ
    let lin = p.alpha.clone() + &p.beta - &p.delta
        + a.clone() * &(p.gamma.clone() + &p.delta - &one);
    let num_a = Polynomial::new(
        vec![
            one_plus_a.clone() * &l * &l + lin.clone() * &l + &p.q,
            one_plus_a.clone() * &two * &l + &lin,
            one_plus_a,
        ],
        ctx,
    );
    // a (n+1+λ)(n+γ+λ)
    let den = Polynomial::linear(one.clone() + &l)
        .mul(&Polynomial::linear(p.gamma.clone() + &l))
        .scale(a);
    let am1 = p.alpha.clone() - &one + &l;
    let bm1 = p.beta.clone() - &one + &l;
    let num_b = Polynomial::linear(am1).mul(&Polynomial::linear(bm1)).scale(&-one);
    RecurrenceSpec::new(vec![
        RationalFn::new(num_a, den.clone())?,
        RationalFn::new(num_b, den)?,
    ])
}

/// `Σ |A||x| + |B||x|²` for the Heun limits.
fn domain_sum<S: Scalar>(p: &HeunParams<S>, x: &S) -> S::Real {
    let r = x.modulus();
    p.big_a().modulus() * &r + p.big_b().modulus() * &r * &r
}

/// Outcome of summing the local series at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct HeunEval<S: Scalar> {
    pub value: S,
    /// Number of series terms added.
    pub n_used: usize,
    pub converged: bool,
}

/// Sums `x^λ Σ d_n x^n` until three consecutive terms fall below
/// `tol · |partial sum|` or `n_max` terms were added. Without `force`, points
/// outside `|A||x| + |B||x|² < 1` are refused.
pub fn heun_eval<S: Scalar>(
    p: &HeunParams<S>,
    lambda: &S,
    x: &S,
    tol: &S::Real,
    n_max: usize,
    force: bool,
) -> Result<HeunEval<S>> {
    let ctx = p.ctx();
    let sum = domain_sum(p, x);
    if !force && sum >= <S::Real as Scalar>::one(ctx) {
        return Err(Error::OutsideDomain {
            sum: format!("{sum:?}"),
        });
    }
    let prefactor = if lambda.is_zero() {
        S::one(ctx)
    } else {
        x.powf(lambda).ok_or(Error::NonRationalPower)?
    };
    let spec = heun_recurrence(p, lambda)?;
    let x2 = x.clone() * x;
    let mut prev = S::zero(ctx);
    let mut cur = S::one(ctx);
    let mut partial = S::one(ctx);
    let mut small_run = 0;
    let mut n_used = 1;
    let tol2 = tol.clone() * tol;
    let mut converged = false;
    while n_used < n_max {
        let n = (n_used - 1) as i64;
        let mut next = spec.alpha(1, n)? * x * &cur;
        if n >= 1 {
            next += &(spec.alpha(2, n)? * &x2 * &prev);
        }
        prev = core::mem::replace(&mut cur, next);
        partial += &cur;
        n_used += 1;
        if cur.norm_sqr() <= tol2.clone() * &partial.norm_sqr() {
            small_run += 1;
            if small_run == 3 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok(HeunEval {
        value: prefactor * &partial,
        n_used,
        converged,
    })
}

/// A streamed local solution with its convergence domain.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSolution<S: Scalar> {
    pub params: HeunParams<S>,
    pub lambda: S,
    pub stream: CoefficientStream<S>,
    pub domain: DomainSpec<S::Real>,
}

/// Streams `d_0 … d_N` for the exponent `λ`, which must be `0` or `1-γ`.
pub fn local_solution<S: Scalar>(
    p: &HeunParams<S>,
    lambda: &S,
    n_max: usize,
) -> Result<LocalSolution<S>> {
    let roots = indicial_roots(p);
    if *lambda != roots.first && *lambda != roots.second {
        return Err(Error::InvalidParams("lambda must be 0 or 1 - gamma"));
    }
    let spec = heun_recurrence(p, lambda)?;
    let limits = limit_profile(&spec)?.limits;
    let domain = DomainSpec::new(limits.iter().map(|v| v.modulus()).collect())?;
    Ok(LocalSolution {
        params: p.clone(),
        lambda: lambda.clone(),
        stream: stream_coefficients(&spec, n_max)?,
        domain,
    })
}

/// Coefficients of `x^{λ+j}`, `j = 0 … M`, of
/// `x(x-1)(x-a) y'' + Q(x) y' + (αβx - q) y` for the series truncated to
/// `d_0 … d_{M-1}`, where `Q = γ(x-1)(x-a) + δx(x-a) + εx(x-1)`.
///
/// Orders `j ≤ M-2` only involve retained coefficients and vanish for an
/// exact solution.
pub fn ode_residual<S: Scalar>(
    p: &HeunParams<S>,
    lambda: &S,
    d: &[S],
    m: usize,
) -> Result<Vec<S>> {
    if m > d.len() {
        return Err(Error::InsufficientData {
            needed: m,
            got: d.len(),
        });
    }
    let ctx = p.ctx();
    let one = S::one(ctx);
    let x = Polynomial::monomial(one.clone(), 1);
    let xm1 = Polynomial::linear(-one.clone());
    let xma = Polynomial::linear(-p.a.clone());
    let cubic = x.mul(&xm1).mul(&xma);
    let q_poly = xm1
        .mul(&xma)
        .scale(&p.gamma)
        .add(&x.mul(&xma).scale(&p.delta))
        .add(&x.mul(&xm1).scale(&p.epsilon()));
    let r_poly = Polynomial::new(vec![-p.q.clone(), p.alpha.clone() * &p.beta], ctx);

    let mut y0 = Vec::with_capacity(m);
    let mut y1 = Vec::with_capacity(m);
    let mut y2 = Vec::with_capacity(m);
    for (n, dn) in d.iter().take(m).enumerate() {
        let e = S::from_i64(n as i64, ctx) + lambda;
        let e1 = e.clone() - &one;
        y0.push(dn.clone());
        y1.push(e.clone() * dn);
        y2.push(e * &e1 * dn);
    }
    let total = cubic
        .mul(&Polynomial::new(y2, ctx))
        .add(&x.mul(&q_poly).mul(&Polynomial::new(y1, ctx)))
        .add(&x.mul(&x).mul(&r_poly).mul(&Polynomial::new(y0, ctx)));
    Ok((0..=m).map(|j| total.coeff(j + 2)).collect())
}
