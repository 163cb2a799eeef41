//! Pochhammer symbols, log-Gamma, the Pochhammer-ratio lower bound used in the
//! divergence argument, and a plain-summation Gauss hypergeometric series.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Float, Precision, Rational, RealScalar, Scalar};

/// Rising factorial `a (a+1) ⋯ (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer<S: Scalar>(a: &S, n: u64) -> S {
    let ctx = a.ctx();
    let mut acc = S::one(ctx);
    let mut term = a.clone();
    let one = S::one(ctx);
    for _ in 0..n {
        acc = acc * &term;
        term += &one;
    }
    acc
}

/// Log-Gamma on the positive reals at a fixed precision.
///
/// Holds the Stirling coefficients `B_{2k} / (2k (2k-1))` and `½ ln 2π` so
/// repeated evaluations only pay for the shift product and one logarithm.
#[derive(Clone, Debug)]
pub struct LnGamma {
    prec: Precision,
    work: Precision,
    half_ln_two_pi: Float,
    stirling: Vec<Float>,
    shift_to: i64,
}

const STIRLING_TERMS: usize = 30;

impl LnGamma {
    pub fn new(prec: Precision) -> Self {
        let work = prec.guarded(32);
        let two_pi = Float::pi(work) * Float::from_i64(2, work);
        let half_ln_two_pi = two_pi.ln() / Float::from_i64(2, work);
        let stirling = bernoulli_even(STIRLING_TERMS)
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let k = (i + 1) as i64;
                let c = b.clone() / Rational::from_int(2 * k * (2 * k - 1));
                c.to_float(work)
            })
            .collect();
        // With y ≥ bits the 30-term tail is below 2^-(bits+90).
        let shift_to = work.get() as i64;
        LnGamma {
            prec,
            work,
            half_ln_two_pi,
            stirling,
            shift_to,
        }
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// `ln Γ(x)` for `x > 0`. Panics otherwise.
    pub fn eval(&self, x: &Float) -> Float {
        let w = self.work;
        let mut y = x.clone().round_to(w);
        assert!(!y.is_sign_negative() && !y.is_zero(), "lnΓ needs x > 0");
        let one = Float::from_i64(1, w);
        let threshold = Float::from_i64(self.shift_to, w);
        let mut product = one.clone();
        while y < threshold {
            product = product * &y;
            y += &one;
        }
        let half = Float::from_i64(1, w) / Float::from_i64(2, w);
        let mut sum = (y.clone() - &half) * &y.ln() - &y + &self.half_ln_two_pi;
        let inv = one.clone() / &y;
        let inv2 = inv.clone() * &inv;
        let mut power = inv;
        let tol = Float::pow2(-(w.get() as i64) - 8, w);
        for c in &self.stirling {
            let term = c.clone() * &power;
            sum += &term;
            if term.abs() < tol {
                break;
            }
            power = power * &inv2;
        }
        (sum - product.ln()).round_to(self.prec)
    }

    /// `Γ(a) / Γ(b)` for `a, b > 0`.
    pub fn gamma_ratio(&self, a: &Float, b: &Float) -> Float {
        (self.eval(a) - self.eval(b)).exp().round_to(self.prec)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: &Float) -> Float {
    LnGamma::new(x.precision()).eval(x)
}

/// `B_2, B_4, …, B_{2m}` from `Σ_{j≤k} C(k+1, j) B_j = 0`.
fn bernoulli_even(m: usize) -> Vec<Rational> {
    let top = 2 * m;
    let mut b: Vec<Rational> = Vec::with_capacity(top + 1);
    b.push(Rational::from_int(1));
    for k in 1..=top {
        if k > 1 && k % 2 == 1 {
            b.push(Rational::from_int(0));
            continue;
        }
        // binom(k+1, j) built incrementally
        let mut binom = Rational::from_int(1);
        let mut s = Rational::from_int(0);
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                s += &(binom.clone() * bj);
            }
            binom = binom * &Rational::new((k + 1 - j) as i64, (j + 1) as i64);
        }
        b.push(-s / Rational::from_int(k as i64 + 1));
    }
    (1..=m).map(|k| b[2 * k].clone()).collect()
}

/// Both sides of the Pochhammer-ratio lower bound
///
/// ```text
/// (b)_n / (c)_n  >  Γ(c) / (2 Γ(b)) · n^(-h/2),
/// b = (2 + r + N - h)/2 + i,   c = b + h/2,   n = i_{2(r+1)}.
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct PochhammerBound {
    pub lhs: Float,
    pub rhs: Float,
    pub holds: bool,
    /// Even `h`: both sides were computed and compared in exact rationals.
    pub exact: bool,
}

fn bound_base(n_big: u64, h2: u64, r: u64, i2r: u64) -> Result<Rational> {
    if n_big <= h2 {
        return Err(Error::DomainError(format!(
            "Pochhammer bound needs N - h2 > 0 (N = {n_big}, h2 = {h2})"
        )));
    }
    Ok(Rational::new((2 + r + n_big - h2) as i64, 2) + &Rational::from_int(i2r as i64))
}

/// Evaluates both sides of the Pochhammer-ratio bound and reports `lhs > rhs`.
///
/// The caller is responsible for choosing `i2r1` above a valid floor; see
/// [`pochhammer_bound_floor`].
pub fn pochhammer_ratio_lower_bound(
    n_big: u64,
    h2: u64,
    r: u64,
    i2r: u64,
    i2r1: u64,
    prec: Precision,
) -> Result<PochhammerBound> {
    let b = bound_base(n_big, h2, r, i2r)?;
    if i2r1 == 0 {
        return Err(Error::DomainError(format!(
            "Pochhammer bound needs i2r1 >= 1 (got {i2r1})"
        )));
    }
    let c = b.clone() + &Rational::new(h2 as i64, 2);
    if h2 % 2 == 0 {
        let lhs = pochhammer(&b, i2r1) / pochhammer(&c, i2r1);
        let gamma_ratio = pochhammer(&b, h2 / 2);
        let rhs = gamma_ratio
            / (Rational::from_int(2) * Rational::from_int(i2r1 as i64).powi(h2 / 2));
        return Ok(PochhammerBound {
            holds: lhs > rhs,
            lhs: lhs.to_float(prec),
            rhs: rhs.to_float(prec),
            exact: true,
        });
    }
    let w = prec.guarded(16);
    let lg = LnGamma::new(w);
    let bf = b.to_float(w);
    let cf = c.to_float(w);
    let lhs = if i2r1 <= 100_000 {
        let mut acc = Float::from_i64(1, w);
        let mut bj = bf.clone();
        let mut cj = cf.clone();
        let one = Float::from_i64(1, w);
        for _ in 0..i2r1 {
            acc = acc * &bj / &cj;
            bj += &one;
            cj += &one;
        }
        acc
    } else {
        let n = Float::from_i64(i2r1 as i64, w);
        (lg.eval(&(bf.clone() + &n)) + &lg.eval(&cf) - &lg.eval(&bf) - &lg.eval(&(cf.clone() + &n)))
            .exp()
    };
    let half_h = Float::from_i64(h2 as i64, w) / Float::from_i64(2, w);
    let ln_n = Float::from_i64(i2r1 as i64, w).ln();
    let rhs = (lg.eval(&cf) - &lg.eval(&bf) - &(half_h * &ln_n)).exp() / Float::from_i64(2, w);
    Ok(PochhammerBound {
        holds: lhs > rhs,
        lhs: lhs.round_to(prec),
        rhs: rhs.round_to(prec),
        exact: false,
    })
}

/// A floor `m` such that the Pochhammer-ratio bound holds for every
/// `i2r1 ≥ m`.
///
/// From `ln Γ(x+s) − ln Γ(x) ≤ s ln(x+s)` the left side is at least
/// `(n / (n + b + h/2))^(h/2)` times the right side's `2 n^(-h/2)` scale, which
/// exceeds `1/2` once `n > (b + h/2) / (2^(2/h) − 1)`.
pub fn pochhammer_bound_floor(n_big: u64, h2: u64, r: u64, i2r: u64) -> Result<u64> {
    let b = bound_base(n_big, h2, r, i2r)?;
    if h2 == 0 {
        return Ok(1);
    }
    let p = Precision::bits(128);
    let top = (b + &Rational::new(h2 as i64, 2)).to_float(p);
    let exponent = Float::from_i64(2, p) / Float::from_i64(h2 as i64, p);
    let two_pow = (exponent * &Float::from_i64(2, p).ln()).exp();
    // nudge up so rounding can never land the floor below the true quotient
    let ratio = top / (two_pow - Float::from_i64(1, p)) + Float::pow2(-40, p);
    let floor = ratio.floor_i64().unwrap_or(i64::MAX - 1).max(0) as u64;
    Ok(floor + 1)
}

/// Parameters of `₂F₁(a, b; c; x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyp2F1Params<S: Scalar> {
    pub a: S,
    pub b: S,
    pub c: S,
}

impl<S: Scalar> Hyp2F1Params<S> {
    /// Rejects `c ∈ {0, -1, -2, …}`.
    pub fn new(a: S, b: S, c: S) -> Result<Self> {
        if c.as_integer().is_some_and(|v| v <= 0) {
            return Err(Error::InvalidC(format!("{c:?}")));
        }
        Ok(Hyp2F1Params { a, b, c })
    }
}

/// Result of summing the hypergeometric series term by term.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyp2F1Sum<S: Scalar> {
    pub value: S,
    pub converged: bool,
    /// Number of terms added after the leading 1.
    pub terms: u64,
}

/// Plain summation of `Σ (a)_k (b)_k / ((c)_k k!) x^k` until a term drops
/// below `tol` in modulus or `n_max` terms have been added.
///
/// No transformations are applied; near `|x| = 1` slow or divergent series
/// come back with `converged = false`.
pub fn hyp2f1_series<S: Scalar>(
    p: &Hyp2F1Params<S>,
    x: &S,
    tol: &S::Real,
    n_max: u64,
) -> Result<Hyp2F1Sum<S>> {
    let ctx = x.ctx();
    if x.norm_sqr() > <S::Real as Scalar>::one(ctx) {
        return Err(Error::DomainError(format!(
            "hypergeometric series needs |x| <= 1, got {x:?}"
        )));
    }
    let tol2 = tol.clone() * tol;
    let one = S::one(ctx);
    let mut sum = one.clone();
    let mut term = one.clone();
    let (mut a, mut b, mut c) = (p.a.clone(), p.b.clone(), p.c.clone());
    let mut k1 = one.clone();
    for k in 0..n_max {
        term = term * &a * &b / &(c.clone() * &k1) * x;
        if term.norm_sqr() < tol2 {
            sum += &term;
            return Ok(Hyp2F1Sum {
                value: sum,
                converged: true,
                terms: k + 1,
            });
        }
        sum += &term;
        a += &one;
        b += &one;
        c += &one;
        k1 += &one;
    }
    Ok(Hyp2F1Sum {
        value: sum,
        converged: false,
        terms: n_max,
    })
}
