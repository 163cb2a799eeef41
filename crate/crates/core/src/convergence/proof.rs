//! The constants and inequalities behind the boundary-divergence argument for
//! three-term recurrences: the four sub-leading cases, the `(ε, h, N)` search,
//! the Pochhammer/`₂F₁` minorant, and the dominating series.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::convergence::domain::EtaZ;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::recurrence::{
    limit_profile, modulus_stream, stream_values, LimitProfile, RecurrenceSpec,
};
use crate::scalar::{Float, Precision, Rational, RealScalar, Scalar};
use crate::special::{hyp2f1_series, Hyp2F1Params, LnGamma};

/// Which of `Ω ≥ ω` and `Θ ≥ θ` hold, compared on real parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `Ω < ω`, `Θ < θ`.
    Case1,
    /// `Ω ≥ ω`, `Θ ≥ θ`.
    Case2,
    /// `Ω ≥ ω`, `Θ < θ`.
    Case3,
    /// `Ω < ω`, `Θ ≥ θ`.
    Case4,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Case1 => "CASE1",
            CaseTag::Case2 => "CASE2",
            CaseTag::Case3 => "CASE3",
            CaseTag::Case4 => "CASE4",
        }
    }

    fn from_branches(a_ge: bool, b_ge: bool) -> Self {
        match (a_ge, b_ge) {
            (false, false) => CaseTag::Case1,
            (true, true) => CaseTag::Case2,
            (true, false) => CaseTag::Case3,
            (false, true) => CaseTag::Case4,
        }
    }
}

/// `Re x ≥ Re y`, ties decided by the tier.
fn re_ge<S: Scalar>(x: &S, y: &S) -> bool {
    x.re().tier_cmp(&y.re()) != Ordering::Less
}

pub fn classify_case<S: Scalar>(lp: &LimitProfile<S>) -> Result<CaseTag> {
    let sl = lp
        .three_term
        .as_ref()
        .ok_or(Error::NotThreeTerm(lp.limits.len()))?;
    Ok(CaseTag::from_branches(
        re_ge(&sl.big_omega, &sl.omega),
        re_ge(&sl.big_theta, &sl.theta),
    ))
}

/// `(ε, h_A, h_B, N, m, K)` of the divergence argument.
///
/// `h_A` plays the role of `h1`/`h3` and `h_B` of `h2`/`h4`, depending on the
/// case.
#[derive(Clone, Debug, PartialEq)]
pub struct ProofConstants {
    pub case: CaseTag,
    pub eps: Rational,
    pub h_a: u64,
    pub h_b: u64,
    pub n: u64,
    pub n_check: u64,
    pub m: u64,
    pub k: Rational,
    /// `N` forced by the rightmost root of `p(P − p)` when `Ω > ω` strictly.
    pub a_root_floor: Option<u64>,
    /// Same for `B̄_n` when `Θ > θ` strictly.
    pub b_root_floor: Option<u64>,
}

pub const DEFAULT_M: u64 = 2;

pub fn default_k() -> Rational {
    Rational::new(1, 2)
}

/// `P/p` with both factors monic, so `Ā_n = P(n)/p(n)`.
struct Normalised<S: Scalar> {
    big: Polynomial<S>,
    small: Polynomial<S>,
}

impl<S: Scalar> Normalised<S> {
    fn new(spec: &RecurrenceSpec<S>, lag: usize) -> Self {
        let c = spec.coeff(lag);
        let big = c.num().monic().map(|m| m.1).unwrap_or_else(|| c.num().clone());
        let small = c.den().monic().map(|m| m.1).expect("denominator is nonzero");
        Normalised { big, small }
    }

    /// `n |P(n)| > (n − h) |p(n)|`, i.e. `|P/p| > 1 − h/n`.
    fn exceeds(&self, n: i64, h: u64) -> bool {
        let ctx = self.big.ctx();
        let lhs = self.big.eval_int(n).norm_sqr() * &<S::Real as Scalar>::from_i64(n * n, ctx);
        let gap = n - h as i64;
        if gap <= 0 {
            return !lhs.is_zero();
        }
        let rhs = self.small.eval_int(n).norm_sqr() * &<S::Real as Scalar>::from_i64(gap * gap, ctx);
        lhs.tier_cmp(&rhs) == Ordering::Greater
    }

    /// `Re(conj(p) (P − p))`, positive exactly where `|P/p|` is pushed above 1
    /// by the sub-leading excess.
    fn excess_poly(&self) -> Polynomial<S::Real> {
        let diff = self.big.sub(&self.small);
        self.small
            .real_part()
            .mul(&diff.real_part())
            .add(&self.small.imag_part().mul(&diff.imag_part()))
    }
}

/// Smallest positive integer `h` with `Re(lower − upper) − h < 0`.
fn smallest_h<S: Scalar>(upper: &S, lower: &S) -> Result<u64> {
    let gap = lower.re() - upper.re();
    let fl = gap
        .floor_i64()
        .ok_or_else(|| Error::DomainError(format!("sub-leading gap {gap:?} out of range")))?;
    Ok(fl.saturating_add(1).max(1) as u64)
}

fn cleanup<R: RealScalar>(p: Polynomial<R>) -> Polynomial<R> {
    if R::EXACT || p.is_zero() {
        return p;
    }
    let ctx = p.ctx();
    let scale = p
        .coeffs()
        .iter()
        .map(|c| c.abs().to_float(Precision::bits(64)))
        .fold(Float::from_i64(0, Precision::bits(64)), Float::max);
    let prec = R::working_precision(ctx);
    let cut = (prec.half_tolerance() * &scale.round_to(prec)).to_f64();
    Polynomial::new(
        p.coeffs()
            .iter()
            .map(|c| {
                if c.abs().to_float(Precision::bits(64)).to_f64() <= cut {
                    R::zero(ctx)
                } else {
                    c.clone()
                }
            })
            .collect(),
        ctx,
    )
}

/// Sturm chain `p, p', −rem(p, p'), …`.
fn sturm_chain<R: RealScalar>(p: &Polynomial<R>) -> Vec<Polynomial<R>> {
    let mut chain = alloc::vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        let r = cleanup(r.scale(&-R::one(p.ctx())));
        if r.is_zero() {
            break;
        }
        chain.push(r);
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_of<R: RealScalar>(v: &R) -> Ordering {
    if v.is_zero() {
        Ordering::Equal
    } else if v.is_negative() {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Smallest integer `N ≥ 0` with no real root of `p` in `[N, ∞)`.
fn root_floor<R: RealScalar>(p: &Polynomial<R>) -> u64 {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let chain = sturm_chain(p);
    let at_inf = sign_changes(chain.iter().map(|q| sign_of(q.leading().expect("nonzero"))));
    let clear = |n: u64| {
        let x = R::from_i64(n as i64, p.ctx());
        !p.eval(&x).is_zero()
            && sign_changes(chain.iter().map(|q| sign_of(&q.eval(&x)))) == at_inf
    };
    if clear(0) {
        return 0;
    }
    let mut hi = libm::ceil(p.cauchy_root_bound().unwrap_or(1.0)) as u64 + 1;
    while !clear(hi) {
        hi *= 2;
    }
    let mut lo: u64 = 0;
    // invariant: !clear(lo), clear(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if clear(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Finds `h_A`, `h_B` and the smallest `N ≤ N_check` such that, for every
/// `n ∈ [N, N_check]`,
///
/// ```text
/// |Ā_n| > 1 − h_A/n > 1 − ε,    |B̄_n| > 1 − h_B/n > 1 − ε,    N − h_B > 0,
/// ```
///
/// and, in a `≥` branch with strict excess, `N` lies past the rightmost root
/// of `p(P − p)`.
pub fn find_proof_constants<S: Scalar>(
    spec: &RecurrenceSpec<S>,
    eps: &Rational,
    n_check: u64,
) -> Result<ProofConstants> {
    let zero = Rational::from_int(0);
    let one = Rational::from_int(1);
    if *eps <= zero || *eps >= one {
        return Err(Error::DomainError(format!("eps must lie in (0, 1), got {eps}")));
    }
    let lp = limit_profile(spec)?;
    let case = classify_case(&lp)?;
    let sl = lp.three_term.as_ref().expect("three-term profile");
    let h_a = smallest_h(&sl.big_omega, &sl.omega)?;
    let h_b = smallest_h(&sl.big_theta, &sl.theta)?;
    let na = Normalised::new(spec, 1);
    let nb = Normalised::new(spec, 2);

    let strict = |x: &S, y: &S| x.re().tier_cmp(&y.re()) == Ordering::Greater;
    let a_root_floor = strict(&sl.big_omega, &sl.omega).then(|| root_floor(&na.excess_poly()));
    let b_root_floor = strict(&sl.big_theta, &sl.theta).then(|| root_floor(&nb.excess_poly()));

    // n > h/ε  ⇔  n ≥ floor(h/ε) + 1
    let past = |h: u64| -> u64 {
        let q = Rational::from_int(h as i64) / eps;
        u64::try_from(q.floor()).unwrap_or(u64::MAX - 1) + 1
    };
    let lower = [
        1,
        past(h_a),
        past(h_b),
        h_b + 1,
        a_root_floor.unwrap_or(0),
        b_root_floor.unwrap_or(0),
    ]
    .into_iter()
    .max()
    .expect("nonempty");
    if lower > n_check {
        return Err(Error::NotFoundWithin(n_check));
    }
    let mut n_big = lower;
    for n in (lower..=n_check).rev() {
        if !(na.exceeds(n as i64, h_a) && nb.exceeds(n as i64, h_b)) {
            n_big = n + 1;
            break;
        }
    }
    if n_big > n_check {
        return Err(Error::NotFoundWithin(n_check));
    }
    Ok(ProofConstants {
        case,
        eps: eps.clone(),
        h_a,
        h_b,
        n: n_big,
        n_check,
        m: DEFAULT_M,
        k: default_k(),
        a_root_floor,
        b_root_floor,
    })
}

/// Whether the `₂F₁` argument `w² = ((1−ε)^{m+1} η / ε)²` reaches 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinorantRegime {
    /// `w < 1`: every factor is finite.
    Finite,
    /// `w ≥ 1`, equivalently `ε/(1−ε)^{m+1} ≤ η`: the `₂F₁` factors diverge.
    Divergent,
}

/// Truncated minorant
///
/// ```text
/// (1−K)ε/2 · Σ_{j=1}^{j_max} Γ((s+j)/2)/Γ((s−h+j)/2) w^j · Σ_{k=m}^{k_max} z^k / k^{h/2},
/// s = 1 + N + 2m,   w = (1−ε)^{m+1} η / ε,   h = h_B.
/// ```
///
/// The subtracted terms of the full chain are not included, so this is a
/// truncation, not a certified bound.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorantReport {
    pub value: Float,
    /// Values at `j_max/4` and `j_max/2`, then `j_max`.
    pub doubling: [Float; 3],
    pub growing: bool,
    pub w: Float,
    pub regime: MinorantRegime,
    pub z_tail: Float,
    /// `Σ_{j≥1}` of the Γ-ratio series in closed `₂F₁` form, when `w < 1`.
    pub closed_form_j_sum: Option<Float>,
}

fn pow_half(k: u64, h: u64, prec: Precision) -> Float {
    let kf = Float::from_i64(k as i64, prec);
    let whole = kf.clone().powi(h / 2);
    if h % 2 == 1 {
        whole * &kf.sqrt()
    } else {
        whole
    }
}

/// `Σ_{k=m}^{k_max} z^k / k^{h/2}`.
pub fn z_tail(z: &Float, m: u64, h: u64, k_max: u64) -> Float {
    let prec = z.precision();
    let mut acc = Float::from_i64(0, prec);
    let mut zk = z.clone().powi(m);
    for k in m..=k_max {
        acc += &(zk.clone() / pow_half(k, h, prec));
        zk = zk * z;
    }
    acc
}

/// `Σ_{j=0}^{∞} Γ((s+j)/2)/Γ((s−h+j)/2) w^j` via the even/odd `₂F₁` split.
/// Only defined for `w < 1`.
pub fn gamma_series_closed_form(s: u64, h: u64, w: &Float) -> Result<Float> {
    let prec = w.precision();
    let w2 = w.clone() * w;
    if w2 >= Float::from_i64(1, prec) {
        return Err(Error::DomainError(format!(
            "2F1 argument w^2 = {} >= 1",
            w2.to_decimal_string(12)
        )));
    }
    let lg = LnGamma::new(prec);
    let half = |v: i64| Float::from_i64(v, prec) / Float::from_i64(2, prec);
    let tol = Float::pow2(-(prec.get() as i64), prec);
    let mut total = Float::from_i64(0, prec);
    for parity in 0..2i64 {
        let top = half(s as i64 + parity);
        let bottom = half(s as i64 - h as i64 + parity);
        let g = lg.gamma_ratio(&top, &bottom);
        let params = Hyp2F1Params::new(Float::from_i64(1, prec), top, bottom)?;
        let f = hyp2f1_series(&params, &w2, &tol, 1_000_000)?;
        if !f.converged {
            return Err(Error::DomainError(
                "2F1 factor did not converge within 10^6 terms".into(),
            ));
        }
        let term = g * &f.value;
        total += &if parity == 1 { term * w } else { term };
    }
    Ok(total)
}

pub fn minorant_partial(
    pc: &ProofConstants,
    etaz: &EtaZ,
    j_max: u64,
    k_max: u64,
) -> Result<MinorantReport> {
    if j_max < 4 {
        return Err(Error::DomainError(format!("minorant needs j_max >= 4, got {j_max}")));
    }
    if pc.n <= pc.h_b {
        return Err(Error::DomainError("minorant needs N > h_B".into()));
    }
    let prec = etaz.eta.precision();
    let eps = pc.eps.to_float(prec);
    let one = Float::from_i64(1, prec);
    let w = (one.clone() - &eps).powi(pc.m + 1) * &etaz.eta / &eps;
    let regime = if w >= one {
        MinorantRegime::Divergent
    } else {
        MinorantRegime::Finite
    };
    let s = 1 + pc.n + 2 * pc.m;
    let h = pc.h_b;
    let lg = LnGamma::new(prec);
    let half = |v: u64| Float::from_i64(v as i64, prec) / Float::from_i64(2, prec);
    // G_j = Γ((s+j)/2)/Γ((s−h+j)/2), G_{j+2} = G_j (s+j)/(s−h+j)
    let mut g = [
        lg.gamma_ratio(&half(s + 1), &half(s + 1 - h)),
        lg.gamma_ratio(&half(s + 2), &half(s + 2 - h)),
    ];
    let tail = z_tail(&etaz.z, pc.m, h, k_max);
    let prefactor = (one - &pc.k.to_float(prec)) * &eps / Float::from_i64(2, prec);
    let mut j_sum = Float::from_i64(0, prec);
    let mut wj = w.clone();
    let mut doubling = Vec::with_capacity(3);
    for j in 1..=j_max {
        let slot = ((j - 1) % 2) as usize;
        j_sum += &(g[slot].clone() * &wj);
        g[slot] = g[slot].clone() * &Float::from_i64((s + j) as i64, prec)
            / Float::from_i64((s + j - h) as i64, prec);
        wj = wj * &w;
        if j == j_max / 4 || j == j_max / 2 || j == j_max {
            doubling.push(prefactor.clone() * &j_sum * &tail);
        }
    }
    let doubling: [Float; 3] = doubling.try_into().expect("three checkpoints");
    let inc1 = doubling[1].clone() - &doubling[0];
    let inc2 = doubling[2].clone() - &doubling[1];
    let growing = inc1 > Float::from_i64(0, prec) && inc2 >= inc1;
    let closed_form_j_sum = match regime {
        MinorantRegime::Finite => {
            let g0 = lg.gamma_ratio(&half(s), &half(s - h));
            Some(gamma_series_closed_form(s, h, &w)? - &g0)
        }
        MinorantRegime::Divergent => None,
    };
    Ok(MinorantReport {
        value: doubling[2].clone(),
        doubling,
        growing,
        w,
        regime,
        z_tail: tail,
        closed_form_j_sum,
    })
}

/// Both sides of the dominating-series comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct DominatingCheck<R> {
    /// `Σ_{n ≤ N+M} |d_n| x^n`.
    pub lhs: R,
    /// `Σ_{n<N} |d_n| x^n + |d_N| x^N Σ_{i≤M} |c̄_i| x^i
    ///  + |B_N| |d_{N−1}| x^{N+1} Σ_{i≤M−1} |ĉ_i| x^i`.
    pub rhs: R,
    pub holds: bool,
}

pub fn dominating_series_check<S: Scalar>(
    spec: &RecurrenceSpec<S>,
    n_big: usize,
    x_abs: &S::Real,
    m: usize,
) -> Result<DominatingCheck<S::Real>> {
    if spec.k() != 2 {
        return Err(Error::NotThreeTerm(spec.k()));
    }
    if n_big < 2 {
        return Err(Error::DomainError(format!("dominating series needs N >= 2, got {n_big}")));
    }
    let ctx = spec.ctx();
    let d = stream_values(spec, n_big + m)?;
    let zero = <S::Real as Scalar>::zero(ctx);
    let mut lhs = zero.clone();
    let mut head = zero;
    let mut pow = <S::Real as Scalar>::one(ctx);
    let mut x_n = pow.clone();
    let mut x_n1 = pow.clone();
    for (n, dn) in d.iter().enumerate() {
        let term = dn.modulus() * &pow;
        lhs += &term;
        if n < n_big {
            head += &term;
        }
        if n == n_big {
            x_n = pow.clone();
        }
        if n == n_big + 1 {
            x_n1 = pow.clone();
        }
        pow = pow * x_abs;
    }
    let c_bar = modulus_stream(spec, n_big, m)?.weighted_sum(x_abs, m);
    let mut rhs = head + d[n_big].modulus() * &x_n * &c_bar;
    if m >= 1 {
        let c_hat = modulus_stream(spec, n_big + 1, m - 1)?.weighted_sum(x_abs, m - 1);
        let b_n = spec.alpha(2, n_big as i64)?.modulus();
        rhs += &(b_n * &d[n_big - 1].modulus() * &x_n1 * &c_hat);
    }
    let holds = lhs.tier_cmp(&rhs) != Ordering::Greater;
    Ok(DominatingCheck { lhs, rhs, holds })
}
