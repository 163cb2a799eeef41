//! `(k+1)`-term recurrences with rational-function coefficients:
//!
//! ```text
//! d_{n+1} = Σ_{i=1}^{min(k, n+1)} α_{i,n} d_{n+1-i},   d_0 = 1.
//! ```
//!
//! For `n < k-1` the sum is cut short, which is exactly the seed rule
//! `d_j = Σ_{i≤j} α_{i,j-1} d_{j-i}`; from `n = k-1` on every lag is used.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::poly::RationalFn;
use crate::scalar::{Float, RealScalar, Scalar};

/// The recurrence `α_{1,n}, …, α_{k,n}` with the `d_0 = 1` seed convention.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceSpec<S: Scalar> {
    coeffs: Vec<RationalFn<S>>,
}

impl<S: Scalar> RecurrenceSpec<S> {
    /// Lag `i` (1-based) is first used at `n = i - 1`, so it must be
    /// pole-free on every integer `n ≥ i - 1`.
    pub fn new(coeffs: Vec<RationalFn<S>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidRecurrence("k must be at least 1"));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if let Some(&p) = c.poles().iter().find(|&&p| p >= i as i64) {
                return Err(Error::PoleAtIndex {
                    lag: i + 1,
                    index: p,
                });
            }
        }
        Ok(RecurrenceSpec { coeffs })
    }

    /// Number of lags.
    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the first application of the full recurrence.
    pub fn start_index(&self) -> i64 {
        self.k() as i64 - 1
    }

    pub fn coeffs(&self) -> &[RationalFn<S>] {
        &self.coeffs
    }

    /// Coefficient of lag `lag`, 1-based.
    pub fn coeff(&self, lag: usize) -> &RationalFn<S> {
        &self.coeffs[lag - 1]
    }

    /// `α_{lag, n}`.
    pub fn alpha(&self, lag: usize, n: i64) -> Result<S> {
        self.coeffs[lag - 1].eval_checked(n, lag)
    }

    pub fn ctx(&self) -> S::Ctx {
        self.coeffs[0].num().ctx()
    }

    /// Reindexes every coefficient by `n ↦ n + offset`; the seed restarts at
    /// `1` for the shifted index 0.
    pub fn shifted(&self, offset: usize) -> Self {
        RecurrenceSpec {
            coeffs: self.coeffs.iter().map(|c| c.shift(offset as i64)).collect(),
        }
    }

    /// Converts every coefficient, keeping the pole sets.
    pub fn map<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> RecurrenceSpec<T> {
        RecurrenceSpec {
            coeffs: self.coeffs.iter().map(|c| c.map(ctx, &f)).collect(),
        }
    }

    fn three_term(&self) -> Result<()> {
        if self.k() == 2 {
            Ok(())
        } else {
            Err(Error::NotThreeTerm(self.k()))
        }
    }

    /// `(|α_{1,n}|, |α_{2,n}|)`.
    fn moduli(&self, n: i64) -> Result<(S::Real, S::Real)> {
        Ok((self.alpha(1, n)?.modulus(), self.alpha(2, n)?.modulus()))
    }
}

/// See [`RecurrenceSpec::shifted`].
pub fn shifted_spec<S: Scalar>(spec: &RecurrenceSpec<S>, offset: usize) -> RecurrenceSpec<S> {
    spec.shifted(offset)
}

/// `d_0 … d_N` with natural-log magnitudes (`None` marks `d_n = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientStream<S: Scalar> {
    pub values: Vec<S>,
    pub log_mags: Vec<Option<Float>>,
}

impl<S: Scalar> CoefficientStream<S> {
    pub fn from_values(values: Vec<S>) -> Self {
        let log_mags = values
            .iter()
            .map(|v| v.ln_modulus(S::working_precision(v.ctx())))
            .collect();
        CoefficientStream { values, log_mags }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `d_{n+1} − Σ α_{i,n} d_{n+1-i}` for every `n` with `d_{n+1}` present.
    pub fn residuals(&self, spec: &RecurrenceSpec<S>) -> Result<Vec<S>> {
        (0..self.len().saturating_sub(1))
            .map(|n| Ok(self.values[n + 1].clone() - recurrence_rhs(spec, &self.values, n)?))
            .collect()
    }
}

fn recurrence_rhs<S: Scalar>(spec: &RecurrenceSpec<S>, d: &[S], n: usize) -> Result<S> {
    let mut acc = S::zero(spec.ctx());
    for i in 1..=spec.k().min(n + 1) {
        acc += &(spec.alpha(i, n as i64)? * &d[n + 1 - i]);
    }
    Ok(acc)
}

/// `d_0 … d_N` without the log channel.
pub fn stream_values<S: Scalar>(spec: &RecurrenceSpec<S>, n_max: usize) -> Result<Vec<S>> {
    let mut d = Vec::with_capacity(n_max + 1);
    d.push(S::one(spec.ctx()));
    for n in 0..n_max {
        let next = recurrence_rhs(spec, &d, n)?;
        d.push(next);
    }
    Ok(d)
}

/// `d_0 … d_N` together with `ln |d_n|`.
pub fn stream_coefficients<S: Scalar>(
    spec: &RecurrenceSpec<S>,
    n_max: usize,
) -> Result<CoefficientStream<S>> {
    Ok(CoefficientStream::from_values(stream_values(spec, n_max)?))
}

/// Normalised sub-leading data of a three-term recurrence
/// `A_n = C(n)/c(n)`, `B_n = G(n)/g(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubLeading<S: Scalar> {
    /// `A = C_t / c_t`.
    pub a: S,
    /// `B = G_t / g_t`.
    pub b: S,
    /// Common degree of `C` and `c`.
    pub t_a: usize,
    /// Common degree of `G` and `g`.
    pub t_b: usize,
    /// `Ω = C_{t-1} / C_t`.
    pub big_omega: S,
    /// `ω = c_{t-1} / c_t`.
    pub omega: S,
    /// `Θ = G_{t-1} / G_t`.
    pub big_theta: S,
    /// `θ = g_{t-1} / g_t`.
    pub theta: S,
}

/// Coefficient limits `α_m`, with sub-leading data when `k = 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitProfile<S: Scalar> {
    pub limits: Vec<S>,
    pub three_term: Option<SubLeading<S>>,
}

fn common_degree<S: Scalar>(r: &RationalFn<S>, lag: usize) -> Result<usize> {
    let den = r.den().degree().unwrap_or(0);
    match r.num().degree() {
        Some(num) if num == den => Ok(den),
        num => Err(Error::DegreeMismatch { lag, num, den }),
    }
}

/// `p_{t-1}/p_t`; zero when `t = 0`.
fn sub_leading<S: Scalar>(p: &crate::poly::Polynomial<S>, t: usize) -> S {
    if t == 0 {
        return S::zero(p.ctx());
    }
    p.coeff(t - 1) / &p.coeff(t)
}

/// Limits and, for `k = 2`, the sub-leading profile. Every lag must have
/// numerator and denominator of equal degree.
pub fn limit_profile<S: Scalar>(spec: &RecurrenceSpec<S>) -> Result<LimitProfile<S>> {
    let mut limits = Vec::with_capacity(spec.k());
    let mut degrees = Vec::with_capacity(spec.k());
    for (i, c) in spec.coeffs().iter().enumerate() {
        let t = common_degree(c, i + 1)?;
        degrees.push(t);
        limits.push(c.num().coeff(t) / &c.den().coeff(t));
    }
    let three_term = (spec.k() == 2).then(|| {
        let (ra, rb) = (spec.coeff(1), spec.coeff(2));
        let (t_a, t_b) = (degrees[0], degrees[1]);
        SubLeading {
            a: limits[0].clone(),
            b: limits[1].clone(),
            t_a,
            t_b,
            big_omega: sub_leading(ra.num(), t_a),
            omega: sub_leading(ra.den(), t_a),
            big_theta: sub_leading(rb.num(), t_b),
            theta: sub_leading(rb.den(), t_b),
        }
    });
    Ok(LimitProfile { limits, three_term })
}

/// `|c̄_0|, |c̄_1|, …` for the recurrence with moduli `|A_{n+offset}|`,
/// `|B_{n+offset}|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusSequence<R> {
    pub offset: usize,
    pub values: Vec<R>,
}

impl<R: RealScalar> ModulusSequence<R> {
    /// `Σ_{i ≤ m} |c̄_i| x^i`.
    pub fn weighted_sum(&self, x: &R, m: usize) -> R {
        let mut acc = R::zero(x.ctx());
        let mut pow = R::one(x.ctx());
        for v in self.values.iter().take(m + 1) {
            acc += &(v.clone() * &pow);
            pow = pow * x;
        }
        acc
    }
}

/// `|c̄_0| … |c̄_M|` with `|c̄_1| = |A_offset|` and
/// `|c̄_{n+1}| = |A_{n+offset}||c̄_n| + |B_{n+offset}||c̄_{n-1}|`.
pub fn modulus_stream<S: Scalar>(
    spec: &RecurrenceSpec<S>,
    offset: usize,
    m: usize,
) -> Result<ModulusSequence<S::Real>> {
    spec.three_term()?;
    let ctx = spec.ctx();
    let mut values = Vec::with_capacity(m + 1);
    values.push(<S::Real as Scalar>::one(ctx));
    if m >= 1 {
        values.push(spec.alpha(1, offset as i64)?.modulus());
    }
    for n in 1..m {
        let (a, b) = spec.moduli((n + offset) as i64)?;
        let next = a * &values[n] + b * &values[n - 1];
        values.push(next);
    }
    Ok(ModulusSequence { offset, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathMode {
    /// Walk every composition of `n ≤ M` into steps of 1 and 2.
    Enumerate,
    /// Accumulate a `(τ, n)` table column by column.
    Dynamic,
}

/// Largest `M` accepted by [`PathMode::Enumerate`].
pub const ENUMERATION_LIMIT: usize = 40;

/// Rearranged modulus series: `by_tau[τ]` is the truncation at `n ≤ M` of the
/// sub-series collecting every path with `τ` steps of size one.
#[derive(Clone, Debug, PartialEq)]
pub struct PathExpansion<R> {
    pub offset: usize,
    pub m: usize,
    pub by_tau: Vec<R>,
}

impl<R: RealScalar> PathExpansion<R> {
    pub fn total(&self) -> R {
        let mut it = self.by_tau.iter();
        let mut acc = it.next().cloned().expect("tau column 0 always present");
        for v in it {
            acc += v;
        }
        acc
    }
}

/// Groups the paths `0 → n` (`n ≤ M`) of the modulus recurrence by the
/// number `τ` of `|A|` steps. A step `j → j+1` carries `|A_{j+offset}| x`;
/// a step `j → j+2` carries `|B_{j+1+offset}| x²`.
pub fn path_expansion<S: Scalar>(
    spec: &RecurrenceSpec<S>,
    offset: usize,
    x_abs: &S::Real,
    m: usize,
    tau_max: usize,
    mode: PathMode,
) -> Result<PathExpansion<S::Real>> {
    spec.three_term()?;
    if x_abs.is_negative() || x_abs.is_zero() {
        return Err(Error::DomainError(alloc::format!(
            "path expansion needs x_abs > 0, got {x_abs:?}"
        )));
    }
    if mode == PathMode::Enumerate && m > ENUMERATION_LIMIT {
        return Err(Error::TruncationTooLarge(m));
    }
    let ctx = spec.ctx();
    let x2 = x_abs.clone() * x_abs;
    let mut step_a = Vec::with_capacity(m);
    let mut step_b = Vec::with_capacity(m);
    for j in 0..m {
        step_a.push(spec.alpha(1, (j + offset) as i64)?.modulus() * x_abs);
        if j + 2 <= m {
            step_b.push(spec.alpha(2, (j + 1 + offset) as i64)?.modulus() * &x2);
        }
    }
    let zero = <S::Real as Scalar>::zero(ctx);
    let one = <S::Real as Scalar>::one(ctx);
    let mut by_tau = vec![zero.clone(); tau_max + 1];
    match mode {
        PathMode::Enumerate => {
            let mut stack = vec![(0usize, 0usize, one)];
            while let Some((pos, tau, w)) = stack.pop() {
                by_tau[tau] += &w;
                if pos < m && tau < tau_max {
                    stack.push((pos + 1, tau + 1, w.clone() * &step_a[pos]));
                }
                if pos + 2 <= m {
                    stack.push((pos + 2, tau, w * &step_b[pos]));
                }
            }
        }
        PathMode::Dynamic => {
            // prev2 / prev1 hold T[·][n-2] and T[·][n-1] with x^n folded in.
            let mut prev2: Vec<S::Real> = Vec::new();
            let mut prev1: Vec<S::Real> = vec![one];
            by_tau[0] += &prev1[0];
            for n in 1..=m {
                let width = n.min(tau_max) + 1;
                let mut cur = vec![zero.clone(); width];
                for (tau, slot) in cur.iter_mut().enumerate() {
                    if tau >= 1 {
                        if let Some(v) = prev1.get(tau - 1) {
                            *slot += &(v.clone() * &step_a[n - 1]);
                        }
                    }
                    if n >= 2 {
                        if let Some(v) = prev2.get(tau) {
                            *slot += &(v.clone() * &step_b[n - 2]);
                        }
                    }
                }
                for (acc, v) in by_tau.iter_mut().zip(&cur) {
                    *acc += v;
                }
                prev2 = core::mem::replace(&mut prev1, cur);
            }
        }
    }
    Ok(PathExpansion {
        offset,
        m,
        by_tau,
    })
}

/// One row of the modulus-domination check at `d_{N+j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DominationRow<R> {
    pub j: usize,
    /// `|d_{N+j}|`.
    pub lhs: R,
    /// `|c̄_j||d_N| + |ĉ_{j-1}||B_N||d_{N-1}|`.
    pub rhs: R,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominationReport<R> {
    pub n_big: usize,
    pub rows: Vec<DominationRow<R>>,
    pub holds: bool,
    /// Largest `rhs − lhs`: how far the bound is from equality.
    pub max_deficit: R,
}

/// Checks `|d_{N+j}| ≤ |c̄_j||d_N| + |ĉ_{j-1}||B_N||d_{N-1}|` for
/// `1 ≤ j ≤ j_max`, where `c̄` and `ĉ` are the modulus sequences at offsets
/// `N` and `N+1`.
pub fn modulus_domination<S: Scalar>(
    spec: &RecurrenceSpec<S>,
    stream: &CoefficientStream<S>,
    n_big: usize,
    j_max: usize,
) -> Result<DominationReport<S::Real>> {
    spec.three_term()?;
    if n_big == 0 {
        return Err(Error::DomainError("domination needs N >= 1".into()));
    }
    let needed = n_big + j_max + 1;
    if stream.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: stream.len(),
        });
    }
    let c_bar = modulus_stream(spec, n_big, j_max)?;
    let c_hat = modulus_stream(spec, n_big + 1, j_max.saturating_sub(1))?;
    let b_n = spec.alpha(2, n_big as i64)?.modulus();
    let d_n = stream.values[n_big].modulus();
    let tail = b_n * &stream.values[n_big - 1].modulus();
    let mut rows = Vec::with_capacity(j_max);
    let mut holds = true;
    let mut max_deficit = <S::Real as Scalar>::zero(spec.ctx());
    for j in 1..=j_max {
        let lhs = stream.values[n_big + j].modulus();
        let rhs = c_bar.values[j].clone() * &d_n + c_hat.values[j - 1].clone() * &tail;
        if lhs.tier_cmp(&rhs) == Ordering::Greater {
            holds = false;
        }
        let deficit = rhs.clone() - &lhs;
        if deficit > max_deficit {
            max_deficit = deficit;
        }
        rows.push(DominationRow { j, lhs, rhs });
    }
    Ok(DominationReport {
        n_big,
        rows,
        holds,
        max_deficit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::scalar::{Precision, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn poly(cs: &[Rational]) -> Polynomial<Rational> {
        Polynomial::new(cs.to_vec(), ())
    }

    fn ratfn(num: &[Rational], den: &[Rational]) -> RationalFn<Rational> {
        RationalFn::new(poly(num), poly(den)).unwrap()
    }

    /// `A_n = (n+2)/(n+1)`, `B_n = -(n+3)/(2n+2)`.
    fn sample() -> RecurrenceSpec<Rational> {
        RecurrenceSpec::new(vec![
            ratfn(&[q(2, 1), q(1, 1)], &[q(1, 1), q(1, 1)]),
            ratfn(&[q(-3, 1), q(-1, 1)], &[q(2, 1), q(2, 1)]),
        ])
        .unwrap()
    }

    #[test]
    fn seed_rule_and_recurrence() {
        let spec = sample();
        let d = stream_values(&spec, 3).unwrap();
        // d1 = A_0 = 2; d2 = A_1 d1 + B_1 = 3 - 1 = 2; d3 = A_2 d2 + B_2 d1 = 8/3 - 5/3 = 1
        assert_eq!(d, [q(1, 1), q(2, 1), q(2, 1), q(1, 1)]);
        assert_eq!(spec.start_index(), 1);
    }

    #[test]
    fn geometric_stream_log_mags() {
        let spec = RecurrenceSpec::new(vec![RationalFn::constant(q(1, 2))]).unwrap();
        let s = stream_coefficients(&spec, 10).unwrap();
        assert_eq!(s.values[10], q(1, 1024));
        let p = Precision::DEFAULT;
        let ln2 = Float::from_i64(2, p).ln();
        let expect = -(ln2 * Float::from_i64(10, p));
        let got = s.log_mags[10].clone().unwrap();
        assert!((got - expect).abs() < Float::pow2(-240, p));
        assert!(s.residuals(&spec).unwrap().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn zero_terms_carry_the_sentinel() {
        let spec = RecurrenceSpec::new(vec![
            RationalFn::constant(q(0, 1)),
            RationalFn::constant(q(1, 1)),
        ])
        .unwrap();
        let s = stream_coefficients(&spec, 4).unwrap();
        assert_eq!(s.values, [q(1, 1), q(0, 1), q(1, 1), q(0, 1), q(1, 1)]);
        assert_eq!(s.log_mags[1], None);
        assert_eq!(s.log_mags[2], Some(Float::from_i64(0, Precision::DEFAULT)));
    }

    #[test]
    fn poles_are_rejected_only_where_used() {
        // pole of lag 2 at n = 0 is fine: lag 2 first used at n = 1
        let ok = RecurrenceSpec::new(vec![
            RationalFn::constant(q(1, 1)),
            ratfn(&[q(1, 1)], &[q(0, 1), q(1, 1)]),
        ]);
        assert!(ok.is_ok());
        let bad = RecurrenceSpec::new(vec![
            ratfn(&[q(1, 1)], &[q(-3, 1), q(1, 1)]),
            RationalFn::constant(q(1, 1)),
        ]);
        assert_eq!(bad, Err(Error::PoleAtIndex { lag: 1, index: 3 }));
    }

    #[test]
    fn limit_profile_sample() {
        let lp = limit_profile(&sample()).unwrap();
        assert_eq!(lp.limits, [q(1, 1), q(-1, 2)]);
        let sl = lp.three_term.unwrap();
        assert_eq!((sl.t_a, sl.t_b), (1, 1));
        assert_eq!(sl.big_omega, q(2, 1));
        assert_eq!(sl.omega, q(1, 1));
        assert_eq!(sl.big_theta, q(3, 1));
        assert_eq!(sl.theta, q(1, 1));
    }

    #[test]
    fn limit_profile_degree_mismatch() {
        let spec = RecurrenceSpec::new(vec![ratfn(&[q(0, 1), q(1, 1)], &[q(1, 1)])]).unwrap();
        assert_eq!(
            limit_profile(&spec),
            Err(Error::DegreeMismatch {
                lag: 1,
                num: Some(1),
                den: 0
            })
        );
    }

    #[test]
    fn shift_identity_and_composition() {
        let spec = sample();
        assert_eq!(shifted_spec(&spec, 0), spec);
        assert_eq!(spec.shifted(7).shifted(1), spec.shifted(8));
        assert_eq!(spec.shifted(10).alpha(1, 1).unwrap(), spec.alpha(1, 11).unwrap());
    }

    #[test]
    fn modulus_stream_unrolling() {
        let spec = sample();
        let m = modulus_stream(&spec, 10, 3).unwrap();
        let a = |n| spec.alpha(1, n).unwrap().abs();
        let b = |n| spec.alpha(2, n).unwrap().abs();
        assert_eq!(m.values[0], q(1, 1));
        assert_eq!(m.values[1], a(10));
        assert_eq!(m.values[2], a(11) * a(10) + b(11));
        assert_eq!(
            m.values[3],
            a(12) * m.values[2].clone() + b(12) * m.values[1].clone()
        );
    }

    #[test]
    fn modulus_stream_zero_b_is_a_product() {
        let spec = RecurrenceSpec::new(vec![
            ratfn(&[q(-1, 1), q(1, 1)], &[q(3, 1), q(1, 1)]),
            RationalFn::constant(q(0, 1)),
        ])
        .unwrap();
        let m = modulus_stream(&spec, 2, 6).unwrap();
        let mut prod = q(1, 1);
        for j in 0..6 {
            prod = prod * spec.alpha(1, 2 + j).unwrap().abs();
            assert_eq!(m.values[j as usize + 1], prod);
        }
    }

    #[test]
    fn path_expansion_m2_by_hand() {
        let spec = sample();
        let x = q(1, 3);
        let e = path_expansion(&spec, 0, &x, 2, 2, PathMode::Enumerate).unwrap();
        let a = |n| spec.alpha(1, n).unwrap().abs();
        let b = |n| spec.alpha(2, n).unwrap().abs();
        let x2 = x.clone() * &x;
        // τ=0: empty path + the single B step to n = 2
        assert_eq!(e.by_tau[0], q(1, 1) + b(1) * x2.clone());
        assert_eq!(e.by_tau[1], a(0) * x.clone());
        assert_eq!(e.by_tau[2], a(0) * a(1) * x2);
    }

    #[test]
    fn path_expansion_modes_agree_with_modulus_series() {
        let spec = sample();
        let x = q(2, 5);
        for offset in [0, 3] {
            let direct = modulus_stream(&spec, offset, 18).unwrap().weighted_sum(&x, 18);
            let e = path_expansion(&spec, offset, &x, 18, 18, PathMode::Enumerate).unwrap();
            let d = path_expansion(&spec, offset, &x, 18, 18, PathMode::Dynamic).unwrap();
            assert_eq!(e, d);
            assert_eq!(e.total(), direct);
        }
        assert_eq!(
            path_expansion(&spec, 0, &x, 41, 41, PathMode::Enumerate),
            Err(Error::TruncationTooLarge(41))
        );
    }

    #[test]
    fn tau_cap_drops_higher_columns() {
        let spec = sample();
        let x = q(1, 2);
        let full = path_expansion(&spec, 1, &x, 12, 12, PathMode::Dynamic).unwrap();
        let cut = path_expansion(&spec, 1, &x, 12, 4, PathMode::Enumerate).unwrap();
        assert_eq!(cut.by_tau[..], full.by_tau[..5]);
    }

    #[test]
    fn domination_holds_and_is_tight_for_positive_coefficients() {
        let spec = sample();
        let s = stream_coefficients(&spec, 40).unwrap();
        let r = modulus_domination(&spec, &s, 5, 30).unwrap();
        assert!(r.holds);
        let pos = RecurrenceSpec::new(vec![
            ratfn(&[q(1, 1), q(1, 1)], &[q(2, 1), q(1, 1)]),
            ratfn(&[q(1, 1)], &[q(1, 1), q(1, 1)]),
        ])
        .unwrap();
        let s = stream_coefficients(&pos, 30).unwrap();
        let r = modulus_domination(&pos, &s, 4, 20).unwrap();
        assert!(r.holds);
        assert!(r.rows.iter().all(|row| row.lhs == row.rhs));
    }
}
