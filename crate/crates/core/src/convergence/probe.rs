//! Empirical behaviour of a series on a circle `|x| = r`: scaled term traces,
//! Cauchy gaps of the absolute series, tail fits, and a tail-regression radius
//! estimate.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::recurrence::{CoefficientStream, RecurrenceSpec};
use crate::scalar::{Complex, Float, Precision, RealScalar, Scalar};

/// Which series is summed on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeSeries {
    /// `Σ |d_n| r^n` for the recurrence itself.
    Signed,
    /// `Σ |c̄_n| r^n` for the modulus recurrence started at `offset`.
    Modulus { offset: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    ConvergesEmpirically,
    DivergesEmpirically,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::ConvergesEmpirically => "converges-empirically",
            Verdict::DivergesEmpirically => "diverges-empirically",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Gap thresholds behind [`Verdict`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeThresholds {
    /// The last `sustain` gaps must be below this and non-increasing.
    pub converge_below: f64,
    /// Every gap from `diverge_from` on must reach this.
    pub diverge_above: f64,
    pub diverge_from: usize,
    pub sustain: usize,
}

impl Default for ProbeThresholds {
    fn default() -> Self {
        ProbeThresholds {
            converge_below: 1e-8,
            diverge_above: 1e-3,
            diverge_from: 1 << 10,
            sustain: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeOptions {
    /// Last index summed.
    pub n_max: usize,
    /// Trace every `stride`-th term (and the last one).
    pub stride: usize,
    pub prec: Precision,
    pub series: ProbeSeries,
    pub thresholds: ProbeThresholds,
}

impl ProbeOptions {
    pub fn new(n_max: usize, stride: usize, series: ProbeSeries) -> Self {
        ProbeOptions {
            n_max,
            stride: stride.max(1),
            prec: Precision::DEFAULT,
            series,
            thresholds: ProbeThresholds::default(),
        }
    }
}

/// One sampled term.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    /// The coefficient itself (`d_n` or `|c̄_n|`).
    pub value: Complex,
    /// `ln |value|`, `None` for a zero coefficient.
    pub log_mag: Option<f64>,
    /// `|value| r^n`.
    pub term_at_r: Float,
    /// `Σ_{i≤n} |value_i| r^i`.
    pub partial_sum: Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryDiagnostics {
    pub radius_used: Float,
    pub series: ProbeSeries,
    pub term_trace: Vec<TraceRow>,
    /// `(N, S_{2N} − S_N)` for `N = 1, 2, 4, …`, `S_N = Σ_{n≤N} |term_n|`.
    pub cauchy_gaps: Vec<(usize, Float)>,
    /// `s` in `|term_n| ≈ C n^s ρ^n`, fitted on the last 15/16 of the trace.
    pub fitted_tail_exponent: Option<f64>,
    pub fitted_rho: Option<f64>,
    pub verdict: Verdict,
}

/// Streams the scaled terms of the chosen series on `|x| = r` up to
/// `opts.n_max`, tracking the absolute partial sums in `opts.prec` bits.
pub fn boundary_probe<S: Scalar>(
    spec: &RecurrenceSpec<S>,
    r: &Float,
    opts: &ProbeOptions,
) -> Result<BoundaryDiagnostics> {
    if r.is_zero() || r.is_sign_negative() {
        return Err(Error::DomainError(format!("probe radius must be positive, got {r:?}")));
    }
    let prec = opts.prec;
    let r = r.clone().round_to(prec);
    let all_real = spec
        .coeffs()
        .iter()
        .all(|c| c.num().coeffs().iter().chain(c.den().coeffs()).all(|v| v.im().is_zero()));
    let mut acc = Accumulator::new(&r, opts);
    if all_real {
        let spec = spec.map(prec, |v| v.re().to_float(prec));
        run(&spec, &r, opts, &mut acc)?;
    } else {
        let spec = spec.map(prec, |v| v.to_complex(prec));
        run(&spec, &r, opts, &mut acc)?;
    }
    Ok(acc.finish(r, opts))
}

/// Scaled terms `v_n = value_n r^n`, fed one at a time.
fn run<T: Scalar<Ctx = Precision, Real = Float>>(
    spec: &RecurrenceSpec<T>,
    r: &Float,
    opts: &ProbeOptions,
    acc: &mut Accumulator,
) -> Result<()> {
    let prec = opts.prec;
    let k = spec.k();
    let mut r_pows = Vec::with_capacity(k + 1);
    let mut p = Float::from_i64(1, prec);
    for _ in 0..=k {
        r_pows.push(p.clone());
        p = p * r;
    }
    match opts.series {
        ProbeSeries::Signed => {
            let mut window: Vec<T> = alloc::vec![T::one(prec)];
            acc.push(0, &window[0].to_complex(prec), window[0].modulus());
            for n in 0..opts.n_max {
                let mut next = T::zero(prec);
                for i in 1..=k.min(n + 1) {
                    let coef = spec.alpha(i, n as i64)? * &T::from_real(r_pows[i].clone());
                    next += &(coef * &window[window.len() - i]);
                }
                let m = next.modulus();
                if acc.wants(n + 1) {
                    acc.push(n + 1, &next.to_complex(prec), m);
                } else {
                    acc.add(n + 1, m);
                }
                if window.len() == k {
                    window.remove(0);
                }
                window.push(next);
            }
        }
        ProbeSeries::Modulus { offset } => {
            if k != 2 {
                return Err(Error::NotThreeTerm(k));
            }
            let one = Float::from_i64(1, prec);
            acc.push(0, &Complex::from_float(one.clone()), one.clone());
            let mut prev = Float::from_i64(0, prec);
            let mut cur = one;
            for n in 0..opts.n_max {
                let idx = (n + offset) as i64;
                let mut next = spec.alpha(1, idx)?.modulus() * r * &cur;
                if n >= 1 {
                    next += &(spec.alpha(2, idx)?.modulus() * &r_pows[2] * &prev);
                }
                if acc.wants(n + 1) {
                    acc.push(n + 1, &Complex::from_float(next.clone()), next.clone());
                } else {
                    acc.add(n + 1, next.clone());
                }
                prev = core::mem::replace(&mut cur, next);
            }
        }
    }
    Ok(())
}

struct Accumulator {
    stride: usize,
    n_max: usize,
    ln_r: f64,
    sum: Float,
    next_pow2: usize,
    sums_at_pow2: Vec<(usize, Float)>,
    trace: Vec<TraceRow>,
    r: Float,
}

impl Accumulator {
    fn new(r: &Float, opts: &ProbeOptions) -> Self {
        Accumulator {
            stride: opts.stride.max(1),
            n_max: opts.n_max,
            ln_r: r.ln_abs_f64().expect("positive radius"),
            sum: Float::from_i64(0, opts.prec),
            next_pow2: 1,
            sums_at_pow2: Vec::new(),
            trace: Vec::new(),
            r: r.clone(),
        }
    }

    fn wants(&self, n: usize) -> bool {
        n % self.stride == 0 || n == self.n_max
    }

    /// Adds `|v_n|` to the running sum.
    fn add(&mut self, n: usize, term: Float) {
        self.sum += &term;
        if n == self.next_pow2 {
            self.sums_at_pow2.push((n, self.sum.clone()));
            self.next_pow2 *= 2;
        }
    }

    /// `scaled` is `v_n = value_n r^n`.
    fn push(&mut self, n: usize, scaled: &Complex, term: Float) {
        self.add(n, term.clone());
        let r_n = self.r.clone().powi(n as u64);
        let value = Complex::new(scaled.re.clone() / &r_n, scaled.im.clone() / &r_n);
        let log_mag = term.ln_abs_f64().map(|l| l - n as f64 * self.ln_r);
        self.trace.push(TraceRow {
            n,
            value,
            log_mag,
            term_at_r: term,
            partial_sum: self.sum.clone(),
        });
    }

    fn finish(self, r: Float, opts: &ProbeOptions) -> BoundaryDiagnostics {
        let sums = &self.sums_at_pow2;
        let cauchy_gaps: Vec<(usize, Float)> = sums
            .iter()
            .zip(sums.iter().skip(1))
            .map(|((n, s1), (_, s2))| (*n, s2.clone() - s1))
            .collect();
        let points: Vec<(f64, f64)> = self
            .trace
            .iter()
            .filter(|row| row.n >= (self.n_max / 16).max(8))
            .filter_map(|row| row.term_at_r.ln_abs_f64().map(|y| (row.n as f64, y)))
            .collect();
        let fit = fit_tail(&points);
        let verdict = verdict(&cauchy_gaps, &opts.thresholds);
        BoundaryDiagnostics {
            radius_used: r,
            series: opts.series,
            term_trace: self.trace,
            cauchy_gaps,
            fitted_tail_exponent: fit.map(|f| f.exponent),
            fitted_rho: fit.map(|f| libm::exp(f.log_ratio)),
            verdict,
        }
    }
}

fn verdict(gaps: &[(usize, Float)], t: &ProbeThresholds) -> Verdict {
    let values: Vec<f64> = gaps.iter().map(|(_, g)| g.to_f64()).collect();
    if values.len() >= t.sustain {
        let last = &values[values.len() - t.sustain..];
        let small = last.iter().all(|&g| g < t.converge_below);
        let non_increasing = last.windows(2).all(|w| w[1] <= w[0]);
        if small && non_increasing {
            return Verdict::ConvergesEmpirically;
        }
    }
    let late: Vec<f64> = gaps
        .iter()
        .filter(|(n, _)| *n >= t.diverge_from)
        .map(|(_, g)| g.to_f64())
        .collect();
    if late.len() >= t.sustain && late.iter().all(|&g| g >= t.diverge_above) {
        return Verdict::DivergesEmpirically;
    }
    Verdict::Inconclusive
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct TailFit {
    exponent: f64,
    /// Coefficient of `n`: `ln ρ`.
    log_ratio: f64,
}

/// Least squares for `y ≈ c0 + s ln n + n ln ρ`.
fn fit_tail(points: &[(f64, f64)]) -> Option<TailFit> {
    if points.len() < 4 {
        return None;
    }
    let n_scale = points.iter().map(|p| p.0).fold(1.0, f64::max);
    let mean = |f: &dyn Fn(&(f64, f64)) -> f64| points.iter().map(f).sum::<f64>() / points.len() as f64;
    let mx1 = mean(&|p| libm::log(p.0));
    let mx2 = mean(&|p| p.0 / n_scale);
    let my = mean(&|p| p.1);
    let (mut s11, mut s12, mut s22, mut s1y, mut s2y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(n, y) in points {
        let x1 = libm::log(n) - mx1;
        let x2 = n / n_scale - mx2;
        let yy = y - my;
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        s1y += x1 * yy;
        s2y += x2 * yy;
    }
    let det = s11 * s22 - s12 * s12;
    if !(det.abs() > 1e-300) {
        return None;
    }
    let s = (s1y * s22 - s2y * s12) / det;
    let b = (s11 * s2y - s12 * s1y) / det;
    Some(TailFit {
        exponent: s,
        log_ratio: b / n_scale,
    })
}

/// Minimum stream length accepted by [`empirical_radius`].
pub const EMPIRICAL_RADIUS_MIN_LEN: usize = 1000;

/// `1 / limsup |d_n|^{1/n}` estimated from a regression of `ln |d_n|` on
/// `(1, ln n, n)` over the second half of the stream.
pub fn empirical_radius<S: Scalar>(stream: &CoefficientStream<S>) -> Result<f64> {
    let len = stream.log_mags.len();
    if len < EMPIRICAL_RADIUS_MIN_LEN {
        return Err(Error::InsufficientData {
            needed: EMPIRICAL_RADIUS_MIN_LEN,
            got: len,
        });
    }
    let points: Vec<(f64, f64)> = stream
        .log_mags
        .iter()
        .enumerate()
        .skip(len / 2)
        .filter_map(|(n, l)| l.as_ref().map(|l| (n as f64, l.to_f64())))
        .collect();
    let fit = fit_tail(&points).ok_or(Error::InsufficientData {
        needed: 4,
        got: points.len(),
    })?;
    Ok(libm::exp(-fit.log_ratio))
}
