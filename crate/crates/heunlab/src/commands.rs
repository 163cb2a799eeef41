//! The analyses behind each subcommand, generic over the arithmetic tier.

use heunlab_core::convergence::domain::quadratic_radius;
use heunlab_core::convergence::{
    boundary_probe, classify_case, dominating_series_check, eta_z, find_proof_constants,
    gauss_boundary_test, minorant_partial, DomainSpec, GaussVerdict, MinorantRegime, ProbeOptions,
    ProbeSeries,
};
use heunlab_core::heun::heun_eval;
use heunlab_core::recurrence::{
    limit_profile, modulus_stream, path_expansion, PathMode, RecurrenceSpec, ENUMERATION_LIMIT,
};
use heunlab_core::special::{pochhammer_bound_floor, pochhammer_ratio_lower_bound};
use heunlab_core::{Complex, Float, Precision, Rational, RealScalar, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::AppError;
use crate::instance::{Analysis, InstanceFile, Model, PrecisionMode, TierChoice, Which};
use crate::number::{digits_for, Number, RenderReal, Tier};
use crate::report::{render_log, CommandOutput, ResultDocument, Trace, TraceLine, TOOL, VERSION};

/// Significant digits in CSV traces.
pub const TRACE_DIGITS: usize = 20;

pub const DEFAULT_TOL: &str = "1e-30";
pub const DEFAULT_EVAL_N_MAX: usize = 10_000;
pub const DEFAULT_PROBE_N_MAX: usize = 1 << 20;
pub const DEFAULT_STRIDE: usize = 1024;
pub const DEFAULT_EPS: &str = "1/100";
pub const DEFAULT_N_CHECK: u64 = 100_000;
pub const DEFAULT_AUDIT_M: usize = 30;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 16;
/// Minorant partial sums are taken at `j_max/4`, `j_max/2`, `j_max`.
pub const MINORANT_J_MAX: u64 = 256;
pub const MINORANT_K_MAX: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Eval,
    Domain,
    Classify,
    Boundary,
    ProofAudit,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Domain => "domain",
            Command::Classify => "classify",
            Command::Boundary => "boundary",
            Command::ProofAudit => "proof-audit",
        }
    }
}

/// Per-run settings. Command-line values win over the `[analysis]` block.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub precision: Option<PrecisionMode>,
    /// Fallback when neither the command line nor the file names a precision.
    pub env_precision: Option<PrecisionMode>,
    pub tol: Option<Number>,
    pub n_max: Option<usize>,
    pub force: bool,
    pub x: Option<Number>,
    pub r: Option<Number>,
    pub which: Option<Which>,
    pub stride: Option<usize>,
    pub offset: Option<usize>,
    pub eps: Option<Number>,
    pub n_check: Option<u64>,
    pub m: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

impl Settings {
    fn merged(&self, a: &Analysis) -> Settings {
        Settings {
            precision: self.precision,
            env_precision: self.env_precision,
            tol: self.tol.clone().or_else(|| a.tol.clone()),
            n_max: self.n_max.or(a.n_max),
            force: self.force || a.force.unwrap_or(false),
            x: self.x.clone().or_else(|| a.x.clone()),
            r: self.r.clone().or_else(|| a.r.clone()),
            which: self.which.or(a.which),
            stride: self.stride.or(a.stride),
            offset: self.offset.or(a.offset),
            eps: self.eps.clone().or_else(|| a.eps.clone()),
            n_check: self.n_check.or(a.n_check),
            m: self.m.or(a.m),
            samples: self.samples.or(a.samples),
            seed: self.seed.or(a.seed),
        }
    }
}

/// Runs `cmd` on one instance.
pub fn run_instance(
    cmd: Command,
    inst: &InstanceFile,
    settings: &Settings,
) -> Result<(ResultDocument, Vec<Trace>), AppError> {
    let requested = match settings.precision {
        Some(p) => Some(p),
        None => inst.precision_mode()?.or(settings.env_precision),
    };
    let tier = TierChoice::select(requested, inst.all_real())?;
    let s = settings.merged(&inst.analysis);
    let out = match tier {
        TierChoice::Exact => run_tier::<Rational>(cmd, inst, &s, Precision::DEFAULT),
        TierChoice::Real(p) => run_tier::<Float>(cmd, inst, &s, p),
        TierChoice::Complex(p) => run_tier::<Complex>(cmd, inst, &s, p),
    }?;
    let doc = ResultDocument {
        tool: TOOL,
        version: VERSION,
        command: cmd.name().into(),
        precision: tier.describe(),
        instance: Some(inst.clone()),
        outputs: out.outputs,
        traces: Vec::new(),
    };
    Ok((doc, out.traces))
}

fn run_tier<S: Tier>(
    cmd: Command,
    inst: &InstanceFile,
    s: &Settings,
    prec: Precision,
) -> Result<CommandOutput, AppError> {
    let model = inst.model::<S>(prec)?;
    let cx = Cx { prec, digits: digits_for(prec) };
    match cmd {
        Command::Eval => eval(&model, s, cx),
        Command::Domain => domain(&model, s, cx),
        Command::Classify => classify(&model, cx),
        Command::Boundary => boundary(&model, s, cx),
        Command::ProofAudit => proof_audit(&model, s, cx),
    }
}

#[derive(Clone, Copy)]
struct Cx {
    prec: Precision,
    digits: usize,
}

fn no_traces(outputs: Value) -> CommandOutput {
    CommandOutput { outputs, traces: Vec::new() }
}

fn real_setting<S: Tier>(n: &Option<Number>, default: &str, prec: Precision) -> Result<S::R, AppError> {
    match n {
        Some(n) => S::real_from_number(n, prec),
        None => S::real_from_number(&default.parse()?, prec),
    }
}

fn float_of<R: RealScalar>(v: &R, prec: Precision) -> Float {
    v.to_float(prec)
}

/// Coefficient limits and the domain they span. Only needs each limit to be
/// finite.
fn domain_of<S: Tier>(spec: &RecurrenceSpec<S>, cx: Cx) -> Result<(Vec<S>, DomainSpec<S::R>), AppError> {
    let mut limits = Vec::with_capacity(spec.k());
    for (i, c) in spec.coeffs().iter().enumerate() {
        limits.push(c.limit().ok_or_else(|| {
            AppError::Domain(format!("coefficient of lag {} grows without bound", i + 1))
        })?);
    }
    let moduli = limits.iter().map(Scalar::modulus).collect();
    let d = DomainSpec::with_precision(moduli, cx.prec)?;
    Ok((limits, d))
}

fn eval<S: Tier>(model: &Model<S>, s: &Settings, cx: Cx) -> Result<CommandOutput, AppError> {
    let Model::Heun { params, lambda } = model else {
        return Err(AppError::Input("eval needs a [heun] instance".into()));
    };
    let x = s
        .x
        .as_ref()
        .ok_or_else(|| AppError::Input("eval needs x (--x or analysis.x)".into()))?;
    let x = S::from_number(x, cx.prec)?;
    let tol = real_setting::<S>(&s.tol, DEFAULT_TOL, cx.prec)?;
    let n_max = s.n_max.unwrap_or(DEFAULT_EVAL_N_MAX);
    let r = x.modulus();
    let sum = params.big_a().modulus() * &r + params.big_b().modulus() * &r * &r;
    let e = heun_eval(params, lambda, &x, &tol, n_max, s.force)?;
    Ok(no_traces(json!({
        "x": x.render_scalar(cx.digits),
        "lambda": lambda.render_scalar(cx.digits),
        "tol": tol.render(cx.digits),
        "n_max": n_max,
        "forced": s.force,
        "domain_sum": sum.render(cx.digits),
        "inside_domain": sum < <S::R as Scalar>::one(r.ctx()),
        "value": e.value.render_scalar(cx.digits),
        "value_decimal": decimal(&e.value, cx),
        "n_used": e.n_used,
        "converged": e.converged,
    })))
}

/// Decimal rendering, so exact results stay readable.
fn decimal<S: Scalar>(v: &S, cx: Cx) -> Value {
    let c = v.to_complex(cx.prec);
    if c.im.is_zero() {
        Value::String(c.re.to_decimal_string(cx.digits))
    } else {
        json!({ "re": c.re.to_decimal_string(cx.digits), "im": c.im.to_decimal_string(cx.digits) })
    }
}

fn domain<S: Tier>(model: &Model<S>, s: &Settings, cx: Cx) -> Result<CommandOutput, AppError> {
    let spec = model.spec()?;
    let (limits, d) = domain_of(&spec, cx)?;
    let r = d.boundary_radius();
    let moduli: Vec<Float> = d.limits().iter().map(|v| float_of(v, cx.prec)).collect();
    let mut out = json!({
        "k": spec.k(),
        "limits": limits.iter().map(|v| v.render_scalar(cx.digits)).collect::<Vec<_>>(),
        "limit_moduli": d.limits().iter().map(|v| v.render(cx.digits)).collect::<Vec<_>>(),
        "boundary_radius": r.render(cx.digits),
    });
    if spec.k() == 2 {
        let closed = quadratic_radius(&moduli[0], &moduli[1]);
        out["closed_form_radius"] = closed.render(cx.digits);
        out["radius_difference"] = (closed - r).abs().render(8);
        if !moduli[0].is_zero() && !moduli[1].is_zero() {
            let e = eta_z(&moduli[0], &moduli[1])?;
            out["eta"] = e.eta.render(cx.digits);
            out["z"] = e.z.render(cx.digits);
            out["eta_plus_z"] = (e.eta.clone() + &e.z).render(cx.digits);
        }
    }
    if let Some(x) = &s.x {
        let x = S::from_number(x, cx.prec)?;
        out["x"] = x.render_scalar(cx.digits);
        out["x_weighted_sum"] = d.weighted_sum(&x.modulus()).render(cx.digits);
        out["x_in_domain"] = Value::Bool(d.contains(&x));
    }
    Ok(no_traces(out))
}

fn classify<S: Tier>(model: &Model<S>, cx: Cx) -> Result<CommandOutput, AppError> {
    let spec = model.spec()?;
    let lp = limit_profile(&spec)?;
    let tag = classify_case(&lp)?;
    let sl = lp.three_term.as_ref().expect("classified profiles are three-term");
    let d = cx.digits;
    Ok(no_traces(json!({
        "case": tag.name(),
        "compared": "real parts",
        "limits": { "A": sl.a.render_scalar(d), "B": sl.b.render_scalar(d) },
        "degrees": { "A": sl.t_a, "B": sl.t_b },
        "sub_leading": {
            "Omega": sl.big_omega.render_scalar(d),
            "omega": sl.omega.render_scalar(d),
            "Theta": sl.big_theta.render_scalar(d),
            "theta": sl.theta.render_scalar(d),
        },
    })))
}

fn opt_f64(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |v| json!(v))
}

fn boundary<S: Tier>(model: &Model<S>, s: &Settings, cx: Cx) -> Result<CommandOutput, AppError> {
    let spec = model.spec()?;
    let r = match &s.r {
        Some(n) if n.is_real() && !n.re.is_negative() && !n.re.is_zero() => n.re.to_float(cx.prec),
        Some(n) => return Err(AppError::Input(format!("probe radius must be a positive real, got {n}"))),
        None => domain_of(&spec, cx)?.1.boundary_radius().clone(),
    };
    let which = s.which.unwrap_or(Which::Signed);
    let offset = s.offset.unwrap_or(0);
    let series = match which {
        Which::Signed => ProbeSeries::Signed,
        Which::Modulus => ProbeSeries::Modulus { offset },
    };
    let mut opts = ProbeOptions::new(
        s.n_max.unwrap_or(DEFAULT_PROBE_N_MAX),
        s.stride.unwrap_or(DEFAULT_STRIDE),
        series,
    );
    opts.prec = cx.prec;
    let d = boundary_probe(&spec, &r, &opts)?;
    let t = &opts.thresholds;
    let rows = d
        .term_trace
        .iter()
        .map(|row| TraceLine {
            n: row.n,
            value_re: row.value.re.to_decimal_string(TRACE_DIGITS),
            value_im: row.value.im.to_decimal_string(TRACE_DIGITS),
            log_mag: render_log(row.log_mag),
            term_at_r: row.term_at_r.to_decimal_string(TRACE_DIGITS),
            partial_sum: row.partial_sum.to_decimal_string(TRACE_DIGITS),
        })
        .collect();
    let last = d.term_trace.last().expect("trace keeps the last term");
    Ok(CommandOutput {
        outputs: json!({
            "series": match which { Which::Signed => "signed", Which::Modulus => "modulus" },
            "offset": offset,
            "radius_used": d.radius_used.render(cx.digits),
            "n_max": opts.n_max,
            "stride": opts.stride,
            "verdict": d.verdict.name(),
            "thresholds": {
                "converge_below": t.converge_below,
                "diverge_above": t.diverge_above,
                "diverge_from": t.diverge_from,
                "sustain": t.sustain,
            },
            "fitted_tail_exponent": opt_f64(d.fitted_tail_exponent),
            "fitted_rho": opt_f64(d.fitted_rho),
            "final_partial_sum": last.partial_sum.to_decimal_string(TRACE_DIGITS),
            "cauchy_gaps": d.cauchy_gaps.iter().map(|(n, g)| json!({
                "n": n,
                "gap": g.to_decimal_string(TRACE_DIGITS),
            })).collect::<Vec<_>>(),
        }),
        traces: vec![Trace { name: "boundary", rows }],
    })
}

/// `|a − b| ≤ tol |b|`; exact tiers pass `tol = 0`.
fn close<R: RealScalar>(a: &R, b: &R, tol: &R) -> bool {
    (a.clone() - b).abs() <= tol.clone() * &b.abs()
}

fn proof_audit<S: Tier>(model: &Model<S>, s: &Settings, cx: Cx) -> Result<CommandOutput, AppError> {
    let spec = model.spec()?;
    let d = cx.digits;
    let eps_n = s.eps.clone().unwrap_or(DEFAULT_EPS.parse()?);
    if !eps_n.is_real() {
        return Err(AppError::Input(format!("eps must be real, got {eps_n}")));
    }
    let eps = eps_n.re.clone();
    let n_check = s.n_check.unwrap_or(DEFAULT_N_CHECK);
    let m = s.m.unwrap_or(DEFAULT_AUDIT_M);
    let pc = find_proof_constants(&spec, &eps, n_check)?;
    let lp = limit_profile(&spec)?;
    let ctx = lp.limits[0].modulus().ctx();
    let zero = <S::R as Scalar>::zero(ctx);
    let one = <S::R as Scalar>::one(ctx);
    let eps_r = <S::R as Scalar>::from_rational(&eps, ctx);

    // |Ā_n| > 1 − h_A/n > 1 − ε and the same for B̄, re-evaluated directly
    let mut failures = Vec::new();
    for n in pc.n..=n_check {
        for (lag, h) in [(1, pc.h_a), (2, pc.h_b)] {
            let bar = (spec.alpha(lag, n as i64)? / &lp.limits[lag - 1]).modulus();
            let mid = one.clone() - &<S::R as Scalar>::from_rational(&Rational::new(h as i64, n as i64), ctx);
            if !(bar > mid && mid > one.clone() - &eps_r) && failures.len() < 10 {
                failures.push(json!({ "n": n, "lag": lag }));
            }
        }
    }
    let constants_pass = failures.is_empty() && pc.n > pc.h_b;

    let moduli: Vec<Float> = lp.limits.iter().map(|v| float_of(&v.modulus(), cx.prec)).collect();
    let etaz = eta_z(&moduli[0], &moduli[1])?;
    let x = match &s.x {
        Some(n) => S::real_from_number(n, cx.prec)?.abs(),
        // exact path enumeration cost grows with the size of x, so exact runs
        // default to r* at two significant digits
        None if S::EXACT => S::real_from_number(&etaz.radius.to_decimal_string(2).parse()?, cx.prec)?,
        None => S::real_from_float(&etaz.radius),
    };
    if x <= zero {
        return Err(AppError::Input("proof-audit needs x > 0".into()));
    }

    // rearrangement at the proof offset N
    let offset = pc.n as usize;
    let tol = if S::EXACT {
        zero.clone()
    } else {
        S::real_from_float(&Float::pow2(-(cx.prec.get() as i64) / 4, cx.prec))
    };
    let direct_seq = modulus_stream(&spec, offset, m)?;
    let direct = direct_seq.weighted_sum(&x, m);
    let dp = path_expansion(&spec, offset, &x, m, m, PathMode::Dynamic)?;
    let en = (m <= ENUMERATION_LIMIT)
        .then(|| path_expansion(&spec, offset, &x, m, m, PathMode::Enumerate))
        .transpose()?;
    let columns_match = en.as_ref().map(|en| {
        en.by_tau.len() == dp.by_tau.len()
            && en.by_tau.iter().zip(&dp.by_tau).all(|(a, b)| close(a, b, &tol) || (a.is_zero() && b.is_zero()))
    });
    let rearrangement_pass = close(&dp.total(), &direct, &tol) && columns_match.unwrap_or(true);

    // Pochhammer-ratio bound sampled around the instance's (N, h_B)
    let samples = s.samples.unwrap_or(DEFAULT_SAMPLES);
    let seed = s.seed.unwrap_or(DEFAULT_SEED);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let n_big = pc.n + rng.gen_range(0..=200u64);
        let r = rng.gen_range(0..=5u64);
        let i2r = rng.gen_range(0..=20u64);
        let floor = pochhammer_bound_floor(n_big, pc.h_b, r, i2r)?.max(pc.m).max(4);
        let i2r1 = floor + rng.gen_range(0..=200u64);
        let b = pochhammer_ratio_lower_bound(n_big, pc.h_b, r, i2r, i2r1, cx.prec)?;
        if !b.holds && violations.len() < 10 {
            violations.push(json!([n_big, pc.h_b, r, i2r, i2r1]));
        }
    }

    let dom = dominating_series_check(&spec, offset.max(2), &x, m)?;
    let minorant = minorant_partial(&pc, &etaz, MINORANT_J_MAX, MINORANT_K_MAX)?;

    let all_pass = constants_pass && rearrangement_pass && violations.is_empty() && dom.holds;
    let render_tau = |v: &[S::R]| v.iter().map(|t| t.render(d)).collect::<Vec<_>>();

    // the modulus series at offset N, as a trace
    let xf = float_of(&x, cx.prec);
    let mut pow = Float::from_i64(1, cx.prec);
    let mut partial = Float::from_i64(0, cx.prec);
    let rows = direct_seq
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let v = float_of(v, cx.prec);
            let term = v.clone() * &pow;
            partial += &term;
            pow = pow.clone() * &xf;
            TraceLine {
                n,
                value_re: v.to_decimal_string(TRACE_DIGITS),
                value_im: "0".into(),
                log_mag: render_log(v.ln_abs_f64()),
                term_at_r: term.to_decimal_string(TRACE_DIGITS),
                partial_sum: partial.to_decimal_string(TRACE_DIGITS),
            }
        })
        .collect();

    Ok(CommandOutput {
        outputs: json!({
            "constants": {
                "case": pc.case.name(),
                "eps": pc.eps.to_string(),
                "h_a": pc.h_a,
                "h_b": pc.h_b,
                "n": pc.n,
                "n_check": pc.n_check,
                "m": pc.m,
                "k": pc.k.to_string(),
                "a_root_floor": pc.a_root_floor,
                "b_root_floor": pc.b_root_floor,
            },
            "x": x.render(d),
            "checks": {
                "proof_constants": {
                    "pass": constants_pass,
                    "range": [pc.n, n_check],
                    "failures": failures,
                },
                "rearrangement": {
                    "pass": rearrangement_pass,
                    "offset": offset,
                    "m": m,
                    "direct_total": direct.render(d),
                    "dynamic_total": dp.total().render(d),
                    "enumerated_total": en.as_ref().map(|e| e.total().render(d)),
                    "columns_match": columns_match,
                    "by_tau": render_tau(&dp.by_tau),
                },
                "pochhammer": {
                    "pass": violations.is_empty(),
                    "samples": samples,
                    "seed": seed,
                    "h2": pc.h_b,
                    "violations": violations,
                },
                "dominating": {
                    "pass": dom.holds,
                    "n": offset.max(2),
                    "m": m,
                    "lhs": dom.lhs.render(d),
                    "rhs": dom.rhs.render(d),
                },
            },
            "minorant": {
                "regime": match minorant.regime {
                    MinorantRegime::Finite => "finite",
                    MinorantRegime::Divergent => "divergent",
                },
                "w": minorant.w.render(d),
                "value": minorant.value.render(d),
                "doubling": minorant.doubling.iter().map(|v| v.render(d)).collect::<Vec<_>>(),
                "growing": minorant.growing,
                "z_tail": minorant.z_tail.render(d),
                "closed_form_j_sum": minorant.closed_form_j_sum.as_ref().map(|v| v.render(d)),
                "j_max": MINORANT_J_MAX,
                "k_max": MINORANT_K_MAX,
            },
            "all_pass": all_pass,
        }),
        traces: vec![Trace { name: "proof-audit", rows }],
    })
}

/// Gauss's boundary test on `₂F₁(a, b; c; x)`.
pub fn gauss(a: &Number, b: &Number, c: &Number, requested: Option<PrecisionMode>) -> Result<ResultDocument, AppError> {
    let all_real = [a, b, c].iter().all(|n| n.is_real());
    let tier = TierChoice::select(requested, all_real)?;
    let outputs = match tier {
        TierChoice::Exact => gauss_in::<Rational>(a, b, c, Precision::DEFAULT),
        TierChoice::Real(p) => gauss_in::<Float>(a, b, c, p),
        TierChoice::Complex(p) => gauss_in::<Complex>(a, b, c, p),
    }?;
    Ok(ResultDocument {
        tool: TOOL,
        version: VERSION,
        command: "gauss".into(),
        precision: tier.describe(),
        instance: None,
        outputs,
        traces: Vec::new(),
    })
}

fn gauss_in<S: Tier>(a: &Number, b: &Number, c: &Number, prec: Precision) -> Result<Value, AppError> {
    let (sa, sb, sc) = (S::from_number(a, prec)?, S::from_number(b, prec)?, S::from_number(c, prec)?);
    let verdict = gauss_boundary_test(&sa, &sb, &sc)?;
    let margin = sc.re() - &sa.re() - &sb.re();
    let d = digits_for(prec);
    Ok(json!({
        "a": sa.render_scalar(d),
        "b": sb.render_scalar(d),
        "c": sc.render_scalar(d),
        "margin": margin.render(d),
        "verdict": match verdict {
            GaussVerdict::AbsConvergent => "ABS_CONVERGENT",
            GaussVerdict::NotAbsConvergent => "NOT_ABS_CONVERGENT",
        },
    }))
}
