//! TOML instance files.
//!
//! ```toml
//! [heun]                       # or [recurrence]
//! a = "2"
//! q = 1
//! alpha = 1
//! beta = 1
//! gamma = 1
//! delta = 1
//! lambda = 0                   # optional, 0 or 1 - gamma
//!
//! [analysis]                   # optional command settings
//! x = "1/10"
//!
//! [precision]                  # optional: bits = 256 or exact = true
//! exact = true
//! ```
//!
//! A recurrence block lists each lag's numerator and denominator
//! coefficients in the index `n`, lowest degree first:
//!
//! ```toml
//! [recurrence]
//! k = 1
//! lag = [{ num = ["1/2"], den = [1] }]
//! ```

use std::path::Path;

use heunlab_core::heun::{heun_recurrence, HeunParams};
use heunlab_core::poly::{Polynomial, RationalFn};
use heunlab_core::recurrence::RecurrenceSpec;
use heunlab_core::{Precision, Rational, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::AppError;
use crate::number::{Number, Tier};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeunBlock {
    pub a: Number,
    pub q: Number,
    pub alpha: Number,
    pub beta: Number,
    pub gamma: Number,
    pub delta: Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Number>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagBlock {
    pub num: Vec<Number>,
    pub den: Vec<Number>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecurrenceBlock {
    pub k: usize,
    pub lag: Vec<LagBlock>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Signed,
    Modulus,
}

/// Command settings; command-line flags take precedence.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Analysis {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub force: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub which: Option<Which>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_check: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heun: Option<HeunBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<RecurrenceBlock>,
    #[serde(default)]
    pub analysis: Analysis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionBlock>,
}

/// `exact` or a bit count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionMode {
    Exact,
    Bits(Precision),
}

impl std::str::FromStr for PrecisionMode {
    type Err = AppError;

    fn from_str(s: &str) -> Result<Self, AppError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("exact") {
            return Ok(PrecisionMode::Exact);
        }
        match s.parse::<usize>() {
            Ok(bits) if (16..=1 << 20).contains(&bits) => Ok(PrecisionMode::Bits(Precision::bits(bits))),
            _ => Err(AppError::Input(format!(
                "precision must be `exact` or a bit count in 16..=1048576, got {s:?}"
            ))),
        }
    }
}

/// The concrete scalar type a command runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TierChoice {
    Exact,
    Real(Precision),
    Complex(Precision),
}

impl TierChoice {
    /// `exact` or `<bits> bits (real|complex)`.
    pub fn describe(self) -> String {
        match self {
            TierChoice::Exact => "exact".into(),
            TierChoice::Real(p) => format!("{} bits (real)", p.get()),
            TierChoice::Complex(p) => format!("{} bits (complex)", p.get()),
        }
    }

    pub fn precision(self) -> Precision {
        match self {
            TierChoice::Exact => Precision::DEFAULT,
            TierChoice::Real(p) | TierChoice::Complex(p) => p,
        }
    }

    /// Exact when every input is real, unless a bit count is requested.
    pub fn select(requested: Option<PrecisionMode>, all_real: bool) -> Result<Self, AppError> {
        match requested {
            Some(PrecisionMode::Exact) if !all_real => Err(AppError::Input(
                "exact precision needs real inputs; give a bit count instead".into(),
            )),
            Some(PrecisionMode::Exact) => Ok(TierChoice::Exact),
            None if all_real => Ok(TierChoice::Exact),
            None => Ok(TierChoice::Complex(Precision::DEFAULT)),
            Some(PrecisionMode::Bits(p)) if all_real => Ok(TierChoice::Real(p)),
            Some(PrecisionMode::Bits(p)) => Ok(TierChoice::Complex(p)),
        }
    }
}

/// The equation part of an instance, lowered into one tier.
pub enum Model<S: Tier> {
    Heun { params: HeunParams<S>, lambda: S },
    Recurrence(RecurrenceSpec<S>),
}

impl<S: Tier> Model<S> {
    pub fn spec(&self) -> Result<RecurrenceSpec<S>, AppError> {
        match self {
            Model::Heun { params, lambda } => Ok(heun_recurrence(params, lambda)?),
            Model::Recurrence(spec) => Ok(spec.clone()),
        }
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, AppError> {
        let inst: InstanceFile =
            toml::from_str(text).map_err(|e| AppError::Input(format!("instance file: {e}")))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), AppError> {
        match (&self.heun, &self.recurrence) {
            (Some(_), None) => Ok(()),
            (None, Some(r)) => {
                if r.k == 0 {
                    return Err(AppError::Input("recurrence.k must be at least 1".into()));
                }
                if r.lag.len() != r.k {
                    return Err(AppError::Input(format!(
                        "recurrence.k = {} but {} lag blocks were given",
                        r.k,
                        r.lag.len()
                    )));
                }
                if r.lag.iter().any(|l| l.den.iter().all(|c| c.re.is_zero() && c.im.is_zero())) {
                    return Err(AppError::Input("a lag denominator is identically zero".into()));
                }
                Ok(())
            }
            _ => Err(AppError::Input(
                "an instance needs exactly one of [heun] or [recurrence]".into(),
            )),
        }
    }

    /// Every number that enters the arithmetic.
    fn numbers(&self) -> Vec<&Number> {
        let mut out = Vec::new();
        if let Some(h) = &self.heun {
            out.extend([&h.a, &h.q, &h.alpha, &h.beta, &h.gamma, &h.delta]);
            out.extend(h.lambda.as_ref());
        }
        if let Some(r) = &self.recurrence {
            for l in &r.lag {
                out.extend(l.num.iter().chain(&l.den));
            }
        }
        let a = &self.analysis;
        out.extend(a.x.iter().chain(&a.r));
        out
    }

    pub fn all_real(&self) -> bool {
        self.numbers().iter().all(|n| n.is_real())
    }

    /// The `[precision]` block as a mode.
    pub fn precision_mode(&self) -> Result<Option<PrecisionMode>, AppError> {
        let Some(p) = &self.precision else {
            return Ok(None);
        };
        match (p.bits, p.exact) {
            (Some(bits), None | Some(false)) => format!("{bits}").parse().map(Some),
            (None, Some(true)) => Ok(Some(PrecisionMode::Exact)),
            (None, None | Some(false)) => Ok(None),
            (Some(_), Some(true)) => Err(AppError::Input(
                "[precision] takes either bits or exact, not both".into(),
            )),
        }
    }

    pub fn lambda(&self) -> Number {
        self.heun
            .as_ref()
            .and_then(|h| h.lambda.clone())
            .unwrap_or_else(|| Number::real(Rational::from_int(0)))
    }

    pub fn model<S: Tier>(&self, prec: Precision) -> Result<Model<S>, AppError> {
        let conv = |n: &Number| S::from_number(n, prec);
        if let Some(h) = &self.heun {
            let params = HeunParams::new(
                conv(&h.a)?,
                conv(&h.q)?,
                conv(&h.alpha)?,
                conv(&h.beta)?,
                conv(&h.gamma)?,
                conv(&h.delta)?,
            )?;
            let lambda = conv(&self.lambda())?;
            return Ok(Model::Heun { params, lambda });
        }
        let r = self.recurrence.as_ref().expect("validated");
        let ctx = S::ctx_for(prec);
        let mut coeffs = Vec::with_capacity(r.k);
        for l in &r.lag {
            let poly = |cs: &[Number]| -> Result<Polynomial<S>, AppError> {
                Ok(Polynomial::new(cs.iter().map(conv).collect::<Result<_, _>>()?, ctx))
            };
            coeffs.push(RationalFn::new(poly(&l.num)?, poly(&l.den)?)?);
        }
        Ok(Model::Recurrence(RecurrenceSpec::new(coeffs)?))
    }
}
