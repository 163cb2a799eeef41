//! Numbers as written in instance files and on the command line, and the
//! three arithmetic tiers they are lowered to.

use std::fmt;
use std::str::FromStr;

use heunlab_core::{Complex, Float, Precision, Rational, RealScalar, Scalar};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::AppError;

/// An exact complex rational. Decimals are read exactly, so `0.1` is `1/10`.
#[derive(Clone, Debug, PartialEq)]
pub struct Number {
    pub re: Rational,
    pub im: Rational,
}

impl Number {
    pub fn real(re: Rational) -> Self {
        Number {
            re,
            im: Rational::from_int(0),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl FromStr for Number {
    type Err = AppError;

    /// `p/q`, decimals, and `x+yi` / `x-yi` / `yi`.
    fn from_str(s: &str) -> Result<Self, AppError> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || AppError::Input(format!("cannot read number {s:?}"));
        let real = |v: &str| Rational::from_str(v).map_err(|_| bad());
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Number::real(real(&t)?));
        };
        // split before the last sign that is not a leading sign or an exponent sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(i) => (real(&body[..i])?, &body[i..]),
            None => (Rational::from_int(0), body),
        };
        let im = match im {
            "" | "+" => Rational::from_int(1),
            "-" => Rational::from_int(-1),
            v => real(v)?,
        };
        Ok(Number { re, im })
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawReal {
    Int(i64),
    Float(f64),
    Text(String),
}

impl RawReal {
    fn to_rational(&self) -> Result<Rational, String> {
        match self {
            RawReal::Int(v) => Ok(Rational::from_int(*v)),
            // shortest round-trip decimal, then read exactly
            RawReal::Float(v) if v.is_finite() => {
                Rational::from_str(&format!("{v:?}")).map_err(|e| e.to_string())
            }
            RawReal::Float(v) => Err(format!("non-finite number {v}")),
            RawReal::Text(s) => {
                let n = Number::from_str(s).map_err(|e| e.to_string())?;
                if n.is_real() {
                    Ok(n.re)
                } else {
                    Err(format!("expected a real number, got {s:?}"))
                }
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Parts { re: RawReal, im: RawReal },
    Int(i64),
    Float(f64),
    Text(String),
}

impl<'de> Deserialize<'de> for Number {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RawNumber::deserialize(d)? {
            RawNumber::Parts { re, im } => Ok(Number {
                re: re.to_rational().map_err(de::Error::custom)?,
                im: im.to_rational().map_err(de::Error::custom)?,
            }),
            RawNumber::Int(v) => Ok(Number::real(Rational::from_int(v))),
            RawNumber::Float(v) => RawReal::Float(v)
                .to_rational()
                .map(Number::real)
                .map_err(de::Error::custom),
            RawNumber::Text(s) => Number::from_str(&s).map_err(de::Error::custom),
        }
    }
}

impl Serialize for Number {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_real() {
            s.serialize_str(&self.re.to_string())
        } else {
            let mut m = s.serialize_map(Some(2))?;
            m.serialize_entry("re", &self.re.to_string())?;
            m.serialize_entry("im", &self.im.to_string())?;
            m.end()
        }
    }
}

/// Significant decimal digits that `prec` bits can carry.
pub fn digits_for(prec: Precision) -> usize {
    ((prec.get() as f64) * std::f64::consts::LOG10_2).floor() as usize
}

/// Rendering of real values in result documents.
pub trait RenderReal: RealScalar {
    fn render(&self, digits: usize) -> Value;
}

impl RenderReal for Rational {
    fn render(&self, _: usize) -> Value {
        Value::String(self.to_string())
    }
}

impl RenderReal for Float {
    fn render(&self, digits: usize) -> Value {
        Value::String(self.to_decimal_string(digits))
    }
}

/// One of the arithmetic tiers: exact rationals, real floats, complex floats.
pub trait Tier: Scalar<Real = <Self as Tier>::R> + Send + Sync {
    type R: RenderReal + Send + Sync;
    const NAME: &'static str;

    fn ctx_for(prec: Precision) -> Self::Ctx;
    fn from_number(n: &Number, prec: Precision) -> Result<Self, AppError>;
    fn real_from_number(n: &Number, prec: Precision) -> Result<Self::R, AppError>;
    /// Nearest representable real; exact tiers round to 40 significant digits.
    fn real_from_float(f: &Float) -> Self::R;
    fn render_scalar(&self, digits: usize) -> Value;
}

fn require_real(n: &Number) -> Result<(), AppError> {
    if n.is_real() {
        Ok(())
    } else {
        Err(AppError::Input(format!(
            "{n} is complex; this precision tier is real-only"
        )))
    }
}

impl Tier for Rational {
    type R = Rational;
    const NAME: &'static str = "exact";

    fn ctx_for(_: Precision) {}

    fn from_number(n: &Number, _: Precision) -> Result<Self, AppError> {
        require_real(n)?;
        Ok(n.re.clone())
    }

    fn real_from_number(n: &Number, prec: Precision) -> Result<Rational, AppError> {
        Self::from_number(n, prec)
    }

    fn real_from_float(f: &Float) -> Rational {
        Rational::from_str(&f.to_decimal_string(40)).expect("decimal rendering parses")
    }

    fn render_scalar(&self, digits: usize) -> Value {
        RenderReal::render(self, digits)
    }
}

impl Tier for Float {
    type R = Float;
    const NAME: &'static str = "real";

    fn ctx_for(prec: Precision) -> Precision {
        prec
    }

    fn from_number(n: &Number, prec: Precision) -> Result<Self, AppError> {
        require_real(n)?;
        Ok(n.re.to_float(prec))
    }

    fn real_from_number(n: &Number, prec: Precision) -> Result<Float, AppError> {
        Self::from_number(n, prec)
    }

    fn real_from_float(f: &Float) -> Float {
        f.clone()
    }

    fn render_scalar(&self, digits: usize) -> Value {
        RenderReal::render(self, digits)
    }
}

impl Tier for Complex {
    type R = Float;
    const NAME: &'static str = "complex";

    fn ctx_for(prec: Precision) -> Precision {
        prec
    }

    fn from_number(n: &Number, prec: Precision) -> Result<Self, AppError> {
        Ok(Complex::new(n.re.to_float(prec), n.im.to_float(prec)))
    }

    fn real_from_number(n: &Number, prec: Precision) -> Result<Float, AppError> {
        Float::from_number(n, prec)
    }

    fn real_from_float(f: &Float) -> Float {
        f.clone()
    }

    fn render_scalar(&self, digits: usize) -> Value {
        json!({
            "re": self.re.to_decimal_string(digits),
            "im": self.im.to_decimal_string(digits),
        })
    }
}
