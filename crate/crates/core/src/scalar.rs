//! Scalar arithmetic shared by every algorithm in the crate.
//!
//! Two tiers are provided. [`Rational`] is exact and is used whenever all inputs
//! are rational reals; [`Float`] and [`Complex`] carry a binary precision (256
//! bits unless configured otherwise) and round every operation to it.
//!
//! Generic code is written against [`Scalar`]. Moduli, real parts and other
//! real-valued quantities live in [`Scalar::Real`], which is `Rational` for the
//! exact tier and `Float` for both floating tiers.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use core::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

type Big = FBig<HalfEven, 2>;

/// Binary precision of the floating tier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(usize);

impl Precision {
    pub const DEFAULT: Precision = Precision(256);

    /// Panics if `bits < 16`.
    pub fn bits(bits: usize) -> Self {
        assert!(bits >= 16, "precision below 16 bits is not supported");
        Precision(bits)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `self` plus `extra` guard bits.
    pub fn guarded(self, extra: usize) -> Self {
        Precision(self.0 + extra)
    }

    /// `2^(-bits/2)`, the tolerance used for float-path equality decisions.
    pub fn half_tolerance(self) -> Float {
        Float::pow2(-((self.0 / 2) as i64), self)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

/// Field operations plus the few analytic hooks the algorithms need.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
{
    /// Construction context: `()` for exact values, the precision otherwise.
    type Ctx: Copy + fmt::Debug + PartialEq;
    type Real: RealScalar<Ctx = Self::Ctx>;

    /// True for the exact tier.
    const EXACT: bool;

    fn ctx(&self) -> Self::Ctx;
    fn from_i64(v: i64, ctx: Self::Ctx) -> Self;
    fn from_rational(r: &Rational, ctx: Self::Ctx) -> Self;
    fn from_real(r: Self::Real) -> Self;

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_i64(0, ctx)
    }
    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(1, ctx)
    }

    fn is_zero(&self) -> bool;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn norm_sqr(&self) -> Self::Real;
    fn modulus(&self) -> Self::Real;

    /// The value as a real, if its imaginary part is exactly zero.
    fn as_real(&self) -> Option<Self::Real>;
    /// The value as an integer, if it is exactly one.
    fn as_integer(&self) -> Option<i64>;

    fn to_complex(&self, prec: Precision) -> Complex;

    /// `ln |self|`, or `None` for zero.
    fn ln_modulus(&self, prec: Precision) -> Option<Float>;

    /// Principal-branch power. `None` when the result leaves the tier
    /// (non-integer powers of rationals, negative reals to fractional powers)
    /// or is undefined (zero to a non-positive power).
    fn powf(&self, exponent: &Self) -> Option<Self>;

    fn powi(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }

    /// Precision used for derived float quantities (log-magnitudes, radii).
    fn working_precision(ctx: Self::Ctx) -> Precision;
}

/// Real-valued scalars: totally ordered, convertible to [`Float`].
pub trait RealScalar: Scalar<Real = Self> + PartialOrd {
    fn to_float(&self, prec: Precision) -> Float;
    fn floor_i64(&self) -> Option<i64>;
    fn is_negative(&self) -> bool;

    fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Ordering with ties decided by the tier: exact for rationals, within
    /// `2^(-p/2)` relative for floats.
    fn tier_cmp(&self, other: &Self) -> Ordering;
}

macro_rules! forward_binops {
    ($t:ident) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                self * &rhs
            }
        }
        impl Div for $t {
            type Output = $t;
            fn div(self, rhs: $t) -> $t {
                self / &rhs
            }
        }
        impl<'a> AddAssign<&'a $t> for $t {
            fn add_assign(&mut self, rhs: &'a $t) {
                let lhs = core::mem::replace(self, $t::placeholder());
                *self = lhs + rhs;
            }
        }
    };
}

// ---------------------------------------------------------------------------
// Rational

/// Exact rational number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(RBig);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(RBig::from_parts_signed(IBig::from(num), IBig::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(RBig::from(v))
    }

    pub fn from_ibig(v: IBig) -> Self {
        Rational(RBig::from(v))
    }

    pub fn from_parts(num: IBig, den: UBig) -> Self {
        Rational(RBig::from_parts(num, den))
    }

    pub fn numerator(&self) -> &IBig {
        self.0.numerator()
    }

    pub fn denominator(&self) -> &UBig {
        self.0.denominator()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_int()
    }

    pub fn floor(&self) -> IBig {
        self.0.floor()
    }

    pub fn ceil(&self) -> IBig {
        self.0.ceil()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn inner(&self) -> &RBig {
        &self.0
    }

    fn placeholder() -> Self {
        Rational(RBig::ZERO)
    }
}

/// Parse error for rational literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a rational or decimal literal: {:?}", self.0)
    }
}

impl core::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `p/q`, integers, and decimals with an optional exponent
    /// (`-1.25e-3`). Decimals are converted exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseRationalError(s.to_string());
        if t.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n = IBig::from_str(n.trim()).map_err(|_| err())?;
            let d = IBig::from_str(d.trim()).map_err(|_| err())?;
            if d == IBig::ZERO {
                return Err(err());
            }
            return Ok(Rational(RBig::from_parts_signed(n, d)));
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
            None => (t, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mut all = String::from(int_part);
        all.push_str(frac_part);
        let mut num = IBig::from_str(&all).map_err(|_| err())?;
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let ten = UBig::from(10u8);
        let value = if scale >= 0 {
            RBig::from(num * IBig::from(ten.pow(scale as usize)))
        } else {
            RBig::from_parts(num, ten.pow((-scale) as usize))
        };
        Ok(Rational(value))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_int() {
            write!(f, "{}", self.0.numerator())
        } else {
            write!(f, "{}/{}", self.0.numerator(), self.0.denominator())
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Add<&'a Rational> for Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 + &rhs.0)
    }
}
impl<'a> Sub<&'a Rational> for Rational {
    type Output = Rational;
    fn sub(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 - &rhs.0)
    }
}
impl<'a> Mul<&'a Rational> for Rational {
    type Output = Rational;
    fn mul(self, rhs: &'a Rational) -> Rational {
        Rational(self.0 * &rhs.0)
    }
}
impl<'a> Div<&'a Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.0.is_zero(), "rational division by zero");
        Rational(self.0 / &rhs.0)
    }
}
forward_binops!(Rational);

impl Scalar for Rational {
    type Ctx = ();
    type Real = Rational;
    const EXACT: bool = true;

    fn ctx(&self) {}
    fn from_i64(v: i64, _: ()) -> Self {
        Rational::from_int(v)
    }
    fn from_rational(r: &Rational, _: ()) -> Self {
        r.clone()
    }
    fn from_real(r: Rational) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn re(&self) -> Rational {
        self.clone()
    }
    fn im(&self) -> Rational {
        Rational::from_int(0)
    }
    fn norm_sqr(&self) -> Rational {
        self.clone() * self
    }
    fn modulus(&self) -> Rational {
        RealScalar::abs(self)
    }
    fn as_real(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn as_integer(&self) -> Option<i64> {
        if self.0.is_int() {
            i64::try_from(self.0.numerator().clone()).ok()
        } else {
            None
        }
    }
    fn to_complex(&self, prec: Precision) -> Complex {
        Complex::from_float(self.to_float(prec))
    }
    fn ln_modulus(&self, prec: Precision) -> Option<Float> {
        if self.is_zero() {
            return None;
        }
        // ln|p| - ln q keeps huge numerators and denominators out of one quotient.
        let g = prec.guarded(32);
        let num = Float::from_ibig(self.0.numerator().clone(), g).abs();
        let den = Float::from_ibig(IBig::from(self.0.denominator().clone()), g);
        Some((num.ln() - den.ln()).round_to(prec))
    }
    fn powf(&self, exponent: &Self) -> Option<Self> {
        let e = exponent.as_integer()?;
        if e >= 0 {
            Some(self.powi(e as u64))
        } else if self.is_zero() {
            None
        } else {
            Some(Rational::from_int(1) / &self.powi(e.unsigned_abs()))
        }
    }
    fn working_precision(_: ()) -> Precision {
        Precision::DEFAULT
    }
}

impl RealScalar for Rational {
    fn to_float(&self, prec: Precision) -> Float {
        let g = prec.guarded(16);
        let num = Float::from_ibig(self.0.numerator().clone(), g);
        let den = Float::from_ibig(IBig::from(self.0.denominator().clone()), g);
        (num / den).round_to(prec)
    }
    fn floor_i64(&self) -> Option<i64> {
        i64::try_from(self.0.floor()).ok()
    }
    fn is_negative(&self) -> bool {
        self.0 < RBig::ZERO
    }
    fn tier_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

// ---------------------------------------------------------------------------
// Float

/// Real number rounded to a fixed binary precision (half-to-even).
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Float(Big);

impl Float {
    pub fn from_i64(v: i64, prec: Precision) -> Self {
        Float(Big::from(v).with_precision(prec.get()).value())
    }

    pub fn from_ibig(v: IBig, prec: Precision) -> Self {
        Float(Big::from(v).with_precision(prec.get()).value())
    }

    /// Exact conversion of a finite `f64`, then rounded to `prec`.
    pub fn from_f64(v: f64, prec: Precision) -> Self {
        let b = Big::try_from(v).expect("finite f64");
        Float(b.with_precision(prec.get()).value())
    }

    /// `2^e` at precision `prec`.
    pub fn pow2(e: i64, prec: Precision) -> Self {
        Float(
            Big::from_parts(IBig::ONE, e as isize)
                .with_precision(prec.get())
                .value(),
        )
    }

    pub fn precision(&self) -> Precision {
        Precision(self.0.precision())
    }

    pub fn round_to(self, prec: Precision) -> Self {
        Float(self.0.with_precision(prec.get()).value())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// `ln |self|` in double precision; finite for any exponent.
    pub fn ln_abs_f64(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let short = self.0.clone().with_precision(60).value();
        let repr = short.repr();
        let sig = repr.significand().to_f64().value().abs();
        Some(libm::log(sig) + repr.exponent() as f64 * core::f64::consts::LN_2)
    }

    pub fn is_zero(&self) -> bool {
        self.0.repr().significand().is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.sign() == dashu_base::Sign::Negative && !self.is_zero()
    }

    pub fn abs(&self) -> Self {
        if self.is_sign_negative() {
            Float(-self.0.clone())
        } else {
            self.clone()
        }
    }

    /// Natural logarithm. Panics for non-positive arguments.
    pub fn ln(&self) -> Self {
        assert!(
            !self.is_zero() && !self.is_sign_negative(),
            "ln of non-positive value"
        );
        Float(self.0.ln())
    }

    pub fn exp(&self) -> Self {
        Float(self.0.exp())
    }

    /// Square root. Panics for negative arguments.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        assert!(!self.is_sign_negative(), "sqrt of negative value");
        Float(self.0.sqrt())
    }

    pub fn floor(&self) -> Self {
        Float(self.0.floor())
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// π by Machin's formula.
    pub fn pi(prec: Precision) -> Self {
        let g = prec.guarded(16);
        let one = Float::from_i64(1, g);
        let a = atan_small(&(one.clone() / Float::from_i64(5, g)));
        let b = atan_small(&(one / Float::from_i64(239, g)));
        (a * Float::from_i64(16, g) - b * Float::from_i64(4, g)).round_to(prec)
    }

    /// Arctangent on the whole real line.
    pub fn atan(&self) -> Self {
        let prec = self.precision();
        let g = prec.guarded(16);
        let x = self.clone().round_to(g);
        let one = Float::from_i64(1, g);
        if x.abs() > one {
            let half_pi = Float::pi(g) / Float::from_i64(2, g);
            let inv = atan_reduced(&(one / &x));
            let r = if x.is_sign_negative() {
                -half_pi - inv
            } else {
                half_pi - inv
            };
            return r.round_to(prec);
        }
        atan_reduced(&x).round_to(prec)
    }

    /// Four-quadrant arctangent of `self / x` (`self` is the ordinate).
    pub fn atan2(&self, x: &Float) -> Self {
        let prec = self.precision().max(x.precision());
        if x.is_zero() {
            if self.is_zero() {
                return Float::from_i64(0, prec);
            }
            let half_pi = Float::pi(prec) / Float::from_i64(2, prec);
            return if self.is_sign_negative() { -half_pi } else { half_pi };
        }
        let base = (self.clone() / x).atan();
        if !x.is_sign_negative() {
            base
        } else if self.is_sign_negative() {
            base - Float::pi(prec)
        } else {
            base + Float::pi(prec)
        }
    }

    /// `(sin self, cos self)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.precision();
        let g = prec.guarded(32 + 2 * 12);
        let two_pi = Float::pi(g) * Float::from_i64(2, g);
        let x = self.clone().round_to(g);
        let turns = (x.clone() / &two_pi).floor();
        let reduced = x - turns * &two_pi;
        // Halve 12 times, Taylor, then double back up.
        let scale = Float::pow2(-12, g);
        let y = reduced * &scale;
        let y2 = y.clone() * &y;
        let tol = Float::pow2(-(g.get() as i64) - 4, g);
        let mut term = y.clone();
        let mut sin = y.clone();
        let mut k = 1i64;
        loop {
            term = -(term * &y2) / Float::from_i64((2 * k) * (2 * k + 1), g);
            if term.abs() < tol {
                break;
            }
            sin += &term;
            k += 1;
        }
        let one = Float::from_i64(1, g);
        let mut cos = (one.clone() - sin.clone() * &sin).sqrt();
        let two = Float::from_i64(2, g);
        for _ in 0..12 {
            let s = two.clone() * &sin * &cos;
            let c = cos.clone() * &cos - sin.clone() * &sin;
            sin = s;
            cos = c;
        }
        (sin.round_to(prec), cos.round_to(prec))
    }

    /// Decimal rendering with `digits` significant digits, rounded half-even.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let digits = digits.max(1);
        // base conversion at very low precision misrounds, so convert with
        // guard digits and round the digit string here
        let dec = self
            .0
            .clone()
            .with_base_and_precision::<10>(digits + 12)
            .value();
        let repr = dec.repr();
        let sig = repr.significand().to_string();
        let (neg, all) = match sig.strip_prefix('-') {
            Some(d) => (true, d),
            None => (false, sig.as_str()),
        };
        // value = all × 10^exp
        let mut exp = repr.exponent();
        let mut kept: Vec<u8> = all.bytes().map(|b| b - b'0').collect();
        if kept.len() > digits {
            let rest = kept.split_off(digits);
            exp += rest.len() as isize;
            let tail_nonzero = rest[1..].iter().any(|&d| d != 0);
            let round_up = match rest[0] {
                d if d > 5 => true,
                5 => tail_nonzero || kept[digits - 1] % 2 == 1,
                _ => false,
            };
            if round_up {
                let mut i = kept.len();
                loop {
                    if i == 0 {
                        kept.insert(0, 1);
                        kept.pop();
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if kept[i] == 9 {
                        kept[i] = 0;
                    } else {
                        kept[i] += 1;
                        break;
                    }
                }
            }
        }
        while kept.len() > 1 && kept.last() == Some(&0) {
            kept.pop();
            exp += 1;
        }
        // render as d.ddd e±X
        let sci_exp = exp + kept.len() as isize - 1;
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push((b'0' + kept[0]) as char);
        if kept.len() > 1 {
            out.push('.');
            out.extend(kept[1..].iter().map(|&d| (b'0' + d) as char));
        }
        if sci_exp != 0 {
            out.push('e');
            out.push_str(&sci_exp.to_string());
        }
        out
    }

    fn placeholder() -> Self {
        Float(Big::ZERO)
    }
}

/// Taylor series of atan for |x| ≤ 1/5.
fn atan_small(x: &Float) -> Float {
    let prec = x.precision();
    let tol = Float::pow2(-(prec.get() as i64) - 4, prec);
    let x2 = x.clone() * x;
    let mut power = x.clone();
    let mut sum = x.clone();
    let mut k = 1i64;
    loop {
        power = -(power * &x2);
        let term = power.clone() / Float::from_i64(2 * k + 1, prec);
        if term.abs() < tol {
            break;
        }
        sum += &term;
        k += 1;
    }
    sum
}

/// atan for |x| ≤ 1 via argument halving atan(x) = 2 atan(x / (1 + √(1+x²))).
fn atan_reduced(x: &Float) -> Float {
    let prec = x.precision();
    let one = Float::from_i64(1, prec);
    let limit = Float::pow2(-8, prec);
    let mut y = x.clone();
    let mut doublings = 0u32;
    while y.abs() > limit {
        y = y.clone() / (one.clone() + (one.clone() + y.clone() * &y).sqrt());
        doublings += 1;
    }
    atan_small(&y) * Float::pow2(doublings as i64, prec)
}

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string(24))
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(24);
        write!(f, "{}", self.to_decimal_string(digits))
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float(-self.0)
    }
}
impl<'a> Add<&'a Float> for Float {
    type Output = Float;
    fn add(self, rhs: &'a Float) -> Float {
        Float(self.0 + &rhs.0)
    }
}
impl<'a> Sub<&'a Float> for Float {
    type Output = Float;
    fn sub(self, rhs: &'a Float) -> Float {
        Float(self.0 - &rhs.0)
    }
}
impl<'a> Mul<&'a Float> for Float {
    type Output = Float;
    fn mul(self, rhs: &'a Float) -> Float {
        Float(self.0 * &rhs.0)
    }
}
impl<'a> Div<&'a Float> for Float {
    type Output = Float;
    fn div(self, rhs: &'a Float) -> Float {
        assert!(!rhs.is_zero(), "float division by zero");
        Float(self.0 / &rhs.0)
    }
}
forward_binops!(Float);

impl Scalar for Float {
    type Ctx = Precision;
    type Real = Float;
    const EXACT: bool = false;

    fn ctx(&self) -> Precision {
        self.precision()
    }
    fn from_i64(v: i64, prec: Precision) -> Self {
        Float::from_i64(v, prec)
    }
    fn from_rational(r: &Rational, prec: Precision) -> Self {
        r.to_float(prec)
    }
    fn from_real(r: Float) -> Self {
        r
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
    fn re(&self) -> Float {
        self.clone()
    }
    fn im(&self) -> Float {
        Float::from_i64(0, self.precision())
    }
    fn norm_sqr(&self) -> Float {
        self.clone() * self
    }
    fn modulus(&self) -> Float {
        Float::abs(self)
    }
    fn as_real(&self) -> Option<Float> {
        Some(self.clone())
    }
    fn as_integer(&self) -> Option<i64> {
        if self.0.fract().repr().significand().is_zero() {
            i64::try_from(self.0.to_int().value()).ok()
        } else {
            None
        }
    }
    fn to_complex(&self, prec: Precision) -> Complex {
        Complex::from_float(self.clone().round_to(prec))
    }
    fn ln_modulus(&self, prec: Precision) -> Option<Float> {
        if self.is_zero() {
            None
        } else {
            Some(self.abs().round_to(prec).ln())
        }
    }
    fn powf(&self, exponent: &Self) -> Option<Self> {
        if let Some(e) = exponent.as_integer() {
            if e >= 0 {
                return Some(Scalar::powi(self, e as u64));
            }
            if self.is_zero() {
                return None;
            }
            return Some(Float::from_i64(1, self.precision()) / Scalar::powi(self, e.unsigned_abs()));
        }
        if self.is_zero() {
            return if exponent.is_sign_negative() {
                None
            } else {
                Some(self.clone())
            };
        }
        if self.is_sign_negative() {
            return None;
        }
        Some((exponent.clone() * self.ln()).exp())
    }
    fn working_precision(prec: Precision) -> Precision {
        prec
    }
}

impl RealScalar for Float {
    fn to_float(&self, prec: Precision) -> Float {
        self.clone().round_to(prec)
    }
    fn floor_i64(&self) -> Option<i64> {
        i64::try_from(self.0.floor().to_int().value()).ok()
    }
    fn is_negative(&self) -> bool {
        self.is_sign_negative()
    }
    fn tier_cmp(&self, other: &Self) -> Ordering {
        let prec = self.precision().max(other.precision());
        let scale = self.abs().max(other.abs()).max(Float::from_i64(1, prec));
        let diff = self.clone() - other;
        if diff.abs() <= prec.half_tolerance() * &scale {
            Ordering::Equal
        } else if diff.is_sign_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

// ---------------------------------------------------------------------------
// Complex

/// Complex number with [`Float`] components.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn new(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn from_float(re: Float) -> Self {
        let im = Float::from_i64(0, re.precision());
        Complex { re, im }
    }

    pub fn from_parts_f64(re: f64, im: f64, prec: Precision) -> Self {
        Complex::new(Float::from_f64(re, prec), Float::from_f64(im, prec))
    }

    pub fn precision(&self) -> Precision {
        self.re.precision().max(self.im.precision())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    /// Principal argument in (-π, π].
    pub fn arg(&self) -> Float {
        self.im.atan2(&self.re)
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        if self.im.is_zero() {
            return Complex::from_float(r);
        }
        let (s, c) = self.im.sin_cos();
        Complex::new(r.clone() * &c, r * &s)
    }

    /// Principal logarithm; `None` at zero.
    pub fn ln(&self) -> Option<Self> {
        let m = self.ln_modulus(self.precision())?;
        Some(Complex::new(m, self.arg()))
    }

    fn placeholder() -> Self {
        Complex {
            re: Float::placeholder(),
            im: Float::placeholder(),
        }
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(24);
        if self.im.is_zero() {
            write!(f, "{}", self.re.to_decimal_string(digits))
        } else {
            write!(
                f,
                "{}{}{}i",
                self.re.to_decimal_string(digits),
                if self.im.is_sign_negative() { "" } else { "+" },
                self.im.to_decimal_string(digits)
            )
        }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}
impl<'a> Add<&'a Complex> for Complex {
    type Output = Complex;
    fn add(self, rhs: &'a Complex) -> Complex {
        Complex::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}
impl<'a> Sub<&'a Complex> for Complex {
    type Output = Complex;
    fn sub(self, rhs: &'a Complex) -> Complex {
        Complex::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}
impl<'a> Mul<&'a Complex> for Complex {
    type Output = Complex;
    fn mul(self, rhs: &'a Complex) -> Complex {
        if rhs.im.is_zero() {
            return Complex::new(self.re * &rhs.re, self.im * &rhs.re);
        }
        if self.im.is_zero() {
            return Complex::new(rhs.re.clone() * &self.re, rhs.im.clone() * &self.re);
        }
        let re = self.re.clone() * &rhs.re - self.im.clone() * &rhs.im;
        let im = self.re * &rhs.im + self.im * &rhs.re;
        Complex::new(re, im)
    }
}
impl<'a> Div<&'a Complex> for Complex {
    type Output = Complex;
    fn div(self, rhs: &'a Complex) -> Complex {
        if rhs.im.is_zero() {
            return Complex::new(self.re / &rhs.re, self.im / &rhs.re);
        }
        let den = rhs.norm_sqr();
        let re = self.re.clone() * &rhs.re + self.im.clone() * &rhs.im;
        let im = self.im * &rhs.re - self.re * &rhs.im;
        Complex::new(re / &den, im / &den)
    }
}
forward_binops!(Complex);

impl Scalar for Complex {
    type Ctx = Precision;
    type Real = Float;
    const EXACT: bool = false;

    fn ctx(&self) -> Precision {
        self.precision()
    }
    fn from_i64(v: i64, prec: Precision) -> Self {
        Complex::from_float(Float::from_i64(v, prec))
    }
    fn from_rational(r: &Rational, prec: Precision) -> Self {
        Complex::from_float(r.to_float(prec))
    }
    fn from_real(r: Float) -> Self {
        Complex::from_float(r)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn re(&self) -> Float {
        self.re.clone()
    }
    fn im(&self) -> Float {
        self.im.clone()
    }
    fn norm_sqr(&self) -> Float {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }
    fn modulus(&self) -> Float {
        if self.im.is_zero() {
            return self.re.abs();
        }
        if self.re.is_zero() {
            return self.im.abs();
        }
        Float(self.re.0.hypot(&self.im.0))
    }
    fn as_real(&self) -> Option<Float> {
        if self.im.is_zero() {
            Some(self.re.clone())
        } else {
            None
        }
    }
    fn as_integer(&self) -> Option<i64> {
        if self.im.is_zero() {
            self.re.as_integer()
        } else {
            None
        }
    }
    fn to_complex(&self, prec: Precision) -> Complex {
        Complex::new(self.re.clone().round_to(prec), self.im.clone().round_to(prec))
    }
    fn ln_modulus(&self, prec: Precision) -> Option<Float> {
        if self.is_zero() {
            return None;
        }
        Some(self.modulus().round_to(prec).ln())
    }
    fn powf(&self, exponent: &Self) -> Option<Self> {
        if let Some(e) = exponent.as_integer() {
            if e >= 0 {
                return Some(Scalar::powi(self, e as u64));
            }
            if self.is_zero() {
                return None;
            }
            return Some(Complex::from_i64(1, self.precision()) / Scalar::powi(self, e.unsigned_abs()));
        }
        if self.is_zero() {
            return if exponent.re.is_sign_negative() || exponent.re.is_zero() {
                None
            } else {
                Some(self.clone())
            };
        }
        Some((exponent.clone() * &self.ln()?).exp())
    }
    fn working_precision(prec: Precision) -> Precision {
        prec
    }
}

/// Values of a slice as `f64`, for plotting and regression diagnostics.
pub fn floats_to_f64(values: &[Float]) -> Vec<f64> {
    values.iter().map(Float::to_f64).collect()
}
