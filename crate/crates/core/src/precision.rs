//! Exact-rational and extended-precision real arithmetic.
//!
//! Everything numerical in the crate is generic over [`Scalar`], which is
//! implemented by [`rug::Rational`] (exact mode) and [`rug::Float`]
//! (extended precision at [`PrecisionContext::bits`]). A computation picks
//! its mode once, from its parameters: exact when every [`Param`] is
//! rational, extended precision otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 50;
pub const DEFAULT_GUARD: u32 = 10;
pub const MIN_DIGITS: u32 = 20;
/// Irrational parameters are stored at this many bits (about 600 digits),
/// which caps the usable working precision.
pub const PARAM_BITS: u32 = 2048;
pub const MAX_DIGITS: u32 = 600;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision and truncation target.
///
/// `digits` is the decimal working precision; series are truncated once
/// their terms fall below `eps = 10^-(digits - guard)` relative to the sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { digits: DEFAULT_DIGITS, guard: DEFAULT_GUARD }
    }
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidPrecision(format!(
                "digits = {digits} is below the minimum of {MIN_DIGITS}"
            )));
        }
        if digits > MAX_DIGITS {
            return Err(Error::InvalidPrecision(format!(
                "digits = {digits} exceeds the maximum of {MAX_DIGITS}"
            )));
        }
        if guard == 0 || guard >= digits {
            return Err(Error::InvalidPrecision(format!(
                "guard = {guard} must lie in 1..{digits}"
            )));
        }
        Ok(PrecisionContext { digits, guard })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    /// Binary precision of `Float` values created under this context.
    pub fn bits(&self) -> u32 {
        (f64::from(self.digits) * LOG2_10).ceil() as u32 + 8
    }

    /// Decimal exponent of the truncation target.
    pub fn target_digits(&self) -> u32 {
        self.digits - self.guard
    }

    /// `10^-(digits - guard)` as an exact rational.
    pub fn eps(&self) -> Rational {
        Rational::from((Integer::from(1), Integer::from(10).pow(self.target_digits())))
    }

    pub fn eps_float(&self) -> Float {
        Float::with_val(self.bits(), self.eps())
    }

    /// Raises the working precision by `extra` digits while keeping the
    /// truncation target fixed. Used where cancellation is known up front.
    pub fn boosted(&self, extra: u32) -> Self {
        let digits = (self.digits + extra).min(MAX_DIGITS);
        let guard = self.guard + (digits - self.digits);
        PrecisionContext { digits, guard }
    }

    /// Raises precision and truncation target together by `extra` digits.
    pub fn refined(&self, extra: u32) -> Self {
        PrecisionContext { digits: (self.digits + extra).min(MAX_DIGITS), guard: self.guard }
    }

    pub fn float(&self, v: impl Into<f64>) -> Float {
        Float::with_val(self.bits(), v.into())
    }

    pub fn float_from(&self, q: &Rational) -> Float {
        Float::with_val(self.bits(), q)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }
}

/// Field element used throughout the crate: exact rationals or
/// extended-precision reals.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    /// True for exact rational arithmetic.
    const EXACT: bool;

    fn from_rational(q: &Rational, ctx: &PrecisionContext) -> Self;

    /// Converts a parameter; fails in exact mode for irrational parameters.
    fn from_param(p: &Param, ctx: &PrecisionContext) -> Result<Self>;

    fn to_float(&self, ctx: &PrecisionContext) -> Float;

    /// Rounds a real to this type (exact for rationals).
    fn from_float(f: &Float, ctx: &PrecisionContext) -> Self;

    /// The exact rational value (a binary fraction for reals).
    fn to_rational(&self) -> Rational;

    /// Constant with the same precision as `self`.
    fn int_like(&self, v: i64) -> Self;

    fn is_zero(&self) -> bool;

    fn abs_val(&self) -> Self;

    /// Rough `log2 |self|`, `-inf` for zero. Only used for pivot choice.
    fn log2_magnitude(&self) -> f64;

    /// `Some(n)` when `self` equals `-n` for a nonnegative integer `n`.
    /// Floats use the tolerance `10^-(digits/2)`.
    fn nonpositive_integer(&self, ctx: &PrecisionContext) -> Option<u64>;

    fn from_int(v: i64, ctx: &PrecisionContext) -> Self {
        Self::from_rational(&Rational::from(v), ctx)
    }

    fn zero_like(&self) -> Self {
        self.int_like(0)
    }

    fn one_like(&self) -> Self {
        self.int_like(1)
    }

    fn is_integer_valued(&self, ctx: &PrecisionContext) -> bool {
        self.nonpositive_integer(ctx).is_some() || (-self.clone()).nonpositive_integer(ctx).is_some()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational, _ctx: &PrecisionContext) -> Self {
        q.clone()
    }

    fn from_param(p: &Param, _ctx: &PrecisionContext) -> Result<Self> {
        match p {
            Param::Exact(q) => Ok(q.clone()),
            Param::Real { expr, .. } => Err(Error::InvalidParameters(format!(
                "irrational parameter {expr} in exact mode"
            ))),
        }
    }

    fn to_float(&self, ctx: &PrecisionContext) -> Float {
        Float::with_val(ctx.bits(), self)
    }

    fn from_float(f: &Float, _ctx: &PrecisionContext) -> Self {
        f.to_rational().unwrap_or_default()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn int_like(&self, v: i64) -> Self {
        Rational::from(v)
    }

    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }

    fn abs_val(&self) -> Self {
        self.clone().abs()
    }

    fn log2_magnitude(&self) -> f64 {
        if Scalar::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        f64::from(self.numer().significant_bits()) - f64::from(self.denom().significant_bits())
    }

    fn nonpositive_integer(&self, _ctx: &PrecisionContext) -> Option<u64> {
        if self.denom() == &1 && self.cmp0() != Ordering::Greater {
            (-self.numer().clone()).to_u64()
        } else {
            None
        }
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn from_rational(q: &Rational, ctx: &PrecisionContext) -> Self {
        Float::with_val(ctx.bits(), q)
    }

    fn from_param(p: &Param, ctx: &PrecisionContext) -> Result<Self> {
        Ok(p.to_float(ctx))
    }

    fn to_float(&self, ctx: &PrecisionContext) -> Float {
        Float::with_val(ctx.bits(), self)
    }

    fn from_float(f: &Float, ctx: &PrecisionContext) -> Self {
        Float::with_val(ctx.bits(), f)
    }

    fn to_rational(&self) -> Rational {
        Float::to_rational(self).unwrap_or_default()
    }

    fn int_like(&self, v: i64) -> Self {
        Float::with_val(self.prec(), v)
    }

    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }

    fn abs_val(&self) -> Self {
        self.clone().abs()
    }

    fn log2_magnitude(&self) -> f64 {
        match self.get_exp() {
            Some(e) => f64::from(e),
            None => f64::NEG_INFINITY,
        }
    }

    fn nonpositive_integer(&self, ctx: &PrecisionContext) -> Option<u64> {
        if self.is_sign_positive() && !Float::is_zero(self) {
            return None;
        }
        let nearest = self.clone().round();
        let gap = Float::with_val(self.prec(), self - &nearest).abs();
        let tol = Float::with_val(self.prec(), 10).pow(-(ctx.digits() as i32) / 2);
        if gap < tol {
            nearest.to_integer().and_then(|i| (-i).to_u64())
        } else {
            None
        }
    }
}

/// `a (a+1) ... (a+k-1)`, computed as a running product.
pub fn pochhammer<T: Scalar>(a: &T, k: usize) -> T {
    let one = a.one_like();
    let mut acc = one.clone();
    let mut cur = a.clone();
    for _ in 0..k {
        acc *= &cur;
        cur += &one;
    }
    acc
}

/// `a (a-1) ... (a-k+1) / k!`.
pub fn gen_binomial<T: Scalar>(a: &T, k: usize) -> T {
    let one = a.one_like();
    let mut acc = one.clone();
    let mut cur = a.clone();
    for i in 1..=k {
        acc *= &cur;
        acc /= a.int_like(i as i64);
        cur -= &one;
    }
    acc
}

pub fn factorial<T: Scalar>(k: usize, like: &T) -> T {
    pochhammer(&like.one_like(), k)
}

/// A model parameter as entered by the user: an exact rational, or an
/// irrational value held at [`PARAM_BITS`] together with its source text.
#[derive(Clone, Debug)]
pub enum Param {
    Exact(Rational),
    Real { value: Float, expr: String },
}

impl PartialEq for Param {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Param::Exact(a), Param::Exact(b)) => a == b,
            (Param::Real { value: a, .. }, Param::Real { value: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Exact(q) => write!(f, "{q}"),
            Param::Real { expr, .. } => f.write_str(expr),
        }
    }
}

impl From<i64> for Param {
    fn from(v: i64) -> Self {
        Param::Exact(Rational::from(v))
    }
}

impl From<Rational> for Param {
    fn from(q: Rational) -> Self {
        Param::Exact(q)
    }
}

impl Param {
    pub fn ratio(num: i64, den: i64) -> Param {
        Param::Exact(Rational::from((num, den)))
    }

    /// Parses arithmetic over decimal/rational literals with `+ - * /`,
    /// parentheses, `sqrt(..)` and `pi`. Results stay exact unless an
    /// irrational value is produced.
    pub fn parse(src: &str) -> Result<Param> {
        let mut p = ExprParser { chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 };
        let v = p.expr()?;
        if p.pos != p.chars.len() {
            return Err(Error::Parse(format!("unexpected trailing input in {src:?}")));
        }
        Ok(match v {
            ExprVal::Q(q) => Param::Exact(q),
            ExprVal::R(value) => Param::Real { value, expr: src.trim().to_string() },
        })
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Param::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Param::Exact(q) => Some(q),
            Param::Real { .. } => None,
        }
    }

    pub fn to_float(&self, ctx: &PrecisionContext) -> Float {
        match self {
            Param::Exact(q) => Float::with_val(ctx.bits(), q),
            Param::Real { value, .. } => Float::with_val(ctx.bits(), value),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Param::Exact(q) => q.to_f64(),
            Param::Real { value, .. } => value.to_f64(),
        }
    }

    /// Exact sum of two parameters, falling back to high precision.
    pub fn add(&self, other: &Param) -> Param {
        match (self, other) {
            (Param::Exact(a), Param::Exact(b)) => Param::Exact(Rational::from(a + b)),
            _ => Param::Real {
                value: Float::with_val(PARAM_BITS, self.hi() + &other.hi()),
                expr: format!("({self})+({other})"),
            },
        }
    }

    pub fn sub(&self, other: &Param) -> Param {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Param {
        match self {
            Param::Exact(a) => Param::Exact(Rational::from(-a)),
            Param::Real { value, expr } => {
                Param::Real { value: Float::with_val(PARAM_BITS, -value), expr: format!("-({expr})") }
            }
        }
    }

    pub fn mul(&self, other: &Param) -> Param {
        match (self, other) {
            (Param::Exact(a), Param::Exact(b)) => Param::Exact(Rational::from(a * b)),
            _ => Param::Real {
                value: Float::with_val(PARAM_BITS, self.hi() * &other.hi()),
                expr: format!("({self})*({other})"),
            },
        }
    }

    fn hi(&self) -> Float {
        match self {
            Param::Exact(q) => Float::with_val(PARAM_BITS, q),
            Param::Real { value, .. } => value.clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Param::Exact(q) => q.denom() == &1,
            Param::Real { .. } => false,
        }
    }

    pub fn cmp_int(&self, v: i64) -> Ordering {
        match self {
            Param::Exact(q) => q.partial_cmp(&v).unwrap_or(Ordering::Equal),
            Param::Real { value, .. } => value.partial_cmp(&v).unwrap_or(Ordering::Equal),
        }
    }
}

impl serde::Serialize for Param {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Param {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Param;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or an arithmetic expression")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<Param, E> {
                Param::parse(v).map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<Param, E> {
                Ok(Param::from(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<Param, E> {
                Ok(Param::Exact(Rational::from(v)))
            }
            // the shortest round-trip decimal, read exactly
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<Param, E> {
                Param::parse(&format!("{v:e}")).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// True when every parameter is rational, i.e. exact mode is available.
pub fn all_exact<'a>(params: impl IntoIterator<Item = &'a Param>) -> bool {
    params.into_iter().all(Param::is_exact)
}

enum ExprVal {
    Q(Rational),
    R(Float),
}

impl ExprVal {
    fn hi(&self) -> Float {
        match self {
            ExprVal::Q(q) => Float::with_val(PARAM_BITS, q),
            ExprVal::R(f) => f.clone(),
        }
    }

    fn binary(self, other: ExprVal, op: char) -> Result<ExprVal> {
        if let (ExprVal::Q(a), ExprVal::Q(b)) = (&self, &other) {
            return Ok(ExprVal::Q(match op {
                '+' => Rational::from(a + b),
                '-' => Rational::from(a - b),
                '*' => Rational::from(a * b),
                _ => {
                    if b.cmp0() == Ordering::Equal {
                        return Err(Error::Parse("division by zero".into()));
                    }
                    Rational::from(a / b)
                }
            }));
        }
        let (a, b) = (self.hi(), other.hi());
        Ok(ExprVal::R(match op {
            '+' => a + &b,
            '-' => a - &b,
            '*' => a * &b,
            _ => {
                if Float::is_zero(&b) {
                    return Err(Error::Parse("division by zero".into()));
                }
                a / &b
            }
        }))
    }
}

struct ExprParser {
    chars: Vec<char>,
    pos: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ExprVal> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = lhs.binary(rhs, op)?;
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprVal> {
        let mut lhs = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = lhs.binary(rhs, op)?;
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExprVal> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(match self.unary()? {
                    ExprVal::Q(q) => ExprVal::Q(-q),
                    ExprVal::R(f) => ExprVal::R(-f),
                })
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<ExprVal> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match name.as_str() {
                    "pi" => Ok(ExprVal::R(Float::with_val(PARAM_BITS, Constant::Pi))),
                    "sqrt" => {
                        self.expect('(')?;
                        let v = self.expr()?;
                        self.expect(')')?;
                        sqrt_val(v)
                    }
                    _ => Err(Error::Parse(format!("unknown identifier {name:?}"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected {other:?} at position {}", self.pos))),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected {c:?} at position {}", self.pos)))
        }
    }

    fn number(&mut self) -> Result<ExprVal> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        let mantissa: String = self.chars[start..self.pos].iter().collect();
        let mut exp10: i64 = 0;
        if matches!(self.peek(), Some('e' | 'E')) {
            self.pos += 1;
            let es = self.pos;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let e: String = self.chars[es..self.pos].iter().collect();
            exp10 = e.parse().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?;
        }
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => (i.to_string(), f.to_string()),
            None => (mantissa.clone(), String::new()),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Parse(format!("bad number {mantissa:?}")));
        }
        let digits = format!("{int_part}{frac_part}");
        let num: Integer =
            digits.parse().map_err(|_| Error::Parse(format!("bad number {mantissa:?}")))?;
        let scale = exp10 - frac_part.len() as i64;
        let ten = Integer::from(10);
        let q = if scale >= 0 {
            Rational::from(num * ten.pow(scale as u32))
        } else {
            Rational::from((num, ten.pow((-scale) as u32)))
        };
        Ok(ExprVal::Q(q))
    }
}

fn sqrt_val(v: ExprVal) -> Result<ExprVal> {
    match v {
        ExprVal::Q(q) => {
            if q.cmp0() == Ordering::Less {
                return Err(Error::Parse("sqrt of a negative number".into()));
            }
            let (n, d) = q.into_numer_denom();
            if n.is_perfect_square() && d.is_perfect_square() {
                Ok(ExprVal::Q(Rational::from((n.sqrt(), d.sqrt()))))
            } else {
                let q = Rational::from((n, d));
                Ok(ExprVal::R(Float::with_val(PARAM_BITS, &q).sqrt()))
            }
        }
        ExprVal::R(f) => {
            if f.is_sign_negative() {
                return Err(Error::Parse("sqrt of a negative number".into()));
            }
            Ok(ExprVal::R(f.sqrt()))
        }
    }
}

/// Complex numbers over a [`Scalar`]; only what ray evaluation needs.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Complex<T> {
    pub fn new(re: T, im: T) -> Self {
        Complex { re, im }
    }

    pub fn real(re: T) -> Self {
        let im = re.zero_like();
        Complex { re, im }
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }

    pub fn scale(&self, s: &T) -> Self {
        Complex { re: self.re.clone() * s, im: self.im.clone() * s }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Complex {
            re: self.re.clone() * &o.re - self.im.clone() * &o.im,
            im: self.re.clone() * &o.im + self.im.clone() * &o.re,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Complex { re: self.re.clone() + &o.re, im: self.im.clone() + &o.im }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Complex { re: self.re.clone() - &o.re, im: self.im.clone() - &o.im }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Complex::real(self.re.one_like());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Complex<Float> {
    /// `e^{2 pi i j / r}` at working precision.
    pub fn root_of_unity(j: usize, r: usize, ctx: &PrecisionContext) -> Self {
        let angle = ctx.pi() * Float::with_val(ctx.bits(), 2 * j) / Float::with_val(ctx.bits(), r);
        let (s, c) = angle.sin_cos(Float::new(ctx.bits()));
        Complex { re: c, im: s }
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }
}
