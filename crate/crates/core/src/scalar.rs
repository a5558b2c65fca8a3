//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.
//!
//! All symbolic work in the crate (polynomial coefficients, pencil
//! coefficients, fullness witnesses, free-group operators) uses this type so
//! that rank and fullness answers are exact integers. Floating point only
//! appears once a matrix is evaluated at a numeric model.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use faer::c64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A Gaussian rational number.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    re: BigRational,
    im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    /// `re_num/den + (im_num/den)·i`.
    pub fn from_fraction(re_num: i64, im_num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let den = BigInt::from(den);
        Self::new(
            BigRational::new(re_num.into(), den.clone()),
            BigRational::new(im_num.into(), den),
        )
    }

    pub fn from_real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    /// Division; `None` when dividing by zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    /// max(|re|, |im|), used as an exact sup-norm.
    pub fn max_abs(&self) -> BigRational {
        let a = self.re.abs();
        let b = self.im.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn to_c64(&self) -> c64 {
        c64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Snaps a float complex number to the Gaussian rational with the
    /// smallest common denominator `q ≤ max_den` whose parts lie within `tol`.
    pub fn snap(z: c64, max_den: i64, tol: f64) -> Option<Self> {
        for q in 1..=max_den {
            let qf = q as f64;
            let p_re = (z.re * qf).round();
            let p_im = (z.im * qf).round();
            if (z.re - p_re / qf).abs() <= tol && (z.im - p_im / qf).abs() <= tol {
                return Some(Self::from_fraction(p_re as i64, p_im as i64, q));
            }
        }
        None
    }

    /// Exact conversion of a finite float through its shortest decimal
    /// representation, so `0.1` becomes `1/10`.
    pub fn from_decimal_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        parse_decimal(&format!("{x}")).map(Self::from_real)
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = all.parse().ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

fn parse_imag(s: &str) -> Option<BigRational> {
    let body = s.trim().strip_suffix('i')?;
    match body.trim() {
        "" | "+" => Some(BigRational::one()),
        "-" => Some(-BigRational::one()),
        b => parse_rational(b),
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Accepts `3`, `-3/2`, `2i`, `-i`, `3/2+1/2i`, `3/2-1/2i`, optionally
    /// wrapped in one pair of parentheses.
    fn from_str(text: &str) -> Result<Self, Error> {
        let bad = || Error::InvalidScalar(text.to_string());
        let mut s = text.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            s = inner.trim();
        }
        if s.is_empty() {
            return Err(bad());
        }
        if !s.ends_with('i') {
            return parse_rational(s).map(Self::from_real).ok_or_else(bad);
        }
        // split at the last sign that is not the leading one
        let split = s
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            Some(pos) => {
                let re = parse_rational(&s[..pos]).ok_or_else(bad)?;
                let im = parse_imag(&s[pos..]).ok_or_else(bad)?;
                Ok(Self::new(re, im))
            }
            None => {
                let im = parse_imag(s).ok_or_else(bad)?;
                Ok(Self::new(BigRational::zero(), im))
            }
        }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    /// Canonical text: `2`, `-1/2`, `3i`, `-1/2i`, `3/2+1/2i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}i",
                    fmt_rational(&self.re),
                    sign,
                    fmt_rational(&self.im.abs())
                )
            }
        }
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl serde::Serialize for ExactScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ExactScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        scalar_from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// A JSON scalar is either a string in canonical text form or a number.
pub fn scalar_from_json(v: &serde_json::Value) -> Result<ExactScalar, Error> {
    match v {
        serde_json::Value::String(s) => s.parse(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(ExactScalar::from_int(i))
            } else {
                n.as_f64()
                    .and_then(ExactScalar::from_decimal_f64)
                    .ok_or_else(|| Error::InvalidScalar(n.to_string()))
            }
        }
        other => Err(Error::InvalidScalar(other.to_string())),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                let f: fn(&ExactScalar, &ExactScalar) -> ExactScalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| ExactScalar::new(&a.re + &b.re, &a.im + &b.im));
forward_binop!(Sub, sub, |a, b| ExactScalar::new(&a.re - &b.re, &a.im - &b.im));
forward_binop!(Mul, mul, |a, b| ExactScalar::new(
    &a.re * &b.re - &a.im * &b.im,
    &a.re * &b.im + &a.im * &b.re
));
forward_binop!(Div, div, |a, b| a
    .checked_div(b)
    .expect("division by zero Gaussian rational"));

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re, -self.im)
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}
