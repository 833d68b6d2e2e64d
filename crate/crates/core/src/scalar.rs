//! Real scalar fields the library is generic over.
//!
//! Every identity in this crate is a rational function of `q`, so the same
//! code runs either in IEEE double precision ([`f64`]) or in exact big-integer
//! rational arithmetic ([`Rational`]). Complex values are `Complex<R>` for a
//! real field `R`.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{NumAssign, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Relative epsilon used to detect `n*q == n-1` in float mode.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// Float-mode safety margin applied to convergence-disk checks.
pub const DISK_MARGIN: f64 = 1e-6;

/// A real scalar field: `f64` or exact [`Rational`].
pub trait Real:
    Clone + Debug + PartialOrd + NumAssign + Signed + Send + Sync + 'static
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// Converts a finite double. Exact mode keeps the full binary value.
    fn from_f64(x: f64) -> Option<Self>;

    /// Zero test used for degeneracy detection: exact equality in rational
    /// mode, `|self| <= eps * max(1, |scale|)` in float mode.
    fn is_negligible(&self, scale: &Self, eps: f64) -> bool;

    /// Parses a real literal: an integer, a decimal (`1.25`, `-3e-2`) or a
    /// fraction `p/r`.
    fn parse_literal(text: &str) -> Result<Self>;

    /// Renders the value: 17 significant digits in float mode, `p/r` in exact
    /// mode.
    fn render(&self) -> String;

    /// Convergence-disk test on a squared, radius-normalised quantity
    /// `s = |x|^2 (1-q)^2`: strict `s < 1` in exact mode, `s <= (1-margin)^2`
    /// in float mode.
    fn inside_unit_disk(scaled_sq: &Self) -> bool;

    fn from_usize(n: usize) -> Self {
        Self::from_i64(n as i64)
    }

    fn factorial(k: usize) -> Self {
        (1..=k).fold(Self::one(), |acc, i| acc * Self::from_usize(i))
    }

    /// Reciprocal; callers guarantee a nonzero argument.
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Real for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn is_negligible(&self, scale: &Self, eps: f64) -> bool {
        self.abs() <= eps * scale.abs().max(1.0)
    }

    fn parse_literal(text: &str) -> Result<Self> {
        let text = text.trim();
        let value = match text.split_once('/') {
            Some((num, den)) => {
                let num = parse_f64_plain(num)?;
                let den = parse_f64_plain(den)?;
                if den == 0.0 {
                    return Err(Error::Parse(format!("zero denominator in `{text}`")));
                }
                num / den
            }
            None => parse_f64_plain(text)?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Parse(format!("non-finite literal `{text}`")))
        }
    }

    fn render(&self) -> String {
        format!("{:.16e}", self)
    }

    fn inside_unit_disk(scaled_sq: &Self) -> bool {
        *scaled_sq <= (1.0 - DISK_MARGIN) * (1.0 - DISK_MARGIN)
    }
}

fn parse_f64_plain(text: &str) -> Result<f64> {
    let t = text.trim();
    // `f64::from_str` also accepts "inf"/"nan"; only numeric spellings are allowed.
    if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) {
        return Err(Error::Parse(format!("invalid number `{t}`")));
    }
    f64::from_str(t).map_err(|_| Error::Parse(format!("invalid number `{t}`")))
}

impl Real for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Option<Self> {
        Rational::from_float(x)
    }

    fn is_negligible(&self, _scale: &Self, _eps: f64) -> bool {
        self.is_zero()
    }

    fn parse_literal(text: &str) -> Result<Self> {
        parse_rational(text)
    }

    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn inside_unit_disk(scaled_sq: &Self) -> bool {
        *scaled_sq < Rational::one()
    }
}

/// Parses an exact rational from `p/r`, an integer, or a decimal literal with
/// optional exponent.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num)?;
        let den = parse_decimal(den)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(num / den);
    }
    parse_decimal(text)
}

// Longest exponent accepted; keeps adversarial input from allocating 10^huge.
const MAX_EXPONENT: i64 = 4096;

fn parse_decimal(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational literal `{text}`"));
    let t = text.trim();
    let (negative, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = body[pos + 1..].parse().map_err(|_| bad())?;
            if exp.abs() > MAX_EXPONENT {
                return Err(bad());
            }
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Component-wise max norm `max(|re|, |im|)`; exact in rational mode.
pub fn cmax<R: Real>(z: &Complex<R>) -> R {
    let re = z.re.abs();
    let im = z.im.abs();
    if re >= im {
        re
    } else {
        im
    }
}

/// `|z|^2` without a square root.
pub fn cnorm_sqr<R: Real>(z: &Complex<R>) -> R {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

pub fn creal<R: Real>(x: R) -> Complex<R> {
    Complex::new(x, R::zero())
}

/// Converts to `Complex<f64>`.
pub fn cto_f64<R: Real>(z: &Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}

/// Converts a double-precision complex into the field `R`.
pub fn cfrom_f64<R: Real>(z: Complex<f64>) -> Option<Complex<R>> {
    Some(Complex::new(R::from_f64(z.re)?, R::from_f64(z.im)?))
}

/// Renders a complex value as `re+imi` / `re-imi`.
pub fn render_complex<R: Real>(z: &Complex<R>) -> String {
    let re = z.re.render();
    if z.im.is_negative() {
        format!("{re}-{}i", (-z.im.clone()).render())
    } else {
        format!("{re}+{}i", z.im.render())
    }
}

/// Parses a complex literal: `a`, `bi`, `a+bi`, `a-bi`, where `a` and `b` are
/// real literals accepted by [`Real::parse_literal`]. A bare `i` means `1i`.
pub fn parse_complex<R: Real>(text: &str) -> Result<Complex<R>> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty complex literal".into()));
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok(creal(R::parse_literal(t)?));
    };
    // Split at the last sign that is not the leading sign or part of an exponent.
    let bytes = body.as_bytes();
    let mut split = None;
    for pos in (1..bytes.len()).rev() {
        if (bytes[pos] == b'+' || bytes[pos] == b'-') && !matches!(bytes[pos - 1], b'e' | b'E') {
            split = Some(pos);
            break;
        }
    }
    let imag = |s: &str| -> Result<R> {
        match s.trim() {
            "" | "+" => Ok(R::one()),
            "-" => Ok(-R::one()),
            other => R::parse_literal(other),
        }
    };
    match split {
        Some(pos) => Ok(Complex::new(R::parse_literal(&body[..pos])?, imag(&body[pos..])?)),
        None => Ok(Complex::new(R::zero(), imag(body)?)),
    }
}
