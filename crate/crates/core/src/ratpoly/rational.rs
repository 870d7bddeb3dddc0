use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always normalized with a positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Renders `r` as `"p/q"` in lowest terms, including integers (`"2/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses an integer, a fraction `p/q`, or a finite decimal such as `0.15` or
/// `-2.5e-3`. Decimals are converted exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => {
            let e: i32 = s[k + 1..].parse().map_err(|_| bad())?;
            (&s[..k], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0")
        .parse()
        .map_err(|_| bad())?;
    let mut value = Rational::new(all, BigInt::from(10u32));
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10u32));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Decimal approximation of `r` with `digits` fractional digits, rounded half
/// away from zero.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), digits);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    let frac = frac_part.to_string();
    format!("{sign}{int_part}.{}{frac}", "0".repeat(digits - frac.len()))
}

pub(crate) fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}
