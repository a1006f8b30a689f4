use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Renders `p/q`, or `p` when the denominator is one. Negative values carry
/// an ASCII `-`.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q`, an integer, or a decimal such as `-0.125` or `1.5e-3`.
/// Decimals are converted exactly. A leading U+2212 minus sign is accepted.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let (negative, body) = if let Some(rest) = trimmed.strip_prefix('\u{2212}') {
        (true, rest)
    } else if let Some(rest) = trimmed.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = trimmed.strip_prefix('+') {
        (false, rest)
    } else {
        (false, trimmed)
    };
    if body.is_empty() || body.starts_with(['-', '+', '\u{2212}']) {
        return Err(Error::Parse(format!("not a number: {text:?}")));
    }
    let value = if let Some((num, den)) = body.split_once('/') {
        let p = parse_digits(num, text)?;
        let q = parse_digits(den, text)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator: {text:?}")));
        }
        Rational::new(p, q)
    } else {
        parse_decimal(body, text)?
    };
    Ok(if negative { -value } else { value })
}

fn parse_digits(digits: &str, original: &str) -> Result<BigInt> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a number: {original:?}")));
    }
    digits.parse::<BigInt>().map_err(|_| Error::Parse(format!("not a number: {original:?}")))
}

fn parse_decimal(body: &str, original: &str) -> Result<Rational> {
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_text = &body[pos + 1..];
            let exp: i64 = exp_text.parse().map_err(|_| Error::Parse(format!("bad exponent in {original:?}")))?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("not a number: {original:?}")));
    }
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(Error::Parse(format!("not a number: {original:?}")));
    }
    if exponent.unsigned_abs() > 4096 {
        return Err(Error::Parse(format!("exponent out of range in {original:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().unwrap_or_else(|_| BigInt::zero());
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Nearest double; saturates to +-inf for out-of-range magnitudes.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(value: f64) -> Result<Rational> {
    Rational::from_float(value).ok_or_else(|| Error::InvalidInput(format!("non-finite value {value}")))
}

#[cfg(test)]
pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
pub(crate) fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

/// Exact square root of a non-negative rational when it is a perfect square.
pub(crate) fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let p = r.numer().magnitude();
    let q = r.denom().magnitude();
    let sp = p.sqrt();
    let sq = q.sqrt();
    if &(&sp * &sp) == p && &(&sq * &sq) == q {
        Some(Rational::new(BigInt::from(sp), BigInt::from(sq)))
    } else {
        None
    }
}
