//! Exact rational scalars and the conversions used by the text formats.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for small rational constants.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for small integer constants.
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"5"`, `"-3"`, `"3/4"`, or `"0.25"` exactly. Returns `None` on any
/// other shape (exponents, hex, empty input, division by zero).
pub fn parse_number(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        let negative = whole.starts_with('-');
        let whole_digits = whole.strip_prefix(['-', '+']).unwrap_or(whole);
        if !whole_digits.chars().all(|c| c.is_ascii_digit())
            || frac.is_empty()
            || !frac.chars().all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let whole_digits = if whole_digits.is_empty() { "0" } else { whole_digits };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let combined: BigInt = format!("{whole_digits}{frac}").parse().ok()?;
        let value = Rational::new(combined, scale);
        return Some(if negative { -value } else { value });
    }
    let int: BigInt = text.parse().ok()?;
    Some(Rational::from_integer(int))
}

/// Renders a rational as an exact decimal when the denominator is a product
/// of 2s and 5s, and as `"p/q"` otherwise.
pub fn format_exact(x: &Rational) -> String {
    let den = x.denom();
    if den.is_one() {
        return x.numer().to_string();
    }
    let (twos, rest) = strip_factor(den.clone(), 2);
    let (fives, rest) = strip_factor(rest, 5);
    if !rest.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    let scale = twos.max(fives);
    let scaled = (x * Rational::from_integer(BigInt::from(10u32).pow(scale)))
        .to_integer()
        .magnitude()
        .to_string();
    let scale = scale.to_usize().expect("decimal scale fits in usize");
    let digits = if scaled.len() <= scale {
        format!("{}{}", "0".repeat(scale + 1 - scaled.len()), scaled)
    } else {
        scaled
    };
    let (int_part, frac_part) = digits.split_at(digits.len() - scale);
    let sign = if x.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

fn strip_factor(mut value: BigInt, factor: u32) -> (u32, BigInt) {
    let factor = BigInt::from(factor);
    let mut count = 0;
    while (&value % &factor).is_zero() {
        value /= &factor;
        count += 1;
    }
    (count, value)
}
