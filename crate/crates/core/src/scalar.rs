//! Exact rational scalars and the few float conversions the bound checks need.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses an integer or `p/q` (q > 0, digits only after the slash).
pub fn parse_rational(tok: &str) -> Option<Rational> {
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (tok, None),
    };
    let num: BigInt = num.parse().ok()?;
    match den {
        None => Some(Rational::from_integer(num)),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            let den: BigInt = d.parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rational::new(num, den))
        }
    }
}

/// Natural log of a positive rational; bit-length fallback keeps huge values finite.
pub fn ln_rational(r: &Rational) -> f64 {
    assert!(r.is_positive(), "ln of non-positive rational");
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.sign() == Sign::Plus);
    if let Some(f) = x.to_f64() {
        if f.is_finite() {
            return f.ln();
        }
    }
    let bits = x.bits();
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_factorial(r: u64) -> f64 {
    (2..=r).map(|i| (i as f64).ln()).sum()
}

/// Fixed-point decimal rendering with `digits` fractional digits, round half away from zero.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let pow = BigInt::from(10u32).pow(digits as u32);
    let scaled_num = r.numer() * &pow;
    let den = r.denom();
    let (mut q, rem) = num_integer::Integer::div_rem(&scaled_num, den);
    // div_rem truncates toward zero; rem carries the sign of the numerator.
    if &(rem.abs() * 2u32) >= den {
        if scaled_num.is_negative() {
            q -= 1;
        } else {
            q += 1;
        }
    }
    let neg = q.is_negative();
    let digits_str = q.abs().to_string();
    let (int_part, frac_part) = if digits == 0 {
        (digits_str.clone(), String::new())
    } else if digits_str.len() <= digits {
        (
            "0".to_string(),
            format!("{:0>width$}", digits_str, width = digits),
        )
    } else {
        let split = digits_str.len() - digits;
        (digits_str[..split].to_string(), digits_str[split..].to_string())
    };
    let sign = if neg { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_integers_and_fractions() {
        assert_eq!(parse_rational("5").unwrap(), int(5));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("1/-2").is_none());
        assert!(parse_rational("1/").is_none());
        assert!(parse_rational("a").is_none());
        assert!(parse_rational("1.5").is_none());
    }

    #[test]
    fn ln_matches_f64_on_small_values() {
        let r = ratio(36, 1);
        assert!((ln_rational(&r) - 36f64.ln()).abs() < 1e-12);
        let r = ratio(4, 81);
        assert!((ln_rational(&r) - (4f64 / 81.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn ln_survives_huge_values() {
        let big = Rational::from_integer(BigInt::from(2u32).pow(40_000));
        let expect = 40_000.0 * std::f64::consts::LN_2;
        assert!((ln_rational(&big) - expect).abs() < 1e-6 * expect);
    }

    #[test]
    fn decimal_rendering_rounds_half_away() {
        assert_eq!(to_decimal(&ratio(1, 2), 0), "1");
        assert_eq!(to_decimal(&ratio(-1, 2), 0), "-1");
        assert_eq!(to_decimal(&ratio(1, 3), 6), "0.333333");
        assert_eq!(to_decimal(&ratio(2, 3), 6), "0.666667");
        assert_eq!(to_decimal(&ratio(-2, 3), 3), "-0.667");
        assert_eq!(to_decimal(&int(36), 2), "36.00");
        assert_eq!(to_decimal(&ratio(1, 8), 3), "0.125");
    }
}
