//! Thin facade over arbitrary-precision rationals.
//!
//! All bound values, LP coefficients and witness weights in this crate are
//! [`Rat`] values. Construction always normalizes (reduced fraction, positive
//! denominator), so equality is exact structural equality.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input_err, Result};

/// Arbitrary-precision rational number.
pub type Rat = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Ratio of two machine integers. Panics on a zero denominator; use
/// [`parse_rat`] for untrusted input.
pub fn ratio(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact power of two, `2^exp` for `exp >= 0` and `1/2^-exp` otherwise.
pub fn pow2(exp: i64) -> Rat {
    let mag = BigInt::one() << exp.unsigned_abs();
    if exp >= 0 {
        Rat::from_integer(mag)
    } else {
        Rat::new(BigInt::one(), mag)
    }
}

/// Parses `"p"` or `"p/q"` with optional leading sign on `p`.
/// Rejects a zero denominator, empty parts and embedded whitespace.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || format!("not a rational: {s:?} (expected \"p\" or \"p/q\")");
    let parse_int = |part: &str| -> Result<BigInt> {
        if part.is_empty() || part.chars().any(|c| c.is_whitespace()) {
            return input_err(bad());
        }
        part.parse::<BigInt>()
            .map_err(|_| crate::Error::Input(bad()))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return input_err(format!("zero denominator in {s:?}"));
            }
            if den.is_negative() {
                return input_err(format!("denominator must be positive in {s:?}"));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Renders as `"p"` for integers and `"p/q"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Base-2 logarithm as an f64, for display only. Positive input required.
pub fn log2_approx(r: &Rat) -> f64 {
    assert!(r.is_positive(), "log2 of non-positive value");
    // Split into numerator/denominator logs so huge integers stay in range.
    let bits = |x: &BigInt| -> f64 {
        let digits = x.to_string().len() as f64;
        match x.to_f64() {
            Some(v) if v.is_finite() && v > 0.0 => v.log2(),
            _ => digits * std::f64::consts::LOG2_10,
        }
    };
    bits(r.numer()) - bits(r.denom())
}

/// Floor of a rational as a BigInt.
pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "1/2", "-5/8", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        // Normalization: non-reduced input formats reduced.
        assert_eq!(fmt_rat(&parse_rat("4/8").unwrap()), "1/2");
        assert_eq!(fmt_rat(&parse_rat("8/4").unwrap()), "2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "/", "1/", "/2", "1/0", "1.5", "2/-4", "1 /2", "a"] {
            assert!(parse_rat(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn pow2_covers_both_signs() {
        assert_eq!(pow2(0), rat(1));
        assert_eq!(pow2(5), rat(32));
        assert_eq!(pow2(-2), ratio(1, 4));
    }

    #[test]
    fn floor_matches_integer_division() {
        assert_eq!(floor_int(&ratio(7, 2)), BigInt::from(3));
        assert_eq!(floor_int(&ratio(-7, 2)), BigInt::from(-4));
        assert_eq!(floor_int(&rat(4)), BigInt::from(4));
    }

    #[test]
    fn log2_is_close_for_small_values() {
        assert!((log2_approx(&rat(8)) - 3.0).abs() < 1e-9);
        assert!((log2_approx(&ratio(1, 4)) + 2.0).abs() < 1e-9);
    }
}
