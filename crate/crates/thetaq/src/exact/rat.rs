//! Exact rational scalars plus parsing and formatting helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Exact rational number. Exponents, characteristics and coefficient parts
/// are all `Rat`; nothing in the crate ever rounds.
pub type Rat = BigRational;

/// `rat(p, q)` is the fraction p/q in lowest terms. Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Integer as a rational.
pub fn rint(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Parse `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Domain(format!("invalid rational: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from(p))
        }
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Minimal text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Always `"p/q"`, including a denominator of 1. The JSON interfaces use
/// this form so exponents stay exact and uniform.
pub fn format_rat_frac(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Floor of a rational as an i64. Helper for summation bounds.
pub fn rat_floor_i64(r: &Rat) -> i64 {
    let f = r.floor();
    let n = f.numer();
    i64::try_from(n.clone()).unwrap_or_else(|_| {
        panic!("rational floor out of i64 range: {n}")
    })
}

/// Is this rational an integer?
pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Absolute value.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "1/8", "-53/24", "240"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(format_rat(&parse_rat("6/4").unwrap()), "3/2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn frac_form_always_has_denominator() {
        assert_eq!(format_rat_frac(&rint(30)), "30/1");
        assert_eq!(format_rat_frac(&rat(49, 1)), "49/1");
        assert_eq!(format_rat_frac(&rat(1, 8)), "1/8");
    }

    #[test]
    fn floor_helper() {
        assert_eq!(rat_floor_i64(&rat(7, 2)), 3);
        assert_eq!(rat_floor_i64(&rat(-7, 2)), -4);
        assert_eq!(rat_floor_i64(&rint(5)), 5);
    }
}
