//! Dedekind eta, Pochhammer products (q^k; q^k)_inf, eta quotients,
//! Eisenstein series, divisor sums, the quadratic character mod 8, and the
//! brute-force four-triangular-numbers counter.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::rat::{rat, Rat};
use crate::exact::CycField;
use crate::series::PiSeries;

/// (q^k; q^k)_inf^r = prod over n >= 1 of (1 - q^(kn))^r, expanded to
/// trunc. Negative powers go through the series inverse; the unit leading
/// term keeps the truncation order intact either way.
pub fn pochhammer(field: &'static CycField, k: u32, r: i64, trunc: &Rat) -> Result<PiSeries> {
    assert!(k >= 1, "pochhammer scale must be positive");
    let minus_one = field.from_int(-1);
    let mut acc = PiSeries::one(field, trunc.clone());
    let mut n: i64 = 1;
    loop {
        let e = rat(k as i64 * n, 1);
        if e >= *trunc {
            break;
        }
        acc = acc.mul_binomial(&e, &minus_one);
        n += 1;
    }
    if r == 1 {
        Ok(acc)
    } else {
        acc.pow(r)
    }
}

/// A product prod_k eta(k*tau)^(r_k) with distinct positive scales and
/// nonzero integer exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    factors: Vec<(u32, i64)>,
}

impl EtaQuotient {
    pub fn new(factors: Vec<(u32, i64)>) -> Result<EtaQuotient> {
        if factors.is_empty() {
            return Err(Error::Domain("eta quotient needs at least one factor".into()));
        }
        for (i, (k, r)) in factors.iter().enumerate() {
            if *k == 0 {
                return Err(Error::Domain("eta quotient scales must be positive".into()));
            }
            if *r == 0 {
                return Err(Error::Domain(format!("eta quotient exponent for scale {k} is zero")));
            }
            if factors[..i].iter().any(|(k2, _)| k2 == k) {
                return Err(Error::Domain(format!("eta quotient repeats scale {k}")));
            }
        }
        Ok(EtaQuotient { factors })
    }

    /// Grammar: comma-separated `k` or `k^r` factors, e.g. `2^3,1^-2,4^-1`
    /// for eta(2t)^3 / (eta(t)^2 eta(4t)).
    pub fn parse(text: &str) -> Result<EtaQuotient> {
        let mut factors = Vec::new();
        for piece in text.split(',') {
            let piece = piece.trim();
            let (k_str, r_str) = match piece.split_once('^') {
                Some((k, r)) => (k, r),
                None => (piece, "1"),
            };
            let k: u32 = k_str
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad eta scale {k_str:?} in {text:?}")))?;
            let r: i64 = r_str
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad eta exponent {r_str:?} in {text:?}")))?;
            factors.push((k, r));
        }
        EtaQuotient::new(factors)
    }

    pub fn factors(&self) -> &[(u32, i64)] {
        &self.factors
    }

    /// The exact leading exponent sum(k * r_k) / 24, integral or not.
    pub fn leading_exponent(&self) -> Rat {
        self.factors
            .iter()
            .map(|(k, r)| rat(*k as i64 * *r, 24))
            .fold(Rat::zero(), |a, b| a + b)
    }
}

/// Expand the quotient as a q-series: q^(sum k r/24) times the Pochhammer
/// products. Exponents below trunc are exact.
pub fn eta_series(field: &'static CycField, quot: &EtaQuotient, trunc: &Rat) -> Result<PiSeries> {
    let lead = quot.leading_exponent();
    let bound = trunc - &lead;
    let mut acc = PiSeries::one(field, bound.clone());
    for (k, r) in &quot.factors {
        acc = acc.mul(&pochhammer(field, *k, *r, &bound)?);
    }
    Ok(acc.mul_monomial(&lead, &field.one()))
}

/// sigma_k(n) = sum of d^k over positive divisors d of n.
pub fn sigma(k: u32, n: i64) -> Result<i128> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "divisor sums are defined for positive integers, got {n}"
        )));
    }
    let mut total: i128 = 0;
    let mut d: i64 = 1;
    while d * d <= n {
        if n % d == 0 {
            total += (d as i128).pow(k);
            let e = n / d;
            if e != d {
                total += (e as i128).pow(k);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// sum over d | n of f(d, n/d), exact in i128.
pub fn divisor_sum(n: i64, f: impl Fn(i64, i64) -> i128) -> Result<i128> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "divisor sums are defined for positive integers, got {n}"
        )));
    }
    let mut total: i128 = 0;
    let mut d: i64 = 1;
    while d * d <= n {
        if n % d == 0 {
            total += f(d, n / d);
            if d != n / d {
                total += f(n / d, d);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// The Kronecker symbol (8/m) for positive m: +1 for m = +-1 mod 8,
/// -1 for m = +-3 mod 8, 0 for even m.
pub fn kron8(m: i64) -> i64 {
    assert!(m >= 1, "kron8 takes positive arguments");
    if m % 2 == 0 {
        0
    } else {
        match m % 8 {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => unreachable!("odd residues mod 8"),
        }
    }
}

/// sum over d | n of d * (8/d).
pub fn kron8_twist(n: i64) -> Result<i128> {
    divisor_sum(n, |d, _| d as i128 * kron8(d) as i128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eisenstein {
    E2,
    E4,
    E6,
}

/// E_2 = 1 - 24 sum sigma_1(n) q^n, E_4 = 1 + 240 sum sigma_3(n) q^n,
/// E_6 = 1 - 504 sum sigma_5(n) q^n; grade 0, integer coefficients.
pub fn eisenstein(field: &'static CycField, which: Eisenstein, trunc: &Rat) -> Result<PiSeries> {
    let (c, k): (i128, u32) = match which {
        Eisenstein::E2 => (-24, 1),
        Eisenstein::E4 => (240, 3),
        Eisenstein::E6 => (-504, 5),
    };
    let mut terms = vec![(Rat::zero(), field.from_int(1))];
    let mut n: i64 = 1;
    while rat(n, 1) < *trunc {
        let v = c * sigma(k, n)?;
        terms.push((rat(n, 1), field.from_rat(Rat::from_integer(BigInt::from(v)))));
        n += 1;
    }
    Ok(PiSeries::from_terms(field, 0, trunc.clone(), terms))
}

/// Number of ordered quadruples of triangular numbers summing to n,
/// counted exhaustively.
pub fn t4_count(n: i64) -> i128 {
    assert!(n >= 0, "t4 counts representations of nonnegative integers");
    let tris: Vec<i64> = (0i64..)
        .map(|x| x * (x + 1) / 2)
        .take_while(|t| *t <= n)
        .collect();
    let mut count: i128 = 0;
    for a in &tris {
        for b in &tris {
            if a + b > n {
                break;
            }
            for c in &tris {
                let rest = n - a - b - c;
                if rest < 0 {
                    break;
                }
                if tris.binary_search(&rest).is_ok() {
                    count += 1;
                }
            }
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithKind {
    Sigma(u32),
    Kron8,
    T4,
}

/// A memoized integer-valued arithmetic function. Reads are safe from any
/// thread; the lock serializes memo writes.
pub struct ArithFn {
    kind: ArithKind,
    memo: Mutex<HashMap<i64, i128>>,
}

impl ArithFn {
    pub fn new(kind: ArithKind) -> ArithFn {
        ArithFn { kind, memo: Mutex::new(HashMap::new()) }
    }

    pub fn kind(&self) -> ArithKind {
        self.kind
    }

    pub fn eval(&self, n: i64) -> Result<i128> {
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(&n) {
            return Ok(*v);
        }
        let v = match self.kind {
            ArithKind::Sigma(k) => sigma(k, n)?,
            ArithKind::Kron8 => {
                if n < 1 {
                    return Err(Error::Domain(format!("kron8 takes positive arguments, got {n}")));
                }
                kron8(n) as i128
            }
            ArithKind::T4 => {
                if n < 0 {
                    return Err(Error::Domain(format!("t4 counts nonnegative targets, got {n}")));
                }
                t4_count(n)
            }
        };
        self.memo.lock().expect("memo poisoned").insert(n, v);
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rint;
    use crate::exact::CycField;

    fn f() -> &'static CycField {
        CycField::of(240).unwrap()
    }

    #[test]
    fn pentagonal_numbers_drive_the_single_pochhammer() {
        let p = pochhammer(f(), 1, 1, &rint(13)).unwrap();
        let expect: &[(i64, i64)] = &[(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)];
        assert_eq!(p.terms().count(), expect.len());
        for (e, c) in expect {
            assert_eq!(p.coeff(&rint(*e)), f().from_int(*c), "q^{e}");
        }
    }

    #[test]
    fn inverse_pochhammer_counts_partitions() {
        let p = pochhammer(f(), 1, -1, &rint(7)).unwrap();
        for (e, c) in [(0, 1i64), (1, 1), (2, 2), (3, 3), (4, 5), (5, 7), (6, 11)] {
            assert_eq!(p.coeff(&rint(e)), f().from_int(c), "p({e})");
        }
    }

    #[test]
    fn pochhammer_powers_compose() {
        let cubed = pochhammer(f(), 2, 3, &rint(15)).unwrap();
        let single = pochhammer(f(), 2, 1, &rint(15)).unwrap();
        let explicit = single.mul(&single).mul(&single);
        assert!(cubed.sub(&explicit).unwrap().is_zero());
    }

    #[test]
    fn cube_of_pochhammer_alternates_odd_squares() {
        // (q;q)^3 = sum (-1)^n (2n+1) q^(n(n+1)/2)
        let p = pochhammer(f(), 1, 3, &rint(11)).unwrap();
        for (e, c) in [(0, 1i64), (1, -3), (3, 5), (6, -7), (10, 9)] {
            assert_eq!(p.coeff(&rint(e)), f().from_int(c), "q^{e}");
        }
        assert_eq!(p.terms().count(), 5);
    }

    #[test]
    fn eta_carries_the_twenty_fourth_root() {
        let eta = eta_series(f(), &EtaQuotient::new(vec![(1, 1)]).unwrap(), &rint(6)).unwrap();
        assert_eq!(eta.coeff(&rat(1, 24)), f().from_int(1));
        assert_eq!(eta.coeff(&(rat(1, 24) + rint(1))), f().from_int(-1));
        assert_eq!(eta.coeff(&(rat(1, 24) + rint(2))), f().from_int(-1));
        assert_eq!(eta.coeff(&(rat(1, 24) + rint(5))), f().from_int(1));
    }

    #[test]
    fn eta_at_a_scaled_argument_is_a_substitution() {
        let base = eta_series(f(), &EtaQuotient::new(vec![(1, 1)]).unwrap(), &rint(5)).unwrap();
        let scaled = eta_series(f(), &EtaQuotient::new(vec![(3, 1)]).unwrap(), &rint(15)).unwrap();
        assert!(scaled.sub(&base.scale_q(3)).unwrap().is_zero());
    }

    #[test]
    fn balanced_quotient_starts_at_one() {
        // eta(2t)^3 / (eta(t)^2 eta(4t)): leading exponent (6-2-4)/24 = 0.
        let quot = EtaQuotient::parse("2^3,1^-2,4^-1").unwrap();
        assert_eq!(quot.leading_exponent(), Rat::zero());
        let s = eta_series(f(), &quot, &rint(6)).unwrap();
        assert_eq!(s.coeff(&Rat::zero()), f().from_int(1));
        assert_eq!(s.grade(), 0);
    }

    #[test]
    fn quotient_validation_rejects_nonsense() {
        assert!(EtaQuotient::parse("2,2").is_err());
        assert!(EtaQuotient::parse("3^0").is_err());
        assert!(EtaQuotient::parse("x").is_err());
        assert!(EtaQuotient::parse("").is_err());
        assert!(EtaQuotient::parse("0^2").is_err());
        assert!(EtaQuotient::parse("8^-2, 4^13, 1^-2, 2^-1").is_ok());
    }

    #[test]
    fn divisor_sums_match_hand_values() {
        assert_eq!(sigma(1, 1).unwrap(), 1);
        assert_eq!(sigma(1, 6).unwrap(), 12);
        assert_eq!(sigma(3, 2).unwrap(), 9);
        assert_eq!(sigma(0, 12).unwrap(), 6);
        assert!(sigma(1, 0).is_err());
        assert!(divisor_sum(-3, |_, _| 1).is_err());
    }

    #[test]
    fn eisenstein_expansions_match_frozen_values() {
        let e2 = eisenstein(f(), Eisenstein::E2, &rint(5)).unwrap();
        for (n, c) in [(0, 1i64), (1, -24), (2, -72), (3, -96), (4, -168)] {
            assert_eq!(e2.coeff(&rint(n)), f().from_int(c), "E2 q^{n}");
        }
        let e4 = eisenstein(f(), Eisenstein::E4, &rint(5)).unwrap();
        for (n, c) in [(0, 1i64), (1, 240), (2, 2160), (3, 6720), (4, 17520)] {
            assert_eq!(e4.coeff(&rint(n)), f().from_int(c), "E4 q^{n}");
        }
        let e6 = eisenstein(f(), Eisenstein::E6, &rint(5)).unwrap();
        for (n, c) in [(0, 1i64), (1, -504), (2, -16632), (3, -122976), (4, -532728)] {
            assert_eq!(e6.coeff(&rint(n)), f().from_int(c), "E6 q^{n}");
        }
    }

    #[test]
    fn character_mod_eight_table() {
        let expect = [
            (1, 1),
            (2, 0),
            (3, -1),
            (4, 0),
            (5, -1),
            (6, 0),
            (7, 1),
            (8, 0),
            (9, 1),
            (15, 1),
            (21, -1),
        ];
        for (m, v) in expect {
            assert_eq!(kron8(m), v, "(8/{m})");
        }
    }

    #[test]
    fn twisted_divisor_sum_spot_values() {
        // n = 3: 1*(8/1) + 3*(8/3) = 1 - 3 = -2.
        assert_eq!(kron8_twist(3).unwrap(), -2);
        assert_eq!(kron8_twist(1).unwrap(), 1);
        assert_eq!(kron8_twist(2).unwrap(), 1);
        // n = 9: 1 - 3 + 9 = 7.
        assert_eq!(kron8_twist(9).unwrap(), 7);
    }

    #[test]
    fn quadruple_counts_match_a_naive_scan() {
        fn naive(n: i64) -> i128 {
            let tri = |x: i64| x * (x + 1) / 2;
            let mut count = 0;
            for a in 0..=n {
                for b in 0..=n {
                    for c in 0..=n {
                        for d in 0..=n {
                            if tri(a) + tri(b) + tri(c) + tri(d) == n {
                                count += 1;
                            }
                        }
                    }
                }
            }
            count
        }
        assert_eq!(t4_count(0), 1);
        assert_eq!(t4_count(1), 4);
        assert_eq!(t4_count(5), 12);
        for n in 0..12 {
            assert_eq!(t4_count(n), naive(n), "t4({n})");
        }
    }

    #[test]
    fn memoized_functions_return_stable_values() {
        let t4 = ArithFn::new(ArithKind::T4);
        assert_eq!(t4.eval(5).unwrap(), 12);
        assert_eq!(t4.eval(5).unwrap(), 12);
        let s = ArithFn::new(ArithKind::Sigma(1));
        assert_eq!(s.eval(11).unwrap(), 12);
        assert!(s.eval(0).is_err());
        let k = ArithFn::new(ArithKind::Kron8);
        assert_eq!(k.eval(3).unwrap(), -1);
    }
}
