//! Dense polynomial helpers over Q, just enough for cyclotomic polynomials
//! and extended gcd against them. Coefficient vectors are little-endian;
//! the zero polynomial is the empty vector.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::rat::Rat;

pub(crate) fn poly_trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

pub(crate) fn poly_deg(v: &[Rat]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub(crate) fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    poly_trim(&mut out);
    out
}

/// Euclidean division: returns (quotient, remainder). `den` must be nonzero.
pub(crate) fn poly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let dd = poly_deg(den).expect("division by the zero polynomial");
    let lead = den[dd].clone();
    let mut rem: Vec<Rat> = num.to_vec();
    poly_trim(&mut rem);
    if poly_deg(&rem).map_or(true, |dn| dn < dd) {
        return (Vec::new(), rem);
    }
    let dn = rem.len() - 1;
    let mut quot = vec![Rat::zero(); dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let idx = dd + k;
        if rem.len() <= idx || rem[idx].is_zero() {
            continue;
        }
        let c = &rem[idx] / &lead;
        for (j, dj) in den.iter().enumerate() {
            if !dj.is_zero() {
                let t = &c * dj;
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    poly_trim(&mut rem);
    poly_trim(&mut quot);
    (quot, rem)
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g. Not normalized to a
/// monic g; callers divide by the constant they get.
pub(crate) fn poly_ext_gcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let mut r0: Vec<Rat> = a.to_vec();
    let mut r1: Vec<Rat> = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut s0 = vec![Rat::one()];
    let mut s1 = Vec::new();
    let mut t0 = Vec::new();
    let mut t1 = vec![Rat::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let next_s = poly_sub(&s0, &poly_mul(&q, &s1));
        let next_t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, next_s);
        t0 = std::mem::replace(&mut t1, next_t);
    }
    (r0, s0, t0)
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    poly_trim(&mut out);
    out
}

/// The m-th cyclotomic polynomial, computed by iterated exact division:
/// Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d.
pub fn cyclotomic_poly(m: u32) -> Vec<Rat> {
    fn go(m: u32, memo: &mut HashMap<u32, Vec<Rat>>) -> Vec<Rat> {
        if let Some(p) = memo.get(&m) {
            return p.clone();
        }
        let mut num = vec![Rat::zero(); m as usize + 1];
        num[0] = -Rat::one();
        num[m as usize] = Rat::one();
        let mut den = vec![Rat::one()];
        for d in 1..m {
            if m % d == 0 {
                den = poly_mul(&den, &go(d, memo));
            }
        }
        let (q, r) = poly_divrem(&num, &den);
        assert!(r.is_empty(), "x^{m} - 1 is divisible by its proper cyclotomic factors");
        memo.insert(m, q.clone());
        q
    }
    assert!(m >= 1, "cyclotomic order must be positive");
    go(m, &mut HashMap::new())
}
