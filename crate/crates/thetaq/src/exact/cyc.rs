//! Exact arithmetic in the cyclotomic field Q(zeta_M).
//!
//! Elements are kept canonical on the power basis 1, zeta, ..., zeta^(phi-1)
//! where phi = deg Phi_M, reduced eagerly modulo the cyclotomic polynomial.
//! Equality is therefore plain coefficient-vector equality. The default
//! engine order M = 240 = lcm(16, 12, 20, 8) covers every phase and square
//! root the identity suite touches: sqrt2 = zeta8 + zeta8^-1,
//! sqrt3 = zeta12 + zeta12^-1, sqrt5 = 1 + 2*zeta5 + 2*zeta5^4, i = zeta4.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{cyclotomic_poly, poly_deg, poly_ext_gcd, poly_trim};
use super::rat::{rint, Rat};
use crate::error::{Error, Result};

/// An interned cyclotomic field of fixed order. Obtain one with
/// [`CycField::of`]; the returned reference is `'static`, so elements are
/// cheap to move across threads.
pub struct CycField {
    order: u32,
    phi: usize,
    /// reduction[j] = the canonical form of x^(phi + j), dense of length phi.
    reduction: Vec<Vec<Rat>>,
    /// Memoized square roots, keyed by radicand. Guarded: concurrent reads
    /// are safe, first computation wins.
    sqrts: Mutex<HashMap<i64, Cyc>>,
}

static FIELDS: OnceLock<Mutex<HashMap<u32, &'static CycField>>> = OnceLock::new();

impl CycField {
    /// The interned field of the given order. Orders are leaked once per
    /// process; repeated calls return the same reference.
    pub fn of(order: u32) -> Result<&'static CycField> {
        if order == 0 {
            return Err(Error::Domain("field order must be positive".into()));
        }
        let mut map = FIELDS
            .get_or_init(|| Mutex::new(HashMap::new()))
            .lock()
            .expect("field registry poisoned");
        if let Some(f) = map.get(&order) {
            return Ok(f);
        }
        let field: &'static CycField = Box::leak(Box::new(CycField::build(order)));
        map.insert(order, field);
        Ok(field)
    }

    fn build(order: u32) -> CycField {
        let phi_poly = cyclotomic_poly(order);
        let phi = poly_deg(&phi_poly).expect("cyclotomic polynomial is nonzero");
        // Rows for x^(phi+j): enough to reduce any power below max(2*phi-1, M).
        let rows = (2 * phi - 1).max(order as usize) - phi;
        let mut reduction: Vec<Vec<Rat>> = Vec::with_capacity(rows);
        // x^phi = -(lower coefficients) since Phi is monic.
        let base: Vec<Rat> = phi_poly[..phi].iter().map(|c| -c).collect();
        reduction.push(base);
        for j in 1..rows {
            let prev = &reduction[j - 1];
            // Multiply by x, then fold the overflow at degree phi.
            let overflow = prev[phi - 1].clone();
            let mut next = vec![Rat::zero(); phi];
            for k in 1..phi {
                next[k] = prev[k - 1].clone();
            }
            if !overflow.is_zero() {
                let first = &reduction[0];
                for k in 0..phi {
                    if !first[k].is_zero() {
                        next[k] += &overflow * &first[k];
                    }
                }
            }
            reduction.push(next);
        }
        CycField {
            order,
            phi,
            reduction,
            sqrts: Mutex::new(HashMap::new()),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(&'static self) -> Cyc {
        Cyc { field: self, terms: Vec::new() }
    }

    pub fn one(&'static self) -> Cyc {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&'static self, r: Rat) -> Cyc {
        if r.is_zero() {
            self.zero()
        } else {
            Cyc { field: self, terms: vec![(0, r)] }
        }
    }

    pub fn from_int(&'static self, n: i64) -> Cyc {
        self.from_rat(rint(n))
    }

    /// zeta_m^k as an element of this field. Requires m to divide the field
    /// order; k may be any integer and is reduced modulo m.
    pub fn root_of_unity(&'static self, m: u32, k: i64) -> Result<Cyc> {
        if m == 0 || self.order % m != 0 {
            return Err(Error::OrderMismatch { requested: m, field: self.order });
        }
        let k = k.rem_euclid(m as i64) as u32;
        let power = k as usize * (self.order / m) as usize;
        let mut dense = vec![Rat::zero(); power + 1];
        dense[power] = Rat::one();
        Ok(self.reduce_dense(dense))
    }

    /// exp(pi i r) for rational r: with r = p/s in lowest terms this is
    /// zeta_(2s)^p, which must embed in the field.
    pub fn exp_pi_i(&'static self, r: &Rat) -> Result<Cyc> {
        let p = r.numer();
        let s = r.denom();
        let two_s = s * num_bigint::BigInt::from(2);
        let m = u32::try_from(two_s.clone())
            .map_err(|_| Error::Embedding(format!("phase denominator {s} too large")))?;
        if self.order % m != 0 {
            return Err(Error::Embedding(format!(
                "exp(pi i {p}/{s}) needs order divisible by {m}, have {}",
                self.order
            )));
        }
        let k = i64::try_from(p % two_s).expect("reduced phase numerator fits i64");
        self.root_of_unity(m, k)
    }

    /// Exact square root of 2, 3 or 5, embedded via specific roots of unity
    /// and pinned to the positive branch. The first construction for each
    /// radicand verifies positivity through a floating evaluation at
    /// zeta_M = e^(2 pi i / M); the result is memoized.
    pub fn sqrt_int(&'static self, n: i64) -> Result<Cyc> {
        if ![2, 3, 5].contains(&n) {
            return Err(Error::UnsupportedRadicand(n));
        }
        if let Some(c) = self.sqrts.lock().expect("sqrt memo poisoned").get(&n) {
            return Ok(c.clone());
        }
        let value = match n {
            2 => self.root_of_unity(8, 1)?.add(&self.root_of_unity(8, -1)?),
            3 => self.root_of_unity(12, 1)?.add(&self.root_of_unity(12, -1)?),
            5 => {
                let z5 = self.root_of_unity(5, 1)?;
                let z5_4 = self.root_of_unity(5, 4)?;
                self.one()
                    .add(&z5.mul_rat(&rint(2)))
                    .add(&z5_4.mul_rat(&rint(2)))
            }
            _ => unreachable!(),
        };
        let (re, im) = value.eval_f64();
        let target = (n as f64).sqrt();
        if (re - target).abs() > 1e-9 || im.abs() > 1e-9 {
            return Err(Error::Embedding(format!(
                "sqrt({n}) embedding check failed: got {re} + {im}i, want {target}"
            )));
        }
        self.sqrts
            .lock()
            .expect("sqrt memo poisoned")
            .entry(n)
            .or_insert_with(|| value.clone());
        Ok(value)
    }

    /// i as an element of the field (zeta_4).
    pub fn imag_unit(&'static self) -> Result<Cyc> {
        self.root_of_unity(4, 1)
    }

    fn reduce_dense(&'static self, mut dense: Vec<Rat>) -> Cyc {
        poly_trim(&mut dense);
        while dense.len() > self.phi {
            let top = dense.len() - 1;
            let c = dense.pop().expect("nonempty");
            if !c.is_zero() {
                let row = &self.reduction[top - self.phi];
                for (k, rk) in row.iter().enumerate() {
                    if !rk.is_zero() {
                        dense[k] += &c * rk;
                    }
                }
            }
            poly_trim(&mut dense);
        }
        let terms = dense
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (p as u16, c))
            .collect();
        Cyc { field: self, terms }
    }
}

impl std::fmt::Debug for CycField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CycField(order={}, degree={})", self.order, self.phi)
    }
}

/// A canonical element of the interned field it points at.
#[derive(Clone)]
pub struct Cyc {
    field: &'static CycField,
    /// Sparse, sorted by power, no zero coefficients, powers below phi.
    terms: Vec<(u16, Rat)>,
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.terms == other.terms
    }
}

impl Eq for Cyc {}

impl Cyc {
    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Some(r) when the element lies in Q.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    fn same_field(&self, other: &Cyc) {
        assert!(
            std::ptr::eq(self.field, other.field),
            "mixing elements of different cyclotomic fields ({} vs {})",
            self.field.order,
            other.field.order
        );
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        self.same_field(other);
        let mut out: Vec<(u16, Rat)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let pick_left = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => {
                    if a.0 == b.0 {
                        let c = &a.1 + &b.1;
                        if !c.is_zero() {
                            out.push((a.0, c));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    a.0 < b.0
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_left {
                out.push(self.terms[i].clone());
                i += 1;
            } else {
                out.push(other.terms[j].clone());
                j += 1;
            }
        }
        Cyc { field: self.field, terms: out }
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            field: self.field,
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        self.same_field(other);
        if self.is_zero() || other.is_zero() {
            return self.field.zero();
        }
        // Fast path: scaling by a rational.
        if let Some(r) = self.as_rat() {
            return other.mul_rat(&r);
        }
        if let Some(r) = other.as_rat() {
            return self.mul_rat(&r);
        }
        let phi = self.field.phi;
        let mut dense = vec![Rat::zero(); 2 * phi - 1];
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                dense[*pa as usize + *pb as usize] += ca * cb;
            }
        }
        self.field.reduce_dense(dense)
    }

    pub fn mul_rat(&self, r: &Rat) -> Cyc {
        if r.is_zero() {
            return self.field.zero();
        }
        Cyc {
            field: self.field,
            terms: self.terms.iter().map(|(p, c)| (*p, c * r)).collect(),
        }
    }

    /// Multiplicative inverse via extended gcd against Phi_M.
    pub fn inv(&self) -> Result<Cyc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rat() {
            return Ok(self.field.from_rat(r.recip()));
        }
        let mut elem = vec![Rat::zero(); self.field.phi];
        for (p, c) in &self.terms {
            elem[*p as usize] = c.clone();
        }
        poly_trim(&mut elem);
        let phi_poly = cyclotomic_poly(self.field.order);
        let (g, s, _) = poly_ext_gcd(&elem, &phi_poly);
        // Phi_M is irreducible over Q, so the gcd with a nonzero element of
        // smaller degree is a nonzero constant.
        assert_eq!(poly_deg(&g), Some(0), "cyclotomic polynomial must be coprime to the element");
        let scale = g[0].clone().recip();
        let coeffs: Vec<Rat> = s.iter().map(|c| c * &scale).collect();
        Ok(self.field.reduce_dense(coeffs))
    }

    /// Galois conjugation zeta -> zeta^-1 (complex conjugation on the
    /// standard embedding). Used to compute |c|^2 exactly.
    pub fn conj(&self) -> Cyc {
        let m = self.field.order as usize;
        let mut dense = vec![Rat::zero(); m];
        for (p, c) in &self.terms {
            let q = (m - *p as usize) % m;
            dense[q] += c;
        }
        self.field.reduce_dense(dense)
    }

    /// Small nonnegative power.
    pub fn pow(&self, n: u32) -> Cyc {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Floating evaluation at zeta_M = e^(2 pi i / M); only used for the
    /// one-time square-root branch checks and never for arithmetic.
    pub fn eval_f64(&self) -> (f64, f64) {
        let m = self.field.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (p, c) in &self.terms {
            let x = c.to_f64().expect("coefficient fits f64");
            let ang = TAU * (*p as f64) / m;
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }

    /// Text form: a rational when possible, else a polynomial in
    /// `zeta<M>` on the power basis, lowest power first.
    pub fn render(&self) -> String {
        if let Some(r) = self.as_rat() {
            return super::rat::format_rat(&r);
        }
        let m = self.field.order;
        let mut out = String::new();
        for (idx, (p, c)) in self.terms.iter().enumerate() {
            let mono = if *p == 0 {
                String::new()
            } else if *p == 1 {
                format!("zeta{m}")
            } else {
                format!("zeta{m}^{p}")
            };
            let abs = c.abs();
            let abs_str = super::rat::format_rat(&abs);
            let body = if mono.is_empty() {
                abs_str
            } else if abs.is_one() {
                mono
            } else {
                format!("{abs_str}*{mono}")
            };
            if idx == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        out
    }
}

impl std::fmt::Debug for Cyc {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cyc({})", self.render())
    }
}
