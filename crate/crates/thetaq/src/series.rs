//! Truncated Puiseux series in q over the cyclotomic field, with an
//! explicit integer grade tracking powers of pi.
//!
//! A [`PiSeries`] represents pi^grade * (sum of c_e * q^e) + O(q^trunc):
//! the term map holds every determined coefficient with exponent strictly
//! below `trunc` and nothing else. Every operation shrinks `trunc` exactly
//! as far as its inputs force; no coefficient is ever claimed beyond what
//! the inputs determine. Exponents are exact rationals.
//!
//! A [`ZJet`] is a finite jet c_0 + c_1 z + ... + c_K z^K of such series,
//! used for expansions of theta functions around z = 0.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rat::{format_rat, format_rat_frac, Rat};
use crate::exact::{Cyc, CycField};

#[derive(Clone)]
pub struct PiSeries {
    field: &'static CycField,
    grade: i32,
    trunc: Rat,
    terms: BTreeMap<Rat, Cyc>,
}

/// Serialized view of a series, with exponents as exact fraction strings.
#[derive(Debug, Serialize)]
pub struct SeriesView {
    pub grade: i32,
    pub trunc: String,
    pub terms: Vec<TermView>,
}

#[derive(Debug, Serialize)]
pub struct TermView {
    pub exponent: String,
    pub coefficient: String,
}

fn insert_add(map: &mut BTreeMap<Rat, Cyc>, e: Rat, c: Cyc) {
    if c.is_zero() {
        return;
    }
    match map.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().add(&c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Least common multiple of the exponent denominators, when it and every
/// scaled exponent fit comfortably in i128.
fn lattice_scale<'a>(exps: impl Iterator<Item = &'a Rat>) -> Option<i128> {
    let mut l: i128 = 1;
    for e in exps {
        let d = e.denom().to_i128()?;
        l = l.checked_mul(d / l.gcd(&d))?;
        if l > 1 << 40 {
            return None;
        }
    }
    Some(l)
}

fn scaled(e: &Rat, l: i128) -> Option<i128> {
    let n = e.numer().to_i128()?;
    let d = e.denom().to_i128()?;
    n.checked_mul(l / d)
}

impl PiSeries {
    pub fn zero(field: &'static CycField, trunc: Rat) -> PiSeries {
        PiSeries { field, grade: 0, trunc, terms: BTreeMap::new() }
    }

    pub fn one(field: &'static CycField, trunc: Rat) -> PiSeries {
        let mut terms = BTreeMap::new();
        if trunc.is_positive() {
            terms.insert(Rat::zero(), field.one());
        }
        PiSeries { field, grade: 0, trunc, terms }
    }

    /// Build from explicit terms, dropping zeros and anything at or above
    /// the truncation order.
    pub fn from_terms(
        field: &'static CycField,
        grade: i32,
        trunc: Rat,
        terms: impl IntoIterator<Item = (Rat, Cyc)>,
    ) -> PiSeries {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e < trunc {
                insert_add(&mut map, e, c);
            }
        }
        PiSeries { field, grade, trunc, terms: map }
    }

    pub fn monomial(field: &'static CycField, grade: i32, trunc: Rat, e: Rat, c: Cyc) -> PiSeries {
        Self::from_terms(field, grade, trunc, [(e, c)])
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn grade(&self) -> i32 {
        self.grade
    }

    pub fn trunc(&self) -> &Rat {
        &self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn low_exp(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    /// The lowest-order nonzero term, if any.
    pub fn witness(&self) -> Option<(&Rat, &Cyc)> {
        self.terms.iter().next()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &Cyc)> {
        self.terms.iter()
    }

    /// Coefficient of q^e. Only meaningful below the truncation order.
    pub fn coeff(&self, e: &Rat) -> Cyc {
        debug_assert!(*e < self.trunc, "coefficient at q^{e} is not determined");
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    fn low_or_trunc(&self) -> Rat {
        self.low_exp().cloned().unwrap_or_else(|| self.trunc.clone())
    }

    /// The zero series is grade-polymorphic: addition insists on equal
    /// grades only when both sides have terms.
    pub fn add(&self, other: &PiSeries) -> Result<PiSeries> {
        assert!(std::ptr::eq(self.field, other.field), "mixing coefficient fields");
        if !self.is_zero() && !other.is_zero() && self.grade != other.grade {
            return Err(Error::GradeMismatch { left: self.grade, right: other.grade });
        }
        let grade = if self.is_zero() { other.grade } else { self.grade };
        let trunc = self.trunc.clone().min(other.trunc.clone());
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if *e < trunc {
                insert_add(&mut terms, e.clone(), c.clone());
            }
        }
        Ok(PiSeries { field: self.field, grade, trunc, terms })
    }

    pub fn neg(&self) -> PiSeries {
        PiSeries {
            field: self.field,
            grade: self.grade,
            trunc: self.trunc.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &PiSeries) -> Result<PiSeries> {
        self.add(&other.neg())
    }

    /// Product. The truncation order is the tightest bound the factors
    /// support: min(trunc_a + low_b, trunc_b + low_a), an empty factor
    /// standing in with its own truncation order.
    pub fn mul(&self, other: &PiSeries) -> PiSeries {
        assert!(std::ptr::eq(self.field, other.field), "mixing coefficient fields");
        let la = self.low_or_trunc();
        let lb = other.low_or_trunc();
        let trunc = (&self.trunc + &lb).min(&other.trunc + &la);
        let grade = self.grade + other.grade;
        if self.is_zero() || other.is_zero() {
            return PiSeries { field: self.field, grade, trunc, terms: BTreeMap::new() };
        }
        let terms = self
            .mul_terms_scaled(other, &trunc)
            .unwrap_or_else(|| self.mul_terms_rat(other, &trunc));
        PiSeries { field: self.field, grade, trunc, terms }
    }

    /// Convolution on a common integer exponent lattice.
    fn mul_terms_scaled(&self, other: &PiSeries, trunc: &Rat) -> Option<BTreeMap<Rat, Cyc>> {
        let l = lattice_scale(
            self.terms
                .keys()
                .chain(other.terms.keys())
                .chain(std::iter::once(trunc)),
        )?;
        let ta: Vec<(i128, &Cyc)> = self
            .terms
            .iter()
            .map(|(e, c)| Some((scaled(e, l)?, c)))
            .collect::<Option<_>>()?;
        let tb: Vec<(i128, &Cyc)> = other
            .terms
            .iter()
            .map(|(e, c)| Some((scaled(e, l)?, c)))
            .collect::<Option<_>>()?;
        let bound = scaled(trunc, l)?;
        let lb = tb.first().map(|(e, _)| *e).unwrap_or(bound);
        let mut acc: BTreeMap<i128, Cyc> = BTreeMap::new();
        for (ea, ca) in &ta {
            if ea.checked_add(lb)? >= bound {
                break;
            }
            for (eb, cb) in &tb {
                let e = ea.checked_add(*eb)?;
                if e >= bound {
                    break;
                }
                let p = ca.mul(cb);
                if p.is_zero() {
                    continue;
                }
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = o.get().add(&p);
                        if s.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
        }
        Some(
            acc.into_iter()
                .map(|(e, c)| (Rat::new(BigInt::from(e), BigInt::from(l)), c))
                .collect(),
        )
    }

    fn mul_terms_rat(&self, other: &PiSeries, trunc: &Rat) -> BTreeMap<Rat, Cyc> {
        let mut acc = BTreeMap::new();
        let lb = other.low_or_trunc();
        for (ea, ca) in &self.terms {
            if ea + &lb >= *trunc {
                break;
            }
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if e >= *trunc {
                    break;
                }
                insert_add(&mut acc, e, ca.mul(cb));
            }
        }
        acc
    }

    /// Multiply by the exact binomial 1 + c * q^e with e >= 0. Being exact,
    /// the factor does not move the truncation order.
    pub fn mul_binomial(&self, e: &Rat, c: &Cyc) -> PiSeries {
        debug_assert!(!e.is_negative(), "binomial exponent must be nonnegative");
        let mut terms = self.terms.clone();
        for (ex, cx) in &self.terms {
            let t = ex + e;
            if t < self.trunc {
                insert_add(&mut terms, t, cx.mul(c));
            }
        }
        PiSeries {
            field: self.field,
            grade: self.grade,
            trunc: self.trunc.clone(),
            terms,
        }
    }

    /// Multiply by the exact monomial c * q^e; exponents and the truncation
    /// order both shift by e.
    pub fn mul_monomial(&self, e: &Rat, c: &Cyc) -> PiSeries {
        if c.is_zero() {
            // An exact zero annihilates everything.
            return PiSeries {
                field: self.field,
                grade: self.grade,
                trunc: &self.trunc + e,
                terms: BTreeMap::new(),
            };
        }
        PiSeries {
            field: self.field,
            grade: self.grade,
            trunc: &self.trunc + e,
            terms: self
                .terms
                .iter()
                .map(|(ex, cx)| (ex + e, cx.mul(c)))
                .filter(|(_, cx)| !cx.is_zero())
                .collect(),
        }
    }

    pub fn mul_cyc(&self, c: &Cyc) -> PiSeries {
        self.mul_monomial(&Rat::zero(), c)
    }

    pub fn mul_rat(&self, r: &Rat) -> PiSeries {
        self.mul_cyc(&self.field.from_rat(r.clone()))
    }

    pub fn mul_int(&self, n: i64) -> PiSeries {
        self.mul_cyc(&self.field.from_int(n))
    }

    /// Shift the pi-grade; dividing by pi is a grade decrement.
    pub fn mul_pi_pow(&self, k: i32) -> PiSeries {
        let mut s = self.clone();
        s.grade += k;
        s
    }

    /// Multiplicative inverse. The leading monomial c * q^l is factored out
    /// and the remaining 1 + h is inverted by propagating corrections in
    /// increasing exponent order. Result truncation: trunc - 2l.
    pub fn inv(&self) -> Result<PiSeries> {
        let (l, lead) = match self.terms.iter().next() {
            Some((l, c)) => (l.clone(), c.clone()),
            None => return Err(Error::NonInvertibleLeading),
        };
        let lead_inv = lead.inv()?;
        let bound = &self.trunc - &l;
        // h = self / (lead * q^l) - 1, exponents strictly positive.
        let h: Vec<(Rat, Cyc)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(e, c)| (e - &l, c.mul(&lead_inv)))
            .collect();
        let mut pending: BTreeMap<Rat, Cyc> = BTreeMap::new();
        pending.insert(Rat::zero(), self.field.one());
        let mut out: BTreeMap<Rat, Cyc> = BTreeMap::new();
        while let Some((e, v)) = pending.pop_first() {
            if e >= bound {
                break;
            }
            if v.is_zero() {
                continue;
            }
            for (f, hc) in &h {
                let t = &e + f;
                if t < bound {
                    insert_add(&mut pending, t, hc.mul(&v).neg());
                }
            }
            out.insert(e, v);
        }
        let trunc = &self.trunc - &l - &l;
        Ok(PiSeries {
            field: self.field,
            grade: -self.grade,
            trunc,
            terms: out
                .into_iter()
                .map(|(e, c)| (e - &l, c.mul(&lead_inv)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        })
    }

    /// Integer power by repeated squaring; negative powers go through the
    /// inverse, and a^0 is 1 at the base truncation order.
    pub fn pow(&self, n: i64) -> Result<PiSeries> {
        if n == 0 {
            return Ok(PiSeries::one(self.field, self.trunc.clone()));
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc: Option<PiSeries> = None;
        let mut sq = base;
        loop {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(acc.expect("n != 0"))
    }

    /// The Euler operator q d/dq: c * q^e maps to e * c * q^e.
    pub fn q_ddq(&self) -> PiSeries {
        PiSeries {
            field: self.field,
            grade: self.grade,
            trunc: self.trunc.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.mul_rat(e)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Substitute q -> q^k.
    pub fn scale_q(&self, k: u32) -> PiSeries {
        assert!(k >= 1, "scale factor must be positive");
        let kr = Rat::from_integer(BigInt::from(k));
        PiSeries {
            field: self.field,
            grade: self.grade,
            trunc: &self.trunc * &kr,
            terms: self.terms.iter().map(|(e, c)| (e * &kr, c.clone())).collect(),
        }
    }

    /// Forget coefficients at or above `to` and tighten the bound.
    pub fn truncate(&self, to: &Rat) -> PiSeries {
        if *to >= self.trunc {
            return self.clone();
        }
        PiSeries {
            field: self.field,
            grade: self.grade,
            trunc: to.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| *e < to)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn view(&self) -> SeriesView {
        SeriesView {
            grade: self.grade,
            trunc: format_rat_frac(&self.trunc),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermView {
                    exponent: format_rat_frac(e),
                    coefficient: c.render(),
                })
                .collect(),
        }
    }

    /// Text form: `pi^g * ( ... )` around a sum of `c * q^e` terms.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut body = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = split_sign(c);
            if idx == 0 {
                if neg {
                    body.push('-');
                }
            } else if neg {
                body.push_str(" - ");
            } else {
                body.push_str(" + ");
            }
            body.push_str(&term_str(e, &mag));
        }
        match self.grade {
            0 => body,
            1 => format!("pi * ( {body} )"),
            g => format!("pi^{g} * ( {body} )"),
        }
    }
}

/// Pull a displayable sign out of a coefficient: rationals and single
/// basis monomials carry their sign, denser elements render as-is.
fn split_sign(c: &Cyc) -> (bool, Cyc) {
    if let Some(r) = c.as_rat() {
        if r.is_negative() {
            return (true, c.neg());
        }
        return (false, c.clone());
    }
    let negated = c.neg();
    if negated.render().len() < c.render().len() {
        // A single monomial with negative coefficient renders shorter once
        // the sign is pulled out front.
        return (true, negated);
    }
    (false, c.clone())
}

fn term_str(e: &Rat, mag: &Cyc) -> String {
    let qpart = if e.is_zero() {
        None
    } else if e.is_one() {
        Some("q".to_string())
    } else if e.is_integer() && e.is_positive() {
        Some(format!("q^{e}"))
    } else {
        Some(format!("q^({})", format_rat(e)))
    };
    let coeff = if mag.is_one() && qpart.is_some() {
        None
    } else {
        let r = mag.render();
        // Multi-term coefficients render with spaces and need parentheses.
        Some(if r.contains(' ') { format!("({r})") } else { r })
    };
    match (coeff, qpart) {
        (Some(c), Some(q)) => format!("{c} * {q}"),
        (Some(c), None) => c,
        (None, Some(q)) => q,
        (None, None) => "1".to_string(),
    }
}

/// A jet c_0 + c_1 z + ... + c_K z^K of series in q. Operations insist on
/// matching jet orders.
#[derive(Clone)]
pub struct ZJet {
    coeffs: Vec<PiSeries>,
}

impl ZJet {
    pub fn new(coeffs: Vec<PiSeries>) -> ZJet {
        assert!(!coeffs.is_empty(), "a jet has at least its constant term");
        ZJet { coeffs }
    }

    /// Embed a plain series as a constant jet of the given order.
    pub fn from_const(s: &PiSeries, order: usize) -> ZJet {
        let mut coeffs = vec![s.clone()];
        for _ in 0..order {
            coeffs.push(PiSeries::zero(s.field(), s.trunc().clone()));
        }
        ZJet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &PiSeries {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[PiSeries] {
        &self.coeffs
    }

    pub fn add(&self, other: &ZJet) -> Result<ZJet> {
        if self.order() != other.order() {
            return Err(Error::JetOrderMismatch { left: self.order(), right: other.order() });
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(ZJet { coeffs })
    }

    pub fn neg(&self) -> ZJet {
        ZJet { coeffs: self.coeffs.iter().map(PiSeries::neg).collect() }
    }

    pub fn sub(&self, other: &ZJet) -> Result<ZJet> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ZJet) -> Result<ZJet> {
        if self.order() != other.order() {
            return Err(Error::JetOrderMismatch { left: self.order(), right: other.order() });
        }
        let k_max = self.order();
        let mut coeffs = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let mut acc: Option<PiSeries> = None;
            for i in 0..=k {
                let p = self.coeffs[i].mul(&other.coeffs[k - i]);
                acc = Some(match acc {
                    None => p,
                    Some(a) => a.add(&p)?,
                });
            }
            coeffs.push(acc.expect("k+1 summands"));
        }
        Ok(ZJet { coeffs })
    }

    /// Multiply every coefficient by a plain series.
    pub fn scale(&self, s: &PiSeries) -> ZJet {
        ZJet { coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect() }
    }

    pub fn mul_cyc(&self, c: &Cyc) -> ZJet {
        ZJet { coeffs: self.coeffs.iter().map(|x| x.mul_cyc(c)).collect() }
    }

    /// z -> -z: flip the sign of every odd coefficient.
    pub fn negate_z(&self) -> ZJet {
        ZJet {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() })
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(PiSeries::is_zero)
    }

    /// First nonzero term in z-major order: (z-power, exponent, coefficient).
    pub fn witness(&self) -> Option<(usize, Rat, Cyc)> {
        self.coeffs.iter().enumerate().find_map(|(k, c)| {
            c.witness().map(|(e, v)| (k, e.clone(), v.clone()))
        })
    }

    /// Tightest truncation order among the coefficients.
    pub fn min_trunc(&self) -> Rat {
        self.coeffs
            .iter()
            .map(|c| c.trunc().clone())
            .min()
            .expect("nonempty jet")
    }
}
