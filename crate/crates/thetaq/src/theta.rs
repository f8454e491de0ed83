//! Theta functions with rational characteristics, expanded as jets around
//! z = 0.
//!
//! theta[eps, eps'](z, tau) = sum over n of
//!   exp(pi i (n + eps/2)^2 tau + 2 pi i (n + eps/2)(z + eps'/2)),
//! here evaluated at tau, 2*tau, ... via `tau_scale` and truncated in
//! q = exp(2 pi i tau). The z^k jet coefficient carries pi^k in the series
//! grade and (2i)^k / k! in the cyclotomic coefficient, which keeps every
//! identity between theta derivatives grade-homogeneous and exact.
//!
//! Characteristics are kept exactly as written, never reduced to a
//! fundamental domain; the integer shift law and the parity law are exposed
//! as tested properties instead.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rat::{rat, rat_floor_i64, Rat};
use crate::exact::{Cyc, CycField};
use crate::series::{PiSeries, ZJet};

/// A rational characteristic [eps, eps'].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Characteristic {
    pub eps: Rat,
    pub eps_prime: Rat,
}

impl Characteristic {
    pub fn new(eps: Rat, eps_prime: Rat) -> Characteristic {
        Characteristic { eps, eps_prime }
    }

    /// All phases the expansion needs must embed in the field; this runs
    /// the same constructions the expansion would and surfaces their error.
    pub fn validate(&self, field: &'static CycField) -> Result<()> {
        let half = &self.eps / rat(2, 1);
        field.exp_pi_i(&(&half * &self.eps_prime))?;
        field.exp_pi_i(&(&(&half + rat(1, 1)) * &self.eps_prime))?;
        field.exp_pi_i(&(&half * &half))?;
        Ok(())
    }
}

/// Convenience constructor for the characteristic [a, p/r].
pub fn ch(a: i64, p: i64, r: i64) -> Characteristic {
    Characteristic::new(rat(a, 1), rat(p, r))
}

/// Where and how far to expand a theta function.
#[derive(Clone, Debug)]
pub struct ThetaSpec {
    pub ch: Characteristic,
    /// Evaluate at tau_scale * tau, i.e. substitute q -> q^tau_scale.
    pub tau_scale: u32,
    /// Jet order K: coefficients of z^0 .. z^K.
    pub z_order: usize,
    /// Exclusive bound on determined q-exponents.
    pub trunc: Rat,
}

impl ThetaSpec {
    pub fn constant(ch: Characteristic, tau_scale: u32, trunc: Rat) -> ThetaSpec {
        ThetaSpec { ch, tau_scale, z_order: 0, trunc }
    }
}

/// Expand from the defining sum. Slot k of the result is the coefficient
/// of z^k: pi-grade k, Cyc part (2i)^k/k! * (n + eps/2)^k times the phase.
pub fn theta_jet(field: &'static CycField, spec: &ThetaSpec) -> Result<ZJet> {
    assert!(spec.tau_scale >= 1, "tau scale must be positive");
    let k_max = spec.z_order;
    let s = rat(spec.tau_scale as i64, 1);
    let half_eps = &spec.ch.eps / rat(2, 1);

    // (2i)^k / k!
    let i_unit = field.imag_unit()?;
    let mut deriv = Vec::with_capacity(k_max + 1);
    let mut acc = field.one();
    for k in 0..=k_max {
        if k > 0 {
            acc = acc.mul(&i_unit).mul_rat(&rat(2, k as i64));
        }
        deriv.push(acc.clone());
    }

    let mut terms: Vec<Vec<(Rat, Cyc)>> = vec![Vec::new(); k_max + 1];
    let mut visit = |n: i64| -> Result<(Rat, Rat)> {
        let a = rat(n, 1) + &half_eps;
        let e = &(&(&a * &a) * &s) / rat(2, 1);
        if e < spec.trunc {
            let phase = field.exp_pi_i(&(&a * &spec.ch.eps_prime))?;
            let mut a_pow = Rat::one();
            for (k, slot) in terms.iter_mut().enumerate() {
                let c = deriv[k].mul_rat(&a_pow).mul(&phase);
                slot.push((e.clone(), c));
                a_pow = &a_pow * &a;
            }
        }
        Ok((a, e))
    };

    // The exponent is a parabola in n with vertex at n = -eps/2; start at
    // the nearest integer and walk outward until the exponent leaves the
    // window on each side.
    let nc = rat_floor_i64(&(-&half_eps + rat(1, 2)));
    let mut n = nc;
    loop {
        let (a, e) = visit(n)?;
        if !a.is_negative() && e >= spec.trunc {
            break;
        }
        n += 1;
    }
    let mut n = nc - 1;
    loop {
        let (a, e) = visit(n)?;
        if !a.is_positive() && e >= spec.trunc {
            break;
        }
        n -= 1;
    }

    Ok(ZJet::new(
        terms
            .into_iter()
            .enumerate()
            .map(|(k, t)| PiSeries::from_terms(field, k as i32, spec.trunc.clone(), t))
            .collect(),
    ))
}

/// theta[eps, eps'](0, tau_scale * tau) as a plain series (grade 0).
pub fn theta_const(
    field: &'static CycField,
    ch: &Characteristic,
    tau_scale: u32,
    trunc: &Rat,
) -> Result<PiSeries> {
    let jet = theta_jet(field, &ThetaSpec::constant(ch.clone(), tau_scale, trunc.clone()))?;
    Ok(jet.coeff(0).clone())
}

/// First derivative coefficient theta' = 1! * c_1 (grade 1).
pub fn theta_prime(
    field: &'static CycField,
    ch: &Characteristic,
    tau_scale: u32,
    trunc: &Rat,
) -> Result<PiSeries> {
    let jet = theta_jet(
        field,
        &ThetaSpec { ch: ch.clone(), tau_scale, z_order: 1, trunc: trunc.clone() },
    )?;
    Ok(jet.coeff(1).clone())
}

/// Second derivative coefficient theta'' = 2! * c_2 (grade 2).
pub fn theta_double_prime(
    field: &'static CycField,
    ch: &Characteristic,
    tau_scale: u32,
    trunc: &Rat,
) -> Result<PiSeries> {
    let jet = theta_jet(
        field,
        &ThetaSpec { ch: ch.clone(), tau_scale, z_order: 2, trunc: trunc.clone() },
    )?;
    Ok(jet.coeff(2).mul_int(2))
}

/// Expand the theta constant from the infinite product
///   e^(pi i eps eps'/2) x^(eps^2/4)
///     prod (1 - x^(2n)) (1 + e^(pi i eps') x^(2n-1+eps))
///                       (1 + e^(-pi i eps') x^(2n-1-eps))
/// with x = q^(tau_scale/2). Constants only (jet order 0).
pub fn theta_triple_product(field: &'static CycField, spec: &ThetaSpec) -> Result<ZJet> {
    assert!(spec.tau_scale >= 1, "tau scale must be positive");
    if spec.z_order != 0 {
        return Err(Error::Domain(
            "the product expansion is implemented for constants only".into(),
        ));
    }
    let eps = &spec.ch.eps;
    if eps.abs() > Rat::one() {
        return Err(Error::Domain(format!(
            "product expansion needs |eps| <= 1, got {eps}; reduce via the shift law first"
        )));
    }
    let s = rat(spec.tau_scale as i64, 1);
    let prefix_e = &(&(eps * eps) * &s) / rat(8, 1);
    let prefix_c = field.exp_pi_i(&(&(eps * &spec.ch.eps_prime) / rat(2, 1)))?;
    let p_plus = field.exp_pi_i(&spec.ch.eps_prime)?;
    let p_minus = field.exp_pi_i(&(-&spec.ch.eps_prime))?;
    let minus_one = field.from_int(-1);

    let bound = &spec.trunc - &prefix_e;
    let mut acc = PiSeries::one(field, bound.clone());
    let mut n: i64 = 1;
    loop {
        let nn = rat(n, 1);
        let shared = &(&nn * rat(2, 1)) - rat(1, 1);
        let e1 = &s * &nn;
        let e2 = &(&s * &(&shared + eps)) / rat(2, 1);
        let e3 = &(&s * &(&shared - eps)) / rat(2, 1);
        if e1 >= bound && e2 >= bound && e3 >= bound {
            break;
        }
        for (e, c) in [(e1, &minus_one), (e2, &p_plus), (e3, &p_minus)] {
            if e >= bound {
                continue;
            }
            if e.is_zero() {
                acc = acc.mul_cyc(&field.one().add(c));
            } else {
                acc = acc.mul_binomial(&e, c);
            }
        }
        n += 1;
    }
    Ok(ZJet::new(vec![acc.mul_monomial(&prefix_e, &prefix_c)]))
}

/// Jet of d^2(theta)/dz^2 - 4 pi i d(theta)/dtau at tau scale 1: slot k is
/// (k+2)(k+1) c_(k+2) + 8 pi^2 q d/dq c_k, at grade k+2. Identically zero
/// for every characteristic.
pub fn heat_residual(
    field: &'static CycField,
    ch: &Characteristic,
    k_order: usize,
    trunc: &Rat,
) -> Result<ZJet> {
    assert!(k_order >= 2, "heat residual needs jet order at least 2");
    let jet = theta_jet(
        field,
        &ThetaSpec { ch: ch.clone(), tau_scale: 1, z_order: k_order, trunc: trunc.clone() },
    )?;
    let mut slots = Vec::with_capacity(k_order - 1);
    for k in 0..=k_order - 2 {
        let lead = jet.coeff(k + 2).mul_int(((k + 2) * (k + 1)) as i64);
        let heat = jet.coeff(k).q_ddq().mul_int(8).mul_pi_pow(2);
        slots.push(lead.add(&heat)?);
    }
    Ok(ZJet::new(slots))
}

/// Every (characteristic, tau scale) pair the identity suite touches.
/// Cross-form and transformation-law properties quantify over this list.
pub fn registry_characteristics() -> Vec<(Characteristic, u32)> {
    let mut out = Vec::new();
    // Halves and integers at tau.
    for (a, p, r) in [
        (0, 0, 1),
        (0, 1, 1),
        (1, 0, 1),
        (1, 1, 1),
        (1, 1, 2),
        (1, 3, 2),
        // Thirds.
        (1, 1, 3),
        (1, 2, 3),
        (1, 4, 3),
        (1, 5, 3),
        // Quarters.
        (1, 1, 4),
        (1, 3, 4),
        (1, 5, 4),
        (1, 7, 4),
        // Fifths.
        (1, 1, 5),
        (1, 3, 5),
        (1, 7, 5),
        (1, 9, 5),
    ] {
        out.push((ch(a, p, r), 1));
    }
    // Arguments at 2*tau, including the unreduced outputs of the
    // product-into-sum lemma.
    for (a, p, r) in [
        (0, 0, 1),
        (0, 1, 1),
        (0, -1, 1),
        (0, 2, 1),
        (1, 0, 1),
        (1, 1, 1),
        (1, -1, 1),
        (1, 2, 1),
    ] {
        out.push((ch(a, p, r), 2));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rint;

    fn f() -> &'static CycField {
        CycField::of(240).unwrap()
    }

    fn q(n: i64, d: i64) -> Rat {
        rat(n, d)
    }

    #[test]
    fn null_constant_is_one_plus_two_powers() {
        // theta[0,0](0,tau) = 1 + 2q^(1/2) + 2q^2 + 2q^(9/2) + ...
        let t = theta_const(f(), &ch(0, 0, 1), 1, &rint(5)).unwrap();
        assert_eq!(t.coeff(&q(0, 1)), f().from_int(1));
        assert_eq!(t.coeff(&q(1, 2)), f().from_int(2));
        assert_eq!(t.coeff(&q(2, 1)), f().from_int(2));
        assert_eq!(t.coeff(&q(9, 2)), f().from_int(2));
        assert_eq!(t.terms().count(), 4);
        assert_eq!(t.grade(), 0);
    }

    #[test]
    fn alternating_constant_flips_signs() {
        let t = theta_const(f(), &ch(0, 1, 1), 1, &rint(5)).unwrap();
        assert_eq!(t.coeff(&q(0, 1)), f().from_int(1));
        assert_eq!(t.coeff(&q(1, 2)), f().from_int(-2));
        assert_eq!(t.coeff(&q(2, 1)), f().from_int(2));
        assert_eq!(t.coeff(&q(9, 2)), f().from_int(-2));
    }

    #[test]
    fn odd_half_constant_pairs_triangular_exponents() {
        // theta[1,0](0,tau) = 2q^(1/8)(1 + q + q^3 + q^6 + ...)
        let t = theta_const(f(), &ch(1, 0, 1), 1, &rint(7)).unwrap();
        for k in [0i64, 1, 3, 6] {
            assert_eq!(t.coeff(&(q(1, 8) + rat(k, 1))), f().from_int(2), "q^(1/8+{k})");
        }
        assert_eq!(t.terms().count(), 4);
    }

    #[test]
    fn odd_odd_constant_vanishes_identically() {
        let t = theta_const(f(), &ch(1, 1, 1), 1, &rint(40)).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn derivative_of_the_null_characteristic_vanishes() {
        let t = theta_prime(f(), &ch(0, 0, 1), 1, &rint(20)).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn derivative_of_odd_odd_matches_the_cube_expansion() {
        // theta'[1,1] = -2 pi q^(1/8) (1 - 3q + 5q^3 - 7q^6 + ...)
        let t = theta_prime(f(), &ch(1, 1, 1), 1, &rint(7)).unwrap();
        assert_eq!(t.grade(), 1);
        for (k, c) in [(0i64, -2i64), (1, 6), (3, -10), (6, 14)] {
            assert_eq!(t.coeff(&(q(1, 8) + rat(k, 1))), f().from_int(c), "q^(1/8+{k})");
        }
        assert_eq!(t.terms().count(), 4);
    }

    #[test]
    fn quarter_phase_leading_coefficient_has_norm_two() {
        // theta[1,1/2] leads with a zeta8-unit times sqrt(2).
        let t = theta_const(f(), &ch(1, 1, 2), 1, &rint(2)).unwrap();
        let (e, c) = t.witness().unwrap();
        assert_eq!(*e, q(1, 8));
        assert_eq!(c.mul(&c.conj()), f().from_int(2));
    }

    #[test]
    fn product_form_agrees_with_the_sum() {
        for (chr, scale) in [(ch(0, 0, 1), 1), (ch(1, 0, 1), 1), (ch(1, 1, 5), 1), (ch(1, 3, 4), 2)]
        {
            let trunc = rint(12);
            let sum = theta_const(f(), &chr, scale, &trunc).unwrap();
            let prod = theta_triple_product(
                f(),
                &ThetaSpec::constant(chr.clone(), scale, trunc.clone()),
            )
            .unwrap();
            let diff = sum.sub(prod.coeff(0)).unwrap();
            assert!(diff.is_zero(), "[{:?}]@{scale}: {:?}", chr, diff.witness());
        }
    }

    #[test]
    fn product_form_rejects_jets_and_wide_characteristics() {
        let spec = ThetaSpec { ch: ch(0, 0, 1), tau_scale: 1, z_order: 1, trunc: rint(4) };
        assert!(theta_triple_product(f(), &spec).is_err());
        let wide = ThetaSpec::constant(ch(3, 0, 1), 1, rint(4));
        assert!(theta_triple_product(f(), &wide).is_err());
    }

    #[test]
    fn unsupported_phase_denominators_are_embedding_errors() {
        let bad = ch(1, 1, 7);
        assert!(matches!(
            theta_const(f(), &bad, 1, &rint(3)),
            Err(Error::Embedding(_))
        ));
        assert!(bad.validate(f()).is_err());
        assert!(ch(1, 1, 5).validate(f()).is_ok());
    }

    #[test]
    fn heat_residual_vanishes_for_a_fifth_characteristic() {
        let r = heat_residual(f(), &ch(1, 1, 5), 3, &rint(8)).unwrap();
        assert!(r.is_zero(), "witness: {:?}", r.witness());
        assert_eq!(r.order(), 1);
    }

    #[test]
    fn parity_negates_odd_jet_slots() {
        let spec = ThetaSpec { ch: ch(1, 1, 3), tau_scale: 1, z_order: 3, trunc: rint(6) };
        let plus = theta_jet(f(), &spec).unwrap();
        let neg_spec = ThetaSpec { ch: ch(-1, -1, 3), ..spec };
        let minus = theta_jet(f(), &neg_spec).unwrap();
        let diff = minus.sub(&plus.negate_z()).unwrap();
        assert!(diff.is_zero(), "witness: {:?}", diff.witness());
    }

    #[test]
    fn shift_law_spot_check() {
        // theta[eps+2, eps'+2] = e^(pi i eps) theta[eps, eps'].
        let trunc = rint(9);
        let base = theta_const(f(), &ch(1, 1, 3), 1, &trunc).unwrap();
        let shifted = theta_const(
            f(),
            &Characteristic::new(rat(3, 1), rat(1, 3) + rat(2, 1)),
            1,
            &trunc,
        )
        .unwrap();
        let phase = f().exp_pi_i(&rat(1, 1)).unwrap();
        let diff = shifted.sub(&base.mul_cyc(&phase)).unwrap();
        assert!(diff.is_zero(), "witness: {:?}", diff.witness());
    }
}
