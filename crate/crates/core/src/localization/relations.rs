//! Relations among the classes `Λ_ρ` and the vanishing criterion.

use std::collections::BTreeMap;

use num_traits::One;
use serde::Serialize;

use crate::error::{LocalizationError, Result};
use crate::fan::{Fan, PrimitiveCollection};
use crate::moduli::DegreeData;
use crate::rational::{factorial, int, Rational};
use crate::theta::ThetaPoly;

use super::direction::Direction;
use super::engine::pushforward_class_along;

/// A class on `W` written as `Σ θ-poly · Π Λ_ρ^{m_ρ}` over all `r` rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaClass {
    rays: usize,
    genus: u32,
    terms: BTreeMap<Vec<u32>, ThetaPoly>,
}

impl LambdaClass {
    pub fn zero(rays: usize, genus: u32) -> Self {
        LambdaClass {
            rays,
            genus,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(rays: usize, genus: u32, m: Vec<u32>) -> Self {
        let mut c = LambdaClass::zero(rays, genus);
        c.add(m, ThetaPoly::one(rays, genus));
        c
    }

    pub fn add(&mut self, m: Vec<u32>, coeff: ThetaPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(m.clone())
            .or_insert_with(|| ThetaPoly::zero(self.rays, self.genus));
        slot.add_assign(&coeff);
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn mul(&self, other: &LambdaClass) -> LambdaClass {
        let mut out = LambdaClass::zero(self.rays, self.genus);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add(m, ca.mul(cb).expect("same theta parameters"));
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &ThetaPoly)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `q_*` of a class, using `H*(J^r)`-linearity of the push-forward.
pub fn pushforward_combination(
    fan: &Fan,
    data: &DegreeData,
    class: &LambdaClass,
    dir: &Direction,
) -> Result<ThetaPoly> {
    let mut total = ThetaPoly::zero(data.num_rays(), data.genus);
    for (m, coeff) in class.terms() {
        let pushed = pushforward_class_along(fan, data, m, dir)?;
        if !pushed.is_zero() {
            total.add_assign(&coeff.mul(&pushed)?);
        }
    }
    Ok(total)
}

/// `Λ_{l+ν} - Σ_λ a_ν^λ Λ_λ`, as a class with integer coefficients. Terms
/// with negative coefficients are fine; only exponents must be nonnegative.
pub fn linear_relation_class(fan: &Fan, data: &DegreeData, nu: usize) -> LambdaClass {
    let (r, g, l) = (data.num_rays(), data.genus, fan.picard_rank());
    let a = fan.relation_matrix();
    let mut class = LambdaClass::zero(r, g);
    let unit = |i: usize| {
        let mut m = vec![0u32; r];
        m[i] = 1;
        m
    };
    class.add(unit(l + nu), ThetaPoly::one(r, g));
    for lambda in 0..l {
        let coeff = a.entry(lambda, nu);
        if coeff != 0 {
            class.add(unit(lambda), ThetaPoly::constant(r, g, int(-coeff)));
        }
    }
    class
}

/// Euler class `e(⊕_{ρ∈π} q*W_ρ ⊗ Λ_ρ) = Π_{ρ∈π} Σ_{a=0}^{g} (-θ_ρ)^a/a! · Λ_ρ^{N_ρ-a}`.
pub fn relation_class(data: &DegreeData, pi: &PrimitiveCollection) -> LambdaClass {
    let (r, g) = (data.num_rays(), data.genus);
    let mut class = LambdaClass::monomial(r, g, vec![0; r]);
    for &rho in &pi.0 {
        let mut factor = LambdaClass::zero(r, g);
        for a in 0..=g {
            let power = data.rank(rho) - a as i64;
            if power < 0 {
                continue;
            }
            let mut m = vec![0u32; r];
            m[rho] = power as u32;
            let mut e = vec![0u32; r];
            e[rho] = a;
            let sign = if a % 2 == 0 { Rational::one() } else { -Rational::one() };
            let coeff = ThetaPoly::monomial(r, g, e, sign / Rational::from_integer(factorial(a as u64)));
            factor.add(m, coeff);
        }
        class = class.mul(&factor);
    }
    class
}

/// Outcome of the primitive-collection vanishing test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingCertificate {
    pub spans_cone: bool,
    /// Rays of `J` with `m_ρ < N_ρ + g`.
    pub short_rays: Vec<usize>,
    pub holds: bool,
}

/// True iff `J` spans no cone and `m_ρ ≥ N_ρ + g` for every `ρ ∈ J`; then
/// every monomial of every fixed-point term leaves the push-forward window.
pub fn vanishing_predicate(
    fan: &Fan,
    data: &DegreeData,
    subset: &[usize],
    m: &[u32],
) -> Result<VanishingCertificate> {
    if let Some(&index) = subset.iter().find(|&&i| i >= fan.num_rays()) {
        return Err(LocalizationError::SubsetIndex { index }.into());
    }
    super::engine::check_exponents(data, m)?;
    let spans_cone = fan.is_face(subset);
    let g = data.genus as i64;
    let short_rays: Vec<usize> = subset
        .iter()
        .copied()
        .filter(|&rho| (m[rho] as i64) < data.rank(rho) + g)
        .collect();
    let holds = !spans_cone && short_rays.is_empty();
    Ok(VanishingCertificate {
        spans_cone,
        short_rays,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::builtin::{f1, p1, p1xp1};
    use crate::localization::choose_direction;
    use crate::moduli::derive_degree_data;

    #[test]
    fn p1_euler_relation() {
        let fan = p1();
        let dd = derive_degree_data(&fan, &fan.relation_matrix(), 0, &[1]).unwrap();
        let pi = &fan.primitive_collections()[0];
        let e = relation_class(&dd, pi);
        let dir = choose_direction(&fan);
        assert!(pushforward_combination(&fan, &dd, &e, &dir).unwrap().is_zero());
    }

    #[test]
    fn euler_relation_against_cofactors() {
        for (fan, g, d) in [(p1xp1(), 1u32, vec![2i64, 3]), (f1(), 1, vec![4, 8])] {
            let dd = derive_degree_data(&fan, &fan.relation_matrix(), g, &d).unwrap();
            let dir = choose_direction(&fan);
            for pi in fan.primitive_collections() {
                let e = relation_class(&dd, &pi);
                let e_deg: i64 = pi.0.iter().map(|&r| dd.rank(r)).sum();
                let need = (dd.dim_y - e_deg).max(0) as u32;
                for shift in 0..3u32 {
                    let mut m = vec![0u32; 4];
                    m[(shift as usize) % 4] = need + shift;
                    let prod = e.mul(&LambdaClass::monomial(4, g, m));
                    assert!(pushforward_combination(&fan, &dd, &prod, &dir).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn vanishing_examples() {
        let fan = f1();
        let dd = derive_degree_data(&fan, &fan.relation_matrix(), 1, &[4, 8]).unwrap();
        let c = vanishing_predicate(&fan, &dd, &[0, 2], &[5, 7, 5, 3]).unwrap();
        assert!(c.holds);
        assert!(!vanishing_predicate(&fan, &dd, &[2, 3], &[5, 7, 5, 3]).unwrap().holds);
        let c = vanishing_predicate(&fan, &dd, &[0, 2], &[4, 8, 5, 3]).unwrap();
        assert_eq!(c.short_rays, vec![0]);
        assert!(!c.holds);

        let fan = p1();
        let dd = derive_degree_data(&fan, &fan.relation_matrix(), 1, &[3]).unwrap();
        assert!(vanishing_predicate(&fan, &dd, &[0, 1], &[4, 5]).unwrap().holds);
        assert!(vanishing_predicate(&fan, &dd, &[0, 5], &[4, 5]).is_err());
    }
}
