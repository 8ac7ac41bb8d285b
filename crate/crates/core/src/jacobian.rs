//! Exterior-algebra model of `H*(J^l)`, the pull-back along
//! `ψ: J^l → J^r`, and integration over the morphism space.
//!
//! `H^1` of the `λ`-th Jacobian factor has the symplectic basis
//! `α_1^λ, β_1^λ, …, α_g^λ, β_g^λ` with `θ_λ = Σ_i α_i^λ β_i^λ`. Generators are
//! ordered `α_1^1, β_1^1, …, α_g^1, β_g^1, α_1^2, …`, bit `2(λg + i)` holding
//! `α_i^λ` and the next bit `β_i^λ`. The product of all generators in this
//! order integrates to `+1`, so `∫ θ_λ^g = g!` on each factor.
//!
//! The component `J^l → J` with multipliers `(a_ν^λ)_λ` acts linearly on
//! degree-one classes, so
//! `ψ*θ_{l+ν} = Σ_i (Σ_λ a_ν^λ α_i^λ) ∧ (Σ_μ a_ν^μ β_i^μ)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{JacobianError, Result};
use crate::fan::{Fan, RelationMatrix};
use crate::localization::{choose_direction, pushforward_class_along, Direction};
use crate::moduli::DegreeData;
use crate::rational::{int, Rational};
use crate::theta::ThetaPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    genus: u32,
    factors: usize,
    terms: BTreeMap<u64, Rational>,
}

/// Sign of `a ∧ b` for disjoint generator sets, by transposition count.
fn wedge_sign(a: u64, b: u64) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> j >> 1).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

impl ExteriorElement {
    pub fn zero(genus: u32, factors: usize) -> Self {
        ExteriorElement {
            genus,
            factors,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(genus: u32, factors: usize) -> Self {
        let mut e = ExteriorElement::zero(genus, factors);
        e.add_term(0, Rational::one());
        e
    }

    pub fn generators(&self) -> u32 {
        2 * self.genus * self.factors as u32
    }

    pub fn alpha_bit(genus: u32, factor: usize, i: u32) -> u32 {
        2 * (factor as u32 * genus + i)
    }

    pub fn alpha(genus: u32, factors: usize, factor: usize, i: u32) -> Self {
        let mut e = ExteriorElement::zero(genus, factors);
        e.add_term(1 << Self::alpha_bit(genus, factor, i), Rational::one());
        e
    }

    pub fn beta(genus: u32, factors: usize, factor: usize, i: u32) -> Self {
        let mut e = ExteriorElement::zero(genus, factors);
        e.add_term(1 << (Self::alpha_bit(genus, factor, i) + 1), Rational::one());
        e
    }

    /// `θ_λ = Σ_i α_i^λ ∧ β_i^λ`.
    pub fn theta(genus: u32, factors: usize, factor: usize) -> Self {
        let mut e = ExteriorElement::zero(genus, factors);
        for i in 0..genus {
            let bit = Self::alpha_bit(genus, factor, i);
            e.add_term((1 << bit) | (1 << (bit + 1)), Rational::one());
        }
        e
    }

    pub fn add_term(&mut self, mask: u64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &ExteriorElement) -> ExteriorElement {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> ExteriorElement {
        let mut out = ExteriorElement::zero(self.genus, self.factors);
        for (&m, c) in &self.terms {
            out.add_term(m, c * factor);
        }
        out
    }

    pub fn wedge(&self, other: &ExteriorElement) -> ExteriorElement {
        let mut out = ExteriorElement::zero(self.genus, self.factors);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let c = ca * cb;
                out.add_term(a | b, if wedge_sign(a, b) { -c } else { c });
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> ExteriorElement {
        (0..k).fold(ExteriorElement::one(self.genus, self.factors), |acc, _| acc.wedge(self))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mask: u64) -> Rational {
        self.terms.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }
}

/// `∫_{J^l}`: the coefficient of the full generator set.
pub fn integrate_jl(e: &ExteriorElement) -> Rational {
    let n = e.generators();
    let top = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    e.coefficient(top)
}

/// The ring map `ψ*: H*(J^r) → H*(J^l)` on theta classes.
#[derive(Debug, Clone)]
pub struct PsiMap {
    pub relations: RelationMatrix,
    pub genus: u32,
    images: Vec<ExteriorElement>,
}

impl PsiMap {
    pub fn new(relations: &RelationMatrix, genus: u32) -> Result<PsiMap> {
        let (l, n) = (relations.picard_rank(), relations.dim());
        if 2 * genus as usize * l > 64 {
            return Err(JacobianError::TooManyGenerators(2 * genus as usize * l).into());
        }
        let mut images: Vec<ExteriorElement> =
            (0..l).map(|lambda| ExteriorElement::theta(genus, l, lambda)).collect();
        for nu in 0..n {
            let mut image = ExteriorElement::zero(genus, l);
            for i in 0..genus {
                let mut alpha = ExteriorElement::zero(genus, l);
                let mut beta = ExteriorElement::zero(genus, l);
                for lambda in 0..l {
                    let a = int(relations.entry(lambda, nu));
                    alpha = alpha.add(&ExteriorElement::alpha(genus, l, lambda, i).scale(&a));
                    beta = beta.add(&ExteriorElement::beta(genus, l, lambda, i).scale(&a));
                }
                image = image.add(&alpha.wedge(&beta));
            }
            images.push(image);
        }
        Ok(PsiMap {
            relations: relations.clone(),
            genus,
            images,
        })
    }

    pub fn rays(&self) -> usize {
        self.images.len()
    }

    pub fn factors(&self) -> usize {
        self.relations.picard_rank()
    }

    /// `ψ*θ_ρ`.
    pub fn image(&self, ray: usize) -> &ExteriorElement {
        &self.images[ray]
    }
}

pub fn psi_pullback(p: &ThetaPoly, psi: &PsiMap) -> Result<ExteriorElement> {
    if p.rays() != psi.rays() || p.genus() != psi.genus {
        return Err(JacobianError::ParameterMismatch {
            class_rays: p.rays(),
            class_genus: p.genus(),
            map_rays: psi.rays(),
            map_genus: psi.genus,
        }
        .into());
    }
    let (g, l) = (psi.genus, psi.factors());
    let mut powers: Vec<Vec<ExteriorElement>> = vec![vec![ExteriorElement::one(g, l)]; psi.rays()];
    let mut out = ExteriorElement::zero(g, l);
    for (exps, c) in p.terms() {
        let mut term = ExteriorElement::one(g, l);
        for (rho, &b) in exps.iter().enumerate() {
            while powers[rho].len() <= b as usize {
                let next = powers[rho].last().expect("nonempty").wedge(psi.image(rho));
                powers[rho].push(next);
            }
            if b > 0 {
                term = term.wedge(&powers[rho][b as usize]);
            }
        }
        out = out.add(&term.scale(c));
    }
    Ok(out)
}

/// Result of integrating a monomial over `V`, with the intermediate class.
#[derive(Debug, Clone)]
pub struct Integral {
    pub value: Rational,
    pub pushforward: ThetaPoly,
}

/// `∫_V Π Λ_ρ^{m_ρ} = ∫_{J^l} ψ* q_*(Π Λ_ρ^{m_ρ})`, requiring `Σ m = dim V`.
pub fn integrate_v(fan: &Fan, data: &DegreeData, m: &[u32]) -> Result<Rational> {
    Ok(integrate_v_along(fan, data, m, &choose_direction(fan))?.value)
}

pub fn integrate_v_along(
    fan: &Fan,
    data: &DegreeData,
    m: &[u32],
    dir: &Direction,
) -> Result<Integral> {
    let total: i64 = m.iter().map(|&x| x as i64).sum();
    if total != data.dim_v {
        return Err(JacobianError::DegreeMismatch {
            expected: data.dim_v,
            found: total,
        }
        .into());
    }
    let pushforward = pushforward_class_along(fan, data, m, dir)?;
    let psi = PsiMap::new(&fan.relation_matrix(), data.genus)?;
    let value = integrate_jl(&psi_pullback(&pushforward, &psi)?);
    Ok(Integral { value, pushforward })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::builtin::{f1, p1};
    use crate::moduli::derive_degree_data;
    use crate::rational::factorial;

    #[test]
    fn theta_top_power_is_factorial() {
        for g in 0..=4u32 {
            let th = ExteriorElement::theta(g, 1, 0);
            assert_eq!(integrate_jl(&th.pow(g)), Rational::from_integer(factorial(g as u64)));
            assert!(th.pow(g + 1).is_zero());
        }
    }

    #[test]
    fn product_of_tops_across_factors() {
        let t1 = ExteriorElement::theta(1, 2, 0);
        let t2 = ExteriorElement::theta(1, 2, 1);
        assert_eq!(integrate_jl(&t1.wedge(&t2)), int(1));
        assert_eq!(integrate_jl(&t1), int(0));
    }

    #[test]
    fn anticommutation() {
        let a = ExteriorElement::alpha(2, 1, 0, 0);
        let b = ExteriorElement::beta(2, 1, 0, 1);
        assert_eq!(a.wedge(&b), b.wedge(&a).scale(&int(-1)));
        assert!(a.wedge(&a).is_zero());
    }

    #[test]
    fn psi_on_p1() {
        let fan = p1();
        let psi = PsiMap::new(&fan.relation_matrix(), 1).unwrap();
        assert_eq!(psi.image(1), &ExteriorElement::theta(1, 1, 0));
        let one = ThetaPoly::one(2, 1);
        assert_eq!(psi_pullback(&one, &psi).unwrap(), ExteriorElement::one(1, 1));
    }

    #[test]
    fn psi_on_f1_cross_terms() {
        let fan = f1();
        let psi = PsiMap::new(&fan.relation_matrix(), 1).unwrap();
        // θ_4 ↦ θ_1 + θ_2 - (α^1 β^2 + α^2 β^1)
        let (a1, b1) = (ExteriorElement::alpha(1, 2, 0, 0), ExteriorElement::beta(1, 2, 0, 0));
        let (a2, b2) = (ExteriorElement::alpha(1, 2, 1, 0), ExteriorElement::beta(1, 2, 1, 0));
        let expected = ExteriorElement::theta(1, 2, 0)
            .add(&ExteriorElement::theta(1, 2, 1))
            .add(&a1.wedge(&b2).add(&a2.wedge(&b1)).scale(&int(-1)));
        assert_eq!(psi.image(3), &expected);
        assert_eq!(integrate_jl(&psi.image(3).pow(2)), int(0));
        // θ_3 ↦ θ_1 (row ν=1 is (1, 0))
        assert_eq!(psi.image(2), &ExteriorElement::theta(1, 2, 0));
    }

    #[test]
    fn integrals_on_p1() {
        let fan = p1();
        let cases: [(u32, i64, [u32; 2], i64); 3] =
            [(0, 1, [3, 0], 1), (1, 2, [2, 2], 2), (2, 4, [4, 3], 4)];
        for (g, d, m, expected) in cases {
            let dd = derive_degree_data(&fan, &fan.relation_matrix(), g, &[d]).unwrap();
            assert_eq!(integrate_v(&fan, &dd, &m).unwrap(), int(expected), "g={g}");
        }
        let dd = derive_degree_data(&fan, &fan.relation_matrix(), 1, &[2]).unwrap();
        assert!(matches!(
            integrate_v(&fan, &dd, &[1, 1]),
            Err(crate::Error::Jacobian(JacobianError::DegreeMismatch { expected: 4, found: 2 }))
        ));
    }
}
