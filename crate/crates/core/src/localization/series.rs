//! Laurent series in the line parameter `t`.
//!
//! Two coefficient rings appear. Before push-forward, coefficients are
//! polynomials in the classes `Λ_ρ` surviving on a fixed component, with
//! theta coefficients ([`ClassSeries`]). After push-forward only theta
//! polynomials remain ([`TLaurentClass`]).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::LocalizationError;
use crate::fan::Fan;
use crate::moduli::DegreeData;
use crate::rational::{binomial, factorial, signed_pow, Rational};
use crate::theta::ThetaPoly;

/// Exponent caps for the classes surviving on one fixed component.
///
/// A monomial with `k_ρ > N_ρ + g - 1` for some surviving `ρ` pushes forward
/// to zero, and so does every multiple of it, so such monomials are dropped
/// as soon as they appear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub surviving: Vec<usize>,
    pub caps: Vec<u32>,
    pub rays: usize,
    pub genus: u32,
}

impl Truncation {
    pub fn for_cone(fan: &Fan, data: &DegreeData, cone: usize) -> Self {
        let surviving = fan.complement(cone);
        let g = data.genus as i64;
        let caps = surviving
            .iter()
            .map(|&rho| (data.rank(rho) + g - 1) as u32)
            .collect();
        Truncation {
            surviving,
            caps,
            rays: data.num_rays(),
            genus: data.genus,
        }
    }

    pub fn admits(&self, k: &[u32]) -> bool {
        k.iter().zip(&self.caps).all(|(a, c)| a <= c)
    }
}

type LambdaTerms = BTreeMap<Vec<u32>, ThetaPoly>;

/// Laurent series in `t` with coefficients in `H*(J^r)[Λ_ρ : ρ surviving]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSeries {
    rays: usize,
    genus: u32,
    terms: BTreeMap<i64, LambdaTerms>,
}

impl ClassSeries {
    pub fn zero(rays: usize, genus: u32) -> Self {
        ClassSeries {
            rays,
            genus,
            terms: BTreeMap::new(),
        }
    }

    /// `Π Λ^k · t^0`, or zero when `k` is already past the caps.
    pub fn monomial(trunc: &Truncation, k: Vec<u32>) -> Self {
        let mut s = ClassSeries::zero(trunc.rays, trunc.genus);
        if trunc.admits(&k) {
            s.add(0, k, ThetaPoly::one(trunc.rays, trunc.genus));
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, t_exp: i64, k: Vec<u32>, coeff: ThetaPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(t_exp).or_default();
        match slot.get_mut(&k) {
            Some(existing) => {
                existing.add_assign(&coeff);
                if existing.is_zero() {
                    slot.remove(&k);
                }
            }
            None => {
                slot.insert(k, coeff);
            }
        }
        if slot.is_empty() {
            self.terms.remove(&t_exp);
        }
    }

    /// Coefficient of `t^e Λ^k`.
    pub fn coefficient(&self, t_exp: i64, k: &[u32]) -> ThetaPoly {
        self.terms
            .get(&t_exp)
            .and_then(|m| m.get(k))
            .cloned()
            .unwrap_or_else(|| ThetaPoly::zero(self.rays, self.genus))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &[u32], &ThetaPoly)> {
        self.terms
            .iter()
            .flat_map(|(&e, m)| m.iter().map(move |(k, c)| (e, k.as_slice(), c)))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Truncated product, keeping only `t`-exponents up to `max_t`.
    pub fn mul(&self, other: &ClassSeries, trunc: &Truncation, max_t: Option<i64>) -> ClassSeries {
        let mut out = ClassSeries::zero(self.rays, self.genus);
        for (ea, ka, ca) in self.iter() {
            for (eb, kb, cb) in other.iter() {
                let e = ea + eb;
                if max_t.is_some_and(|m| e > m) {
                    continue;
                }
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                if !trunc.admits(&k) {
                    continue;
                }
                out.add(e, k, ca.mul(cb).expect("same theta parameters"));
            }
        }
        out
    }
}

/// Powers `L^0, L^1, …` of an integer combination of surviving classes,
/// truncated by the caps, up to the first power that vanishes.
pub fn lambda_powers(comb: &[i64], trunc: &Truncation) -> Vec<BTreeMap<Vec<u32>, BigInt>> {
    let width = trunc.surviving.len();
    let mut powers = vec![BTreeMap::from([(vec![0u32; width], BigInt::one())])];
    loop {
        let last = powers.last().expect("nonempty");
        let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (k, c) in last {
            for (i, &a) in comb.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut k2 = k.clone();
                k2[i] += 1;
                if !trunc.admits(&k2) {
                    continue;
                }
                let entry = next.entry(k2).or_insert_with(BigInt::zero);
                *entry += c * a;
            }
        }
        next.retain(|_, c| !c.is_zero());
        if next.is_empty() {
            return powers;
        }
        powers.push(next);
    }
}

/// Expansion of `(u + L)^p · exp(θ_ρ / (u + L))` with `u = c·t`, where `L`
/// is the integer combination `comb` of surviving classes.
///
/// For `p ≥ 0` the series is a polynomial part in nonnegative powers of `u`
/// plus a tail starting at `θ^{p+1}/u`; for `p < 0` every power of `u` is
/// negative. Tails terminate because `L` is nilpotent modulo the caps and
/// `θ^{g+1} = 0`.
pub fn expand_weighted_factor(
    p: i64,
    c: i64,
    comb: &[i64],
    theta_index: usize,
    trunc: &Truncation,
) -> Result<ClassSeries, LocalizationError> {
    if c == 0 {
        return Err(LocalizationError::ZeroWeight { ray: theta_index });
    }
    let (r, g) = (trunc.rays, trunc.genus);
    let powers = lambda_powers(comb, trunc);
    let theta_term = |b: u32, denom: BigInt| {
        let mut e = vec![0u32; r];
        e[theta_index] = b;
        ThetaPoly::monomial(r, g, e, Rational::new(BigInt::one(), denom))
    };
    let mut out = ClassSeries::zero(r, g);
    let mut push = |u_exp: i64, scalar: BigInt, j: usize, theta: &ThetaPoly| {
        let weight = signed_pow(c, u_exp) * Rational::from_integer(scalar);
        for (k, lc) in &powers[j] {
            let factor = &weight * Rational::from_integer(lc.clone());
            out.add(u_exp, k.clone(), theta.scale(&factor));
        }
    };

    if p >= 0 {
        // Σ_{k ≤ p} Σ_{a ≤ k} C(p-a, k-a) L^{k-a} θ^a/a! · u^{p-k}
        for a in 0..=(g as i64).min(p) {
            let theta = theta_term(a as u32, factorial(a as u64));
            for j in 0..powers.len().min((p - a + 1) as usize) {
                let k = a + j as i64;
                push(p - k, binomial(p - a, j as u64), j, &theta);
            }
        }
        // θ^{p+1} Σ_k Σ_{b ≤ k} (-1)^{k-b} C(k, k-b) L^{k-b} θ^b/(p+1+b)! · u^{-(k+1)}
        for b in 0..=(g as i64 - p - 1) {
            let theta = theta_term((p + 1 + b) as u32, factorial((p + 1 + b) as u64));
            for j in 0..powers.len() {
                let k = b + j as i64;
                let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                push(-(k + 1), sign * binomial(k, j as u64), j, &theta);
            }
        }
    } else {
        // Σ_k Σ_{b ≤ k} (-1)^{k-b} C(q+k-1, k-b) L^{k-b} θ^b/b! · u^{-(q+k)}, q = -p
        let q = -p;
        for b in 0..=g as i64 {
            let theta = theta_term(b as u32, factorial(b as u64));
            for j in 0..powers.len() {
                let k = b + j as i64;
                let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                push(-(q + k), sign * binomial(q + k - 1, j as u64), j, &theta);
            }
        }
    }
    Ok(out)
}

/// Laurent series in `t` with theta-polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TLaurentClass {
    rays: usize,
    genus: u32,
    terms: BTreeMap<i64, ThetaPoly>,
}

impl TLaurentClass {
    pub fn zero(rays: usize, genus: u32) -> Self {
        TLaurentClass {
            rays,
            genus,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, t_exp: i64, coeff: &ThetaPoly) {
        if coeff.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(t_exp)
            .or_insert_with(|| ThetaPoly::zero(self.rays, self.genus));
        slot.add_assign(coeff);
        if slot.is_zero() {
            self.terms.remove(&t_exp);
        }
    }

    pub fn add_assign(&mut self, other: &TLaurentClass) {
        for (&e, c) in &other.terms {
            self.add(e, c);
        }
    }

    pub fn coefficient(&self, t_exp: i64) -> ThetaPoly {
        self.terms
            .get(&t_exp)
            .cloned()
            .unwrap_or_else(|| ThetaPoly::zero(self.rays, self.genus))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &ThetaPoly)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// First term with a negative exponent, if any.
    pub fn first_pole(&self) -> Option<(i64, &ThetaPoly)> {
        self.terms.iter().next().filter(|(&e, _)| e < 0).map(|(&e, c)| (e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(e, c)| format!("({c})*t^{e}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn single(cap: u32, genus: u32) -> Truncation {
        Truncation {
            surviving: vec![0],
            caps: vec![cap],
            rays: 2,
            genus,
        }
    }

    /// Independent route: Σ_a θ^a/a! (u+L)^{p-a}, each power expanded by the
    /// generalized binomial series, summed term by term.
    fn oracle(p: i64, c: i64, cap: u32, genus: u32) -> ClassSeries {
        let mut out = ClassSeries::zero(2, genus);
        for a in 0..=genus as i64 {
            let e = p - a;
            let mut theta_e = vec![0, 0];
            theta_e[1] = a as u32;
            let theta = ThetaPoly::monomial(2, genus, theta_e, Rational::new(1.into(), factorial(a as u64)));
            for j in 0..=cap as i64 {
                if e >= 0 && j > e {
                    break;
                }
                let coeff = Rational::from_integer(binomial(e, j as u64)) * signed_pow(c, e - j);
                out.add(e - j, vec![j as u32], theta.scale(&coeff));
            }
        }
        out
    }

    #[test]
    fn p_zero_example() {
        let trunc = single(1, 1);
        let s = expand_weighted_factor(0, 1, &[1], 1, &trunc).unwrap();
        let th = ThetaPoly::theta(2, 1, 1);
        assert_eq!(s.coefficient(0, &[0]), ThetaPoly::one(2, 1));
        assert_eq!(s.coefficient(-1, &[0]), th);
        assert_eq!(s.coefficient(-2, &[1]), th.scale(&int(-1)));
        assert_eq!(s.iter().count(), 3);
    }

    #[test]
    fn p_one_genus_zero_is_binomial() {
        let trunc = single(5, 0);
        let s = expand_weighted_factor(1, 1, &[1], 1, &trunc).unwrap();
        assert_eq!(s.coefficient(1, &[0]), ThetaPoly::one(2, 0));
        assert_eq!(s.coefficient(0, &[1]), ThetaPoly::one(2, 0));
        assert_eq!(s.iter().count(), 2);
    }

    #[test]
    fn p_minus_one_example() {
        let trunc = single(1, 1);
        let s = expand_weighted_factor(-1, 1, &[1], 1, &trunc).unwrap();
        let th = ThetaPoly::theta(2, 1, 1);
        assert_eq!(s.coefficient(-1, &[0]), ThetaPoly::one(2, 1));
        assert_eq!(s.coefficient(-2, &[0]), th);
        assert_eq!(s.coefficient(-2, &[1]), ThetaPoly::one(2, 1).scale(&int(-1)));
        assert_eq!(s, oracle(-1, 1, 1, 1));
    }

    #[test]
    fn matches_binomial_oracle() {
        for genus in 0..4 {
            for cap in 0..5 {
                for p in -5..6 {
                    for c in [-3, -1, 1, 2] {
                        let trunc = single(cap, genus);
                        let s = expand_weighted_factor(p, c, &[1], 1, &trunc).unwrap();
                        assert_eq!(s, oracle(p, c, cap, genus), "p={p} c={c} cap={cap} g={genus}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_weight_rejected() {
        let trunc = single(1, 1);
        assert_eq!(
            expand_weighted_factor(1, 0, &[1], 0, &trunc),
            Err(LocalizationError::ZeroWeight { ray: 0 })
        );
    }

    #[test]
    fn lambda_powers_stop_at_nilpotency() {
        let trunc = Truncation { surviving: vec![0, 1], caps: vec![1, 1], rays: 2, genus: 0 };
        let pw = lambda_powers(&[1, -1], &trunc);
        assert_eq!(pw.len(), 3);
        // (x - y)^2 = -2xy once x^2, y^2 are truncated.
        assert_eq!(pw[2].get(&vec![1, 1]), Some(&BigInt::from(-2)));
        assert_eq!(lambda_powers(&[0, 0], &trunc).len(), 1);
    }
}
