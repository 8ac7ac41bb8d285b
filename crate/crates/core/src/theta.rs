//! The subring of `H*(J^r)` generated by theta classes.
//!
//! Each copy of the Jacobian contributes one class `θ_ρ` with `θ_ρ^{g+1} = 0`.
//! Elements are sparse maps from exponent vectors to exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moduli::DegreeData;
use crate::rational::{factorial, format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPoly {
    rays: usize,
    genus: u32,
    terms: BTreeMap<Vec<u32>, Rational>,
}

/// One serialized term: `{"exponents": [...], "coeff": "p/q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaRecord {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

impl ThetaPoly {
    pub fn zero(rays: usize, genus: u32) -> Self {
        ThetaPoly {
            rays,
            genus,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(rays: usize, genus: u32, c: Rational) -> Self {
        let mut p = ThetaPoly::zero(rays, genus);
        p.add_term(vec![0; rays], c);
        p
    }

    pub fn one(rays: usize, genus: u32) -> Self {
        ThetaPoly::constant(rays, genus, Rational::one())
    }

    /// `θ_ρ`.
    pub fn theta(rays: usize, genus: u32, ray: usize) -> Self {
        let mut e = vec![0; rays];
        e[ray] = 1;
        ThetaPoly::monomial(rays, genus, e, Rational::one())
    }

    /// `c · Π θ_ρ^{e_ρ}`, zero when some exponent exceeds the genus.
    pub fn monomial(rays: usize, genus: u32, exponents: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exponents.len(), rays);
        let mut p = ThetaPoly::zero(rays, genus);
        p.add_term(exponents, c);
        p
    }

    pub fn rays(&self) -> usize {
        self.rays
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c · θ^e`, dropping it if an exponent exceeds `g`.
    pub fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        if c.is_zero() || exponents.iter().any(|&b| b > self.genus) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &ThetaPoly) -> Result<()> {
        if self.rays != other.rays || self.genus != other.genus {
            return Err(Error::ThetaMismatch {
                left_r: self.rays,
                left_g: self.genus,
                right_r: other.rays,
                right_g: other.genus,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ThetaPoly) -> Result<ThetaPoly> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    /// In-place sum; panics on mismatched parameters.
    pub fn add_assign(&mut self, other: &ThetaPoly) {
        self.check(other).expect("theta parameters agree");
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &ThetaPoly, factor: &Rational) {
        self.check(other).expect("theta parameters agree");
        if factor.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c * factor);
        }
    }

    pub fn sub(&self, other: &ThetaPoly) -> Result<ThetaPoly> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        Ok(out)
    }

    pub fn scale(&self, factor: &Rational) -> ThetaPoly {
        let mut out = ThetaPoly::zero(self.rays, self.genus);
        if factor.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * factor);
        }
        out
    }

    /// Product with `θ^{>g}` truncated to zero.
    pub fn mul(&self, other: &ThetaPoly) -> Result<ThetaPoly> {
        self.check(other)?;
        let mut out = ThetaPoly::zero(self.rays, self.genus);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> ThetaPoly {
        (0..k).fold(ThetaPoly::one(self.rays, self.genus), |acc, _| {
            acc.mul(self).expect("same parameters")
        })
    }

    /// The common degree `Σ b_ρ` of all monomials, or `None` if the
    /// polynomial is zero or inhomogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn to_records(&self) -> Vec<ThetaRecord> {
        self.terms
            .iter()
            .map(|(e, c)| ThetaRecord {
                exponents: e.clone(),
                coeff: format_rational(c),
            })
            .collect()
    }

    pub fn from_records(rays: usize, genus: u32, records: &[ThetaRecord]) -> Result<ThetaPoly> {
        let mut p = ThetaPoly::zero(rays, genus);
        for rec in records {
            if rec.exponents.len() != rays {
                return Err(Error::Document(format!(
                    "theta record has {} exponents, expected {rays}",
                    rec.exponents.len()
                )));
            }
            let c = parse_rational(&rec.coeff)
                .ok_or_else(|| Error::Document(format!("bad rational {:?}", rec.coeff)))?;
            p.add_term(rec.exponents.clone(), c);
        }
        Ok(p)
    }
}

impl fmt::Display for ThetaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rational(c))?;
            for (rho, &b) in e.iter().enumerate() {
                match b {
                    0 => {}
                    1 => write!(f, "*th{}", rho + 1)?,
                    _ => write!(f, "*th{}^{}", rho + 1, b)?,
                }
            }
        }
        Ok(())
    }
}

/// A monomial `Π_{ρ ∈ R} Λ_ρ^{k_ρ}` over an explicit ray set `R`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LMonomial {
    pub rays: Vec<usize>,
    pub exponents: Vec<u32>,
}

/// Push-forward of a monomial in the tautological classes of
/// `Π_{ρ ∈ R} P(W_ρ)` down to `J^r`:
/// `Π θ_ρ^{k_ρ-N_ρ+1}/(k_ρ-N_ρ+1)!` when every `k_ρ` lies in
/// `[N_ρ-1, N_ρ+g-1]`, zero otherwise.
pub fn segre_pushforward(mono: &LMonomial, data: &DegreeData) -> ThetaPoly {
    let (r, g) = (data.num_rays(), data.genus);
    match segre_exponents(mono, data) {
        Some((exps, denom)) => {
            let p = ThetaPoly::monomial(r, g, exps, Rational::new(One::one(), denom));
            debug_assert_eq!(
                p.degree().map(i64::from),
                Some(
                    mono.exponents.iter().map(|&k| k as i64).sum::<i64>()
                        - mono.rays.iter().map(|&rho| data.rank(rho) - 1).sum::<i64>()
                )
            );
            p
        }
        None => ThetaPoly::zero(r, g),
    }
}

/// Theta exponents and factorial denominator of the push-forward, or `None`
/// when some exponent falls outside its window.
pub(crate) fn segre_exponents(
    mono: &LMonomial,
    data: &DegreeData,
) -> Option<(Vec<u32>, num_bigint::BigInt)> {
    let g = data.genus as i64;
    let mut exps = vec![0u32; data.num_rays()];
    let mut denom = num_bigint::BigInt::one();
    for (&rho, &k) in mono.rays.iter().zip(&mono.exponents) {
        let b = k as i64 - data.rank(rho) + 1;
        if !(0..=g).contains(&b) {
            return None;
        }
        exps[rho] = b as u32;
        denom *= factorial(b as u64);
    }
    Some((exps, denom))
}

/// Total Chern class `c(W_ρ) = exp(-θ_ρ)`, truncated at `θ_ρ^g`.
pub fn picard_chern_class(rays: usize, genus: u32, ray: usize) -> ThetaPoly {
    let mut p = ThetaPoly::zero(rays, genus);
    for a in 0..=genus {
        let mut e = vec![0; rays];
        e[ray] = a;
        let sign: i64 = if a % 2 == 0 { 1 } else { -1 };
        p.add_term(e, Rational::new(sign.into(), factorial(a as u64)));
    }
    p
}
