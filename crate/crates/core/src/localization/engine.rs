//! Fixed-point terms and the push-forward `q_*(Λ_1^{m_1} ⋯ Λ_r^{m_r})`.
//!
//! Each maximal cone `x` contributes
//! `Π_{ρ∉σ(x)} Λ_ρ^{m_ρ} · Π_{ρ∈σ(x)} (u_ρ(x)+Λ_ρ)^{m_ρ-N_ρ} exp(θ_ρ/(u_ρ(x)+Λ_ρ))`,
//! pushed forward along its fixed component. The total is a polynomial in the
//! equivariant parameters although each summand is only rational. Restricting
//! to a line `u = <u_ρ(x), v> t` turns every summand into a Laurent series in
//! `t`; the poles cancel in the sum and the `t^0` coefficient is the answer.

use rayon::prelude::*;

use crate::error::{LocalizationError, Result};
use crate::fan::Fan;
use crate::moduli::DegreeData;
use crate::theta::{segre_pushforward, LMonomial, ThetaPoly};

use super::direction::{choose_direction, Direction};
use super::series::{expand_weighted_factor, ClassSeries, TLaurentClass, Truncation};

pub(crate) fn check_exponents(data: &DegreeData, m: &[u32]) -> std::result::Result<(), LocalizationError> {
    if m.len() != data.num_rays() {
        return Err(LocalizationError::ExponentLength {
            expected: data.num_rays(),
            found: m.len(),
        });
    }
    Ok(())
}

/// The summand of the fixed component `W(x)`, expanded along `dir`.
pub fn fixed_point_term(
    fan: &Fan,
    data: &DegreeData,
    cone: usize,
    m: &[u32],
    dir: &Direction,
) -> Result<TLaurentClass> {
    fan.check_cone_index(cone)?;
    check_exponents(data, m)?;
    Ok(fixed_point_term_upto(fan, data, cone, m, dir, None)?)
}

/// Like [`fixed_point_term`], discarding `t`-exponents above `max_t`.
fn fixed_point_term_upto(
    fan: &Fan,
    data: &DegreeData,
    cone: usize,
    m: &[u32],
    dir: &Direction,
    max_t: Option<i64>,
) -> std::result::Result<TLaurentClass, LocalizationError> {
    let trunc = Truncation::for_cone(fan, data, cone);
    let restriction = fan.restriction_coeffs(cone);
    let (r, g) = (data.num_rays(), data.genus);

    let base_k: Vec<u32> = trunc.surviving.iter().map(|&rho| m[rho]).collect();
    let mut acc = ClassSeries::monomial(&trunc, base_k);
    if acc.is_zero() {
        return Ok(TLaurentClass::zero(r, g));
    }

    let mut factors = Vec::with_capacity(fan.dim());
    for (pos, &rho) in fan.max_cones()[cone].iter().enumerate() {
        let p = m[rho] as i64 - data.rank(rho);
        let comb = restriction.row(rho).expect("ray in cone");
        let c = dir.pairing(cone, pos);
        if c == 0 {
            return Err(LocalizationError::DegenerateDirection {
                cone: cone + 1,
                ray: rho + 1,
            });
        }
        factors.push(expand_weighted_factor(p, c, comb, rho, &trunc)?);
    }
    // Lowest t-exponent the not-yet-multiplied factors can still contribute.
    let mut tail_min: Vec<i64> = vec![0; factors.len() + 1];
    for i in (0..factors.len()).rev() {
        tail_min[i] = tail_min[i + 1] + factors[i].min_exponent().unwrap_or(0);
    }
    for (i, factor) in factors.iter().enumerate() {
        let limit = max_t.map(|mt| mt - tail_min[i + 1]);
        acc = acc.mul(factor, &trunc, limit);
        if acc.is_zero() {
            break;
        }
    }

    let mut out = TLaurentClass::zero(r, g);
    for (e, k, coeff) in acc.iter() {
        let mono = LMonomial {
            rays: trunc.surviving.clone(),
            exponents: k.to_vec(),
        };
        let pushed = segre_pushforward(&mono, data);
        if pushed.is_zero() {
            continue;
        }
        out.add(e, &coeff.mul(&pushed).expect("same theta parameters"));
    }
    Ok(out)
}

/// Per-cone terms and their sum.
#[derive(Debug, Clone)]
pub struct Localization {
    pub direction: Direction,
    pub terms: Vec<TLaurentClass>,
    pub total: TLaurentClass,
}

impl Localization {
    /// The `t^0` coefficient after checking that no pole survives.
    pub fn constant_term(&self) -> std::result::Result<ThetaPoly, LocalizationError> {
        if let Some((exponent, coeff)) = self.total.first_pole() {
            return Err(LocalizationError::Noncancellation {
                exponent,
                coefficient: coeff.to_string(),
            });
        }
        Ok(self.total.coefficient(0))
    }
}

/// Evaluates every fixed-point term along `dir`. With `full = false` the
/// positive powers of `t` are discarded early, since they never affect the
/// constant term or the pole check.
pub fn localize(
    fan: &Fan,
    data: &DegreeData,
    m: &[u32],
    dir: &Direction,
    full: bool,
) -> Result<Localization> {
    check_exponents(data, m)?;
    let max_t = if full { None } else { Some(0) };
    let terms = (0..fan.max_cones().len())
        .into_par_iter()
        .map(|x| fixed_point_term_upto(fan, data, x, m, dir, max_t))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut total = TLaurentClass::zero(data.num_rays(), data.genus);
    for t in &terms {
        total.add_assign(t);
    }
    Ok(Localization {
        direction: dir.clone(),
        terms,
        total,
    })
}

/// `q_*(Π Λ_ρ^{m_ρ}) ∈ H*(J^r)` along the default direction.
pub fn pushforward_class(fan: &Fan, data: &DegreeData, m: &[u32]) -> Result<ThetaPoly> {
    pushforward_class_along(fan, data, m, &choose_direction(fan))
}

pub fn pushforward_class_along(
    fan: &Fan,
    data: &DegreeData,
    m: &[u32],
    dir: &Direction,
) -> Result<ThetaPoly> {
    let loc = localize(fan, data, m, dir, false)?;
    let out = loc.constant_term()?;
    check_degree(data, m, &out)?;
    Ok(out)
}

/// The push-forward is homogeneous of theta degree `Σ m_ρ - dim Y`.
pub(crate) fn check_degree(
    data: &DegreeData,
    m: &[u32],
    out: &ThetaPoly,
) -> std::result::Result<(), LocalizationError> {
    if out.is_zero() {
        return Ok(());
    }
    let expected = m.iter().map(|&x| x as i64).sum::<i64>() - data.dim_y;
    if out.degree().map(i64::from) != Some(expected) {
        return Err(LocalizationError::Inhomogeneous { expected });
    }
    Ok(())
}
