//! Closed-form push-forwards for the special exponents
//! `m_ρ = N_ρ + g + a_ρ` (`ρ < r`), `m_r = N_r - (n-1)g - l - a_r`,
//! with positive `a_ρ` and `a_1 + ⋯ + a_{r-1} = a_r`.
//!
//! For these exponents every fixed point whose cone contains the last ray
//! contributes only negative total degree, and the remaining summands are
//! honest polynomials in the equivariant parameters, so they can be set to
//! zero. No Laurent expansion is involved.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{LocalizationError, Result};
use crate::fan::Fan;
use crate::moduli::DegreeData;
use crate::rational::{factorial, Rational};
use crate::theta::{segre_pushforward, LMonomial, ThetaPoly};

use super::series::{lambda_powers, ClassSeries, Truncation};

/// Exponents `m` induced by `a`; errors when `a` is malformed or `m_r ≤ 0`.
pub fn explicit_exponents(fan: &Fan, data: &DegreeData, a: &[i64]) -> Result<Vec<u32>> {
    let r = fan.num_rays();
    if a.len() != r {
        return Err(LocalizationError::ExplicitShape(format!(
            "expected {r} integers, got {}",
            a.len()
        ))
        .into());
    }
    if a.iter().any(|&x| x <= 0) {
        return Err(LocalizationError::ExplicitShape("all a_rho must be positive".into()).into());
    }
    if a[..r - 1].iter().sum::<i64>() != a[r - 1] {
        return Err(
            LocalizationError::ExplicitShape("a_1 + ... + a_(r-1) must equal a_r".into()).into(),
        );
    }
    let (g, n, l) = (data.genus as i64, fan.dim() as i64, fan.picard_rank() as i64);
    let last = data.rank(r - 1) - (n - 1) * g - l - a[r - 1];
    if last <= 0 {
        return Err(LocalizationError::ExplicitInfeasible { value: last }.into());
    }
    let mut m: Vec<u32> = (0..r - 1)
        .map(|rho| (data.rank(rho) + g + a[rho]) as u32)
        .collect();
    m.push(last as u32);
    Ok(m)
}

/// Sum over maximal cones not containing the last ray of
/// `q_x[Π_{ρ∉σ} Λ_ρ^{m_ρ} · Π_{ρ∈σ} Σ_b Λ_ρ^{m_ρ-N_ρ-b} θ_ρ^b / b!]`.
pub fn explicit_pushforward(fan: &Fan, data: &DegreeData, a: &[i64]) -> Result<ThetaPoly> {
    let m = explicit_exponents(fan, data, a)?;
    let (r, g) = (data.num_rays(), data.genus);
    let last = r - 1;
    let mut total = ThetaPoly::zero(r, g);
    for x in 0..fan.max_cones().len() {
        if fan.cone_contains(x, last) {
            continue;
        }
        let trunc = Truncation::for_cone(fan, data, x);
        let restriction = fan.restriction_coeffs(x);
        let base: Vec<u32> = trunc.surviving.iter().map(|&rho| m[rho]).collect();
        let mut acc = ClassSeries::monomial(&trunc, base);
        for &rho in &fan.max_cones()[x] {
            let p = m[rho] as i64 - data.rank(rho);
            debug_assert!(p >= 0);
            let powers = lambda_powers(restriction.row(rho).expect("ray in cone"), &trunc);
            let mut factor = ClassSeries::zero(r, g);
            for b in 0..=p.min(g as i64) {
                let j = (p - b) as usize;
                let Some(power) = powers.get(j) else { continue };
                let mut e = vec![0u32; r];
                e[rho] = b as u32;
                let theta = ThetaPoly::monomial(r, g, e, Rational::new(BigInt::one(), factorial(b as u64)));
                for (k, c) in power {
                    factor.add(0, k.clone(), theta.scale(&Rational::from_integer(c.clone())));
                }
            }
            acc = acc.mul(&factor, &trunc, None);
            if acc.is_zero() {
                break;
            }
        }
        for (_, k, coeff) in acc.iter() {
            let pushed = segre_pushforward(
                &LMonomial {
                    rays: trunc.surviving.clone(),
                    exponents: k.to_vec(),
                },
                data,
            );
            if !pushed.is_zero() {
                total.add_assign(&coeff.mul(&pushed)?);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::builtin::{f1, p1};
    use crate::localization::pushforward_class;
    use crate::moduli::derive_degree_data;

    #[test]
    fn p1_closed_form() {
        let fan = p1();
        for g in 0..4u32 {
            let d = 2 * g as i64 + 4;
            let dd = derive_degree_data(&fan, &fan.relation_matrix(), g, &[d]).unwrap();
            for a in 1..3 {
                let got = explicit_pushforward(&fan, &dd, &[a, a]).unwrap();
                // (θ_1 + θ_2)^g / g!
                let s = ThetaPoly::theta(2, g, 0).add(&ThetaPoly::theta(2, g, 1)).unwrap();
                let expected = s.pow(g).scale(&Rational::new(1.into(), factorial(g as u64)));
                assert_eq!(got, expected);
                let m = explicit_exponents(&fan, &dd, &[a, a]).unwrap();
                assert_eq!(m.iter().map(|&x| x as i64).sum::<i64>(), dd.dim_v);
                assert_eq!(pushforward_class(&fan, &dd, &m).unwrap(), got);
            }
        }
    }

    #[test]
    fn infeasible_and_malformed() {
        let fan = p1();
        let dd = derive_degree_data(&fan, &fan.relation_matrix(), 1, &[2]).unwrap();
        assert!(matches!(
            explicit_pushforward(&fan, &dd, &[1, 1]),
            Err(crate::Error::Localization(LocalizationError::ExplicitInfeasible { value: 0 }))
        ));
        assert!(explicit_pushforward(&fan, &dd, &[1, 2]).is_err());
        assert!(explicit_pushforward(&fan, &dd, &[0, 0]).is_err());
        let fan = f1();
        let dd = derive_degree_data(&fan, &fan.relation_matrix(), 0, &[3, 9]).unwrap();
        assert!(explicit_pushforward(&fan, &dd, &[1, 1, 1]).is_err());
    }
}
