//! Degree data and dimension constants of the morphism space.

use serde::Serialize;

use crate::error::DegreeError;
use crate::fan::{Fan, RelationMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeData {
    pub genus: u32,
    /// Multi-degree `d_ρ`, all `r` entries.
    pub degrees: Vec<i64>,
    /// Picard bundle ranks `N_ρ = d_ρ - (g - 1)`.
    pub ranks: Vec<i64>,
    /// Expected dimension of the morphism space.
    pub dim_mor: i64,
    pub dim_w: i64,
    pub dim_v: i64,
    /// Dimension of the toric fibre over the Jacobian power.
    pub dim_y: i64,
}

impl DegreeData {
    pub fn num_rays(&self) -> usize {
        self.degrees.len()
    }

    pub fn rank(&self, ray: usize) -> i64 {
        self.ranks[ray]
    }
}

/// Completes the free degrees `d_1..d_l` through the relation matrix and
/// derives ranks and dimensions.
pub fn derive_degree_data(
    fan: &Fan,
    relations: &RelationMatrix,
    genus: u32,
    free_degrees: &[i64],
) -> Result<DegreeData, DegreeError> {
    let (n, l) = (fan.dim(), fan.picard_rank());
    if free_degrees.len() != l {
        return Err(DegreeError::WrongLength {
            expected: l,
            found: free_degrees.len(),
        });
    }
    let g = genus as i64;
    let mut degrees = free_degrees.to_vec();
    for nu in 0..n {
        degrees.push((0..l).map(|lambda| relations.entry(lambda, nu) * free_degrees[lambda]).sum());
    }
    if let Some((ray, &degree)) = degrees.iter().enumerate().find(|(_, &d)| d < 2 * g) {
        return Err(DegreeError::BelowBound {
            ray: ray + 1,
            degree,
            genus,
        });
    }
    let ranks: Vec<i64> = degrees.iter().map(|d| d - (g - 1)).collect();
    let total_degree: i64 = degrees.iter().sum();
    let (n, l, r) = (n as i64, l as i64, (n + l) as i64);
    let dim_mor = total_degree - n * (g - 1);
    let dim_w = total_degree + n;
    let dim_v = ranks.iter().sum::<i64>() + l * (g - 1);
    let dim_y = dim_w - r * g;
    debug_assert_eq!(dim_v, dim_mor);
    debug_assert_eq!(dim_y, ranks.iter().sum::<i64>() - l);
    Ok(DegreeData {
        genus,
        degrees,
        ranks,
        dim_mor,
        dim_w,
        dim_v,
        dim_y,
    })
}

/// Euler characteristic of the fibre: `Σ_x Π_{ρ ∉ σ(x)} N_ρ`.
pub fn euler_char_y(fan: &Fan, data: &DegreeData) -> i64 {
    (0..fan.max_cones().len())
        .map(|x| fan.complement(x).iter().map(|&r| data.ranks[r]).product::<i64>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::builtin::{f1, p1};

    fn data(fan: &Fan, g: u32, d: &[i64]) -> Result<DegreeData, DegreeError> {
        derive_degree_data(fan, &fan.relation_matrix(), g, d)
    }

    #[test]
    fn p1_genus_one() {
        let dd = data(&p1(), 1, &[2]).unwrap();
        assert_eq!(dd.degrees, vec![2, 2]);
        assert_eq!(dd.ranks, vec![2, 2]);
        assert_eq!(dd.dim_v, 4);
        assert_eq!(dd.dim_w, 5);
        assert_eq!(dd.dim_y, 3);
    }

    #[test]
    fn f1_completion() {
        let dd = data(&f1(), 1, &[4, 8]).unwrap();
        assert_eq!(dd.degrees, vec![4, 8, 4, 4]);
        assert_eq!(dd.ranks, vec![4, 8, 4, 4]);
        assert_eq!(dd.dim_v, 20);
        assert_eq!(dd.dim_v, dd.dim_mor);
    }

    #[test]
    fn degree_bound_violation() {
        let err = data(&f1(), 1, &[4, 4]).unwrap_err();
        assert_eq!(err, DegreeError::BelowBound { ray: 4, degree: 0, genus: 1 });
        assert!(err.to_string().contains("rho=4"));
        assert!(matches!(data(&f1(), 1, &[4]), Err(DegreeError::WrongLength { .. })));
    }

    #[test]
    fn euler_characteristics() {
        let fan = p1();
        assert_eq!(euler_char_y(&fan, &data(&fan, 0, &[1]).unwrap()), 4);
        for g in 0..5u32 {
            let d = 2 * g as i64 + 3;
            let dd = data(&fan, g, &[d]).unwrap();
            assert_eq!(euler_char_y(&fan, &dd), 2 * (d - g as i64 + 1));
        }
        let fan = f1();
        let dd = data(&fan, 0, &[1, 3]).unwrap();
        assert_eq!(dd.degrees, vec![1, 3, 1, 2]);
        assert_eq!(dd.ranks, vec![2, 4, 2, 3]);
        assert_eq!(euler_char_y(&fan, &dd), 28);
    }
}
