//! Choice of a generic line in `Lie S` along which the localization sum is
//! restricted.

use serde::Serialize;

use crate::error::LocalizationError;
use crate::fan::Fan;
use crate::linalg;

/// An integer vector `v` (in the distinguished-cone basis) with the pairings
/// `<u_ρ(x), v>` for every maximal cone `x` and every `ρ ∈ σ(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Direction {
    pub vector: Vec<i64>,
    /// `pairings[x][i]` belongs to the `i`-th ray of `fan.max_cones()[x]`.
    pub pairings: Vec<Vec<i64>>,
}

impl Direction {
    /// Validates a user-supplied direction.
    pub fn new(fan: &Fan, vector: Vec<i64>) -> Result<Direction, LocalizationError> {
        if vector.len() != fan.dim() {
            return Err(LocalizationError::DirectionDimension {
                expected: fan.dim(),
                found: vector.len(),
            });
        }
        let mut pairings = Vec::with_capacity(fan.max_cones().len());
        for x in 0..fan.max_cones().len() {
            let row: Vec<i64> = fan
                .dual_basis(x)
                .vectors
                .iter()
                .map(|(_, u)| linalg::dot(u, &vector))
                .collect();
            if let Some(i) = row.iter().position(|&c| c == 0) {
                return Err(LocalizationError::DegenerateDirection {
                    cone: x + 1,
                    ray: fan.max_cones()[x][i] + 1,
                });
            }
            pairings.push(row);
        }
        Ok(Direction { vector, pairings })
    }

    pub fn pairing(&self, cone: usize, position: usize) -> i64 {
        self.pairings[cone][position]
    }
}

/// First `v = (1, B, B², …, B^{n-1})` with all pairings nonzero, trying
/// `B = 2, 3, …`.
pub fn choose_direction(fan: &Fan) -> Direction {
    let n = fan.dim();
    (2i64..)
        .find_map(|base| {
            let v: Vec<i64> = (0..n as u32).map(|i| base.pow(i)).collect();
            Direction::new(fan, v).ok()
        })
        .expect("a moment curve avoids finitely many hyperplanes")
}
