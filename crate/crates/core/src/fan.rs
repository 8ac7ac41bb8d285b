//! Smooth complete toric fans and their combinatorial data.
//!
//! A [`Fan`] is built from a document listing integer rays, maximal cones
//! (1-based ray indices) and a distinguished maximal cone. Validation checks
//! primitivity and distinctness of rays, unimodularity of every maximal cone,
//! and completeness through facet pairing: each codimension-one face of a
//! maximal cone must lie in exactly two maximal cones, and the maximal cones
//! must be connected through shared facets.
//!
//! After validation the rays are reindexed so that the distinguished cone
//! occupies the last `n` positions. Every index handed out by this module
//! (and by every module downstream) refers to that canonical order, with
//! indices counted from zero; [`Fan::permutation`] maps back to the document.
//!
//! Elements of the character lattice `M` are stored in the basis dual to the
//! distinguished cone: coordinate `j` of `m` is its pairing with the `j`-th
//! ray of the distinguished cone.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::FanError;
use crate::linalg::{self, IntMatrix};

/// Input schema for a fan. Ray and cone indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub distinguished: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    /// Sorted canonical ray indices, in document order of cones.
    max_cones: Vec<Vec<usize>>,
    distinguished: usize,
    /// `permutation[new] = original`, both zero-based.
    permutation: Vec<usize>,
    /// Rays expressed in the distinguished-cone basis.
    coords: Vec<Vec<i64>>,
    /// `duals[x][i]` is the dual vector of the `i`-th ray of `max_cones[x]`.
    duals: Vec<IntMatrix>,
    faces: HashSet<u64>,
}

/// The integers `a` with `e^λ + Σ_ν a[λ][ν] e^{l+ν} = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationMatrix {
    pub rows: IntMatrix,
}

impl RelationMatrix {
    pub fn picard_rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Coefficient `a_ν^λ` (zero-based `lambda < l`, `nu < n`).
    pub fn entry(&self, lambda: usize, nu: usize) -> i64 {
        self.rows[lambda][nu]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualBasis {
    pub cone: usize,
    /// `(ray, u_ray)` in the order the cone lists its rays.
    pub vectors: Vec<(usize, Vec<i64>)>,
}

impl DualBasis {
    pub fn get(&self, ray: usize) -> Option<&[i64]> {
        self.vectors
            .iter()
            .find(|(r, _)| *r == ray)
            .map(|(_, u)| u.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PrimitiveCollection(pub Vec<usize>);

/// Each class `Λ_ρ` with `ρ` in a maximal cone, written as an integer
/// combination of the classes outside that cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub cone: usize,
    /// Rays outside the cone, ascending.
    pub surviving: Vec<usize>,
    /// `(ρ, coefficients aligned with surviving)` for each `ρ` in the cone.
    pub rows: Vec<(usize, Vec<i64>)>,
}

impl Restriction {
    pub fn row(&self, ray: usize) -> Option<&[i64]> {
        self.rows
            .iter()
            .find(|(r, _)| *r == ray)
            .map(|(_, c)| c.as_slice())
    }
}

fn mask(indices: &[usize]) -> u64 {
    indices.iter().fold(0u64, |m, &i| m | (1u64 << i))
}

impl Fan {
    /// Parses a JSON document and validates it.
    pub fn parse(text: &str) -> Result<Fan, FanError> {
        let doc: FanDocument =
            serde_json::from_str(text).map_err(|e| FanError::Malformed(e.to_string()))?;
        Fan::from_document(&doc)
    }

    pub fn from_document(doc: &FanDocument) -> Result<Fan, FanError> {
        Fan::new(doc.rays.clone(), doc.max_cones.clone(), doc.distinguished)
    }

    /// Validates and reindexes a fan given with 1-based cone entries.
    pub fn new(
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
        distinguished: usize,
    ) -> Result<Fan, FanError> {
        let r = rays.len();
        if r == 0 {
            return Err(FanError::Empty);
        }
        if r > 64 {
            return Err(FanError::Malformed(format!("{r} rays; at most 64 are supported")));
        }
        let n = rays[0].len();
        if n == 0 {
            return Err(FanError::Malformed("rays have no coordinates".into()));
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != n {
                return Err(FanError::RayDimension {
                    ray: i + 1,
                    expected: n,
                    found: ray.len(),
                });
            }
            let g = linalg::gcd_all(ray);
            if g == 0 {
                return Err(FanError::ZeroRay { ray: i + 1 });
            }
            if g != 1 {
                return Err(FanError::NotPrimitive { ray: i + 1, gcd: g });
            }
        }
        let mut seen: HashMap<&[i64], usize> = HashMap::new();
        for (i, ray) in rays.iter().enumerate() {
            if let Some(&first) = seen.get(ray.as_slice()) {
                return Err(FanError::DuplicateRay {
                    first: first + 1,
                    second: i + 1,
                });
            }
            seen.insert(ray, i);
        }

        // Zero-based, sorted copies of the cones.
        let mut cones: Vec<Vec<usize>> = Vec::with_capacity(max_cones.len());
        let mut cone_ids: HashMap<Vec<usize>, usize> = HashMap::new();
        for (c, cone) in max_cones.iter().enumerate() {
            let mut idx = Vec::with_capacity(cone.len());
            for &i in cone {
                if i == 0 || i > r {
                    return Err(FanError::RayIndexOutOfRange { cone: c + 1, index: i });
                }
                idx.push(i - 1);
            }
            idx.sort_unstable();
            idx.dedup();
            if idx.len() != n {
                return Err(FanError::ConeSize {
                    cone: c + 1,
                    expected: n,
                    found: idx.len(),
                });
            }
            if let Some(&first) = cone_ids.get(&idx) {
                return Err(FanError::DuplicateCone {
                    first: first + 1,
                    second: c + 1,
                });
            }
            let m: IntMatrix = idx.iter().map(|&i| rays[i].clone()).collect();
            let det = linalg::determinant(&m);
            if det.abs() != 1 {
                return Err(FanError::NonUnimodular { cone: c + 1, det });
            }
            cone_ids.insert(idx.clone(), c);
            cones.push(idx);
        }
        if distinguished == 0 || distinguished > cones.len() {
            return Err(FanError::DistinguishedOutOfRange {
                index: distinguished,
                count: cones.len(),
            });
        }
        let used: u64 = cones.iter().fold(0, |m, c| m | mask(c));
        if let Some(ray) = (0..r).find(|&i| used & (1 << i) == 0) {
            return Err(FanError::UnusedRay { ray: ray + 1 });
        }

        // Facet pairing and connectivity of the dual graph.
        let masks: Vec<u64> = cones.iter().map(|c| mask(c)).collect();
        let mut facet_owners: HashMap<u64, Vec<usize>> = HashMap::new();
        for (c, &m) in masks.iter().enumerate() {
            for &i in &cones[c] {
                facet_owners.entry(m & !(1 << i)).or_default().push(c);
            }
        }
        for (c, cone) in cones.iter().enumerate() {
            for &i in cone {
                let owners = &facet_owners[&(masks[c] & !(1 << i))];
                if owners.len() != 2 {
                    let facet = cone.iter().filter(|&&j| j != i).map(|&j| j + 1).collect();
                    return Err(FanError::FacetPairing {
                        cone: c + 1,
                        facet,
                        count: owners.len(),
                    });
                }
            }
        }
        let mut reached = vec![false; cones.len()];
        let mut queue = VecDeque::from([0usize]);
        reached[0] = true;
        while let Some(c) = queue.pop_front() {
            for &i in &cones[c] {
                for &d in &facet_owners[&(masks[c] & !(1 << i))] {
                    if !reached[d] {
                        reached[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        if let Some(c) = reached.iter().position(|&x| !x) {
            return Err(FanError::Disconnected { cone: c + 1 });
        }

        // Canonical reindexing: distinguished rays last, relative order kept.
        let dist_mask = masks[distinguished - 1];
        let permutation: Vec<usize> = (0..r)
            .filter(|&i| dist_mask & (1 << i) == 0)
            .chain((0..r).filter(|&i| dist_mask & (1 << i) != 0))
            .collect();
        let mut new_index = vec![0usize; r];
        for (new, &old) in permutation.iter().enumerate() {
            new_index[old] = new;
        }
        let rays: Vec<Vec<i64>> = permutation.iter().map(|&o| rays[o].clone()).collect();
        let cones: Vec<Vec<usize>> = cones
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|&o| new_index[o]).collect();
                v.sort_unstable();
                v
            })
            .collect();

        let l = r - n;
        let dist_matrix: IntMatrix = rays[l..].to_vec();
        let dist_inv = linalg::unimodular_inverse(&dist_matrix)
            .expect("distinguished cone already checked unimodular");
        let coords: Vec<Vec<i64>> = rays.iter().map(|e| linalg::vec_mul(e, &dist_inv)).collect();
        let duals = cones
            .iter()
            .map(|c| {
                let m: IntMatrix = c.iter().map(|&i| coords[i].clone()).collect();
                let inv = linalg::unimodular_inverse(&m).expect("cone already checked unimodular");
                linalg::transpose(&inv)
            })
            .collect();
        let mut faces = HashSet::new();
        for c in &cones {
            let m = mask(c);
            // All submasks of m.
            let mut s = m;
            loop {
                faces.insert(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
        }

        Ok(Fan {
            dim: n,
            rays,
            max_cones: cones,
            distinguished: distinguished - 1,
            permutation,
            coords,
            duals,
            faces,
        })
    }

    /// Rank `n` of the lattice.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of rays `r`.
    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// `l = r - n`.
    pub fn picard_rank(&self) -> usize {
        self.rays.len() - self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn distinguished(&self) -> usize {
        self.distinguished
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Ray `ρ` in the distinguished-cone basis.
    pub fn coords(&self, ray: usize) -> &[i64] {
        &self.coords[ray]
    }

    pub fn cone_contains(&self, cone: usize, ray: usize) -> bool {
        self.max_cones[cone].binary_search(&ray).is_ok()
    }

    /// Rays outside a maximal cone, ascending.
    pub fn complement(&self, cone: usize) -> Vec<usize> {
        (0..self.num_rays())
            .filter(|&r| !self.cone_contains(cone, r))
            .collect()
    }

    /// Whether the rays span a cone of the fan (a face of some maximal cone).
    pub fn is_face(&self, rays: &[usize]) -> bool {
        rays.iter().all(|&r| r < self.num_rays()) && self.faces.contains(&mask(rays))
    }

    pub fn check_cone_index(&self, cone: usize) -> Result<(), FanError> {
        if cone < self.max_cones.len() {
            Ok(())
        } else {
            Err(FanError::ConeIndexOutOfRange {
                index: cone,
                count: self.max_cones.len(),
            })
        }
    }

    pub fn relation_matrix(&self) -> RelationMatrix {
        let l = self.picard_rank();
        let rows = (0..l)
            .map(|lambda| self.coords[lambda].iter().map(|&c| -c).collect())
            .collect();
        RelationMatrix { rows }
    }

    /// Minimal subsets of rays that span no cone, sorted lexicographically.
    pub fn primitive_collections(&self) -> Vec<PrimitiveCollection> {
        let r = self.num_rays();
        let mut found = Vec::new();
        // Primitive collections have at most n + 1 elements; grow candidates
        // from faces one size at a time.
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..=self.dim {
            let mut next = Vec::new();
            for base in &frontier {
                let start = base.last().map_or(0, |&x| x + 1);
                for extra in start..r {
                    let mut cand = base.clone();
                    cand.push(extra);
                    let m = mask(&cand);
                    if self.faces.contains(&m) {
                        next.push(cand);
                    } else if cand.iter().all(|&i| self.faces.contains(&(m & !(1 << i)))) {
                        found.push(PrimitiveCollection(cand));
                    }
                }
            }
            frontier = next;
        }
        found.sort();
        found
    }

    pub fn dual_basis(&self, cone: usize) -> DualBasis {
        DualBasis {
            cone,
            vectors: self.max_cones[cone]
                .iter()
                .zip(&self.duals[cone])
                .map(|(&r, u)| (r, u.clone()))
                .collect(),
        }
    }

    /// Pairing `<u_ρ(x), e^{ρ'}>` for `ρ` in cone `x`.
    pub fn dual_pairing(&self, cone: usize, ray: usize, other: usize) -> i64 {
        let pos = self.max_cones[cone]
            .iter()
            .position(|&r| r == ray)
            .expect("ray belongs to cone");
        linalg::dot(&self.duals[cone][pos], &self.coords[other])
    }

    /// `Λ_ρ = -Σ_{ρ' ∉ σ(x)} <u_ρ(x), e^{ρ'}> Λ_{ρ'}` for every `ρ ∈ σ(x)`.
    pub fn restriction_coeffs(&self, cone: usize) -> Restriction {
        let surviving = self.complement(cone);
        let rows = self.max_cones[cone]
            .iter()
            .zip(&self.duals[cone])
            .map(|(&rho, u)| {
                let coeffs = surviving
                    .iter()
                    .map(|&s| -linalg::dot(u, &self.coords[s]))
                    .collect();
                (rho, coeffs)
            })
            .collect();
        Restriction {
            cone,
            surviving,
            rows,
        }
    }

    /// The fan rendered back in the document's ray order.
    pub fn to_document(&self) -> FanDocument {
        let r = self.num_rays();
        let mut rays = vec![Vec::new(); r];
        for (new, &old) in self.permutation.iter().enumerate() {
            rays[old] = self.rays[new].clone();
        }
        let max_cones = self
            .max_cones
            .iter()
            .map(|c| {
                let mut v: Vec<usize> = c.iter().map(|&i| self.permutation[i] + 1).collect();
                v.sort_unstable();
                v
            })
            .collect();
        FanDocument {
            rays,
            max_cones,
            distinguished: self.distinguished + 1,
        }
    }
}

/// Fans used throughout tests and the self-test.
pub mod builtin {
    use super::Fan;

    /// The projective line.
    pub fn p1() -> Fan {
        Fan::new(vec![vec![-1], vec![1]], vec![vec![1], vec![2]], 2).expect("valid fan")
    }

    /// The first Hirzebruch surface.
    pub fn f1() -> Fan {
        Fan::new(
            vec![vec![-1, 1], vec![0, -1], vec![1, 0], vec![0, 1]],
            vec![vec![3, 4], vec![4, 1], vec![1, 2], vec![2, 3]],
            1,
        )
        .expect("valid fan")
    }

    pub fn p1xp1() -> Fan {
        Fan::new(
            vec![vec![-1, 0], vec![0, -1], vec![1, 0], vec![0, 1]],
            vec![vec![3, 4], vec![4, 1], vec![1, 2], vec![2, 3]],
            1,
        )
        .expect("valid fan")
    }

    /// Projective space of dimension `n`: rays `-(1,..,1)` then the standard
    /// basis, distinguished cone spanned by the standard basis.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays = vec![vec![-1i64; n]];
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            rays.push(e);
        }
        // The cone omitting ray 1 comes first and is distinguished.
        let cones: Vec<Vec<usize>> = (1..=n + 1)
            .map(|skip| (1..=n + 1).filter(|&i| i != skip).collect())
            .collect();
        Fan::new(rays, cones, 1).expect("valid fan")
    }
}

#[cfg(test)]
mod tests {
    use super::builtin::*;
    use super::*;

    #[test]
    fn p1_is_valid() {
        let fan = p1();
        assert_eq!(fan.dim(), 1);
        assert_eq!(fan.picard_rank(), 1);
        assert_eq!(fan.relation_matrix().rows, vec![vec![1]]);
        assert_eq!(fan.permutation(), &[0, 1]);
    }

    #[test]
    fn f1_relation_matrix() {
        let fan = f1();
        assert_eq!(fan.picard_rank(), 2);
        assert_eq!(fan.relation_matrix().rows, vec![vec![1, -1], vec![0, 1]]);
    }

    #[test]
    fn p1xp1_relation_matrix_is_identity() {
        assert_eq!(p1xp1().relation_matrix().rows, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn relation_identity_holds_in_original_coordinates() {
        for fan in [p1(), f1(), p1xp1(), projective_space(3)] {
            let a = fan.relation_matrix();
            let (n, l) = (fan.dim(), fan.picard_rank());
            for lambda in 0..l {
                for k in 0..n {
                    let s: i64 = fan.rays()[lambda][k]
                        + (0..n).map(|nu| a.entry(lambda, nu) * fan.rays()[l + nu][k]).sum::<i64>();
                    assert_eq!(s, 0);
                }
            }
        }
    }

    #[test]
    fn primitive_collections_examples() {
        let pc = |f: Fan| -> Vec<Vec<usize>> {
            f.primitive_collections().into_iter().map(|p| p.0).collect()
        };
        assert_eq!(pc(p1()), vec![vec![0, 1]]);
        assert_eq!(pc(p1xp1()), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(pc(f1()), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(pc(projective_space(2)), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn dual_basis_examples() {
        let fan = f1();
        // cone {3,4} is cone 0, {4,1} is cone 1 (zero-based rays 3,0)
        let d0 = fan.dual_basis(0);
        assert_eq!(d0.get(2), Some(&[1, 0][..]));
        assert_eq!(d0.get(3), Some(&[0, 1][..]));
        let d1 = fan.dual_basis(1);
        assert_eq!(d1.get(3), Some(&[1, 1][..]));
        assert_eq!(d1.get(0), Some(&[-1, 0][..]));
        let p = p1();
        assert_eq!(p.dual_basis(0).get(0), Some(&[-1][..]));
    }

    #[test]
    fn restriction_examples() {
        let p = p1();
        let r = p.restriction_coeffs(1);
        assert_eq!(r.surviving, vec![0]);
        assert_eq!(r.row(1), Some(&[1][..]));

        let f = f1();
        let r = f.restriction_coeffs(1);
        assert_eq!(r.surviving, vec![1, 2]);
        // Λ_4 = Λ_2 - Λ_3, Λ_1 = Λ_3
        assert_eq!(r.row(3), Some(&[1, -1][..]));
        assert_eq!(r.row(0), Some(&[0, 1][..]));

        let q = p1xp1();
        let r = q.restriction_coeffs(0);
        assert_eq!(r.row(2), Some(&[1, 0][..]));
        assert_eq!(r.row(3), Some(&[0, 1][..]));
    }

    #[test]
    fn parse_errors_name_offender() {
        let err = Fan::parse(r#"{"rays":[[-2],[1]],"max_cones":[[1],[2]],"distinguished":2}"#)
            .unwrap_err();
        assert_eq!(err, FanError::NotPrimitive { ray: 1, gcd: 2 });
        assert!(err.to_string().contains("ray 1 not primitive"));

        let err = Fan::parse(
            r#"{"rays":[[1,0],[1,2],[0,1]],"max_cones":[[1,2],[2,3]],"distinguished":1}"#,
        )
        .unwrap_err();
        assert_eq!(err, FanError::NonUnimodular { cone: 1, det: 2 });

        let err = Fan::parse(r#"{"rays":[[1],[1]],"max_cones":[[1],[2]],"distinguished":1}"#)
            .unwrap_err();
        assert_eq!(err, FanError::DuplicateRay { first: 1, second: 2 });

        let err = Fan::parse(r#"{"rays":[[-1],[1]],"max_cones":[[1],[2]],"distinguished":3}"#)
            .unwrap_err();
        assert!(matches!(err, FanError::DistinguishedOutOfRange { index: 3, .. }));

        // Three quadrants of the plane: two facets lie in a single cone.
        let err = Fan::parse(
            r#"{"rays":[[1,0],[0,1],[-1,0],[0,-1]],"max_cones":[[1,2],[2,3],[3,4]],"distinguished":1}"#,
        )
        .unwrap_err();
        assert!(matches!(err, FanError::FacetPairing { count: 1, .. }));

        let err = Fan::parse(r#"{"rays":[[1]],"max_cones":[[1]]}"#).unwrap_err();
        assert!(matches!(err, FanError::Malformed(_)));
    }

    #[test]
    fn reindexing_moves_distinguished_cone_last() {
        // F1 with cone {1,2} distinguished.
        let fan = Fan::new(
            vec![vec![-1, 1], vec![0, -1], vec![1, 0], vec![0, 1]],
            vec![vec![3, 4], vec![4, 1], vec![1, 2], vec![2, 3]],
            3,
        )
        .unwrap();
        assert_eq!(fan.permutation(), &[2, 3, 0, 1]);
        assert_eq!(fan.max_cones()[fan.distinguished()], vec![2, 3]);
        let again = Fan::from_document(&fan.to_document()).unwrap();
        assert_eq!(again.relation_matrix(), fan.relation_matrix());
    }

    #[test]
    fn dual_basis_is_inverse_transpose() {
        for fan in [p1(), f1(), p1xp1(), projective_space(3)] {
            for x in 0..fan.max_cones().len() {
                let db = fan.dual_basis(x);
                for (r1, u) in &db.vectors {
                    for (r2, _) in &db.vectors {
                        assert_eq!(linalg::dot(u, fan.coords(*r2)), (r1 == r2) as i64);
                    }
                }
            }
        }
    }
}
