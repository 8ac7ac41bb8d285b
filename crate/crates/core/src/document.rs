//! The flat JSON problem document read by the command-line tool.
//!
//! Vectors indexed by rays (`exponents`, and `degrees`/`ranks` in reports)
//! follow the ray order of the document; `ray_subset` lists 1-based ray
//! numbers of the document. `degrees` holds the free degrees, one for each
//! ray outside the distinguished cone, in document order. Conversion to the
//! library's canonical order happens here and nowhere else.

use serde::{Deserialize, Serialize};

use crate::error::{Error, LocalizationError, Result};
use crate::fan::{Fan, FanDocument};
use crate::moduli::{derive_degree_data, DegreeData};
use crate::theta::{ThetaPoly, ThetaRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    pub distinguished: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ray_subset: Option<Vec<usize>>,
}

impl ProblemDocument {
    pub fn parse(text: &str) -> Result<ProblemDocument> {
        serde_json::from_str(text).map_err(|e| Error::Document(format!("schema error: {e}")))
    }

    pub fn from_fan(fan: &Fan) -> ProblemDocument {
        let FanDocument {
            rays,
            max_cones,
            distinguished,
        } = fan.to_document();
        ProblemDocument {
            rays,
            max_cones,
            distinguished,
            genus: None,
            degrees: None,
            exponents: None,
            ray_subset: None,
        }
    }

    pub fn fan(&self) -> Result<Fan> {
        Ok(Fan::new(self.rays.clone(), self.max_cones.clone(), self.distinguished)?)
    }

    pub fn degree_data(&self, fan: &Fan) -> Result<DegreeData> {
        let genus = self.genus.ok_or_else(|| missing("genus"))?;
        let degrees = self.degrees.as_ref().ok_or_else(|| missing("degrees"))?;
        Ok(derive_degree_data(fan, &fan.relation_matrix(), genus, degrees)?)
    }

    /// Exponents in canonical order.
    pub fn exponents(&self, fan: &Fan) -> Result<Vec<u32>> {
        let m = self.exponents.as_ref().ok_or_else(|| missing("exponents"))?;
        if m.len() != fan.num_rays() {
            return Err(LocalizationError::ExponentLength {
                expected: fan.num_rays(),
                found: m.len(),
            }
            .into());
        }
        Ok(fan.permutation().iter().map(|&old| m[old]).collect())
    }

    /// Ray subset as sorted zero-based canonical indices.
    pub fn ray_subset(&self, fan: &Fan) -> Result<Vec<usize>> {
        let subset = self.ray_subset.as_ref().ok_or_else(|| missing("ray_subset"))?;
        let mut inverse = vec![0; fan.num_rays()];
        for (new, &old) in fan.permutation().iter().enumerate() {
            inverse[old] = new;
        }
        let mut out = Vec::with_capacity(subset.len());
        for &i in subset {
            if i == 0 || i > fan.num_rays() {
                return Err(LocalizationError::SubsetIndex { index: i }.into());
            }
            out.push(inverse[i - 1]);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

fn missing(field: &str) -> Error {
    Error::Document(format!("missing field `{field}`"))
}

/// Reorders a canonical per-ray vector into document order.
pub fn to_document_order<T: Clone>(fan: &Fan, values: &[T]) -> Vec<T> {
    let mut out = values.to_vec();
    for (new, &old) in fan.permutation().iter().enumerate() {
        out[old] = values[new].clone();
    }
    out
}

/// 1-based document ray numbers of canonical indices.
pub fn document_rays(fan: &Fan, rays: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = rays.iter().map(|&r| fan.permutation()[r] + 1).collect();
    out.sort_unstable();
    out
}

/// Serialization of a theta polynomial with exponents in document order,
/// sorted by exponent vector.
pub fn theta_records(fan: &Fan, p: &ThetaPoly) -> Vec<ThetaRecord> {
    let mut records: Vec<ThetaRecord> = p
        .to_records()
        .into_iter()
        .map(|rec| ThetaRecord {
            exponents: to_document_order(fan, &rec.exponents),
            coeff: rec.coeff,
        })
        .collect();
    records.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    records
}

#[cfg(test)]
mod tests {
    use super::*;

    const F1_PERMUTED: &str = r#"{
        "rays": [[1,0],[0,1],[-1,1],[0,-1]],
        "max_cones": [[1,2],[2,3],[3,4],[4,1]],
        "distinguished": 1,
        "genus": 1,
        "degrees": [4, 8],
        "exponents": [5, 3, 5, 7],
        "ray_subset": [3, 1]
    }"#;

    #[test]
    fn document_order_round_trip() {
        let doc = ProblemDocument::parse(F1_PERMUTED).unwrap();
        let fan = doc.fan().unwrap();
        assert_eq!(fan.permutation(), &[2, 3, 0, 1]);
        let m = doc.exponents(&fan).unwrap();
        assert_eq!(m, vec![5, 7, 5, 3]);
        assert_eq!(to_document_order(&fan, &m), vec![5, 3, 5, 7]);
        assert_eq!(doc.ray_subset(&fan).unwrap(), vec![0, 2]);
        assert_eq!(document_rays(&fan, &[0, 2]), vec![1, 3]);
        let dd = doc.degree_data(&fan).unwrap();
        assert_eq!(to_document_order(&fan, &dd.degrees), vec![4, 4, 4, 8]);
    }

    #[test]
    fn schema_errors() {
        assert!(ProblemDocument::parse("{").is_err());
        assert!(ProblemDocument::parse(r#"{"rays":[[1]],"max_cones":[[1]],"distinguished":1,"bogus":1}"#).is_err());
        let doc = ProblemDocument::parse(r#"{"rays":[[-1],[1]],"max_cones":[[1],[2]],"distinguished":2}"#).unwrap();
        let fan = doc.fan().unwrap();
        let err = doc.degree_data(&fan).unwrap_err();
        assert_eq!(err.to_string(), "document: missing field `genus`");
        let mut bad = doc.clone();
        bad.exponents = Some(vec![1]);
        assert!(bad.exponents(&fan).is_err());
        bad.ray_subset = Some(vec![0]);
        assert!(bad.ray_subset(&fan).is_err());
    }

    #[test]
    fn from_fan_round_trip() {
        let fan = crate::fan::builtin::f1();
        let doc = ProblemDocument::from_fan(&fan);
        assert_eq!(doc.fan().unwrap(), fan);
    }
}
