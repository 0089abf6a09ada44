//! JSON file formats for lattices (optionally with a map), bases,
//! matrices and chain bases.

use std::sync::Arc;

use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{GfError, GfMatrix, JordanChainBasis};
use crate::jnb::JordanNormalBase;
use crate::lattice::{FiniteLattice, LatticeError};
use crate::lattice_map::{JoinHom, MapError};
use crate::subspace_lattice::SubspaceLatticeModel;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("unknown element {0:?}")]
    UnknownLabel(String),
    #[error("{0}")]
    Invalid(String),
}

/// `{"elements": [...], "covers": [[lo, hi], ...], "map": {label: label}}`,
/// with `map` optional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<IndexMap<String, String>>,
}

impl LatticeFile {
    /// Cover pairs are written in minimal form, in index order.
    pub fn from_lattice(lattice: &FiniteLattice, map: Option<&JoinHom>) -> Self {
        let label = |x: usize| lattice.label(x).to_owned();
        Self {
            elements: lattice.labels().to_vec(),
            covers: lattice
                .cover_pairs()
                .into_iter()
                .map(|(x, y)| [label(x), label(y)])
                .collect(),
            map: map.map(|h| (0..lattice.len()).map(|x| (label(x), label(h.apply(x)))).collect()),
        }
    }

    /// The subspace lattice with its subspace labels, and the induced map
    /// of `a` if given.
    pub fn from_model(model: &SubspaceLatticeModel, a: Option<&GfMatrix>) -> Result<Self, FormatError> {
        let h = a
            .map(|a| model.induced_join_hom(a))
            .transpose()
            .map_err(|e| FormatError::Invalid(e.to_string()))?;
        Ok(Self::from_lattice(model.lattice(), h.as_ref()))
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice, FormatError> {
        let covers: Vec<(&str, &str)> = self.covers.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let labels: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        Ok(FiniteLattice::build(&labels, &covers)?)
    }

    /// The map, if present, as a join-homomorphism on `lattice`.
    pub fn to_join_hom(&self, lattice: Arc<FiniteLattice>) -> Result<Option<JoinHom>, FormatError> {
        let Some(map) = &self.map else {
            return Ok(None);
        };
        let lookup = |s: &str| lattice.index_of(s).ok_or_else(|| FormatError::UnknownLabel(s.to_owned()));
        let mut values = vec![None; lattice.len()];
        for (k, v) in map {
            values[lookup(k)?] = Some(lookup(v)?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| MapError::MissingValue(lattice.label(i).to_owned())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(JoinHom::new(lattice, values)?))
    }

    pub fn load(&self) -> Result<(Arc<FiniteLattice>, Option<JoinHom>), FormatError> {
        let lattice = Arc::new(self.to_lattice()?);
        let map = self.to_join_hom(lattice.clone())?;
        Ok((lattice, map))
    }
}

/// `{"chains": [[label, ...], ...]}`, each chain bottom first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseFile {
    pub chains: Vec<Vec<String>>,
}

impl BaseFile {
    pub fn from_base(lattice: &FiniteLattice, base: &JordanNormalBase) -> Self {
        Self {
            chains: base.labelled(lattice),
        }
    }

    /// Chains are kept in file order.
    pub fn to_base(&self, lattice: &FiniteLattice) -> Result<JordanNormalBase, FormatError> {
        let chains = self
            .chains
            .iter()
            .map(|c| {
                c.iter()
                    .map(|s| lattice.index_of(s).ok_or_else(|| FormatError::UnknownLabel(s.clone())))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(JordanNormalBase::from_chains(chains))
    }
}

/// `{"prime": p, "n": n, "rows": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub prime: u32,
    pub n: usize,
    pub rows: Vec<Vec<u64>>,
}

impl MatrixFile {
    pub fn from_matrix(a: &GfMatrix) -> Self {
        Self {
            prime: a.prime(),
            n: a.rows(),
            rows: a.row_iter().map(|r| r.iter().map(|&v| v as u64).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<GfMatrix, FormatError> {
        if self.rows.len() != self.n {
            return Err(FormatError::Invalid(format!(
                "\"n\" is {} but there are {} rows",
                self.n,
                self.rows.len()
            )));
        }
        Ok(GfMatrix::from_rows(self.prime, self.n, &self.rows)?)
    }
}

/// `{"prime": p, "chains": [[vector, ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub prime: u32,
    pub chains: Vec<Vec<Vec<u32>>>,
}

impl ChainFile {
    pub fn from_basis(basis: &JordanChainBasis) -> Self {
        Self {
            prime: basis.prime,
            chains: basis.chains.clone(),
        }
    }

    /// The ambient dimension is the common vector length.
    pub fn to_basis(&self) -> Result<JordanChainBasis, FormatError> {
        let mut lengths = self.chains.iter().flatten().map(Vec::len);
        let dim = lengths.next().unwrap_or(0);
        if lengths.any(|l| l != dim) {
            return Err(FormatError::Invalid("chain vectors have different lengths".into()));
        }
        Ok(JordanChainBasis {
            prime: self.prime,
            dim,
            chains: self.chains.clone(),
        })
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::boolean_lattice;

    const B2: &str = r#"{"elements":["0","a","b","1"],"covers":[["0","a"],["0","b"],["a","1"],["b","1"]]}"#;

    #[test]
    fn lattice_file_round_trip() {
        let file: LatticeFile = from_json(B2).unwrap();
        let (l, map) = file.load().unwrap();
        assert!(map.is_none());
        assert_eq!(*l, boolean_lattice(2).unwrap());
        assert_eq!(LatticeFile::from_lattice(&l, None), file);
    }

    #[test]
    fn map_is_read_by_label() {
        let text = r#"{"elements":["0","a","b","1"],"covers":[["0","a"],["0","b"],["a","1"],["b","1"]],
                       "map":{"0":"0","a":"b","b":"b","1":"b"}}"#;
        let (_, map) = from_json::<LatticeFile>(text).unwrap().load().unwrap();
        assert_eq!(map.unwrap().values(), &[0, 2, 2, 2]);
    }

    #[test]
    fn map_errors_use_labels() {
        let text = r#"{"elements":["0","a","b","1"],"covers":[["0","a"],["0","b"],["a","1"],["b","1"]],
                       "map":{"0":"0","a":"b","b":"0","1":"0"}}"#;
        let err = from_json::<LatticeFile>(text).unwrap().load().unwrap_err();
        assert!(err.to_string().contains("λ(a ∨ b)"), "{err}");

        let missing = r#"{"elements":["0","1"],"covers":[["0","1"]],"map":{"0":"0"}}"#;
        let err = from_json::<LatticeFile>(missing).unwrap().load().unwrap_err();
        assert!(matches!(err, FormatError::Map(MapError::MissingValue(ref l)) if l == "1"));
    }

    #[test]
    fn malformed_cover_reports_location() {
        let text = "{\"elements\":[\"0\",\"1\"],\n\"covers\":[[\"0\",\"1\",\"2\"]]}";
        let err = from_json::<LatticeFile>(text).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn matrix_file_checks_shape() {
        let ok: MatrixFile = from_json(r#"{"prime":2,"n":2,"rows":[[0,1],[0,0]]}"#).unwrap();
        assert_eq!(ok.to_matrix().unwrap().to_rows(), vec![vec![0, 1], vec![0, 0]]);
        let bad: MatrixFile = from_json(r#"{"prime":2,"n":3,"rows":[[0,1],[0,0]]}"#).unwrap();
        assert!(bad.to_matrix().is_err());
        let bad: MatrixFile = from_json(r#"{"prime":2,"n":2,"rows":[[0,2],[0,0]]}"#).unwrap();
        assert!(matches!(bad.to_matrix(), Err(FormatError::Gf(GfError::EntryOutOfRange { .. }))));
    }
}
