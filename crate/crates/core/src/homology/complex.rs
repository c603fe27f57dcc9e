//! Finite chain complexes of free abelian groups and their rational Betti numbers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// Cell counts per degree and the boundary maps between them.
///
/// `boundaries[k]` is the map from degree `k + 1` to degree `k`: it has `dims[k]`
/// rows and `dims[k + 1]` columns. The map out of degree 0 is zero and not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainComplexData {
    dims: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

/// On-disk forms of a chain complex.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ComplexFile {
    Explicit {
        dims: Vec<usize>,
        boundaries: Vec<Vec<Vec<i64>>>,
    },
    Facets {
        facets: Vec<Vec<u64>>,
    },
}

impl ChainComplexData {
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Input("a complex needs at least one degree".into()));
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::Input(format!(
                "{} degrees need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (k, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[k] || b.cols() != dims[k + 1] {
                return Err(Error::Input(format!(
                    "boundary out of degree {} is {}x{}, expected {}x{}",
                    k + 1,
                    b.rows(),
                    b.cols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].checked_mul(&boundaries[k])?.is_zero() {
                return Err(Error::Domain(format!(
                    "boundary maps out of degrees {} and {} do not compose to zero",
                    k,
                    k + 1
                )));
            }
        }
        Ok(ChainComplexData { dims, boundaries })
    }

    /// Simplicial chain complex of the simplicial complex generated by `facets`.
    ///
    /// Simplices are vertex sets sorted ascending and ordered lexicographically within
    /// each degree; the boundary of `[v_0, ..., v_k]` is `sum_i (-1)^i [.., v_i omitted, ..]`.
    pub fn from_facets(facets: &[Vec<u64>]) -> Result<Self> {
        if facets.is_empty() {
            return Err(Error::Input("no facets given".into()));
        }
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<u64>>> = Vec::new();
        for facet in facets {
            let mut f = facet.clone();
            f.sort_unstable();
            f.dedup();
            if f.len() != facet.len() || f.is_empty() {
                return Err(Error::Input(format!(
                    "facet {facet:?} repeats a vertex or is empty"
                )));
            }
            if f.len() > 24 {
                return Err(Error::Input(format!("facet {facet:?} is too large")));
            }
            let n = f.len();
            if by_dim.len() < n {
                by_dim.resize_with(n, Default::default);
            }
            for mask in 1u32..(1 << n) {
                let face: Vec<u64> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                by_dim[face.len() - 1].insert(face);
            }
        }
        let index: Vec<BTreeMap<&Vec<u64>, usize>> = by_dim
            .iter()
            .map(|faces| faces.iter().enumerate().map(|(i, f)| (f, i)).collect())
            .collect();
        let dims: Vec<usize> = by_dim.iter().map(|s| s.len()).collect();
        let mut boundaries = Vec::new();
        for k in 1..by_dim.len() {
            let mut b = IntMatrix::zeros(dims[k - 1], dims[k]);
            for (col, simplex) in by_dim[k].iter().enumerate() {
                for omit in 0..simplex.len() {
                    let mut face = simplex.clone();
                    face.remove(omit);
                    let row = index[k - 1][&face];
                    b[(row, col)] = if omit % 2 == 0 { 1 } else { -1 };
                }
            }
            boundaries.push(b);
        }
        Self::new(dims, boundaries)
    }

    /// Parses either `{"dims": [...], "boundaries": [...]}` or `{"facets": [...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile =
            serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        match file {
            ComplexFile::Explicit { dims, boundaries } => {
                if boundaries.len() + 1 != dims.len() {
                    return Err(Error::Input(format!(
                        "{} degrees need {} boundary maps, got {}",
                        dims.len(),
                        dims.len().saturating_sub(1),
                        boundaries.len()
                    )));
                }
                let mats = boundaries
                    .iter()
                    .enumerate()
                    .map(|(k, rows)| {
                        if rows.len() != dims[k] {
                            return Err(Error::Input(format!(
                                "boundary out of degree {} has {} rows, expected {}",
                                k + 1,
                                rows.len(),
                                dims[k]
                            )));
                        }
                        IntMatrix::from_rows(rows, dims[k + 1])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(dims, mats)
            }
            ComplexFile::Facets { facets } => Self::from_facets(&facets),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiProfile {
    pub betti: Vec<u64>,
}

impl BettiProfile {
    /// `b_i`, zero beyond the top degree.
    pub fn get(&self, i: usize) -> u64 {
        self.betti.get(i).copied().unwrap_or(0)
    }
}

/// `b_i = dims[i] - rank(d_i) - rank(d_{i+1})`.
pub fn betti(complex: &ChainComplexData) -> Result<BettiProfile> {
    let ranks = complex
        .boundaries
        .iter()
        .map(|b| smith_normal_form(b).map(|s| s.rank))
        .collect::<Result<Vec<_>>>()?;
    let n = complex.dims.len();
    let betti = (0..n)
        .map(|i| {
            let into = if i + 1 < n { ranks[i] } else { 0 };
            let out = if i > 0 { ranks[i - 1] } else { 0 };
            complex.dims[i]
                .checked_sub(into + out)
                .map(|b| b as u64)
                .ok_or_else(|| Error::Inconsistent(format!("negative Betti number in degree {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BettiProfile { betti })
}
