//! JSON subspace files.
//!
//! A file stores `W = 𝔳₀^⊥` as rows of realified coordinates; each row has
//! length `dim_ℝ 𝔽 · (n − 1)` with the components of each slot in the order
//! `(1, e₁, …)`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraTag;
use crate::error::{invalid, Result};
use crate::model::SolvableModel;
use crate::numerics::{rank, Matrix, Tolerance, Vector};
use crate::subspace::{Subspace, ORTHONORMAL_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceFile {
    pub algebra: AlgebraTag,
    pub n: usize,
    pub basis: Vec<Vec<f64>>,
}

/// A validated file: the model, the orthonormalized `W`, and whether the
/// rows had to be orthonormalized.
#[derive(Debug, Clone)]
pub struct LoadedSubspace {
    pub model: SolvableModel,
    pub w: Subspace,
    pub orthonormalized: bool,
}

impl SubspaceFile {
    pub fn new(model: &SolvableModel, w: &Subspace) -> Self {
        let basis = (0..w.dim()).map(|i| w.vector(i).iter().copied().collect()).collect();
        Self { algebra: model.tag(), n: model.n(), basis }
    }

    pub fn validate(&self) -> Result<LoadedSubspace> {
        let model = SolvableModel::new(self.algebra, self.n)?;
        let dim = model.dim_v();
        if let Some((i, row)) = self.basis.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(invalid(format!("basis row {i} has length {}, expected {dim} for {model}", row.len())));
        }
        if self.basis.iter().flatten().any(|x| !x.is_finite()) {
            return Err(invalid("basis contains non-finite entries"));
        }
        if self.basis.is_empty() {
            return Ok(LoadedSubspace { model, w: Subspace::zero(dim), orthonormalized: false });
        }
        let cols: Vec<Vector> = self.basis.iter().map(|r| Vector::from_column_slice(r)).collect();
        let m = Matrix::from_columns(&cols);
        let k = cols.len();
        let tol = Tolerance::default();
        if rank(&m, &tol) < k {
            return Err(invalid(format!("the {k} basis rows are linearly dependent")));
        }
        let defect = (m.transpose() * &m - Matrix::identity(k, k)).amax();
        if defect <= ORTHONORMAL_TOL {
            Ok(LoadedSubspace { model, w: Subspace::from_orthonormal(m)?, orthonormalized: false })
        } else {
            Ok(LoadedSubspace { model, w: Subspace::span(&m, &tol), orthonormalized: true })
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}
