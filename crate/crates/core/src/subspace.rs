use crate::error::{invalid, Error, Result};
use crate::numerics::{orthogonal_complement, orthonormalize, Matrix, Tolerance, Vector};

/// Orthonormality defect accepted by [`Subspace::from_orthonormal`].
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// A linear subspace of ℝ^ambient held as an orthonormal column basis.
///
/// The zero subspace is allowed (zero columns): it shows up as `𝔳₀ = 0` and as
/// the complement of the full space.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: Matrix) -> Result<Self> {
        let k = basis.ncols();
        if k > basis.nrows() {
            return Err(invalid(format!("{k} basis vectors in a {}-dimensional space", basis.nrows())));
        }
        let defect = (basis.transpose() * &basis - Matrix::identity(k, k)).amax();
        if defect > ORTHONORMAL_TOL {
            return Err(invalid(format!("basis is not orthonormal (defect {defect:.3e})")));
        }
        Ok(Self { basis })
    }

    /// Span of the columns of `m`, orthonormalised.
    pub fn span(m: &Matrix, tol: &Tolerance) -> Self {
        Self { basis: orthonormalize(m, tol) }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vector], tol: &Tolerance) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, got: v.len() });
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        Ok(Self::span(&Matrix::from_columns(vectors), tol))
    }

    pub fn zero(ambient: usize) -> Self {
        Self { basis: Matrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { basis: Matrix::identity(ambient, ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> Vector {
        self.basis.column(i).into_owned()
    }

    pub fn complement(&self) -> Self {
        let c = orthogonal_complement(&self.basis, &Tolerance::default());
        Self { basis: c }
    }

    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.transpose()
    }

    pub fn project(&self, v: &Vector) -> Vector {
        &self.basis * (self.basis.transpose() * v)
    }

    /// Coordinates `Bᵀv` of `v` in this basis.
    pub fn coordinates(&self, v: &Vector) -> Vector {
        self.basis.transpose() * v
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &Vector) -> f64 {
        (v - self.project(v)).norm()
    }

    pub fn contains(&self, v: &Vector, tol: f64) -> bool {
        self.residual(v) <= tol * v.norm().max(1.0)
    }

    /// Image under a linear map of the ambient space.
    pub fn transformed(&self, k: &Matrix) -> Result<Self> {
        if k.nrows() != self.ambient_dim() || k.ncols() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: k.nrows() });
        }
        Ok(Self::span(&(k * &self.basis), &Tolerance::default()))
    }

    /// Largest principal-angle sine between two subspaces of equal dimension.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (0..other.dim()).map(|i| self.residual(&other.vector(i))).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Sampler;

    #[test]
    fn complement_and_projection() {
        let mut s = Sampler::new(1);
        let w = Subspace::from_orthonormal(s.frame(6, 2)).unwrap();
        let c = w.complement();
        assert_eq!(c.dim(), 4);
        let p = w.projector() + c.projector();
        assert!((p - Matrix::identity(6, 6)).amax() < 1e-12);
        assert!(w.contains(&w.vector(1), 1e-12));
        assert!(!w.contains(&c.vector(0), 1e-6));
    }

    #[test]
    fn rejects_non_orthonormal() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(Subspace::from_orthonormal(m.clone()).is_err());
        assert_eq!(Subspace::span(&m, &Tolerance::default()).dim(), 2);
    }

    #[test]
    fn zero_and_full() {
        assert_eq!(Subspace::zero(4).complement().dim(), 4);
        assert_eq!(Subspace::full(4).complement().dim(), 0);
    }

    #[test]
    fn distance_basis_independent() {
        let mut s = Sampler::new(2);
        let w = Subspace::from_orthonormal(s.frame(5, 3)).unwrap();
        let rot = crate::numerics::matrix_exp(&{
            let a = s.gaussian_matrix(3, 3);
            &a - a.transpose()
        })
        .unwrap();
        let w2 = Subspace::from_orthonormal(w.basis() * rot).unwrap();
        assert!(w.distance(&w2) < 1e-12);
    }
}
