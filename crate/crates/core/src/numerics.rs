//! Small dense real linear algebra on top of `nalgebra`.
//!
//! All matrices in this crate are at most 70 × 70 and well conditioned, so
//! rank decisions use a single relative threshold (`rank_tol · σ_max`) with an
//! absolute floor that classifies pure rounding noise as zero.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Singular values below this are rounding noise regardless of scale.
const ABS_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Numerical thresholds shared by every rank and constancy decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Relative threshold on singular values.
    pub rank_tol: f64,
    /// Threshold on identity defects (symmetry, angle constancy, closure).
    pub defect_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rank_tol: 1e-9, defect_tol: 1e-8 }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, defect_tol: f64) -> Result<Self> {
        if !(rank_tol > 0.0 && defect_tol > 0.0) {
            return Err(invalid("tolerances must be strictly positive"));
        }
        Ok(Self { rank_tol, defect_tol })
    }

    pub fn with_defect(self, defect_tol: f64) -> Result<Self> {
        Self::new(self.rank_tol, defect_tol)
    }

    fn threshold(&self, sigma_max: f64) -> f64 {
        (self.rank_tol * sigma_max).max(ABS_FLOOR)
    }
}

/// Orthonormal basis of the column span, one column per numerical rank.
///
/// Modified Gram–Schmidt with one re-orthogonalisation pass, so columns that
/// are already orthonormal come back unchanged (up to rounding) and in order.
pub fn orthonormalize(m: &Matrix, tol: &Tolerance) -> Matrix {
    let rows = m.nrows();
    let scale = m.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
    let thr = tol.threshold(scale);
    let mut kept: Vec<Vector> = Vec::new();
    for col in m.column_iter() {
        let mut v: Vector = col.into_owned();
        for _ in 0..2 {
            for q in &kept {
                let p = q.dot(&v);
                v.axpy(-p, q, 1.0);
            }
        }
        let n = v.norm();
        if n > thr {
            kept.push(v / n);
        }
    }
    if kept.is_empty() {
        return Matrix::zeros(rows, 0);
    }
    Matrix::from_columns(&kept)
}

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(s: &Matrix, tol: &Tolerance) -> Result<(Vector, Matrix)> {
    if !s.is_square() {
        return Err(invalid(format!("symmetric_eigen needs a square matrix, got {}×{}", s.nrows(), s.ncols())));
    }
    let asym = (s - s.transpose()).amax();
    if asym > tol.defect_tol * s.amax().max(1.0) {
        return Err(invalid(format!("matrix is not symmetric (defect {asym:.3e})")));
    }
    let n = s.nrows();
    if n == 0 {
        return Ok((Vector::zeros(0), Matrix::zeros(0, 0)));
    }
    let sym = (s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors =
        Matrix::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    Ok((values, vectors))
}

/// Singular values and the full right singular basis (`cols × cols`).
fn full_right_svd(l: &Matrix) -> (Vec<f64>, Matrix) {
    let (r, c) = l.shape();
    let padded = if r < c {
        let mut p = Matrix::zeros(c, c);
        p.view_mut((0, 0), (r, c)).copy_from(l);
        p
    } else {
        l.clone()
    };
    let svd = SVD::new(padded, false, true);
    let vt = svd.v_t.expect("requested v_t");
    (svd.singular_values.iter().copied().collect(), vt)
}

/// Singular values in descending order.
pub fn singular_values(l: &Matrix) -> Vec<f64> {
    if l.nrows() == 0 || l.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(l.clone(), false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank.
pub fn rank(l: &Matrix, tol: &Tolerance) -> usize {
    let s = singular_values(l);
    let Some(&max) = s.first() else { return 0 };
    let thr = tol.threshold(max);
    s.iter().filter(|&&x| x > thr).count()
}

/// Orthonormal basis (as columns) of `{x : Lx = 0}`.
pub fn nullspace(l: &Matrix, tol: &Tolerance) -> Matrix {
    let c = l.ncols();
    if c == 0 {
        return Matrix::zeros(0, 0);
    }
    if l.nrows() == 0 {
        return Matrix::identity(c, c);
    }
    let (s, vt) = full_right_svd(l);
    let max = s.iter().copied().fold(0.0, f64::max);
    let thr = tol.threshold(max);
    let null: Vec<Vector> =
        (0..c).filter(|&i| s.get(i).is_none_or(|&x| x <= thr)).map(|i| vt.row(i).transpose()).collect();
    if null.is_empty() {
        Matrix::zeros(c, 0)
    } else {
        Matrix::from_columns(&null)
    }
}

/// Orthonormal basis of the orthogonal complement of the column span of an
/// orthonormal `basis` in ℝ^ambient.
pub fn orthogonal_complement(basis: &Matrix, tol: &Tolerance) -> Matrix {
    let n = basis.nrows();
    if basis.ncols() == 0 {
        return Matrix::identity(n, n);
    }
    nullspace(&basis.transpose(), tol)
}

/// Matrix exponential (scaling and squaring, Padé approximant).
pub fn matrix_exp(x: &Matrix) -> Result<Matrix> {
    if !x.is_square() {
        return Err(invalid("matrix_exp needs a square matrix"));
    }
    if x.nrows() == 0 {
        return Ok(x.clone());
    }
    Ok(x.exp())
}

/// Largest absolute entry of `X + Xᵀ`.
pub fn skew_defect(x: &Matrix) -> f64 {
    (x + x.transpose()).amax()
}

/// Seeded sampler over ChaCha8.
///
/// Uniform directions are normalised standard Gaussian draws.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn gaussian(&mut self, dim: usize) -> Vector {
        Vector::from_iterator(dim, (0..dim).map(|_| self.normal()))
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        // column-major fill keeps the stream order independent of nalgebra internals
        let data: Vec<f64> = (0..rows * cols).map(|_| self.normal()).collect();
        Matrix::from_vec(rows, cols, data)
    }

    pub fn unit(&mut self, dim: usize) -> Vector {
        assert!(dim >= 1, "unit vector needs dim >= 1");
        loop {
            let g = self.gaussian(dim);
            let n = g.norm();
            if n > 1e-12 {
                return g / n;
            }
        }
    }

    /// Orthonormal basis of a Haar-random `k`-plane in ℝ^ambient.
    pub fn frame(&mut self, ambient: usize, k: usize) -> Matrix {
        loop {
            let g = self.gaussian_matrix(ambient, k);
            let q = orthonormalize(&g, &Tolerance::default());
            if q.ncols() == k {
                return q;
            }
        }
    }

    /// Derives an independent sub-seed.
    pub fn fork(&mut self) -> u64 {
        self.rng.random()
    }
}

/// Unit vector in ℝ^dim, deterministic in `seed`.
pub fn random_unit(dim: usize, seed: u64) -> Vector {
    Sampler::new(seed).unit(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn orthonormalize_identity_and_duplicates() {
        let i = Matrix::identity(4, 4);
        assert_eq!(orthonormalize(&i, &tol()), i);
        let v = Vector::from_vec(vec![3.0, 0.0, 4.0]);
        let m = Matrix::from_columns(&[v.clone(), v.clone()]);
        let q = orthonormalize(&m, &tol());
        assert_eq!(q.ncols(), 1);
        assert_relative_eq!(q.column(0).into_owned(), v / 5.0, epsilon = 1e-15);
        assert_eq!(orthonormalize(&Matrix::zeros(3, 2), &tol()).ncols(), 0);
    }

    #[test]
    fn orthonormalize_random_gram() {
        let mut s = Sampler::new(1);
        let q = orthonormalize(&s.gaussian_matrix(8, 3), &tol());
        let gram = q.transpose() * &q;
        assert!((gram - Matrix::identity(3, 3)).amax() < 1e-12);
    }

    #[test]
    fn eigen_diag_zero_and_reconstruction() {
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![3.0, 1.0, 2.0]));
        let (vals, _) = symmetric_eigen(&d, &tol()).unwrap();
        assert_eq!(vals.as_slice(), &[1.0, 2.0, 3.0]);
        let (vals, _) = symmetric_eigen(&Matrix::zeros(3, 3), &tol()).unwrap();
        assert_eq!(vals.as_slice(), &[0.0, 0.0, 0.0]);

        let mut s = Sampler::new(2);
        let a = s.gaussian_matrix(3, 3);
        let sym = &a + a.transpose();
        let (vals, vecs) = symmetric_eigen(&sym, &tol()).unwrap();
        let rec = &vecs * Matrix::from_diagonal(&vals) * vecs.transpose();
        assert!((rec - &sym).amax() < 1e-10);
        for i in 0..3 {
            let v = vecs.column(i);
            assert!((&sym * v - v * vals[i]).amax() < 1e-10);
        }
    }

    #[test]
    fn eigen_rejects_asymmetric() {
        let mut m = Matrix::identity(2, 2);
        m[(0, 1)] = 1.0;
        assert!(symmetric_eigen(&m, &tol()).is_err());
    }

    #[test]
    fn rank_and_nullspace() {
        let i = Matrix::identity(5, 5);
        assert_eq!(rank(&i, &tol()), 5);
        assert_eq!(nullspace(&i, &tol()).ncols(), 0);
        let z = Matrix::zeros(3, 5);
        assert_eq!(rank(&z, &tol()), 0);
        assert_eq!(nullspace(&z, &tol()).ncols(), 5);

        let mut s = Sampler::new(3);
        let (a, b, c, d) = (s.gaussian(5), s.gaussian(5), s.gaussian(5), s.gaussian(5));
        let l = &a * b.transpose() + &c * d.transpose();
        assert_eq!(rank(&l, &tol()), 2);
        let n = nullspace(&l, &tol());
        assert_eq!(n.ncols(), 3);
        assert!((&l * &n).amax() < 1e-10);
    }

    #[test]
    fn wide_matrix_nullspace() {
        let mut s = Sampler::new(4);
        let l = s.gaussian_matrix(2, 6);
        let n = nullspace(&l, &tol());
        assert_eq!(n.ncols(), 4);
        assert!((&l * &n).amax() < 1e-12);
        assert!((n.transpose() * &n - Matrix::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn exp_properties() {
        let z = Matrix::zeros(3, 3);
        assert_eq!(matrix_exp(&z).unwrap(), Matrix::identity(3, 3));
        let theta = 0.83_f64;
        let j = Matrix::from_row_slice(2, 2, &[0.0, -theta, theta, 0.0]);
        let r = matrix_exp(&j).unwrap();
        let expect = Matrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
        assert!((r - expect).amax() < 1e-14);

        let mut s = Sampler::new(5);
        for _ in 0..10 {
            let x = s.gaussian_matrix(6, 6) * 0.7;
            let prod = matrix_exp(&x).unwrap() * matrix_exp(&(-&x)).unwrap();
            assert!((prod - Matrix::identity(6, 6)).amax() < 1e-10);
            let k = &x - x.transpose();
            let u = matrix_exp(&k).unwrap();
            assert!((u.transpose() * &u - Matrix::identity(6, 6)).amax() < 1e-10);
        }
    }

    #[test]
    fn random_unit_deterministic_and_uniformish() {
        let a = random_unit(5, 99);
        let b = random_unit(5, 99);
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-15);
        let mut s = Sampler::new(17);
        let mut mean = Vector::zeros(5);
        for _ in 0..10_000 {
            mean += s.unit(5);
        }
        mean /= 10_000.0;
        assert!(mean.norm() < 0.05, "mean {}", mean.norm());
    }

    #[test]
    fn complement_spans_rest() {
        let mut s = Sampler::new(6);
        let q = s.frame(7, 3);
        let c = orthogonal_complement(&q, &tol());
        assert_eq!(c.ncols(), 4);
        assert!((q.transpose() * &c).amax() < 1e-12);
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0, 1e-8).is_err());
        assert!(Tolerance::new(1e-9, -1.0).is_err());
    }
}
