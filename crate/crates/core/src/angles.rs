//! Kähler angles and quaternionic Kähler angles of subspaces of 𝔳.
//!
//! For a unit `v ∈ W` and a compatible complex structure `J`, the Kähler
//! angle is the angle between `Jv` and `W`. Angles are evaluated as
//! `atan2(|P_⊥ Jv|, |P_W Jv|)` rather than `arccos |P_W Jv|`, which keeps
//! full precision at both ends of `[0, π/2]`.
//!
//! The quaternionic Kähler angle at `v` ranges over the 2-sphere of
//! structures `J(a) = Σ aᵢJᵢ`. Since `P_W J(a)v = Σ aᵢ P_W Jᵢv`,
//!
//! ```text
//! cos² φ(v, J(a)) = aᵀ M(v) a,   M(v)ᵢⱼ = ⟨P_W Jᵢv, P_W Jⱼv⟩,
//! ```
//!
//! so the minimum, middle and maximum angles come from the eigenvectors of
//! the 3 × 3 matrix `M(v)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{symmetric_eigen, Matrix, Sampler, Tolerance, Vector};
use crate::subspace::Subspace;

/// Accepted defect for the structure axioms and for `v ∈ W`, `|v| = 1`.
const AXIOM_TOL: f64 = 1e-8;

/// Default number of random sample points for constancy checks.
pub const DEFAULT_SAMPLES: usize = 64;
/// Default sampling seed.
pub const DEFAULT_SEED: u64 = 42;

/// An orthogonal `J` with `J² = −I`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    j: Matrix,
}

impl ComplexStructure {
    pub fn new(j: Matrix) -> Result<Self> {
        let n = j.nrows();
        if !j.is_square() {
            return Err(invalid("complex structure must be square"));
        }
        let sq = (&j * &j + Matrix::identity(n, n)).amax();
        let orth = (j.transpose() * &j - Matrix::identity(n, n)).amax();
        if sq > AXIOM_TOL || orth > AXIOM_TOL {
            return Err(invalid(format!("not an orthogonal complex structure (J²+I: {sq:.2e}, JᵀJ−I: {orth:.2e})")));
        }
        Ok(Self { j })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.j
    }
}

/// A basis `J₁, J₂, J₃` of anticommuting complex structures with
/// `J₁J₂ = J₃` (and cyclically).
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionicStructure {
    j: [Matrix; 3],
}

impl QuaternionicStructure {
    pub fn new(j: [Matrix; 3]) -> Result<Self> {
        for m in &j {
            ComplexStructure::new(m.clone())?;
            if m.shape() != j[0].shape() {
                return Err(invalid("structure matrices differ in size"));
            }
        }
        for a in 0..3 {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            let prod = (&j[a] * &j[b] - &j[c]).amax();
            let anti = (&j[a] * &j[b] + &j[b] * &j[a]).amax();
            if prod > AXIOM_TOL || anti > AXIOM_TOL {
                return Err(invalid(format!(
                    "structure basis violates J_{}J_{} = J_{} (defect {prod:.2e}, anticommutator {anti:.2e})",
                    a + 1,
                    b + 1,
                    c + 1
                )));
            }
        }
        Ok(Self { j })
    }

    pub fn get(&self, i: usize) -> &Matrix {
        &self.j[i]
    }

    pub fn matrices(&self) -> &[Matrix; 3] {
        &self.j
    }

    pub fn ambient_dim(&self) -> usize {
        self.j[0].nrows()
    }

    /// `J(a) = Σ aᵢJᵢ`.
    pub fn combine(&self, a: &[f64; 3]) -> Matrix {
        &self.j[0] * a[0] + &self.j[1] * a[1] + &self.j[2] * a[2]
    }

    /// The basis `J′ₖ = Σᵢ rᵢₖ Jᵢ` for a rotation `r ∈ SO(3)`.
    pub fn rotated(&self, r: &Matrix) -> Result<Self> {
        if r.shape() != (3, 3) {
            return Err(invalid("rotation must be 3×3"));
        }
        let col = |k: usize| self.combine(&[r[(0, k)], r[(1, k)], r[(2, k)]]);
        Self::new([col(0), col(1), col(2)])
    }
}

/// Kähler angle data of a subspace with respect to one complex structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KahlerReport {
    pub constant: bool,
    pub phi: f64,
    pub defect: f64,
}

/// Quaternionic Kähler angle `(φ₁ ≤ φ₂ ≤ φ₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QkAngleTriple {
    pub phi: [f64; 3],
    #[serde(rename = "constancyDefect")]
    pub constancy_defect: f64,
}

impl QkAngleTriple {
    /// Largest componentwise difference.
    pub fn distance(&self, other: &[f64; 3]) -> f64 {
        self.phi.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

fn check_unit_in(w: &Subspace, v: &Vector) -> Result<()> {
    if v.len() != w.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: w.ambient_dim(), got: v.len() });
    }
    if (v.norm() - 1.0).abs() > AXIOM_TOL {
        return Err(invalid(format!("vector is not a unit vector (norm {})", v.norm())));
    }
    if w.residual(v) > AXIOM_TOL {
        return Err(invalid(format!("vector is not in the subspace (distance {:.3e})", w.residual(v))));
    }
    Ok(())
}

fn check_dims(w: &Subspace, j: &Matrix) -> Result<()> {
    if w.dim() == 0 {
        return Err(invalid("angles of the zero subspace are undefined"));
    }
    if j.nrows() != w.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: w.ambient_dim(), got: j.nrows() });
    }
    Ok(())
}

/// Angle between a nonzero vector and a subspace, in `[0, π/2]`.
pub fn angle_to_subspace(w: &Subspace, x: &Vector) -> f64 {
    let inside = w.coordinates(x).norm();
    let outside = w.residual(x);
    outside.atan2(inside)
}

/// Kähler angle of `W` at a unit `v ∈ W`.
pub fn kahler_angle_at(w: &Subspace, v: &Vector, j: &ComplexStructure) -> Result<f64> {
    check_dims(w, j.matrix())?;
    check_unit_in(w, v)?;
    Ok(angle_to_subspace(w, &(j.matrix() * v)))
}

/// Whether the Kähler angle of `W` is the same at every unit vector.
///
/// With `F = Bᵀ J B` the restriction of `P_W ∘ J` to `W`, the angle is
/// constant iff `FᵀF = cos²φ · I`; the spread of the eigenvalues of `FᵀF` is
/// the reported defect.
pub fn kahler_constancy(w: &Subspace, j: &ComplexStructure, tol: &Tolerance) -> Result<KahlerReport> {
    check_dims(w, j.matrix())?;
    let jb = j.matrix() * w.basis();
    let f = w.basis().transpose() * &jb;
    let g = w.complement().basis().transpose() * &jb;
    let (vals, vecs) = symmetric_eigen(&(f.transpose() * &f), tol)?;
    let angles: Vec<f64> = vecs
        .column_iter()
        .map(|a| {
            let a = a.into_owned();
            (&g * &a).norm().atan2((&f * &a).norm())
        })
        .collect();
    let defect = vals[vals.len() - 1] - vals[0];
    let phi = angles.iter().sum::<f64>() / angles.len() as f64;
    Ok(KahlerReport { constant: defect <= tol.defect_tol, phi, defect })
}

/// Per-point data: `M(v)` eigenpairs and the angles along each eigenvector.
struct PointAngles {
    /// Angles sorted ascending, paired with their eigenvector of `M(v)`.
    pairs: [(f64, [f64; 3]); 3],
}

fn point_angles(w: &Subspace, v: &Vector, q: &QuaternionicStructure) -> PointAngles {
    let comp = w.complement();
    let xs: Vec<Vector> = q.matrices().iter().map(|j| j * v).collect();
    let p: Vec<Vector> = xs.iter().map(|x| w.coordinates(x)).collect();
    let o: Vec<Vector> = xs.iter().map(|x| comp.coordinates(x)).collect();
    let mut m = Matrix::zeros(3, 3);
    for a in 0..3 {
        for b in 0..3 {
            m[(a, b)] = p[a].dot(&p[b]);
        }
    }
    let (_, vecs) = symmetric_eigen(&m, &Tolerance::default()).expect("Gram matrix is symmetric");
    let mut pairs: Vec<(f64, [f64; 3])> = vecs
        .column_iter()
        .map(|a| {
            let coef = [a[0], a[1], a[2]];
            let inside = (&p[0] * coef[0] + &p[1] * coef[1] + &p[2] * coef[2]).norm();
            let outside = (&o[0] * coef[0] + &o[1] * coef[1] + &o[2] * coef[2]).norm();
            (outside.atan2(inside), coef)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    PointAngles { pairs: [pairs[0], pairs[1], pairs[2]] }
}

/// Quaternionic Kähler angle of `W` at a unit `v ∈ W`.
pub fn qk_angle_at(w: &Subspace, v: &Vector, q: &QuaternionicStructure) -> Result<QkAngleTriple> {
    check_dims(w, q.get(0))?;
    check_unit_in(w, v)?;
    let pa = point_angles(w, v, q);
    Ok(QkAngleTriple { phi: [pa.pairs[0].0, pa.pairs[1].0, pa.pairs[2].0], constancy_defect: 0.0 })
}

/// Samples the quaternionic Kähler angle over `W`.
///
/// Evaluates `samples` seeded random unit vectors plus every basis vector,
/// returns the mean triple, and reports as defect the larger of the maximal
/// deviation from the mean and the eigenvalue spread of `Σ FᵢᵀFᵢ` (which
/// must be a multiple of the identity when the triple is constant).
pub fn qk_constancy(w: &Subspace, q: &QuaternionicStructure, samples: usize, seed: u64) -> Result<QkAngleTriple> {
    check_dims(w, q.get(0))?;
    let k = w.dim();
    let mut sampler = Sampler::new(seed);
    let mut points: Vec<Vector> = (0..samples).map(|_| w.basis() * sampler.unit(k)).collect();
    points.extend((0..k).map(|i| w.vector(i)));
    let triples: Vec<[f64; 3]> = points
        .iter()
        .map(|v| {
            let pa = point_angles(w, &(v / v.norm()), q);
            [pa.pairs[0].0, pa.pairs[1].0, pa.pairs[2].0]
        })
        .collect();
    let mut mean = [0.0; 3];
    for t in &triples {
        for i in 0..3 {
            mean[i] += t[i];
        }
    }
    for m in mean.iter_mut() {
        *m /= triples.len() as f64;
    }
    let deviation =
        triples.iter().flat_map(|t| t.iter().zip(mean.iter()).map(|(a, b)| (a - b).abs())).fold(0.0, f64::max);

    let mut trace_op = Matrix::zeros(k, k);
    for j in q.matrices() {
        let f = w.basis().transpose() * j * w.basis();
        trace_op += f.transpose() * f;
    }
    let (vals, _) = symmetric_eigen(&trace_op, &Tolerance::default())?;
    let spread = vals[k - 1] - vals[0];

    Ok(QkAngleTriple { phi: mean, constancy_defect: deviation.max(spread) })
}

/// A structure basis adapted to `v`: `J′₁` realises the minimal Kähler angle,
/// `J′₃` the maximal one, and `J′₁J′₂ = J′₃` still holds.
///
/// When eigenvalues of `M(v)` coincide any orthonormal eigenframe is
/// returned; the angle triple does not depend on that choice.
pub fn canonical_basis_at(w: &Subspace, v: &Vector, q: &QuaternionicStructure) -> Result<QuaternionicStructure> {
    check_dims(w, q.get(0))?;
    check_unit_in(w, v)?;
    let pa = point_angles(w, v, q);
    let mut r = Matrix::zeros(3, 3);
    for (k, (_, a)) in pa.pairs.iter().enumerate() {
        for i in 0..3 {
            r[(i, k)] = a[i];
        }
    }
    if r.determinant() < 0.0 {
        let c = -r.column(2).into_owned();
        r.set_column(2, &c);
    }
    q.rotated(&r)
}
