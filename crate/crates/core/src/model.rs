//! The solvable model `𝔞 ⊕ 𝔳 ⊕ 𝔷` of 𝔽Hⁿ.
//!
//! `𝔞 = ℝB`, `𝔳 = 𝔽ⁿ⁻¹` and `𝔷 = Im 𝔽`. The H-type maps are componentwise
//! right multiplications `J_Z U = (U₁Z, …, U_{n−1}Z)` and the bracket is
//!
//! ```text
//! [tB + U + Z, sB + V + Y] = (tV − sU) + (2tY − 2sZ + β(U, V))
//! ```
//!
//! where `⟨β(U, V), Z⟩ = ⟨J_Z U, V⟩` for every imaginary `Z`. The inner
//! product is the coordinate one; rescaling it changes no angle, rank or
//! dimension computed here.
//!
//! Realified coordinates of a model vector are `[t, U (slot by slot, each in
//! the basis 1, e₁, …), Z (imaginary coordinates only)]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{left_mult_matrix, right_mult_matrix, AlgebraElement, AlgebraTag};
use crate::error::{invalid, Result};
use crate::numerics::{nullspace, orthonormalize, rank, Matrix, Tolerance, Vector};
use crate::subspace::Subspace;

/// `𝔽Hⁿ` as a solvable Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct SolvableModel {
    #[serde(rename = "algebra")]
    tag: AlgebraTag,
    n: usize,
}

#[derive(Deserialize)]
struct RawModel {
    algebra: AlgebraTag,
    n: usize,
}

impl TryFrom<RawModel> for SolvableModel {
    type Error = crate::error::Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        Self::new(raw.algebra, raw.n)
    }
}

impl fmt::Display for SolvableModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}H^{}", self.tag, self.n)
    }
}

impl SolvableModel {
    pub fn new(tag: AlgebraTag, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("hyperbolic space dimension must be at least 2, got {n}")));
        }
        if tag == AlgebraTag::O && n != 2 {
            return Err(invalid(format!("the Cayley hyperbolic space only exists for n = 2, got {n}")));
        }
        Ok(Self { tag, n })
    }

    /// Parses `TAG:N`, e.g. `H:3`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (tag, n) = spec.split_once(':').ok_or_else(|| invalid(format!("expected TAG:N, got `{spec}`")))?;
        let n: usize = n.trim().parse().map_err(|_| invalid(format!("bad dimension in `{spec}`")))?;
        Self::new(AlgebraTag::parse(tag)?, n)
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of 𝔽-slots in 𝔳.
    pub fn slots(&self) -> usize {
        self.n - 1
    }

    pub fn real_dim(&self) -> usize {
        self.tag.real_dim()
    }

    pub fn dim_v(&self) -> usize {
        self.real_dim() * self.slots()
    }

    pub fn dim_z(&self) -> usize {
        self.real_dim() - 1
    }

    pub fn dim(&self) -> usize {
        1 + self.dim_v() + self.dim_z()
    }

    /// Block-diagonal matrix of `U ↦ U·q` on the realified 𝔳.
    pub fn right_mult_on_v(&self, q: &AlgebraElement) -> Matrix {
        self.blockwise(&right_mult_matrix(q))
    }

    /// Block-diagonal matrix of `U ↦ q·U` on the realified 𝔳.
    pub fn left_mult_on_v(&self, q: &AlgebraElement) -> Matrix {
        self.blockwise(&left_mult_matrix(q))
    }

    fn blockwise(&self, block: &[f64]) -> Matrix {
        let d = self.real_dim();
        let mut m = Matrix::zeros(self.dim_v(), self.dim_v());
        for s in 0..self.slots() {
            for r in 0..d {
                for c in 0..d {
                    m[(s * d + r, s * d + c)] = block[r * d + c];
                }
            }
        }
        m
    }

    /// The complex structure `J = R_i` on 𝔳 (ℂ models only).
    pub fn complex_structure(&self) -> Result<Matrix> {
        if self.tag != AlgebraTag::C {
            return Err(invalid(format!("{self} carries no distinguished complex structure")));
        }
        Ok(self.right_mult_on_v(&AlgebraElement::basis(self.tag, 1)))
    }

    /// Quaternionic structure basis `(R_i, R_j, −R_k)` on 𝔳 (ℍ models only).
    ///
    /// Right multiplications compose in reverse (`R_i R_j = R_{ji}`), so the
    /// sign on the third element makes `J₁J₂ = J₃` hold as operators.
    pub fn quaternionic_structure(&self) -> Result<[Matrix; 3]> {
        if self.tag != AlgebraTag::H {
            return Err(invalid(format!("{self} carries no quaternionic structure")));
        }
        let r = |i| self.right_mult_on_v(&AlgebraElement::basis(AlgebraTag::H, i));
        Ok([r(1), r(2), -r(3)])
    }

    /// Realified coordinate vector of an element of 𝔳.
    pub fn v_to_real(&self, v: &[AlgebraElement]) -> Vector {
        let d = self.real_dim();
        let mut out = Vector::zeros(self.dim_v());
        for (s, e) in v.iter().enumerate() {
            out.rows_mut(s * d, d).copy_from_slice(e.coords());
        }
        out
    }

    pub fn v_from_real(&self, x: &Vector) -> Result<Vec<AlgebraElement>> {
        if x.len() != self.dim_v() {
            return Err(invalid(format!("expected a vector of length {}, got {}", self.dim_v(), x.len())));
        }
        let d = self.real_dim();
        (0..self.slots()).map(|s| AlgebraElement::new(self.tag, x.rows(s * d, d).as_slice())).collect()
    }

    pub fn basis(&self) -> Vec<ModelVector> {
        (0..self.dim())
            .map(|i| {
                let mut x = Vector::zeros(self.dim());
                x[i] = 1.0;
                ModelVector::from_real(*self, &x).expect("basis length")
            })
            .collect()
    }

    /// Basis of the nilradical `𝔫 = 𝔳 ⊕ 𝔷`.
    pub fn nilradical_basis(&self) -> Vec<ModelVector> {
        self.basis().into_iter().skip(1).collect()
    }

    pub fn b(&self) -> ModelVector {
        ModelVector {
            model: *self,
            t: 1.0,
            v: vec![AlgebraElement::zero(self.tag); self.slots()],
            z: AlgebraElement::zero(self.tag),
        }
    }

    pub fn v_vector(&self, v: Vec<AlgebraElement>) -> Result<ModelVector> {
        ModelVector::new(*self, 0.0, v, AlgebraElement::zero(self.tag))
    }

    pub fn z_vector(&self, z: AlgebraElement) -> Result<ModelVector> {
        ModelVector::new(*self, 0.0, vec![AlgebraElement::zero(self.tag); self.slots()], z)
    }
}

/// `tB + V + Z` in a given model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelVector {
    model: SolvableModel,
    pub t: f64,
    pub v: Vec<AlgebraElement>,
    pub z: AlgebraElement,
}

impl ModelVector {
    pub fn new(model: SolvableModel, t: f64, v: Vec<AlgebraElement>, z: AlgebraElement) -> Result<Self> {
        if v.len() != model.slots() {
            return Err(invalid(format!("{model} needs {} 𝔳-slots, got {}", model.slots(), v.len())));
        }
        if v.iter().chain(std::iter::once(&z)).any(|e| e.tag() != model.tag()) {
            return Err(invalid(format!("components must lie in {}", model.tag())));
        }
        if !z.is_imaginary(0.0) {
            return Err(invalid("the 𝔷-component must be imaginary"));
        }
        Ok(Self { model, t, v, z })
    }

    pub fn model(&self) -> SolvableModel {
        self.model
    }

    pub fn to_real(&self) -> Vector {
        let m = self.model;
        let mut out = Vector::zeros(m.dim());
        out[0] = self.t;
        out.rows_mut(1, m.dim_v()).copy_from(&m.v_to_real(&self.v));
        out.rows_mut(1 + m.dim_v(), m.dim_z()).copy_from_slice(&self.z.coords()[1..]);
        out
    }

    pub fn from_real(model: SolvableModel, x: &Vector) -> Result<Self> {
        if x.len() != model.dim() {
            return Err(invalid(format!("expected {} coordinates, got {}", model.dim(), x.len())));
        }
        let v = model.v_from_real(&x.rows(1, model.dim_v()).into_owned())?;
        let mut zc = vec![0.0; model.real_dim()];
        zc[1..].copy_from_slice(x.rows(1 + model.dim_v(), model.dim_z()).as_slice());
        let z = AlgebraElement::new(model.tag(), &zc)?;
        Ok(Self { model, t: x[0], v, z })
    }
}

/// `J_Z U`: componentwise right multiplication by an imaginary `Z`.
pub fn j_map(z: &AlgebraElement, u: &[AlgebraElement]) -> Result<Vec<AlgebraElement>> {
    if !z.is_imaginary(1e-14) {
        return Err(invalid("J_Z needs an imaginary Z"));
    }
    u.iter().map(|x| x.try_mul(z)).collect()
}

/// The `Im 𝔽`-valued form with `⟨β(U, V), Z⟩ = ⟨J_Z U, V⟩`.
pub fn beta(tag: AlgebraTag, u: &[AlgebraElement], v: &[AlgebraElement]) -> AlgebraElement {
    let d = tag.real_dim();
    let mut c = vec![0.0; d];
    for (a, ca) in c.iter_mut().enumerate().skip(1) {
        let e = AlgebraElement::basis(tag, a);
        *ca = u.iter().zip(v).map(|(x, y)| (*x * e).dot(y)).sum();
    }
    AlgebraElement::new(tag, &c).expect("length d")
}

/// Graded bracket.
pub fn bracket(x: &ModelVector, y: &ModelVector) -> Result<ModelVector> {
    if x.model != y.model {
        return Err(invalid(format!("cannot bracket elements of {} and {}", x.model, y.model)));
    }
    let v = x.v.iter().zip(&y.v).map(|(a, b)| b.scale(x.t) - a.scale(y.t)).collect();
    let z = y.z.scale(2.0 * x.t) - x.z.scale(2.0 * y.t) + beta(x.model.tag(), &x.v, &y.v);
    Ok(ModelVector { model: x.model, t: 0.0, v, z })
}

fn bracket_real(m: SolvableModel, x: &Vector, y: &Vector) -> Vector {
    let a = ModelVector::from_real(m, x).expect("model coordinates");
    let b = ModelVector::from_real(m, y).expect("model coordinates");
    bracket(&a, &b).expect("same model").to_real()
}

/// Largest Jacobi defect over all triples of basis vectors.
pub fn jacobi_defect(m: &SolvableModel) -> f64 {
    let basis: Vec<Vector> = m.basis().iter().map(ModelVector::to_real).collect();
    let br = |x: &Vector, y: &Vector| bracket_real(*m, x, y);
    let mut worst: f64 = 0.0;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let xy = br(&basis[i], &basis[j]);
            for k in j + 1..basis.len() {
                let yz = br(&basis[j], &basis[k]);
                let zx = br(&basis[k], &basis[i]);
                let s = br(&xy, &basis[k]) + br(&yz, &basis[i]) + br(&zx, &basis[j]);
                worst = worst.max(s.amax());
            }
        }
    }
    worst
}

/// Dimension of `[𝔫, 𝔫]`.
pub fn derived_dim(m: &SolvableModel, tol: &Tolerance) -> usize {
    let basis: Vec<Vector> = m.nilradical_basis().iter().map(ModelVector::to_real).collect();
    let mut cols = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            cols.push(bracket_real(*m, &basis[i], &basis[j]));
        }
    }
    if cols.is_empty() {
        return 0;
    }
    rank(&Matrix::from_columns(&cols), tol)
}

/// Dimension of the centre of `𝔫`.
pub fn center_dim(m: &SolvableModel, tol: &Tolerance) -> usize {
    let basis: Vec<Vector> = m.nilradical_basis().iter().map(ModelVector::to_real).collect();
    let nb = basis.len();
    let dim = m.dim();
    // x ↦ ([x, e₁], …, [x, e_N]) stacked, for x in 𝔫
    let mut l = Matrix::zeros(nb * dim, nb);
    for (c, x) in basis.iter().enumerate() {
        for (r, e) in basis.iter().enumerate() {
            l.view_mut((r * dim, c), (dim, 1)).copy_from(&bracket_real(*m, x, e));
        }
    }
    nullspace(&l, tol).ncols()
}

/// Dimension of the span of `β(𝔳, 𝔳)` inside 𝔷.
pub fn bracket_image_dim(m: &SolvableModel, tol: &Tolerance) -> usize {
    let vb: Vec<Vector> = m.nilradical_basis().iter().take(m.dim_v()).map(ModelVector::to_real).collect();
    let mut cols = Vec::new();
    for i in 0..vb.len() {
        for j in i + 1..vb.len() {
            cols.push(bracket_real(*m, &vb[i], &vb[j]));
        }
    }
    if cols.is_empty() {
        return 0;
    }
    rank(&Matrix::from_columns(&cols), tol)
}

/// Linearly independent model vectors spanning a candidate subalgebra.
#[derive(Debug, Clone)]
pub struct SubalgebraBasis {
    model: SolvableModel,
    vectors: Vec<ModelVector>,
}

impl SubalgebraBasis {
    pub fn new(model: SolvableModel, vectors: Vec<ModelVector>, tol: &Tolerance) -> Result<Self> {
        if vectors.iter().any(|v| v.model != model) {
            return Err(invalid("all vectors must belong to the same model"));
        }
        if !vectors.is_empty() {
            let cols: Vec<Vector> = vectors.iter().map(ModelVector::to_real).collect();
            let r = rank(&Matrix::from_columns(&cols), tol);
            if r != vectors.len() {
                return Err(invalid(format!("{} vectors span only a {r}-dimensional space", vectors.len())));
            }
        }
        Ok(Self { model, vectors })
    }

    pub fn model(&self) -> SolvableModel {
        self.model
    }

    pub fn vectors(&self) -> &[ModelVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// `𝔰 = 𝔞 ⊕ 𝔳₀ ⊕ 𝔷` for a subspace `𝔳₀` of the realified 𝔳.
pub fn build_s(m: &SolvableModel, v0: &Subspace) -> Result<SubalgebraBasis> {
    if v0.ambient_dim() != m.dim_v() {
        return Err(invalid(format!("𝔳₀ must live in ℝ^{}, got ℝ^{}", m.dim_v(), v0.ambient_dim())));
    }
    let mut vectors = vec![m.b()];
    for i in 0..v0.dim() {
        vectors.push(m.v_vector(m.v_from_real(&v0.vector(i))?)?);
    }
    for a in 1..m.real_dim() {
        vectors.push(m.z_vector(AlgebraElement::basis(m.tag(), a))?);
    }
    SubalgebraBasis::new(*m, vectors, &Tolerance::default())
}

/// Outcome of a bracket-closure test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosureReport {
    pub closed: bool,
    /// Largest distance of a bracket of basis vectors from the span.
    pub defect: f64,
}

/// Whether the span of `s` is closed under the bracket.
pub fn is_subalgebra(s: &SubalgebraBasis, tol: &Tolerance) -> ClosureReport {
    if s.vectors.is_empty() {
        return ClosureReport { closed: true, defect: 0.0 };
    }
    let cols: Vec<Vector> = s.vectors.iter().map(ModelVector::to_real).collect();
    let q = orthonormalize(&Matrix::from_columns(&cols), tol);
    let mut defect: f64 = 0.0;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let b = bracket_real(s.model, &cols[i], &cols[j]);
            let r = &b - &q * (q.transpose() * &b);
            defect = defect.max(r.norm());
        }
    }
    ClosureReport { closed: defect <= tol.defect_tol, defect }
}
