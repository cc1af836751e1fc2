//! Isotropy algebras acting on 𝔳, normalizers, and orbit-dimension tests.
//!
//! `spin(7)` is computed as the annihilator of the Cayley 4-form inside
//! `so(8)`; `g₂` is the part of it that also kills `1 ∈ 𝕆`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::{cayley_tensor, AlgebraElement, AlgebraTag};
use crate::error::{invalid, Error, Result};
use crate::model::SolvableModel;
use crate::numerics::{
    matrix_exp, nullspace, orthonormalize, rank, singular_values, Matrix, Sampler, Tolerance, Vector,
};
use crate::subspace::Subspace;

/// Skewness accepted for action generators.
pub const SKEW_TOL: f64 = 1e-10;

/// A basis of a Lie algebra of skew-symmetric matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionBasis {
    name: String,
    matrices: Vec<Matrix>,
}

impl ActionBasis {
    pub fn new(name: impl Into<String>, matrices: Vec<Matrix>) -> Result<Self> {
        let name = name.into();
        if let Some(first) = matrices.first() {
            let n = first.nrows();
            for m in &matrices {
                if m.shape() != (n, n) {
                    return Err(Error::DimensionMismatch { expected: n, got: m.nrows() });
                }
                let skew = (m + m.transpose()).amax();
                if skew > SKEW_TOL {
                    return Err(invalid(format!("generator of {name} is not skew (defect {skew:.2e})")));
                }
            }
            if rank(&flatten(&matrices), &Tolerance::default()) != matrices.len() {
                return Err(invalid(format!("generators of {name} are linearly dependent")));
            }
        }
        Ok(Self { name, matrices })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn dim(&self) -> usize {
        self.matrices.len()
    }

    /// `Σ cᵢ Xᵢ`.
    pub fn combine(&self, c: &[f64]) -> Matrix {
        let n = self.matrices.first().map_or(0, |m| m.nrows());
        let mut out = Matrix::zeros(n, n);
        for (x, ci) in self.matrices.iter().zip(c) {
            out += x * *ci;
        }
        out
    }

    /// An element with standard Gaussian coefficients.
    pub fn random_element(&self, s: &mut Sampler) -> Matrix {
        let c: Vec<f64> = (0..self.dim()).map(|_| s.normal()).collect();
        self.combine(&c)
    }

    /// `exp` of a random element.
    pub fn random_group_element(&self, s: &mut Sampler) -> Matrix {
        matrix_exp(&self.random_element(s)).expect("generators are square")
    }

    /// Largest relative distance of a commutator `[Xᵢ, Xⱼ]` from the span.
    pub fn closure_defect(&self) -> f64 {
        if self.matrices.is_empty() {
            return 0.0;
        }
        let span = orthonormalize(&flatten(&self.matrices), &Tolerance::default());
        let mut worst: f64 = 0.0;
        for (i, a) in self.matrices.iter().enumerate() {
            for b in &self.matrices[i + 1..] {
                let c = a * b - b * a;
                let v = Vector::from_column_slice(c.as_slice());
                let r = &v - &span * (span.transpose() * &v);
                worst = worst.max(r.norm() / (a.norm() * b.norm()));
            }
        }
        worst
    }
}

fn flatten(ms: &[Matrix]) -> Matrix {
    let cols: Vec<Vector> = ms.iter().map(|m| Vector::from_column_slice(m.as_slice())).collect();
    if cols.is_empty() {
        return Matrix::zeros(0, 0);
    }
    Matrix::from_columns(&cols)
}

fn so_basis(m: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let mut x = Matrix::zeros(m, m);
            x[(i, j)] = -1.0;
            x[(j, i)] = 1.0;
            out.push(x);
        }
    }
    out
}

/// Realification of the matrix with entry `q` at `(r, c)` acting on the left.
fn left_entry(model: &SolvableModel, entries: &[(usize, usize, AlgebraElement)]) -> Matrix {
    let d = model.real_dim();
    let mut out = Matrix::zeros(model.dim_v(), model.dim_v());
    for (r, c, q) in entries {
        let l = crate::algebra::left_mult_matrix(q);
        for a in 0..d {
            for b in 0..d {
                out[(r * d + a, c * d + b)] += l[a * d + b];
            }
        }
    }
    out
}

/// Anti-Hermitian matrices over ℂ or ℍ acting on the left.
fn anti_hermitian(model: &SolvableModel) -> Vec<Matrix> {
    let tag = model.tag();
    let m = model.slots();
    let one = AlgebraElement::one(tag);
    let imag: Vec<AlgebraElement> = (1..tag.real_dim()).map(|i| AlgebraElement::basis(tag, i)).collect();
    let mut out = Vec::new();
    for r in 0..m {
        for c in r + 1..m {
            out.push(left_entry(model, &[(r, c, one), (c, r, -one)]));
            for q in &imag {
                out.push(left_entry(model, &[(r, c, *q), (c, r, *q)]));
            }
        }
        for q in &imag {
            out.push(left_entry(model, &[(r, r, *q)]));
        }
    }
    out
}

/// The isotropy algebra `𝔨ₓ` acting on the realified 𝔳.
pub fn kx_basis(model: &SolvableModel) -> ActionBasis {
    let m = model.slots();
    match model.tag() {
        AlgebraTag::R => ActionBasis { name: format!("so({m})"), matrices: so_basis(m) },
        AlgebraTag::C => ActionBasis { name: format!("u({m})"), matrices: anti_hermitian(model) },
        AlgebraTag::H => {
            let mut ms = anti_hermitian(model);
            for i in 1..4 {
                ms.push(-model.right_mult_on_v(&AlgebraElement::basis(AlgebraTag::H, i)));
            }
            ActionBasis { name: format!("sp({m})+sp(1)"), matrices: ms }
        }
        AlgebraTag::O => spin7_basis().clone(),
    }
}

fn tensor() -> &'static [f64] {
    static T: OnceLock<Vec<f64>> = OnceLock::new();
    T.get_or_init(cayley_tensor)
}

fn idx(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 8 + b) * 8 + c) * 8 + d
}

/// `spin(7) ⊂ so(8)`: the annihilator of the Cayley 4-form (cached).
pub fn spin7_basis() -> &'static ActionBasis {
    static B: OnceLock<ActionBasis> = OnceLock::new();
    B.get_or_init(compute_spin7_basis)
}

/// `g₂ ⊂ spin(7)`: elements killing `1 ∈ 𝕆` (cached).
pub fn g2_basis() -> &'static ActionBasis {
    static B: OnceLock<ActionBasis> = OnceLock::new();
    B.get_or_init(|| compute_g2_basis(spin7_basis()))
}

/// Uncached computation of [`spin7_basis`] as a nullspace of the induced
/// action of `so(8)` on 4-forms.
pub fn compute_spin7_basis() -> ActionBasis {
    let t = tensor();
    let so8 = so_basis(8);
    let mut quads = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            for c in b + 1..8 {
                for d in c + 1..8 {
                    quads.push([a, b, c, d]);
                }
            }
        }
    }
    // (X·Φ)(a,b,c,d) = Σ_e X_ea Φ(e,b,c,d) + … over the four slots
    let mut l = Matrix::zeros(quads.len(), so8.len());
    for (col, x) in so8.iter().enumerate() {
        for (row, &[a, b, c, d]) in quads.iter().enumerate() {
            let mut s = 0.0;
            for e in 0..8 {
                s += x[(e, a)] * t[idx(e, b, c, d)]
                    + x[(e, b)] * t[idx(a, e, c, d)]
                    + x[(e, c)] * t[idx(a, b, e, d)]
                    + x[(e, d)] * t[idx(a, b, c, e)];
            }
            l[(row, col)] = s;
        }
    }
    let null = nullspace(&l, &Tolerance::default());
    let matrices = null
        .column_iter()
        .map(|c| {
            let mut x = Matrix::zeros(8, 8);
            for (k, g) in so8.iter().enumerate() {
                x += g * c[k];
            }
            x
        })
        .collect();
    ActionBasis { name: "spin7".into(), matrices }
}

/// Uncached computation of [`g2_basis`] inside a given `spin(7)` basis.
pub fn compute_g2_basis(spin7: &ActionBasis) -> ActionBasis {
    let cols: Vec<Vector> = spin7.matrices().iter().map(|x| x.column(0).into_owned()).collect();
    let l = Matrix::from_columns(&cols);
    let null = nullspace(&l, &Tolerance::default());
    let matrices = null.column_iter().map(|c| spin7.combine(c.as_slice())).collect();
    ActionBasis { name: "g2".into(), matrices }
}

/// Residual of the linear map `X ↦ P_{V⊥} ∘ X|_V` for each generator,
/// stacked as columns.
fn normal_map(g: &ActionBasis, v: &Subspace) -> Matrix {
    let b = v.basis();
    let c = v.complement();
    let rows = b.ncols() * c.dim();
    let mut l = Matrix::zeros(rows, g.dim());
    for (k, x) in g.matrices().iter().enumerate() {
        let block = c.basis().transpose() * x * b;
        l.column_mut(k).copy_from_slice(block.as_slice());
    }
    l
}

fn check_ambient(g: &ActionBasis, v: &Subspace) -> Result<()> {
    match g.matrices().first() {
        Some(x) if x.nrows() != v.ambient_dim() => {
            Err(Error::DimensionMismatch { expected: x.nrows(), got: v.ambient_dim() })
        }
        _ => Ok(()),
    }
}

/// `{X ∈ span(g) : X·V ⊆ V}`.
pub fn normalizer_in(g: &ActionBasis, v: &Subspace) -> Result<ActionBasis> {
    check_ambient(g, v)?;
    let name = format!("n_{}", g.name());
    if g.dim() == 0 {
        return Ok(ActionBasis { name, matrices: vec![] });
    }
    let null = nullspace(&normal_map(g, v), &Tolerance::default());
    let matrices = null.column_iter().map(|c| g.combine(c.as_slice())).collect();
    Ok(ActionBasis { name, matrices })
}

/// Dimension of the orbit of `V` in the Grassmannian under `exp(span g)`.
pub fn grassmann_orbit_dim(g: &ActionBasis, v: &Subspace) -> Result<usize> {
    check_ambient(g, v)?;
    if g.dim() == 0 || v.dim() == 0 || v.codim() == 0 {
        return Ok(0);
    }
    Ok(rank(&normal_map(g, v), &Tolerance::default()))
}

/// Outcome of the orbit-rank test on the unit sphere of `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransitivityReport {
    pub transitive: bool,
    /// `dim W < 2`: the orbit is a hypersurface of a foliation, no sphere test applies.
    pub codimension_one: bool,
    /// Smallest orbit rank seen over the sample points.
    pub min_rank: usize,
    /// `dim W − 1`.
    pub required: usize,
    /// Smallest relative singular value that had to be nonzero.
    pub margin: f64,
    /// Largest `|P_{W⊥} X|_W|` over generators; zero when the generators preserve `W`.
    pub invariance_defect: f64,
    pub points: usize,
}

/// Checks the orbit of `exp(span nrm)` through sampled unit `ξ ∈ W` has full
/// dimension `dim W − 1`, at `samples` seeded random points plus each basis
/// vector.
pub fn sphere_transitivity(nrm: &ActionBasis, w: &Subspace, samples: usize, seed: u64) -> Result<TransitivityReport> {
    check_ambient(nrm, w)?;
    let k = w.dim();
    let invariance_defect = if nrm.dim() == 0 || k == 0 || w.codim() == 0 { 0.0 } else { normal_map(nrm, w).amax() };
    if k < 2 {
        return Ok(TransitivityReport {
            transitive: false,
            codimension_one: true,
            min_rank: 0,
            required: k.saturating_sub(1),
            margin: 0.0,
            invariance_defect,
            points: 0,
        });
    }
    let required = k - 1;
    let tol = Tolerance::default();
    // generators restricted to W, in W-coordinates
    let restricted: Vec<Matrix> = nrm.matrices().iter().map(|x| w.basis().transpose() * x * w.basis()).collect();
    let mut sampler = Sampler::new(seed);
    let mut points: Vec<Vector> = (0..samples).map(|_| sampler.unit(k)).collect();
    points.extend((0..k).map(|i| {
        let mut e = Vector::zeros(k);
        e[i] = 1.0;
        e
    }));
    let mut min_rank = usize::MAX;
    let mut margin = f64::INFINITY;
    for xi in &points {
        let cols: Vec<Vector> = restricted.iter().map(|x| x * xi).collect();
        let (r, sv) = if cols.is_empty() {
            (0, vec![])
        } else {
            let m = Matrix::from_columns(&cols);
            (rank(&m, &tol), singular_values(&m))
        };
        min_rank = min_rank.min(r);
        let rel = match sv.first() {
            Some(&top) if top > 0.0 && sv.len() >= required => sv[required - 1] / top,
            _ => 0.0,
        };
        margin = margin.min(rel);
    }
    Ok(TransitivityReport {
        transitive: min_rank == required,
        codimension_one: false,
        min_rank,
        required,
        margin,
        invariance_defect,
        points: points.len(),
    })
}

fn phi4(a: &Vector, b: &Vector, c: &Vector, d: &Vector) -> f64 {
    let t = tensor();
    let mut s = 0.0;
    for i in 0..8 {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..8 {
            let ab = a[i] * b[j];
            if ab == 0.0 {
                continue;
            }
            for k in 0..8 {
                let abc = ab * c[k];
                if abc == 0.0 {
                    continue;
                }
                let base = idx(i, j, k, 0);
                for l in 0..8 {
                    s += abc * d[l] * t[base + l];
                }
            }
        }
    }
    s
}

fn check_octonionic(v: &Subspace, dim: usize) -> Result<()> {
    if v.ambient_dim() != 8 || v.dim() != dim {
        return Err(invalid(format!(
            "expected a {dim}-dimensional subspace of R^8, got dimension {} in R^{}",
            v.dim(),
            v.ambient_dim()
        )));
    }
    Ok(())
}

/// `|Φ(b₁, b₂, b₃, b₄)|` for an orthonormal basis of a 4-plane in 𝕆.
pub fn cayley_modulus(v: &Subspace) -> Result<f64> {
    check_octonionic(v, 4)?;
    let b: Vec<Vector> = (0..4).map(|i| v.vector(i)).collect();
    Ok(phi4(&b[0], &b[1], &b[2], &b[3]).abs())
}

/// The vector `ξ` with `⟨ξ, x⟩ = Φ(v₁, v₂, v₃, x)` for an orthonormal basis
/// of a 3-plane; it is a unit vector orthogonal to the plane, and the plane
/// together with `ξ` spans a Cayley 4-plane.
pub fn cayley_completion(v: &Subspace) -> Result<Vector> {
    check_octonionic(v, 3)?;
    let b: Vec<Vector> = (0..3).map(|i| v.vector(i)).collect();
    let mut xi = Vector::zeros(8);
    for l in 0..8 {
        let mut e = Vector::zeros(8);
        e[l] = 1.0;
        xi[l] = phi4(&b[0], &b[1], &b[2], &e);
    }
    Ok(xi)
}
