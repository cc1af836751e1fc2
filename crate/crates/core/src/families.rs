//! Constructions of the standard subspace families of 𝔳.
//!
//! Every constructor returns `W`, the normal space `𝔳₀^⊥` of the singular
//! orbit; the orbit's `𝔳₀` is its orthogonal complement. Coordinates are the
//! realified ones of [`SolvableModel`]: slot `s` occupies indices
//! `s·d .. s·d + d`, real part first.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraTag;
use crate::error::{invalid, Error, Result};
use crate::model::SolvableModel;
use crate::numerics::{Tolerance, Vector};
use crate::subspace::Subspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyLabel {
    Complex,
    Real,
    Kangle,
    A,
    B,
    C,
    D,
    E,
    F,
}

impl FamilyLabel {
    pub const ALL: [FamilyLabel; 9] = [
        FamilyLabel::Complex,
        FamilyLabel::Real,
        FamilyLabel::Kangle,
        FamilyLabel::A,
        FamilyLabel::B,
        FamilyLabel::C,
        FamilyLabel::D,
        FamilyLabel::E,
        FamilyLabel::F,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyLabel::Complex => "complex",
            FamilyLabel::Real => "real",
            FamilyLabel::Kangle => "kangle",
            FamilyLabel::A => "a",
            FamilyLabel::B => "b",
            FamilyLabel::C => "c",
            FamilyLabel::D => "d",
            FamilyLabel::E => "e",
            FamilyLabel::F => "f",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown family '{s}' (expected one of complex, real, kangle, a-f)")))
    }

    /// Whether the family takes an angle parameter.
    pub fn has_angle(self) -> bool {
        matches!(self, FamilyLabel::Kangle | FamilyLabel::E | FamilyLabel::F)
    }

    fn algebras(self) -> &'static [AlgebraTag] {
        match self {
            FamilyLabel::Complex | FamilyLabel::Kangle => &[AlgebraTag::C],
            FamilyLabel::Real => &[AlgebraTag::R, AlgebraTag::C],
            _ => &[AlgebraTag::H],
        }
    }
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub label: FamilyLabel,
    pub model: SolvableModel,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
}

impl FamilySpec {
    pub fn new(label: FamilyLabel, model: SolvableModel, k: usize, phi: Option<f64>) -> Result<Self> {
        let spec = Self { label, model, k, phi };
        spec.validate()?;
        Ok(spec)
    }

    /// Real dimension of the constructed subspace.
    pub fn dim(&self) -> usize {
        match self.label {
            FamilyLabel::Real | FamilyLabel::C => self.k,
            FamilyLabel::Complex | FamilyLabel::Kangle | FamilyLabel::B | FamilyLabel::E => 2 * self.k,
            FamilyLabel::A | FamilyLabel::F => 4 * self.k,
            FamilyLabel::D => 3,
        }
    }

    /// Range of `k` allowed for this label in this model.
    pub fn k_range(label: FamilyLabel, model: &SolvableModel) -> (usize, usize) {
        let m = model.slots();
        match label {
            FamilyLabel::Complex | FamilyLabel::A | FamilyLabel::B => (1, m),
            FamilyLabel::Real => (1, m),
            FamilyLabel::C => (2, m),
            FamilyLabel::Kangle | FamilyLabel::E | FamilyLabel::F => (1, m / 2),
            FamilyLabel::D => (1, 1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let label = self.label;
        let tag = self.model.tag();
        if !label.algebras().contains(&tag) {
            let allowed: Vec<&str> = label.algebras().iter().map(|t| t.label()).collect();
            return Err(Error::Inadmissible(format!(
                "family {label} is defined only for {} models, not {tag}",
                allowed.join("/")
            )));
        }
        let (lo, hi) = Self::k_range(label, &self.model);
        if self.k < lo || self.k > hi {
            let bound = match label {
                FamilyLabel::Kangle | FamilyLabel::E | FamilyLabel::F => format!("2k <= n-1 = {}", self.model.slots()),
                FamilyLabel::C => format!("2 <= k <= n-1 = {}", self.model.slots()),
                FamilyLabel::D => "k = 1".to_string(),
                _ => format!("1 <= k <= n-1 = {}", self.model.slots()),
            };
            return Err(Error::Inadmissible(format!(
                "family {label} with k = {} in {} violates {bound}",
                self.k, self.model
            )));
        }
        match (label.has_angle(), self.phi) {
            (true, None) => Err(Error::Inadmissible(format!("family {label} requires an angle phi"))),
            (true, Some(phi)) if !(0.0..=FRAC_PI_2).contains(&phi) => {
                Err(Error::Inadmissible(format!("angle phi = {phi} outside [0, pi/2]")))
            }
            (false, Some(_)) => Err(Error::Inadmissible(format!("family {label} takes no angle"))),
            _ => Ok(()),
        }
    }
}

/// An admissible family with its parameter ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AdmissibleFamily {
    pub label: FamilyLabel,
    pub model: SolvableModel,
    pub k: usize,
    /// Real codimension of the singular orbit, `dim W`.
    pub codim: usize,
    /// Open angle interval for angle families.
    pub phi_range: Option<[f64; 2]>,
    pub totally_geodesic: bool,
}

impl AdmissibleFamily {
    /// A concrete spec; `phi` is ignored for families without angle.
    pub fn spec(&self, phi: f64) -> Result<FamilySpec> {
        let phi = self.label.has_angle().then_some(phi);
        FamilySpec::new(self.label, self.model, self.k, phi)
    }
}

/// Every family with stated dimension bounds for the model.
pub fn enumerate_admissible(model: &SolvableModel) -> Vec<AdmissibleFamily> {
    let labels: &[FamilyLabel] = match model.tag() {
        AlgebraTag::R | AlgebraTag::O => &[],
        AlgebraTag::C => &[FamilyLabel::Complex, FamilyLabel::Real, FamilyLabel::Kangle],
        AlgebraTag::H => {
            &[FamilyLabel::A, FamilyLabel::B, FamilyLabel::C, FamilyLabel::D, FamilyLabel::E, FamilyLabel::F]
        }
    };
    let mut out = Vec::new();
    for &label in labels {
        let (lo, hi) = FamilySpec::k_range(label, model);
        // a real line has codimension one: that is the solvable foliation
        let lo = if label == FamilyLabel::Real { lo.max(2) } else { lo };
        for k in lo..=hi {
            let spec = FamilySpec { label, model: *model, k, phi: label.has_angle().then_some(0.0) };
            out.push(AdmissibleFamily {
                label,
                model: *model,
                k,
                codim: spec.dim(),
                phi_range: label.has_angle().then_some([0.0, FRAC_PI_2]),
                totally_geodesic: matches!(label, FamilyLabel::Complex | FamilyLabel::A),
            });
        }
    }
    out
}

struct Builder {
    dim: usize,
    d: usize,
    vectors: Vec<Vector>,
}

impl Builder {
    fn new(model: &SolvableModel) -> Self {
        Self { dim: model.dim_v(), d: model.real_dim(), vectors: Vec::new() }
    }

    /// Real unit of slot `s` times the basis unit `unit` of the algebra.
    fn unit(&self, s: usize, unit: usize) -> Vector {
        let mut v = Vector::zeros(self.dim);
        v[s * self.d + unit] = 1.0;
        v
    }

    fn push(&mut self, v: Vector) {
        self.vectors.push(v);
    }

    /// `span{x, cos φ·Jx + sin φ·y}` with `x = e_{s}`, `y = e_{s+1}` and `J`
    /// the right multiplication by the basis unit `unit`.
    fn angle_block(&mut self, s: usize, unit: usize, phi: f64) {
        let x = self.unit(s, 0);
        let jx = self.unit(s, unit);
        let y = self.unit(s + 1, 0);
        self.push(x);
        self.push(jx * phi.cos() + y * phi.sin());
    }

    fn finish(self) -> Result<Subspace> {
        Subspace::from_vectors(self.dim, &self.vectors, &Tolerance::default())
    }
}

/// Orthonormal basis of the family subspace `W`.
pub fn construct(spec: &FamilySpec) -> Result<Subspace> {
    spec.validate()?;
    let mut b = Builder::new(&spec.model);
    let k = spec.k;
    let phi = spec.phi.unwrap_or(0.0);
    match spec.label {
        FamilyLabel::Real | FamilyLabel::C => {
            for s in 0..k {
                b.push(b.unit(s, 0));
            }
        }
        FamilyLabel::Complex | FamilyLabel::B => {
            for s in 0..k {
                b.push(b.unit(s, 0));
                b.push(b.unit(s, 1));
            }
        }
        FamilyLabel::A => {
            for s in 0..k {
                for u in 0..4 {
                    b.push(b.unit(s, u));
                }
            }
        }
        FamilyLabel::D => {
            for u in 1..4 {
                b.push(b.unit(0, u));
            }
        }
        FamilyLabel::Kangle | FamilyLabel::E => {
            for s in 0..k {
                b.angle_block(2 * s, 1, phi);
            }
        }
        FamilyLabel::F => {
            // 𝔴 = span{e_s, e_s·j} is J₂-invariant for J₂ = R_j and
            // 𝔳 = 𝔴 ⊕ J₁𝔴 for J₁ = R_i. Build a constant-angle subspace of
            // (𝔴, J₂) and add its image under J₁.
            let j1 = spec.model.quaternionic_structure()?[0].clone();
            for s in 0..k {
                b.angle_block(2 * s, 2, phi);
            }
            let images: Vec<Vector> = b.vectors.iter().map(|w| &j1 * w).collect();
            for v in images {
                b.push(v);
            }
        }
    }
    let w = b.finish()?;
    debug_assert_eq!(w.dim(), spec.dim());
    Ok(w)
}
