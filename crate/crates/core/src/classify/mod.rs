//! From a subspace `𝔳₀ ⊆ 𝔳` to the cohomogeneity one action it induces.
//!
//! The subalgebra `𝔰 = 𝔞 ⊕ 𝔳₀ ⊕ 𝔷` together with the connected normalizer
//! of `𝔳₀` in `𝔨ₓ` acts with cohomogeneity one exactly when that normalizer is
//! transitive on the unit sphere of `W = 𝔳₀^⊥`. The record collects the angle
//! invariant of `W`, the orbit-rank evidence for transitivity, and the family
//! the invariants identify.

pub mod catalog;
pub mod verify;

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraTag;
use crate::angles::{kahler_constancy, qk_constancy, ComplexStructure, QuaternionicStructure};
use crate::error::{invalid, Error, Result};
use crate::families::FamilyLabel;
use crate::model::SolvableModel;
use crate::numerics::Tolerance;
use crate::stabilizers::{cayley_modulus, kx_basis, normalizer_in, sphere_transitivity};
use crate::subspace::Subspace;

pub use catalog::{moduli_table, CatalogEntry, ModuliTable};
pub use verify::{verify_suite, CheckResult, CheckStatus, Report, VerifyConfig};

/// Distance at which an angle triple is matched to a family.
pub const FAMILY_MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    Transitive,
    FoliationHorosphere,
    FoliationSolvable,
    #[serde(rename = "cohomogeneity-one-totally-geodesic")]
    TotallyGeodesic {
        label: String,
    },
    #[serde(rename = "cohomogeneity-one-non-tg")]
    NonTotallyGeodesic {
        family: String,
        #[serde(rename = "moduliCoord")]
        moduli_coord: Option<f64>,
    },
    #[serde(rename = "not-cohomogeneity-one")]
    NotCohomogeneityOne {
        reason: String,
    },
    UnknownConstantAngle,
}

impl Verdict {
    pub fn class(&self) -> &'static str {
        match self {
            Verdict::Transitive => "transitive",
            Verdict::FoliationHorosphere => "foliation-horosphere",
            Verdict::FoliationSolvable => "foliation-solvable",
            Verdict::TotallyGeodesic { .. } => "cohomogeneity-one-totally-geodesic",
            Verdict::NonTotallyGeodesic { .. } => "cohomogeneity-one-non-tg",
            Verdict::NotCohomogeneityOne { .. } => "not-cohomogeneity-one",
            Verdict::UnknownConstantAngle => "unknown-constant-angle",
        }
    }

    pub fn is_non_tg(&self) -> bool {
        matches!(self, Verdict::NonTotallyGeodesic { .. })
    }

    pub fn is_tg(&self) -> bool {
        matches!(self, Verdict::TotallyGeodesic { .. })
    }

    pub fn moduli_coord(&self) -> Option<f64> {
        match self {
            Verdict::NonTotallyGeodesic { moduli_coord, .. } => *moduli_coord,
            _ => None,
        }
    }

    pub fn family(&self) -> Option<&str> {
        match self {
            Verdict::NonTotallyGeodesic { family, .. } => Some(family),
            _ => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::TotallyGeodesic { label } => write!(f, "{} ({label})", self.class()),
            Verdict::NonTotallyGeodesic { family, moduli_coord: Some(c) } => {
                write!(f, "{} (family {family}, coordinate {})", self.class(), fmt_num(*c))
            }
            Verdict::NonTotallyGeodesic { family, moduli_coord: None } => {
                write!(f, "{} (family {family})", self.class())
            }
            Verdict::NotCohomogeneityOne { reason } => write!(f, "{} ({reason})", self.class()),
            _ => f.write_str(self.class()),
        }
    }
}

/// Angle data of `W`; recorded only when it is constant on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum AngleInvariant {
    None,
    Kahler { phi: f64 },
    QkTriple { phi: [f64; 3] },
    CayleyModulus { tau: f64 },
}

impl AngleInvariant {
    fn values(&self) -> Vec<f64> {
        match self {
            AngleInvariant::None => vec![],
            AngleInvariant::Kahler { phi } => vec![*phi],
            AngleInvariant::QkTriple { phi } => phi.to_vec(),
            AngleInvariant::CayleyModulus { tau } => vec![*tau],
        }
    }
}

impl fmt::Display for AngleInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleInvariant::None => f.write_str("none"),
            AngleInvariant::Kahler { phi } => write!(f, "Kahler angle {}", fmt_num(*phi)),
            AngleInvariant::QkTriple { phi } => write!(f, "quaternionic Kahler angle {}", fmt_triple(phi)),
            AngleInvariant::CayleyModulus { tau } => write!(f, "Cayley modulus {}", fmt_num(*tau)),
        }
    }
}

/// Numerical evidence behind a verdict.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Margins {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constancy_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transitivity_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub required_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationRecord {
    pub space: SolvableModel,
    /// `dim 𝔳₀^⊥`, the codimension of the singular orbit.
    pub codim: usize,
    pub angle_invariant: AngleInvariant,
    pub verdict: Verdict,
    pub margins: Margins,
}

impl ClassificationRecord {
    /// Largest difference of real coordinates between two records with the
    /// same space, codimension, verdict and labels; infinite otherwise.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.space != other.space || self.codim != other.codim {
            return f64::INFINITY;
        }
        let verdict_gap = match (&self.verdict, &other.verdict) {
            (
                Verdict::NonTotallyGeodesic { family: f1, moduli_coord: c1 },
                Verdict::NonTotallyGeodesic { family: f2, moduli_coord: c2 },
            ) if f1 == f2 => match (c1, c2) {
                (Some(x), Some(y)) => (x - y).abs(),
                (None, None) => 0.0,
                _ => f64::INFINITY,
            },
            (Verdict::NotCohomogeneityOne { .. }, Verdict::NotCohomogeneityOne { .. }) => 0.0,
            (a, b) if a == b => 0.0,
            _ => f64::INFINITY,
        };
        if std::mem::discriminant(&self.angle_invariant) != std::mem::discriminant(&other.angle_invariant) {
            return f64::INFINITY;
        }
        let (a, b) = (self.angle_invariant.values(), other.angle_invariant.values());
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(verdict_gap, f64::max)
    }

    /// [`distance`](Self::distance) within `tol`.
    pub fn agrees_with(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

impl fmt::Display for ClassificationRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space: {}", self.space)?;
        writeln!(f, "codim: {}", self.codim)?;
        writeln!(f, "angle invariant: {}", self.angle_invariant)?;
        write!(f, "verdict: {}", self.verdict)?;
        let m = &self.margins;
        if let Some(d) = m.constancy_defect {
            write!(f, "\nconstancy defect: {d:.3e}")?;
        }
        if let (Some(r), Some(q)) = (m.orbit_rank, m.required_rank) {
            write!(f, "\norbit rank: {r} (required {q})")?;
        }
        if let Some(t) = m.transitivity_margin {
            write!(f, "\ntransitivity margin: {t:.3e}")?;
        }
        if let Some(d) = m.family_distance {
            write!(f, "\nfamily distance: {d:.3e}")?;
        }
        Ok(())
    }
}

fn close_opt(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        (None, None) => true,
        _ => false,
    }
}

/// Rounds to four decimals for display.
pub fn fmt_num(x: f64) -> String {
    let r = (x * 1e4).round() / 1e4;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

pub fn fmt_triple(t: &[f64; 3]) -> String {
    format!("({}, {}, {})", fmt_num(t[0]), fmt_num(t[1]), fmt_num(t[2]))
}

fn not_c1(reason: &str) -> Verdict {
    Verdict::NotCohomogeneityOne { reason: reason.into() }
}

const NOT_CONSTANT: &str = "angle invariant of the normal space is not constant";
const NOT_TRANSITIVE: &str = "normalizer is not transitive on the unit sphere of the normal space";

/// Classifies the action induced by `𝔳₀`.
pub fn classify_subspace(
    model: &SolvableModel,
    v0: &Subspace,
    tol: &Tolerance,
    samples: usize,
    seed: u64,
) -> Result<ClassificationRecord> {
    if v0.ambient_dim() != model.dim_v() {
        return Err(Error::DimensionMismatch { expected: model.dim_v(), got: v0.ambient_dim() });
    }
    let w = v0.complement();
    let codim = w.dim();
    let mut rec = ClassificationRecord {
        space: *model,
        codim,
        angle_invariant: AngleInvariant::None,
        verdict: Verdict::Transitive,
        margins: Margins::default(),
    };
    if codim == 0 {
        return Ok(rec);
    }
    if codim == 1 {
        rec.verdict = Verdict::FoliationSolvable;
        return Ok(rec);
    }

    // angle constancy
    match model.tag() {
        AlgebraTag::R => {}
        AlgebraTag::C => {
            let j = ComplexStructure::new(model.complex_structure()?)?;
            let r = kahler_constancy(&w, &j, tol)?;
            rec.margins.constancy_defect = Some(r.defect);
            if !r.constant {
                rec.verdict = not_c1(NOT_CONSTANT);
                return Ok(rec);
            }
            rec.angle_invariant = AngleInvariant::Kahler { phi: r.phi };
        }
        AlgebraTag::H => {
            let q = QuaternionicStructure::new(model.quaternionic_structure()?)?;
            let t = qk_constancy(&w, &q, samples, seed)?;
            rec.margins.constancy_defect = Some(t.constancy_defect);
            if t.constancy_defect > tol.defect_tol {
                rec.verdict = not_c1(NOT_CONSTANT);
                return Ok(rec);
            }
            rec.angle_invariant = AngleInvariant::QkTriple { phi: t.phi };
        }
        AlgebraTag::O => {
            if codim == 4 {
                rec.angle_invariant = AngleInvariant::CayleyModulus { tau: cayley_modulus(&w)? };
            }
        }
    }

    // transitivity of the normalizer on the unit sphere of W
    let nrm = normalizer_in(&kx_basis(model), v0)?;
    let tr = sphere_transitivity(&nrm, &w, samples, seed)?;
    rec.margins.transitivity_margin = Some(tr.margin);
    rec.margins.orbit_rank = Some(tr.min_rank);
    rec.margins.required_rank = Some(tr.required);
    if !tr.transitive {
        rec.verdict = not_c1(NOT_TRANSITIVE);
        return Ok(rec);
    }

    let n = model.n();
    rec.verdict = match model.tag() {
        AlgebraTag::R => Verdict::TotallyGeodesic { label: format!("RH^{}", n - codim) },
        AlgebraTag::C => {
            let AngleInvariant::Kahler { phi } = rec.angle_invariant else { unreachable!() };
            if phi <= FAMILY_MATCH_TOL {
                rec.margins.family_distance = Some(phi);
                Verdict::TotallyGeodesic { label: format!("CH^{}", n - codim / 2) }
            } else if FRAC_PI_2 - phi <= FAMILY_MATCH_TOL {
                rec.margins.family_distance = Some(FRAC_PI_2 - phi);
                Verdict::NonTotallyGeodesic { family: FamilyLabel::Real.to_string(), moduli_coord: None }
            } else {
                Verdict::NonTotallyGeodesic { family: FamilyLabel::Kangle.to_string(), moduli_coord: Some(phi) }
            }
        }
        AlgebraTag::H => {
            let AngleInvariant::QkTriple { phi } = rec.angle_invariant else { unreachable!() };
            let (verdict, dist) = match_quaternionic(n, codim, &phi);
            rec.margins.family_distance = dist;
            verdict
        }
        AlgebraTag::O => match codim {
            8 => Verdict::TotallyGeodesic { label: "OH^1".into() },
            4 => {
                let AngleInvariant::CayleyModulus { tau } = rec.angle_invariant else { unreachable!() };
                Verdict::NonTotallyGeodesic { family: "spin7".into(), moduli_coord: Some(tau) }
            }
            2 | 3 | 6 | 7 => Verdict::NonTotallyGeodesic { family: "spin7".into(), moduli_coord: None },
            _ => not_c1(NOT_TRANSITIVE),
        },
    };
    Ok(rec)
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Matches a constant triple against the known quaternionic families.
fn match_quaternionic(n: usize, codim: usize, phi: &[f64; 3]) -> (Verdict, Option<f64>) {
    let h = FRAC_PI_2;
    let tol = FAMILY_MATCH_TOL;
    let non_tg =
        |label: FamilyLabel, c: Option<f64>| Verdict::NonTotallyGeodesic { family: label.to_string(), moduli_coord: c };

    if codim.is_multiple_of(4) && dist(phi, &[0.0; 3]) <= tol {
        return (Verdict::TotallyGeodesic { label: format!("HH^{}", n - codim / 4) }, Some(dist(phi, &[0.0; 3])));
    }
    // (φ, π/2, π/2): b at φ = 0, c at φ = π/2, e in between
    let second = (h - phi[1]).abs().max((h - phi[2]).abs());
    if second <= tol {
        let phi1 = phi[0];
        let label = if h - phi1 <= tol {
            FamilyLabel::C
        } else if !codim.is_multiple_of(2) {
            return (Verdict::UnknownConstantAngle, None);
        } else if phi1 <= tol {
            FamilyLabel::B
        } else {
            FamilyLabel::E
        };
        // in codimension two the whole interval [0, π/2] is one moduli space
        let coord = (label == FamilyLabel::E || (codim == 2 && n > 2)).then_some(phi1);
        let d = match label {
            FamilyLabel::B => second.max(phi1),
            FamilyLabel::C => second.max(h - phi1),
            _ => second,
        };
        return (non_tg(label, coord), Some(d));
    }
    if codim == 3 && dist(phi, &[0.0, 0.0, h]) <= tol {
        return (non_tg(FamilyLabel::D, None), Some(dist(phi, &[0.0, 0.0, h])));
    }
    if codim.is_multiple_of(4) && phi[0] <= tol && (phi[1] - phi[2]).abs() <= tol {
        return (non_tg(FamilyLabel::F, Some(phi[1])), Some(phi[0].max((phi[1] - phi[2]).abs())));
    }
    (Verdict::UnknownConstantAngle, None)
}

/// Result of comparing two records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equivalence {
    Equivalent,
    Inequivalent,
    /// At least one record is outside the known families.
    Undecidable,
}

/// Decides orbit equivalence of the actions behind two records using the
/// complete invariants of the known families: codimension, family and moduli
/// coordinate.
pub fn orbit_equivalent(r1: &ClassificationRecord, r2: &ClassificationRecord, tol: f64) -> Result<Equivalence> {
    if r1.space != r2.space {
        return Err(invalid(format!("records live in different spaces ({} and {})", r1.space, r2.space)));
    }
    let undecidable = |v: &Verdict| matches!(v, Verdict::UnknownConstantAngle | Verdict::NotCohomogeneityOne { .. });
    if undecidable(&r1.verdict) || undecidable(&r2.verdict) {
        return Ok(Equivalence::Undecidable);
    }
    let same = r1.codim == r2.codim
        && match (&r1.verdict, &r2.verdict) {
            (
                Verdict::NonTotallyGeodesic { family: f1, moduli_coord: c1 },
                Verdict::NonTotallyGeodesic { family: f2, moduli_coord: c2 },
            ) => {
                // the codimension-two quaternionic interval joins families b, c, e
                let joined = r1.space.tag() == AlgebraTag::H && r1.codim == 2 && r1.space.n() > 2;
                (joined || f1 == f2) && close_opt(*c1, *c2, tol)
            }
            (a, b) => a == b,
        };
    Ok(if same { Equivalence::Equivalent } else { Equivalence::Inequivalent })
}
