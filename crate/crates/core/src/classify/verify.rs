//! The self-verification suite behind `cohom verify`.
//!
//! Each check computes an observed defect and compares it with a threshold;
//! it passes when `observed <= threshold`, and `margin = threshold − observed`.
//! Structural mismatches (wrong verdict, wrong dimension) make the observed
//! value infinite. Checks are independent and run in parallel; the report is
//! sorted by id.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify_subspace, moduli_table, orbit_equivalent, ClassificationRecord, Equivalence, Verdict};
use crate::algebra::{AlgebraElement, AlgebraTag};
use crate::angles::{angle_to_subspace, qk_angle_at, qk_constancy, QuaternionicStructure};
use crate::error::Result;
use crate::families::{construct, enumerate_admissible, FamilyLabel, FamilySpec};
use crate::model::{build_s, center_dim, derived_dim, is_subalgebra, jacobi_defect, SolvableModel};
use crate::numerics::{Matrix, Sampler, Tolerance, Vector};
use crate::stabilizers::{
    cayley_completion, cayley_modulus, compute_g2_basis, compute_spin7_basis, grassmann_orbit_dim, kx_basis,
    normalizer_in, sphere_transitivity, spin7_basis,
};
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    /// Defect tolerance handed to the classifier.
    pub tol: f64,
    /// Replaces every real-valued check threshold.
    pub threshold_override: Option<f64>,
    /// Keep only checks touching one of these algebras.
    pub tags: Option<Vec<AlgebraTag>>,
    /// Keep only checks with these ids.
    pub ids: Option<Vec<String>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 42, samples: 64, tol: 1e-8, threshold_override: None, tags: None, ids: None }
    }
}

impl VerifyConfig {
    fn tolerance(&self) -> Tolerance {
        Tolerance::default().with_defect(self.tol).unwrap_or_default()
    }

    fn threshold(&self, pinned: f64) -> f64 {
        self.threshold_override.unwrap_or(pinned)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub id: String,
    pub description: String,
    #[serde(rename = "paperAnchor")]
    pub anchor: String,
    pub status: CheckStatus,
    pub margin: f64,
    pub observed: f64,
    pub threshold: f64,
    pub detail: String,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool_version: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

/// Observed defect, the threshold it is compared with, and a summary.
struct Outcome {
    observed: f64,
    threshold: f64,
    detail: String,
}

struct CheckDef {
    id: &'static str,
    description: &'static str,
    anchor: &'static str,
    tags: &'static [AlgebraTag],
    run: fn(&VerifyConfig) -> Result<Outcome>,
}

use AlgebraTag::{C, H, O, R};

const CHECKS: &[CheckDef] = &[
    CheckDef {
        id: "c01-algebra-soundness",
        description: "composition, alternativity and (xZ)Z = -|Z|^2 x on 1000 samples per algebra",
        anchor: "normed division algebras R, C, H, O",
        tags: &[R, C, H, O],
        run: algebra_soundness,
    },
    CheckDef {
        id: "c02-model-soundness",
        description:
            "Jacobi identity for n <= 5, centre dimensions (0,1,3,7), Heisenberg structure of the complex model",
        anchor: "root space decomposition n = g_alpha + g_2alpha",
        tags: &[R, C, H, O],
        run: model_soundness,
    },
    CheckDef {
        id: "c03-build-s-closure",
        description: "a + v0 + z is a subalgebra for 100 random v0 per model",
        anchor: "reduction to s = a + v0 + z",
        tags: &[R, C, H, O],
        run: build_s_closure,
    },
    CheckDef {
        id: "c04-stabilizer-dimensions",
        description: "spin(7) as annihilator of the Cayley form has dimension 21, g2 has dimension 14, in under 2 s",
        anchor: "isotropy Spin(7) and S^7 = Spin(7)/G2",
        tags: &[O],
        run: stabilizer_dimensions,
    },
    CheckDef {
        id: "c05-spin7-orbit-dimensions",
        description: "Spin(7) orbit dimensions 7, 12, 15, 15 on random 1-4 planes and 12 on Cayley planes",
        anchor: "Spin(7) on oriented Grassmannians of R^8",
        tags: &[O],
        run: spin7_orbit_dimensions,
    },
    CheckDef {
        id: "c06-octonionic-transitivity",
        description: "normalizer transitivity for normal spaces of dimension 2,3,4,6,7 and its failure in dimension 5",
        anchor: "Cayley hyperbolic plane: admissible subspace dimensions",
        tags: &[O],
        run: octonionic_transitivity,
    },
    CheckDef {
        id: "c07-family-angle-table",
        description: "quaternionic Kahler angles of families (a)-(f) in HH^2, HH^3, HH^4",
        anchor: "quaternionic Kahler angle families (a)-(f)",
        tags: &[H],
        run: family_angle_table,
    },
    CheckDef {
        id: "c08-eigen-vs-sampling",
        description: "extremal Kahler angles from M(v) against brute force over the sphere of structures",
        anchor: "definition of the quaternionic Kahler angle by min/max",
        tags: &[H],
        run: eigen_vs_sampling,
    },
    CheckDef {
        id: "c09-complex-moduli",
        description: "complex hyperbolic moduli for n = 3, 4 and total geodesy for n = 2",
        anchor: "complex hyperbolic moduli theorem and its corollary",
        tags: &[C],
        run: complex_moduli,
    },
    CheckDef {
        id: "c10-quaternionic-moduli",
        description:
            "HH^2 non-totally-geodesic codimensions {2,3}; codimension 2 angle recovered and orbit equivalence",
        anchor: "quaternionic hyperbolic moduli theorems",
        tags: &[H],
        run: quaternionic_moduli,
    },
    CheckDef {
        id: "c11-equivariance",
        description: "records of v0 and exp(X) v0 agree for 50 random pairs per model",
        anchor: "orbit equivalence via Ad(K_x)",
        tags: &[R, C, H, O],
        run: equivariance,
    },
    CheckDef {
        id: "c12-cayley-modulus",
        description: "Cayley modulus is Spin(7)-invariant, equals 1 on H, and covers [0,1]",
        anchor: "Cayley hyperbolic moduli {4} x [0,1]",
        tags: &[O],
        run: cayley_modulus_check,
    },
];

/// Ids of every check in the suite.
pub fn check_ids() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.id).collect()
}

fn run_one(def: &CheckDef, config: &VerifyConfig) -> CheckResult {
    let start = Instant::now();
    let (observed, threshold, detail) = match (def.run)(config) {
        Ok(o) => (o.observed, o.threshold, o.detail),
        Err(e) => (f64::INFINITY, 0.0, format!("error: {e}")),
    };
    let pass = observed <= threshold;
    CheckResult {
        id: def.id.into(),
        description: def.description.into(),
        anchor: def.anchor.into(),
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        margin: threshold - observed,
        observed,
        threshold,
        detail,
        runtime_ms: start.elapsed().as_millis() as u64,
    }
}

/// Runs the selected checks.
pub fn verify_suite(config: &VerifyConfig) -> Report {
    let selected: Vec<&CheckDef> = CHECKS
        .iter()
        .filter(|c| config.tags.as_ref().is_none_or(|t| c.tags.iter().any(|x| t.contains(x))))
        .filter(|c| config.ids.as_ref().is_none_or(|ids| ids.iter().any(|i| i == c.id || c.id.starts_with(i.as_str()))))
        .collect();
    let mut checks: Vec<CheckResult> = selected.par_iter().map(|c| run_one(c, config)).collect();
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    Report {
        tool_version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        samples: config.samples,
        tolerance: config.tol,
        passed: checks.iter().all(|c| c.status == CheckStatus::Pass),
        checks,
    }
}

/// Per-check seed derived from the global one.
fn sampler(config: &VerifyConfig, salt: u64) -> Sampler {
    Sampler::new(config.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn model(tag: AlgebraTag, n: usize) -> SolvableModel {
    SolvableModel::new(tag, n).expect("valid model")
}

fn element(tag: AlgebraTag, v: &Vector) -> AlgebraElement {
    AlgebraElement::new(tag, v.as_slice()).expect("length matches")
}

fn algebra_soundness(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 1);
    let mut worst: f64 = 0.0;
    let mut per_tag = Vec::new();
    for tag in AlgebraTag::ALL {
        let d = tag.real_dim();
        let mut tag_worst: f64 = 0.0;
        for _ in 0..1000 {
            let x = element(tag, &s.gaussian(d));
            let y = element(tag, &s.gaussian(d));
            let z = element(tag, &s.gaussian(d)).imaginary_part();
            let comp = ((x * y).norm() - x.norm() * y.norm()).abs();
            let left = (x * (x * y) - (x * x) * y).norm();
            let right = ((y * x) * x - y * (x * x)).norm();
            let j2 = ((x * z) * z + x.scale(z.norm_sqr())).norm();
            tag_worst = tag_worst.max(comp).max(left).max(right).max(j2);
        }
        per_tag.push(format!("{tag}: {tag_worst:.2e}"));
        worst = worst.max(tag_worst);
    }
    Ok(Outcome { observed: worst, threshold: config.threshold(1e-12), detail: per_tag.join(", ") })
}

fn model_soundness(config: &VerifyConfig) -> Result<Outcome> {
    let tol = Tolerance::default();
    let mut jac: f64 = 0.0;
    let mut problems = Vec::new();
    for tag in AlgebraTag::ALL {
        let ns: Vec<usize> = if tag == O { vec![2] } else { (2..=5).collect() };
        for n in ns {
            let m = model(tag, n);
            jac = jac.max(jacobi_defect(&m));
            let expect_z = [0, 1, 3, 7][AlgebraTag::ALL.iter().position(|t| *t == tag).unwrap()];
            if m.dim_z() != expect_z {
                problems.push(format!("{m}: dim z = {}", m.dim_z()));
            }
            if tag == C {
                let nil = m.nilradical_basis().len();
                let (c, d) = (center_dim(&m, &tol), derived_dim(&m, &tol));
                if nil != 2 * n - 1 || c != 1 || d != 1 {
                    problems.push(format!("{m}: dim n = {nil}, centre {c}, derived {d}"));
                }
            }
        }
    }
    let observed = if problems.is_empty() { jac } else { f64::INFINITY };
    let detail = if problems.is_empty() { format!("max Jacobi defect {jac:.2e}") } else { problems.join("; ") };
    Ok(Outcome { observed, threshold: config.threshold(1e-12), detail })
}

fn build_s_closure(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 3);
    let tol = config.tolerance();
    let mut worst: f64 = 0.0;
    let mut open = 0;
    for m in [model(R, 4), model(C, 4), model(H, 3), model(O, 2)] {
        for _ in 0..100 {
            let k = s.below(m.dim_v() + 1);
            let v0 = Subspace::from_orthonormal(s.frame(m.dim_v(), k))?;
            let r = is_subalgebra(&build_s(&m, &v0)?, &tol);
            worst = worst.max(r.defect);
            open += usize::from(!r.closed);
        }
    }
    let observed = if open == 0 { worst } else { f64::INFINITY };
    Ok(Outcome {
        observed,
        threshold: config.threshold(config.tol),
        detail: format!("400 subspaces, {open} not closed, max bracket defect {worst:.2e}"),
    })
}

fn stabilizer_dimensions(_config: &VerifyConfig) -> Result<Outcome> {
    let start = Instant::now();
    let spin7 = compute_spin7_basis();
    let g2 = compute_g2_basis(&spin7);
    let secs = start.elapsed().as_secs_f64();
    let mismatch = spin7.dim().abs_diff(21) + g2.dim().abs_diff(14) + usize::from(secs >= 2.0);
    Ok(Outcome {
        observed: mismatch as f64,
        threshold: 0.0,
        detail: format!("dim spin(7) = {}, dim g2 = {}, {:.3} s", spin7.dim(), g2.dim(), secs),
    })
}

/// A Cayley 4-plane through a random 3-plane.
fn random_cayley_plane(s: &mut Sampler) -> Result<Subspace> {
    let v = Subspace::from_orthonormal(s.frame(8, 3))?;
    let xi = cayley_completion(&v)?;
    let mut cols: Vec<Vector> = (0..3).map(|i| v.vector(i)).collect();
    cols.push(xi);
    Subspace::from_orthonormal(Matrix::from_columns(&cols))
}

fn spin7_orbit_dimensions(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 5);
    let spin7 = spin7_basis();
    let mut mismatches = 0;
    let mut seen = Vec::new();
    for (k, expect) in [(1, 7), (2, 12), (3, 15), (4, 15)] {
        let mut dims = BTreeSet::new();
        for _ in 0..16 {
            let d = grassmann_orbit_dim(spin7, &Subspace::from_orthonormal(s.frame(8, k))?)?;
            mismatches += usize::from(d != expect);
            dims.insert(d);
        }
        seen.push(format!("k={k}: {dims:?}"));
    }
    let mut dims = BTreeSet::new();
    for _ in 0..16 {
        let p = random_cayley_plane(&mut s)?;
        let d = grassmann_orbit_dim(spin7, &p)?;
        mismatches += usize::from(d != 12);
        dims.insert(d);
    }
    let h = Subspace::from_orthonormal(Matrix::identity(8, 8).columns(0, 4).into_owned())?;
    let stab = normalizer_in(spin7, &h)?.dim();
    mismatches += usize::from(grassmann_orbit_dim(spin7, &h)? != 12) + stab.abs_diff(9);
    seen.push(format!("Cayley: {dims:?}, stabilizer of H: {stab}"));
    Ok(Outcome { observed: mismatches as f64, threshold: 0.0, detail: seen.join("; ") })
}

fn octonionic_transitivity(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 6);
    let spin7 = spin7_basis();
    let e = |i: usize| {
        let mut v = Vector::zeros(8);
        v[i] = 1.0;
        v
    };
    let mut mismatches = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut count = 0;
    for k in 2..=7usize {
        let mut cases: Vec<Subspace> =
            (0..4).map(|_| Subspace::from_orthonormal(s.frame(8, k))).collect::<Result<_>>()?;
        cases.push(Subspace::from_vectors(8, &(0..k).map(e).collect::<Vec<_>>(), &Tolerance::default())?);
        cases.push(Subspace::from_vectors(8, &(8 - k..8).map(e).collect::<Vec<_>>(), &Tolerance::default())?);
        if k == 4 {
            cases.push(random_cayley_plane(&mut s)?);
        }
        if k == 3 {
            cases.push(Subspace::from_vectors(8, &[e(1), e(2), e(3)], &Tolerance::default())?);
        }
        for w in cases {
            let nrm = normalizer_in(spin7, &w.complement())?;
            let r = sphere_transitivity(&nrm, &w, config.samples, s.fork())?;
            count += 1;
            if r.transitive != (k != 5) {
                mismatches.push(format!("dim {k}: transitive = {}", r.transitive));
            } else if r.transitive {
                min_margin = min_margin.min(r.margin);
            }
        }
    }
    Ok(Outcome {
        observed: mismatches.len() as f64,
        threshold: 0.0,
        detail: if mismatches.is_empty() {
            format!("{count} subspaces, smallest transitive margin {min_margin:.2e}")
        } else {
            mismatches.join("; ")
        },
    })
}

/// Expected triple of a quaternionic family.
pub fn expected_triple(label: FamilyLabel, phi: Option<f64>) -> Option<[f64; 3]> {
    let h = FRAC_PI_2;
    Some(match label {
        FamilyLabel::A => [0.0, 0.0, 0.0],
        FamilyLabel::B => [0.0, h, h],
        FamilyLabel::C => [h, h, h],
        FamilyLabel::D => [0.0, 0.0, h],
        FamilyLabel::E => [phi?, h, h],
        FamilyLabel::F => [0.0, phi?, phi?],
        _ => return None,
    })
}

#[allow(clippy::approx_constant)]
pub const FAMILY_ANGLES: [f64; 3] = [0.2, 0.7853, 1.2];

fn family_angle_table(config: &VerifyConfig) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 2..=4 {
        let m = model(H, n);
        let q = QuaternionicStructure::new(m.quaternionic_structure()?)?;
        for fam in enumerate_admissible(&m) {
            let angles: &[f64] = if fam.label.has_angle() { &FAMILY_ANGLES } else { &[0.0] };
            for &phi in angles {
                let spec = fam.spec(phi)?;
                let t = qk_constancy(&construct(&spec)?, &q, config.samples, config.seed)?;
                let expect = expected_triple(spec.label, spec.phi).expect("quaternionic family");
                worst = worst.max(t.distance(&expect)).max(t.constancy_defect);
                cases += 1;
            }
        }
    }
    Ok(Outcome {
        observed: worst,
        threshold: config.threshold(1e-8),
        detail: format!("{cases} family instances, worst {worst:.2e}"),
    })
}

/// Points of a Fibonacci lattice on `S²`.
fn fibonacci_sphere(count: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            [r * t.cos(), r * t.sin(), z]
        })
        .collect()
}

/// Minimum and maximum of `f` on `S²`: best of a lattice, refined by a
/// shrinking pattern search in the tangent plane.
fn sphere_extremes(f: &dyn Fn(&[f64; 3]) -> f64, lattice: &[[f64; 3]]) -> (f64, f64) {
    let polish = |sign: f64| {
        let g = |a: &[f64; 3]| sign * f(a);
        let mut best = *lattice.iter().min_by(|a, b| g(a).total_cmp(&g(b))).expect("nonempty lattice");
        let mut val = g(&best);
        let mut h = 0.05;
        while h > 1e-11 {
            let a = Vector::from_column_slice(&best);
            let helper = if a[0].abs() < 0.9 {
                Vector::from_column_slice(&[1.0, 0.0, 0.0])
            } else {
                Vector::from_column_slice(&[0.0, 1.0, 0.0])
            };
            let t1 = (&helper - &a * a.dot(&helper)).normalize();
            let t2 = a.cross(&t1);
            let mut improved = false;
            for dir in [&t1, &t2] {
                for step in [h, -h] {
                    let c = (&a + dir * step).normalize();
                    let c = [c[0], c[1], c[2]];
                    let v = g(&c);
                    if v < val {
                        val = v;
                        best = c;
                        improved = true;
                    }
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
        sign * val
    };
    (polish(1.0), polish(-1.0))
}

fn eigen_vs_sampling(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 8);
    let lattice = fibonacci_sphere(10_000);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let m = model(H, 3 + i % 2);
        let q = QuaternionicStructure::new(m.quaternionic_structure()?)?;
        let k = 2 + s.below(5);
        let w = Subspace::from_orthonormal(s.frame(m.dim_v(), k))?;
        let v = w.basis() * s.unit(k);
        let jv: Vec<Vector> = q.matrices().iter().map(|j| j * &v).collect();
        let angle = |a: &[f64; 3]| {
            let x = &jv[0] * a[0] + &jv[1] * a[1] + &jv[2] * a[2];
            angle_to_subspace(&w, &(&x / x.norm()))
        };
        let (lo, hi) = sphere_extremes(&angle, &lattice);
        let t = qk_angle_at(&w, &v, &q)?;
        worst = worst.max((lo - t.phi[0]).abs()).max((hi - t.phi[2]).abs());
    }
    Ok(Outcome {
        observed: worst,
        threshold: config.threshold(1e-6),
        detail: format!("20 subspaces, worst gap {worst:.2e}"),
    })
}

fn classify_w(m: &SolvableModel, w: &Subspace, config: &VerifyConfig) -> Result<ClassificationRecord> {
    classify_subspace(m, &w.complement(), &config.tolerance(), config.samples, config.seed)
}

fn complex_moduli(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 9);
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for n in [3, 4] {
        let m = model(C, n);
        let mut real = BTreeSet::new();
        let mut kangle = BTreeSet::new();
        for fam in enumerate_admissible(&m) {
            let angles: &[f64] = if fam.label.has_angle() { &FAMILY_ANGLES } else { &[0.0] };
            for &phi in angles {
                let spec = fam.spec(phi)?;
                let r = classify_w(&m, &construct(&spec)?, config)?;
                match (fam.label, &r.verdict) {
                    (FamilyLabel::Complex, Verdict::TotallyGeodesic { label })
                        if *label == format!("CH^{}", n - fam.k) => {}
                    (FamilyLabel::Real, Verdict::NonTotallyGeodesic { family, moduli_coord: None })
                        if family == "real" =>
                    {
                        real.insert(r.codim);
                    }
                    (FamilyLabel::Kangle, Verdict::NonTotallyGeodesic { family, moduli_coord: Some(c) })
                        if family == "kangle" =>
                    {
                        worst = worst.max((c - phi).abs());
                        kangle.insert(r.codim);
                    }
                    _ => problems.push(format!("{m} {} k={}: {}", fam.label, fam.k, r.verdict)),
                }
            }
        }
        // every real 2-plane has constant Kahler angle
        for _ in 0..3 {
            let r = classify_w(&m, &Subspace::from_orthonormal(s.frame(m.dim_v(), 2))?, config)?;
            match r.verdict.moduli_coord() {
                Some(c) if c > 0.0 && c < FRAC_PI_2 && r.verdict.family() == Some("kangle") => {}
                _ => problems.push(format!("{m} random 2-plane: {}", r.verdict)),
            }
        }
        let table = moduli_table(C, n)?;
        let table_real: BTreeSet<usize> = table.non_tg.iter().filter(|e| e.family == "real").map(|e| e.codim).collect();
        let table_angle: BTreeSet<usize> =
            table.non_tg.iter().filter(|e| e.family == "kangle").map(|e| e.codim).collect();
        if real != table_real || kangle != table_angle {
            problems
                .push(format!("{m}: codims real {real:?} kangle {kangle:?} vs catalog {table_real:?} {table_angle:?}"));
        }
    }
    let c2 = model(C, 2);
    let mut inputs: Vec<Subspace> =
        enumerate_admissible(&c2).iter().map(|f| construct(&f.spec(0.0)?)).collect::<Result<_>>()?;
    inputs.push(Subspace::from_orthonormal(s.frame(2, 2))?);
    for w in inputs {
        let r = classify_w(&c2, &w, config)?;
        if !r.verdict.is_tg() {
            problems.push(format!("CH^2 codim {}: {}", r.codim, r.verdict));
        }
    }
    let observed = if problems.is_empty() { worst } else { f64::INFINITY };
    let detail = if problems.is_empty() {
        format!("all verdicts as catalogued, angle error {worst:.2e}")
    } else {
        problems.join("; ")
    };
    Ok(Outcome { observed, threshold: config.threshold(1e-8), detail })
}

fn quaternionic_moduli(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 10);
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;

    let h2 = model(H, 2);
    let mut non_tg = BTreeSet::new();
    for k in 2..=4 {
        for _ in 0..4 {
            let r = classify_w(&h2, &Subspace::from_orthonormal(s.frame(4, k))?, config)?;
            let ok = match k {
                2 => r.verdict.family() == Some("b"),
                3 => r.verdict.family() == Some("d"),
                _ => r.verdict == Verdict::TotallyGeodesic { label: "HH^1".into() },
            };
            if !ok {
                problems.push(format!("HH^2 dim {k}: {}", r.verdict));
            }
            if r.verdict.is_non_tg() {
                non_tg.insert(r.codim);
            }
        }
    }
    if non_tg.iter().copied().collect::<Vec<_>>() != moduli_table(H, 2)?.non_tg_codims()
        || non_tg != BTreeSet::from([2, 3])
    {
        problems.push(format!("HH^2 non-tg codims {non_tg:?}"));
    }

    for n in [3, 4] {
        let m = model(H, n);
        let kx = kx_basis(&m);
        for _ in 0..5 {
            let r = classify_w(&m, &Subspace::from_orthonormal(s.frame(m.dim_v(), 2))?, config)?;
            match (r.angle_invariant, r.verdict.moduli_coord()) {
                (super::AngleInvariant::QkTriple { phi }, Some(c))
                    if (phi[1] - FRAC_PI_2).abs() < 1e-8 && (phi[2] - FRAC_PI_2).abs() < 1e-8 =>
                {
                    worst = worst.max((c - phi[0]).abs());
                }
                _ => problems.push(format!("{m} random 2-plane: {}", r.verdict)),
            }
        }
        // angle recovery along the codimension-two interval, moved by K_x
        let mut records: Vec<(f64, ClassificationRecord)> = Vec::new();
        let mut targets: Vec<(f64, FamilySpec)> = vec![
            (0.0, FamilySpec::new(FamilyLabel::B, m, 1, None)?),
            (FRAC_PI_2, FamilySpec::new(FamilyLabel::C, m, 2, None)?),
        ];
        for phi in FAMILY_ANGLES {
            targets.push((phi, FamilySpec::new(FamilyLabel::E, m, 1, Some(phi))?));
        }
        for (phi, spec) in &targets {
            for _ in 0..2 {
                let g = kx.random_group_element(&mut s);
                let r = classify_w(&m, &construct(spec)?.transformed(&g)?, config)?;
                match r.verdict.moduli_coord() {
                    Some(c) => worst = worst.max((c - phi).abs()),
                    None => problems.push(format!("{m} phi={phi}: {}", r.verdict)),
                }
                records.push((*phi, r));
            }
        }
        for (p1, r1) in &records {
            for (p2, r2) in &records {
                let truth = (p1 - p2).abs() < 1e-6;
                let got = orbit_equivalent(r1, r2, 1e-6)?;
                if got != if truth { Equivalence::Equivalent } else { Equivalence::Inequivalent } {
                    problems.push(format!("{m}: orbitEquivalent({p1}, {p2}) = {got:?}"));
                }
            }
        }
    }
    let observed = if problems.is_empty() { worst } else { f64::INFINITY };
    let detail = if problems.is_empty() { format!("angle recovery error {worst:.2e}") } else { problems.join("; ") };
    Ok(Outcome { observed, threshold: config.threshold(1e-6), detail })
}

fn equivariance(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 11);
    let mut worst: f64 = 0.0;
    let mut mismatches = Vec::new();
    let tol = config.tolerance();
    for m in [model(R, 4), model(C, 4), model(H, 3), model(O, 2)] {
        let kx = kx_basis(&m);
        let fams = enumerate_admissible(&m);
        for i in 0..50 {
            let v0 = if i % 2 == 0 && !fams.is_empty() {
                let fam = &fams[s.below(fams.len())];
                construct(&fam.spec(s.uniform(0.05, 1.5))?)?.complement()
            } else {
                let k = s.below(m.dim_v() + 1);
                Subspace::from_orthonormal(s.frame(m.dim_v(), k))?
            };
            let g = kx.random_group_element(&mut s);
            let seed = s.fork();
            let r1 = classify_subspace(&m, &v0, &tol, config.samples, seed)?;
            let r2 = classify_subspace(&m, &v0.transformed(&g)?, &tol, config.samples, seed)?;
            let d = r1.distance(&r2);
            if d.is_infinite() {
                mismatches.push(format!("{m}: {} vs {}", r1.verdict, r2.verdict));
            } else {
                worst = worst.max(d);
            }
        }
    }
    let observed = if mismatches.is_empty() { worst } else { f64::INFINITY };
    let detail = if mismatches.is_empty() {
        format!("200 pairs, max coordinate defect {worst:.2e}")
    } else {
        mismatches.join("; ")
    };
    Ok(Outcome { observed, threshold: config.threshold(1e-8), detail })
}

/// A 4-plane `V ⊕ (cos θ ξ + sin θ η)` with `V` a random 3-plane, `ξ` its
/// Cayley completion and `η ⊥ V ⊕ ξ` random; its Cayley modulus is `cos θ`.
pub fn transversal_plane(s: &mut Sampler, theta: f64) -> Result<Subspace> {
    let v = Subspace::from_orthonormal(s.frame(8, 3))?;
    let xi = cayley_completion(&v)?;
    let mut cols: Vec<Vector> = (0..3).map(|i| v.vector(i)).collect();
    let span = Subspace::from_orthonormal(Matrix::from_columns(&[cols.clone(), vec![xi.clone()]].concat()))?;
    let g = s.gaussian(8);
    let eta = (&g - span.project(&g)).normalize();
    cols.push(xi * theta.cos() + eta * theta.sin());
    Subspace::from_orthonormal(Matrix::from_columns(&cols))
}

/// Largest gap in `[0, 1]` left uncovered by the values.
pub fn coverage_gap(values: &[f64]) -> f64 {
    let mut v: Vec<f64> = values.to_vec();
    v.push(0.0);
    v.push(1.0);
    v.sort_by(f64::total_cmp);
    v.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

fn cayley_modulus_check(config: &VerifyConfig) -> Result<Outcome> {
    let mut s = sampler(config, 12);
    let spin7 = spin7_basis();
    let inv_thr = config.threshold(1e-8);
    let gap_thr = config.threshold(0.02);

    let mut invariance: f64 = 0.0;
    for _ in 0..4 {
        let p = Subspace::from_orthonormal(s.frame(8, 4))?;
        let tau = cayley_modulus(&p)?;
        for _ in 0..25 {
            let g = spin7.random_group_element(&mut s);
            invariance = invariance.max((cayley_modulus(&p.transformed(&g)?)? - tau).abs());
        }
    }
    let h = Subspace::from_orthonormal(Matrix::identity(8, 8).columns(0, 4).into_owned())?;
    let on_h = (cayley_modulus(&h)? - 1.0).abs();

    let mut values = Vec::with_capacity(1000);
    for _ in 0..1000 {
        let theta = s.uniform(0.0, FRAC_PI_2);
        values.push(cayley_modulus(&transversal_plane(&mut s, theta)?)?);
    }
    let gap = coverage_gap(&values);

    let haar: Vec<f64> =
        (0..1000).map(|_| cayley_modulus(&Subspace::from_orthonormal(s.frame(8, 4))?)).collect::<Result<_>>()?;
    let (hmin, hmax) = haar.iter().fold((f64::INFINITY, 0f64), |(a, b), &x| (a.min(x), b.max(x)));

    let observed = (invariance / inv_thr).max(on_h / inv_thr).max(gap / gap_thr);
    Ok(Outcome {
        observed,
        threshold: 1.0,
        detail: format!(
            "invariance defect {invariance:.2e}, |tau(H) - 1| = {on_h:.2e}, coverage gap {gap:.4} (Haar-random planes span [{hmin:.3}, {hmax:.3}])"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_unique_and_sorted() {
        let ids = check_ids();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert_eq!(ids.len(), 12);
    }

    #[test]
    fn filtering() {
        let cfg = VerifyConfig { ids: Some(vec!["c04".into()]), ..Default::default() };
        let r = verify_suite(&cfg);
        assert_eq!(r.checks.len(), 1);
        assert!(r.passed);
        let cfg = VerifyConfig {
            tags: Some(vec![AlgebraTag::O]),
            ids: Some(vec!["c04".into(), "c07".into()]),
            ..Default::default()
        };
        assert_eq!(verify_suite(&cfg).checks.len(), 1);
    }

    #[test]
    fn gap_and_transversal() {
        assert_eq!(coverage_gap(&[]), 1.0);
        assert!((coverage_gap(&[0.5]) - 0.5).abs() < 1e-15);
        let mut s = Sampler::new(1);
        for theta in [0.0, 0.4, 1.0, FRAC_PI_2] {
            let p = transversal_plane(&mut s, theta).unwrap();
            assert!((cayley_modulus(&p).unwrap() - theta.cos().abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_search_finds_extremes() {
        let lattice = fibonacci_sphere(2000);
        let f = |a: &[f64; 3]| 2.0 * a[0] * a[0] + a[1] * a[1] - 0.5 * a[2] * a[2];
        let (lo, hi) = sphere_extremes(&f, &lattice);
        assert!((lo + 0.5).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
    }
}
