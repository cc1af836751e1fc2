//! Static moduli catalogs of cohomogeneity one actions.

use std::fmt;

use serde::Serialize;

use crate::algebra::AlgebraTag;
use crate::error::Result;
use crate::families::{enumerate_admissible, FamilyLabel};
use crate::model::SolvableModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub label: String,
    pub description: String,
}

fn entry(id: impl Into<String>, label: impl Into<String>, description: impl Into<String>) -> CatalogEntry {
    CatalogEntry { id: id.into(), label: label.into(), description: description.into() }
}

/// One component of the non-totally-geodesic moduli space.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NonTgEntry {
    pub family: String,
    pub codim: usize,
    /// Range of the continuous coordinate, if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    /// Whether the range includes its endpoints.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModuliTable {
    pub space: SolvableModel,
    pub foliations: Vec<CatalogEntry>,
    pub totally_geodesic: Vec<CatalogEntry>,
    pub non_tg: Vec<NonTgEntry>,
    /// The non-totally-geodesic moduli space written out for this `n`.
    pub non_tg_summary: String,
    /// Whether the listed non-totally-geodesic families are known to be all.
    pub non_tg_complete: bool,
    pub hypersurfaces: Vec<CatalogEntry>,
}

impl ModuliTable {
    /// Sorted, deduplicated codimensions of the non-totally-geodesic part.
    pub fn non_tg_codims(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.non_tg.iter().map(|e| e.codim).collect();
        c.sort_unstable();
        c.dedup();
        c
    }
}

fn set(items: &[usize]) -> String {
    let parts: Vec<String> = items.iter().map(|k| k.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// Catalog of actions on `𝔽Hⁿ`.
pub fn moduli_table(tag: AlgebraTag, n: usize) -> Result<ModuliTable> {
    let space = SolvableModel::new(tag, n)?;
    let name = space.to_string();
    let foliations = vec![
        entry(
            "horosphere",
            "horosphere foliation",
            format!("orbits of the nilpotent part N of the Iwasawa decomposition of {name}"),
        ),
        entry(
            "solvable",
            "solvable foliation",
            "orbits of the subgroup with Lie algebra a + v0 + z, v0 of codimension one in v; exactly one minimal leaf",
        ),
    ];

    let mut tg = vec![entry("pt", "pt", "orbits of the full isotropy group at a point")];
    let mut non_tg = Vec::new();
    let mut hypersurfaces = Vec::new();
    let (summary, complete);

    match tag {
        AlgebraTag::R => {
            for k in 1..=n.saturating_sub(2) {
                tg.push(entry(format!("RH{k}"), format!("RH^{k}"), "totally geodesic real hyperbolic subspace"));
            }
            summary = "∅".to_string();
            complete = true;
        }
        AlgebraTag::C => {
            for k in 1..n {
                tg.push(entry(format!("CH{k}"), format!("CH^{k}"), "totally geodesic complex hyperbolic subspace"));
            }
            tg.push(entry(format!("RH{n}"), format!("RH^{n}"), "totally geodesic real form"));
            let real: Vec<usize> = (2..n).collect();
            let angle: Vec<usize> = (1..).map(|k| 2 * k).take_while(|&c| c < n).collect();
            for &c in &real {
                non_tg.push(NonTgEntry { family: FamilyLabel::Real.to_string(), codim: c, range: None, closed: None });
            }
            for &c in &angle {
                non_tg.push(NonTgEntry {
                    family: FamilyLabel::Kangle.to_string(),
                    codim: c,
                    range: Some([0.0, HALF_PI]),
                    closed: Some(false),
                });
            }
            summary = match (real.is_empty(), angle.is_empty()) {
                (true, true) => "∅".to_string(),
                (false, true) => set(&real),
                (true, false) => format!("(0, π/2) × {}", set(&angle)),
                (false, false) => format!("{} ∪ ((0, π/2) × {})", set(&real), set(&angle)),
            };
            complete = true;
            hypersurfaces = vec![
                entry("C1", "tube around CH^k", "tube of radius r > 0 around a totally geodesic CH^k, k in {0,…,n−1}"),
                entry("C2", "tube around RH^n", "tube of radius r > 0 around a totally geodesic RH^n"),
                entry("C3", "horosphere", "horosphere"),
                entry(
                    "C4",
                    "minimal ruled real hypersurface",
                    "the minimal ruled real hypersurface determined by a horocycle in a totally geodesic RH^2, or one of its equidistant hypersurfaces",
                ),
                entry("C5", "tube around F_k", "tube of radius r > 0 around the normally homogeneous F_k with real normal bundle of rank k in {2,…,n−1}"),
                entry(
                    "C6",
                    "tube around F_{k,phi}",
                    "tube of radius r > 0 around the normally homogeneous F_{k,phi} with normal bundle of rank 2k ≤ n−1 and constant Kahler angle phi in (0, π/2)",
                ),
            ];
        }
        AlgebraTag::H => {
            for k in 1..n {
                tg.push(entry(
                    format!("HH{k}"),
                    format!("HH^{k}"),
                    "totally geodesic quaternionic hyperbolic subspace",
                ));
            }
            tg.push(entry(format!("CH{n}"), format!("CH^{n}"), "totally geodesic complex hyperbolic subspace"));
            for fam in enumerate_admissible(&space).into_iter().filter(|f| !f.totally_geodesic) {
                non_tg.push(NonTgEntry {
                    family: fam.label.to_string(),
                    codim: fam.codim,
                    range: fam.phi_range,
                    closed: fam.phi_range.map(|_| false),
                });
            }
            if n == 2 {
                let codims: Vec<usize> = {
                    let mut c: Vec<usize> = non_tg.iter().map(|e| e.codim).collect();
                    c.sort_unstable();
                    c.dedup();
                    c
                };
                summary = set(&codims);
                complete = true;
            } else {
                non_tg.push(NonTgEntry {
                    family: "codim2".into(),
                    codim: 2,
                    range: Some([0.0, HALF_PI]),
                    closed: Some(true),
                });
                summary = "codimension 2: [0, π/2]; further families b (2k), c (k ≥ 2), d (3), e (2k, (0, π/2)), f (4k, (0, π/2)); completeness conjectural".into();
                complete = false;
            }
        }
        AlgebraTag::O => {
            tg.push(entry("OH1", "OH^1", "totally geodesic Cayley hyperbolic line"));
            tg.push(entry("HH2", "HH^2", "totally geodesic quaternionic hyperbolic plane"));
            for c in [2, 3, 6, 7] {
                non_tg.push(NonTgEntry { family: "spin7".into(), codim: c, range: None, closed: None });
            }
            non_tg.push(NonTgEntry { family: "spin7".into(), codim: 4, range: Some([0.0, 1.0]), closed: Some(true) });
            non_tg.sort_by_key(|e| e.codim);
            summary = "{2, 3, 6, 7} ∪ ({4} × [0, 1])".into();
            complete = true;
            hypersurfaces = vec![
                entry("O1", "geodesic hypersphere", "geodesic hypersphere of radius r > 0"),
                entry("O2", "tube around OH^1", "tube of radius r > 0 around a totally geodesic OH^1"),
                entry("O3", "tube around HH^2", "tube of radius r > 0 around a totally geodesic HH^2"),
                entry("O4", "horosphere", "horosphere"),
                entry("O5", "minimal homogeneous hypersurface", "the minimal homogeneous hypersurface S, or one of its equidistant hypersurfaces"),
                entry("O6", "tube around F_k", "tube of radius r > 0 around the normally homogeneous F_k with normal bundle of rank k in {2, 3, 6, 7}"),
                entry("O7", "tube around F_{4,phi}", "tube of radius r > 0 around the normally homogeneous F_{4,phi}, phi in [0, 1]"),
            ];
        }
    }

    Ok(ModuliTable {
        space,
        foliations,
        totally_geodesic: tg,
        non_tg,
        non_tg_summary: summary,
        non_tg_complete: complete,
        hypersurfaces,
    })
}

impl fmt::Display for ModuliTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "space: {}", self.space)?;
        writeln!(f, "foliations:")?;
        for e in &self.foliations {
            writeln!(f, "  {}: {}", e.label, e.description)?;
        }
        let tg: Vec<&str> = self.totally_geodesic.iter().map(|e| e.label.as_str()).collect();
        writeln!(f, "totally geodesic singular orbits: {{{}}}", tg.join(", "))?;
        writeln!(f, "non-totally-geodesic moduli: {}", self.non_tg_summary)?;
        for e in &self.non_tg {
            match e.range {
                Some([a, b]) => {
                    let (l, r) = if e.closed == Some(true) { ('[', ']') } else { ('(', ')') };
                    writeln!(
                        f,
                        "  codim {} family {} parameter {l}{}, {}{r}",
                        e.codim,
                        e.family,
                        super::fmt_num(a),
                        super::fmt_num(b)
                    )?
                }
                None => writeln!(f, "  codim {} family {}", e.codim, e.family)?,
            }
        }
        if !self.non_tg_complete {
            writeln!(f, "  (list of known families; not proven complete)")?;
        }
        if !self.hypersurfaces.is_empty() {
            writeln!(f, "homogeneous hypersurfaces:")?;
            for e in &self.hypersurfaces {
                writeln!(f, "  ({}) {}", e.id, e.description)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summaries() {
        assert_eq!(moduli_table(AlgebraTag::H, 2).unwrap().non_tg_summary, "{2, 3}");
        assert_eq!(moduli_table(AlgebraTag::R, 6).unwrap().non_tg_summary, "∅");
        assert!(moduli_table(AlgebraTag::R, 6).unwrap().non_tg.is_empty());
        assert_eq!(moduli_table(AlgebraTag::C, 4).unwrap().non_tg_summary, "{2, 3} ∪ ((0, π/2) × {2})");
        assert_eq!(moduli_table(AlgebraTag::C, 2).unwrap().non_tg_summary, "∅");
        assert_eq!(moduli_table(AlgebraTag::C, 5).unwrap().non_tg_summary, "{2, 3, 4} ∪ ((0, π/2) × {2, 4})");
        assert_eq!(moduli_table(AlgebraTag::O, 2).unwrap().non_tg_codims(), vec![2, 3, 4, 6, 7]);
        assert!(moduli_table(AlgebraTag::O, 3).is_err());
    }

    #[test]
    fn catalog_sizes() {
        let c = moduli_table(AlgebraTag::C, 3).unwrap();
        assert_eq!(c.foliations.len(), 2);
        assert_eq!(c.hypersurfaces.len(), 6);
        assert!(c.hypersurfaces.iter().any(|e| e.label == "minimal ruled real hypersurface"));
        assert_eq!(moduli_table(AlgebraTag::O, 2).unwrap().hypersurfaces.len(), 7);
        let labels: Vec<String> = c.totally_geodesic.iter().map(|e| e.label.clone()).collect();
        assert_eq!(labels, ["pt", "CH^1", "CH^2", "RH^3"]);
    }
}
