//! `cohom` command-line entry point.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cohom::algebra::AlgebraTag;
use cohom::angles::{
    kahler_constancy, qk_constancy, ComplexStructure, KahlerReport, QkAngleTriple, QuaternionicStructure,
};
use cohom::classify::{classify_subspace, fmt_num, fmt_triple, moduli_table, verify_suite, CheckStatus, VerifyConfig};
use cohom::error::Error;
use cohom::families::{construct, FamilyLabel, FamilySpec};
use cohom::io::{LoadedSubspace, SubspaceFile};
use cohom::model::SolvableModel;
use cohom::numerics::Tolerance;
use cohom::stabilizers::{cayley_modulus, grassmann_orbit_dim, spin7_basis};

#[derive(Debug, Parser)]
#[command(name = "cohom", version)]
#[command(about = "cohomogeneity one actions on rank-one hyperbolic spaces")]
struct Cli {
    /// Seed for every sampled test.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Number of random sample points per test.
    #[arg(long, global = true, default_value_t = 64)]
    samples: usize,

    /// Defect tolerance for constancy and closure decisions.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Paper,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Angle invariant of the subspace in FILE.
    Angle {
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Write a family subspace to a file.
    Construct {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        phi: Option<f64>,
        /// Space as TAG:N, e.g. H:3.
        #[arg(long)]
        space: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Classify the action induced by the normal space in FILE.
    Classify {
        #[arg(long)]
        subspace: PathBuf,
    },
    /// Moduli catalog of a space.
    Moduli {
        /// Space as TAG:N, e.g. C:4.
        #[arg(long)]
        space: String,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Paper)]
        suite: Suite,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Only run checks whose id starts with one of these.
        #[arg(long)]
        only: Vec<String>,
        /// Only run checks touching these algebras (R, C, H, O).
        #[arg(long)]
        algebra: Vec<String>,
        /// Replace every real-valued check threshold.
        #[arg(long)]
        threshold: Option<f64>,
    },
}

/// Failure kinds mapped to exit codes.
enum Failure {
    /// Bad input or usage: exit 2.
    Input(String),
    /// A check or internal assertion failed: exit 1.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_)
            | Error::Json(_)
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::Inadmissible(_) => Failure::Input(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

fn tolerance(cli: &Cli) -> CliResult<Tolerance> {
    Ok(Tolerance::default().with_defect(cli.tol)?)
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> CliResult<()> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(value).map_err(Error::from)?,
        Format::Text => text(),
    };
    match writeln!(std::io::stdout().lock(), "{body}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure::Check(format!("cannot write output: {e}")))
        }
        _ => Ok(()),
    }
}

fn load(path: &std::path::Path) -> CliResult<LoadedSubspace> {
    let loaded = SubspaceFile::read(path)?.validate()?;
    if loaded.orthonormalized {
        eprintln!("warning: basis rows of {} are not orthonormal; orthonormalized on load", path.display());
    }
    Ok(loaded)
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "camelCase")]
enum AngleOutput {
    None,
    Kahler(KahlerReport),
    QkTriple(QkAngleTriple),
    #[serde(rename_all = "camelCase")]
    Cayley {
        #[serde(skip_serializing_if = "Option::is_none")]
        tau: Option<f64>,
        grassmann_orbit_dim: usize,
    },
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Angle { subspace } => {
            let LoadedSubspace { model, w, .. } = load(subspace)?;
            if w.dim() == 0 {
                return Err(Failure::Input("the subspace is zero; no angle is defined".into()));
            }
            let tol = tolerance(cli)?;
            let out = match model.tag() {
                AlgebraTag::R => AngleOutput::None,
                AlgebraTag::C => {
                    let j = ComplexStructure::new(model.complex_structure()?)?;
                    AngleOutput::Kahler(kahler_constancy(&w, &j, &tol)?)
                }
                AlgebraTag::H => {
                    let q = QuaternionicStructure::new(model.quaternionic_structure()?)?;
                    AngleOutput::QkTriple(qk_constancy(&w, &q, cli.samples, cli.seed)?)
                }
                AlgebraTag::O => AngleOutput::Cayley {
                    tau: if w.dim() == 4 { Some(cayley_modulus(&w)?) } else { None },
                    grassmann_orbit_dim: grassmann_orbit_dim(spin7_basis(), &w)?,
                },
            };
            emit(cli, &out, || match &out {
                AngleOutput::None => "no angle invariant in real hyperbolic space".into(),
                AngleOutput::Kahler(r) => {
                    let c = if r.constant {
                        "constant".to_string()
                    } else {
                        format!("not constant (defect {:.3e})", r.defect)
                    };
                    format!("phi = {}, {c}", fmt_num(r.phi))
                }
                AngleOutput::QkTriple(t) => {
                    let c = if t.constancy_defect <= cli.tol { "constant" } else { "not constant" };
                    format!("{}\n{c} (defect {:.3e})", fmt_triple(&t.phi), t.constancy_defect)
                }
                AngleOutput::Cayley { tau, grassmann_orbit_dim } => {
                    let t = tau.map(|t| format!("tau = {}\n", fmt_num(t))).unwrap_or_default();
                    format!("{t}Spin(7) orbit dimension in the Grassmannian: {grassmann_orbit_dim}")
                }
            })
        }
        Command::Construct { family, k, phi, space, output } => {
            let model = SolvableModel::parse(space)?;
            let label = FamilyLabel::parse(family)?;
            let spec = FamilySpec::new(label, model, *k, *phi)?;
            let w = construct(&spec)?;
            SubspaceFile::new(&model, &w).write(output)?;
            #[derive(Serialize)]
            struct Written<'a> {
                file: String,
                spec: &'a FamilySpec,
                dim: usize,
            }
            let out = Written { file: output.display().to_string(), spec: &spec, dim: w.dim() };
            emit(cli, &out, || {
                format!("wrote {}-dimensional family {label} subspace of {model} to {}", w.dim(), output.display())
            })
        }
        Command::Classify { subspace } => {
            let LoadedSubspace { model, w, .. } = load(subspace)?;
            let rec = classify_subspace(&model, &w.complement(), &tolerance(cli)?, cli.samples, cli.seed)?;
            emit(cli, &rec, || rec.to_string())
        }
        Command::Moduli { space } => {
            let model = SolvableModel::parse(space)?;
            let table = moduli_table(model.tag(), model.n())?;
            emit(cli, &table, || table.to_string().trim_end().to_string())
        }
        Command::Verify { suite: Suite::Paper, report, only, algebra, threshold } => {
            tolerance(cli)?;
            let tags = if algebra.is_empty() {
                None
            } else {
                Some(algebra.iter().map(|a| AlgebraTag::parse(a)).collect::<cohom::error::Result<Vec<_>>>()?)
            };
            let config = VerifyConfig {
                seed: cli.seed,
                samples: cli.samples,
                tol: cli.tol,
                threshold_override: *threshold,
                tags,
                ids: if only.is_empty() { None } else { Some(only.clone()) },
            };
            let rep = verify_suite(&config);
            if let Some(path) = report {
                let mut text = serde_json::to_string_pretty(&rep).map_err(Error::from)?;
                text.push('\n');
                std::fs::write(path, text).map_err(Error::from)?;
            }
            emit(cli, &rep, || {
                let mut lines: Vec<String> = rep
                    .checks
                    .iter()
                    .map(|c| {
                        let s = if c.status == CheckStatus::Pass { "PASS" } else { "FAIL" };
                        format!("{s} {:<30} margin {:>10.3e}  {:>6} ms  {}", c.id, c.margin, c.runtime_ms, c.detail)
                    })
                    .collect();
                let failed = rep.failures().count();
                lines.push(format!("{} of {} checks passed", rep.checks.len() - failed, rep.checks.len()));
                lines.join("\n")
            })?;
            if rep.passed {
                Ok(())
            } else {
                Err(Failure::Check(format!("{} check(s) failed", rep.failures().count())))
            }
        }
    }
}
