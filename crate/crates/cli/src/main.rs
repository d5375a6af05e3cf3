use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dec_core::experiment::{self, ConvergenceConfig, LevelError, ReportFormat};
use dec_core::mesh::{self, MeshFamily, MeshFamilySpec, DEFAULT_ALPHA};
use dec_core::{DualComplex, SimplicialComplex, SolverConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_MESH: u8 = 3;

#[derive(Parser)]
#[command(name = "declab", version, about = "DEC Hodge-Laplacian convergence lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve on a sequence of meshes and tabulate error norms and rates.
    Convergence(ConvergenceArgs),
    /// Centroid condition, Π - J kernel and commuting checks on one mesh.
    Diagnostics(MeshArgs),
    /// Write a generated mesh in the text format.
    GenMesh {
        #[command(flatten)]
        mesh: MeshSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV of primal/dual volumes for every simplex.
    DualReport {
        #[command(flatten)]
        mesh: MeshSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coordinate-format dump of D, ⋆, δ, L and the system matrix.
    DumpOperators(MeshArgs),
    /// Invariant suite for smooth forms and quadrature.
    SelftestForms,
}

#[derive(Args)]
struct MeshSource {
    #[arg(long, default_value = "symmetric")]
    family: MeshFamily,
    #[arg(long, default_value_t = 3)]
    level: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Read the mesh from a file instead of generating it.
    #[arg(long, conflicts_with_all = ["family", "level", "seed", "alpha"])]
    mesh: Option<PathBuf>,
}

#[derive(Args)]
struct MeshArgs {
    #[command(flatten)]
    mesh: MeshSource,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
    k: u8,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
    k: u8,
    #[arg(long, default_value = "symmetric")]
    family: MeshFamily,
    /// Inclusive range `a..b`.
    #[arg(long, default_value = "2..6", value_parser = parse_levels)]
    levels: Levels,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value = "markdown")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-12)]
    solver_tol: f64,
    #[arg(long)]
    solver_maxit: Option<usize>,
}

#[derive(Clone, Debug)]
struct Levels(Vec<usize>);

fn parse_levels(s: &str) -> Result<Levels, String> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a..b, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 ≤ a ≤ b, got {a}..{b}"));
    }
    Ok(Levels((a..=b).collect()))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn mesh(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_MESH,
            message: format!("mesh generation failed: {e}"),
        }
    }

    fn solver(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_SOLVER,
            message: format!("solver failed: {e}"),
        }
    }

    fn other(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::other(e)
    }
}

impl From<LevelError> for Failure {
    fn from(e: LevelError) -> Self {
        match e {
            LevelError::Mesh(e) => Self::mesh(e),
            LevelError::Solve(e) => Self::solver(e),
        }
    }
}

fn load(src: &MeshSource) -> Result<(SimplicialComplex, DualComplex), Failure> {
    let complex = match &src.mesh {
        Some(path) => mesh::read_mesh(path).map_err(Failure::mesh)?,
        None => spec(src).generate().map_err(Failure::mesh)?,
    };
    let dual = DualComplex::build(&complex).map_err(Failure::mesh)?;
    Ok((complex, dual))
}

fn spec(src: &MeshSource) -> MeshFamilySpec {
    match src.family {
        MeshFamily::Symmetric => MeshFamilySpec::symmetric(src.level),
        MeshFamily::Perturbed => MeshFamilySpec::perturbed(src.level, src.seed, src.alpha),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Convergence(a) => {
            let cfg = ConvergenceConfig {
                k: a.k as usize,
                family: a.family,
                levels: a.levels.0,
                seed: a.seed,
                alpha: a.alpha,
                solver: SolverConfig {
                    tolerance: a.solver_tol,
                    max_iterations: a.solver_maxit,
                    ..SolverConfig::default()
                },
            };
            let report = experiment::run_convergence(&cfg)?;
            emit(&experiment::render_report(&report, a.format), a.out.as_ref())
        }
        Command::Diagnostics(a) => {
            let (complex, dual) = load(&a.mesh)?;
            let diag = experiment::diagnostics(&complex, &dual, a.k as usize).map_err(Failure::other)?;
            emit(&diag.to_string(), a.out.as_ref())
        }
        Command::GenMesh { mesh: src, out } => {
            let complex = match &src.mesh {
                Some(path) => mesh::read_mesh(path),
                None => spec(&src).generate(),
            }
            .map_err(Failure::mesh)?;
            emit(&mesh::mesh_to_string(&complex), out.as_ref())
        }
        Command::DualReport { mesh: src, out } => {
            let (complex, dual) = load(&src)?;
            emit(&experiment::dual_report_csv(&complex, &dual), out.as_ref())
        }
        Command::DumpOperators(a) => {
            let (complex, dual) = load(&a.mesh)?;
            let dump = experiment::operator_dump(&complex, &dual, a.k as usize).map_err(Failure::other)?;
            emit(&dump, a.out.as_ref())
        }
        Command::SelftestForms => {
            let checks = experiment::forms_selftest().map_err(Failure::other)?;
            let mut text = String::new();
            for c in &checks {
                text.push_str(&format!("{c}\n"));
            }
            emit(&text, None)?;
            if checks.iter().any(|c| c.passed == Some(false)) {
                return Err(Failure::other("forms self-test failed"));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
