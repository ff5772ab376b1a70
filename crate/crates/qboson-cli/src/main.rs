//! Command-line verification suites and parameter scans for the q-boson
//! Hopf algebra library.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed,
//! 2 configuration error.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_config_file, ConfigError, RunConfig};

#[derive(Parser)]
#[command(
    name = "qboson",
    about = "Verification suites for a generalized q-boson Hopf algebra, its dual, the universal T matrix, and coherent-state constructions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Deformation parameter q (> 0, never exactly 1)
    #[arg(long)]
    q: Option<f64>,
    /// Deformation parameter α (nonzero)
    #[arg(long)]
    alpha: Option<f64>,
    /// Deformation parameter β
    #[arg(long)]
    beta: Option<f64>,
    /// Truncation dimension for matrix representations
    #[arg(long)]
    dim: Option<usize>,
    /// Series truncation order in the joint (x, y) degree
    #[arg(long)]
    order: Option<u32>,
    /// Override of the main residual tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Flat key=value configuration file (flags override file values)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for the JSON report and CSV datasets
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomized axiom samples
    #[arg(long)]
    seed: Option<u64>,
    /// Include wall-clock timings in the JSON report (breaks byte-for-byte
    /// reproducibility)
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug, Default)]
struct BipartiteArgs {
    /// Coproduct eigenvalue ζ
    #[arg(long)]
    zeta: Option<f64>,
    /// Ansatz parameter ζ₁
    #[arg(long)]
    zeta1: Option<f64>,
    /// Ansatz parameter ζ₂
    #[arg(long)]
    zeta2: Option<f64>,
    /// Geometric boundary δ in (0, 1]
    #[arg(long)]
    delta: Option<f64>,
    /// Scan start (requires --q-max)
    #[arg(long)]
    q_min: Option<f64>,
    /// Scan end (requires --q-min)
    #[arg(long)]
    q_max: Option<f64>,
    /// Number of scan points
    #[arg(long)]
    q_steps: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Hopf axioms, duality axioms, and T matrix comparisons
    HopfVerify(CommonArgs),
    /// The tabulated structure-constant families
    Structure(CommonArgs),
    /// Dual basis construction and the pairing
    DualBasis(CommonArgs),
    /// Universal T matrix: closed form, series, represented form
    Tmatrix(CommonArgs),
    /// Moment integrals and the resolution of unity
    Coherent {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest moment index n
        #[arg(long)]
        nmax: Option<u32>,
    },
    /// Bipartite coherent states: recurrence, norm, entanglement scan
    Bipartite {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        bipartite: BipartiteArgs,
    },
}

fn build_config(common: &CommonArgs) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        let kv = parse_config_file(path)?;
        cfg.apply_file(&kv)?;
    }
    if let Some(v) = common.q {
        cfg.q = v;
    }
    if let Some(v) = common.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = common.beta {
        cfg.beta = v;
    }
    if let Some(v) = common.dim {
        cfg.dim = v;
    }
    if let Some(v) = common.order {
        cfg.order = v;
    }
    if let Some(v) = common.tol {
        cfg.tol = Some(v);
    }
    if let Some(v) = &common.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = common.seed {
        cfg.seed = v;
    }
    if common.timings {
        cfg.timings = true;
    }
    Ok(cfg)
}

fn run() -> Result<bool, ConfigError> {
    let cli = Cli::parse();
    let (report, out) = match &cli.command {
        Command::HopfVerify(common) => {
            let cfg = build_config(common)?;
            (commands::cmd_hopf_verify(&cfg)?, cfg.out)
        }
        Command::Structure(common) => {
            let cfg = build_config(common)?;
            (commands::cmd_structure(&cfg)?, cfg.out)
        }
        Command::DualBasis(common) => {
            let cfg = build_config(common)?;
            (commands::cmd_dual_basis(&cfg)?, cfg.out)
        }
        Command::Tmatrix(common) => {
            let cfg = build_config(common)?;
            (commands::cmd_tmatrix(&cfg)?, cfg.out)
        }
        Command::Coherent { common, nmax } => {
            let mut cfg = build_config(common)?;
            if let Some(v) = nmax {
                cfg.nmax = *v;
            }
            (commands::cmd_coherent(&cfg)?, cfg.out)
        }
        Command::Bipartite { common, bipartite } => {
            let mut cfg = build_config(common)?;
            if let Some(v) = bipartite.zeta {
                cfg.zeta = v;
            }
            if let Some(v) = bipartite.zeta1 {
                cfg.zeta1 = v;
            }
            if let Some(v) = bipartite.zeta2 {
                cfg.zeta2 = v;
            }
            if let Some(v) = bipartite.delta {
                cfg.delta = v;
            }
            if let Some(v) = bipartite.q_min {
                cfg.q_min = Some(v);
            }
            if let Some(v) = bipartite.q_max {
                cfg.q_max = Some(v);
            }
            if let Some(v) = bipartite.q_steps {
                cfg.q_steps = v;
            }
            (commands::cmd_bipartite(&cfg)?, cfg.out)
        }
    };
    let json_path = out.map(|dir| dir.join(format!("{}.json", report.command)));
    report
        .emit(json_path.as_deref())
        .map_err(|e| ConfigError(format!("cannot write report: {e}")))?;
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
