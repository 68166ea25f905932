use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use magalg::analyze::params_of;
use magalg::sweep::SweepGrid;
use magalg::verify::VerifyRequest;
use magalg::{analyze, gen, sweep, verify, CliError, ConfigFile, Tolerances};

#[derive(Parser, Debug)]
#[command(name = "magalg", version, about = "Worst-case force analysis of synchronized dipole arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one configuration and write a JSON report
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Use SI units: the report records force_prefactor = 3μ₀/4π
        #[arg(long)]
        si: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the bound chain on a grid of field points and write CSV
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// "x0:x1:nx,y0:y1:ny,z0:z1:nz"
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a canonical arrangement as a configuration file
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Field point to include (repeatable)
        #[arg(long, global = true, value_parser = parse_vec3, allow_hyphen_values = true)]
        at: Vec<[f64; 3]>,
        /// Write to this file instead of stdout
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Run the randomized theorem and identity checks
    Verify {
        #[arg(long)]
        trials: usize,
        #[command(flatten)]
        run: RunArgs,
        /// Check this configuration's field points instead of random ones
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Two magnets at (±sep/2, 0, 0)
    Pair {
        #[arg(long)]
        sep: f64,
    },
    /// Mirror-symmetric arrangement through the plane with the given normal
    Mirror {
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true, default_value = "0,0,1")]
        normal: [f64; 3],
        /// Mirror pair "ux,uy,uz,t": magnets at u ± t·n̂ (repeatable)
        #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
        pair: Vec<[f64; 4]>,
        /// In-plane magnet "x,y,z", projected onto the plane (repeatable)
        #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
        point: Vec<[f64; 3]>,
    },
    /// Cubic lattice spacing·[-k, k]³
    Lattice {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        spacing: f64,
        #[arg(long)]
        exclude_origin: bool,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct RunArgs {
    /// Relative tolerance for the bound chain and branch band
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Relative planarity tolerance for invariant planes
    #[arg(long, default_value_t = magalg_core::DEFAULT_PLANARITY_TOL)]
    planarity_tol: f64,
    /// Sphere lattice size for the brute-force maximum
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    /// Ascent steps per refined lattice point
    #[arg(long, default_value_t = 100)]
    refine: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RunArgs {
    fn tols(&self) -> Tolerances {
        Tolerances {
            rel: self.tol,
            planarity: self.planarity_tol,
        }
    }
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("{t:?} is not a number")))
        .collect::<Result<_, _>>()?;
    let arr: [f64; N] = v.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err("coordinates must be finite".into());
    }
    Ok(arr)
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    parse_floats(s)
}

fn parse_vec4(s: &str) -> Result<[f64; 4], String> {
    parse_floats(s)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, contents),
        None => {
            println!("{contents}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { config, run, si, out } => {
            let cfg = ConfigFile::load(&config)?;
            let report = analyze::run(&cfg, params_of(run.samples, run.refine, run.seed), run.tols(), si)?;
            write_file(&out, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
            println!("{}: lambda_bar = {}", report.branch, report.lambda_bar.value);
        }
        Command::Sweep { config, grid, run, out } => {
            let cfg = ConfigFile::load(&config)?;
            let grid: SweepGrid = grid.parse()?;
            let rows = sweep::run(&cfg, &grid, params_of(run.samples, run.refine, run.seed), run.tols())?;
            for r in rows.iter().filter(|r| r.values.is_none()) {
                eprintln!("warning: grid point ({}, {}, {}) is on a magnet; row marked singular", r.point.x, r.point.y, r.point.z);
            }
            write_file(&out, &sweep::to_csv(&rows))?;
        }
        Command::Gen { kind, at, out } => {
            let cfg = match kind {
                GenKind::Pair { sep } => gen::pair(sep, &at)?,
                GenKind::Mirror { normal, pair, point } => gen::mirror(normal, &pair, &point, &at)?,
                GenKind::Lattice { k, spacing, exclude_origin } => gen::lattice(k, spacing, exclude_origin, &at)?,
            };
            emit(out.as_deref(), &cfg.to_json())?;
        }
        Command::Verify { trials, run, config, out } => {
            let config = config.as_deref().map(ConfigFile::load).transpose()?;
            let req = VerifyRequest {
                trials,
                seed: run.seed,
                config,
                params: params_of(run.samples, run.refine, run.seed),
                tols: run.tols(),
            };
            let report = verify::run(&req)?;
            emit(out.as_deref(), &serde_json::to_string_pretty(&report).expect("report serializes"))?;
            if !report.passed() {
                let mut msg = format!("{} trial(s) violated a check", report.violations.len());
                for v in &report.violations {
                    msg.push_str(&format!("\ntrial {} ({}):\n{}", v.trial, v.checks.join(", "), v.config.to_json()));
                }
                return Err(CliError::Violation(msg));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
