//! `ddsim`: simulate deterministic and randomized dynamical decoupling of
//! interacting spin-1/2 chains.
//!
//! Exit codes: 0 success, 1 numerical failure (or verification above
//! tolerance), 2 configuration/usage error.

mod config;
mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ddsim_core::error::{DdError, Result};
use ddsim_core::experiment::{self, CompareConfig, ScalingPoint};
use ddsim_core::groups::{self, ControlPath, DecouplingGroup};
use ddsim_core::hamiltonian::SystemModel;
use ddsim_core::presets;
use ddsim_core::report;

#[derive(Parser)]
#[command(
    name = "ddsim",
    about = "Dynamical decoupling simulator for interacting spin-1/2 networks",
    after_help = config::CONFIG_REFERENCE,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol from a config file and write its fidelity trace CSV.
    Run(RunArgs),
    /// Run a multi-protocol preset comparison into one CSV (paired seeds).
    Compare(CompareArgs),
    /// Check group closure and averaging residuals for group/path files.
    Verify(VerifyArgs),
    /// Fit the infidelity scaling exponent over a dt grid.
    Scaling(ScalingArgs),
    /// Rank random-control realizations and report the best seed.
    Derandomize(DerandomizeArgs),
    /// Render a trace CSV to SVG or a gnuplot script.
    Plot(PlotArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file (flat key = value text).
    #[arg(long)]
    config: PathBuf,
    /// Override config keys, e.g. --set total_time=10.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    /// Preset name: fig1 | fig1-smoke | fig1-intra | fig1-smoke-intra | fig2 | fig3 | fig3-inset.
    #[arg(long)]
    preset: String,
    /// Override run-level keys on every run of the preset
    /// (total_time, n_realizations, master_seed only).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Also write a gnuplot script regenerated from the CSV.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Group file: one Pauli string per line.
    #[arg(long)]
    group: PathBuf,
    /// Model config file; only the system stanza is used.
    #[arg(long)]
    model: PathBuf,
    /// Optional path file (defaults to the group's listing order).
    #[arg(long)]
    path: Option<PathBuf>,
    /// Residual tolerance for the first-order check.
    #[arg(long, default_value_t = groups::USER_PATH_TOL)]
    tol: f64,
}

#[derive(Args)]
struct ScalingArgs {
    /// Scenario: pdd | sdd | nrd (N = 4 isotropic nearest-neighbor chain).
    #[arg(long)]
    preset: String,
    /// Comma-separated dt grid overriding the scenario default.
    #[arg(long, value_name = "A,B,C,...")]
    dt_grid: Option<String>,
    /// Probe time overriding the scenario default.
    #[arg(long)]
    t_probe: Option<f64>,
}

#[derive(Args)]
struct DerandomizeArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Number of candidate seeds to rank.
    #[arg(long)]
    candidates: usize,
    /// Objective time J*T at which F_e is maximized.
    #[arg(long)]
    t_objective: f64,
    /// Ranking CSV output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Input trace CSV.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; .svg renders directly, .gp emits a gnuplot script.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                DdError::NumericalFailure(_) | DdError::Io(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// DDSIM_THREADS caps the rayon pool (default: all cores).
fn init_threads() {
    if let Ok(val) = std::env::var("DDSIM_THREADS") {
        if let Ok(n) = val.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Scaling(args) => cmd_scaling(args),
        Command::Derandomize(args) => cmd_derandomize(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| DdError::Configuration(format!("cannot read {}: {e}", path.display())))
}

fn load_run_config(path: &Path, sets: &[String]) -> Result<ddsim_core::RunConfig> {
    let text = read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    config::parse_config(&text, base, sets)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

fn echo_config(cfg: &ddsim_core::RunConfig) {
    println!("# resolved configuration [{}]", cfg.digest());
    for line in cfg.describe().lines() {
        println!("{line}");
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let cfg = load_run_config(&args.config, &args.sets)?;
    echo_config(&cfg);
    let trace = experiment::run_protocol(&cfg)?;
    if trace.truncated {
        eprintln!(
            "warning: deterministic expansion shorter than the run; sequence truncated mid-cycle"
        );
    }
    write_file(&args.out, &report::render_csv(&[trace]))?;
    println!("# wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode> {
    let mut cc: CompareConfig = presets::compare_preset(&args.preset)?;
    apply_compare_overrides(&mut cc, &args.sets)?;
    for run in &cc.runs {
        echo_config(run);
    }
    let traces = cc.run()?;
    write_file(&args.out, &report::render_csv(&traces))?;
    println!("# wrote {}", args.out.display());
    if let Some(plot_path) = &args.plot {
        // Regenerate strictly from the CSV: the CSV is the source of truth.
        let parsed = report::parse_csv(&read_to_string(&args.out)?)?;
        write_file(plot_path, &plot::gnuplot_script(&parsed))?;
        println!("# wrote {}", plot_path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn apply_compare_overrides(cc: &mut CompareConfig, sets: &[String]) -> Result<()> {
    for s in sets {
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| DdError::Configuration(format!("--set: expected key=value, got {s:?}")))?;
        for run in &mut cc.runs {
            match key.trim() {
                "total_time" => {
                    run.total_time = value.trim().parse().map_err(|_| {
                        DdError::Configuration(format!("--set total_time: bad value {value:?}"))
                    })?
                }
                "n_realizations" => {
                    let n: usize = value.trim().parse().map_err(|_| {
                        DdError::Configuration(format!("--set n_realizations: bad value {value:?}"))
                    })?;
                    run.n_realizations = n;
                }
                "master_seed" => {
                    run.master_seed = value.trim().parse().map_err(|_| {
                        DdError::Configuration(format!("--set master_seed: bad value {value:?}"))
                    })?
                }
                other => {
                    return Err(DdError::Configuration(format!(
                        "compare --set supports total_time, n_realizations, master_seed; got {other:?}"
                    )))
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let model = config::parse_system(&read_to_string(&args.model)?, args.model.parent().unwrap_or(Path::new(".")))?;
    let sys = SystemModel::prepare(&model)?;
    let group_text = read_to_string(&args.group)?;
    let group = DecouplingGroup::from_text(
        args.group.file_name().and_then(|s| s.to_str()).unwrap_or("group"),
        &group_text,
        model.n_qubits,
    )?;

    println!("group: {} ({} elements, {} qubits)", group.label(), group.len(), group.n_qubits());
    match group.check_closure() {
        Ok(()) => println!("closure: ok"),
        Err(e) => {
            println!("closure: FAILED ({e})");
            return Ok(ExitCode::from(1));
        }
    }

    let path = match &args.path {
        Some(p) => ControlPath::from_text(&read_to_string(p)?, &group)?,
        None => ControlPath::listing(&group),
    };
    let frames = path.frames(&group);

    // Check the full model: static part plus unit-amplitude driven bonds.
    let mut h = sys.static_matrix.clone();
    if let Some(drive) = &sys.drive {
        h += ddsim_core::hamiltonian::matrix_from_terms(sys.n_qubits, &drive.bond_terms)?;
    }
    let r1 = groups::verify_first_order(&frames, &h)?;
    let sym = groups::symmetrize_path(&group, &path);
    let r2 = groups::verify_second_order(&frames, &h, 1.0)?;
    let r2_sym = groups::verify_second_order(&sym, &h, 1.0)?;
    println!("first_order_residual = {r1:.17e}");
    println!("second_order_residual = {r2:.17e}");
    println!("second_order_residual_symmetrized = {r2_sym:.17e}");
    if r1 > args.tol {
        eprintln!("verification failed: first-order residual exceeds {:.1e}", args.tol);
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_scaling(args: ScalingArgs) -> Result<ExitCode> {
    let mut scenario = presets::scaling_scenario(&args.preset)?;
    if let Some(grid) = &args.dt_grid {
        scenario.dt_grid = grid
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| DdError::Configuration(format!("bad dt value {tok:?}")))
            })
            .collect::<Result<_>>()?;
    }
    if let Some(tp) = args.t_probe {
        scenario.t_probe = tp;
    }
    println!(
        "# scaling scenario {} (expected slope {}), t_probe = {}",
        scenario.name, scenario.expected_slope, scenario.t_probe
    );
    let mut points = Vec::new();
    println!("dt,infidelity,stderr");
    for &dt in &scenario.dt_grid {
        let cfg = presets::scaling_run(&scenario, dt)?;
        let trace = experiment::run_protocol(&cfg)?;
        let infid = experiment::infidelity_at(&trace, scenario.t_probe)?;
        let se = trace.stderr_at(scenario.t_probe)?;
        println!("{dt},{infid:.17e},{se:.17e}");
        points.push(ScalingPoint { dt, infidelity: infid });
    }
    let fit = experiment::scaling_fit(&points)?;
    for dt in &fit.excluded {
        println!("# excluded dt = {dt}: infidelity at the numerical floor");
    }
    let (lo, hi) = fit.ci95();
    println!("# slope = {:.6} (95% CI [{:.6}, {:.6}], {} points)", fit.slope, lo, hi, fit.n_used);
    Ok(ExitCode::SUCCESS)
}

fn cmd_derandomize(args: DerandomizeArgs) -> Result<ExitCode> {
    let cfg = load_run_config(&args.config, &args.sets)?;
    echo_config(&cfg);
    let outcome = experiment::derandomize(&cfg, args.candidates, args.t_objective)?;
    let mut csv = String::from("rank,seed,fe_at_objective\n");
    for (rank, (seed, fe)) in outcome.ranking.iter().enumerate() {
        csv.push_str(&format!("{},{},{:.16e}\n", rank + 1, seed, fe));
    }
    write_file(&args.out, &csv)?;
    println!("# wrote {}", args.out.display());
    println!(
        "best_seed = {} (F_e = {:.12} at J T = {})",
        outcome.best_seed,
        outcome.ranking[0].1,
        args.t_objective
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_plot(args: PlotArgs) -> Result<ExitCode> {
    let traces = report::parse_csv(&read_to_string(&args.input)?)?;
    let ext = args.out.extension().and_then(|s| s.to_str()).unwrap_or("");
    let rendered = match ext {
        "svg" => plot::svg_plot(&traces),
        "gp" | "gnuplot" => plot::gnuplot_script(&traces),
        other => {
            return Err(DdError::Configuration(format!(
                "unsupported plot extension {other:?} (use .svg or .gp)"
            )))
        }
    };
    write_file(&args.out, &rendered)?;
    println!("# wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}
