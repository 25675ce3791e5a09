//! Command-line front end.
//!
//! Exit codes: 0 success, 1 computation failure, 2 usage error (unknown
//! preset, malformed config, bad flags), 3 output not writable.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::eplocate::{analytic_ep_two_level, classify, Classification, EpError, EpReport};
use crate::io::{ep_report_toml, manifest_toml, plot_script, write_csv, ModelConfig};
use crate::model::{preset, SweepAxis, PRESET_IDS};
use crate::scalar::Tolerances;
use crate::sweep::{run_sweep, SweepConfig, SweepResult};

#[derive(Debug, Parser)]
#[command(name = "ep-spectra", version, about = "Spectra and exceptional points of small non-Hermitian Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep a built-in preset and write CSV, EP report, plot script and manifest.
    Reproduce {
        /// Preset id (see `presets`).
        id: Option<String>,
        #[arg(long, conflicts_with = "id")]
        preset: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sweep a model described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Locate and classify exceptional points.
    LocateEp {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// List presets, or print one as a config document.
    Presets {
        #[arg(long, value_name = "ID")]
        dump: Option<String>,
    },
    /// Print version and numerical settings.
    Info,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub max: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, overrides_with = "no_refine")]
    pub refine: bool,
    #[arg(long = "no-refine")]
    pub no_refine: bool,
    /// Accepted for scripting; every computation is deterministic.
    #[arg(long)]
    pub seedless: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Output(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Output(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Output(m) | Failure::Compute(m) => m,
        }
    }
}

/// Parses `std::env::args` and runs the selected command.
pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Reproduce { id, preset: flag, grid } => {
            let id = id.or(flag).ok_or_else(|| Failure::Usage("missing preset id".into()))?;
            let cfg = preset_config(&id)?;
            sweep_and_write(&id, apply_grid(cfg, &grid)?, &grid.out)
        }
        Command::Sweep { config, grid } => {
            let (name, cfg) = load_config(&config)?;
            sweep_and_write(&name, apply_grid(cfg, &grid)?, &grid.out)
        }
        Command::LocateEp { preset: id, config, grid } => {
            let (name, cfg) = match (id, config) {
                (Some(id), _) => {
                    let cfg = preset_config(&id)?;
                    (id, cfg)
                }
                (None, Some(path)) => load_config(&path)?,
                (None, None) => return Err(Failure::Usage("give --preset or --config".into())),
            };
            locate(&name, apply_grid(cfg, &grid)?, &grid.out)
        }
        Command::Presets { dump: Some(id) } => {
            let p = preset::<f64>(&id).map_err(|_| unknown_preset(&id))?;
            print!("{}", ModelConfig::from_preset(&p).to_toml());
            Ok(())
        }
        Command::Presets { dump: None } => {
            for id in PRESET_IDS {
                let p = preset::<f64>(id).expect("listed preset exists");
                println!(
                    "{id:<18} n={} {:<9} {} in [{}, {}]",
                    p.spec.n(),
                    p.spec.topology().name(),
                    p.axis.name,
                    p.axis.min,
                    p.axis.max
                );
            }
            Ok(())
        }
        Command::Info => {
            let tol = Tolerances::<f64>::default();
            println!("ep-spectra {}", env!("CARGO_PKG_VERSION"));
            println!("scalar: f64");
            println!("root tolerance: {:e}", tol.root);
            println!("coalescence tolerance: {:e}", tol.ep);
            println!("max root iterations: {}", tol.max_iterations);
            println!("presets: {}", PRESET_IDS.len());
            println!("worker threads: {}", rayon::current_num_threads());
            Ok(())
        }
    }
}

fn unknown_preset(id: &str) -> Failure {
    Failure::Usage(format!("unknown preset {id:?}; valid ids: {}", PRESET_IDS.join(", ")))
}

fn preset_config(id: &str) -> Result<SweepConfig<f64>, Failure> {
    preset::<f64>(id).map(|p| SweepConfig::from_preset(&p)).map_err(|_| unknown_preset(id))
}

fn load_config(path: &Path) -> Result<(String, SweepConfig<f64>), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg = ModelConfig::parse(&text)
        .and_then(|c| c.sweep_config())
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into());
    Ok((name, cfg))
}

fn apply_grid(mut cfg: SweepConfig<f64>, grid: &GridArgs) -> Result<SweepConfig<f64>, Failure> {
    let axis = &cfg.axis;
    cfg.axis = SweepAxis::new(
        axis.name.clone(),
        grid.min.unwrap_or(axis.min),
        grid.max.unwrap_or(axis.max),
        grid.points.unwrap_or(axis.points),
    );
    if cfg.axis.min.partial_cmp(&cfg.axis.max) != Some(std::cmp::Ordering::Less) {
        return Err(Failure::Usage(format!("min ({}) must be below max ({})", cfg.axis.min, cfg.axis.max)));
    }
    if cfg.axis.points < 3 {
        return Err(Failure::Usage(format!("need at least 3 points, got {}", cfg.axis.points)));
    }
    if grid.no_refine {
        cfg.refine.enable = false;
    } else if grid.refine {
        cfg.refine.enable = true;
    }
    Ok(cfg)
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, Failure> {
    let path = dir.join(name);
    let out = |e: std::io::Error| Failure::Output(format!("cannot write {}: {e}", path.display()));
    fs::create_dir_all(dir).map_err(out)?;
    let mut file = fs::File::create(&path).map_err(out)?;
    file.write_all(bytes).map_err(out)?;
    Ok(path)
}

fn classify_all(cfg: &SweepConfig<f64>, report: &EpReport<f64>) -> Result<Vec<Classification<f64>>, Failure> {
    report
        .locations
        .iter()
        .map(|l| classify(&cfg.spec, l.a_star))
        .collect::<Result<_, EpError>>()
        .map_err(|e| Failure::Compute(e.to_string()))
}

fn print_report(name: &str, axis: &SweepAxis<f64>, report: &EpReport<f64>, classes: &[Classification<f64>]) {
    println!("{name}: exceptional points for {} in [{}, {}]", axis.name, axis.min, axis.max);
    if report.whole_line_degenerate {
        println!("coalescence condition holds on the whole line");
    }
    if report.locations.is_empty() {
        println!("none found in range");
    } else {
        println!("{:>22}  {:<18} {:>5}  {:>11}  {:>11}  verdict", axis.name, "kind", "pair", "min_gap", "r");
        for (l, c) in report.locations.iter().zip(classes) {
            println!(
                "{:>22.15}  {:<18} {:>2},{:<2}  {:>11.3e}  {:>11.3e}  {}{}",
                l.a_star,
                l.kind.name(),
                l.pair.0 + 1,
                l.pair.1 + 1,
                l.min_gap,
                l.r_at,
                c.verdict.name(),
                if l.non_unimodal { " (non-unimodal bracket)" } else { "" }
            );
        }
    }
    for (lo, hi) in &report.real_spectrum_windows {
        println!("real spectrum for {} in ({lo}, {hi})", axis.name);
    }
}

fn sweep(cfg: &SweepConfig<f64>) -> Result<SweepResult<f64>, Failure> {
    run_sweep(cfg).map_err(|e| Failure::Compute(e.to_string()))
}

fn sweep_and_write(name: &str, cfg: SweepConfig<f64>, out: &Path) -> Result<(), Failure> {
    let result = sweep(&cfg)?;
    let classes = classify_all(&cfg, &result.ep_report)?;

    let mut csv = Vec::new();
    write_csv(&mut csv, &result).map_err(|e| Failure::Output(e.to_string()))?;
    let csv_name = format!("{name}.csv");
    write_file(out, &csv_name, &csv)?;
    let report = ep_report_toml(name, &cfg.axis, &result.ep_report, &classes);
    write_file(out, &format!("{name}.ep.txt"), report.as_bytes())?;
    let plot = plot_script(name, &csv_name, &cfg.axis.name, cfg.spec.n(), &cfg.columns);
    write_file(out, &format!("{name}.plot"), plot.as_bytes())?;
    let manifest = manifest_toml(name, &result, &classes);
    write_file(out, &format!("{name}.manifest.toml"), manifest.as_bytes())?;

    println!(
        "{name}: {} rows ({} refined, {} failed), n = {}",
        result.rows.len(),
        result.extra_points,
        result.failed_rows(),
        cfg.spec.n()
    );
    if let Some(at) = result.max_bifurcation_at {
        println!("maximal {} splitting at {} = {at}", cfg.bifurcation.name(), cfg.axis.name);
    }
    print_report(name, &cfg.axis, &result.ep_report, &classes);
    println!("wrote {}/{name}.{{csv,ep.txt,plot,manifest.toml}}", out.display());
    Ok(())
}

fn locate(name: &str, cfg: SweepConfig<f64>, out: &Path) -> Result<(), Failure> {
    let report = if cfg.spec.n() == 2 {
        let mut r = analytic_ep_two_level(&cfg.spec).map_err(|e| Failure::Compute(e.to_string()))?;
        r.restrict(cfg.axis.min, cfg.axis.max);
        r
    } else {
        sweep(&cfg)?.ep_report
    };
    let classes = classify_all(&cfg, &report)?;
    print_report(name, &cfg.axis, &report, &classes);
    let text = ep_report_toml(name, &cfg.axis, &report, &classes);
    write_file(out, &format!("{name}.ep.txt"), text.as_bytes())?;
    Ok(())
}
