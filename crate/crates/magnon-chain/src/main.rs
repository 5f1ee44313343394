//! Command-line front end: scenario runs, sweeps, spectrum scans, winding
//! evaluation, and drive validation. All logic lives in the library; this
//! binary only parses flags, applies overrides, and prints results.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use magnon_chain::drive::{bessel_j, validate_rwa, DriveSpec};
use magnon_chain::scenario::{
    preset, run_scenario, run_sweep, spectrum_csv, spectrum_scan, sweep_csv, sweep_family,
    RunSummary, ScenarioConfig, SweepRow, PRESET_NAMES,
};
use magnon_chain::topology::{winding_from_cd_average, winding_number};
use magnon_chain::{Error, Result};

#[derive(Parser)]
#[command(
    name = "magnon-chain",
    version,
    about = "Single-excitation dynamics, topology, and drive engineering on dimerized qubit chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario config file (TOML with a [scenario] section)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory override
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// RNG seed override
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Sampling interval override, µs
    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Evolution window override, µs
    #[arg(long, global = true)]
    t_max: Option<f64>,

    /// Finite-shot readout sampling (0 = exact populations)
    #[arg(long, global = true)]
    shots: Option<u64>,

    /// Turn on the sweet-spot decoherence preset
    #[arg(long, global = true)]
    noise: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its output bundle
    Run {
        /// Built-in scenario name (see --list)
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// List available presets and exit
        #[arg(long)]
        list: bool,
    },
    /// Fan one scenario out over a parameter axis
    Sweep {
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Built-in coupling-configuration family
        /// (winding-couplings, edge-couplings, defect-couplings)
        #[arg(long, conflicts_with_all = ["preset", "axis", "values"])]
        family: Option<String>,
        /// Config field to sweep (t_max_us, dt_us, seed, shots,
        /// initial_site, n_qubits, bonds)
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated values; bond patterns as dash strings (1-5-1)
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
    },
    /// In-gap spectrum structure of dimerized chains across sizes
    Spectrum {
        #[arg(long, default_value_t = 1.0)]
        j1: f64,
        #[arg(long, default_value_t = 5.0)]
        j2: f64,
        #[arg(long, default_value_t = 4)]
        n_min: usize,
        #[arg(long, default_value_t = 41)]
        n_max: usize,
    },
    /// Winding number by Brillouin-zone quadrature
    Winding {
        #[arg(long)]
        j1: f64,
        #[arg(long)]
        j2: f64,
        /// Also average the analytic chiral displacement over this window, µs
        #[arg(long)]
        t_avg: Option<f64>,
    },
    /// Check the Bessel coupling formula against full two-qubit dynamics
    RwaCheck {
        /// Static coupling, MHz
        #[arg(long, default_value_t = 17.5)]
        g: f64,
        /// Modulation index ε/μ of the driven qubit
        #[arg(long, default_value_t = 0.589)]
        alpha: f64,
        /// Modulation frequency, MHz (equals the pair detuning)
        #[arg(long, default_value_t = 350.0)]
        mu: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Run { preset: name, list } => {
            if *list {
                println!("available presets:");
                for p in PRESET_NAMES {
                    println!("  {p}");
                }
                return Ok(());
            }
            let config = load_config(&cli, name.as_deref())?;
            let summary = run_scenario(&config)?;
            print_summary(&summary);
            println!(
                "wrote bundle to {}",
                config
                    .out_dir
                    .as_deref()
                    .unwrap_or(&PathBuf::from("out").join(&config.name))
                    .display()
            );
            Ok(())
        }
        Command::Sweep {
            preset: name,
            family,
            axis,
            values,
        } => {
            let (base, axis, values) = if let Some(family) = family {
                let (base, axis, values) = sweep_family(family)?;
                (apply_overrides(base, &cli), axis, values)
            } else {
                let base = load_config(&cli, name.as_deref())?;
                let axis = axis.clone().ok_or_else(|| {
                    Error::Config("sweep needs --axis (or --family)".into())
                })?;
                (base, axis, values.clone())
            };
            let rows = run_sweep(&base, &axis, &values)?;
            print_sweep(&axis, &rows);
            let out = cli
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from("out").join(format!("{}-sweep", base.name)));
            std::fs::create_dir_all(&out)
                .map_err(|e| Error::Io {
                    path: out.display().to_string(),
                    source: e,
                })?;
            let path = out.join("sweep.csv");
            std::fs::write(&path, sweep_csv(&axis, &rows)).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Spectrum {
            j1,
            j2,
            n_min,
            n_max,
        } => {
            let sizes: Vec<usize> = (*n_min..=*n_max).collect();
            let rows = spectrum_scan(*j1, *j2, &sizes)?;
            println!("n_qubits  in_gap  gap_mhz");
            for row in &rows {
                println!(
                    "{:>8}  {:>6}  {:.6e}",
                    row.n_qubits, row.in_gap_count, row.gap_mhz
                );
            }
            if let Some(out) = &cli.out {
                std::fs::create_dir_all(out).map_err(|e| Error::Io {
                    path: out.display().to_string(),
                    source: e,
                })?;
                let path = out.join("spectrum.csv");
                std::fs::write(&path, spectrum_csv(&rows)).map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Winding { j1, j2, t_avg } => {
            let w = winding_number(*j1, *j2)?;
            println!(
                "winding number: {} (integral {:.9}, residual {:.2e})",
                w.nu, w.raw_integral, w.residual
            );
            if let Some(t) = t_avg {
                let estimate = winding_from_cd_average(*j1, *j2, *t)?;
                println!("winding estimate from the CD average over {t} us: {estimate:.6}");
            }
            Ok(())
        }
        Command::RwaCheck { g, alpha, mu } => {
            let spectator = DriveSpec::static_qubit(4.8);
            let modulated = DriveSpec::modulated(4.8 + mu / 1000.0, alpha * mu, *mu, 0.0)?;
            let predicted = g * bessel_j(1, *alpha)?;
            let t_max = cli.t_max.unwrap_or(0.9 / predicted.abs().max(1e-3));
            let dt = cli.dt.unwrap_or(0.01 / mu);
            let report = validate_rwa(*g, &spectator, &modulated, t_max, dt)?;
            println!(
                "predicted |J| = {:.4} MHz, extracted |J| = {:.4} MHz, relative error {:.3e}",
                report.predicted_mhz, report.extracted_mhz, report.relative_error
            );
            Ok(())
        }
    }
}

fn load_config(cli: &Cli, preset_name: Option<&str>) -> Result<ScenarioConfig> {
    let base = match (preset_name, &cli.config) {
        (Some(name), None) => preset(name)?,
        (None, Some(path)) => ScenarioConfig::from_path(path)?,
        (None, None) => {
            return Err(Error::Config(
                "nothing to run: pass --preset <name> or --config <file> (see run --list)".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    Ok(apply_overrides(base, cli))
}

fn apply_overrides(mut config: ScenarioConfig, cli: &Cli) -> ScenarioConfig {
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(dt) = cli.dt {
        config.dt_us = dt;
    }
    if let Some(t_max) = cli.t_max {
        config.t_max_us = t_max;
    }
    if let Some(shots) = cli.shots {
        config.shots = shots;
    }
    if cli.noise {
        config.noise.enabled = true;
    }
    if let Some(out) = &cli.out {
        config.out_dir = Some(out.clone());
    }
    config
}

fn print_summary(s: &RunSummary) {
    println!("scenario {} ({} qubits, site {} excited)", s.scenario, s.n_qubits, s.initial_site);
    println!(
        "  bonds [MHz]: {}",
        s.bonds_mhz
            .iter()
            .map(|b| format!("{b:.3}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!(
        "  window {} us, dt {} us, noise {}, shots {}, seed {}",
        s.t_max_us, s.dt_us, s.noise, s.shots, s.seed
    );
    println!("  time-averaged CD: {:.6}", s.cd_time_average);
    println!("  winding estimate (2x average): {:.6}", s.winding_estimate);
    if let Some(nu) = s.analytic_winding {
        println!("  analytic winding number: {nu}");
    }
    println!(
        "  in-gap spectrum [MHz]: [{}]",
        s.in_gap_mhz
            .iter()
            .map(|e| format!("{e:.6}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
}

fn print_sweep(axis: &str, rows: &[SweepRow]) {
    println!("{axis:>12}  cd_average  winding_est  nu  in_gap  gap_mhz");
    for r in rows {
        println!(
            "{:>12}  {:>10.5}  {:>11.5}  {}  {:>6}  {:.4e}",
            r.value,
            r.cd_time_average,
            r.winding_estimate,
            r.analytic_winding
                .map_or("-".to_string(), |w| w.to_string()),
            r.in_gap_count,
            r.in_gap_gap_mhz
        );
    }
}
