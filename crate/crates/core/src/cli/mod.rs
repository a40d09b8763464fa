//! Command-line front end: `validate`, `simulate`, `spectrum`, `tikhonov`, `audit`,
//! `inequalities`.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure,
//! 3 audit found a violated claim (outputs are still written).

pub mod config;
pub mod output;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{
    claim_audit, spectral_abscissa, tikhonov_sweep, TikhonovProfiles,
};
use crate::error::{Error, Result};
use crate::inequalities::{fuzz_lemmas, FuzzSummary};
use crate::solvers::{
    assemble_discrete_generator, assemble_layer_generator, assemble_reduced_generator,
    simulate_boundary_layer, simulate_coupled, simulate_reduced,
};
use crate::state::HeatField;
use crate::validator::{check_theorem_1_1, check_theorem_1_3, check_theorem_1_4, mu_star, ConditionReport, DecayVariant};
pub use config::{parse_config, parse_config_str, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VIOLATED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "waveheat", version, about = "Wave-heat boundary coupling: simulation and claim checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum System {
    Full,
    Reduced,
    Layer,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the hypothesis table of every stability and approximation result.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one system and write its energy records as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        system: System,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of the semi-discrete generator, sorted by descending real part.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        system: System,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full system against its reduced plus boundary-layer approximation over a list of epsilons.
    Tikhonov {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        eps_list: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure every quantitative claim on the configured run.
    Audit {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized checks of the auxiliary inequalities.
    Inequalities {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical { .. } | Error::Fit(_) => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

/// Parses `argv` (program name first) and runs the subcommand with the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            if informational {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_CONFIG;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, contents: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => out
            .write_all(contents.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write output: {e}"))),
    }
}

fn condition_table(r: &ConditionReport) -> String {
    let mut s = format!(
        "{} {}\n",
        r.theorem_id,
        if r.all_satisfied { "PASS" } else { "FAIL" }
    );
    for c in &r.conditions {
        let _ = writeln!(
            s,
            "  {:<4} {:<48} lhs={:<24.10} rhs={:.10}",
            if c.satisfied { "ok" } else { "FAIL" },
            c.label,
            c.lhs,
            c.rhs
        );
    }
    for n in &r.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    s
}

fn fuzz_report(s: &FuzzSummary) -> String {
    let mut r = format!("seed {}\n", s.seed);
    for l in &s.lemmas {
        let _ = writeln!(
            r,
            "{:<6} trials={} asserted_pass={} printed_pass={} counterexamples={} printed_counterexamples={}",
            l.lemma.to_string(),
            l.trials,
            l.passes,
            l.printed_passes,
            l.counterexamples.len(),
            l.printed_counterexamples.len()
        );
        if let Some(w) = &l.min_margin {
            let _ = writeln!(
                r,
                "  min margin {} at trial {} (lhs {}, rhs {})",
                output::format_sci(w.comparison.margin()),
                w.trial,
                output::format_sci(w.comparison.lhs),
                output::format_sci(w.comparison.rhs)
            );
        }
        for (kind, list) in [("asserted", &l.counterexamples), ("printed", &l.printed_counterexamples)] {
            for w in list {
                let _ = writeln!(
                    r,
                    "  {kind} counterexample trial {} mu {:?} lhs {} rhs {}",
                    w.trial,
                    w.mu,
                    output::format_sci(w.comparison.lhs),
                    output::format_sci(w.comparison.rhs)
                );
                for f in &w.functions {
                    let _ = writeln!(
                        r,
                        "    a0 {} linear {} sin {:?} cos {:?}",
                        output::format_sci(f.a0),
                        output::format_sci(f.linear),
                        f.sin,
                        f.cos
                    );
                }
            }
        }
    }
    r
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut warn = |cfg: &RunConfig, g: &crate::SpatialGrid| -> Result<crate::solvers::InitialState> {
        let ic = cfg.initial_state(g)?;
        for w in &ic.warnings {
            let _ = writeln!(err, "warning: {w}");
        }
        Ok(ic)
    };
    match cmd {
        Command::Validate { config } => {
            let cfg = parse_config(&config)?;
            let p = &cfg.params;
            let mut s = String::new();
            for r in [
                check_theorem_1_1(p),
                check_theorem_1_3(p, DecayVariant::I),
                check_theorem_1_3(p, DecayVariant::II),
                check_theorem_1_4(p),
            ] {
                s.push_str(&condition_table(&r));
            }
            if let Ok(m) = mu_star(p.a) {
                let f = |v: Option<f64>| v.map_or("none".to_string(), |x| format!("{x:.12}"));
                let _ = writeln!(s, "mu* closed form {}, root of q {}", f(m.closed_form), f(m.q_root));
            }
            emit(None, &s, out)?;
            Ok(EXIT_OK)
        }
        Command::Simulate { config, system, out: path } => {
            let cfg = parse_config(&config)?;
            let sim = cfg.simulation_config()?;
            let ic = warn(&cfg, &sim.grid)?;
            let records = match system {
                System::Full => simulate_coupled(&sim, &ic.state)?.records,
                System::Reduced => simulate_reduced(&sim, &ic.state.wave.u, &ic.state.wave.v)?.records,
                System::Layer => {
                    let p0 = HeatField {
                        p: cfg.ic.p0.sample(&sim.grid),
                    };
                    simulate_boundary_layer(&sim, &p0)?.records
                }
            };
            emit(path.as_deref(), &output::energy_csv(&records), out)?;
            Ok(EXIT_OK)
        }
        Command::Spectrum { config, system, out: path } => {
            let cfg = parse_config(&config)?;
            let g = cfg.spatial_grid()?;
            let gen = match system {
                System::Full => assemble_discrete_generator(&cfg.params, &g),
                System::Reduced => {
                    if cfg.params.c == 0.0 {
                        return Err(Error::Config("reduced system needs c != 0".into()));
                    }
                    assemble_reduced_generator(&cfg.params, &g)
                }
                System::Layer => assemble_layer_generator(cfg.params.c, &g),
            };
            let s = spectral_abscissa(&gen)?;
            emit(path.as_deref(), &output::spectrum_csv(&s.eigenvalues), out)?;
            let _ = writeln!(err, "spectral abscissa {}", output::format_sci(s.abscissa));
            Ok(EXIT_OK)
        }
        Command::Tikhonov { config, eps_list, out: dir } => {
            let cfg = parse_config(&config)?;
            let eps = match eps_list {
                Some(raw) => config::parse_eps_list(&raw)?,
                None => cfg.experiment.eps_list.clone(),
            };
            let sim = cfg.simulation_config()?;
            let profiles = TikhonovProfiles::default_on(&sim.grid)?;
            let sweep = tikhonov_sweep(&sim, &eps, &profiles)?;
            std::fs::create_dir_all(&dir)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
            for p in &sweep.points {
                write_file(&dir.join(format!("eps_{}.csv", p.epsilon)), &output::tikhonov_point_csv(p))?;
            }
            write_file(&dir.join("summary.csv"), &output::tikhonov_summary_csv(&sweep))?;
            let slopes = output::slopes_txt(&sweep);
            write_file(&dir.join("slopes.txt"), &slopes)?;
            emit(None, &slopes, out)?;
            Ok(EXIT_OK)
        }
        Command::Audit { config, out: path } => {
            let cfg = parse_config(&config)?;
            let sim = cfg.simulation_config()?;
            let ic = warn(&cfg, &sim.grid)?;
            let report = claim_audit(&sim, &ic.state, cfg.experiment.burn_in)?;
            let mut table = String::new();
            for e in &report.entries {
                let _ = writeln!(
                    table,
                    "{:<20} {:<12} measured={:<24} bound={:<24} {}",
                    e.claim_id,
                    e.verdict.to_string(),
                    output::format_sci(e.measured),
                    output::format_sci(e.bound),
                    e.notes
                );
            }
            emit(None, &table, out)?;
            if let Some(p) = path {
                write_file(&p, &output::audit_csv(&report))?;
            }
            Ok(if report.any_violated() { EXIT_VIOLATED } else { EXIT_OK })
        }
        Command::Inequalities { config, trials, seed, out: path } => {
            let cfg = parse_config(&config)?;
            let summary = fuzz_lemmas(
                trials.unwrap_or(cfg.experiment.trials),
                seed.unwrap_or(cfg.experiment.seed),
            )
            .map_err(|e| match e {
                Error::Input(m) => Error::Config(m),
                other => other,
            })?;
            emit(path.as_deref(), &fuzz_report(&summary), out)?;
            Ok(EXIT_OK)
        }
    }
}
