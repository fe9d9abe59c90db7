//! `dris`: command-line front end for D-band 1-bit RIS synthesis.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.
//! `DRIS_THREADS` caps the worker thread count.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use dband_ris::farfield::{self, ElementModel, PatternGrid};
use dband_ris::grating::{self, GratingConfig};
use dband_ris::io::{self, sig9};
use dband_ris::scenario::{self, ModeRecord, Scenario, ScenarioKind, ValidationError};
use dband_ris::switchmodel::{SwitchCircuit, SwitchState, DEFAULT_Z0};
use dband_ris::unitcell::UnitCellStateTable;
use dband_ris::units;
use dband_ris::Frequency;

#[derive(Parser)]
#[command(
    name = "dris",
    version,
    about = "1-bit RIS synthesis and far-field prediction at D-band"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario end to end and write pattern, state map and summary files.
    Run {
        /// Scenario file (TOML).
        scenario: PathBuf,
        /// Output directory.
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
    },
    /// Quantize a scenario to a 1-bit state map (CSV).
    Synthesize {
        /// Scenario file (TOML).
        scenario: PathBuf,
        /// Write to this file instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Far-field pattern of a scenario (CSV).
    Pattern {
        /// Scenario file (TOML).
        scenario: PathBuf,
        /// Evaluate this state map CSV instead of re-synthesizing.
        #[arg(long)]
        statemap: Option<PathBuf>,
        /// Write to this file instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Gain summary of a scenario (JSON).
    Gain {
        /// Scenario file (TOML).
        scenario: PathBuf,
    },
    /// Floquet-mode beam splitting.
    Grating {
        #[command(subcommand)]
        command: GratingCommand,
    },
    /// Unit-cell state table analysis.
    Unitcell {
        #[command(subcommand)]
        command: UnitcellCommand,
    },
    /// Switch equivalent-circuit figures of merit.
    Switch {
        #[command(subcommand)]
        command: SwitchCommand,
    },
    /// Free-space path loss (JSON).
    Fspl {
        /// Frequency (e.g. 140GHz; bare numbers are GHz).
        #[arg(long, value_parser = units::frequency_hz)]
        freq: f64,
        /// Distance (e.g. 1m; bare numbers are mm).
        #[arg(long, value_parser = units::length_m)]
        dist: f64,
    },
}

#[derive(Args)]
struct GratingArgs {
    /// Grating period (e.g. 4mm; bare numbers are mm).
    #[arg(long, value_parser = units::length_m)]
    period: f64,
    /// Frequency (e.g. 150GHz; bare numbers are GHz).
    #[arg(long, value_parser = units::frequency_hz)]
    freq: f64,
    /// Incidence angle (bare numbers are degrees).
    #[arg(long, value_parser = units::angle_deg, default_value = "0", allow_hyphen_values = true)]
    incidence: f64,
}

#[derive(Subcommand)]
enum GratingCommand {
    /// List Floquet orders and whether they propagate (JSON).
    Modes {
        #[command(flatten)]
        grating: GratingArgs,
    },
    /// Scattered pattern of a finite grating aperture (CSV).
    Pattern {
        #[command(flatten)]
        grating: GratingArgs,
        /// Aperture width (bare numbers are mm).
        #[arg(long, value_parser = units::length_m)]
        aperture: f64,
        /// Angular grid step (bare numbers are degrees).
        #[arg(long, value_parser = units::angle_deg, default_value = "0.1")]
        step: f64,
        /// Element factor exponent q_e.
        #[arg(long, default_value_t = farfield::DEFAULT_Q_E)]
        q_e: f64,
    },
}

#[derive(Subcommand)]
enum UnitcellCommand {
    /// Per-state loss, phase and bandwidth at one frequency (JSON).
    Metrics {
        /// State table CSV.
        table: PathBuf,
        /// Evaluation and bandwidth centre frequency (bare numbers are GHz).
        #[arg(long, value_parser = units::frequency_hz)]
        freq: f64,
        /// Insertion-loss ceiling defining the bandwidth, in dB.
        #[arg(long, default_value_t = 1.5)]
        threshold_db: f64,
    },
}

#[derive(Subcommand)]
enum SwitchCommand {
    /// Cutoff frequency, impedances, insertion loss and isolation (JSON).
    Fom {
        /// On-state resistance (bare numbers are ohms).
        #[arg(long, value_parser = units::ohms)]
        ron: Option<f64>,
        /// On-state capacitance (e.g. 18.5f; bare numbers are farads).
        #[arg(long, value_parser = units::farads)]
        con: Option<f64>,
        /// Off-state resistance (bare numbers are ohms).
        #[arg(long, value_parser = units::ohms)]
        roff: Option<f64>,
        /// Off-state capacitance (e.g. 19f; bare numbers are farads).
        #[arg(long, value_parser = units::farads)]
        coff: Option<f64>,
        /// Evaluation frequency (bare numbers are GHz).
        #[arg(long, value_parser = units::frequency_hz, default_value = "140GHz")]
        freq: f64,
        /// Port reference impedance (bare numbers are ohms).
        #[arg(long, value_parser = units::ohms, default_value_t = DEFAULT_Z0)]
        z0: f64,
    },
}

enum Failure {
    Validation(String),
    Runtime(String),
}

impl From<ValidationError> for Failure {
    fn from(e: ValidationError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<dband_ris::Error> for Failure {
    fn from(e: dband_ris::Error) -> Self {
        use dband_ris::Error as E;
        match e {
            E::Domain(_)
            | E::Table(_)
            | E::KindMismatch { .. }
            | E::OutOfRange { .. }
            | E::UnknownState(_) => Failure::Validation(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("DRIS_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("DRIS_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn emit(out: Option<&Path>, body: &str) -> CliResult {
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn frequency(hz: f64) -> CliResult<Frequency> {
    Ok(Frequency::new(hz)?)
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Run { scenario, out } => {
            let s = Scenario::load(&scenario)?;
            let (files, eval) = scenario::run(&s, &out)?;
            eprintln!("wrote {}", files.pattern.display());
            if let Some(p) = &files.statemap {
                eprintln!("wrote {}", p.display());
            }
            eprintln!("wrote {}", files.summary.display());
            emit(None, &io::to_json(&eval.summary))
        }
        Command::Synthesize { scenario, out } => {
            let s = Scenario::load(&scenario)?;
            let map = s
                .synthesize()?
                .ok_or_else(|| Failure::Validation("grating scenarios have no state map".into()))?;
            emit(out.as_deref(), &io::statemap_csv(&map))
        }
        Command::Pattern {
            scenario,
            statemap,
            out,
        } => {
            let s = Scenario::load(&scenario)?;
            let map = match statemap {
                None => s.synthesize()?,
                Some(path) => {
                    let layout = match &s.kind {
                        ScenarioKind::ReflectSteer { layout, .. }
                        | ScenarioKind::TransmitCollimate { layout, .. } => layout,
                        ScenarioKind::Grating { .. } => {
                            return Err(Failure::Validation(
                                "--statemap does not apply to grating scenarios".into(),
                            ))
                        }
                    };
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
                    Some(io::read_statemap_csv(&text, layout)?)
                }
            };
            let eval = s.evaluate(map.as_ref())?;
            emit(out.as_deref(), &io::pattern_csv(&eval.pattern, &s.hash))
        }
        Command::Gain { scenario } => {
            let s = Scenario::load(&scenario)?;
            let map = s.synthesize()?;
            let eval = s.evaluate(map.as_ref())?;
            emit(None, &io::to_json(&eval.summary))
        }
        Command::Grating { command } => grating_cmd(command),
        Command::Unitcell {
            command:
                UnitcellCommand::Metrics {
                    table,
                    freq,
                    threshold_db,
                },
        } => unitcell_metrics(&table, freq, threshold_db),
        Command::Switch {
            command:
                SwitchCommand::Fom {
                    ron,
                    con,
                    roff,
                    coff,
                    freq,
                    z0,
                },
        } => {
            let d = SwitchCircuit::rf_soi_45nm();
            let circuit = SwitchCircuit::new(
                ron.unwrap_or(d.r_on()),
                con.unwrap_or(d.c_on()),
                roff.unwrap_or(d.r_off()),
                coff.unwrap_or(d.c_off()),
            )?;
            let f = frequency(freq)?;
            let losses = circuit.insertion_loss_isolation(f, z0)?;
            let z_on = circuit.impedance(SwitchState::On, f);
            let z_off = circuit.impedance(SwitchState::Off, f);
            let out = SwitchReport {
                cutoff_thz: sig9(circuit.cutoff_frequency().hz() / 1e12),
                freq_ghz: sig9(f.ghz()),
                z0_ohm: sig9(z0),
                z_on_mag_ohm: sig9(z_on.norm()),
                z_on_phase_deg: sig9(z_on.arg().to_degrees()),
                z_off_mag_ohm: sig9(z_off.norm()),
                z_off_phase_deg: sig9(z_off.arg().to_degrees()),
                insertion_loss_db: sig9(losses.insertion_loss_db),
                isolation_db: sig9(losses.isolation_db),
            };
            emit(None, &io::to_json(&out))
        }
        Command::Fspl { freq, dist } => {
            let loss = farfield::fspl(frequency(freq)?, dist)?;
            emit(
                None,
                &io::to_json(&FsplReport {
                    freq_ghz: sig9(freq / 1e9),
                    distance_m: sig9(dist),
                    fspl_db: sig9(loss),
                }),
            )
        }
    }
}

fn grating_config(g: &GratingArgs) -> CliResult<GratingConfig> {
    Ok(GratingConfig::with_period(
        g.period,
        frequency(g.freq)?,
        g.incidence.to_radians(),
    )?)
}

fn grating_cmd(command: GratingCommand) -> CliResult {
    match command {
        GratingCommand::Modes { grating: g } => {
            let cfg = grating_config(&g)?;
            let modes: Vec<ModeRecord> = grating::floquet_modes(&cfg)
                .iter()
                .map(ModeRecord::from)
                .collect();
            emit(None, &io::to_json(&modes))
        }
        GratingCommand::Pattern {
            grating: g,
            aperture,
            step,
            q_e,
        } => {
            let cfg = grating_config(&g)?;
            let grid = PatternGrid::cut_deg(0.0, step)?;
            let pattern =
                grating::splitter_pattern(&cfg, aperture, &ElementModel::new(q_e)?, &grid)?;
            let hash = io::scenario_hash(
                format!(
                    "grating period={} freq={} incidence={} aperture={} step={step} q_e={q_e}",
                    g.period, g.freq, g.incidence, aperture
                )
                .as_bytes(),
            );
            emit(None, &io::pattern_csv(&pattern, &hash))
        }
    }
}

#[derive(Serialize)]
struct SwitchReport {
    cutoff_thz: f64,
    freq_ghz: f64,
    z0_ohm: f64,
    z_on_mag_ohm: f64,
    z_on_phase_deg: f64,
    z_off_mag_ohm: f64,
    z_off_phase_deg: f64,
    insertion_loss_db: f64,
    isolation_db: f64,
}

#[derive(Serialize)]
struct FsplReport {
    freq_ghz: f64,
    distance_m: f64,
    fspl_db: f64,
}

#[derive(Serialize)]
struct StateReport {
    state: String,
    insertion_loss_db: f64,
    phase_deg: f64,
    bandwidth_pct: f64,
}

#[derive(Serialize)]
struct UnitcellReport {
    kind: &'static str,
    active: bool,
    freq_ghz: f64,
    threshold_db: f64,
    states: Vec<StateReport>,
    /// Phase of each later state relative to the first.
    phase_difference_deg: Vec<f64>,
}

fn unitcell_metrics(path: &Path, freq: f64, threshold_db: f64) -> CliResult {
    let table = UnitCellStateTable::load(path)?;
    let f = frequency(freq)?;
    let names: Vec<String> = table.states().map(str::to_string).collect();
    let mut states = Vec::with_capacity(names.len());
    for name in &names {
        let c = table.coefficient_at(name, f)?;
        states.push(StateReport {
            state: name.clone(),
            insertion_loss_db: sig9(table.insertion_loss_db(name, f)?),
            phase_deg: sig9(c.phase_deg()),
            bandwidth_pct: sig9(table.fractional_bandwidth(name, threshold_db, f)?),
        });
    }
    let phase_difference_deg = names[1..]
        .iter()
        .map(|b| table.phase_difference(b, &names[0], f).map(sig9))
        .collect::<Result<_, _>>()?;
    emit(
        None,
        &io::to_json(&UnitcellReport {
            kind: table.kind().name(),
            active: table.is_active(),
            freq_ghz: sig9(f.ghz()),
            threshold_db,
            states,
            phase_difference_deg,
        }),
    )
}
