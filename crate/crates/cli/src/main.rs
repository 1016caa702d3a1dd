use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use omit_core::scan::{self, Axis, ScanKind, ScanSpec};
use omit_core::stability::analyze;
use omit_core::timedomain::{integrate_window, run_oracle, OracleGrid, OracleOptions, State};
use omit_core::{OmitError, Scenario};

#[derive(Parser)]
#[command(name = "omit-lab", version, about = "Optomechanical transparency scans and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transmission against probe detuning
    Spectrum(ScanArgs),
    /// On-resonance transmission against drive strength
    Amplitude(ScanArgs),
    /// Transmission over detuning and drive phase
    PhaseMap(ScanArgs),
    /// Group delay against pump power
    DelayVsPower(ScanArgs),
    /// Second-order sideband efficiency
    Sideband2(ScanArgs),
    /// Photon-number branches against pump power
    Bistability(ScanArgs),
    /// Stability of every branch over a parameter plane
    StabilityMap(ScanArgs),
    /// Phonon coupling from the electrostatic geometry
    Coulomb(ScanArgs),
    /// Stability report of one operating point (JSON)
    Stability(PointArgs),
    /// Time-domain check of the sideband amplitudes (JSON)
    Oracle(OracleArgs),
    /// Print the resolved configuration
    Config(ConfigArgs),
}

#[derive(Args, Clone)]
struct ConfigArgs {
    /// Scenario file applied on top of the built-in parameter set
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one key, e.g. --set pump_power_mw=3.5
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads
    #[arg(long)]
    workers: Option<usize>,
    /// Evaluate a single grid point, e.g. --point 3,7
    #[arg(long, value_delimiter = ',')]
    point: Option<Vec<usize>>,
    /// Swept key, e.g. --axis delta_p_ratio=-0.4:0.4:801 (at most two)
    #[arg(long, value_name = "KEY=START:STOP:COUNT[:log]")]
    axis: Vec<String>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    cfg: ConfigArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Beat periods in the projection window
    #[arg(long, default_value_t = 40)]
    window_periods: usize,
    /// Skip the half-step repeat
    #[arg(long)]
    no_step_halving: bool,
    /// Write the recorded window as CSV (t, re_c, im_c, ...)
    #[arg(long)]
    dump_trajectory: Option<PathBuf>,
}

fn load(cfg: &ConfigArgs) -> Result<Scenario, OmitError> {
    let mut s = match &cfg.config {
        Some(p) => Scenario::from_file(p)?,
        None => Scenario::reference(),
    };
    for kv in &cfg.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| OmitError::Config { line: None, msg: format!("--set expects KEY=VALUE, got `{kv}`") })?;
        s.set(k, v)?;
    }
    Ok(s)
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, OmitError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| OmitError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json_value(path: Option<&Path>, v: &serde_json::Value) -> Result<(), OmitError> {
    let mut w = open_out(path)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| OmitError::Io(e.to_string()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| OmitError::Io(e.to_string()))
}

fn run_scan_cmd(kind: ScanKind, a: &ScanArgs) -> Result<(), OmitError> {
    let base = load(&a.cfg)?;
    let axes = a.axis.iter().map(|s| Axis::parse(s)).collect::<Result<Vec<_>, _>>()?;
    let spec = ScanSpec { workers: a.workers, point: a.point.clone(), ..ScanSpec::new(kind, base).with_axes(axes) };
    let result = scan::run_scan(&spec)?;
    let format = a.format.unwrap_or(match a.out.as_ref().and_then(|p| p.extension()) {
        Some(e) if e == "json" => Format::Json,
        _ => Format::Csv,
    });
    let mut w = open_out(a.out.as_deref())?;
    match format {
        Format::Csv => {
            scan::write_csv(&result, &mut w)?;
            if let Some(p) = &a.out {
                let mut meta = p.clone().into_os_string();
                meta.push(".meta.json");
                write_json_value(Some(Path::new(&meta)), &result.metadata.to_json())?;
            }
        }
        Format::Json => scan::write_json(&result, &mut w)?,
    }
    let flagged = result.status.iter().filter(|s| **s != scan::Status::Ok).count();
    if flagged > 0 {
        log::warn!("{flagged} of {} rows flagged", result.rows.len());
    }
    Ok(())
}

fn run_stability(a: &PointArgs) -> Result<(), OmitError> {
    let op = load(&a.cfg)?.operating_point()?;
    let report = analyze(&op.sp, &op.ss)?;
    let mut v = report.to_json();
    v["steady_state"] = serde_json::to_value(op.ss).map_err(|e| OmitError::Io(e.to_string()))?;
    v["report"] = serde_json::to_value(&report).map_err(|e| OmitError::Io(e.to_string()))?;
    write_json_value(a.out.as_deref(), &v)
}

fn run_oracle_cmd(a: &OracleArgs) -> Result<(), OmitError> {
    let op = load(&a.cfg)?.operating_point()?;
    let opts = OracleOptions { window_periods: a.window_periods, step_halving: !a.no_step_halving, ..Default::default() };
    let report = run_oracle(&op.sp, &op.ss, &op.dc, &opts)?;
    if let Some(p) = &a.dump_trajectory {
        let grid = OracleGrid::new(&op.sp, &op.dc, &opts)?;
        let record_from = grid.transient_periods * grid.steps_per_period;
        let traj = integrate_window(&op.sp, &op.dc, State::from_steady(&op.ss), grid.dt, grid.total_steps(), record_from)?;
        let mut w = open_out(Some(p))?;
        traj.write_csv(&mut w).and_then(|_| w.flush()).map_err(|e| OmitError::Io(e.to_string()))?;
    }
    let v = serde_json::to_value(report).map_err(|e| OmitError::Io(e.to_string()))?;
    write_json_value(a.out.as_deref(), &v)
}

fn run_config(a: &ConfigArgs) -> Result<(), OmitError> {
    let s = load(a)?;
    let mut w = open_out(None)?;
    w.write_all(s.to_kv().as_bytes()).and_then(|_| w.flush()).map_err(|e| OmitError::Io(e.to_string()))
}

fn exit_code(e: &OmitError) -> u8 {
    match e {
        OmitError::Io(_) => 4,
        e if e.is_usage() => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Spectrum(a) => run_scan_cmd(ScanKind::Spectrum, a),
        Command::Amplitude(a) => run_scan_cmd(ScanKind::Amplitude, a),
        Command::PhaseMap(a) => run_scan_cmd(ScanKind::PhaseMap, a),
        Command::DelayVsPower(a) => run_scan_cmd(ScanKind::DelayVsPower, a),
        Command::Sideband2(a) => run_scan_cmd(ScanKind::Sideband2, a),
        Command::Bistability(a) => run_scan_cmd(ScanKind::Bistability, a),
        Command::StabilityMap(a) => run_scan_cmd(ScanKind::StabilityMap, a),
        Command::Coulomb(a) => run_scan_cmd(ScanKind::Coulomb, a),
        Command::Stability(a) => run_stability(a),
        Command::Oracle(a) => run_oracle_cmd(a),
        Command::Config(a) => run_config(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("omit-lab: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
