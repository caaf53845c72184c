//! Command-line interface for the rainfade toolkit.
//!
//! Exit codes: 0 on success, 2 for configuration errors (bad file, bad
//! flags, failed validation), 3 for domain errors (violated preconditions,
//! exhausted searches).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rainfade::attack::{run_rrc_attack, AttackMode};
use rainfade::channel::{self, Scenario};
use rainfade::config::{self, Config};
use rainfade::experiment::{self, ExperimentName, ExperimentSpec, SweepGrid};
use rainfade::rain::{self, CoefficientTable};
use rainfade::secrecy;
use rainfade::{Error, Result};

/// Environment variable naming the rain coefficient data file.
const COEFFS_ENV: &str = "RAINFADE_COEFFS";

#[derive(Parser)]
#[command(
    name = "rainfade",
    about = "Link budgets, artificial-rain attenuation, secrecy capacity and RRC spoofing-attack simulation for mmWave D2D links",
    version
)]
struct Cli {
    /// Configuration file (JSON); defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Rain coefficient data file; overrides the RAINFADE_COEFFS
    /// environment variable and the built-in table.
    #[arg(long, global = true)]
    coefficients: Option<PathBuf>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the configured random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the experiment replica count.
    #[arg(long, global = true)]
    replicas: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PointArgs {
    /// User link distance in metres.
    #[arg(long)]
    distance: Option<f64>,

    /// Carrier frequency in Hz.
    #[arg(long)]
    frequency: Option<f64>,

    /// Scenario: urban or rural.
    #[arg(long)]
    scenario: Option<String>,

    /// Artificial rain on the user link: on or off.
    #[arg(long)]
    ar: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the link-budget chain for one link.
    Link(PointArgs),
    /// Print rain coefficients and the resulting path attenuation.
    Rain {
        /// Carrier frequency in Hz.
        #[arg(long)]
        frequency: Option<f64>,
        /// Rain rate in mm/hr.
        #[arg(long)]
        rain_rate: Option<f64>,
    },
    /// Print secrecy capacities, feasibility, and the required rain attenuation.
    Secrecy(PointArgs),
    /// Run one seeded RRC attack and emit its TTI trace.
    Attack {
        /// Attack mode: hd or fd.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Run a named experiment and emit CSV.
    Experiment {
        /// One of: secrecy_vs_distance, energy_vs_distance,
        /// secrecy_vs_frequency, energy_vs_frequency, missrate_vs_attempts,
        /// miss_pmf_comparison, sensitivity_bars, deployment_snapshot.
        name: String,
        /// Override the sweep start.
        #[arg(long)]
        start: Option<f64>,
        /// Override the sweep stop.
        #[arg(long)]
        stop: Option<f64>,
        /// Override the sweep step.
        #[arg(long)]
        step: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            let result = match &cli.out {
                Some(path) => std::fs::write(path, &output).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                }),
                None => {
                    print!("{output}");
                    Ok(())
                }
            };
            match result {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => report(&e),
            }
        }
        Err(e) => report(&e),
    }
}

fn report(error: &Error) -> ExitCode {
    eprintln!("error: {error}");
    let mut source = std::error::Error::source(error);
    while let Some(cause) = source {
        eprintln!("  caused by: {cause}");
        source = cause.source();
    }
    if error.is_config() {
        ExitCode::from(2)
    } else {
        ExitCode::from(3)
    }
}

// Unreadable input files are configuration problems (exit 2), unlike
// i/o failures on outputs.
fn as_config_error(error: Error) -> Error {
    match error {
        Error::Io { path, source } => {
            Error::config(format!("cannot read {}: {source}", path.display()))
        }
        other => other,
    }
}

fn run(cli: &Cli) -> Result<String> {
    let mut config = match &cli.config {
        Some(path) => config::load_config(path).map_err(as_config_error)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.attack.seed = seed;
    }
    let table = load_table(cli)?;
    eprintln!("coefficients: checksum {:#018x}", table.checksum());

    match &cli.command {
        Command::Link(point) => link_report(&config, &table, point),
        Command::Rain {
            frequency,
            rain_rate,
        } => rain_report(&config, &table, *frequency, *rain_rate),
        Command::Secrecy(point) => secrecy_report(&config, &table, point),
        Command::Attack { mode } => {
            let mut attack = config.attack.to_attack_config();
            if let Some(mode) = mode.as_deref() {
                attack.mode = parse_mode(mode)?;
            }
            let trace = run_rrc_attack(&attack)?;
            Ok(trace.to_text())
        }
        Command::Experiment {
            name,
            start,
            stop,
            step,
        } => {
            let name: ExperimentName = name.parse()?;
            let mut spec = ExperimentSpec::default_for(name);
            spec.seed = config.attack.seed;
            if let Some(replicas) = cli.replicas {
                spec.replicas = replicas;
            }
            spec.sweep = SweepGrid {
                start: start.unwrap_or(spec.sweep.start),
                stop: stop.unwrap_or(spec.sweep.stop),
                step: step.unwrap_or(spec.sweep.step),
            };
            let records = experiment::run_experiment(&spec, &config, &table)?;
            experiment::csv_string(&records)
        }
    }
}

fn load_table(cli: &Cli) -> Result<CoefficientTable> {
    if let Some(path) = &cli.coefficients {
        return CoefficientTable::from_path(path).map_err(as_config_error);
    }
    if let Ok(path) = std::env::var(COEFFS_ENV) {
        if !path.is_empty() {
            return CoefficientTable::from_path(std::path::Path::new(&path))
                .map_err(as_config_error);
        }
    }
    Ok(CoefficientTable::builtin())
}

fn parse_scenario(s: &str) -> Result<Scenario> {
    match s {
        "urban" => Ok(Scenario::Urban),
        "rural" => Ok(Scenario::Rural),
        other => Err(Error::config(format!(
            "unknown scenario {other:?}; expected urban or rural"
        ))),
    }
}

fn parse_mode(s: &str) -> Result<AttackMode> {
    match s {
        "hd" => Ok(AttackMode::Hd),
        "fd" => Ok(AttackMode::Fd),
        other => Err(Error::config(format!(
            "unknown attack mode {other:?}; expected hd or fd"
        ))),
    }
}

fn parse_ar(s: &str) -> Result<bool> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(Error::config(format!(
            "unknown rain state {other:?}; expected on or off"
        ))),
    }
}

struct Point {
    scenario: Scenario,
    distance_m: f64,
    frequency_hz: f64,
    ar_on: bool,
}

fn resolve_point(config: &Config, point: &PointArgs) -> Result<Point> {
    Ok(Point {
        scenario: match &point.scenario {
            Some(s) => parse_scenario(s)?,
            None => config.deployment.scenario,
        },
        distance_m: point.distance.unwrap_or(config.link.distance_m),
        frequency_hz: point.frequency.unwrap_or(config.link.frequency_hz),
        ar_on: match &point.ar {
            Some(s) => parse_ar(s)?,
            None => config.rain.enabled,
        },
    })
}

fn link_report(config: &Config, table: &CoefficientTable, point: &PointArgs) -> Result<String> {
    let p = resolve_point(config, point)?;
    let link = config.link_for(p.scenario, p.distance_m, p.frequency_hz);
    let shadow_db = config.profiles.profile(p.scenario).shadow_mu_db;
    let rain_db = if p.ar_on {
        rain::rain_penalty_db(p.frequency_hz, &config.rain_config(), table)?
    } else {
        0.0
    };
    let q_db = channel::path_gain_constant(p.frequency_hz, link.reference_distance_m)?;
    let pl_db = channel::path_loss_db(&link, shadow_db, rain_db, config.link.thermal_offset_db)?;
    let snr_db = channel::snr_db(&link, pl_db);
    let capacity = channel::capacity_bps(snr_db, link.bandwidth_hz);
    let efficiency = channel::energy_efficiency(capacity, link.tx_power_w)?;

    let mut out = String::new();
    out.push_str(&format!("scenario            {}\n", p.scenario));
    out.push_str(&format!("distance_m          {}\n", p.distance_m));
    out.push_str(&format!("frequency_hz        {}\n", p.frequency_hz));
    out.push_str(&format!(
        "ar                  {}\n",
        if p.ar_on { "on" } else { "off" }
    ));
    out.push_str(&format!("path_gain_db        {q_db:.6}\n"));
    out.push_str(&format!("rain_penalty_db     {rain_db:.6}\n"));
    out.push_str(&format!("path_loss_db        {pl_db:.6}\n"));
    out.push_str(&format!("snr_db              {snr_db:.6}\n"));
    out.push_str(&format!("capacity_bps        {capacity:.6e}\n"));
    out.push_str(&format!("energy_efficiency   {efficiency:.6e} bit/J\n"));
    Ok(out)
}

fn rain_report(
    config: &Config,
    table: &CoefficientTable,
    frequency: Option<f64>,
    rain_rate: Option<f64>,
) -> Result<String> {
    let frequency_hz = frequency.unwrap_or(config.link.frequency_hz);
    let mut rain_cfg = config.rain_config();
    if let Some(rate) = rain_rate {
        rain_cfg.rain_rate_mm_hr = rate;
    }
    let coeffs = rain::power_law_coefficients(frequency_hz, table)?;
    let (theta, epsilon) = rain::effective_coefficients(
        &coeffs,
        rain_cfg.path_elevation_deg,
        rain_cfg.polarization_tilt_deg,
    )?;
    let specific = rain::specific_attenuation(frequency_hz, &rain_cfg, table)?;
    let path_db = rain::path_attenuation_db(specific, rain_cfg.rain_path_depth_km);

    let mut out = String::new();
    out.push_str(&format!(
        "coefficient_checksum  {:#018x}\n",
        table.checksum()
    ));
    out.push_str(&format!("frequency_hz          {frequency_hz}\n"));
    out.push_str(&format!(
        "rain_rate_mm_hr       {}\n",
        rain_cfg.rain_rate_mm_hr
    ));
    out.push_str(&format!("enabled               {}\n", rain_cfg.enabled));
    out.push_str(&format!("theta_h               {:.6}\n", coeffs.theta_h));
    out.push_str(&format!("theta_v               {:.6}\n", coeffs.theta_v));
    out.push_str(&format!("epsilon_h             {:.6}\n", coeffs.epsilon_h));
    out.push_str(&format!("epsilon_v             {:.6}\n", coeffs.epsilon_v));
    out.push_str(&format!("theta_effective       {theta:.6}\n"));
    out.push_str(&format!("epsilon_effective     {epsilon:.6}\n"));
    out.push_str(&format!("specific_db_per_km    {specific:.6}\n"));
    out.push_str(&format!(
        "path_depth_km         {}\n",
        rain_cfg.rain_path_depth_km
    ));
    out.push_str(&format!("path_attenuation_db   {path_db:.6}\n"));
    Ok(out)
}

fn secrecy_report(config: &Config, table: &CoefficientTable, point: &PointArgs) -> Result<String> {
    let p = resolve_point(config, point)?;
    let c_user_clear = experiment::user_capacity_bps(
        config,
        table,
        p.scenario,
        p.distance_m,
        p.frequency_hz,
        false,
    )?;
    let c_user_rained = experiment::user_capacity_bps(
        config,
        table,
        p.scenario,
        p.distance_m,
        p.frequency_hz,
        true,
    )?;
    let c_eav = experiment::eavesdropper_capacity_bps(config, p.scenario, p.frequency_hz)?;
    let c_t = config.secrecy.threshold_capacity_bps;

    let s_clear = secrecy::secrecy_capacity(c_user_clear, c_eav);
    let s_rained = secrecy::secrecy_capacity(c_user_rained, c_eav);
    let link = config.link_for(p.scenario, p.distance_m, p.frequency_hz);
    let required = match secrecy::required_ar_attenuation(&link, c_eav, c_t) {
        Ok(db) => format!("{db:.2}"),
        Err(Error::SearchExhausted { ceiling_db }) => {
            format!("unreachable within {ceiling_db} dB")
        }
        Err(e) => return Err(e),
    };

    let mut out = String::new();
    out.push_str(&format!("scenario                 {}\n", p.scenario));
    out.push_str(&format!("user_distance_m          {}\n", p.distance_m));
    out.push_str(&format!(
        "eavesdropper_distance_m  {}\n",
        config.secrecy.eavesdropper_distance_m
    ));
    out.push_str(&format!("user_capacity_bps        {c_user_clear:.6e}\n"));
    out.push_str(&format!("user_capacity_ar_bps     {c_user_rained:.6e}\n"));
    out.push_str(&format!("eavesdropper_bps         {c_eav:.6e}\n"));
    out.push_str(&format!("secrecy_bps              {s_clear:.6e}\n"));
    out.push_str(&format!("secrecy_ar_bps           {s_rained:.6e}\n"));
    out.push_str(&format!("threshold_bps            {c_t:.6e}\n"));
    out.push_str(&format!(
        "feasible                 {}\n",
        secrecy::attack_feasible(s_clear, c_t)
    ));
    out.push_str(&format!(
        "feasible_with_ar         {}\n",
        secrecy::attack_feasible(s_rained, c_t)
    ));
    out.push_str(&format!("required_ar_db           {required}\n"));
    Ok(out)
}
