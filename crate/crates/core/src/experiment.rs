//! Experiment orchestration: named sweeps through the channel → rain →
//! secrecy → attack → miss-rate pipeline, aggregated into sorted metric
//! records and rendered as deterministic CSV.
//!
//! Every experiment is reproducible: the sweep grid, the scenario and rain
//! selections, and the seed fully determine the output, and rerunning with
//! the same inputs produces a byte-identical file. Stochastic experiments
//! run `replicas` batches on seeds `seed + replica_index` and report the
//! mean plus a `_stderr` companion row.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::attack::{self, AttackConfig, AttackMode, UserNode};
use crate::channel::{self, Scenario};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::missrate::{self, MissRateParams};
use crate::rain::{self, CoefficientTable};
use crate::rng;
use crate::secrecy;

// ---------------------------------------------------------------------------
// Experiment specification
// ---------------------------------------------------------------------------

/// The eight named experiments, one per figure-style output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentName {
    SecrecyVsDistance,
    EnergyVsDistance,
    SecrecyVsFrequency,
    EnergyVsFrequency,
    MissrateVsAttempts,
    MissPmfComparison,
    SensitivityBars,
    DeploymentSnapshot,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 8] = [
        ExperimentName::SecrecyVsDistance,
        ExperimentName::EnergyVsDistance,
        ExperimentName::SecrecyVsFrequency,
        ExperimentName::EnergyVsFrequency,
        ExperimentName::MissrateVsAttempts,
        ExperimentName::MissPmfComparison,
        ExperimentName::SensitivityBars,
        ExperimentName::DeploymentSnapshot,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ExperimentName::SecrecyVsDistance => "secrecy_vs_distance",
            ExperimentName::EnergyVsDistance => "energy_vs_distance",
            ExperimentName::SecrecyVsFrequency => "secrecy_vs_frequency",
            ExperimentName::EnergyVsFrequency => "energy_vs_frequency",
            ExperimentName::MissrateVsAttempts => "missrate_vs_attempts",
            ExperimentName::MissPmfComparison => "miss_pmf_comparison",
            ExperimentName::SensitivityBars => "sensitivity_bars",
            ExperimentName::DeploymentSnapshot => "deployment_snapshot",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .into_iter()
            .find(|n| n.label() == s)
            .ok_or_else(|| {
                Error::config(format!(
                    "unknown experiment {s:?}; expected one of: {}",
                    ExperimentName::ALL.map(|n| n.label()).join(", ")
                ))
            })
    }
}

/// Inclusive sweep grid `start, start+step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        SweepGrid { start, stop, step }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.step.is_finite() || self.step <= 0.0 {
            return Err(Error::validation("sweep.step", "must be positive"));
        }
        if !self.stop.is_finite() || self.stop <= self.start {
            return Err(Error::validation("sweep.stop", "must exceed sweep.start"));
        }
        Ok(())
    }

    /// Grid points, inclusive of the stop value up to a small epsilon.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }
}

/// One experiment request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub sweep: SweepGrid,
    pub scenarios: Vec<Scenario>,
    pub ar: Vec<bool>,
    pub replicas: u32,
    pub seed: u64,
}

impl ExperimentSpec {
    /// Canonical sweep and selections for each experiment: distance sweeps
    /// cover 10–250 m, frequency sweeps 10–100 GHz, attempt sweeps 10–100,
    /// the pmf support 0–20, and both scenarios with rain off and on.
    pub fn default_for(name: ExperimentName) -> Self {
        let sweep = match name {
            ExperimentName::SecrecyVsDistance
            | ExperimentName::EnergyVsDistance
            | ExperimentName::SensitivityBars
            | ExperimentName::DeploymentSnapshot => SweepGrid::new(10.0, 250.0, 10.0),
            ExperimentName::SecrecyVsFrequency | ExperimentName::EnergyVsFrequency => {
                SweepGrid::new(10e9, 100e9, 10e9)
            }
            ExperimentName::MissrateVsAttempts => SweepGrid::new(10.0, 100.0, 10.0),
            ExperimentName::MissPmfComparison => SweepGrid::new(0.0, 20.0, 1.0),
        };
        let replicas = match name {
            ExperimentName::MissrateVsAttempts => 10,
            _ => 1,
        };
        ExperimentSpec {
            name,
            sweep,
            scenarios: vec![Scenario::Rural, Scenario::Urban],
            ar: vec![false, true],
            replicas,
            seed: 7,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        if self.replicas < 1 {
            return Err(Error::validation("replicas", "must be at least 1"));
        }
        if self.scenarios.is_empty() {
            return Err(Error::validation("scenarios", "must not be empty"));
        }
        if self.ar.is_empty() {
            return Err(Error::validation("ar", "must not be empty"));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Metric records and CSV emission
// ---------------------------------------------------------------------------

/// One experiment output row.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRecord {
    pub experiment: ExperimentName,
    /// Scenario, when the metric depends on one.
    pub scenario: Option<Scenario>,
    /// Rain state, when the metric depends on one.
    pub ar_enabled: Option<bool>,
    pub x_value: f64,
    pub metric_name: String,
    pub metric_value: f64,
    pub units: &'static str,
}

/// Bit-exact CSV header.
pub const CSV_HEADER: &str = "experiment,scenario,ar,x_value,metric,value,units";

/// Render a float with nine significant digits; parses back within an ulp.
pub fn format_value(v: f64) -> String {
    format!("{v:.8e}")
}

fn sort_records(records: &mut [MetricsRecord]) {
    records.sort_by(|a, b| {
        let scenario_rank = |s: &Option<Scenario>| match s {
            None => 0u8,
            Some(Scenario::Rural) => 1,
            Some(Scenario::Urban) => 2,
        };
        let ar_rank = |a: &Option<bool>| match a {
            None => 0u8,
            Some(false) => 1,
            Some(true) => 2,
        };
        scenario_rank(&a.scenario)
            .cmp(&scenario_rank(&b.scenario))
            .then(ar_rank(&a.ar_enabled).cmp(&ar_rank(&b.ar_enabled)))
            .then(a.x_value.total_cmp(&b.x_value))
            .then(a.metric_name.cmp(&b.metric_name))
    });
}

/// CSV text for a record set: header plus one row per record in sorted
/// order, LF line endings.
pub fn csv_string(records: &[MetricsRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::domain("csv: no records"));
    }
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let mut out = String::with_capacity(sorted.len() * 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &sorted {
        let scenario = r.scenario.map_or("-", |s| s.label());
        let ar = r.ar_enabled.map_or("-", |on| if on { "on" } else { "off" });
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.experiment,
            scenario,
            ar,
            format_value(r.x_value),
            r.metric_name,
            format_value(r.metric_value),
            r.units
        ));
    }
    Ok(out)
}

pub fn write_csv(records: &[MetricsRecord], path: &Path) -> Result<()> {
    let text = csv_string(records)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

// ---------------------------------------------------------------------------
// Pipeline helpers
// ---------------------------------------------------------------------------

/// Deterministic user-link capacity at a sweep point, with or without the
/// configured artificial rain on the user's path.
pub fn user_capacity_bps(
    config: &Config,
    table: &CoefficientTable,
    scenario: Scenario,
    distance_m: f64,
    frequency_hz: f64,
    ar_on: bool,
) -> Result<f64> {
    let link = config.link_for(scenario, distance_m, frequency_hz);
    let rain_db = if ar_on {
        rain::rain_penalty_db(frequency_hz, &config.rain_config(), table)?
    } else {
        0.0
    };
    let shadow_db = config.profiles.profile(scenario).shadow_mu_db;
    channel::link_capacity_bps(&link, shadow_db, rain_db, config.link.thermal_offset_db)
}

/// Wiretap capacity: the eavesdropper listens from the rained-area boundary,
/// so its link carries only the configured explicit attenuation knob.
pub fn eavesdropper_capacity_bps(
    config: &Config,
    scenario: Scenario,
    frequency_hz: f64,
) -> Result<f64> {
    let link = config.link_for(
        scenario,
        config.secrecy.eavesdropper_distance_m,
        frequency_hz,
    );
    let shadow_db = config.profiles.profile(scenario).shadow_mu_db;
    channel::link_capacity_bps(
        &link,
        shadow_db,
        config.secrecy.eavesdropper_rain_db,
        config.link.thermal_offset_db,
    )
}

fn secrecy_point_bps(
    config: &Config,
    table: &CoefficientTable,
    scenario: Scenario,
    distance_m: f64,
    frequency_hz: f64,
    ar_on: bool,
) -> Result<f64> {
    let c_user = user_capacity_bps(config, table, scenario, distance_m, frequency_hz, ar_on)?;
    let c_eav = eavesdropper_capacity_bps(config, scenario, frequency_hz)?;
    Ok(secrecy::secrecy_capacity(c_user, c_eav))
}

// ---------------------------------------------------------------------------
// Experiment runner
// ---------------------------------------------------------------------------

/// Execute one experiment and return its sorted records.
pub fn run_experiment(
    spec: &ExperimentSpec,
    config: &Config,
    table: &CoefficientTable,
) -> Result<Vec<MetricsRecord>> {
    spec.validate()?;
    config.validate()?;
    let mut records = match spec.name {
        ExperimentName::SecrecyVsDistance => {
            channel_sweep(spec, config, table, SweepAxis::Distance, Metric::Secrecy)?
        }
        ExperimentName::EnergyVsDistance => {
            channel_sweep(spec, config, table, SweepAxis::Distance, Metric::Energy)?
        }
        ExperimentName::SecrecyVsFrequency => {
            channel_sweep(spec, config, table, SweepAxis::Frequency, Metric::Secrecy)?
        }
        ExperimentName::EnergyVsFrequency => {
            channel_sweep(spec, config, table, SweepAxis::Frequency, Metric::Energy)?
        }
        ExperimentName::MissrateVsAttempts => missrate_sweep(spec, config)?,
        ExperimentName::MissPmfComparison => pmf_comparison(spec, config)?,
        ExperimentName::SensitivityBars => sensitivity_bars(spec, config, table)?,
        ExperimentName::DeploymentSnapshot => {
            let mut all = Vec::new();
            for &scenario in &spec.scenarios {
                all.extend(snapshot_for_scenario(
                    spec.name,
                    &config.deployment.user_distances_m,
                    scenario,
                    config,
                    table,
                )?);
            }
            all
        }
    };
    sort_records(&mut records);
    Ok(records)
}

enum SweepAxis {
    Distance,
    Frequency,
}

enum Metric {
    Secrecy,
    Energy,
}

fn channel_sweep(
    spec: &ExperimentSpec,
    config: &Config,
    table: &CoefficientTable,
    axis: SweepAxis,
    metric: Metric,
) -> Result<Vec<MetricsRecord>> {
    let mut records = Vec::new();
    for &scenario in &spec.scenarios {
        for &ar_on in &spec.ar {
            for x in spec.sweep.points() {
                let (distance_m, frequency_hz) = match axis {
                    SweepAxis::Distance => (x, config.link.frequency_hz),
                    SweepAxis::Frequency => (config.link.distance_m, x),
                };
                let (name, value, units) = match metric {
                    Metric::Secrecy => {
                        let s = secrecy_point_bps(
                            config,
                            table,
                            scenario,
                            distance_m,
                            frequency_hz,
                            ar_on,
                        )
                        .map_err(|e| e.at_sweep_point(x))?;
                        ("secrecy_rate", s, "bit/s")
                    }
                    Metric::Energy => {
                        let c = user_capacity_bps(
                            config,
                            table,
                            scenario,
                            distance_m,
                            frequency_hz,
                            ar_on,
                        )
                        .map_err(|e| e.at_sweep_point(x))?;
                        let ee = channel::energy_efficiency(c, config.link.tx_power_w)
                            .map_err(|e| e.at_sweep_point(x))?;
                        ("energy_efficiency", ee, "bit/J")
                    }
                };
                records.push(MetricsRecord {
                    experiment: spec.name,
                    scenario: Some(scenario),
                    ar_enabled: Some(ar_on),
                    x_value: x,
                    metric_name: name.to_string(),
                    metric_value: value,
                    units,
                });
            }
        }
    }
    Ok(records)
}

fn missrate_sweep(spec: &ExperimentSpec, config: &Config) -> Result<Vec<MetricsRecord>> {
    let m_dl = 1.0 - config.attack.p_downlink_success;
    let m_ul = 1.0 - config.attack.p_uplink_success;
    let mut records = Vec::new();

    for x in spec.sweep.points() {
        let attempts = (x.round() as u64).max(1);
        let params = MissRateParams {
            attempts,
            miss_prob_downlink: m_dl,
            miss_prob_uplink: m_ul,
        };
        for (mode, suffix) in [(AttackMode::Hd, "hd"), (AttackMode::Fd, "fd")] {
            let expected = attempts as f64 * missrate::analytic_missrate(&params, mode).value;
            records.push(MetricsRecord {
                experiment: spec.name,
                scenario: None,
                ar_enabled: None,
                x_value: attempts as f64,
                metric_name: format!("missed_attempts_{suffix}"),
                metric_value: expected,
                units: "attempts",
            });

            // Empirical companion: per replica, `attempts` single-cycle runs.
            let mut per_replica = Vec::with_capacity(spec.replicas as usize);
            for replica in 0..spec.replicas {
                let mut seeder = rng::replica_rng(spec.seed, replica as u64);
                let traces: Vec<_> = (0..attempts)
                    .map(|_| {
                        let run = AttackConfig {
                            mode,
                            p_downlink_success: config.attack.p_downlink_success,
                            p_uplink_success: config.attack.p_uplink_success,
                            ping_flood_ttis: config.attack.ping_flood_ttis,
                            max_cycles: 1,
                            an_power_w: config.attack.an_power_w,
                            seed: rand_core::RngCore::next_u64(&mut seeder),
                        };
                        attack::run_rrc_attack(&run)
                    })
                    .collect::<Result<_>>()?;
                per_replica.push(missrate::empirical_missrate(&traces)? * attempts as f64);
            }
            let (mean, stderr) = mean_stderr(&per_replica);
            records.push(MetricsRecord {
                experiment: spec.name,
                scenario: None,
                ar_enabled: None,
                x_value: attempts as f64,
                metric_name: format!("missed_attempts_{suffix}_empirical"),
                metric_value: mean,
                units: "attempts",
            });
            records.push(MetricsRecord {
                experiment: spec.name,
                scenario: None,
                ar_enabled: None,
                x_value: attempts as f64,
                metric_name: format!("missed_attempts_{suffix}_empirical_stderr"),
                metric_value: stderr,
                units: "attempts",
            });
        }
    }
    Ok(records)
}

fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn pmf_comparison(spec: &ExperimentSpec, config: &Config) -> Result<Vec<MetricsRecord>> {
    let attempts = (spec.sweep.stop.round() as u64).max(1);
    let p_miss = 1.0 - config.attack.p_downlink_success;
    let lambda = attempts as f64 * p_miss;
    let mut records = Vec::new();
    for x in spec.sweep.points() {
        let u = x.round() as u64;
        if u > attempts {
            continue;
        }
        records.push(MetricsRecord {
            experiment: spec.name,
            scenario: None,
            ar_enabled: None,
            x_value: u as f64,
            metric_name: "binomial_pmf".to_string(),
            metric_value: missrate::binomial_pmf(attempts, u, p_miss)
                .map_err(|e| e.at_sweep_point(x))?,
            units: "probability",
        });
        records.push(MetricsRecord {
            experiment: spec.name,
            scenario: None,
            ar_enabled: None,
            x_value: u as f64,
            metric_name: "poisson_pmf".to_string(),
            metric_value: missrate::poisson_pmf(u, lambda),
            units: "probability",
        });
    }
    Ok(records)
}

fn sensitivity_bars(
    spec: &ExperimentSpec,
    config: &Config,
    table: &CoefficientTable,
) -> Result<Vec<MetricsRecord>> {
    let step = config.secrecy.capacity_resolution_bps;
    let c_t = config.secrecy.threshold_capacity_bps;
    let mut records = Vec::new();
    for &scenario in &spec.scenarios {
        for &ar_on in &spec.ar {
            for &d in &config.deployment.user_distances_m {
                let c_user =
                    user_capacity_bps(config, table, scenario, d, config.link.frequency_hz, ar_on)
                        .map_err(|e| e.at_sweep_point(d))?;
                let fd_margin = config.secrecy.fd_margin_fraction * c_user;
                for (mode, name, margin) in [
                    (AttackMode::Hd, "sensitivity_hd", 0.0),
                    (AttackMode::Fd, "sensitivity_fd", fd_margin),
                ] {
                    records.push(MetricsRecord {
                        experiment: spec.name,
                        scenario: Some(scenario),
                        ar_enabled: Some(ar_on),
                        x_value: d,
                        metric_name: name.to_string(),
                        metric_value: secrecy::attack_sensitivity_with_step(
                            c_user, c_t, mode, margin, step,
                        ),
                        units: "bit/s",
                    });
                }
            }
        }
    }
    Ok(records)
}

/// Per-user throughput with and without the attack, for both attack modes.
///
/// The worst-CSI user is the target; under attack its link carries the
/// configured rain and it keeps only the missed fraction of downlink
/// attempts. Other users are unaffected.
pub fn deployment_snapshot(
    user_distances_m: &[f64],
    config: &Config,
    table: &CoefficientTable,
) -> Result<Vec<MetricsRecord>> {
    let mut records = snapshot_for_scenario(
        ExperimentName::DeploymentSnapshot,
        user_distances_m,
        config.deployment.scenario,
        config,
        table,
    )?;
    sort_records(&mut records);
    Ok(records)
}

fn snapshot_for_scenario(
    experiment: ExperimentName,
    user_distances_m: &[f64],
    scenario: Scenario,
    config: &Config,
    table: &CoefficientTable,
) -> Result<Vec<MetricsRecord>> {
    if user_distances_m.is_empty() {
        return Err(Error::domain("deployment snapshot: no users deployed"));
    }
    let users: Vec<UserNode> = user_distances_m
        .iter()
        .enumerate()
        .map(|(i, &d)| UserNode::new(i as u32 + 1, d, scenario))
        .collect();
    let target_id = attack::select_target(
        &users,
        config.link.frequency_hz,
        config.link.reference_distance_m,
        &config.profiles,
    )?
    .id;

    let m_dl = 1.0 - config.attack.p_downlink_success;
    let m_ul = 1.0 - config.attack.p_uplink_success;
    let victim_share_hd = m_dl;
    let victim_share_fd = (m_dl + m_ul).min(1.0);

    let mut records = Vec::new();
    for user in &users {
        let clear = user_capacity_bps(
            config,
            table,
            scenario,
            user.distance_m,
            config.link.frequency_hz,
            false,
        )
        .map_err(|e| e.at_sweep_point(user.distance_m))?;
        let (hd, fd) = if user.id == target_id {
            let rained = user_capacity_bps(
                config,
                table,
                scenario,
                user.distance_m,
                config.link.frequency_hz,
                true,
            )
            .map_err(|e| e.at_sweep_point(user.distance_m))?;
            (rained * victim_share_hd, rained * victim_share_fd)
        } else {
            (clear, clear)
        };
        for (name, value, ar_on) in [
            ("throughput_no_attack", clear, false),
            ("throughput_hd_attack", hd, true),
            ("throughput_fd_attack", fd, true),
        ] {
            records.push(MetricsRecord {
                experiment,
                scenario: Some(scenario),
                ar_enabled: Some(ar_on),
                x_value: user.distance_m,
                metric_name: name.to_string(),
                metric_value: value,
                units: "bit/s",
            });
        }
    }
    Ok(records)
}
