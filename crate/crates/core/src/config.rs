//! Runtime configuration: JSON ingestion with per-field defaults, validation
//! that names the offending field, and conversion into the domain types.
//!
//! Every field of every section has a default, so an empty file or `{}`
//! yields the full default parameter set (28 GHz carrier, 800 MHz bandwidth,
//! 20 mW transmit power, -106 dBm noise, 50 mm/hr rain over 250 m coverage).
//! The schema is documented in `docs/config-schema.md`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::attack::{AttackConfig, AttackMode};
use crate::channel::{LinkConfig, Profiles, Scenario, ShadowingModel};
use crate::error::{Error, Result};
use crate::rain::RainConfig;

/// Default threshold capacity C_T in bit/s.
///
/// Calibrated as the legitimate user's capacity at the 150 m threshold
/// distance under the urban default profile and default radio parameters:
/// an intruder capturing the downlink at that distance sees exactly this
/// capacity, so the user/intruder capacity crossover sits at 150 m. The
/// value is recorded here (and in the config schema docs) rather than
/// recomputed inside any decision logic.
pub const DEFAULT_THRESHOLD_CAPACITY_BPS: f64 = 16_027_352.705_249_207;

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

/// Radio and geometry defaults shared by every link the toolkit builds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSettings {
    pub frequency_hz: f64,
    /// Reference user distance, m; distance sweeps override it per point.
    pub distance_m: f64,
    pub reference_distance_m: f64,
    pub tx_power_w: f64,
    pub noise_power_dbm: f64,
    pub bandwidth_hz: f64,
    /// Fixed thermal offset added to every path loss, dB.
    pub thermal_offset_db: f64,
    /// Cell coverage range, m.
    pub coverage_range_m: f64,
}

impl Default for LinkSettings {
    fn default() -> Self {
        LinkSettings {
            frequency_hz: 28e9,
            distance_m: 100.0,
            reference_distance_m: 1.0,
            tx_power_w: 0.02,
            noise_power_dbm: -106.0,
            bandwidth_hz: 8e8,
            thermal_offset_db: 0.0,
            coverage_range_m: 250.0,
        }
    }
}

/// Sum of the per-mechanism rain depths, km each.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RainDepthComponents {
    pub scattering_km: f64,
    pub absorption_km: f64,
    pub polarization_km: f64,
}

impl Default for RainDepthComponents {
    fn default() -> Self {
        RainDepthComponents {
            scattering_km: 0.0,
            absorption_km: 0.0,
            polarization_km: 0.0,
        }
    }
}

/// Rain section; either a single depth or its three components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RainSettings {
    pub rain_rate_mm_hr: f64,
    pub path_elevation_deg: f64,
    pub polarization_tilt_deg: f64,
    pub rain_path_depth_km: f64,
    /// When present, replaces `rain_path_depth_km` with the component sum
    /// at parse time and is then cleared.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth_components: Option<RainDepthComponents>,
    pub enabled: bool,
}

impl Default for RainSettings {
    fn default() -> Self {
        RainSettings {
            rain_rate_mm_hr: 50.0,
            path_elevation_deg: 0.0,
            polarization_tilt_deg: 0.0,
            rain_path_depth_km: 0.25,
            depth_components: None,
            enabled: true,
        }
    }
}

/// Secrecy thresholds and eavesdropper geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SecrecySettings {
    /// Wiretap link distance, m. The eavesdropper sits at the boundary of
    /// the rained area, outside the rain by default.
    pub eavesdropper_distance_m: f64,
    /// Distance at which the user/intruder capacity crossover is calibrated, m.
    pub threshold_distance_m: f64,
    /// Threshold capacity C_T, bit/s. See [`DEFAULT_THRESHOLD_CAPACITY_BPS`]
    /// for the calibration provenance.
    pub threshold_capacity_bps: f64,
    /// Sensitivity resolution step η, bit/s.
    pub capacity_resolution_bps: f64,
    /// Full-duplex sensitivity headroom as a fraction of the user capacity.
    pub fd_margin_fraction: f64,
    /// Optional rain attenuation on the wiretap link, dB.
    pub eavesdropper_rain_db: f64,
}

impl Default for SecrecySettings {
    fn default() -> Self {
        SecrecySettings {
            eavesdropper_distance_m: 500.0,
            threshold_distance_m: 150.0,
            threshold_capacity_bps: DEFAULT_THRESHOLD_CAPACITY_BPS,
            capacity_resolution_bps: 1e6,
            fd_margin_fraction: 0.05,
            eavesdropper_rain_db: 0.0,
        }
    }
}

/// Attack state machine parameters plus the artificial-noise decode gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AttackSettings {
    pub mode: AttackMode,
    pub p_downlink_success: f64,
    pub p_uplink_success: f64,
    pub ping_flood_ttis: u64,
    pub max_cycles: u32,
    pub an_power_w: f64,
    pub an_decode_threshold_db: f64,
    pub seed: u64,
}

impl Default for AttackSettings {
    fn default() -> Self {
        let base = AttackConfig::default();
        AttackSettings {
            mode: base.mode,
            p_downlink_success: base.p_downlink_success,
            p_uplink_success: base.p_uplink_success,
            ping_flood_ttis: base.ping_flood_ttis,
            max_cycles: base.max_cycles,
            an_power_w: base.an_power_w,
            an_decode_threshold_db: crate::attack::DEFAULT_AN_DECODE_THRESHOLD_DB,
            seed: base.seed,
        }
    }
}

impl AttackSettings {
    pub fn to_attack_config(&self) -> AttackConfig {
        AttackConfig {
            mode: self.mode,
            p_downlink_success: self.p_downlink_success,
            p_uplink_success: self.p_uplink_success,
            ping_flood_ttis: self.ping_flood_ttis,
            max_cycles: self.max_cycles,
            an_power_w: self.an_power_w,
            seed: self.seed,
        }
    }
}

/// User deployment used by the snapshot and sensitivity experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeploymentSettings {
    pub user_distances_m: Vec<f64>,
    pub scenario: Scenario,
}

impl Default for DeploymentSettings {
    fn default() -> Self {
        DeploymentSettings {
            user_distances_m: vec![50.0, 120.0, 215.0, 223.0],
            scenario: Scenario::Urban,
        }
    }
}

// ---------------------------------------------------------------------------
// Top-level configuration
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub link: LinkSettings,
    pub profiles: Profiles,
    pub rain: RainSettings,
    pub secrecy: SecrecySettings,
    pub attack: AttackSettings,
    pub deployment: DeploymentSettings,
    /// Radius of the artificially rained area, m.
    pub ar_coverage_radius_m: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            link: LinkSettings::default(),
            profiles: Profiles::default(),
            rain: RainSettings::default(),
            secrecy: SecrecySettings::default(),
            attack: AttackSettings::default(),
            deployment: DeploymentSettings::default(),
            ar_coverage_radius_m: 500.0,
        }
    }
}

impl Config {
    /// Fold the rain depth components into the single depth value.
    fn normalize(&mut self) {
        if let Some(components) = self.rain.depth_components.take() {
            self.rain.rain_path_depth_km =
                components.scattering_km + components.absorption_km + components.polarization_km;
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.link_for(
            Scenario::Urban,
            self.link.distance_m,
            self.link.frequency_hz,
        )
        .validate()?;
        self.link_for(
            Scenario::Rural,
            self.link.distance_m,
            self.link.frequency_hz,
        )
        .validate()?;
        self.rain_config().validate()?;
        self.attack.to_attack_config().validate()?;

        if self.secrecy.eavesdropper_distance_m < self.link.reference_distance_m {
            return Err(Error::validation(
                "eavesdropper_distance_m",
                "must be at least the reference distance",
            ));
        }
        if self.secrecy.threshold_distance_m < self.link.reference_distance_m {
            return Err(Error::validation(
                "threshold_distance_m",
                "must be at least the reference distance",
            ));
        }
        for (field, v) in [
            (
                "threshold_capacity_bps",
                self.secrecy.threshold_capacity_bps,
            ),
            (
                "capacity_resolution_bps",
                self.secrecy.capacity_resolution_bps,
            ),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::validation(field, "must be positive"));
            }
        }
        if !(0.0..=1.0).contains(&self.secrecy.fd_margin_fraction) {
            return Err(Error::validation(
                "fd_margin_fraction",
                "must lie in [0, 1]",
            ));
        }
        if self.secrecy.eavesdropper_rain_db < 0.0 {
            return Err(Error::validation(
                "eavesdropper_rain_db",
                "must be non-negative",
            ));
        }
        if self.deployment.user_distances_m.is_empty() {
            return Err(Error::validation("user_distances_m", "must not be empty"));
        }
        for &d in &self.deployment.user_distances_m {
            if d < self.link.reference_distance_m {
                return Err(Error::validation(
                    "user_distances_m",
                    "every distance must be at least the reference distance",
                ));
            }
        }
        if !self.ar_coverage_radius_m.is_finite() || self.ar_coverage_radius_m <= 0.0 {
            return Err(Error::validation(
                "ar_coverage_radius_m",
                "must be positive",
            ));
        }
        Ok(())
    }

    /// Link at a given scenario, distance and carrier; all other radio
    /// parameters come from the link section.
    pub fn link_for(&self, scenario: Scenario, distance_m: f64, frequency_hz: f64) -> LinkConfig {
        LinkConfig {
            frequency_hz,
            distance_m,
            reference_distance_m: self.link.reference_distance_m,
            tx_power_w: self.link.tx_power_w,
            noise_power_dbm: self.link.noise_power_dbm,
            bandwidth_hz: self.link.bandwidth_hz,
            path_loss_exponent: self.profiles.profile(scenario).path_loss_exponent,
            scenario,
        }
    }

    pub fn rain_config(&self) -> RainConfig {
        RainConfig {
            rain_rate_mm_hr: self.rain.rain_rate_mm_hr,
            path_elevation_deg: self.rain.path_elevation_deg,
            polarization_tilt_deg: self.rain.polarization_tilt_deg,
            rain_path_depth_km: self.rain.rain_path_depth_km,
            enabled: self.rain.enabled,
        }
    }

    /// Deterministic shadowing at the scenario's configured mean.
    pub fn shadowing(&self, scenario: Scenario) -> ShadowingModel {
        ShadowingModel::deterministic(self.profiles.profile(scenario).shadow_mu_db)
    }
}

// ---------------------------------------------------------------------------
// Load / save
// ---------------------------------------------------------------------------

/// Parse a configuration from JSON text. Empty input yields the defaults.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut config: Config = if text.trim().is_empty() {
        Config::default()
    } else {
        serde_json::from_str(text).map_err(|e| Error::config(e.to_string()))?
    };
    config.normalize();
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

pub fn config_to_string(config: &Config) -> String {
    serde_json::to_string_pretty(config).expect("config serializes")
}

pub fn save_config(config: &Config, path: &Path) -> Result<()> {
    std::fs::write(path, config_to_string(config) + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
