//! Deterministic link-budget chain for one transmitter→receiver hop.
//!
//! The chain is: path-gain constant → path loss with shadowing and optional
//! rain/thermal penalties → SNR → Shannon capacity → energy efficiency.
//! Everything works in the power/dB domain; dBm is the canonical power unit
//! at interfaces and watts are converted on entry. All functions are pure,
//! so they are safe for unrestricted parallel sweeps.

use rand_core::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Physical range guard for the path loss exponent.
pub const PATH_LOSS_EXPONENT_MIN: f64 = 1.6;
pub const PATH_LOSS_EXPONENT_MAX: f64 = 6.5;

// ---------------------------------------------------------------------------
// Scenario profiles
// ---------------------------------------------------------------------------

/// Propagation environment of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Rural,
    Urban,
}

impl Scenario {
    /// Declared default profile for the scenario. Urban is lossier and
    /// shadows harder; both are overridable through configuration.
    pub fn default_profile(self) -> ScenarioProfile {
        match self {
            Scenario::Rural => ScenarioProfile {
                path_loss_exponent: 2.8,
                shadow_mu_db: 0.0,
                shadow_sigma_db: 3.0,
            },
            Scenario::Urban => ScenarioProfile {
                path_loss_exponent: 3.5,
                shadow_mu_db: 0.0,
                shadow_sigma_db: 4.0,
            },
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Scenario::Rural => "rural",
            Scenario::Urban => "urban",
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Large-scale propagation parameters of one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioProfile {
    /// Distance-power slope ψ of the path loss model.
    pub path_loss_exponent: f64,
    /// Mean of the log-normal shadowing term, dB.
    pub shadow_mu_db: f64,
    /// Standard deviation of the log-normal shadowing term, dB.
    pub shadow_sigma_db: f64,
}

impl Default for ScenarioProfile {
    fn default() -> Self {
        Scenario::Urban.default_profile()
    }
}

/// The pair of scenario profiles in force for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Profiles {
    pub urban: ScenarioProfile,
    pub rural: ScenarioProfile,
}

impl Default for Profiles {
    fn default() -> Self {
        Profiles {
            urban: Scenario::Urban.default_profile(),
            rural: Scenario::Rural.default_profile(),
        }
    }
}

impl Profiles {
    pub fn profile(&self, scenario: Scenario) -> ScenarioProfile {
        match scenario {
            Scenario::Urban => self.urban,
            Scenario::Rural => self.rural,
        }
    }
}

// ---------------------------------------------------------------------------
// Link configuration
// ---------------------------------------------------------------------------

/// One transmitter→receiver link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    /// Carrier frequency, Hz.
    pub frequency_hz: f64,
    /// Transmitter→receiver distance, m.
    pub distance_m: f64,
    /// Reference distance of the path loss model, m.
    pub reference_distance_m: f64,
    /// Transmit power, W.
    pub tx_power_w: f64,
    /// Noise power, dBm.
    pub noise_power_dbm: f64,
    /// Channel bandwidth, Hz.
    pub bandwidth_hz: f64,
    /// Distance-power slope ψ.
    pub path_loss_exponent: f64,
    /// Propagation environment.
    pub scenario: Scenario,
}

impl LinkConfig {
    /// Link with the toolkit's default radio parameters (28 GHz carrier,
    /// 800 MHz bandwidth, 20 mW transmit power, -106 dBm noise, 1 m
    /// reference distance) and the scenario's default path loss exponent.
    pub fn for_scenario(scenario: Scenario, distance_m: f64) -> Self {
        LinkConfig {
            frequency_hz: 28e9,
            distance_m,
            reference_distance_m: 1.0,
            tx_power_w: 0.02,
            noise_power_dbm: -106.0,
            bandwidth_hz: 8e8,
            path_loss_exponent: scenario.default_profile().path_loss_exponent,
            scenario,
        }
    }

    pub fn with_distance(mut self, distance_m: f64) -> Self {
        self.distance_m = distance_m;
        self
    }

    pub fn with_frequency(mut self, frequency_hz: f64) -> Self {
        self.frequency_hz = frequency_hz;
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(v: f64) -> bool {
            v.is_finite() && v > 0.0
        }
        if !positive(self.frequency_hz) {
            return Err(Error::validation("frequency_hz", "must be positive"));
        }
        if !positive(self.reference_distance_m) {
            return Err(Error::validation(
                "reference_distance_m",
                "must be positive",
            ));
        }
        if !self.distance_m.is_finite() || self.distance_m < self.reference_distance_m {
            return Err(Error::validation(
                "distance_m",
                format!(
                    "must be at least the reference distance ({} m)",
                    self.reference_distance_m
                ),
            ));
        }
        if !positive(self.bandwidth_hz) {
            return Err(Error::validation("bandwidth_hz", "must be positive"));
        }
        if !positive(self.tx_power_w) {
            return Err(Error::validation("tx_power_w", "must be positive"));
        }
        if !(PATH_LOSS_EXPONENT_MIN..=PATH_LOSS_EXPONENT_MAX).contains(&self.path_loss_exponent) {
            return Err(Error::validation(
                "path_loss_exponent",
                format!("must lie in [{PATH_LOSS_EXPONENT_MIN}, {PATH_LOSS_EXPONENT_MAX}]"),
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Shadowing
// ---------------------------------------------------------------------------

/// How the shadowing term is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShadowingMode {
    /// Contribute exactly the mean; the random source is ignored.
    Deterministic,
    /// Gaussian draw in dB with the configured mean and deviation.
    Sampled,
}

/// Log-normal shadowing expressed in the dB domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowingModel {
    pub mu_db: f64,
    pub sigma_db: f64,
    pub mode: ShadowingMode,
}

impl ShadowingModel {
    pub fn deterministic(mu_db: f64) -> Self {
        ShadowingModel {
            mu_db,
            sigma_db: 0.0,
            mode: ShadowingMode::Deterministic,
        }
    }

    pub fn sampled(mu_db: f64, sigma_db: f64) -> Self {
        ShadowingModel {
            mu_db,
            sigma_db,
            mode: ShadowingMode::Sampled,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma_db < 0.0 {
            return Err(Error::validation("sigma_db", "must be non-negative"));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Path-gain constant in dB: `20·log10(λ / (4π·r0))` with `λ = c/f`.
///
/// The antenna field-pattern factor of the underlying free-space ratio is
/// taken as unity (0 dB) here; a non-isotropic gain budget would enter as a
/// separate dB offset.
pub fn path_gain_constant(frequency_hz: f64, reference_distance_m: f64) -> Result<f64> {
    if !frequency_hz.is_finite() || frequency_hz <= 0.0 {
        return Err(Error::domain("path gain: frequency must be positive"));
    }
    if !reference_distance_m.is_finite() || reference_distance_m <= 0.0 {
        return Err(Error::domain(
            "path gain: reference distance must be positive",
        ));
    }
    let wavelength_m = SPEED_OF_LIGHT_M_S / frequency_hz;
    Ok(20.0 * (wavelength_m / (4.0 * std::f64::consts::PI * reference_distance_m)).log10())
}

/// Path loss in dB: `-q_dB + 10ψ·log10(r/r0) + shadow + rain + thermal`.
///
/// With `rain_db = 0` this is the plain shadowed path loss; a positive
/// `rain_db` adds the rain penalty on top of the same chain.
pub fn path_loss_db(
    link: &LinkConfig,
    shadow_db: f64,
    rain_db: f64,
    thermal_db: f64,
) -> Result<f64> {
    if link.distance_m < link.reference_distance_m {
        return Err(Error::domain(format!(
            "path loss: distance {} m is shorter than the reference distance {} m",
            link.distance_m, link.reference_distance_m
        )));
    }
    if rain_db < 0.0 {
        return Err(Error::domain(
            "path loss: rain attenuation must be non-negative",
        ));
    }
    link.validate()?;
    let q_db = path_gain_constant(link.frequency_hz, link.reference_distance_m)?;
    let distance_term =
        10.0 * link.path_loss_exponent * (link.distance_m / link.reference_distance_m).log10();
    Ok(-q_db + distance_term + shadow_db + rain_db + thermal_db)
}

/// Shadowing contribution in dB for one link realization.
pub fn shadowing_value<R: RngCore>(model: &ShadowingModel, random_source: &mut R) -> f64 {
    match model.mode {
        ShadowingMode::Deterministic => model.mu_db,
        ShadowingMode::Sampled => rng::gaussian(random_source, model.mu_db, model.sigma_db),
    }
}

/// SNR in dB: `P_t(dBm) - path_loss - noise(dBm)`.
pub fn snr_db(link: &LinkConfig, path_loss_db: f64) -> f64 {
    watts_to_dbm(link.tx_power_w) - path_loss_db - link.noise_power_dbm
}

/// Shannon capacity in bit/s: `B·log2(1 + 10^(snr/10))`.
pub fn capacity_bps(snr_db: f64, bandwidth_hz: f64) -> f64 {
    let snr_linear = 10f64.powf(snr_db / 10.0);
    bandwidth_hz * (1.0 + snr_linear).log2()
}

/// Energy efficiency in bit/J.
pub fn energy_efficiency(capacity_bps: f64, total_power_w: f64) -> Result<f64> {
    if !total_power_w.is_finite() || total_power_w <= 0.0 {
        return Err(Error::domain(
            "energy efficiency: total power must be positive",
        ));
    }
    Ok(capacity_bps / total_power_w)
}

/// Full chain for one link: path loss → SNR → capacity.
pub fn link_capacity_bps(
    link: &LinkConfig,
    shadow_db: f64,
    rain_db: f64,
    thermal_db: f64,
) -> Result<f64> {
    let pl = path_loss_db(link, shadow_db, rain_db, thermal_db)?;
    Ok(capacity_bps(snr_db(link, pl), link.bandwidth_hz))
}

pub fn watts_to_dbm(power_w: f64) -> f64 {
    10.0 * (power_w * 1e3).log10()
}

pub fn dbm_to_watts(power_dbm: f64) -> f64 {
    10f64.powf(power_dbm / 10.0) * 1e-3
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn path_gain_unity_ratio_is_zero_db() {
        // f = c/(4π) makes λ/(4π·r0) = 1 at r0 = 1 m.
        let f = SPEED_OF_LIGHT_M_S / (4.0 * std::f64::consts::PI);
        let q = path_gain_constant(f, 1.0).unwrap();
        assert!(q.abs() < 1e-12, "q = {q}");
    }

    #[test]
    fn path_gain_at_28_ghz() {
        let q = path_gain_constant(28e9, 1.0).unwrap();
        assert!(close(q, -61.39, 0.01), "q = {q}");
    }

    #[test]
    fn path_gain_reference_doubling_drops_six_db() {
        let q1 = path_gain_constant(28e9, 1.0).unwrap();
        let q2 = path_gain_constant(28e9, 2.0).unwrap();
        assert!(close(q1 - q2, 20.0 * 2f64.log10(), 1e-12));
    }

    #[test]
    fn path_gain_rejects_nonpositive_inputs() {
        assert!(path_gain_constant(0.0, 1.0).is_err());
        assert!(path_gain_constant(28e9, -1.0).is_err());
    }

    #[test]
    fn path_loss_at_reference_distance_is_negated_gain() {
        let link = LinkConfig::for_scenario(Scenario::Urban, 1.0);
        let pl = path_loss_db(&link, 0.0, 0.0, 0.0).unwrap();
        let q = path_gain_constant(link.frequency_hz, link.reference_distance_m).unwrap();
        assert!(close(pl, -q, 1e-12));
    }

    #[test]
    fn path_loss_hand_evaluated_at_100_m() {
        // 61.39 + 35·log10(100) with the 28 GHz constant.
        let link = LinkConfig::for_scenario(Scenario::Urban, 100.0);
        let pl = path_loss_db(&link, 0.0, 0.0, 0.0).unwrap();
        assert!(close(pl, 131.39, 0.01), "pl = {pl}");
    }

    #[test]
    fn path_loss_distance_doubling_adds_log_law_step() {
        let link = LinkConfig::for_scenario(Scenario::Urban, 50.0);
        let pl1 = path_loss_db(&link, 0.0, 0.0, 0.0).unwrap();
        let pl2 = path_loss_db(&link.with_distance(100.0), 0.0, 0.0, 0.0).unwrap();
        assert!(close(pl2 - pl1, 10.0 * 3.5 * 2f64.log10(), 1e-9));
    }

    #[test]
    fn path_loss_rejects_distance_below_reference() {
        let mut link = LinkConfig::for_scenario(Scenario::Urban, 0.5);
        link.reference_distance_m = 1.0;
        assert!(path_loss_db(&link, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn path_loss_monotone_in_distance_and_rain() {
        let link = LinkConfig::for_scenario(Scenario::Rural, 10.0);
        let mut prev = f64::NEG_INFINITY;
        for d in [10.0, 20.0, 50.0, 100.0, 250.0] {
            let pl = path_loss_db(&link.with_distance(d), 0.0, 0.0, 0.0).unwrap();
            assert!(pl > prev);
            prev = pl;
        }
        let base = path_loss_db(&link, 0.0, 0.0, 0.0).unwrap();
        for rain in [0.0, 1.0, 2.25, 10.0] {
            let pl = path_loss_db(&link, 0.0, rain, 0.0).unwrap();
            assert!(close(pl, base + rain, 1e-12));
        }
    }

    #[test]
    fn shadowing_deterministic_returns_mean() {
        let model = ShadowingModel::deterministic(3.0);
        let mut rng = rng_from_seed(1);
        for _ in 0..10 {
            assert_eq!(shadowing_value(&model, &mut rng), 3.0);
        }
    }

    #[test]
    fn shadowing_sampled_degenerate_sigma_returns_mean() {
        let model = ShadowingModel::sampled(2.5, 0.0);
        let mut rng = rng_from_seed(1);
        for _ in 0..10 {
            assert_eq!(shadowing_value(&model, &mut rng), 2.5);
        }
    }

    #[test]
    fn shadowing_sampled_moments_match_the_model() {
        let model = ShadowingModel::sampled(0.0, 4.0);
        let mut rng = rng_from_seed(314);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| shadowing_value(&model, &mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.05, "sample mean {mean}");
        assert!(
            (var.sqrt() - 4.0).abs() / 4.0 < 0.02,
            "sample std {}",
            var.sqrt()
        );
    }

    #[test]
    fn snr_hand_evaluated_with_default_radio() {
        // 13.0103 dBm - 131.39 dB + 106 dBm.
        let link = LinkConfig::for_scenario(Scenario::Urban, 100.0);
        let pl = path_loss_db(&link, 0.0, 0.0, 0.0).unwrap();
        let snr = snr_db(&link, pl);
        assert!(close(snr, -12.38, 0.01), "snr = {snr}");
    }

    #[test]
    fn snr_zero_at_balance_point() {
        let link = LinkConfig::for_scenario(Scenario::Urban, 100.0);
        let balance = watts_to_dbm(link.tx_power_w) - link.noise_power_dbm;
        assert!(close(snr_db(&link, balance), 0.0, 1e-12));
    }

    #[test]
    fn snr_shifts_linearly_with_extra_attenuation() {
        let link = LinkConfig::for_scenario(Scenario::Urban, 100.0);
        let pl = path_loss_db(&link, 0.0, 0.0, 0.0).unwrap();
        for x in [0.5, 2.25, 30.0] {
            assert!(close(snr_db(&link, pl + x), snr_db(&link, pl) - x, 1e-12));
        }
    }

    #[test]
    fn capacity_known_points() {
        assert_eq!(capacity_bps(f64::NEG_INFINITY, 8e8), 0.0);
        assert!(close(capacity_bps(0.0, 8e8), 8.0e8, 1e-3));
        let snr3 = 10.0 * 3f64.log10();
        assert!(close(capacity_bps(snr3, 8e8), 1.6e9, 1.0));
    }

    #[test]
    fn capacity_monotone_and_bandwidth_homogeneous() {
        let mut prev = -1.0;
        for snr in [-30.0, -10.0, 0.0, 10.0, 30.0] {
            let c = capacity_bps(snr, 8e8);
            assert!(c > prev);
            prev = c;
        }
        let c1 = capacity_bps(5.0, 1e8);
        let c2 = capacity_bps(5.0, 3e8);
        assert!(close(c2, 3.0 * c1, 1e-6));
    }

    #[test]
    fn energy_efficiency_known_points() {
        assert!(close(energy_efficiency(1e9, 0.02).unwrap(), 5e10, 1e-3));
        assert_eq!(energy_efficiency(0.0, 0.02).unwrap(), 0.0);
        let full = energy_efficiency(1e9, 0.02).unwrap();
        let half = energy_efficiency(1e9, 0.01).unwrap();
        assert!(close(half, 2.0 * full, 1e-3));
        assert!(energy_efficiency(1e9, 0.0).is_err());
    }

    #[test]
    fn watts_dbm_roundtrip() {
        for p in [1e-6, 0.02, 1.0, 40.0] {
            let back = dbm_to_watts(watts_to_dbm(p));
            assert!(close(back, p, p * 1e-12));
        }
        assert!(close(watts_to_dbm(0.02), 13.0103, 1e-4));
    }
}
