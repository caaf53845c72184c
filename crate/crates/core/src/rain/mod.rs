//! Rain attenuation: power-law specific attenuation with frequency-dependent
//! coefficients, polarization/path-geometry mixing, and conversion of a rain
//! rate into a dB path penalty.
//!
//! Specific attenuation follows `γ = θ·R^ε` (dB/km) with R the rain rate in
//! mm/hr and (θ, ε) evaluated per polarization from the coefficient table,
//! then mixed for the actual path geometry. Total path attenuation is the
//! specific attenuation times the rained path depth in km; the toolkit treats
//! attenuation as additive in dB over concatenated segments.

mod coefficients;

pub use coefficients::{
    CoefficientTable, PowerLawCoefficients, BUILTIN_COEFFICIENT_DATA, FREQUENCY_WINDOW_GHZ,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rain state for one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RainConfig {
    /// Rain rate R, mm/hr.
    pub rain_rate_mm_hr: f64,
    /// Path elevation angle α, degrees.
    pub path_elevation_deg: f64,
    /// Polarization tilt angle β relative to horizontal, degrees.
    pub polarization_tilt_deg: f64,
    /// Rained path depth d_R, km (scattering + absorption + polarization
    /// depths combined; the components are summed at config parse time).
    pub rain_path_depth_km: f64,
    /// When false, downstream attenuation is exactly 0 dB.
    pub enabled: bool,
}

impl RainConfig {
    /// Rain switched off entirely.
    pub fn disabled() -> Self {
        RainConfig {
            rain_rate_mm_hr: 0.0,
            path_elevation_deg: 0.0,
            polarization_tilt_deg: 0.0,
            rain_path_depth_km: 0.0,
            enabled: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rain_rate_mm_hr < 0.0 {
            return Err(Error::validation("rain_rate_mm_hr", "must be non-negative"));
        }
        if self.rain_path_depth_km < 0.0 {
            return Err(Error::validation(
                "rain_path_depth_km",
                "must be non-negative",
            ));
        }
        if !(0.0..=90.0).contains(&self.path_elevation_deg) {
            return Err(Error::validation(
                "path_elevation_deg",
                "must lie in [0, 90]",
            ));
        }
        if !(-90.0..=90.0).contains(&self.polarization_tilt_deg) {
            return Err(Error::validation(
                "polarization_tilt_deg",
                "must lie in [-90, 90]",
            ));
        }
        Ok(())
    }
}

impl Default for RainConfig {
    /// 50 mm/hr over a 0.25 km horizontal path, horizontal polarization.
    fn default() -> Self {
        RainConfig {
            rain_rate_mm_hr: 50.0,
            path_elevation_deg: 0.0,
            polarization_tilt_deg: 0.0,
            rain_path_depth_km: 0.25,
            enabled: true,
        }
    }
}

/// Per-polarization power-law coefficients at `frequency_hz`.
pub fn power_law_coefficients(
    frequency_hz: f64,
    table: &CoefficientTable,
) -> Result<PowerLawCoefficients> {
    table.coefficients_at(frequency_hz)
}

/// Mix the per-polarization coefficients for the path geometry:
///
/// `θ = (θ_H + θ_V + (θ_H - θ_V)·cos²α·cos2β) / 2`
/// `ε = (θ_H·ε_H + θ_V·ε_V + (θ_H·ε_H - θ_V·ε_V)·cos²α·cos2β) / (2θ)`
pub fn effective_coefficients(
    coeffs: &PowerLawCoefficients,
    path_elevation_deg: f64,
    polarization_tilt_deg: f64,
) -> Result<(f64, f64)> {
    if coeffs.theta_h <= 0.0 || coeffs.theta_v <= 0.0 {
        return Err(Error::domain(
            "effective coefficients: multipliers must be positive",
        ));
    }
    let alpha = path_elevation_deg.to_radians();
    let beta = polarization_tilt_deg.to_radians();
    let mix = alpha.cos().powi(2) * (2.0 * beta).cos();

    let theta = (coeffs.theta_h + coeffs.theta_v + (coeffs.theta_h - coeffs.theta_v) * mix) / 2.0;
    if theta == 0.0 {
        return Err(Error::domain("effective coefficients: zero denominator"));
    }
    let weighted_h = coeffs.theta_h * coeffs.epsilon_h;
    let weighted_v = coeffs.theta_v * coeffs.epsilon_v;
    let epsilon = (weighted_h + weighted_v + (weighted_h - weighted_v) * mix) / (2.0 * theta);
    Ok((theta, epsilon))
}

/// Specific attenuation `θ·R^ε` in dB/km; exactly 0 when rain is disabled
/// or the rain rate is zero.
pub fn specific_attenuation(
    frequency_hz: f64,
    rain: &RainConfig,
    table: &CoefficientTable,
) -> Result<f64> {
    rain.validate()?;
    if !rain.enabled {
        return Ok(0.0);
    }
    let coeffs = power_law_coefficients(frequency_hz, table)?;
    if rain.rain_rate_mm_hr == 0.0 {
        return Ok(0.0);
    }
    let (theta, epsilon) =
        effective_coefficients(&coeffs, rain.path_elevation_deg, rain.polarization_tilt_deg)?;
    Ok(theta * rain.rain_rate_mm_hr.powf(epsilon))
}

/// Path attenuation in dB: specific attenuation times the rained depth.
/// Additive over concatenated path segments.
pub fn path_attenuation_db(specific_db_per_km: f64, depth_km: f64) -> f64 {
    specific_db_per_km * depth_km
}

/// Total rain penalty of a link in dB (specific attenuation over the
/// configured rained depth); 0 when rain is disabled.
pub fn rain_penalty_db(
    frequency_hz: f64,
    rain: &RainConfig,
    table: &CoefficientTable,
) -> Result<f64> {
    let specific = specific_attenuation(frequency_hz, rain, table)?;
    Ok(path_attenuation_db(specific, rain.rain_path_depth_km))
}
