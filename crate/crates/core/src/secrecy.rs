//! Secrecy capacity, attack feasibility, minimum-rain-attenuation search,
//! and the attacker sensitivity metric.
//!
//! Secrecy capacity is the clamped difference between the legitimate user's
//! and the eavesdropper's channel capacities. Artificial rain degrades the
//! legitimate user's SNR dB-for-dB; the eavesdropper, positioned at the
//! boundary of the rained area, is unaffected by default (an explicit
//! eavesdropper-side attenuation knob exists in the configuration layer).

use crate::attack::AttackMode;
use crate::channel::{self, LinkConfig};
use crate::error::{Error, Result};

/// Upper bound of the minimum-attenuation search, dB.
pub const AR_SEARCH_CEILING_DB: f64 = 300.0;

/// Termination width of the bisection bracket, dB.
pub const AR_SEARCH_RESOLUTION_DB: f64 = 0.01;

/// Default "just above" sensitivity step η: one capacity-resolution unit.
pub const DEFAULT_CAPACITY_RESOLUTION_BPS: f64 = 1e6;

/// Capacities entering one secrecy decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyContext {
    pub user_capacity_bps: f64,
    pub eavesdropper_capacity_bps: f64,
    pub threshold_capacity_bps: f64,
}

impl SecrecyContext {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("user_capacity_bps", self.user_capacity_bps),
            ("eavesdropper_capacity_bps", self.eavesdropper_capacity_bps),
            ("threshold_capacity_bps", self.threshold_capacity_bps),
        ] {
            if v.is_nan() || v < 0.0 {
                return Err(Error::validation(field, "must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn secrecy_capacity_bps(&self) -> f64 {
        secrecy_capacity(self.user_capacity_bps, self.eavesdropper_capacity_bps)
    }

    pub fn attack_feasible(&self) -> bool {
        attack_feasible(self.secrecy_capacity_bps(), self.threshold_capacity_bps)
    }
}

/// Secrecy capacity in bit/s: `max(C_user - C_eavesdropper, 0)`.
pub fn secrecy_capacity(c_user_bps: f64, c_eav_bps: f64) -> f64 {
    (c_user_bps - c_eav_bps).max(0.0)
}

/// The link is compromised when secrecy falls strictly below the threshold.
pub fn attack_feasible(c_s_bps: f64, c_t_bps: f64) -> bool {
    c_s_bps < c_t_bps
}

/// Secrecy capacity of the link with `rain_db` of rain attenuation applied
/// to the legitimate user's SNR. Shadowing and thermal offsets are taken as
/// zero here; use [`ar_degraded_secrecy_with`] to supply them.
pub fn ar_degraded_secrecy(link: &LinkConfig, rain_db: f64, c_eav_bps: f64) -> Result<f64> {
    ar_degraded_secrecy_with(link, 0.0, 0.0, rain_db, c_eav_bps)
}

/// As [`ar_degraded_secrecy`] with explicit shadowing and thermal offsets.
pub fn ar_degraded_secrecy_with(
    link: &LinkConfig,
    shadow_db: f64,
    thermal_db: f64,
    rain_db: f64,
    c_eav_bps: f64,
) -> Result<f64> {
    if rain_db < 0.0 {
        return Err(Error::domain("rain attenuation must be non-negative"));
    }
    let c_user = channel::link_capacity_bps(link, shadow_db, rain_db, thermal_db)?;
    Ok(secrecy_capacity(c_user, c_eav_bps))
}

/// Minimum rain attenuation (dB) that drives the link's secrecy capacity
/// strictly below `c_t_bps`; 0 when the attack is already feasible.
///
/// Found by bisection to a 0.01 dB bracket. The degraded secrecy is
/// non-increasing in attenuation, so the returned upper bracket edge
/// satisfies the threshold inequality while a value 0.02 dB lower does not.
///
/// Errors with [`Error::SearchExhausted`] when even 300 dB cannot reach the
/// target (e.g. a zero threshold, which no attenuation can satisfy).
pub fn required_ar_attenuation(link: &LinkConfig, c_eav_bps: f64, c_t_bps: f64) -> Result<f64> {
    let degraded = |rain_db: f64| ar_degraded_secrecy(link, rain_db, c_eav_bps);

    if attack_feasible(degraded(0.0)?, c_t_bps) {
        return Ok(0.0);
    }
    if !attack_feasible(degraded(AR_SEARCH_CEILING_DB)?, c_t_bps) {
        return Err(Error::SearchExhausted {
            ceiling_db: AR_SEARCH_CEILING_DB,
        });
    }

    // Invariant: not feasible at lo, feasible at hi.
    let mut lo = 0.0;
    let mut hi = AR_SEARCH_CEILING_DB;
    while hi - lo > AR_SEARCH_RESOLUTION_DB {
        let mid = 0.5 * (lo + hi);
        if attack_feasible(degraded(mid)?, c_t_bps) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Minimum eavesdropper capacity (bit/s) that makes the attack feasible.
///
/// The attacker needs its wiretap capacity just above `C_user - C_T`; the
/// half-duplex figure adds one resolution step η, and the full-duplex figure
/// additionally needs `fd_margin_bps` of headroom for the uplink phase.
/// Returns 0 when the threshold already exceeds the user capacity.
pub fn attack_sensitivity(
    c_user_bps: f64,
    c_t_bps: f64,
    mode: AttackMode,
    fd_margin_bps: f64,
) -> f64 {
    attack_sensitivity_with_step(
        c_user_bps,
        c_t_bps,
        mode,
        fd_margin_bps,
        DEFAULT_CAPACITY_RESOLUTION_BPS,
    )
}

/// As [`attack_sensitivity`] with an explicit resolution step η.
pub fn attack_sensitivity_with_step(
    c_user_bps: f64,
    c_t_bps: f64,
    mode: AttackMode,
    fd_margin_bps: f64,
    resolution_step_bps: f64,
) -> f64 {
    if c_t_bps >= c_user_bps {
        return 0.0;
    }
    let hd = c_user_bps - c_t_bps + resolution_step_bps;
    match mode {
        AttackMode::Hd => hd,
        AttackMode::Fd => hd + fd_margin_bps.max(0.0),
    }
}
