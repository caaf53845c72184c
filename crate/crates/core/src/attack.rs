//! Discrete TTI-indexed state machine for the RRC-setup spoofing attack,
//! plus the worst-CSI target selector and the signal-level helpers for the
//! ping-flood and artificial-noise phases.
//!
//! One attack cycle follows the RRC-setup timeline:
//!
//! ```text
//! tti   1      2 .. n      n+1             n+2           n+3
//!       |      |           |               |             |
//!       rrc    ping flood  spoof attempt   AN intrusion  rrc complete
//!       request                            (on success)  (on success)
//! ```
//!
//! The request at tti 1 is sent once. A failed spoof restarts the cycle at
//! the ping phase, so every failed cycle consumes exactly `ping_flood_ttis`
//! TTIs (`n-1` pings plus the spoof) and a first-cycle success spans
//! `ping_flood_ttis + 3` TTIs. In half-duplex mode the spoof is a single
//! downlink Bernoulli trial; full-duplex additionally needs an uplink
//! success in the same cycle.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::{path_gain_constant, Profiles, Scenario};
use crate::error::{Error, Result};
use crate::rng::{self, SimRng};

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Which legs of the exchange the attack targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackMode {
    /// Downlink only.
    Hd,
    /// Uplink and downlink.
    Fd,
}

impl fmt::Display for AttackMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackMode::Hd => "hd",
            AttackMode::Fd => "fd",
        })
    }
}

/// Parameters of one attack run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackConfig {
    pub mode: AttackMode,
    /// Per-cycle downlink spoof success probability b_DL; the miss
    /// probability is its complement.
    pub p_downlink_success: f64,
    /// Per-cycle uplink success probability (full-duplex only).
    pub p_uplink_success: f64,
    /// Timeline length n of the ping phase; pings occupy TTIs 2..=n.
    pub ping_flood_ttis: u64,
    /// Retry budget.
    pub max_cycles: u32,
    /// Artificial-noise transmit power, W.
    pub an_power_w: f64,
    /// Seed of the run's random source.
    pub seed: u64,
}

impl AttackConfig {
    pub fn validate(&self) -> Result<()> {
        for (field, p) in [
            ("p_downlink_success", self.p_downlink_success),
            ("p_uplink_success", self.p_uplink_success),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(field, "must lie in [0, 1]"));
            }
        }
        if self.ping_flood_ttis < 1 {
            return Err(Error::validation("ping_flood_ttis", "must be at least 1"));
        }
        if self.max_cycles < 1 {
            return Err(Error::validation("max_cycles", "must be at least 1"));
        }
        if self.an_power_w < 0.0 {
            return Err(Error::validation("an_power_w", "must be non-negative"));
        }
        Ok(())
    }
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig {
            mode: AttackMode::Hd,
            p_downlink_success: 0.7,
            p_uplink_success: 0.9,
            ping_flood_ttis: 5,
            max_cycles: 10,
            an_power_w: 0.02,
            seed: 7,
        }
    }
}

// ---------------------------------------------------------------------------
// Trace
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttackEvent {
    RrcRequest,
    PingFlood,
    SpoofAttempt { success: bool },
    AnIntrusion,
    RrcComplete,
}

impl AttackEvent {
    fn kind(&self) -> &'static str {
        match self {
            AttackEvent::RrcRequest => "rrc_request",
            AttackEvent::PingFlood => "ping_flood",
            AttackEvent::SpoofAttempt { .. } => "spoof_attempt",
            AttackEvent::AnIntrusion => "an_intrusion",
            AttackEvent::RrcComplete => "rrc_complete",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub tti: u64,
    pub event: AttackEvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackOutcome {
    Connected,
    Exhausted,
}

impl fmt::Display for AttackOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackOutcome::Connected => "connected",
            AttackOutcome::Exhausted => "exhausted",
        })
    }
}

/// Ordered TTI event log of one attack run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackTrace {
    pub events: Vec<TraceEvent>,
    pub outcome: AttackOutcome,
    pub cycles_used: u32,
}

impl AttackTrace {
    /// Spoof attempt outcomes in timeline order.
    pub fn spoof_attempts(&self) -> impl Iterator<Item = bool> + '_ {
        self.events.iter().filter_map(|e| match e.event {
            AttackEvent::SpoofAttempt { success } => Some(success),
            _ => None,
        })
    }

    pub fn connected(&self) -> bool {
        self.outcome == AttackOutcome::Connected
    }

    /// Line-oriented text form: one `tti=<k> event=<kind>` line per event
    /// and a trailing `outcome=` line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&format!("tti={} event={}", e.tti, e.event.kind()));
            if let AttackEvent::SpoofAttempt { success } = e.event {
                out.push_str(&format!(" success={success}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "outcome={} cycles_used={}\n",
            self.outcome, self.cycles_used
        ));
        out
    }
}

impl fmt::Display for AttackTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// ---------------------------------------------------------------------------
// Target selection
// ---------------------------------------------------------------------------

/// One deployed user, identified by position and environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserNode {
    pub id: u32,
    pub distance_m: f64,
    pub scenario: Scenario,
}

impl UserNode {
    pub fn new(id: u32, distance_m: f64, scenario: Scenario) -> Self {
        UserNode {
            id,
            distance_m,
            scenario,
        }
    }

    /// CSI proxy: the user's deterministic path loss in dB at the given
    /// carrier. Recomputed on every call, so it can never go stale.
    pub fn csi_score_db(
        &self,
        frequency_hz: f64,
        reference_distance_m: f64,
        profiles: &Profiles,
    ) -> Result<f64> {
        if !self.distance_m.is_finite() || self.distance_m < reference_distance_m {
            return Err(Error::domain(format!(
                "user {}: distance below the reference distance",
                self.id
            )));
        }
        let q_db = path_gain_constant(frequency_hz, reference_distance_m)?;
        let profile = profiles.profile(self.scenario);
        Ok(-q_db
            + 10.0 * profile.path_loss_exponent * (self.distance_m / reference_distance_m).log10()
            + profile.shadow_mu_db)
    }
}

/// The user with the most degraded CSI (maximum path loss); ties broken by
/// the smallest id.
pub fn select_target<'a>(
    users: &'a [UserNode],
    frequency_hz: f64,
    reference_distance_m: f64,
    profiles: &Profiles,
) -> Result<&'a UserNode> {
    if users.is_empty() {
        return Err(Error::domain("target selection: no users deployed"));
    }
    let mut best: Option<(&UserNode, f64)> = None;
    for user in users {
        let score = user.csi_score_db(frequency_hz, reference_distance_m, profiles)?;
        best = match best {
            None => Some((user, score)),
            Some((cur, cur_score)) => {
                if score > cur_score || (score == cur_score && user.id < cur.id) {
                    Some((user, score))
                } else {
                    Some((cur, cur_score))
                }
            }
        };
    }
    Ok(best.unwrap().0)
}

// ---------------------------------------------------------------------------
// Signal-level helpers
// ---------------------------------------------------------------------------

/// Accumulated ping-flood energy over the ping phase of an n-TTI timeline.
///
/// The sum runs over the `n-1` ping TTIs; each contributes the received
/// ping amplitude (channel gain times the square root of the ping power)
/// plus one noise sample. `noise_samples` must therefore hold `n-1` values.
pub fn ping_flood_accumulate(
    n: u64,
    channel_gain: f64,
    ping_power_w: f64,
    noise_samples: &[f64],
) -> Result<f64> {
    if n < 1 {
        return Err(Error::domain("ping flood: n must be at least 1"));
    }
    let expected = (n - 1) as usize;
    if noise_samples.len() != expected {
        return Err(Error::domain(format!(
            "ping flood: expected {expected} noise samples, got {}",
            noise_samples.len()
        )));
    }
    let amplitude = channel_gain * ping_power_w.sqrt();
    Ok(noise_samples.iter().map(|noise| amplitude + noise).sum())
}

/// Default SINR threshold below which the artificial-noise victim cannot
/// decode and therefore never answers, dB.
pub const DEFAULT_AN_DECODE_THRESHOLD_DB: f64 = 0.0;

/// SINR at the jammed receiver in dB: signal over artificial noise plus
/// thermal noise, each through its own channel gain.
pub fn an_sinr_db(
    signal_gain_db: f64,
    signal_power_w: f64,
    an_gain_db: f64,
    an_power_w: f64,
    noise_power_dbm: f64,
) -> f64 {
    let signal_w = signal_power_w * 10f64.powf(signal_gain_db / 10.0);
    let interference_w = an_power_w * 10f64.powf(an_gain_db / 10.0);
    let noise_w = 10f64.powf(noise_power_dbm / 10.0) * 1e-3;
    10.0 * (signal_w / (interference_w + noise_w)).log10()
}

/// Whether the jammed receiver fails to decode at the given SINR.
pub fn an_decode_fails(sinr_db: f64, threshold_db: f64) -> bool {
    sinr_db < threshold_db
}

// ---------------------------------------------------------------------------
// Attack run
// ---------------------------------------------------------------------------

/// Run one seeded attack to completion.
///
/// The random source is derived from `config.seed`, so identical
/// configurations produce bit-identical traces. In full-duplex mode the
/// downlink draw comes first, so half- and full-duplex runs on the same
/// seed share their first-cycle downlink outcome.
pub fn run_rrc_attack(config: &AttackConfig) -> Result<AttackTrace> {
    config.validate()?;
    let mut rng = rng::rng_from_seed(config.seed);
    Ok(run_rrc_attack_with(config, &mut rng))
}

fn run_rrc_attack_with(config: &AttackConfig, rng: &mut SimRng) -> AttackTrace {
    let n = config.ping_flood_ttis;
    let mut events = Vec::new();
    let mut tti: u64 = 1;
    events.push(TraceEvent {
        tti,
        event: AttackEvent::RrcRequest,
    });

    for cycle in 1..=config.max_cycles {
        for _ in 0..n.saturating_sub(1) {
            tti += 1;
            events.push(TraceEvent {
                tti,
                event: AttackEvent::PingFlood,
            });
        }

        tti += 1;
        let downlink_ok = rng::bernoulli(rng, config.p_downlink_success);
        let success = match config.mode {
            AttackMode::Hd => downlink_ok,
            AttackMode::Fd => {
                let uplink_ok = rng::bernoulli(rng, config.p_uplink_success);
                downlink_ok && uplink_ok
            }
        };
        events.push(TraceEvent {
            tti,
            event: AttackEvent::SpoofAttempt { success },
        });

        if success {
            tti += 1;
            events.push(TraceEvent {
                tti,
                event: AttackEvent::AnIntrusion,
            });
            tti += 1;
            events.push(TraceEvent {
                tti,
                event: AttackEvent::RrcComplete,
            });
            return AttackTrace {
                events,
                outcome: AttackOutcome::Connected,
                cycles_used: cycle,
            };
        }
    }

    AttackTrace {
        events,
        outcome: AttackOutcome::Exhausted,
        cycles_used: config.max_cycles,
    }
}
