//! Browser bindings for the rainfade toolkit.
//!
//! Three interactive operations back the demo page in `www/`:
//! secrecy-versus-distance curves, the rain specific-attenuation explorer,
//! and the seeded RRC attack simulator. Each returns a JSON string that the
//! page renders onto canvases; all numeric work happens in the core crate.

use wasm_bindgen::prelude::*;

use rainfade::attack::{run_rrc_attack, AttackConfig, AttackMode};
use rainfade::channel::Scenario;
use rainfade::config::Config;
use rainfade::experiment::{eavesdropper_capacity_bps, user_capacity_bps};
use rainfade::missrate::empirical_missrate;
use rainfade::rain::{self, CoefficientTable, RainConfig};
use rainfade::secrecy::secrecy_capacity;

fn parse_scenario(s: &str) -> Result<Scenario, JsError> {
    match s {
        "urban" => Ok(Scenario::Urban),
        "rural" => Ok(Scenario::Rural),
        other => Err(JsError::new(&format!("unknown scenario {other:?}"))),
    }
}

fn parse_mode(s: &str) -> Result<AttackMode, JsError> {
    match s {
        "hd" => Ok(AttackMode::Hd),
        "fd" => Ok(AttackMode::Fd),
        other => Err(JsError::new(&format!("unknown mode {other:?}"))),
    }
}

fn to_js(e: rainfade::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Secrecy rate against distance with and without artificial rain.
///
/// Returns `{"distances_m": [...], "clear_bps": [...], "rained_bps": [...],
/// "rain_penalty_db": x, "eavesdropper_bps": y}`.
#[wasm_bindgen]
pub fn secrecy_vs_distance(
    frequency_ghz: f64,
    rain_rate_mm_hr: f64,
    scenario: &str,
    eavesdropper_distance_m: f64,
) -> Result<String, JsError> {
    let scenario = parse_scenario(scenario)?;
    let mut config = Config::default();
    config.link.frequency_hz = frequency_ghz * 1e9;
    config.rain.rain_rate_mm_hr = rain_rate_mm_hr;
    config.secrecy.eavesdropper_distance_m = eavesdropper_distance_m;
    config.validate().map_err(to_js)?;
    let table = CoefficientTable::builtin();

    let c_eav =
        eavesdropper_capacity_bps(&config, scenario, config.link.frequency_hz).map_err(to_js)?;
    let penalty = rain::rain_penalty_db(config.link.frequency_hz, &config.rain_config(), &table)
        .map_err(to_js)?;

    let mut distances = Vec::new();
    let mut clear = Vec::new();
    let mut rained = Vec::new();
    let mut d = 10.0;
    while d <= 250.0 {
        let c_clear = user_capacity_bps(
            &config,
            &table,
            scenario,
            d,
            config.link.frequency_hz,
            false,
        )
        .map_err(to_js)?;
        let c_rained =
            user_capacity_bps(&config, &table, scenario, d, config.link.frequency_hz, true)
                .map_err(to_js)?;
        distances.push(d);
        clear.push(secrecy_capacity(c_clear, c_eav));
        rained.push(secrecy_capacity(c_rained, c_eav));
        d += 5.0;
    }

    Ok(serde_json::json!({
        "distances_m": distances,
        "clear_bps": clear,
        "rained_bps": rained,
        "rain_penalty_db": penalty,
        "eavesdropper_bps": c_eav,
    })
    .to_string())
}

/// Specific attenuation against rain rate at one carrier frequency.
///
/// Returns `{"rates_mm_hr": [...], "specific_db_per_km": [...],
/// "theta": t, "epsilon": e}` using horizontal polarization geometry.
#[wasm_bindgen]
pub fn rain_attenuation_curve(frequency_ghz: f64) -> Result<String, JsError> {
    let table = CoefficientTable::builtin();
    let frequency_hz = frequency_ghz * 1e9;
    let coeffs = rain::power_law_coefficients(frequency_hz, &table).map_err(to_js)?;
    let (theta, epsilon) = rain::effective_coefficients(&coeffs, 0.0, 0.0).map_err(to_js)?;

    let mut rates = Vec::new();
    let mut specific = Vec::new();
    let mut rate = 0.0;
    while rate <= 150.0 {
        let rain = RainConfig {
            rain_rate_mm_hr: rate,
            ..RainConfig::default()
        };
        rates.push(rate);
        specific.push(rain::specific_attenuation(frequency_hz, &rain, &table).map_err(to_js)?);
        rate += 2.5;
    }

    Ok(serde_json::json!({
        "rates_mm_hr": rates,
        "specific_db_per_km": specific,
        "theta": theta,
        "epsilon": epsilon,
    })
    .to_string())
}

/// One seeded RRC attack run plus an empirical miss rate over many runs.
///
/// Returns `{"trace": "...", "outcome": "...", "cycles_used": n,
/// "empirical_missrate": r, "runs": k}`.
#[wasm_bindgen]
pub fn attack_simulation(
    mode: &str,
    p_downlink_success: f64,
    p_uplink_success: f64,
    ping_flood_ttis: u32,
    max_cycles: u32,
    seed: u64,
    missrate_runs: u32,
) -> Result<String, JsError> {
    let mode = parse_mode(mode)?;
    let base = AttackConfig {
        mode,
        p_downlink_success,
        p_uplink_success,
        ping_flood_ttis: ping_flood_ttis as u64,
        max_cycles,
        seed,
        ..AttackConfig::default()
    };
    let trace = run_rrc_attack(&base).map_err(to_js)?;

    let runs = missrate_runs.max(1);
    let traces: Vec<_> = (0..runs as u64)
        .map(|k| {
            run_rrc_attack(&AttackConfig {
                seed: seed.wrapping_add(k),
                max_cycles: 1,
                ..base
            })
        })
        .collect::<rainfade::Result<_>>()
        .map_err(to_js)?;
    let missrate = empirical_missrate(&traces).map_err(to_js)?;

    Ok(serde_json::json!({
        "trace": trace.to_text(),
        "outcome": trace.outcome.to_string(),
        "cycles_used": trace.cycles_used,
        "empirical_missrate": missrate,
        "runs": runs,
    })
    .to_string())
}
