//! Cross-module pipeline properties: the step-by-step budget chain agrees
//! with a fused closed form, experiment reruns are value-identical, and the
//! nine-digit CSV rendering round-trips.

use proptest::prelude::*;

use rainfade::channel::{self, LinkConfig, Scenario};
use rainfade::config::Config;
use rainfade::experiment::{self, format_value, ExperimentName, ExperimentSpec};
use rainfade::rain::CoefficientTable;

/// Single-expression capacity oracle, independent of the step chain.
fn fused_capacity_bps(link: &LinkConfig, shadow_db: f64, rain_db: f64, thermal_db: f64) -> f64 {
    let wavelength = channel::SPEED_OF_LIGHT_M_S / link.frequency_hz;
    link.bandwidth_hz
        * (1.0
            + 10f64.powf(
                (10.0 * (link.tx_power_w * 1e3).log10()
                    - (-20.0
                        * (wavelength / (4.0 * std::f64::consts::PI * link.reference_distance_m))
                            .log10()
                        + 10.0
                            * link.path_loss_exponent
                            * (link.distance_m / link.reference_distance_m).log10()
                        + shadow_db
                        + rain_db
                        + thermal_db)
                    - link.noise_power_dbm)
                    / 10.0,
            ))
        .log2()
}

proptest! {
    #[test]
    fn chain_identity_against_fused_formula(
        distance_m in 1.0f64..1000.0,
        freq_ghz in 1.0f64..100.0,
        psi in 1.6f64..6.5,
        shadow_db in -10.0f64..10.0,
        rain_db in 0.0f64..60.0,
        thermal_db in 0.0f64..5.0,
        urban in proptest::bool::ANY,
    ) {
        let scenario = if urban { Scenario::Urban } else { Scenario::Rural };
        let mut link = LinkConfig::for_scenario(scenario, distance_m);
        link.frequency_hz = freq_ghz * 1e9;
        link.path_loss_exponent = psi;

        let stepped = channel::link_capacity_bps(&link, shadow_db, rain_db, thermal_db).unwrap();
        let fused = fused_capacity_bps(&link, shadow_db, rain_db, thermal_db);
        let scale = stepped.abs().max(fused.abs()).max(f64::MIN_POSITIVE);
        prop_assert!(((stepped - fused) / scale).abs() < 1e-9);
    }

    #[test]
    fn nine_digit_rendering_round_trips(v in -1e12f64..1e12) {
        let rendered = format_value(v);
        let parsed: f64 = rendered.parse().unwrap();
        // Nine significant digits bound the relative error.
        if v != 0.0 {
            prop_assert!(((parsed - v) / v).abs() < 5e-9);
        }
        prop_assert_eq!(format_value(parsed), rendered);
    }
}

#[test]
fn library_level_experiment_rerun_is_value_identical() {
    let config = Config::default();
    let table = CoefficientTable::builtin();
    for name in [
        ExperimentName::SecrecyVsDistance,
        ExperimentName::MissrateVsAttempts,
        ExperimentName::DeploymentSnapshot,
    ] {
        let spec = ExperimentSpec::default_for(name);
        let a = experiment::run_experiment(&spec, &config, &table).unwrap();
        let b = experiment::run_experiment(&spec, &config, &table).unwrap();
        assert_eq!(a.len(), b.len());
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.metric_name, rb.metric_name);
            assert_eq!(
                ra.metric_value.to_bits(),
                rb.metric_value.to_bits(),
                "{name}"
            );
        }
        let csv_a = experiment::csv_string(&a).unwrap();
        let csv_b = experiment::csv_string(&b).unwrap();
        assert_eq!(csv_a, csv_b);
    }
}

#[test]
fn sweep_errors_carry_the_offending_point() {
    // Frequencies beyond the coefficient window fail once rain is applied;
    // the error names the sweep point.
    let config = Config::default();
    let table = CoefficientTable::builtin();
    let mut spec = ExperimentSpec::default_for(ExperimentName::SecrecyVsFrequency);
    spec.sweep = experiment::SweepGrid::new(90e9, 120e9, 10e9);
    let err = experiment::run_experiment(&spec, &config, &table).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("sweep point"), "{msg}");
    assert!(
        msg.contains("1.1e11") || msg.contains("110000000000"),
        "{msg}"
    );
}
