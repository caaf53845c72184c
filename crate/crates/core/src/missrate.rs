//! Miss-rate theory: binomial and Poisson pmfs, the analytic half/full-duplex
//! miss-rate formulas, the effectiveness metric, and the empirical estimator
//! over simulated traces.
//!
//! The half-duplex miss rate over x attempts with m downlink misses is m/x;
//! the full-duplex rate adds the uplink misses, (m + m₁)/x. The additive form
//! is kept exactly as formulated even though the two legs are modeled as
//! independent trials, so the full-duplex value can exceed 1 and is clamped
//! on output with a diagnostics flag.

use crate::attack::{AttackMode, AttackTrace};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Log-gamma (Lanczos, g = 7, 9 terms)
// ---------------------------------------------------------------------------

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for x >= 0.5.
fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x >= 0.5);
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Threshold above which factorial arithmetic switches to log space.
const LOG_SPACE_THRESHOLD: u64 = 50;

// Exact up to the i where C(i, u) stays inside f64's integer range; only
// used below LOG_SPACE_THRESHOLD.
fn binomial_coefficient(i: u64, u: u64) -> f64 {
    let u = u.min(i - u.min(i));
    let mut c = 1.0f64;
    for k in 1..=u {
        c = c * (i - u + k) as f64 / k as f64;
    }
    c
}

// ---------------------------------------------------------------------------
// Probability mass functions
// ---------------------------------------------------------------------------

/// Binomial pmf `C(i,u)·p^u·(1-p)^(i-u)`: probability of exactly `u` events
/// of per-trial probability `p` in `i` trials.
pub fn binomial_pmf(i: u64, u: u64, p: f64) -> Result<f64> {
    if u > i {
        return Err(Error::domain(format!(
            "binomial pmf: u = {u} exceeds i = {i}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "binomial pmf: p = {p} outside [0, 1]"
        )));
    }
    // Degenerate trials keep 0^0 = 1 semantics.
    if p == 0.0 {
        return Ok(if u == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if u == i { 1.0 } else { 0.0 });
    }
    let q = 1.0 - p;
    if i <= LOG_SPACE_THRESHOLD {
        Ok(binomial_coefficient(i, u) * p.powi(u as i32) * q.powi((i - u) as i32))
    } else {
        let ln_choose =
            ln_gamma((i + 1) as f64) - ln_gamma((u + 1) as f64) - ln_gamma((i - u + 1) as f64);
        Ok((ln_choose + u as f64 * p.ln() + (i - u) as f64 * q.ln()).exp())
    }
}

/// Probability of exactly `u` successful receptions at the intruder out of
/// `i` downlink attempts with per-attempt success probability `b_dl`.
/// Success and miss swap roles relative to [`binomial_pmf`].
pub fn intruder_success_pmf(i: u64, u: u64, b_dl: f64) -> Result<f64> {
    binomial_pmf(i, u, b_dl)
}

/// Poisson pmf `e^(-λ)·λ^u / u!`.
pub fn poisson_pmf(u: u64, lambda: f64) -> f64 {
    assert!(lambda >= 0.0, "poisson pmf: negative rate {lambda}");
    if lambda == 0.0 {
        return if u == 0 { 1.0 } else { 0.0 };
    }
    if u <= LOG_SPACE_THRESHOLD {
        let mut factorial = 1.0f64;
        for k in 1..=u {
            factorial *= k as f64;
        }
        (-lambda).exp() * lambda.powi(u as i32) / factorial
    } else {
        (-lambda + u as f64 * lambda.ln() - ln_gamma((u + 1) as f64)).exp()
    }
}

// ---------------------------------------------------------------------------
// Analytic miss rate
// ---------------------------------------------------------------------------

/// Attempt count and per-attempt miss probabilities of one campaign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissRateParams {
    /// Total attempts x.
    pub attempts: u64,
    /// Downlink miss probability m/x.
    pub miss_prob_downlink: f64,
    /// Uplink miss probability m₁/x (full-duplex only).
    pub miss_prob_uplink: f64,
}

impl MissRateParams {
    /// Build from missed-attempt counts.
    pub fn from_counts(attempts: u64, missed_downlink: u64, missed_uplink: u64) -> Result<Self> {
        if attempts < 1 {
            return Err(Error::validation("attempts", "must be at least 1"));
        }
        if missed_downlink > attempts || missed_uplink > attempts {
            return Err(Error::validation(
                "missed attempts",
                "cannot exceed the attempt count",
            ));
        }
        Ok(MissRateParams {
            attempts,
            miss_prob_downlink: missed_downlink as f64 / attempts as f64,
            miss_prob_uplink: missed_uplink as f64 / attempts as f64,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.attempts < 1 {
            return Err(Error::validation("attempts", "must be at least 1"));
        }
        for (field, p) in [
            ("miss_prob_downlink", self.miss_prob_downlink),
            ("miss_prob_uplink", self.miss_prob_uplink),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(field, "must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// A miss-rate value, flagged when the additive full-duplex form had to be
/// clamped into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissRate {
    pub value: f64,
    pub clamped: bool,
}

/// Analytic miss rate: half-duplex is the downlink miss probability alone;
/// full-duplex adds the uplink miss probability.
pub fn analytic_missrate(params: &MissRateParams, mode: AttackMode) -> MissRate {
    let raw = match mode {
        AttackMode::Hd => params.miss_prob_downlink,
        AttackMode::Fd => params.miss_prob_downlink + params.miss_prob_uplink,
    };
    MissRate {
        value: raw.min(1.0),
        clamped: raw > 1.0,
    }
}

// ---------------------------------------------------------------------------
// Effectiveness and the empirical estimator
// ---------------------------------------------------------------------------

/// Attack effectiveness: the reciprocal of the miss rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Effectiveness {
    /// Zero miss rate: every attempt lands.
    Unbounded,
    Finite(f64),
}

pub fn effectiveness(miss_rate: f64) -> Effectiveness {
    assert!(
        (0.0..=1.0).contains(&miss_rate),
        "effectiveness: miss rate {miss_rate} outside [0, 1]"
    );
    if miss_rate == 0.0 {
        Effectiveness::Unbounded
    } else {
        Effectiveness::Finite(1.0 / miss_rate)
    }
}

/// Fraction of failed spoof attempts across all traces.
pub fn empirical_missrate(traces: &[AttackTrace]) -> Result<f64> {
    if traces.is_empty() {
        return Err(Error::domain("empirical miss rate: no traces"));
    }
    let mut failed = 0u64;
    let mut total = 0u64;
    for trace in traces {
        for success in trace.spoof_attempts() {
            total += 1;
            failed += !success as u64;
        }
    }
    if total == 0 {
        return Err(Error::domain(
            "empirical miss rate: traces hold no spoof attempts",
        ));
    }
    Ok(failed as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::{run_rrc_attack, AttackConfig};
    use proptest::prelude::*;

    /// Independent oracle: exhaustive enumeration of all 2^i Bernoulli
    /// sequences, summing the probability of those with exactly u events.
    fn enumerated_pmf(i: u64, u: u64, p: f64) -> f64 {
        let mut total = 0.0;
        for mask in 0u64..(1u64 << i) {
            let events = mask.count_ones() as u64;
            if events == u {
                total += p.powi(events as i32) * (1.0 - p).powi((i - events) as i32);
            }
        }
        total
    }

    #[test]
    fn binomial_trivia() {
        assert_eq!(binomial_pmf(4, 0, 0.0).unwrap(), 1.0);
        assert_eq!(binomial_pmf(4, 1, 0.0).unwrap(), 0.0);
        assert_eq!(binomial_pmf(4, 4, 1.0).unwrap(), 1.0);
        assert!(binomial_pmf(4, 5, 0.3).is_err());
        assert!(binomial_pmf(4, 2, 1.3).is_err());
    }

    #[test]
    fn binomial_matches_enumeration_at_4_2_03() {
        let pmf = binomial_pmf(4, 2, 0.3).unwrap();
        assert!((pmf - 0.2646).abs() < 1e-12);
        assert!((pmf - enumerated_pmf(4, 2, 0.3)).abs() < 1e-12);
    }

    #[test]
    fn binomial_sums_to_one_through_log_space() {
        for i in [10u64, 50, 51, 64] {
            for p in [0.04, 0.3, 0.5, 0.97] {
                let sum: f64 = (0..=i).map(|u| binomial_pmf(i, u, p).unwrap()).sum();
                assert!((sum - 1.0).abs() < 1e-12, "i={i} p={p} sum={sum}");
            }
        }
    }

    #[test]
    fn log_space_is_continuous_at_the_threshold() {
        // The direct and log-gamma paths agree where they hand over.
        for u in [0u64, 10, 25, 50] {
            let direct = binomial_pmf(50, u, 0.3).unwrap();
            let ln_choose =
                ln_gamma(51.0) - ln_gamma((u + 1) as f64) - ln_gamma((50 - u + 1) as f64);
            let logged = (ln_choose + u as f64 * 0.3f64.ln() + (50 - u) as f64 * 0.7f64.ln()).exp();
            assert!((direct - logged).abs() <= 1e-12 * direct.max(1e-300));
        }
    }

    #[test]
    fn intruder_pmf_mirrors_binomial() {
        assert!((intruder_success_pmf(4, 4, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let b = intruder_success_pmf(4, 2, 0.7).unwrap();
        assert!((b - 0.2646).abs() < 1e-12);
        // u intruder successes out of i attempts is i-u device misses.
        for u in 0..=6 {
            let a = intruder_success_pmf(6, u, 0.7).unwrap();
            let b = binomial_pmf(6, 6 - u, 0.3).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn poisson_trivia_and_series_value() {
        assert_eq!(poisson_pmf(0, 0.0), 1.0);
        assert_eq!(poisson_pmf(3, 0.0), 0.0);
        assert!((poisson_pmf(2, 1.2) - 0.216_859_832_576_785_5).abs() < 1e-12);
    }

    #[test]
    fn poisson_normalizes() {
        for lambda in [0.5, 2.0, 12.0, 20.0] {
            let sum: f64 = (0..=200).map(|u| poisson_pmf(u, lambda)).sum();
            assert!((sum - 1.0).abs() < 1e-10, "lambda={lambda} sum={sum}");
        }
    }

    #[test]
    fn analytic_missrate_substitutions() {
        let p = MissRateParams::from_counts(100, 10, 5).unwrap();
        assert_eq!(analytic_missrate(&p, AttackMode::Hd).value, 0.10);
        assert!((analytic_missrate(&p, AttackMode::Fd).value - 0.15).abs() < 1e-15);
        let p0 = MissRateParams::from_counts(100, 10, 0).unwrap();
        assert_eq!(
            analytic_missrate(&p0, AttackMode::Fd).value,
            analytic_missrate(&p0, AttackMode::Hd).value
        );
    }

    #[test]
    fn additive_form_clamps_with_flag() {
        let p = MissRateParams {
            attempts: 10,
            miss_prob_downlink: 0.8,
            miss_prob_uplink: 0.7,
        };
        let fd = analytic_missrate(&p, AttackMode::Fd);
        assert_eq!(fd.value, 1.0);
        assert!(fd.clamped);
        assert!(!analytic_missrate(&p, AttackMode::Hd).clamped);
    }

    proptest! {
        // Half-duplex never misses more than full-duplex; equality exactly
        // when the uplink never misses.
        #[test]
        fn hd_miss_rate_bounded_by_fd(
            attempts in 1u64..1000,
            m_dl in 0.0f64..=1.0,
            m_ul in 0.0f64..=1.0,
        ) {
            let params = MissRateParams { attempts, miss_prob_downlink: m_dl, miss_prob_uplink: m_ul };
            let hd = analytic_missrate(&params, AttackMode::Hd).value;
            let fd = analytic_missrate(&params, AttackMode::Fd).value;
            prop_assert!(hd <= fd);
            if m_ul == 0.0 {
                prop_assert_eq!(hd, fd);
            }
            if m_ul > 0.0 && hd < 1.0 {
                prop_assert!(hd < fd);
            }
        }

        #[test]
        fn binomial_enumeration_equivalence(i in 1u64..=10, p in 0.0f64..=1.0) {
            for u in 0..=i {
                let pmf = binomial_pmf(i, u, p).unwrap();
                prop_assert!((pmf - enumerated_pmf(i, u, p)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn poisson_approximates_binomial_in_the_rare_event_regime() {
        // i = 50, p = 0.04: the two pmfs stay within 0.01 pointwise and the
        // binomial peak dominates the Poisson peak at the modal count.
        let (i, p) = (50u64, 0.04);
        let lambda = i as f64 * p;
        let mut max_diff = 0.0f64;
        let mut modal_u = 0;
        let mut modal_value = 0.0;
        for u in 0..=i {
            let b = binomial_pmf(i, u, p).unwrap();
            let q = poisson_pmf(u, lambda);
            max_diff = max_diff.max((b - q).abs());
            if b > modal_value {
                modal_value = b;
                modal_u = u;
            }
        }
        assert!(max_diff < 0.01, "max pointwise gap {max_diff}");
        assert!(modal_value >= poisson_pmf(modal_u, lambda));
    }

    #[test]
    fn effectiveness_reciprocal_and_sentinel() {
        assert_eq!(effectiveness(0.1), Effectiveness::Finite(10.0));
        assert_eq!(effectiveness(1.0), Effectiveness::Finite(1.0));
        assert_eq!(effectiveness(0.0), Effectiveness::Unbounded);
        match effectiveness(0.2646) {
            Effectiveness::Finite(v) => assert!((v - 3.7793).abs() < 1e-4),
            Effectiveness::Unbounded => panic!("finite miss rate"),
        }
    }

    #[test]
    fn empirical_missrate_extremes() {
        let all_fail = AttackConfig {
            p_downlink_success: 0.0,
            max_cycles: 1,
            ..AttackConfig::default()
        };
        let traces: Vec<_> = (0..16)
            .map(|seed| run_rrc_attack(&AttackConfig { seed, ..all_fail }).unwrap())
            .collect();
        assert_eq!(empirical_missrate(&traces).unwrap(), 1.0);

        let all_pass = AttackConfig {
            p_downlink_success: 1.0,
            ..AttackConfig::default()
        };
        let traces: Vec<_> = (0..16)
            .map(|seed| run_rrc_attack(&AttackConfig { seed, ..all_pass }).unwrap())
            .collect();
        assert_eq!(empirical_missrate(&traces).unwrap(), 0.0);

        assert!(empirical_missrate(&[]).is_err());
    }

    #[test]
    fn empirical_missrate_tracks_bernoulli_variance() {
        // 1e4 single-cycle runs at b_DL = 0.7: miss rate 0.30 within
        // 3·sqrt(0.21/1e4).
        let trials = 10_000u64;
        let traces: Vec<_> = (0..trials)
            .map(|seed| {
                run_rrc_attack(&AttackConfig {
                    p_downlink_success: 0.7,
                    max_cycles: 1,
                    seed,
                    ..AttackConfig::default()
                })
                .unwrap()
            })
            .collect();
        let rate = empirical_missrate(&traces).unwrap();
        let tol = 3.0 * (0.3f64 * 0.7 / trials as f64).sqrt();
        assert!((rate - 0.3).abs() < tol, "rate {rate}");
    }
}
