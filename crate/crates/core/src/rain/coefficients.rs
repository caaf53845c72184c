//! Power-law coefficient table: parsing, validation, checksum, evaluation.
//!
//! The coefficients come from a plain-text data file shipped with the crate
//! (see `data/p838_coefficients.txt` for the format). A copy is embedded in
//! the binary so the library works without filesystem access; an alternative
//! file can be loaded at startup and is validated the same way.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Contents of the versioned coefficient data file shipped with the crate.
pub const BUILTIN_COEFFICIENT_DATA: &str = include_str!("../../data/p838_coefficients.txt");

/// Validity window of the coefficient fits, GHz. No extrapolation outside.
pub const FREQUENCY_WINDOW_GHZ: (f64, f64) = (1.0, 100.0);

/// The four per-polarization power-law coefficients at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawCoefficients {
    /// Multiplicative coefficient, horizontal polarization.
    pub theta_h: f64,
    /// Multiplicative coefficient, vertical polarization.
    pub theta_v: f64,
    /// Rain-rate exponent, horizontal polarization.
    pub epsilon_h: f64,
    /// Rain-rate exponent, vertical polarization.
    pub epsilon_v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct GaussianTerm {
    amplitude: f64,
    center: f64,
    width: f64,
}

/// One fitted series: a sum of Gaussians in log10(f) plus a linear term.
#[derive(Debug, Clone, PartialEq)]
struct FitSeries {
    terms: Vec<GaussianTerm>,
    log_slope: f64,
    intercept: f64,
}

impl FitSeries {
    fn eval(&self, log10_f_ghz: f64) -> f64 {
        let gauss: f64 = self
            .terms
            .iter()
            .map(|t| {
                let arg = (log10_f_ghz - t.center) / t.width;
                t.amplitude * (-arg * arg).exp()
            })
            .sum();
        gauss + self.log_slope * log10_f_ghz + self.intercept
    }
}

/// Immutable coefficient table, loaded once at startup.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    k_h: FitSeries,
    k_v: FitSeries,
    alpha_h: FitSeries,
    alpha_v: FitSeries,
    checksum: u64,
}

impl CoefficientTable {
    /// Table built from the embedded data file.
    pub fn builtin() -> CoefficientTable {
        CoefficientTable::parse(BUILTIN_COEFFICIENT_DATA)
            .expect("embedded coefficient data must parse")
    }

    /// Parse and validate a coefficient data file.
    pub fn parse(text: &str) -> Result<CoefficientTable> {
        let mut k_h = None;
        let mut k_v = None;
        let mut alpha_h = None;
        let mut alpha_v = None;

        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let group = fields.next().unwrap();
            let numbers: Vec<f64> = fields
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| {
                        Error::config(format!(
                            "coefficient file line {}: bad number {tok:?}",
                            lineno + 1
                        ))
                    })
                })
                .collect::<Result<_>>()?;
            if numbers.len() < 5 || !(numbers.len() - 2).is_multiple_of(3) {
                return Err(Error::config(format!(
                    "coefficient file line {}: expected <slope> <intercept> and 3-value terms",
                    lineno + 1
                )));
            }
            let series = FitSeries {
                log_slope: numbers[0],
                intercept: numbers[1],
                terms: numbers[2..]
                    .chunks(3)
                    .map(|c| GaussianTerm {
                        amplitude: c[0],
                        center: c[1],
                        width: c[2],
                    })
                    .collect(),
            };
            let slot = match group {
                "k_h" => &mut k_h,
                "k_v" => &mut k_v,
                "alpha_h" => &mut alpha_h,
                "alpha_v" => &mut alpha_v,
                other => {
                    return Err(Error::config(format!(
                        "coefficient file line {}: unknown group {other:?}",
                        lineno + 1
                    )))
                }
            };
            if slot.replace(series).is_some() {
                return Err(Error::config(format!(
                    "coefficient file line {}: duplicate group {group:?}",
                    lineno + 1
                )));
            }
        }

        let table = CoefficientTable {
            k_h: k_h.ok_or_else(|| Error::config("coefficient file: missing group k_h"))?,
            k_v: k_v.ok_or_else(|| Error::config("coefficient file: missing group k_v"))?,
            alpha_h: alpha_h
                .ok_or_else(|| Error::config("coefficient file: missing group alpha_h"))?,
            alpha_v: alpha_v
                .ok_or_else(|| Error::config("coefficient file: missing group alpha_v"))?,
            checksum: fnv1a_64(text.as_bytes()),
        };
        table.validate()?;
        Ok(table)
    }

    /// Load a coefficient data file from disk.
    pub fn from_path(path: &Path) -> Result<CoefficientTable> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        CoefficientTable::parse(&text)
    }

    /// FNV-1a checksum of the source text, for startup logging.
    pub fn checksum(&self) -> u64 {
        self.checksum
    }

    /// Evaluate the four coefficients at `frequency_hz`.
    ///
    /// Errors outside the 1–100 GHz validity window; the fits are not
    /// extrapolated.
    pub fn coefficients_at(&self, frequency_hz: f64) -> Result<PowerLawCoefficients> {
        let f_ghz = frequency_hz / 1e9;
        let (lo, hi) = FREQUENCY_WINDOW_GHZ;
        if !(f_ghz >= lo && f_ghz <= hi) {
            return Err(Error::domain(format!(
                "rain coefficients: {f_ghz} GHz outside the [{lo}, {hi}] GHz table window"
            )));
        }
        let log_f = f_ghz.log10();
        Ok(PowerLawCoefficients {
            theta_h: 10f64.powf(self.k_h.eval(log_f)),
            theta_v: 10f64.powf(self.k_v.eval(log_f)),
            epsilon_h: self.alpha_h.eval(log_f),
            epsilon_v: self.alpha_v.eval(log_f),
        })
    }

    // Sweep the validity window and reject tables that produce unphysical
    // coefficients (guards against data-file corruption).
    fn validate(&self) -> Result<()> {
        let mut f_ghz = FREQUENCY_WINDOW_GHZ.0;
        while f_ghz <= FREQUENCY_WINDOW_GHZ.1 {
            let c = self.coefficients_at(f_ghz * 1e9)?;
            if !(c.theta_h > 0.0 && c.theta_v > 0.0) {
                return Err(Error::config(format!(
                    "coefficient table: non-positive multiplier at {f_ghz} GHz"
                )));
            }
            for eps in [c.epsilon_h, c.epsilon_v] {
                if !(eps > 0.4 && eps < 1.8) {
                    return Err(Error::config(format!(
                        "coefficient table: exponent {eps} at {f_ghz} GHz outside (0.4, 1.8)"
                    )));
                }
            }
            f_ghz += 0.5;
        }
        Ok(())
    }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "coefficient table (checksum {:#018x})", self.checksum)
    }
}

fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
