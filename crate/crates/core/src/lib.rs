//! Simulation toolkit for rain-attenuation-assisted eavesdropping on mmWave
//! device-to-device links.
//!
//! The crate models the full chain an attacker exploits: the link budget of
//! the legitimate user ([`channel`]), the path penalty added by artificially
//! induced rain ([`rain`]), the resulting secrecy capacity and the
//! feasibility threshold ([`secrecy`]), the TTI-indexed RRC-setup spoofing
//! attack ([`attack`]), and the analytic and empirical miss-rate theory
//! behind it ([`missrate`]). The [`experiment`] module sweeps these
//! pipelines into deterministic CSV records, configured through
//! [`config`].

pub mod attack;
pub mod channel;
pub mod config;
pub mod error;
pub mod experiment;
pub mod missrate;
pub mod rain;
pub mod rng;
pub mod secrecy;

pub use error::{Error, Result};
