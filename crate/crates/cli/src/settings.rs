//! Flat key=value settings shared by the config file and the command line.
//!
//! Config keys are the long flag names (`wd`, `gamma-e`, ...); underscores
//! are accepted in place of hyphens. Flags override the file.

use std::collections::BTreeMap;
use std::path::Path;

use giant_atom::params::{
    STANDARD_COUPLING_RATIO, STANDARD_ETA_RATIO, STANDARD_OMEGA_D_RATIO, STANDARD_OMEGA_E,
    STANDARD_OMEGA_F_RATIO, STANDARD_V_G,
};
use giant_atom::{Coupling, Drive, SystemParams, ThreeLevelAtom, WaveguideParams};

use crate::error::{CliError, Result};
use crate::quantity::{parse_absolute, parse_frequency};

/// Every key a config file may set.
pub const KEYS: &[&str] = &[
    "we",
    "vg",
    "g",
    "f",
    "x0",
    "wf",
    "wd",
    "eta",
    "gamma-e",
    "gamma-f",
    "dissipative",
    "delta",
    "energy",
    "scan-points",
    "g-sweep",
    "draws",
    "output",
    "format",
    "seed",
];

/// Loss rate used with `--dissipative` when no `gamma-*` is given, in units of `ω_e`.
pub const DEFAULT_GAMMA_RATIO: f64 = 1e-3;

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut settings = Settings::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("config line {}: expected key=value", n + 1))
            })?;
            let key = normalize(key);
            if !KEYS.contains(&key.as_str()) {
                return Err(CliError::Validation(format!(
                    "config line {}: unknown key `{key}`",
                    n + 1
                )));
            }
            if settings.values.contains_key(&key) {
                return Err(CliError::Validation(format!(
                    "config line {}: `{key}` set twice",
                    n + 1
                )));
            }
            settings.values.insert(key, value.trim().to_string());
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Sets `key`, replacing any value from the config file.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let key = normalize(key);
        debug_assert!(KEYS.contains(&key.as_str()), "unknown key {key}");
        self.values.insert(key, value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(String::as_str)
    }

    pub fn omega_e(&self) -> Result<f64> {
        self.get("we")
            .map(|s| parse_absolute(s, "we"))
            .unwrap_or(Ok(STANDARD_OMEGA_E))
    }

    /// A frequency key read in units of `ω_e`, or `default · ω_e` if unset.
    pub fn frequency(&self, key: &str, default: f64) -> Result<f64> {
        let we = self.omega_e()?;
        match self.get(key) {
            Some(s) => parse_frequency(s, we, key),
            None => Ok(default * we),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            None => Ok(false),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(other) => Err(CliError::Validation(format!(
                "{key}: expected true or false, got `{other}`"
            ))),
        }
    }

    pub fn integer<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|s| {
                s.parse().map_err(|_| {
                    CliError::Validation(format!("{key}: `{s}` is not a non-negative integer"))
                })
            })
            .transpose()
    }

    pub fn dissipative(&self) -> Result<bool> {
        self.flag("dissipative")
    }

    /// Model parameters. `x0` is taken from the settings only when it is a
    /// single value; sweeps start from `x0 = 0` and set it per point.
    pub fn params(&self) -> Result<SystemParams> {
        let omega_e = self.omega_e()?;
        let v_g = self
            .get("vg")
            .map(|s| parse_absolute(s, "vg"))
            .unwrap_or(Ok(STANDARD_V_G))?;
        let waveguide = WaveguideParams::new(v_g)?;

        let x0 = match self.get("x0") {
            Some(s) if !s.contains(':') => parse_absolute(s, "x0")?,
            _ => 0.0,
        };
        let coupling = match (self.get("f"), self.get("g")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Validation("give either f or g, not both".into()))
            }
            (Some(f), None) => Coupling::new(parse_absolute(f, "f")?, x0)?,
            (None, g) => {
                let g = g
                    .map(|s| parse_absolute(s, "g"))
                    .unwrap_or(Ok(STANDARD_COUPLING_RATIO))?;
                Coupling::from_ratio(g, &waveguide, omega_e, x0)?
            }
        };

        let (gamma_e, gamma_f) = if self.dissipative()? {
            (
                self.frequency("gamma-e", DEFAULT_GAMMA_RATIO)?,
                self.frequency("gamma-f", DEFAULT_GAMMA_RATIO)?,
            )
        } else {
            if self.get("gamma-e").is_some() || self.get("gamma-f").is_some() {
                log::warn!("gamma-e/gamma-f are ignored without --dissipative");
            }
            (0.0, 0.0)
        };
        let atom = ThreeLevelAtom::new(
            omega_e,
            self.frequency("wf", STANDARD_OMEGA_F_RATIO)?,
            gamma_e,
            gamma_f,
        )?;
        let drive = Drive::new(
            self.frequency("eta", STANDARD_ETA_RATIO)?,
            self.frequency("wd", STANDARD_OMEGA_D_RATIO)?,
        )?;
        Ok(SystemParams::new(waveguide, coupling, atom, drive))
    }
}

/// Metadata echo of every model parameter.
pub fn params_metadata(p: &SystemParams) -> Vec<(String, String)> {
    let entries = [
        ("omega_e", p.omega_e()),
        ("v_g", p.v_g()),
        ("f", p.f()),
        ("g", p.coupling_ratio()),
        ("x0", p.x0()),
        ("omega_f", p.omega_f()),
        ("omega_d", p.omega_d()),
        ("eta", p.eta()),
        ("gamma_e", p.gamma_e()),
        ("gamma_f", p.gamma_f()),
        ("delta_2", p.drive_detuning()),
        ("two_photon_pole", p.two_photon_pole()),
        ("decay_scale", p.decay_scale()),
    ];
    entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), format!("{v:e}")))
        .collect()
}
