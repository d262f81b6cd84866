//! Physical constants of the NV⁻ ground-state spin Hamiltonian.

use crate::error::Error;
use std::path::Path;

/// Scalar couplings of the ground-state Hamiltonian plus the bias-field
/// setpoint. All frequencies in MHz, gyromagnetic ratios in MHz/G, field in G.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Zero-field splitting D, MHz.
    pub d: f64,
    /// Electron gyromagnetic ratio, MHz/G.
    pub gamma_e: f64,
    /// ¹⁴N nuclear gyromagnetic ratio, MHz/G.
    pub gamma_n: f64,
    /// Quadrupole splitting, MHz.
    pub q: f64,
    /// Longitudinal hyperfine constant, MHz (signed).
    pub a_par: f64,
    /// Transverse hyperfine constant, MHz.
    pub a_perp: f64,
    /// Bias field along the NV axis, G.
    pub b0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            d: 2870.0,
            gamma_e: 2.8025,
            gamma_n: 3.077e-4,
            q: -4.945,
            a_par: -2.16,
            a_perp: -2.7,
            b0: 10.0,
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<(), Error> {
        let vals = [
            self.d,
            self.gamma_e,
            self.gamma_n,
            self.q,
            self.a_par,
            self.a_perp,
            self.b0,
        ];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConstants("non-finite value".into()));
        }
        if self.d <= 0.0 {
            return Err(Error::InvalidConstants("D must be > 0".into()));
        }
        if self.gamma_e <= 0.0 {
            return Err(Error::InvalidConstants("gamma_e must be > 0".into()));
        }
        if self.a_par == 0.0 {
            return Err(Error::InvalidConstants("|A_par| must be > 0".into()));
        }
        Ok(())
    }

    /// Parse a plain-text key/value config, `key = value` per line.
    /// Lines starting with `#` and blank lines are ignored.
    ///
    /// Keys: `D_mhz`, `gamma_e_mhz_per_g`, `gamma_n_mhz_per_g`, `Q_mhz`,
    /// `A_par_mhz`, `A_perp_mhz`, `B0_g`. Missing keys keep their defaults.
    pub fn from_str_config(text: &str) -> Result<Self, Error> {
        let mut c = PhysicalConstants::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Parse(format!("line {}: bad number {:?}", lineno + 1, value.trim()))
            })?;
            match key.trim() {
                "D_mhz" => c.d = value,
                "gamma_e_mhz_per_g" => c.gamma_e = value,
                "gamma_n_mhz_per_g" => c.gamma_n = value,
                "Q_mhz" => c.q = value,
                "A_par_mhz" => c.a_par = value,
                "A_perp_mhz" => c.a_perp = value,
                "B0_g" => c.b0 = value,
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: unknown key {:?}",
                        lineno + 1,
                        other
                    )))
                }
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str_config(&text)
    }

    /// Canonical key/value rendering; used for config hashing.
    pub fn to_config_string(&self) -> String {
        format!(
            "D_mhz = {}\ngamma_e_mhz_per_g = {}\ngamma_n_mhz_per_g = {}\nQ_mhz = {}\nA_par_mhz = {}\nA_perp_mhz = {}\nB0_g = {}\n",
            self.d, self.gamma_e, self.gamma_n, self.q, self.a_par, self.a_perp, self.b0
        )
    }
}
