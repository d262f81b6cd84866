//! Sampled pulse envelopes: square and Gaussian generation, two-level
//! excitation profiles, and the cross-talk-free Rabi condition.
//!
//! Envelopes are amplitude-modulated only: samples are real instantaneous
//! Rabi frequencies in MHz on a uniform grid of spacing `dt` µs.

use crate::error::Error;
use num_complex::Complex64 as C64;
use statrs::function::erf::erf;
use std::f64::consts::TAU;
use std::io::{BufRead, Write};

/// Sampled Rabi-frequency waveform plus carrier detuning for one MW pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseEnvelope {
    /// Instantaneous Rabi frequency per sample, MHz.
    pub samples: Vec<f64>,
    /// Sample spacing, µs.
    pub dt: f64,
    /// Carrier detuning from the nominal transition frequency, MHz.
    pub detuning: f64,
}

impl PulseEnvelope {
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    /// ∫ Ω(t) dt, dimensionless rotation area in half-cycles (a π pulse has
    /// area 1/2).
    pub fn area(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.dt
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidPulse(format!("dt = {}", self.dt)));
        }
        if !self.detuning.is_finite() {
            return Err(Error::InvalidPulse("non-finite detuning".into()));
        }
        if self.samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidPulse("non-finite sample".into()));
        }
        Ok(())
    }

    /// Same waveform with a different carrier detuning.
    pub fn with_detuning(&self, detuning: f64) -> Self {
        PulseEnvelope {
            detuning,
            ..self.clone()
        }
    }

    /// Write as CSV with mandatory header `time_us,rabi_mhz`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<(), Error> {
        writeln!(w, "time_us,rabi_mhz")?;
        for (k, s) in self.samples.iter().enumerate() {
            writeln!(w, "{},{}", k as f64 * self.dt, s)?;
        }
        Ok(())
    }

    /// Read a waveform written by [`write_csv`](Self::write_csv). `#` comment
    /// lines are skipped. The carrier detuning is not part of the file and is
    /// set to zero.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, Error> {
        let mut lines = r.lines();
        let header = loop {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("empty envelope CSV".into()))??;
            let trimmed = line.trim().to_string();
            if !trimmed.is_empty() && !trimmed.starts_with('#') {
                break trimmed;
            }
        };
        if header != "time_us,rabi_mhz" {
            return Err(Error::Parse(format!("bad envelope header {header:?}")));
        }
        let mut times = Vec::new();
        let mut samples = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (t, s) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad envelope row {line:?}")))?;
            times.push(
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad time {t:?}")))?,
            );
            samples.push(
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad sample {s:?}")))?,
            );
        }
        if samples.len() < 2 {
            return Err(Error::Parse("envelope CSV needs at least two rows".into()));
        }
        let dt = times[1] - times[0];
        let env = PulseEnvelope {
            samples,
            dt,
            detuning: 0.0,
        };
        env.validate()?;
        Ok(env)
    }
}

/// Square pulse parameters: constant Rabi amplitude over a duration
/// `duration_scale`/(2·rabi), i.e. a π pulse scaled by `duration_scale`.
#[derive(Debug, Clone, Copy)]
pub struct SquareSpec {
    pub rabi: f64,
    pub duration_scale: f64,
    pub detuning: f64,
}

/// Gaussian pulse parameters. The width is chosen so the truncated area is
/// exactly 1/2 (a π rotation at zero detuning) for the given peak amplitude.
#[derive(Debug, Clone, Copy)]
pub struct GaussianSpec {
    pub peak_rabi: f64,
    pub detuning: f64,
    /// Number of standard deviations at which the envelope is cut.
    pub truncation: f64,
}

impl Default for GaussianSpec {
    fn default() -> Self {
        GaussianSpec {
            peak_rabi: 1.0,
            detuning: 0.0,
            truncation: 4.0,
        }
    }
}

/// Shinnar–Le Roux design parameters; see [`crate::slr::slr_design`].
#[derive(Debug, Clone, Copy)]
pub struct SlrSpec {
    /// Pulse length, µs.
    pub length: f64,
    /// Inversion bandwidth, MHz.
    pub bandwidth: f64,
    /// Number of hard-pulse samples.
    pub n_samples: usize,
    pub in_band_ripple: f64,
    pub out_band_ripple: f64,
    /// Carrier detuning, MHz.
    pub detuning: f64,
}

impl Default for SlrSpec {
    fn default() -> Self {
        SlrSpec {
            length: 4.0,
            bandwidth: 4.0,
            n_samples: 256,
            in_band_ripple: 0.01,
            out_band_ripple: 0.01,
            detuning: 0.0,
        }
    }
}

impl SlrSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.length > 0.0) {
            return Err(Error::InvalidPulse("SLR length must be > 0".into()));
        }
        if !(self.bandwidth > 0.0) {
            return Err(Error::InvalidPulse("SLR bandwidth must be > 0".into()));
        }
        if self.n_samples < 64 {
            return Err(Error::InvalidPulse("SLR n_samples must be >= 64".into()));
        }
        if !(self.in_band_ripple > 0.0) || !(self.out_band_ripple > 0.0) {
            return Err(Error::InvalidPulse("SLR ripples must be > 0".into()));
        }
        Ok(())
    }
}

/// Constant envelope of amplitude `rabi` over `duration_scale`/(2·rabi) µs.
/// The sample spacing is adjusted downward so the duration is exact.
pub fn square_envelope(spec: &SquareSpec, dt: f64) -> Result<PulseEnvelope, Error> {
    if !(spec.rabi > 0.0) || !spec.rabi.is_finite() {
        return Err(Error::InvalidPulse(format!("rabi = {}", spec.rabi)));
    }
    if !(spec.duration_scale > 0.0) {
        return Err(Error::InvalidPulse(format!(
            "duration_scale = {}",
            spec.duration_scale
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidPulse(format!("dt = {dt}")));
    }
    let duration = spec.duration_scale / (2.0 * spec.rabi);
    let n = (duration / dt).ceil().max(1.0) as usize;
    Ok(PulseEnvelope {
        samples: vec![spec.rabi; n],
        dt: duration / n as f64,
        detuning: spec.detuning,
    })
}

/// Truncated Gaussian envelope with exact π area.
///
/// σ solves peak·σ·√(2π)·erf(trunc/√2) = 1/2 and the discrete samples are
/// rescaled after truncation so the sampled area is exactly 1/2.
pub fn gaussian_envelope(spec: &GaussianSpec, dt: f64) -> Result<PulseEnvelope, Error> {
    if !(spec.peak_rabi > 0.0) || !spec.peak_rabi.is_finite() {
        return Err(Error::InvalidPulse(format!("peak_rabi = {}", spec.peak_rabi)));
    }
    if spec.truncation < 3.0 {
        return Err(Error::InvalidPulse(format!(
            "truncation = {} (must be >= 3)",
            spec.truncation
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidPulse(format!("dt = {dt}")));
    }
    let trunc_area = erf(spec.truncation / std::f64::consts::SQRT_2);
    let sigma = 0.5 / (spec.peak_rabi * (TAU).sqrt() * trunc_area);
    let duration = 2.0 * spec.truncation * sigma;
    let n = (duration / dt).ceil().max(2.0) as usize;
    let dt_actual = duration / n as f64;
    let mid = duration / 2.0;
    let mut samples: Vec<f64> = (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) * dt_actual - mid;
            spec.peak_rabi * (-t * t / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let area: f64 = samples.iter().sum::<f64>() * dt_actual;
    let scale = 0.5 / area;
    for s in &mut samples {
        *s *= scale;
    }
    Ok(PulseEnvelope {
        samples,
        dt: dt_actual,
        detuning: spec.detuning,
    })
}

/// Width parameter of the untruncated calibrated Gaussian, µs.
pub fn gaussian_sigma_untruncated(peak_rabi: f64) -> f64 {
    0.5 / (peak_rabi * TAU.sqrt())
}

/// Final excited-state population of an isolated two-level system driven by
/// `env`, for each total detuning `env.detuning + δ` on the grid.
pub fn excitation_profile(env: &PulseEnvelope, detunings: &[f64]) -> Vec<f64> {
    detunings
        .iter()
        .map(|d| two_level_inversion(env, env.detuning + d))
        .collect()
}

/// Excited population after driving a resonance detuned by `delta` from the
/// carrier, starting from the ground state.
pub fn two_level_inversion(env: &PulseEnvelope, delta: f64) -> f64 {
    // H = [[-delta/2, omega/2], [omega/2, +delta/2]] per sample; exact
    // piecewise-constant rotation.
    let mut c_g = C64::new(1.0, 0.0);
    let mut c_e = C64::new(0.0, 0.0);
    let ang = TAU * env.dt;
    for &omega in &env.samples {
        let hx = 0.5 * omega;
        let hz = -0.5 * delta;
        let r = (hx * hx + hz * hz).sqrt();
        let theta = ang * r;
        let (s, c) = theta.sin_cos();
        let (nx, nz) = if r > 0.0 { (hx / r, hz / r) } else { (0.0, 0.0) };
        // U = cos θ · I − i sin θ (nx σx + nz σz)
        let u00 = C64::new(c, -s * nz);
        let u01 = C64::new(0.0, -s * nx);
        let u11 = C64::new(c, s * nz);
        let g = u00 * c_g + u01 * c_e;
        let e = u01 * c_g + u11 * c_e;
        c_g = g;
        c_e = e;
    }
    c_e.norm_sqr()
}

/// Rabi frequency at which a π pulse on a resonant transition performs a
/// full 2π rotation on a neighbor detuned by `delta_omega`: Ω = δω/√3.
pub fn crosstalk_free_rabi(delta_omega: f64) -> f64 {
    delta_omega / 3f64.sqrt()
}
