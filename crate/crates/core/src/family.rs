//! Mapping from per-family parameter sets to concrete pulse pairs.

use crate::dnp::PulsePair;
use crate::error::Error;
use crate::pulses::{gaussian_envelope, square_envelope, GaussianSpec, SlrSpec, SquareSpec};
use crate::pulses::PulseEnvelope;
use crate::slr::slr_design;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseFamily {
    Square,
    Gaussian,
    Slr,
}

impl PulseFamily {
    pub fn name(&self) -> &'static str {
        match self {
            PulseFamily::Square => "square",
            PulseFamily::Gaussian => "gaussian",
            PulseFamily::Slr => "slr",
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        match s {
            "square" => Ok(PulseFamily::Square),
            "gaussian" | "gauss" => Ok(PulseFamily::Gaussian),
            "slr" | "shinnar-le-roux" => Ok(PulseFamily::Slr),
            other => Err(Error::Parse(format!("unknown pulse family {other:?}"))),
        }
    }

    /// Flat parameter names, matching the order used by the optimizer.
    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            PulseFamily::Square => &[
                "f_rabi_m1_mhz",
                "f_rabi_p1_mhz",
                "delta_m1_mhz",
                "delta_p1_mhz",
                "dt_m1_pct",
                "dt_p1_pct",
            ],
            PulseFamily::Gaussian => &["f_rabi_mhz", "delta_mhz"],
            PulseFamily::Slr => &["delta_mhz"],
        }
    }
}

/// Independent square parameters per branch.
#[derive(Debug, Clone, Copy)]
pub struct SquareParams {
    pub rabi_m1: f64,
    pub rabi_p1: f64,
    pub delta_m1: f64,
    pub delta_p1: f64,
    /// Percent deviation of pulse duration from the nominal π duration.
    pub dt_m1_pct: f64,
    pub dt_p1_pct: f64,
}

/// Both Gaussian pulses share one peak amplitude and detuning.
#[derive(Debug, Clone, Copy)]
pub struct GaussianParams {
    pub peak_rabi: f64,
    pub detuning: f64,
}

/// The SLR waveform is fixed by its design spec; only the shared carrier
/// detuning is a free parameter.
#[derive(Debug, Clone, Copy)]
pub struct SlrParams {
    pub detuning: f64,
}

#[derive(Debug, Clone, Copy)]
pub enum FamilyParams {
    Square(SquareParams),
    Gaussian(GaussianParams),
    Slr(SlrParams),
}

impl FamilyParams {
    pub fn family(&self) -> PulseFamily {
        match self {
            FamilyParams::Square(_) => PulseFamily::Square,
            FamilyParams::Gaussian(_) => PulseFamily::Gaussian,
            FamilyParams::Slr(_) => PulseFamily::Slr,
        }
    }

    /// Flat view in the family's canonical parameter order.
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            FamilyParams::Square(p) => vec![
                p.rabi_m1, p.rabi_p1, p.delta_m1, p.delta_p1, p.dt_m1_pct, p.dt_p1_pct,
            ],
            FamilyParams::Gaussian(p) => vec![p.peak_rabi, p.detuning],
            FamilyParams::Slr(p) => vec![p.detuning],
        }
    }

    pub fn from_vec(family: PulseFamily, v: &[f64]) -> Result<Self, Error> {
        let expect = family.param_names().len();
        if v.len() != expect {
            return Err(Error::Parse(format!(
                "{} family needs {expect} parameters, got {}",
                family.name(),
                v.len()
            )));
        }
        Ok(match family {
            PulseFamily::Square => FamilyParams::Square(SquareParams {
                rabi_m1: v[0],
                rabi_p1: v[1],
                delta_m1: v[2],
                delta_p1: v[3],
                dt_m1_pct: v[4],
                dt_p1_pct: v[5],
            }),
            PulseFamily::Gaussian => FamilyParams::Gaussian(GaussianParams {
                peak_rabi: v[0],
                detuning: v[1],
            }),
            PulseFamily::Slr => FamilyParams::Slr(SlrParams { detuning: v[0] }),
        })
    }
}

/// Build the two-pulse sequence for a parameter set. `dt` is the envelope
/// sample spacing for the square and Gaussian families (the SLR spacing is
/// set by its design). A pre-designed SLR waveform avoids re-running the
/// filter design on every objective evaluation.
pub fn build_pulse_pair(
    params: &FamilyParams,
    dt: f64,
    slr_base: Option<&PulseEnvelope>,
) -> Result<PulsePair, Error> {
    // every generated pulse gets at least 512 samples regardless of dt
    let capped = |dt: f64, duration: f64| dt.min(duration / 512.0);
    match params {
        FamilyParams::Square(p) => {
            let dur_m1 = (1.0 + p.dt_m1_pct / 100.0) / (2.0 * p.rabi_m1.max(1e-9));
            let dur_p1 = (1.0 + p.dt_p1_pct / 100.0) / (2.0 * p.rabi_p1.max(1e-9));
            Ok(PulsePair {
                env_m1: square_envelope(
                    &SquareSpec {
                        rabi: p.rabi_m1,
                        duration_scale: 1.0 + p.dt_m1_pct / 100.0,
                        detuning: p.delta_m1,
                    },
                    capped(dt, dur_m1),
                )?,
                env_p1: square_envelope(
                    &SquareSpec {
                        rabi: p.rabi_p1,
                        duration_scale: 1.0 + p.dt_p1_pct / 100.0,
                        detuning: p.delta_p1,
                    },
                    capped(dt, dur_p1),
                )?,
            })
        }
        FamilyParams::Gaussian(p) => {
            let spec = GaussianSpec {
                peak_rabi: p.peak_rabi,
                detuning: p.detuning,
                ..GaussianSpec::default()
            };
            let approx_duration = 1.6 / p.peak_rabi.max(1e-9);
            let env = gaussian_envelope(&spec, capped(dt, approx_duration))?;
            Ok(PulsePair {
                env_m1: env.clone(),
                env_p1: env,
            })
        }
        FamilyParams::Slr(p) => {
            let base = match slr_base {
                Some(env) => env.clone(),
                None => slr_design(&SlrSpec::default())?,
            };
            let env = base.with_detuning(p.detuning);
            Ok(PulsePair {
                env_m1: env.clone(),
                env_p1: env,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_flat_parameters() {
        let p = FamilyParams::Square(SquareParams {
            rabi_m1: 1.13,
            rabi_p1: 1.24,
            delta_m1: 0.03,
            delta_p1: 0.0,
            dt_m1_pct: 1.1,
            dt_p1_pct: 0.0,
        });
        let v = p.to_vec();
        let q = FamilyParams::from_vec(PulseFamily::Square, &v).unwrap();
        assert_eq!(q.to_vec(), v);
        assert!(FamilyParams::from_vec(PulseFamily::Gaussian, &v).is_err());
    }

    #[test]
    fn square_pair_has_independent_branches() {
        let p = FamilyParams::Square(SquareParams {
            rabi_m1: 1.0,
            rabi_p1: 2.0,
            delta_m1: -0.1,
            delta_p1: -0.2,
            dt_m1_pct: 0.0,
            dt_p1_pct: 0.0,
        });
        let pair = build_pulse_pair(&p, 1e-3, None).unwrap();
        assert!((pair.env_m1.duration() - 0.5).abs() < 1e-12);
        assert!((pair.env_p1.duration() - 0.25).abs() < 1e-12);
        assert_eq!(pair.env_m1.detuning, -0.1);
        assert_eq!(pair.env_p1.detuning, -0.2);
    }

    #[test]
    fn gaussian_pair_shares_parameters() {
        let p = FamilyParams::Gaussian(GaussianParams {
            peak_rabi: 1.58,
            detuning: -0.14,
        });
        let pair = build_pulse_pair(&p, 1e-3, None).unwrap();
        assert_eq!(pair.env_m1, pair.env_p1);
    }

    #[test]
    fn family_parsing() {
        assert_eq!(PulseFamily::parse("gauss").unwrap(), PulseFamily::Gaussian);
        assert!(PulseFamily::parse("triangle").is_err());
    }
}
