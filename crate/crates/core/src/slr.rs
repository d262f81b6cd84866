//! Shinnar–Le Roux design of band-selective inversion pulses.
//!
//! Pipeline: (a) weighted least-squares design of a linear-phase FIR
//! approximation to the target β-polynomial magnitude (|B| = 1 in band,
//! 0 out of band); (b) recovery of the minimum-phase α-polynomial from
//! |A|² = 1 − |B|² by cepstral spectral factorization; (c) the inverse
//! hard-pulse recursion, yielding sample-by-sample rotation angles and
//! hence real Rabi samples.

use crate::error::Error;
use crate::pulses::{PulseEnvelope, SlrSpec};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

/// Transition-width factor of a least-squares FIR design for given pass- and
/// stop-band ripples (empirical fit used with SLR parameter relations).
fn d_infinity(d1: f64, d2: f64) -> f64 {
    let l1 = d1.log10();
    let l2 = d2.log10();
    let a = [5.309e-3, 7.114e-2, -4.761e-1, -2.66e-3, -5.941e-1, -4.278e-1];
    (a[0] * l1 * l1 + a[1] * l1 + a[2]) * l2 + (a[3] * l1 * l1 + a[4] * l1 + a[5])
}

/// Weighted least-squares linear-phase FIR: `n` taps, passband [0, xp],
/// stopband [xs, 0.5] in cycles/sample, stopband weight `w_stop`.
fn firls_linear_phase(n: usize, xp: f64, xs: f64, w_stop: f64) -> Vec<f64> {
    let half = n / 2;
    let center = (n as f64 - 1.0) / 2.0;
    let m_grid = 16 * n;
    // basis: g_m with phi_m(x) = 2 cos(2π x (center - m)), m = 0..half-1
    let mut ata = DMatrix::<f64>::zeros(half, half);
    let mut atb = DVector::<f64>::zeros(half);
    let mut phi = vec![0.0f64; half];
    for k in 0..=m_grid {
        let x = 0.5 * k as f64 / m_grid as f64;
        let (target, weight) = if x <= xp {
            (1.0, 1.0)
        } else if x >= xs {
            (0.0, w_stop)
        } else {
            continue;
        };
        for (m, p) in phi.iter_mut().enumerate() {
            *p = 2.0 * (TAU * x * (center - m as f64)).cos();
        }
        for i in 0..half {
            for j in i..half {
                ata[(i, j)] += weight * phi[i] * phi[j];
            }
            atb[i] += weight * phi[i] * target;
        }
    }
    for i in 0..half {
        for j in 0..i {
            ata[(i, j)] = ata[(j, i)];
        }
        ata[(i, i)] += 1e-10; // ridge for numerical safety
    }
    let g = ata
        .cholesky()
        .map(|ch| ch.solve(&atb))
        .unwrap_or_else(|| DVector::zeros(half));
    let mut h = vec![0.0f64; n];
    for m in 0..half {
        h[m] = g[m];
        h[n - 1 - m] = g[m];
    }
    h
}

/// Frequency response of a real coefficient sequence on an `n_fft` grid
/// (forward DFT of the zero-padded coefficients).
fn response(coeffs: &[f64], n_fft: usize) -> Vec<C64> {
    let mut buf: Vec<C64> = coeffs.iter().map(|&c| C64::new(c, 0.0)).collect();
    buf.resize(n_fft, C64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    buf
}

/// Minimum-phase coefficient sequence with magnitude response √`power`,
/// via the real cepstrum.
fn minimum_phase_from_power(power: &[f64], n_taps: usize) -> Vec<C64> {
    let n_fft = power.len();
    let mut planner = FftPlanner::new();
    let inverse = planner.plan_fft_inverse(n_fft);
    let forward = planner.plan_fft_forward(n_fft);

    let mut cep: Vec<C64> = power
        .iter()
        .map(|&p| C64::new(0.5 * p.max(1e-14).ln(), 0.0))
        .collect();
    inverse.process(&mut cep);
    let scale = 1.0 / n_fft as f64;
    for c in cep.iter_mut() {
        *c *= scale;
    }
    // fold to a causal cepstrum
    let mut folded = vec![C64::new(0.0, 0.0); n_fft];
    folded[0] = cep[0];
    for k in 1..n_fft / 2 {
        folded[k] = cep[k] + cep[n_fft - k].conj();
    }
    folded[n_fft / 2] = cep[n_fft / 2];
    forward.process(&mut folded);
    let mut spectrum: Vec<C64> = folded.iter().map(|c| c.exp()).collect();
    inverse.process(&mut spectrum);
    spectrum.truncate(n_taps);
    for c in spectrum.iter_mut() {
        *c *= scale;
    }
    spectrum
}

/// Inverse hard-pulse recursion: recover per-sample rotations (radians,
/// complex phase) from the (α, β) polynomial pair.
fn inverse_recursion(a: &[C64], b: &[C64]) -> Vec<C64> {
    let n = a.len();
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let mut rotations = vec![C64::new(0.0, 0.0); n];
    for j in (1..=n).rev() {
        let a0 = a[0];
        let b0 = b[0];
        let phi = 2.0 * b0.norm().atan2(a0.norm());
        let theta = if b0.norm() > 0.0 {
            (-C64::new(0.0, 1.0) * b0 / a0).arg()
        } else {
            0.0
        };
        rotations[j - 1] = C64::from_polar(phi, theta);
        let c = C64::new((phi / 2.0).cos(), 0.0);
        let s = C64::new(0.0, 1.0) * C64::from_polar((phi / 2.0).sin(), theta);
        let mut a_next = vec![C64::new(0.0, 0.0); j.saturating_sub(1)];
        let mut b_next = vec![C64::new(0.0, 0.0); j.saturating_sub(1)];
        for k in 0..j.saturating_sub(1) {
            a_next[k] = c * a[k] + s.conj() * b[k];
            b_next[k] = -s * a[k + 1] + c * b[k + 1];
        }
        a = a_next;
        b = b_next;
    }
    rotations
}

/// Design a real amplitude-modulated inversion pulse of the given length and
/// bandwidth. Fails when the β-filter ripple pushes |B| past one by more
/// than a small margin, which signals an infeasible ripple/length spec.
pub fn slr_design(spec: &SlrSpec) -> Result<PulseEnvelope, Error> {
    spec.validate()?;
    let n = spec.n_samples;
    let dt = spec.length / n as f64;
    let tb = spec.bandwidth * spec.length;
    if tb >= n as f64 {
        return Err(Error::SlrDesign(format!(
            "time-bandwidth product {tb} needs more than {n} samples"
        )));
    }

    // inversion-pulse ripple mapping to effective beta-filter ripples
    let d1 = spec.in_band_ripple / 8.0;
    let d2 = (spec.out_band_ripple / 2.0).sqrt();
    let w = d_infinity(d1, d2) / tb;
    // band edge in cycles/sample; transition centered on it
    let x_band = 0.5 * spec.bandwidth * dt;
    let xp = x_band * (1.0 - w);
    let xs = (x_band * (1.0 + w)).min(0.49);
    if xp <= 0.0 || xp >= xs {
        return Err(Error::SlrDesign(format!(
            "empty passband after transition sizing (w = {w:.3})"
        )));
    }

    let mut b = firls_linear_phase(n, xp, xs, d1 / d2);

    let n_fft = (8 * n).next_power_of_two();
    let b_resp = response(&b, n_fft);
    let max_b = b_resp.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_b > 1.05 {
        return Err(Error::SlrDesign(format!(
            "beta magnitude overshoot {max_b:.3}: ripple spec infeasible"
        )));
    }
    // |B| may not exceed 1 anywhere for the factorization of 1 - |B|^2
    let cap = 1.0 - 1e-9;
    if max_b > cap {
        let s = cap / max_b;
        for v in b.iter_mut() {
            *v *= s;
        }
    }
    let b_resp = response(&b, n_fft);
    let a_power: Vec<f64> = b_resp.iter().map(|z| 1.0 - z.norm_sqr()).collect();
    let a = minimum_phase_from_power(&a_power, n);
    let b_c: Vec<C64> = b.iter().map(|&v| C64::new(v, 0.0)).collect();

    let rotations = inverse_recursion(&a, &b_c);
    // remove the (constant) global phase and keep the real part
    let reference = rotations
        .iter()
        .cloned()
        .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = C64::from_polar(1.0, -reference.arg());
    let mut max_imag: f64 = 0.0;
    let samples: Vec<f64> = rotations
        .iter()
        .map(|r| {
            let z = r * phase;
            max_imag = max_imag.max(z.im.abs());
            z.re / (TAU * dt)
        })
        .collect();
    let peak = samples.iter().map(|s| s.abs()).fold(0.0, f64::max);
    if max_imag / (TAU * dt) > 1e-6 * peak.max(1.0) {
        return Err(Error::SlrDesign(format!(
            "designed waveform is not amplitude-modulated (residual quadrature {max_imag:.3e})"
        )));
    }

    let env = PulseEnvelope {
        samples,
        dt,
        detuning: spec.detuning,
    };
    env.validate()?;
    Ok(env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::{excitation_profile, two_level_inversion};
    use approx::assert_abs_diff_eq;

    #[test]
    fn designed_pulse_has_requested_duration() {
        let env = slr_design(&SlrSpec::default()).unwrap();
        assert_abs_diff_eq!(env.duration(), 4.0, epsilon = 1e-12);
        assert_eq!(env.samples.len(), 256);
    }

    #[test]
    fn in_band_inversion_and_out_of_band_rejection() {
        let env = slr_design(&SlrSpec::default()).unwrap();
        let center = two_level_inversion(&env, 0.0);
        assert!(center >= 0.99, "center inversion {center}");
        // twice the band edge
        let far = two_level_inversion(&env, 4.0);
        assert!(far <= 0.05, "out-of-band inversion {far}");
        let far_neg = two_level_inversion(&env, -4.0);
        assert!(far_neg <= 0.05, "out-of-band inversion {far_neg}");
    }

    #[test]
    fn profile_is_flat_inside_band() {
        let env = slr_design(&SlrSpec::default()).unwrap();
        let grid: Vec<f64> = (0..31).map(|k| -1.5 + 0.1 * k as f64).collect();
        let prof = excitation_profile(&env, &grid);
        for (d, p) in grid.iter().zip(&prof) {
            assert!(*p >= 0.97, "inversion {p} at detuning {d}");
        }
    }

    #[test]
    fn waveform_is_real_with_negative_lobes() {
        let env = slr_design(&SlrSpec::default()).unwrap();
        assert!(env.samples.iter().all(|s| s.is_finite()));
        assert!(env.samples.iter().any(|&s| s < 0.0));
        let peak = env.samples.iter().cloned().fold(f64::MIN, f64::max);
        assert!(peak > 0.0);
    }

    #[test]
    fn infeasible_spec_is_rejected() {
        // time-bandwidth product equal to the tap count cannot be met
        let spec = SlrSpec {
            length: 4.0,
            bandwidth: 16.0,
            n_samples: 64,
            ..SlrSpec::default()
        };
        assert!(slr_design(&spec).is_err());
    }

    #[test]
    fn recursion_round_trips_a_single_rotation() {
        // one hard pulse of angle φ: A = cos(φ/2), B = i e^{iθ} sin(φ/2)
        let phi = 0.7f64;
        let a = vec![C64::new((phi / 2.0).cos(), 0.0)];
        let b = vec![C64::new(0.0, 1.0) * C64::from_polar((phi / 2.0).sin(), 0.0)];
        let rot = inverse_recursion(&a, &b);
        assert_abs_diff_eq!(rot[0].norm(), phi, epsilon = 1e-12);
    }
}
