//! Inhomogeneous-broadening ensemble grid and Cauchy-weighted averaging.

use crate::constants::PhysicalConstants;
use crate::error::Error;

/// Ensemble discretization of the Cauchy-distributed axial field.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleConfig {
    /// ODMR linewidth Δ_FWHM, MHz.
    pub fwhm: f64,
    /// Number of grid members (odd, ≥ 3).
    pub n_members: usize,
    /// Half-width of the grid in units of Δ_FWHM/γe.
    pub span_factor: f64,
    /// Bias field, G.
    pub b0: f64,
}

impl EnsembleConfig {
    pub fn new(fwhm: f64, b0: f64) -> Self {
        EnsembleConfig {
            fwhm,
            n_members: 201,
            span_factor: 6.0,
            b0,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.fwhm > 0.0) || !self.fwhm.is_finite() {
            return Err(Error::Ensemble(format!("fwhm = {}", self.fwhm)));
        }
        if self.n_members < 3 || self.n_members % 2 == 0 {
            return Err(Error::Ensemble(format!(
                "n_members = {} (must be odd and >= 3)",
                self.n_members
            )));
        }
        if !(self.span_factor > 0.0) {
            return Err(Error::Ensemble(format!("span_factor = {}", self.span_factor)));
        }
        Ok(())
    }
}

/// Equally spaced field values spanning B0 ± span_factor·Δ_FWHM/γe,
/// symmetric about B0 with B0 itself at the midpoint.
pub fn ensemble_grid(cfg: &EnsembleConfig, constants: &PhysicalConstants) -> Vec<f64> {
    let half_width = cfg.span_factor * cfg.fwhm / constants.gamma_e;
    let n = cfg.n_members;
    let mid = (n / 2) as isize;
    let spacing = 2.0 * half_width / (n - 1) as f64;
    (0..n)
        .map(|i| cfg.b0 + (i as isize - mid) as f64 * spacing)
        .collect()
}

/// Unnormalized Cauchy weights w_i = 1/((B_z − B0)² + γ_B²/4) with
/// γ_B = Δ_FWHM/γe in field units.
pub fn cauchy_weights(grid: &[f64], cfg: &EnsembleConfig, constants: &PhysicalConstants) -> Vec<f64> {
    let gamma_b = cfg.fwhm / constants.gamma_e;
    grid.iter()
        .map(|bz| {
            let d = bz - cfg.b0;
            1.0 / (d * d + gamma_b * gamma_b / 4.0)
        })
        .collect()
}

/// Weighted mean Σ v·w / Σ w.
pub fn ensemble_average(values: &[f64], weights: &[f64]) -> Result<f64, Error> {
    if values.len() != weights.len() {
        return Err(Error::Ensemble(format!(
            "length mismatch: {} values, {} weights",
            values.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|w| *w < 0.0) {
        return Err(Error::Ensemble("negative weight".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Ensemble("all weights are zero".into()));
    }
    Ok(values
        .iter()
        .zip(weights)
        .map(|(v, w)| v * w)
        .sum::<f64>()
        / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn setup() -> (EnsembleConfig, PhysicalConstants) {
        (EnsembleConfig::new(0.64, 10.0), PhysicalConstants::default())
    }

    #[test]
    fn grid_span_and_symmetry() {
        let (cfg, c) = setup();
        let grid = ensemble_grid(&cfg, &c);
        assert_eq!(grid.len(), 201);
        let half_width = 6.0 * 0.64 / c.gamma_e;
        assert_abs_diff_eq!(grid[0], 10.0 - half_width, epsilon = 1e-12);
        assert_abs_diff_eq!(grid[200], 10.0 + half_width, epsilon = 1e-12);
        assert_abs_diff_eq!(grid[100], 10.0, epsilon = 1e-12);
        let spacing = grid[1] - grid[0];
        assert_abs_diff_eq!(
            spacing * 200.0,
            2.0 * cfg.span_factor * cfg.fwhm / c.gamma_e,
            epsilon = 1e-12
        );
        for (a, b) in grid.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>() {
            assert_abs_diff_eq!(b - a, spacing, epsilon = 1e-12);
        }
    }

    #[test]
    fn weights_peak_and_half_maximum() {
        let (cfg, c) = setup();
        let gamma_b = cfg.fwhm / c.gamma_e;
        let grid = vec![10.0, 10.0 + gamma_b / 2.0, 10.0 - gamma_b / 2.0];
        let w = cauchy_weights(&grid, &cfg, &c);
        assert_abs_diff_eq!(w[0], 4.0 / (gamma_b * gamma_b), epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], w[0] / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w[1], w[2], epsilon = 1e-14);
    }

    #[test]
    fn weights_symmetric_over_grid() {
        let (cfg, c) = setup();
        let grid = ensemble_grid(&cfg, &c);
        let w = cauchy_weights(&grid, &cfg, &c);
        let n = w.len();
        for i in 0..n / 2 {
            assert_abs_diff_eq!(w[i], w[n - 1 - i], epsilon = 1e-14 * w[i].max(1.0));
        }
    }

    #[test]
    fn average_identities() {
        let vals = vec![0.7; 11];
        let w: Vec<f64> = (0..11).map(|i| 1.0 + i as f64).collect();
        assert_abs_diff_eq!(ensemble_average(&vals, &w).unwrap(), 0.7, epsilon = 1e-14);

        // indicator of the center member on a 3-point grid
        let (cfg3, c) = (
            EnsembleConfig {
                n_members: 3,
                ..EnsembleConfig::new(0.64, 10.0)
            },
            PhysicalConstants::default(),
        );
        let grid = ensemble_grid(&cfg3, &c);
        let w = cauchy_weights(&grid, &cfg3, &c);
        let vals = vec![0.0, 1.0, 0.0];
        let expect = w[1] / (w[0] + w[1] + w[2]);
        assert_abs_diff_eq!(ensemble_average(&vals, &w).unwrap(), expect, epsilon = 1e-14);
    }

    #[test]
    fn average_invariant_under_weight_rescaling() {
        let vals = vec![0.1, 0.5, 0.9, 0.3];
        let w = vec![1.0, 2.0, 0.5, 4.0];
        let w2: Vec<f64> = w.iter().map(|x| x * 37.5).collect();
        assert_abs_diff_eq!(
            ensemble_average(&vals, &w).unwrap(),
            ensemble_average(&vals, &w2).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn average_rejects_bad_input() {
        assert!(ensemble_average(&[1.0], &[1.0, 2.0]).is_err());
        assert!(ensemble_average(&[1.0, 2.0], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn config_validation() {
        let (mut cfg, _) = setup();
        cfg.validate().unwrap();
        cfg.n_members = 200;
        assert!(cfg.validate().is_err());
        cfg.n_members = 201;
        cfg.fwhm = 0.0;
        assert!(cfg.validate().is_err());
    }
}
