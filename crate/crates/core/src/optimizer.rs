//! Derivative-free maximization of the ensemble-averaged target population
//! over each pulse family's parameter space.

use crate::constants::PhysicalConstants;
use crate::dnp::run_dnp_ensemble;
use crate::dynamics::PropagationConfig;
use crate::ensemble::EnsembleConfig;
use crate::error::Error;
use crate::family::{build_pulse_pair, FamilyParams, PulseFamily};
use crate::pulses::{crosstalk_free_rabi, PulseEnvelope, SlrSpec};
use crate::slr::slr_design;

/// One maximization task: family, linewidth and the shared simulation
/// settings.
#[derive(Debug, Clone)]
pub struct OptimizationProblem {
    pub family: PulseFamily,
    /// ODMR linewidth Δ_FWHM, MHz.
    pub linewidth: f64,
    /// Closed per-parameter intervals, in the family's canonical order.
    pub bounds: Vec<(f64, f64)>,
    pub constants: PhysicalConstants,
    pub ensemble: EnsembleConfig,
    pub propagation: PropagationConfig,
}

impl OptimizationProblem {
    /// Default bounds bracket the whole useful parameter range:
    /// Rabi ∈ [0.2, 4] MHz, δ ∈ [−1.5, 0.5] MHz, ΔT ∈ [−20, 20] %.
    pub fn new(
        family: PulseFamily,
        linewidth: f64,
        constants: PhysicalConstants,
        ensemble: EnsembleConfig,
        propagation: PropagationConfig,
    ) -> Self {
        let rabi = (0.2, 4.0);
        let delta = (-1.5, 0.5);
        let dtpct = (-20.0, 20.0);
        let bounds = match family {
            PulseFamily::Square => vec![rabi, rabi, delta, delta, dtpct, dtpct],
            PulseFamily::Gaussian => vec![rabi, delta],
            PulseFamily::Slr => vec![delta],
        };
        OptimizationProblem {
            family,
            linewidth,
            bounds,
            constants,
            ensemble,
            propagation,
        }
    }

    /// Internal parameter scales for simplex conditioning: Rabi and δ are
    /// already O(1 MHz); durations are in tens of percent.
    fn scales(&self) -> Vec<f64> {
        match self.family {
            PulseFamily::Square => vec![1.0, 1.0, 1.0, 1.0, 10.0, 10.0],
            PulseFamily::Gaussian => vec![1.0, 1.0],
            PulseFamily::Slr => vec![1.0],
        }
    }

    /// Deterministic restart seeds: the analytic cross-talk-free guess plus
    /// fixed perturbations in amplitude and detuning.
    fn seeds(&self) -> Vec<Vec<f64>> {
        let omega = crosstalk_free_rabi(self.constants.a_par.abs());
        let lw = self.linewidth;
        match self.family {
            PulseFamily::Square => {
                let base = |om: f64, d: f64| vec![om, om, d, d, 0.0, 0.0];
                vec![
                    base(omega, 0.0),
                    base(1.2 * omega, 0.0),
                    base(0.8 * omega, 0.0),
                    base(omega, -lw / 2.0),
                    base(1.2 * omega, -lw / 2.0),
                ]
            }
            PulseFamily::Gaussian => vec![
                vec![1.0, 0.0],
                vec![1.2 * omega, -lw / 2.0],
                vec![1.6 * omega, -lw / 2.0],
                vec![0.8, 0.0],
                vec![2.0 * omega, -lw],
            ],
            PulseFamily::Slr => {
                // band edge aligned halfway between target and neighbor
                let edge = -(SlrSpec::default().bandwidth / 2.0 - self.constants.a_par.abs() / 2.0);
                vec![
                    vec![edge],
                    vec![edge - lw / 2.0],
                    vec![edge + lw / 2.0],
                    vec![-0.5],
                    vec![-1.2],
                ]
            }
        }
    }

    fn ensemble_for_linewidth(&self) -> EnsembleConfig {
        EnsembleConfig {
            fwhm: self.linewidth,
            ..self.ensemble
        }
    }
}

/// Best parameters found for one problem.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub family: PulseFamily,
    pub linewidth: f64,
    /// Values in the family's canonical parameter order.
    pub params: Vec<f64>,
    pub p_avg: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Ensemble-averaged P(m_I = 0) for one parameter vector. Deterministic for
/// fixed inputs.
pub fn objective(
    problem: &OptimizationProblem,
    params: &[f64],
    slr_base: Option<&PulseEnvelope>,
) -> Result<f64, Error> {
    let fp = FamilyParams::from_vec(problem.family, params)?;
    let pair = build_pulse_pair(&fp, problem.propagation.dt, slr_base)?;
    let ens = problem.ensemble_for_linewidth();
    Ok(run_dnp_ensemble(&problem.constants, &pair, &ens, &problem.propagation)?.p_avg)
}

/// Nelder–Mead simplex minimization with bound clamping. Deterministic.
/// Returns (x, f(x), evaluations, converged).
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    bounds: &[(f64, f64)],
    initial_step: f64,
    max_iter: usize,
    x_tol: f64,
    f_tol: f64,
) -> (Vec<f64>, f64, usize, bool) {
    let n = x0.len();
    let clamp = |x: &mut Vec<f64>| {
        for (v, (lo, hi)) in x.iter_mut().zip(bounds) {
            *v = v.clamp(*lo, *hi);
        }
    };
    let mut evals = 0usize;
    let mut eval = |x: &Vec<f64>, evals: &mut usize| -> f64 {
        *evals += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut x = x0.to_vec();
    clamp(&mut x);
    let fx = eval(&x, &mut evals);
    simplex.push((x, fx));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += initial_step;
        clamp(&mut x);
        if (x[i] - x0[i]).abs() < 1e-12 {
            x[i] = x0[i] - initial_step;
            clamp(&mut x);
        }
        let fx = eval(&x, &mut evals);
        simplex.push((x, fx));
    }

    let mut converged = false;
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        let spread = simplex[n].1 - simplex[0].1;
        if diameter < x_tol && spread < f_tol {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(x, _)| x[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflect = |t: f64| -> Vec<f64> {
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect();
            for (v, (lo, hi)) in x.iter_mut().zip(bounds) {
                *v = v.clamp(*lo, *hi);
            }
            x
        };

        let xr = reflect(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = reflect(2.0);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let xc = if fr < worst.1 {
                reflect(0.5)
            } else {
                reflect(-0.5)
            };
            let fc = eval(&xc, &mut evals);
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                // shrink toward the best vertex
                let best = simplex[0].0.clone();
                for vert in simplex.iter_mut().skip(1) {
                    let mut x: Vec<f64> = best
                        .iter()
                        .zip(&vert.0)
                        .map(|(b, v)| b + 0.5 * (v - b))
                        .collect();
                    for (v, (lo, hi)) in x.iter_mut().zip(bounds) {
                        *v = v.clamp(*lo, *hi);
                    }
                    let fx = eval(&x, &mut evals);
                    *vert = (x, fx);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let best = simplex.remove(0);
    (best.0, best.1, evals, converged)
}

/// Simplex maximization of the ensemble-averaged population with five
/// deterministic restarts from the documented seed grid. Ties between
/// restarts break toward the lowest restart index.
pub fn optimize(problem: &OptimizationProblem) -> Result<OptimizationResult, Error> {
    let slr_base = match problem.family {
        PulseFamily::Slr => Some(slr_design(&SlrSpec::default())?),
        _ => None,
    };
    let scales = problem.scales();
    let scaled_bounds: Vec<(f64, f64)> = problem
        .bounds
        .iter()
        .zip(&scales)
        .map(|((lo, hi), s)| (lo / s, hi / s))
        .collect();

    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    let mut total_evals = 0usize;
    for seed in problem.seeds() {
        let x0: Vec<f64> = seed.iter().zip(&scales).map(|(v, s)| v / s).collect();
        let obj = |x: &[f64]| -> f64 {
            let params: Vec<f64> = x.iter().zip(&scales).map(|(v, s)| v * s).collect();
            match objective(problem, &params, slr_base.as_ref()) {
                Ok(p) => -p,
                Err(_) => 0.0, // infeasible point; worst possible
            }
        };
        let (x, fx, evals, converged) =
            nelder_mead(obj, &x0, &scaled_bounds, 0.1, 400, 1e-4, 1e-5);
        total_evals += evals;
        let better = match &best {
            None => true,
            Some((_, f_best, _)) => fx < *f_best - 0.0,
        };
        if better {
            best = Some((x, fx, converged));
        }
    }
    let (x, fx, converged) = best.ok_or_else(|| Error::Optimization("no restarts ran".into()))?;
    let params: Vec<f64> = x.iter().zip(&scales).map(|(v, s)| v * s).collect();
    Ok(OptimizationResult {
        family: problem.family,
        linewidth: problem.linewidth,
        params,
        p_avg: -fx,
        evaluations: total_evals,
        converged,
    })
}

/// Ratio of achieved populations, SLR over square, at one linewidth.
pub fn improvement_ratio(slr: &OptimizationResult, square: &OptimizationResult) -> f64 {
    slr.p_avg / square.p_avg
}
