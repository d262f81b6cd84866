//! Implementations of the CLI commands on top of the core library.

use crate::output::{config_hash, emit, sig6};
use crate::{Cli, Command, FamilyArgs};
use nvdnp_core::{
    build_pulse_pair, crosstalk_free_rabi, excitation_profile, gaussian_envelope, limit_ensemble,
    optimize, run_dnp_ensemble, slr_design, square_envelope, EnsembleConfig, Error, FamilyParams,
    GaussianParams, GaussianSpec, OptimizationProblem, OptimizationResult, PhysicalConstants,
    PropagationConfig, PulseEnvelope, PulseFamily, SlrParams, SlrSpec, SquareParams, SquareSpec,
};
use std::path::PathBuf;

/// Linewidth grid of the reference table, MHz.
pub const TABLE_LINEWIDTHS: [f64; 10] = [
    0.01, 0.15, 0.32, 0.43, 0.64, 0.95, 1.27, 1.48, 1.79, 2.00,
];

/// Settings shared by every command, resolved from global flags.
struct Ctx {
    constants: PhysicalConstants,
    propagation: PropagationConfig,
    members: usize,
    span: f64,
    out: Option<PathBuf>,
    /// Canonical description of the shared settings, hashed into outputs.
    desc: String,
}

impl Ctx {
    fn resolve(cli: &Cli) -> Result<Self, Error> {
        let constants = match &cli.constants {
            Some(path) => PhysicalConstants::from_file(path)?,
            None => PhysicalConstants::default(),
        };
        constants.validate()?;
        if !(cli.dt > 0.0) || !cli.dt.is_finite() {
            return Err(Error::Parse(format!("--dt {} (must be > 0)", cli.dt)));
        }
        let desc = format!(
            "{}dt_us = {}\nmembers = {}\nspan = {}\n",
            constants.to_config_string(),
            cli.dt,
            cli.members,
            cli.span
        );
        Ok(Ctx {
            constants,
            propagation: PropagationConfig {
                dt: cli.dt,
                ..PropagationConfig::default()
            },
            members: cli.members,
            span: cli.span,
            out: cli.out.clone(),
            desc,
        })
    }

    fn ensemble(&self, linewidth: f64) -> Result<EnsembleConfig, Error> {
        let ens = EnsembleConfig {
            n_members: self.members,
            span_factor: self.span,
            ..EnsembleConfig::new(linewidth, self.constants.b0)
        };
        ens.validate()?;
        Ok(ens)
    }
}

/// Resolve family flags into a concrete parameter set, defaulting the drive
/// amplitudes to the cross-talk-free value |A∥|/√3.
fn family_params(fam: &FamilyArgs, constants: &PhysicalConstants) -> Result<FamilyParams, Error> {
    let family = PulseFamily::parse(&fam.family)?;
    let omega = crosstalk_free_rabi(constants.a_par.abs());
    Ok(match family {
        PulseFamily::Square => FamilyParams::Square(SquareParams {
            rabi_m1: fam.rabi_m1.unwrap_or(omega),
            rabi_p1: fam.rabi_p1.unwrap_or(omega),
            delta_m1: fam.det_m1,
            delta_p1: fam.det_p1,
            dt_m1_pct: fam.dtpct_m1,
            dt_p1_pct: fam.dtpct_p1,
        }),
        PulseFamily::Gaussian => FamilyParams::Gaussian(GaussianParams {
            peak_rabi: fam.peak.unwrap_or(omega),
            detuning: fam.detuning,
        }),
        PulseFamily::Slr => FamilyParams::Slr(SlrParams {
            detuning: fam.detuning,
        }),
    })
}

fn params_desc(params: &FamilyParams) -> String {
    let names = params.family().param_names();
    let values = params.to_vec();
    let mut s = format!("family = {}\n", params.family().name());
    for (name, value) in names.iter().zip(&values) {
        s += &format!("{name} = {value}\n");
    }
    s
}

pub fn dispatch(cli: Cli) -> Result<i32, Error> {
    let ctx = Ctx::resolve(&cli)?;
    match &cli.command {
        Command::Profile {
            fam,
            grid_span,
            grid_points,
        } => cmd_profile(&ctx, fam, *grid_span, *grid_points),
        Command::Dnp { fam, linewidth } => cmd_dnp(&ctx, fam, *linewidth),
        Command::Optimize { family, linewidth } => cmd_optimize(&ctx, family, linewidth),
        Command::Limit { linewidth } => cmd_limit(&ctx, linewidth),
        Command::Table1 { linewidth } => {
            let lws: Vec<f64> = linewidth.clone().unwrap_or_else(|| TABLE_LINEWIDTHS.to_vec());
            cmd_table1(&ctx, &lws)
        }
        Command::SlrDesign {
            length,
            bandwidth,
            samples,
            in_ripple,
            out_ripple,
        } => cmd_slr_design(&ctx, *length, *bandwidth, *samples, *in_ripple, *out_ripple),
    }
}

/// Single pulse of the chosen family used outside the DNP sequence (profile
/// plots). Square uses the lower-branch parameter set.
fn single_pulse(params: &FamilyParams, dt: f64) -> Result<PulseEnvelope, Error> {
    match params {
        FamilyParams::Square(p) => square_envelope(
            &SquareSpec {
                rabi: p.rabi_m1,
                duration_scale: 1.0 + p.dt_m1_pct / 100.0,
                detuning: p.delta_m1,
            },
            dt.min(1.0 / (2.0 * p.rabi_m1.max(1e-9) * 512.0)),
        ),
        FamilyParams::Gaussian(p) => gaussian_envelope(
            &GaussianSpec {
                peak_rabi: p.peak_rabi,
                detuning: p.detuning,
                ..GaussianSpec::default()
            },
            dt.min(1.6 / (p.peak_rabi.max(1e-9) * 512.0)),
        ),
        FamilyParams::Slr(p) => Ok(slr_design(&SlrSpec::default())?.with_detuning(p.detuning)),
    }
}

fn cmd_profile(
    ctx: &Ctx,
    fam: &FamilyArgs,
    grid_span: f64,
    grid_points: usize,
) -> Result<i32, Error> {
    if !(grid_span > 0.0) || grid_points < 2 {
        return Err(Error::Parse(format!(
            "profile grid: span {grid_span}, points {grid_points}"
        )));
    }
    let params = family_params(fam, &ctx.constants)?;
    let env = single_pulse(&params, ctx.propagation.dt)?;
    let n = grid_points;
    let grid: Vec<f64> = (0..n)
        .map(|i| -grid_span + 2.0 * grid_span * i as f64 / (n - 1) as f64)
        .collect();
    let profile = excitation_profile(&env, &grid);

    let desc = format!(
        "{}command = profile\n{}grid_span = {grid_span}\ngrid_points = {grid_points}\n",
        ctx.desc,
        params_desc(&params)
    );
    let mut csv = String::from("detuning_mhz,inversion\n");
    csv += &format!("# config_hash={}\n", config_hash(&desc));
    for (d, p) in grid.iter().zip(&profile) {
        csv += &format!("{},{}\n", sig6(*d), sig6(*p));
    }
    emit(ctx.out.as_deref(), &csv)?;
    Ok(0)
}

fn cmd_dnp(ctx: &Ctx, fam: &FamilyArgs, linewidth: f64) -> Result<i32, Error> {
    let params = family_params(fam, &ctx.constants)?;
    let pair = build_pulse_pair(&params, ctx.propagation.dt, None)?;
    let ens = ctx.ensemble(linewidth)?;
    let outcome = run_dnp_ensemble(&ctx.constants, &pair, &ens, &ctx.propagation)?;

    let desc = format!(
        "{}command = dnp\n{}linewidth = {linewidth}\n",
        ctx.desc,
        params_desc(&params)
    );
    let mut csv = String::from("offset_mhz,weight,p_mi0\n");
    csv += &format!("# config_hash={}\n", config_hash(&desc));
    csv += &format!("# p_avg={}\n", sig6(outcome.p_avg));
    for i in 0..outcome.members.len() {
        csv += &format!(
            "{},{},{}\n",
            sig6(outcome.offsets[i]),
            sig6(outcome.weights[i]),
            sig6(outcome.members[i])
        );
    }
    emit(ctx.out.as_deref(), &csv)?;
    println!("P_avg={}", sig6(outcome.p_avg));
    Ok(0)
}

fn parse_families(family: &str) -> Result<Vec<PulseFamily>, Error> {
    if family == "all" {
        Ok(vec![
            PulseFamily::Square,
            PulseFamily::Gaussian,
            PulseFamily::Slr,
        ])
    } else {
        Ok(vec![PulseFamily::parse(family)?])
    }
}

fn validate_linewidths(lws: &[f64]) -> Result<(), Error> {
    if lws.is_empty() {
        return Err(Error::Parse("empty linewidth list".into()));
    }
    for lw in lws {
        if !(*lw > 0.0) || !lw.is_finite() {
            return Err(Error::Parse(format!("linewidth {lw} (must be > 0)")));
        }
    }
    Ok(())
}

fn optimize_cells(
    ctx: &Ctx,
    families: &[PulseFamily],
    lws: &[f64],
) -> Result<Vec<OptimizationResult>, Error> {
    let mut results = Vec::new();
    for family in families {
        for lw in lws {
            let problem = OptimizationProblem::new(
                *family,
                *lw,
                ctx.constants,
                ctx.ensemble(*lw)?,
                ctx.propagation,
            );
            results.push(optimize(&problem)?);
        }
    }
    Ok(results)
}

/// Rows = (family, quantity), columns = linewidths.
fn optimize_csv(hash: &str, families: &[PulseFamily], lws: &[f64], results: &[OptimizationResult]) -> String {
    let mut csv = String::from("family,quantity");
    for lw in lws {
        csv += &format!(",{}", sig6(*lw));
    }
    csv += "\n";
    csv += &format!("# config_hash={hash}\n");
    let cell = |fi: usize, li: usize| &results[fi * lws.len() + li];
    for (fi, family) in families.iter().enumerate() {
        for (pi, name) in family.param_names().iter().enumerate() {
            csv += &format!("{},{}", family.name(), name);
            for li in 0..lws.len() {
                csv += &format!(",{}", sig6(cell(fi, li).params[pi]));
            }
            csv += "\n";
        }
        csv += &format!("{},p_avg", family.name());
        for li in 0..lws.len() {
            csv += &format!(",{}", sig6(cell(fi, li).p_avg));
        }
        csv += "\n";
        csv += &format!("{},converged", family.name());
        for li in 0..lws.len() {
            csv += &format!(",{}", if cell(fi, li).converged { 1 } else { 0 });
        }
        csv += "\n";
    }
    csv
}

fn cmd_optimize(ctx: &Ctx, family: &str, lws: &[f64]) -> Result<i32, Error> {
    let families = parse_families(family)?;
    validate_linewidths(lws)?;
    let results = optimize_cells(ctx, &families, lws)?;
    let desc = format!(
        "{}command = optimize\nfamily = {family}\nlinewidths = {lws:?}\n",
        ctx.desc
    );
    let csv = optimize_csv(&config_hash(&desc), &families, lws, &results);
    emit(ctx.out.as_deref(), &csv)?;
    if results.iter().any(|r| !r.converged) {
        eprintln!("warning: at least one optimization did not converge");
        return Ok(3);
    }
    Ok(0)
}

fn cmd_limit(ctx: &Ctx, lws: &[f64]) -> Result<i32, Error> {
    validate_linewidths(lws)?;
    let desc = format!("{}command = limit\nlinewidths = {lws:?}\n", ctx.desc);
    let mut csv = String::from("linewidth_mhz,p_limit\n");
    csv += &format!("# config_hash={}\n", config_hash(&desc));
    for lw in lws {
        let outcome = limit_ensemble(&ctx.constants, &ctx.ensemble(*lw)?)?;
        csv += &format!("{},{}\n", sig6(*lw), sig6(outcome.p_avg));
    }
    emit(ctx.out.as_deref(), &csv)?;
    Ok(0)
}

fn cmd_table1(ctx: &Ctx, lws: &[f64]) -> Result<i32, Error> {
    validate_linewidths(lws)?;
    let families = [
        PulseFamily::Square,
        PulseFamily::Gaussian,
        PulseFamily::Slr,
    ];
    let results = optimize_cells(ctx, &families, lws)?;
    let limits: Vec<f64> = lws
        .iter()
        .map(|lw| Ok(limit_ensemble(&ctx.constants, &ctx.ensemble(*lw)?)?.p_avg))
        .collect::<Result<_, Error>>()?;

    let desc = format!("{}command = table1\nlinewidths = {lws:?}\n", ctx.desc);
    let mut csv = String::from("quantity");
    for lw in lws {
        csv += &format!(",{}", sig6(*lw));
    }
    csv += "\n";
    csv += &format!("# config_hash={}\n", config_hash(&desc));
    let cell = |fi: usize, li: usize| &results[fi * lws.len() + li];
    for (fi, family) in families.iter().enumerate() {
        for (pi, name) in family.param_names().iter().enumerate() {
            csv += &format!("{}_{}", family.name(), name);
            for li in 0..lws.len() {
                csv += &format!(",{}", sig6(cell(fi, li).params[pi]));
            }
            csv += "\n";
        }
        csv += &format!("{}_p_avg", family.name());
        for li in 0..lws.len() {
            csv += &format!(",{}", sig6(cell(fi, li).p_avg));
        }
        csv += "\n";
    }
    csv += "limit_p_avg";
    for p in &limits {
        csv += &format!(",{}", sig6(*p));
    }
    csv += "\n";
    emit(ctx.out.as_deref(), &csv)?;
    if results.iter().any(|r| !r.converged) {
        eprintln!("warning: at least one optimization did not converge");
        return Ok(3);
    }
    Ok(0)
}

fn cmd_slr_design(
    ctx: &Ctx,
    length: f64,
    bandwidth: f64,
    samples: usize,
    in_ripple: f64,
    out_ripple: f64,
) -> Result<i32, Error> {
    let spec = SlrSpec {
        length,
        bandwidth,
        n_samples: samples,
        in_band_ripple: in_ripple,
        out_band_ripple: out_ripple,
        detuning: 0.0,
    };
    let env = slr_design(&spec)?;
    let desc = format!(
        "{}command = slr-design\nlength = {length}\nbandwidth = {bandwidth}\nsamples = {samples}\nin_ripple = {in_ripple}\nout_ripple = {out_ripple}\n",
        ctx.desc
    );
    let mut csv = String::from("time_us,rabi_mhz\n");
    csv += &format!("# config_hash={}\n", config_hash(&desc));
    for (k, s) in env.samples.iter().enumerate() {
        csv += &format!("{},{}\n", sig6(k as f64 * env.dt), sig6(*s));
    }
    emit(ctx.out.as_deref(), &csv)?;
    Ok(0)
}
