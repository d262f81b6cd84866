//! Command-line front end: configuration loading, the reproduction commands
//! and CSV emission.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "nvdnp",
    version,
    about = "Simulate and optimize microwave pulses for 14N dynamic nuclear polarization in NV ensembles"
)]
pub struct Cli {
    /// Key/value file overriding the built-in physical constants.
    #[arg(long, global = true)]
    pub constants: Option<PathBuf>,
    /// Propagation step, µs.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub dt: f64,
    /// Ensemble grid size (odd).
    #[arg(long, global = true, default_value_t = 201)]
    pub members: usize,
    /// Ensemble half-width in units of linewidth/γe.
    #[arg(long, global = true, default_value_t = 6.0)]
    pub span: f64,
    /// CSV destination; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Pulse-family selection plus that family's parameters. Square pulses take
/// independent per-branch values; Gaussian and SLR share one set.
#[derive(Args)]
pub struct FamilyArgs {
    /// square | gaussian | slr
    #[arg(long)]
    pub family: String,
    /// Square Rabi frequency, lower branch (0 ↔ −1), MHz.
    #[arg(long)]
    pub rabi_m1: Option<f64>,
    /// Square Rabi frequency, upper branch (0 ↔ +1), MHz.
    #[arg(long)]
    pub rabi_p1: Option<f64>,
    /// Square carrier detuning, lower branch, MHz.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub det_m1: f64,
    /// Square carrier detuning, upper branch, MHz.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub det_p1: f64,
    /// Square duration deviation from the nominal π pulse, percent.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dtpct_m1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dtpct_p1: f64,
    /// Gaussian peak Rabi frequency, MHz.
    #[arg(long)]
    pub peak: Option<f64>,
    /// Shared carrier detuning (Gaussian and SLR), MHz.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub detuning: f64,
}

#[derive(Subcommand)]
pub enum Command {
    /// Two-level excitation profile of a single pulse over a detuning grid.
    Profile {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Profile half-width, MHz.
        #[arg(long, default_value_t = 6.0)]
        grid_span: f64,
        #[arg(long, default_value_t = 241)]
        grid_points: usize,
    },
    /// Full DNP cycle over the inhomogeneous ensemble; per-member CSV plus
    /// the averaged polarization.
    Dnp {
        #[command(flatten)]
        fam: FamilyArgs,
        /// ODMR linewidth, MHz.
        #[arg(long)]
        linewidth: f64,
    },
    /// Optimal pulse parameters per linewidth for one family or all three.
    Optimize {
        /// square | gaussian | slr | all
        #[arg(long, default_value = "all")]
        family: String,
        /// Comma-separated linewidth list, MHz.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        linewidth: Vec<f64>,
    },
    /// Step-function theoretical polarization limit per linewidth.
    Limit {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        linewidth: Vec<f64>,
    },
    /// Optimize all families plus the limit over the standard ten
    /// linewidths (overridable) and emit the full table.
    Table1 {
        #[arg(long, value_delimiter = ',')]
        linewidth: Option<Vec<f64>>,
    },
    /// Design the selective inversion pulse and dump its waveform.
    SlrDesign {
        /// Pulse length, µs.
        #[arg(long, default_value_t = 4.0)]
        length: f64,
        /// Inversion bandwidth, MHz.
        #[arg(long, default_value_t = 4.0)]
        bandwidth: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0.01)]
        in_ripple: f64,
        #[arg(long, default_value_t = 0.01)]
        out_ripple: f64,
    },
}

/// Parse arguments, execute, and map errors to the documented exit codes:
/// 0 success, 2 invalid input, 3 non-convergence (partial results written).
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
