use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::settings::Profile;

#[derive(Debug, Parser, Serialize)]
#[command(name = "hyp", version, about = "Convolution, comparison and extremizer experiments on the one-sheeted hyperboloid")]
pub struct Cli {
    /// Directory for result, data and manifest files.
    #[arg(long, global = true, default_value = "hyp-out")]
    pub out: PathBuf,
    /// Quadrature tolerance preset (1e-6, 1e-8, 1e-10).
    #[arg(long, global = true, value_enum, default_value_t = Profile::Default)]
    pub profile: Profile,
    /// File of `key = value` lines presetting any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Closed-form convolution densities.
    Conv {
        #[command(subcommand)]
        action: ConvAction,
    },
    /// Scan of I(a)/II(a) against 2 pi.
    Figure1(Figure1Args),
    /// Small-a limits of the appendix quantities.
    Limits(LimitsArgs),
    /// Cap measures and the normalization and dyadic certificates.
    Cap(CapArgs),
    /// Lorentz invariance of the hyperboloid measure.
    Lorentz(LorentzArgs),
    /// Search for large values of the L4 quotient over radial profiles.
    Extremize(ExtremizeArgs),
    /// Bilinear decay between dyadic shells.
    Bilinear(BilinearArgs),
    /// Dyadic refinement statistics over a random corpus.
    Refine(RefineArgs),
    /// Tail bound for profiles supported far out.
    Tailbound(TailboundArgs),
    /// Convergence of hyperboloid convolutions to the cone.
    Conelimit(ConelimitArgs),
}

#[derive(Debug, Subcommand, Serialize)]
pub enum ConvAction {
    /// Density at one point, with branch tag and a quadrature cross-check.
    Eval(ConvEvalArgs),
    /// Closed forms against slice quadrature and Monte Carlo.
    Validate(ConvValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvKind {
    /// mu_s * mu_s
    #[value(name = "self")]
    #[serde(rename = "self")]
    SelfConv,
    /// mu_s * sigma_c
    Cone,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvEvalArgs {
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0)]
    pub rho: f64,
    #[arg(long, default_value_t = 2.0)]
    pub tau: f64,
    #[arg(long, value_enum, default_value_t = ConvKind::SelfConv)]
    pub kind: ConvKind,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvValidateArgs {
    /// Random interior points per density.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Relative tolerance between closed form and quadrature.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Monte-Carlo bump tests, at most `samples`.
    #[arg(long, default_value_t = 10)]
    pub bumps: usize,
    /// Sample pairs per Monte-Carlo test.
    #[arg(long, default_value_t = 2_000_000)]
    pub mc_samples: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 0.005)]
    pub amin: f64,
    #[arg(long, default_value_t = 0.25)]
    pub amax: f64,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Also write a polyline plot of the ratio.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitKind {
    /// I/II -> 2 pi.
    Ratio,
    /// Derivatives of I/II and of N/D.
    Derivs,
    /// The small-a integral identities.
    Asymp,
}

#[derive(Debug, Args, Serialize)]
pub struct LimitsArgs {
    #[arg(long, value_enum, default_value_t = LimitKind::Derivs)]
    pub which: LimitKind,
}

#[derive(Debug, Args, Serialize)]
pub struct CapArgs {
    #[arg(long, default_value_t = 0.1)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Boost the cap into normalized position.
    #[arg(long)]
    pub normalize: bool,
    /// Also certify the dyadic cap of this index.
    #[arg(long)]
    pub dyadic: Option<i32>,
}

#[derive(Debug, Args, Serialize)]
pub struct LorentzArgs {
    #[arg(long, default_value_t = 0.6)]
    pub t: f64,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [1.0, 0.0, 0.0])]
    pub axis: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtremizeArgs {
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    #[arg(long, default_value_t = 40.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub iters: usize,
    /// Evaluate the even two-sheet function built from the maximizer.
    #[arg(long)]
    pub full: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShellArg {
    Bump,
    Indicator,
}

#[derive(Debug, Args, Serialize)]
pub struct BilinearArgs {
    #[arg(long, default_value_t = 7)]
    pub kmax: usize,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, value_enum, default_value_t = ShellArg::Bump)]
    pub kind: ShellArg,
    /// Nodes per shell.
    #[arg(long, default_value_t = 48)]
    pub nodes: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct RefineArgs {
    #[arg(long, default_value_t = 100)]
    pub corpus: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub shells: usize,
    /// Nodes per shell on the coarse grid.
    #[arg(long, default_value_t = 12)]
    pub nodes: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TailboundArgs {
    #[arg(long, default_value_t = 10.0)]
    pub a: f64,
    /// Random tails checked besides the shell indicator.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ConelimitArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.25, 0.1, 0.05])]
    pub slist: Vec<f64>,
    /// Support of the indicator profile.
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
}
