use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use subplanck::C64;

use crate::complex::{parse_complex, Complex};

#[derive(Debug, Parser)]
#[command(
    name = "subplanck",
    version,
    about = "Sub-Planck phase-space metrology with cat and compass states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Wigner function of a circular state on a grid (CSV + graymap).
    Wigner(WignerArgs),
    /// Exact, linearized and optional phase-space overlaps over a sweep.
    Overlap(OverlapArgs),
    /// Excited-state probability of the measurement protocols over a sweep.
    Protocol(ProtocolArgs),
    /// Monte Carlo readout and arccos estimation of a displacement.
    Estimate(EstimateArgs),
    /// Interaction time against a decoherence budget.
    Feasibility(FeasibilityArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StateArgs {
    /// Circle amplitude α as `a+bi`.
    #[arg(long, default_value = "0+4i", value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Complex,
    /// Number of coherent components M.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Component phases γ_1..γ_M (radians, comma separated); zeros by default.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub gammas: Option<Vec<f64>>,
}

impl StateArgs {
    pub fn alpha(&self) -> C64 {
        self.alpha.into()
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.gammas.clone().unwrap_or_else(|| vec![0.0; self.m])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PertKind {
    None,
    Displacement,
    Rotation,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    /// Real-axis bounds `min,max`; auto-sized when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub re_range: Option<Vec<f64>>,
    /// Imaginary-axis bounds `min,max`; auto-sized when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub im_range: Option<Vec<f64>>,
    /// Points along the real axis (with --re-range).
    #[arg(long)]
    pub nx: Option<usize>,
    /// Points along the imaginary axis (with --im-range).
    #[arg(long)]
    pub ny: Option<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WignerArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Pre-displacement η applied to the state (`a+bi`).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub eta: Option<Complex>,
    /// Perturbation applied before rendering (or paired with --product).
    #[arg(long, value_enum, default_value = "none")]
    pub pert: PertKind,
    /// Displacement magnitude s.
    #[arg(long, default_value_t = 0.0)]
    pub s: f64,
    /// Rotation angle θ (radians).
    #[arg(long, default_value_t = 0.0)]
    pub theta: f64,
    /// Displacement direction φ (radians); orthogonal to α when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// Render W_ψ · W_{Uψ} instead of a single field.
    #[arg(long)]
    pub product: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output stem; writes `<out>.csv` and `<out>.pgm`.
    #[arg(long, default_value = "wigner")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Displacement,
    Rotation,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Perturbation family swept.
    #[arg(long, value_enum, default_value = "displacement")]
    pub kind: SweepKind,
    /// Displacement direction φ (radians); orthogonal to α when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// First magnitude (s or θ).
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    /// Last magnitude (s or θ).
    #[arg(long, default_value_t = 0.4)]
    pub to: f64,
    /// Number of sweep points.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OverlapArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Add a phase-space quadrature column.
    #[arg(long)]
    pub quadrature: bool,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    Dispersive,
    Resonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Linearized,
    Exact,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProtocolArgs {
    /// Coherent amplitude α as `a+bi`.
    #[arg(long, default_value = "0+4i", value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Complex,
    #[arg(long, value_enum, default_value = "dispersive")]
    pub regime: RegimeArg,
    /// Interaction time as a fraction of half the revival time (resonant).
    #[arg(long, default_value_t = 1.0)]
    pub dt_fraction: f64,
    /// Perturbation model on the oscillator branches (dispersive).
    #[arg(long, value_enum, default_value = "linearized")]
    pub model: ModelArg,
    /// Displacement direction φ; orthogonal to α (dispersive) or along α
    /// (resonant) when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, value_enum, default_value = "displacement")]
    pub kind: SweepKind,
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    #[arg(long, default_value_t = 0.4)]
    pub to: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    Dispersive,
    Resonant,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    /// Coherent amplitude α as `a+bi`.
    #[arg(long, default_value = "0+4i", value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Complex,
    /// True displacement s; mid-fringe π/(8|α|) when omitted.
    #[arg(long)]
    pub s: Option<f64>,
    /// Repetitions R per estimate.
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    /// Number of independent estimates.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Master seed (ChaCha8; trial k uses stream k).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fringe the counts are inverted against.
    #[arg(long, value_enum, default_value = "dispersive")]
    pub convention: ConventionArg,
    /// Run mid-fringe calibrations at these n̄ (α = i√n̄) and fit the exponent.
    #[arg(long, value_delimiter = ',')]
    pub nbar_sweep: Option<Vec<f64>>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlatformArg {
    Cavity,
    Ion,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FeasibilityArgs {
    /// Vacuum Rabi frequency Ω₀ (s⁻¹).
    #[arg(
        long,
        conflicts_with = "rabi_period",
        required_unless_present = "rabi_period"
    )]
    pub omega0: Option<f64>,
    /// Vacuum Rabi period 2π/Ω₀ (s), as an alternative to --omega0.
    #[arg(long)]
    pub rabi_period: Option<f64>,
    /// Mean excitation n̄.
    #[arg(long, default_value_t = 20.0)]
    pub nbar: f64,
    /// Decoherence budget (s): cavity damping time, or the cat-state
    /// decoherence time for ions.
    #[arg(long)]
    pub budget: f64,
    #[arg(long, value_enum, default_value = "cavity")]
    pub platform: PlatformArg,
}
