use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msd_core::dynamics::{depolarized_t, BetaConvention, Policy};
use msd_core::map::norm;
use msd_core::{Bloch, Frame, MeasurementModel};

use crate::CliError;

/// Environment variable naming the default directory for relative `-o` paths.
pub const OUTPUT_DIR_ENV: &str = "MSD_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "msd", version, about = "Magic-state distillation under imperfect stabilizer measurements")]
pub struct Cli {
    /// Worker threads for sweeps and grids (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate the map from one input state (trajectory CSV).
    Iterate(IterateArgs),
    /// Map and classify a grid of inputs on a z-slice (flow CSV).
    Flow(FlowArgs),
    /// Locate the measurement-strength threshold β* (JSON).
    Threshold(ThresholdArgs),
    /// Track the target state and its X/Y error weights over a sweep (scan CSV).
    Deviation(DeviationArgs),
    /// Linear convergence rate k' over a sweep (scan CSV).
    Convergence(ConvergenceArgs),
    /// Recursion levels and raw-state cost (JSON).
    Cost(CostArgs),
    /// Standard form, logicals and destabilizers of a code (JSON).
    StandardForm(StandardFormArgs),
    /// Compare the map against the dense oracle (CSV, exit 3 on mismatch).
    OracleCheck(OracleArgs),
}

/// `start:stop:steps` (inclusive, evenly spaced) or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep(pub Vec<f64>);

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [v] => vec![num(v)?],
            [a, b, n] => {
                let (a, b) = (num(a)?, num(b)?);
                let n: usize = n.trim().parse().map_err(|_| format!("step count must be a positive integer: {n:?}"))?;
                match n {
                    0 => return Err("step count must be at least 1".into()),
                    1 => vec![a],
                    _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
                }
            }
            _ => return Err(format!("expected a value or start:stop:steps, got {s:?}")),
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(format!("non-finite value in {s:?}"));
        }
        Ok(Sweep(values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// λ = tanh β
    Tanh,
    /// λ = tanh²(β/2)
    TanhHalfSquared,
}

impl From<Convention> for BetaConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Tanh => BetaConvention::Tanh,
            Convention::TanhHalfSquared => BetaConvention::TanhHalfSquared,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    /// Flip y on feedback so |T⟩ is a fixed point.
    Conjugate,
    /// Feed the output back as is.
    Identity,
}

/// One measurement model, possibly swept. The flags are mutually exclusive.
#[derive(Debug, Clone, Args)]
#[group(id = "model", multiple = false)]
pub struct ModelArgs {
    /// Gaussian pointer strength β.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<Sweep>,
    /// Coefficient h in M ∝ I + h·g.
    #[arg(long = "h", allow_hyphen_values = true)]
    pub h: Option<Sweep>,
    /// Binary outcome-flip contrast η.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<Sweep>,
    /// Map coefficient λ directly.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<Sweep>,
    /// Continuous Gaussian readout strength κ.
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<Sweep>,
    /// How β becomes λ.
    #[arg(long, value_enum, default_value = "tanh")]
    pub convention: Convention,
}

/// A model value resolved to the map coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    /// β for Gaussian models, otherwise the Gaussian β with the same λ.
    pub beta: f64,
    pub lambda: f64,
}

impl ModelArgs {
    pub fn is_set(&self) -> bool {
        self.beta.is_some() || self.h.is_some() || self.eta.is_some() || self.lambda.is_some() || self.kappa.is_some()
    }

    pub fn points(&self) -> Result<Vec<ModelPoint>, CliError> {
        let usage = |e: msd_core::Error| CliError::Usage(e.to_string());
        let other = |values: &Sweep, make: fn(f64) -> msd_core::Result<MeasurementModel>| {
            values
                .0
                .iter()
                .map(|&v| {
                    let m = make(v).map_err(usage)?;
                    Ok(ModelPoint { beta: m.equivalent_beta(), lambda: m.lambda() })
                })
                .collect()
        };
        if let Some(s) = &self.beta {
            let conv = BetaConvention::from(self.convention);
            return s.0.iter().map(|&b| Ok(ModelPoint { beta: b, lambda: conv.lambda(b).map_err(usage)? })).collect();
        }
        if self.convention != Convention::Tanh {
            return Err(CliError::Usage("--convention only applies to --beta".into()));
        }
        match (&self.h, &self.eta, &self.lambda, &self.kappa) {
            (Some(s), ..) => other(s, MeasurementModel::coefficient_h),
            (_, Some(s), ..) => other(s, MeasurementModel::binary_eta),
            (_, _, Some(s), _) => other(s, MeasurementModel::raw_lambda),
            (.., Some(s)) => other(s, MeasurementModel::continuous_gaussian),
            _ => Err(CliError::Usage("one of --beta, --h, --eta, --lambda, --kappa is required".into())),
        }
    }

    /// The single model value of a non-sweep command.
    pub fn single(&self) -> Result<ModelPoint, CliError> {
        match self.points()?.as_slice() {
            [p] => Ok(*p),
            _ => Err(CliError::Usage("this command takes a single model value, not a sweep".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Built-in code name or path to a code file.
    #[arg(long)]
    pub code: String,
    /// Feedback frame.
    #[arg(long, value_enum, default_value = "conjugate")]
    pub frame: FrameArg,
    /// Logical qubit whose marginal is fed back when k > 1.
    #[arg(long, default_value_t = 0)]
    pub feedback: usize,
}

impl SystemArgs {
    pub fn policy(&self, convention: Convention) -> Policy {
        let frame = match self.frame {
            FrameArg::Conjugate => Frame::Conjugate,
            FrameArg::Identity => Frame::Identity,
        };
        Policy { frame, convention: convention.into(), feedback: self.feedback }
    }
}

/// `depolarized-T:ε` or `bloch:x,y,z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState(pub Bloch);

impl FromStr for InputState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, rest) =
            s.split_once(':').ok_or_else(|| format!("expected depolarized-T:eps or bloch:x,y,z, got {s:?}"))?;
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
        let r = match kind {
            "depolarized-T" => {
                let eps = num(rest)?;
                if !(0.0..=0.5).contains(&eps) {
                    return Err(format!("depolarizing rate {eps} outside [0, 0.5]"));
                }
                depolarized_t(eps)
            }
            "bloch" => {
                let v = rest.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
                let [x, y, z] = v[..] else { return Err(format!("bloch needs three components, got {}", v.len())) };
                [x, y, z]
            }
            _ => return Err(format!("unknown input kind {kind:?}")),
        };
        if norm(r).is_nan() || norm(r) > 1.0 + 1e-12 {
            return Err(format!("Bloch vector {r:?} lies outside the unit ball"));
        }
        Ok(InputState(r))
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (default: stdout). Relative paths resolve against $MSD_OUTPUT_DIR when set.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Initial state.
    #[arg(long, default_value = "depolarized-T:0.1")]
    pub input: InputState,
    /// Stop when a step moves less than this.
    #[arg(long, default_value = "1e-12", value_parser = positive)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Points per axis.
    #[arg(long, default_value_t = 21)]
    pub resolution: usize,
    /// Half-width of the square grid.
    #[arg(long, default_value = "1", value_parser = positive)]
    pub extent: f64,
    /// z coordinate of the slice.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z: f64,
    #[arg(long, default_value = "1e-12", value_parser = positive)]
    pub tol: f64,
    #[arg(long, default_value_t = 2000)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, value_enum, default_value = "tanh")]
    pub convention: Convention,
    #[arg(long, default_value_t = 0.5)]
    pub beta_lo: f64,
    #[arg(long, default_value_t = 4.0)]
    pub beta_hi: f64,
    /// Bisection tolerance on β.
    #[arg(long, default_value = "1e-3", value_parser = positive)]
    pub tol: f64,
    /// Continuation step in β.
    #[arg(long, default_value = "0.05", value_parser = positive)]
    pub step: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DeviationArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Append log-linear fits of m_x, m_y and |r* - T| against β.
    #[arg(long)]
    pub fit: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Seed for the fixed-point search.
    #[arg(long, default_value = "depolarized-T:0.01")]
    pub input: InputState,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    /// Take n and k from this code instead of --n/--k.
    #[arg(long)]
    pub code: Option<String>,
    #[arg(long, required_unless_present = "code")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "code")]
    pub k: Option<usize>,
    /// Raw input error.
    #[arg(long)]
    pub eps_raw: f64,
    /// Target error.
    #[arg(long)]
    pub eps: f64,
    /// Linear regime with this rate.
    #[arg(long, conflicts_with_all = ["d", "beta", "h", "eta", "lambda", "kappa"])]
    pub k_prime: Option<f64>,
    /// Ideal regime with this suppression order.
    #[arg(long, conflicts_with_all = ["beta", "h", "eta", "lambda", "kappa"])]
    pub d: Option<f64>,
    /// Prefactor of the ideal recursion ε' = c·ε^d.
    #[arg(long, default_value_t = 1.0, requires = "d")]
    pub c: f64,
    /// Linear regime with k' measured on --code at this model value.
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StandardFormArgs {
    /// Built-in code name or path to a code file.
    #[arg(long)]
    pub code: String,
    /// Also write the code with standard-form generators (original qubit order) here.
    #[arg(long)]
    pub code_out: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Codes to check (default: every built-in with n ≤ 10).
    #[arg(long)]
    pub code: Vec<String>,
    /// Largest tolerated difference.
    #[arg(long, default_value = "1e-10", value_parser = positive)]
    pub tol: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps() {
        assert_eq!("2".parse::<Sweep>().unwrap().0, vec![2.0]);
        assert_eq!("1:2:3".parse::<Sweep>().unwrap().0, vec![1.0, 1.5, 2.0]);
        assert_eq!("1:2:1".parse::<Sweep>().unwrap().0, vec![1.0]);
        assert!("1:2".parse::<Sweep>().is_err());
        assert!("1:2:0".parse::<Sweep>().is_err());
        assert!("a".parse::<Sweep>().is_err());
    }

    #[test]
    fn inputs() {
        assert_eq!("bloch:0,0,1".parse::<InputState>().unwrap().0, [0.0, 0.0, 1.0]);
        assert_eq!("depolarized-T:0.1".parse::<InputState>().unwrap().0, depolarized_t(0.1));
        assert!("bloch:1,1,0".parse::<InputState>().is_err());
        assert!("bloch:1,0".parse::<InputState>().is_err());
        assert!("depolarized-T:0.7".parse::<InputState>().is_err());
        assert!("pure:1".parse::<InputState>().is_err());
    }

    #[test]
    fn model_points() {
        let cli = Cli::try_parse_from(["msd", "iterate", "--code", "5-1-3", "--h", "0.5"]).unwrap();
        let Command::Iterate(a) = cli.command else { panic!() };
        let p = a.model.single().unwrap();
        assert!((p.lambda - 0.8).abs() < 1e-15);
        assert!((p.beta.tanh() - 0.8).abs() < 1e-15);
        assert!(Cli::try_parse_from(["msd", "iterate", "--code", "5-1-3", "--h", "0.5", "--beta", "1"]).is_err());
    }
}
