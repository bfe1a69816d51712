use clap::{Args, Parser, Subcommand};
use poincare_core::MomentumConstants;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "poincare",
    version,
    about = "Poincaré vector⊕tensor representation toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Integrate a scenario and write its trajectory as CSV
    Simulate(SimulateArgs),
    /// Classify the connection produced by a choice of C1..C4
    ScanConnection(ScanArgs),
    /// Recompute η V·V and τ spacing for a trajectory CSV
    CheckInvariants(CheckArgs),
    /// Print generator and translation matrices
    Show {
        #[command(subcommand)]
        target: ShowTarget,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyTarget {
    /// Commutation rules, momentum nilpotency and Lorentz metric preservation
    Algebra(AlgebraArgs),
}

#[derive(Debug, Subcommand)]
pub enum ShowTarget {
    /// J^{ρσ} as a 20×20 matrix
    Generator {
        #[arg(long)]
        rho: usize,
        #[arg(long)]
        sigma: usize,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// P^μ as a 20×20 matrix
    Momentum {
        #[arg(long)]
        mu: usize,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// D(1, δx) = I − i δx_σ P^σ
    TranslationMatrix {
        /// Displacement `x,y,z,t`
        #[arg(long, value_parser = parse_four, allow_hyphen_values = true)]
        dx: [f64; 4],
        #[command(flatten)]
        constants: ConstantArgs,
    },
}

/// Momentum constants: explicit `--c1..--c4` (missing ones are 0) or the
/// default form with scale `--k` (1 if omitted).
#[derive(Debug, Clone, Default, Args)]
pub struct ConstantArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c3: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c4: Option<f64>,
    /// Scale of the default constants C2 = −C3 = k/2
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["c1", "c2", "c3", "c4"])]
    pub k: Option<f64>,
}

impl ConstantArgs {
    pub fn resolve(&self) -> MomentumConstants {
        let cs = [self.c1, self.c2, self.c3, self.c4];
        if cs.iter().any(Option::is_some) {
            let [c1, c2, c3, c4] = cs.map(|c| c.unwrap_or(0.0));
            MomentumConstants::new(c1, c2, c3, c4)
        } else {
            MomentumConstants::default_for(self.k.unwrap_or(1.0))
        }
    }
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    #[command(flatten)]
    pub constants: ConstantArgs,
    /// Perturb one entry of J^{RS} before verifying
    #[arg(long, hide = true, value_parser = parse_pair)]
    pub corrupt_j: Option<(usize, usize)>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario JSON file
    #[arg(long)]
    pub config: PathBuf,
    /// Trajectory CSV to write
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub c1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c3: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub c4: f64,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Trajectory CSV to check
    #[arg(long)]
    pub traj: PathBuf,
    /// Largest acceptable |η V·V − η V₀·V₀|
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

fn parse_four(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [a, b, c, d] = parts.as_slice() else {
        return Err(format!("expected 4 comma-separated numbers, got `{s}`"));
    };
    let mut out = [0.0; 4];
    for (slot, p) in out.iter_mut().zip([a, b, c, d]) {
        *slot = p
            .trim()
            .parse()
            .map_err(|_| format!("not a number: `{p}`"))?;
    }
    Ok(out)
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `R,S`, got `{s}`"))?;
    let parse = |p: &str| {
        p.trim()
            .parse::<usize>()
            .map_err(|_| format!("not an index: `{p}`"))
    };
    Ok((parse(a)?, parse(b)?))
}
