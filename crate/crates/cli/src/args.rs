use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "carnot", version, about = "Exponential map and exponents of step-two Carnot groups")]
pub struct Cli {
    /// Worker threads for parallel sampling (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions, structure checks and known exponents of a group.
    Info(GroupArg),
    /// Endpoint of the unit-time geodesic with initial covector (ξ, μ).
    Sexp(PointArgs),
    /// Jacobian determinant of the exponential map.
    Jacobian(JacobianArgs),
    /// RK4 trajectory of the geodesic equations.
    Flow(FlowArgs),
    /// Krylov filtration and the order Γ(ξ, μ).
    Filtration(FiltrationArgs),
    /// Γ(G), a lower bound for Γ̂(G), and the derived exponents.
    Exponents(ExponentArgs),
    /// Numerical leading order of λ ↦ Jac(ζ_λ(ξ, μ)).
    LeadingOrder(LeadingArgs),
    /// Monte Carlo volumes of intermediate sets and their log-log slope.
    VolumeScan(VolumeArgs),
    /// Curvature-exponent inequality at one covector.
    CeCheck(CeCheckArgs),
    /// Sampled search for a violation of the curvature-exponent inequality.
    CeSearch(CeSearchArgs),
    /// Invariant suite; exits 1 if any property fails.
    Verify(VerifyArgs),
    /// Re-runs the command recorded in an output file and compares results.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GroupArg {
    /// heisenberg, free:k, star:k, ga:<matrix.json> or a group spec JSON file.
    #[arg(long)]
    pub group: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CovectorArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub xi: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub mu: Vec<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PointArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cov: CovectorArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct JacobianArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cov: CovectorArgs,
    /// Use central differences with this step instead of the series differential.
    #[arg(long, conflicts_with = "extended")]
    pub finite_difference: Option<f64>,
    /// Also evaluate the determinant in double-double arithmetic.
    #[arg(long)]
    pub extended: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FlowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cov: CovectorArgs,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Emit every n-th state.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub out: Format,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FiltrationArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cov: CovectorArgs,
    #[arg(long, default_value_t = carnot_core::gamma::DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SeedArg {
    #[arg(long, env = "CARNOT_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExponentArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
    /// auto, none, or a strata JSON file.
    #[arg(long, default_value = "auto")]
    pub strata: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    /// Number of geometric grid points.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LeadingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cov: CovectorArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = carnot_core::analysis::DEFAULT_FLOOR)]
    pub floor: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VolumeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    /// Center of the covector box.
    #[command(flatten)]
    #[serde(flatten)]
    pub cov: CovectorArgs,
    /// Half-width of the covector box.
    #[arg(long, default_value_t = 0.1)]
    pub radius: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub out: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProxyKind {
    /// Positive Jacobian along the ray to the covector.
    General,
    /// The closed-form box test; only for ga groups.
    Ga,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CeCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub cov: CovectorArgs,
    /// Exponent N under test.
    #[arg(long = "n")]
    pub n_exp: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub proxy: Option<ProxyKind>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CeSearchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[arg(long = "n")]
    pub n_exp: f64,
    /// Sample budget.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
    #[arg(long, default_value = "auto")]
    pub strata: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub proxy: Option<ProxyKind>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub group: GroupArg,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ReplayArgs {
    /// JSON output of an earlier run.
    pub file: std::path::PathBuf,
}
