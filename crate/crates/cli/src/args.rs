use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "modcurves", version, about = "Seeded finite-field experiments on plane curves, conic bundles and moduli divisors")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Working prime, below 2^32 and above 1000.
    #[arg(long, global = true, env = "MODCURVES_PRIME", default_value_t = 2_147_483_647)]
    pub prime: u64,
    /// Master seed; every random choice derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Trials per cell or number of samples, where applicable.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Certificate path; stdout when absent or `-`.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the rayon default.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Run every fan-out sequentially.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub sequential: bool,
    /// Omit the timestamp field.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub no_timestamp: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Dimensions of fat-point systems over a (d, delta) grid.
    Postulation(PostulationArgs),
    /// Sample and certify delta-nodal plane curves.
    SampleCurve(SampleCurveArgs),
    /// Re-verify nodal curve certificates from a file.
    CertifyCurve(InputArgs),
    /// Cremona reduction of a class `d;m1,m2,...`, or the rigidity bound.
    CremonaReduce(CremonaArgs),
    /// Sample a (2,2) conic bundle with delta nodes.
    SampleConicBundle(BundleArgs),
    /// Certify a sampled bundle, or re-verify a Prym certificate.
    PrymCertify(PrymArgs),
    /// Reports on the special surface and threefold families.
    Families(FamiliesArgs),
    /// Closed-form numerology.
    Arith(ArithArgs),
    /// Divisor classes and slopes on moduli of curves.
    Class(ClassArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PostulationArgs {
    #[arg(long, default_value_t = 12)]
    pub dmax: u32,
    #[arg(long, default_value_t = 30)]
    pub deltamax: usize,
    #[arg(long, default_value_t = 2)]
    pub multiplicity: u32,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SampleCurveArgs {
    #[arg(long)]
    pub degree: u32,
    #[arg(long)]
    pub delta: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct InputArgs {
    /// Certificate file, or `-` for stdin.
    pub input: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CremonaArgs {
    /// Class `d;m1,m2,...`; `m^k` repeats `m` k times.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "rigidity")]
    pub class: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub depth: usize,
    /// List the (d', delta') pairs compatible with rigidity in genus g.
    #[arg(long, conflicts_with = "class")]
    pub rigidity: Option<i64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BundleArgs {
    #[arg(long)]
    pub delta: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PrymArgs {
    /// Bundle or Prym certificate file, or `-` for stdin.
    pub input: String,
    /// Residue samples; `--trials` is an alias.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Enriques,
    Cayley,
    Segre,
    Quartics,
    All,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FamiliesArgs {
    #[arg(long, value_enum, default_value_t = Family::All)]
    pub family: Family,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ArithArgs {
    #[command(subcommand)]
    pub query: ArithQuery,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArithQuery {
    /// rho(g, r, d).
    Rho { g: i64, r: i64, d: i64 },
    /// Geometric genus of a degree-d plane curve with delta nodes.
    PlaneGenus { d: u32, delta: usize },
    /// Least plane degree for genus g.
    MinDegree { g: u32 },
    /// Degree of the k-gonal covering map in genus g = 2k - 2.
    CoverDegree { g: u64, k: u64 },
    /// Even and odd theta characteristics.
    Theta { g: u32 },
    /// Strata of 2-torsion points on a hyperelliptic Jacobian.
    Census { g: u64 },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    Mg,
    #[value(name = "spin+", alias = "spin-plus")]
    SpinPlus,
    #[value(name = "spin-", alias = "spin-minus")]
    SpinMinus,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Standard,
    Literal,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ClassArgs {
    #[arg(long, value_enum)]
    pub space: Space,
    #[arg(long)]
    pub genus: u32,
    /// Print 6 + 12/(g+1).
    #[arg(long, group = "query")]
    pub slope_bound: bool,
    /// Print the canonical class and its slope.
    #[arg(long, group = "query")]
    pub canonical: bool,
    /// Print the theta-null divisor class (even spin space).
    #[arg(long, group = "query")]
    pub theta_null: bool,
    /// Print the class of the odd-spin divisor with a vanishing theta section.
    #[arg(long, group = "query")]
    pub sigma: bool,
    /// Print the K3 Lefschetz pencil intersection numbers.
    #[arg(long, group = "query")]
    pub pencil: bool,
    /// Canonical class of a spin space through pullback from Mbar_g.
    #[arg(long, value_enum, group = "query")]
    pub pullback: Option<Rule>,
}
