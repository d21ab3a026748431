use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expochar::alternatives::FamilySpec;
use expochar::vstat::Convention;
use expochar::DEFAULT_SEED;

/// Scale-free tests for exponentiality based on X0 + med(X1,X2,X3) = max(X1,X2,X3).
#[derive(Debug, Parser)]
#[command(name = "expochar", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Md)]
    pub format: Format,

    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Stat {
    I,
    K,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a data file for exponentiality.
    Test(TestArgs),
    /// Tabulate Monte Carlo critical values.
    Critvals(CritvalsArgs),
    /// Estimate power against alternatives.
    Power(PowerArgs),
    /// Local Bahadur efficiencies, or the curves behind them.
    Efficiency(EfficiencyArgs),
    /// Simulate both sides of the characterizing identity.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct Calibration {
    /// Monte Carlo replications.
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Indicator convention: `strict` (<) or `weak` (<=).
    #[arg(long, default_value_t = Convention::Strict)]
    pub convention: Convention,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Whitespace-separated observations, `#` starts a comment line.
    /// Without this flag the bundled aircraft data set is used.
    #[arg(long)]
    pub data: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Stat::Both)]
    pub stat: Stat,

    /// Significance levels, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05])]
    pub alpha: Vec<f64>,

    /// Reject the I-test for small values as well as large ones.
    #[arg(long)]
    pub two_sided: bool,

    #[command(flatten)]
    pub calibration: Calibration,
}

#[derive(Debug, Args)]
pub struct CritvalsArgs {
    #[arg(long, value_enum, default_value_t = Stat::K)]
    pub stat: Stat,

    /// Sample sizes, comma separated.
    #[arg(long, alias = "n", value_delimiter = ',', default_values_t = [10, 20, 30, 40, 50, 100])]
    pub sizes: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.05, 0.025, 0.01])]
    pub alpha: Vec<f64>,

    /// Directory for cached null distributions.
    #[arg(long)]
    pub cache: Option<PathBuf>,

    #[command(flatten)]
    pub calibration: Calibration,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Alternatives such as `weibull:0.4` or `u`; the standard roster by default.
    #[arg(long, value_delimiter = ',')]
    pub family: Vec<FamilySpec>,

    #[arg(long, value_enum, default_value_t = Stat::Both)]
    pub stat: Stat,

    /// Sample sizes, comma separated.
    #[arg(long, alias = "sizes", value_delimiter = ',', default_values_t = [20])]
    pub n: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_values_t = [0.05])]
    pub alpha: Vec<f64>,

    #[command(flatten)]
    pub calibration: Calibration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// Null variance of the K-test projection over levels t.
    Sigma2,
    /// Derivative in theta at zero of the K-statistic limit, over levels t.
    Slope,
}

#[derive(Debug, Args)]
pub struct EfficiencyArgs {
    /// Families such as `weibull` or `emnw:3`; the five tabulated ones by default.
    #[arg(long, value_delimiter = ',')]
    pub family: Vec<FamilySpec>,

    #[arg(long, value_enum, default_value_t = Stat::Both)]
    pub stat: Stat,

    /// Emit a curve as (t, value) rows instead of efficiencies.
    #[arg(long, value_enum)]
    pub curve: Option<Curve>,

    /// Grid step and upper end of a curve.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    #[arg(long, default_value_t = 10.0)]
    pub max_t: f64,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Families to simulate from; `exp,u` by default.
    #[arg(long, value_delimiter = ',')]
    pub family: Vec<FamilySpec>,

    #[arg(long, default_value_t = 100_000)]
    pub quadruples: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}
