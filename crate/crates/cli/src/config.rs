use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::table::Format;

pub const OUTPUT_DIR_ENV: &str = "KSRELAX_OUTPUT_DIR";

/// Batch front end for Kilbas-Saigo evaluation, relaxation solvers,
/// transforms and renewal simulation.
#[derive(Debug, Clone, Parser)]
#[command(name = "ksrelax", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Output file. Without it the result goes to $KSRELAX_OUTPUT_DIR/<command>.<ext>
    /// when that variable is set, otherwise to stdout.
    #[arg(long, short, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// A grid: comma list `0.5,1,2` or `start:stop:count` (inclusive, linear).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let a: f64 = parts[0].trim().parse().map_err(|_| format!("bad grid start '{}'", parts[0]))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| format!("bad grid stop '{}'", parts[1]))?;
        let n: usize = parts[2].trim().parse().map_err(|_| format!("bad grid count '{}'", parts[2]))?;
        if n == 0 {
            return Err("grid count must be positive".into());
        }
        if n == 1 {
            return Ok(Grid(vec![a]));
        }
        let h = (b - a) / (n - 1) as f64;
        return Ok(Grid((0..n).map(|i| if i == n - 1 { b } else { a + h * i as f64 }).collect()));
    }
    if parts.len() != 1 {
        return Err(format!("grid '{s}' is neither a list nor start:stop:count"));
    }
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad grid value '{p}'")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty grid".into());
    }
    Ok(Grid(v))
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// Required for every stochastic command.
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// E_{a,m,l}(x) on a grid of real x.
    KsEval {
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        l: Option<f64>,
        /// Alternative to a, m, l: the stretched parameters (α, 1+γ/α, γ/α).
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        gamma: Option<f64>,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        x: Grid,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Laplace transform of t ↦ E(−λt^ν) at z = r·e^{iθ} for r on a grid.
    KsLaplace {
        #[command(flatten)]
        model: ModelArgs,
        /// Defaults to α + γ.
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        z: Grid,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        arg: f64,
        /// Contour abscissa; defaults to the midpoint of the admissible strip.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Series solution of the first- or second-order relaxation equation.
    Solve {
        #[arg(value_enum)]
        order: SolveOrder,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        /// First-order rate κ.
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        f0: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        df0: f64,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "0:1:11")]
        t: Grid,
        #[arg(long, default_value_t = 80)]
        nmax: usize,
    },
    /// Counting-process pmf tables.
    Pmf {
        #[arg(value_enum)]
        kind: PmfKindArg,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 30)]
        nmax: usize,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        b: Option<f64>,
    },
    /// Renewal trajectories or Laskin counts.
    Simulate {
        #[arg(value_enum)]
        process: ProcessArg,
        #[command(flatten)]
        model: ModelArgs,
        /// Horizon (renewal) or observation time (laskin).
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value = "beta")]
        sampler: String,
        #[arg(long, default_value = "fast")]
        interarrival: String,
        #[arg(long, default_value_t = ksrelax::stochastic::DEFAULT_DRAW_BUDGET)]
        max_draws: usize,
    },
    /// Analytic and Monte Carlo mean and variance of N^L(t).
    Moments {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        t: Grid,
        #[arg(long, default_value_t = 100_000)]
        draws: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value = "beta")]
        sampler: String,
    },
    /// Renewal count pmf against the Laskin pmf.
    Compare {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 100_000)]
        draws: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value = "fast")]
        interarrival: String,
        /// Exit with status 4 unless the result matches expectation: no bin
        /// beyond `z` standard errors when γ = 0, some bin beyond it otherwise.
        #[arg(long = "assert")]
        assert_mode: bool,
        #[arg(long, default_value_t = 3.0)]
        z: f64,
    },
    /// Renewal function E N(t) by Laplace inversion, next to Monte Carlo.
    RenewalFn {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
        t: Grid,
        #[arg(long, default_value_t = 100_000)]
        draws: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value = "fast")]
        interarrival: String,
        #[arg(long, default_value_t = ksrelax::stochastic::DEFAULT_DRAW_BUDGET)]
        max_draws: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveOrder {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PmfKindArg {
    Laskin,
    SecondOrder,
    Hat,
}

impl PmfKindArg {
    pub fn name(self) -> &'static str {
        match self {
            PmfKindArg::Laskin => "laskin",
            PmfKindArg::SecondOrder => "second-order",
            PmfKindArg::Hat => "hat",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProcessArg {
    Renewal,
    Laskin,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::KsEval { .. } => "ks-eval",
            Command::KsLaplace { .. } => "ks-laplace",
            Command::Solve { .. } => "solve",
            Command::Pmf { .. } => "pmf",
            Command::Simulate { .. } => "simulate",
            Command::Moments { .. } => "moments",
            Command::Compare { .. } => "compare",
            Command::RenewalFn { .. } => "renewal-fn",
        }
    }
}
