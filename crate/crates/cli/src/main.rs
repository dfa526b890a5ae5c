use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Mesh-free quadrature rules for rational Bézier regions and solids.
#[derive(Debug, Parser)]
#[command(name = "greenquad", version, about)]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Gauss-Legendre along every curve.
    Spectral,
    /// Exact for polynomials up to `--degree`.
    Pe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Normal {
    /// Surface area element.
    Full,
    /// z component of the normal, as in the volume pipeline.
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sample {
    Circle,
    Square,
    Annulus,
    Lobed,
    Cube,
    Cylinder,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quadrature rule for a planar region, as CSV.
    Rule2d {
        #[arg(long, value_name = "FILE")]
        region: String,
        #[arg(long, value_enum, default_value = "spectral")]
        mode: Mode,
        /// Nodes per curve and along the antiderivative (spectral mode).
        #[arg(long, value_name = "Q")]
        order: Option<usize>,
        /// Antiderivative nodes when they should differ from `--order`.
        #[arg(long, value_name = "P", requires = "order")]
        antiderivative_order: Option<usize>,
        /// Polynomial degree made exact (pe mode).
        #[arg(long, value_name = "K")]
        degree: Option<usize>,
        /// Extra intermediate nodes per curve (pe mode).
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(short, long, value_name = "FILE")]
        output: Option<String>,
    },
    /// Surface rule over every patch of a solid, as CSV.
    RuleSurface {
        #[arg(long, value_name = "FILE")]
        solid: String,
        /// Intermediate and antiderivative node counts.
        #[arg(long, value_name = "MQ,NQ", value_delimiter = ',', num_args = 1)]
        orders: Vec<usize>,
        #[arg(long, value_enum, default_value = "full")]
        normal: Normal,
        #[arg(short, long, value_name = "FILE")]
        output: Option<String>,
    },
    /// Volume rule for a closed solid, as CSV.
    RuleVolume {
        #[arg(long, value_name = "FILE")]
        solid: String,
        /// Node counts; NP defaults to MQ.
        #[arg(long, value_name = "MQ,NQ[,NP]", value_delimiter = ',', num_args = 1)]
        orders: Vec<usize>,
        #[arg(short, long, value_name = "FILE")]
        output: Option<String>,
    },
    /// Integrate an expression with a saved rule or over a model.
    Integrate {
        /// Rule CSV written by one of the rule commands.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["model", "pe", "order"], required_unless_present = "model")]
        rule: Option<String>,
        /// Region or solid JSON file.
        #[arg(long, value_name = "FILE")]
        model: Option<String>,
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        expr: String,
        /// Use the polynomial-exact rule for the expression's degree (regions only).
        #[arg(long, conflicts_with = "order")]
        pe: bool,
        /// Quadrature order for `--model`.
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
    /// Geometric moments of a region or solid, as CSV.
    Moments {
        #[arg(long, value_name = "FILE")]
        model: String,
        #[arg(long, value_name = "P")]
        max_degree: u32,
        #[arg(short, long, value_name = "FILE")]
        output: Option<String>,
    },
    /// Fit cubic trim curves to sampled points, as region JSON.
    FitTrim {
        /// CSV of u,v rows; blank lines separate curves.
        #[arg(long, value_name = "FILE")]
        points: String,
        #[arg(long, value_name = "N")]
        segments: usize,
        #[arg(long, default_value_t = greenquad::trim_fit::DEFAULT_FIT_DEGREE)]
        degree: usize,
        #[arg(short, long, value_name = "FILE")]
        output: Option<String>,
    },
    /// Integrate at a range of orders and report the change from the highest.
    Convergence {
        #[arg(long, value_name = "FILE")]
        model: String,
        #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
        expr: String,
        /// Order range, inclusive.
        #[arg(long, value_name = "START:END[:STEP]")]
        orders: String,
        #[arg(short, long, value_name = "FILE")]
        output: Option<String>,
    },
    /// Write one of the built-in sample models as JSON.
    Sample {
        #[arg(value_enum)]
        name: Sample,
        #[arg(short, long, value_name = "FILE")]
        output: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
