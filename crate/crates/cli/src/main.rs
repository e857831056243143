use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hjaf::harness::{
    run_convergence, run_indicators, write_convergence_outputs, ConvergenceConfig, IndicatorConfig, IndicatorVariant,
    SchemeName,
};
use hjaf::problems::Placement;
use hjaf::{Indicator2DConfig, Variant2D};

#[derive(Parser)]
#[command(name = "hjaf", version, about = "Adaptive filtered schemes for Hamilton-Jacobi equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run node loops on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence study on one of the evolution tests (5, 6, 7a, 7b, 8, 8s).
    Solve {
        #[arg(long)]
        test: String,
        /// monotone, hc, lw, lw2, richtmyer, rkc4, af-hc, af-rkc4, f-hc-fixed
        #[arg(long)]
        scheme: String,
        #[arg(long, default_value_t = 4)]
        refinements: usize,
        #[arg(long = "K", default_value_t = 1.0)]
        k: f64,
        #[arg(long = "M", default_value_t = 0.2)]
        m: f64,
        #[arg(long, default_value_t = 2.0)]
        sigma: f64,
        #[arg(long, value_enum, default_value_t = Indicator::Full)]
        indicator: Indicator,
        /// ε/Δx for f-hc-fixed.
        #[arg(long, default_value_t = 20.0)]
        epsilon_fixed: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ω and φ maps for the indicator tests (1 to 4).
    Indicators {
        #[arg(long)]
        test: String,
        #[arg(long)]
        dx: f64,
        #[arg(long, value_enum, default_value_t = PlacementArg::Node)]
        placement: PlacementArg,
        /// 1D: raw, mapped-g, weno-z, weno-z-new. 2D: full, partial, split
        /// (suffix -raw or -weno-z to change the mapping).
        #[arg(long)]
        variant: String,
        #[arg(long = "M", default_value_t = 0.2)]
        m: f64,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Indicator {
    Full,
    Partial,
    Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlacementArg {
    Node,
    Cell,
}

fn run(cli: Cli) -> hjaf::Result<()> {
    if cli.sequential {
        hjaf::par::set_execution(hjaf::par::Execution::Sequential);
    }
    match cli.command {
        Command::Solve { test, scheme, refinements, k, m, sigma, indicator, epsilon_fixed, out } => {
            let mut cfg = ConvergenceConfig::new(&test, SchemeName::parse(&scheme)?, refinements);
            cfg.k_factor = k;
            cfg.epsilon_fixed_factor = epsilon_fixed;
            cfg.indicator = Indicator2DConfig {
                sigma,
                threshold: m,
                variant: match indicator {
                    Indicator::Full => Variant2D::Full,
                    Indicator::Partial => Variant2D::Partial,
                    Indicator::Split => Variant2D::Split,
                },
                ..Indicator2DConfig::default()
            };
            let run = run_convergence(&cfg)?;
            print!("{}", run.report.to_csv_string()?);
            if let Some(dir) = out {
                write_convergence_outputs(&run, &cfg, &dir)?;
            }
        }
        Command::Indicators { test, dx, placement, variant, m, sigma, out } => {
            let cfg = IndicatorConfig {
                test,
                dx,
                placement: match placement {
                    PlacementArg::Node => Placement::OnNode,
                    PlacementArg::Cell => Placement::InCell,
                },
                variant: IndicatorVariant::parse(&variant)?,
                threshold: m,
                sigma,
            };
            let r = run_indicators(&cfg)?;
            let zeros = r.phi.iter().filter(|p| **p == 0.0).count();
            println!("nodes {}, phi = 0 at {zeros}", r.phi.len());
            if let Some(dir) = out {
                r.write_outputs(&dir)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
