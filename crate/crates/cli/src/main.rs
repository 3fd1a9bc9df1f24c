#![allow(clippy::result_large_err)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hvir::cli::{parse_jacobi_window, phi_variant, run, window_for, CliError, Command, OutputMode, Verb};
use hvir::parse::{parse_element, parse_group, parse_params, parse_rational_list};
use hvir::{ModuleParams, RescalingMap, SubgroupSpec};

/// Exact computations in generalized Heisenberg-Virasoro algebras and their
/// intermediate-series modules.
#[derive(Parser)]
#[command(name = "hvir", version)]
struct Cli {
    /// Emit the structured (JSON) report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: VerbArgs,
}

#[derive(Subcommand)]
enum VerbArgs {
    /// Lie bracket of two elements.
    Bracket { x: String, y: String },
    /// Check the Jacobi identity on basis triples with indices n/k!, |n| <= bound.
    Jacobi {
        /// `<k>:<bound>`
        #[arg(long)]
        window: String,
        /// Check this many random sparse triples instead of all basis triples.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Apply an element to the basis vector v(index).
    Act {
        params: String,
        expr: String,
        #[arg(long)]
        at: String,
    },
    /// Reducibility verdict for V(alpha,beta;F).
    Classify { params: String },
    /// Compare the irreducible subquotients of two modules.
    Iso { p1: String, p2: String },
    /// Apply the rescaling map HVir[Z] -> HVir[Q_m].
    Phi {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        variant: String,
        expr: String,
    },
    /// Window-truncated submodule generated by basis vectors.
    Closure {
        params: String,
        #[arg(long)]
        window: u32,
        /// Comma-separated indices.
        #[arg(long)]
        seed: String,
        /// Window group; defaults to the module's group.
        #[arg(long)]
        window_group: Option<String>,
    },
    /// Empirical reducibility scan over a window.
    Scan {
        params: String,
        #[arg(long)]
        window: u32,
        #[arg(long)]
        window_group: Option<String>,
    },
    /// Split a window into cosets of a subgroup.
    Restrict {
        params: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        window: u32,
    },
    /// Recover (alpha, beta, F) from an action table file.
    Recover {
        #[arg(long)]
        table: PathBuf,
    },
}

fn window_group(params: &ModuleParams, explicit: Option<&str>) -> Result<SubgroupSpec, CliError> {
    match explicit {
        Some(text) => Ok(parse_group(text)?),
        None => Ok(params.group().clone()),
    }
}

fn build(verb: VerbArgs) -> Result<Verb, CliError> {
    Ok(match verb {
        VerbArgs::Bracket { x, y } => Verb::Bracket { x: parse_element(&x)?, y: parse_element(&y)? },
        VerbArgs::Jacobi { window, samples, seed } => {
            let (k, bound) = parse_jacobi_window(&window)?;
            Verb::Jacobi { k, bound, samples, seed }
        }
        VerbArgs::Act { params, expr, at } => {
            Verb::Act { params: parse_params(&params)?, x: parse_element(&expr)?, at: at.parse()? }
        }
        VerbArgs::Classify { params } => Verb::Classify { params: parse_params(&params)? },
        VerbArgs::Iso { p1, p2 } => Verb::Iso { p1: parse_params(&p1)?, p2: parse_params(&p2)? },
        VerbArgs::Phi { m, variant, expr } => {
            Verb::Phi { map: RescalingMap::new(m, phi_variant(&variant)?)?, x: parse_element(&expr)? }
        }
        VerbArgs::Closure { params, window, seed, window_group: wg } => {
            let params = parse_params(&params)?;
            let window = window_for(&window_group(&params, wg.as_deref())?, window)?;
            Verb::Closure { params, window, seeds: parse_rational_list(&seed)? }
        }
        VerbArgs::Scan { params, window, window_group: wg } => {
            let params = parse_params(&params)?;
            let window = window_for(&window_group(&params, wg.as_deref())?, window)?;
            Verb::Scan { params, window }
        }
        VerbArgs::Restrict { params, subgroup, window } => {
            let params = parse_params(&params)?;
            let window = window_for(params.group(), window)?;
            Verb::Restrict { params, subgroup: parse_group(&subgroup)?, window }
        }
        VerbArgs::Recover { table } => Verb::Recover { table },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = if cli.json { OutputMode::Structured } else { OutputMode::Text };
    let result = build(cli.verb).and_then(|verb| run(&Command { verb, output }));
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error[{}]: {err}", err.code());
            ExitCode::from(err.exit_status() as u8)
        }
    }
}
