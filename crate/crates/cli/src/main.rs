mod commands;
mod input;
mod output;

use std::fs;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qcb_core::detection::Scheme;
use qcb_core::ChannelClass;

use crate::commands::{OracleArgs, VerifyArgs};
use crate::output::{Format, Report};

/// Upper bounds on outcome probabilities in qubit channel measurements.
#[derive(Parser, Debug)]
#[command(name = "qcb", version)]
struct Cli {
    /// Output format; `compare` and `detect --sweep` default to csv, everything else to table.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Seed for every randomized computation.
    #[arg(long, env = "QCB_SEED", default_value_t = 0, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Both,
    Entangled,
    AncillaFree,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// All five class bounds for a state.
    Bound {
        /// JSON file or preset: maximally-entangled, maximally-mixed, product-00, werner-state:<w>.
        #[arg(long)]
        tau: String,
    },
    /// Fully entangled fraction of a state.
    Fef {
        #[arg(long)]
        tau: String,
    },
    /// Outcome probabilities of a PPOVM on a channel.
    Prob {
        /// JSON file or preset: entangled, ancilla-free.
        #[arg(long)]
        ppovm: String,
        /// JSON file or preset: identity, depolarizing, werner:<w>.
        #[arg(long)]
        channel: String,
        /// Also print the class bound of each outcome.
        #[arg(long)]
        class: Option<ChannelClass>,
    },
    /// Convertibility of (ψ, φ) into (e, f) for every class.
    Convert {
        #[arg(long, value_parser = input::parse_number, requires = "y", conflicts_with = "instance")]
        x: Option<f64>,
        #[arg(long, value_parser = input::parse_number, requires = "x")]
        y: Option<f64>,
        /// JSON instance file.
        #[arg(long)]
        instance: Option<String>,
        /// Construct the optimal channel for this class.
        #[arg(long)]
        achiever: Option<ChannelClass>,
    },
    /// Difference of two class values along a one-parameter family.
    Compare {
        /// Two classes, e.g. UE,D.
        #[arg(long)]
        pair: String,
        /// x=<value> or y=<value>, e.g. x=1/sqrt2.
        #[arg(long)]
        family: String,
        /// Number of grid intervals on [0, 1].
        #[arg(long, default_value_t = 1000)]
        grid: usize,
    },
    /// Non-entanglement-breaking detection for the Werner family.
    Detect {
        #[arg(long, value_parser = input::parse_number, required_unless_present = "sweep", conflicts_with = "sweep")]
        w: Option<f64>,
        /// Tabulate n evenly spaced w in [0, 1].
        #[arg(long)]
        sweep: Option<usize>,
        #[arg(long, value_enum, default_value_t = SchemeArg::Both)]
        scheme: SchemeArg,
        /// Simulate this many shots instead of using exact probabilities.
        #[arg(long, conflicts_with = "sweep")]
        shots: Option<u64>,
        /// Normal quantile for the Wilson interval.
        #[arg(long, default_value_t = 1.96)]
        z: f64,
    },
    /// Numerical maximum of tr[τ J] over a class.
    Oracle {
        #[arg(long)]
        tau: String,
        /// Defaults to all five classes.
        #[arg(long)]
        class: Option<ChannelClass>,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        refine: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
    },
    /// Check the bounds against random channels and the oracle.
    Verify {
        /// Defaults to all five classes.
        #[arg(long)]
        class: Option<ChannelClass>,
        #[arg(long, default_value_t = 100)]
        n_tau: usize,
        #[arg(long, default_value_t = 1000)]
        n_channels: usize,
        /// Random states on which to run the oracle.
        #[arg(long, default_value_t = 0)]
        gap_samples: usize,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        refine: Option<usize>,
    },
}

fn classes(class: Option<ChannelClass>) -> Vec<ChannelClass> {
    class.map_or_else(|| ChannelClass::ALL.to_vec(), |c| vec![c])
}

/// The report, its default format, and whether the run succeeded.
fn run(cli: &Cli) -> Result<(Report, Format, bool)> {
    let table = Format::Table;
    Ok(match &cli.command {
        Command::Bound { tau } => (commands::bound(&input::tau(tau)?)?, table, true),
        Command::Fef { tau } => (commands::fef_report(&input::tau(tau)?), table, true),
        Command::Prob { ppovm, channel, class } => (commands::prob(ppovm, channel, *class)?, table, true),
        Command::Convert { x, y, instance, achiever } => {
            let inst = match (x, y, instance) {
                (Some(x), Some(y), _) => qcb_core::ConversionInstance::from_overlaps(*x, *y)?,
                (_, _, Some(path)) => input::instance(path)?,
                _ => anyhow::bail!(qcb_core::Error::Validation("give --x and --y, or --instance".into())),
            };
            (commands::convert(&inst, *achiever)?, table, true)
        }
        Command::Compare { pair, family, grid } => (commands::compare(pair, family, *grid)?, Format::Csv, true),
        Command::Detect { w, sweep, scheme, shots, z } => match (w, sweep) {
            (_, Some(n)) => (commands::sweep(*n)?, Format::Csv, true),
            (Some(w), None) => {
                let schemes = match scheme {
                    SchemeArg::Both => Scheme::ALL.to_vec(),
                    SchemeArg::Entangled => vec![Scheme::Entangled],
                    SchemeArg::AncillaFree => vec![Scheme::AncillaFree],
                };
                (commands::detect(*w, &schemes, *shots, cli.seed, *z)?, table, true)
            }
            (None, None) => unreachable!("clap requires --w or --sweep"),
        },
        Command::Oracle { tau, class, starts, refine, iters } => {
            let args = OracleArgs { starts: *starts, refine: *refine, iters: *iters, seed: cli.seed };
            (commands::oracle(&input::tau(tau)?, &classes(*class), &args)?, table, true)
        }
        Command::Verify { class, n_tau, n_channels, gap_samples, starts, refine } => {
            let args = VerifyArgs {
                n_tau: *n_tau,
                n_channels: *n_channels,
                gap_samples: *gap_samples,
                oracle: OracleArgs { starts: *starts, refine: *refine, iters: None, seed: cli.seed },
            };
            let (report, ok) = commands::verify(&classes(*class), &args)?;
            (report, table, ok)
        }
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<qcb_core::Error>()) {
        Some(qcb_core::Error::Infeasible(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|(report, default, ok)| {
        let text = report.render(cli.format.unwrap_or(default))?;
        match &cli.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {path}"))?,
            None => print!("{text}"),
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
