mod text;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynrat::arith::FactorBudget;
use dynrat::census::{density, periodic_census_with, CensusConfig};
use dynrat::dynamics::{exclusion_filter_with, periodic_report_with, SearchConfig, SearchStrategy};
use dynrat::iterates::{cleared_iterate_with, critical_orbit_with, iterate_coeffs_with, SizeGuard, DEFAULT_MAX_SLOTS};
use dynrat::newton::{base_irreducibility, stability_certificate_with, Stability};
use dynrat::primitive::orbit_report;
use dynrat::{BigInt, BigRat, Error};
use serde::Serialize;

const EXIT_INPUT: u8 = 2;
const EXIT_INCOMPLETE: u8 = 3;

#[derive(Parser)]
#[command(name = "dynrat", version, about = "Exact arithmetic dynamics of x^d + c over Q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of the n-th iterate f^n.
    Iterate {
        #[command(flatten)]
        poly: Poly,
        #[arg(long)]
        n: u32,
        /// Print the integer form c2^{d^(n-1)}·f^n instead.
        #[arg(long)]
        cleared: bool,
        /// Largest allowed number of stored coefficients d^(n-1).
        #[arg(long, default_value_t = DEFAULT_MAX_SLOTS)]
        max_slots: usize,
        #[arg(long)]
        json: bool,
    },
    /// Certificate that every iterate of x^d + c is irreducible.
    Stability {
        #[command(flatten)]
        poly: Poly,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        json: bool,
    },
    /// All rational points of exact period n.
    Periodic {
        #[command(flatten)]
        poly: Poly,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        json: bool,
    },
    /// Rule out period n from the primes of the numerator c1.
    Exclude {
        #[arg(long)]
        d: u32,
        #[arg(long, allow_hyphen_values = true)]
        c1: BigInt,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        json: bool,
    },
    /// Cleared critical orbit F_0^1..F_0^n with primitive prime divisors.
    Orbit {
        #[command(flatten)]
        poly: Poly,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        budget: Budget,
        #[arg(long)]
        json: bool,
    },
    /// Periodic points for every c of height at most N.
    Census {
        #[arg(long)]
        d: u32,
        /// Height bound.
        #[arg(long = "N", alias = "height")]
        height: u64,
        /// Search periods 1..=n-max.
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        /// Explicit comma-separated periods; overrides --n-max.
        #[arg(long, value_delimiter = ',')]
        periods: Option<Vec<u32>>,
        /// Refuse sweeps whose summed search windows exceed this.
        #[arg(long, default_value_t = 1_000_000_000)]
        volume_cap: u128,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        json: bool,
    },
    /// Counts of S(N) and S_d(N) against the predicted ratio.
    Density {
        #[arg(long)]
        d: u32,
        #[arg(long = "N", alias = "height")]
        height: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct Poly {
    #[arg(long)]
    d: u32,
    /// The constant term as a/b.
    #[arg(long, allow_hyphen_values = true)]
    c: BigRat,
}

#[derive(Args)]
struct Budget {
    /// Trial-division bound before switching to rho.
    #[arg(long, default_value_t = FactorBudget::default().trial_bound)]
    trial_bound: u32,
    /// Pollard rho iterations per composite.
    #[arg(long, default_value_t = FactorBudget::default().rho_iterations)]
    rho_iterations: u64,
}

impl Budget {
    fn get(&self) -> FactorBudget {
        FactorBudget {
            trial_bound: self.trial_bound,
            rho_iterations: self.rho_iterations,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Divisors,
    Window,
}

#[derive(Args)]
struct Search {
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Largest window the auto strategy enumerates directly.
    #[arg(long, default_value_t = SearchConfig::default().window_limit)]
    window_limit: u64,
    #[command(flatten)]
    budget: Budget,
}

impl Search {
    fn get(&self) -> SearchConfig {
        SearchConfig {
            strategy: match self.strategy {
                StrategyArg::Auto => SearchStrategy::Auto,
                StrategyArg::Divisors => SearchStrategy::Divisors,
                StrategyArg::Window => SearchStrategy::Window,
            },
            budget: self.budget.get(),
            window_limit: self.window_limit,
        }
    }
}

enum Failure {
    Lib(Error),
    Incomplete(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn emit<T: Serialize>(json: bool, value: &T, render: impl FnOnce(&T) -> String) {
    let body = if json {
        serde_json::to_string_pretty(value).expect("report serializes") + "\n"
    } else {
        render(value)
    };
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Iterate { poly, n, cleared, max_slots, json } => {
            let guard = SizeGuard { max_slots };
            if cleared {
                let h = cleared_iterate_with(poly.d, poly.c.numer(), poly.c.denom(), n, &guard)?;
                emit(json, &h, text::cleared);
            } else {
                let table = iterate_coeffs_with(poly.d, &poly.c, n, &guard)?;
                emit(json, &table, text::iterate);
            }
        }
        Command::Stability { poly, budget, json } => {
            let base = base_irreducibility(poly.d, &poly.c)?;
            let verdict = match stability_certificate_with(poly.d, &poly.c, &budget.get())? {
                Some(cert) => Stability::Stable(cert),
                None => Stability::Unknown,
            };
            emit(json, &verdict, |v| text::stability(v, base));
        }
        Command::Periodic { poly, n, search, json } => {
            let report = periodic_report_with(poly.d, &poly.c, n, &search.get())?;
            emit(json, &report, text::periodic);
        }
        Command::Exclude { d, c1, n, budget, json } => {
            let verdict = exclusion_filter_with(d, &c1, n, &budget.get())?;
            emit(json, &verdict, text::exclusion);
        }
        Command::Orbit { poly, n, budget, json } => {
            let orbit = critical_orbit_with(poly.d, poly.c.numer(), poly.c.denom(), n, &budget.get())?;
            let report = orbit_report(orbit)?;
            emit(json, &report, text::orbit);
        }
        Command::Census { d, height, n_max, periods, volume_cap, search, json } => {
            let cfg = CensusConfig {
                search: search.get(),
                volume_cap,
                periods,
            };
            let report = periodic_census_with(d, height, n_max, &cfg)?;
            emit(json, &report, text::census);
            if !report.failures.is_empty() {
                return Err(Failure::Incomplete(format!(
                    "{} searches did not complete",
                    report.failures.len()
                )));
            }
        }
        Command::Density { d, height, json } => {
            let report = density(height, d)?;
            emit(json, &report, text::density);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_incomplete() { EXIT_INCOMPLETE } else { EXIT_INPUT })
        }
        Err(Failure::Incomplete(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INCOMPLETE)
        }
    }
}
