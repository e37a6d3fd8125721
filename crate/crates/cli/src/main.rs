//! `monodromy`: command-line front end for the monodromy-core library.

mod commands;
mod config;
mod errors;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use commands::{CurveSource, Outcome, SieveArgs};
use config::{Format, RunConfig};
pub use errors::{CliError, ErrorCode};

#[derive(Parser, Debug)]
#[command(name = "monodromy", version, about = "Finite symplectic groups, Frobenius data and density scans")]
struct Cli {
    /// RNG seed recorded in every document
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker threads; 1 runs everything sequentially
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// file of `key = value` lines (seed, jobs, format, C, c0, d0,
    /// closure_cap, prime_limit, witness_bound, trials, member_budget)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CurveArgs {
    /// curve file, one `a0 a1 ... ad` line per curve
    #[arg(long)]
    curves: Option<PathBuf>,
    /// a single curve given inline
    #[arg(long, allow_hyphen_values = true)]
    curve: Option<String>,
}

impl CurveArgs {
    fn source(&self) -> CurveSource {
        CurveSource {
            file: self.curves.clone(),
            inline: self.curve.clone(),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the finite group verification battery
    GroupVerify {
        /// run only these checks (comma separated)
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// element budget for every closure
        #[arg(long)]
        cap: Option<usize>,
        /// random trials per lifting case
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Weil polynomial and point counts at a prime
    Charpoly {
        #[command(flatten)]
        curves: CurveArgs,
        #[arg(long)]
        p: u64,
    },
    /// Galois group of a quartic, or of the Frobenius quartic of curves at p
    Galois {
        /// quartic coefficients c0 ... c4
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["curves", "curve", "p"])]
        quartic: Option<String>,
        #[command(flatten)]
        curves: CurveArgs,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Conditional surjectivity certificate for genus-2 curves
    Certify {
        #[command(flatten)]
        curves: CurveArgs,
        /// largest prime searched for a D4 witness
        #[arg(long)]
        prime_limit: Option<u64>,
        /// supplied bound on the stable Faltings height (default 1)
        #[arg(long)]
        height: Option<f64>,
        /// derive the height bound as c0·ln(Ht) + d0 from the coefficients
        #[arg(long)]
        faltings_proxy: bool,
    },
    /// Cycle-type witness primes and their modulus for reciprocal polynomials
    Modulus {
        /// file with one polynomial `c0 c1 ... cn` per line
        #[arg(long)]
        poly: Option<PathBuf>,
        /// a single polynomial given inline
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// witness primes must exceed C
        #[arg(long = "C")]
        c: Option<u64>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Large-sieve sum L(Q) and bound
    Sieve {
        #[arg(long = "B")]
        b: f64,
        #[arg(long = "Q")]
        q: f64,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        degree: u32,
        /// the same ω_p for every prime p ≤ Q
        #[arg(long)]
        omega_uniform: Option<f64>,
        /// explicit `p:ω_p` pairs, comma separated
        #[arg(long)]
        omega: Option<String>,
    },
    /// Witnessed-maximal density over a coefficient box
    Scan {
        /// family template such as "* * 0 0 0 1"
        #[arg(long)]
        family: String,
        #[arg(long = "B")]
        b: f64,
        #[arg(long, value_delimiter = ',', default_value = "3")]
        ells: Vec<u64>,
        #[arg(long, default_value_t = 50)]
        p_max: u64,
    },
    /// Fraction of members over F_p satisfying a Frobenius predicate
    Sample {
        #[arg(long, default_value = "* * * * * 1")]
        family: String,
        #[arg(long)]
        p: u64,
        /// d4, always, never, or pattern:ELL:D1+D2+...
        #[arg(long, default_value = "d4")]
        predicate: String,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::GroupVerify { .. } => "group-verify",
            Command::Charpoly { .. } => "charpoly",
            Command::Galois { .. } => "galois",
            Command::Certify { .. } => "certify",
            Command::Modulus { .. } => "modulus",
            Command::Sieve { .. } => "sieve",
            Command::Scan { .. } => "scan",
            Command::Sample { .. } => "sample",
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        cfg.apply_file(path)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(jobs) = cli.jobs {
        cfg.set("jobs", &jobs.to_string())?;
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    match &cli.command {
        Command::GroupVerify { cap, trials, .. } => {
            if let Some(cap) = cap {
                cfg.set("closure_cap", &cap.to_string())?;
            }
            if let Some(t) = trials {
                cfg.set("trials", &t.to_string())?;
            }
        }
        Command::Certify { prime_limit: Some(l), .. } => cfg.set("prime_limit", &l.to_string())?,
        Command::Modulus { c, bound, .. } => {
            if let Some(c) = c {
                cfg.c = *c;
            }
            if let Some(b) = bound {
                cfg.set("witness_bound", &b.to_string())?;
            }
        }
        _ => {}
    }
    Ok(cfg)
}

fn dispatch(command: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::GroupVerify { only, .. } => commands::group_verify(cfg, only),
        Command::Charpoly { curves, p } => Ok(commands::charpoly(&commands::load_curves(&curves.source())?, *p)),
        Command::Galois { quartic: Some(q), .. } => commands::galois_quartic(q),
        Command::Galois { curves, p, .. } => {
            let p = p.ok_or_else(|| CliError::usage("--p is required with --curves/--curve"))?;
            Ok(commands::galois_curves(&commands::load_curves(&curves.source())?, p))
        }
        Command::Certify {
            curves,
            height,
            faltings_proxy,
            ..
        } => commands::certify(&commands::load_curves(&curves.source())?, cfg, *height, *faltings_proxy),
        Command::Modulus { poly, coeffs, .. } => {
            commands::modulus(&commands::load_polys(poly.as_ref(), coeffs.as_deref())?, cfg)
        }
        Command::Sieve {
            b,
            q,
            r,
            degree,
            omega_uniform,
            omega,
        } => commands::sieve(&SieveArgs {
            b: *b,
            q: *q,
            r: *r,
            degree: *degree,
            omega_uniform: *omega_uniform,
            omega: omega.clone(),
        }),
        Command::Scan { family, b, ells, p_max } => commands::scan(family, *b, ells, *p_max, cfg),
        Command::Sample {
            family,
            p,
            predicate,
            samples,
        } => commands::sample(family, *p, predicate, *samples, cfg),
    }
}

fn render(cfg: &RunConfig, command: &str, hash: &str, outcome: &Outcome) -> Result<String, CliError> {
    let tool_version = env!("CARGO_PKG_VERSION");
    match cfg.format {
        Format::Json => {
            let doc = json!({
                "command": command,
                "seed": cfg.seed,
                "config_hash": hash,
                "tool_version": tool_version,
                "result": outcome.result,
            });
            Ok(output::to_json(&doc))
        }
        Format::Csv => {
            let rows: Vec<_> = outcome
                .rows
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.insert("seed".into(), json!(cfg.seed));
                    r.insert("config_hash".into(), Value::String(hash.to_string()));
                    r.insert("tool_version".into(), json!(tool_version));
                    r
                })
                .collect();
            output::to_csv(&rows).map_err(|e| CliError::usage(format!("csv: {e}")))
        }
    }
}

fn run(args: Vec<String>) -> Result<Option<CliError>, CliError> {
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            if code == 0 {
                return Ok(None);
            }
            // clap has already reported the problem
            return Err(CliError::usage(""));
        }
    };
    let cfg = resolve_config(&cli)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build_global()
        .map_err(|e| CliError::usage(format!("cannot start {} workers: {e}", cfg.jobs)))?;
    let outcome = dispatch(&cli.command, &cfg)?;
    // the hash covers everything after the program name except --config,
    // whose effect is already in the resolved settings
    let mut selector = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        if skip {
            skip = false;
        } else if a == "--config" {
            skip = true;
        } else if !a.starts_with("--config=") {
            selector.push(a.clone());
        }
    }
    let hash = cfg.hash(&selector);
    print!("{}", render(&cfg, cli.command.name(), &hash, &outcome)?);
    Ok(outcome.failure)
}

fn main() -> ExitCode {
    let result = run(std::env::args().collect());
    let err = match result {
        Ok(None) => return ExitCode::SUCCESS,
        Ok(Some(e)) | Err(e) => e,
    };
    if !err.message.is_empty() {
        eprintln!("error: {err}");
    }
    ExitCode::from(err.code.exit_code() as u8)
}
