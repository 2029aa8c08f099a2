//! Command-line front end. Every subcommand writes one file (or stdout) in
//! JSON, CSV or DOT; identical arguments give byte-identical output.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 some trajectory hit
//! a limit, 3 internal verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{Num, Pow};
use serde::Serialize;

use crate::chains::{
    self, build_preimage_tree, chain_of, chain_to_dot, tree_to_dot, ChainError, CriterionVerdict,
    FamilySamples,
};
use crate::maps::{parse_descriptor, MapDescriptor};
use crate::measure::{assign_measure, build_forest, check_power_bound, MeasureError};
use crate::numeric::Nat;
use crate::partition::partition;
use crate::trajectory::{find_cycles, iterate, scan, scan_to_csv, Limits, Status};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const THREADS_ENV: &str = "SYRDYN_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_LIMIT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "syrdyn",
    version,
    about = "Exact dynamics of Collatz and Syracuse-type maps"
)]
pub struct Cli {
    /// Worker threads for parallel commands (default: SYRDYN_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long, default_value_t = 100_000)]
    max_steps: u64,
    /// Value ceiling: an integer, `1e6` or `10^40`.
    #[arg(long, default_value = "10^40", value_parser = parse_max_value)]
    max_value: Nat,
}

impl LimitArgs {
    fn limits(&self) -> Result<Limits, Failure> {
        if self.max_steps == 0 {
            return Err(Failure::usage("--max-steps must be positive"));
        }
        Ok(Limits::new(self.max_steps, self.max_value.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerdictFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Forward orbit of one point.
    Traj {
        map: String,
        n: String,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Cycles reached from the starts 1..=bound.
    Cycles {
        map: String,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// C / D1 / D2-candidate classification of 1..=bound.
    Partition {
        map: String,
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Measure on the truncated preimage forest of the cycles, with a
    /// sampled check of the power bound.
    Measure {
        map: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        /// Cycles are searched from the starts 1..=cycle-bound.
        #[arg(long, default_value_t = 1000)]
        cycle_bound: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Largest n in the check (default: min(depth, 10)).
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Family chain of a point under the Collatz map.
    Chains {
        n: String,
        #[arg(long, default_value_t = 3)]
        links: usize,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Inverse-image tree of a point.
    Tree {
        map: String,
        root: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Chain-structure verdict for px+r.
    Criterion {
        #[arg(allow_hyphen_values = true)]
        p: i64,
        #[arg(allow_hyphen_values = true)]
        r: i64,
        /// Also run the family identity and family connection checks.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 500)]
        tails: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = VerdictFormat::Text)]
        format: VerdictFormat,
    },
    /// Per-point status over a range of starts, in parallel.
    Scan {
        map: String,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn verify(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VERIFY,
            message: message.into(),
        }
    }
}

struct Output {
    text: String,
    code: i32,
}

/// Accepts `123`, `1e6` and `10^40`.
pub fn parse_max_value(s: &str) -> Result<Nat, String> {
    let bad = || format!("invalid value `{s}`: expected an integer, `1e6` or `10^40`");
    let parse_u = |t: &str| -> Result<u32, String> { t.parse().map_err(|_| bad()) };
    let v = if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m = Nat::from_str_radix(m, 10).map_err(|_| bad())?;
        m * Pow::pow(BigUint::from(10u32), parse_u(e)?)
    } else if let Some((b, e)) = s.split_once('^') {
        let b = Nat::from_str_radix(b, 10).map_err(|_| bad())?;
        Pow::pow(b, parse_u(e)?)
    } else {
        Nat::from_str_radix(s, 10).map_err(|_| bad())?
    };
    if v == Nat::default() {
        return Err("value ceiling must be positive".into());
    }
    Ok(v)
}

fn parse_map(text: &str) -> Result<MapDescriptor, Failure> {
    parse_descriptor(text).map_err(|e| Failure::usage(format!("map `{text}`: {e}")))
}

fn parse_point(text: &str) -> Result<Nat, Failure> {
    match Nat::from_str_radix(text, 10) {
        Ok(n) if n != Nat::default() => Ok(n),
        _ => Err(Failure::usage(format!(
            "`{text}` is not a positive integer"
        ))),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn chain_failure(e: ChainError) -> Failure {
    match e {
        ChainError::ConnectionFailure { .. } | ChainError::VerificationFailure(_) => {
            Failure::verify(e.to_string())
        }
        _ => Failure::usage(e.to_string()),
    }
}

#[derive(Serialize)]
struct CyclesJson {
    map: String,
    bound: u64,
    max_steps: u64,
    max_value: String,
    cycles: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct CriterionJson<'a> {
    verdict: &'a CriterionVerdict,
    identity: Option<chains::IdentityReport>,
    connection: Option<chains::ConnectionReport>,
}

fn execute(command: Command) -> Result<Output, Failure> {
    let ok = |text: String| {
        Ok(Output {
            text,
            code: EXIT_OK,
        })
    };
    match command {
        Command::Traj { map, n, limits } => {
            let map = parse_map(&map)?;
            let report = iterate(&map, &parse_point(&n)?, &limits.limits()?)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let code = match report.status {
                Status::EnteredCycle { .. } => EXIT_OK,
                _ => EXIT_LIMIT,
            };
            Ok(Output {
                text: json(&report.to_json()),
                code,
            })
        }
        Command::Cycles { map, bound, limits } => {
            let map = parse_map(&map)?;
            let limits = limits.limits()?;
            let cycles = find_cycles(&map, bound, &limits);
            ok(json(&CyclesJson {
                map: map.to_string(),
                bound,
                max_steps: limits.max_steps,
                max_value: limits.max_value.to_string(),
                cycles: cycles
                    .iter()
                    .map(|c| c.members().iter().map(|m| m.to_string()).collect())
                    .collect(),
            }))
        }
        Command::Partition {
            map,
            bound,
            format,
            limits,
        } => {
            let map = parse_map(&map)?;
            if bound == 0 {
                return Err(Failure::usage("--bound must be positive"));
            }
            let result = partition(&map, bound, &limits.limits()?);
            let text = match format {
                TableFormat::Csv => result.to_csv(),
                TableFormat::Json => json(&result.summary()),
            };
            let code = if result.d2_candidates.is_empty() {
                EXIT_OK
            } else {
                EXIT_LIMIT
            };
            Ok(Output { text, code })
        }
        Command::Measure {
            map,
            depth,
            cycle_bound,
            trials,
            max_n,
            seed,
            limits,
        } => {
            let map = parse_map(&map)?;
            let cycles = find_cycles(&map, cycle_bound, &limits.limits()?);
            let forest =
                build_forest(&map, &cycles, depth).map_err(|e| Failure::verify(e.to_string()))?;
            let assignment = assign_measure(forest);
            let max_n = max_n.unwrap_or(depth.min(10));
            let report =
                check_power_bound(&assignment, trials, max_n, seed).map_err(|e| match e {
                    MeasureError::DepthExceeded { .. } => Failure::usage(e.to_string()),
                    _ => Failure::verify(e.to_string()),
                })?;
            ok(json(&assignment.to_json(Some(&report))))
        }
        Command::Chains { n, links, format } => {
            let chain = chain_of(&parse_point(&n)?, links).map_err(chain_failure)?;
            if !chain.verify() {
                return Err(Failure::verify(format!(
                    "chain through {n} failed its link checks"
                )));
            }
            ok(match format {
                GraphFormat::Json => json(&chain),
                GraphFormat::Dot => chain_to_dot(&chain),
            })
        }
        Command::Tree {
            map,
            root,
            depth,
            format,
        } => {
            let map = parse_map(&map)?;
            let tree =
                build_preimage_tree(&map, &parse_point(&root)?, depth).map_err(chain_failure)?;
            ok(match format {
                GraphFormat::Json => json(&tree),
                GraphFormat::Dot => tree_to_dot(&tree),
            })
        }
        Command::Criterion {
            p,
            r,
            verify,
            tails,
            seed,
            format,
        } => {
            let verdict = CriterionVerdict::new(p, r).map_err(chain_failure)?;
            let (identity, connection) = if verify && verdict.chain_structure {
                let identity = chains::verify_family_identity(p, r, &FamilySamples::default())
                    .map_err(chain_failure)?;
                if !identity.holds() {
                    return Err(Failure::verify(format!(
                        "family identity held on {}/{} samples",
                        identity.satisfied, identity.tested
                    )));
                }
                let sample = chains::family_tails(p, r, tails, seed).map_err(chain_failure)?;
                let connection =
                    chains::verify_family_connection(p, r, &sample).map_err(chain_failure)?;
                (Some(identity), Some(connection))
            } else {
                (None, None)
            };
            ok(match format {
                VerdictFormat::Json => json(&CriterionJson {
                    verdict: &verdict,
                    identity,
                    connection,
                }),
                VerdictFormat::Text => {
                    let mut t = format!(
                        "pxr(p={p}, r={r}): {}\ntwo-preimage class: {} mod {p}\n",
                        if verdict.chain_structure {
                            "chain structure"
                        } else {
                            "no chain structure"
                        },
                        verdict.two_preimage_class
                    );
                    if let Some(i) = identity {
                        t.push_str(&format!(
                            "family identity (l = {}): {}/{} samples\n",
                            i.l, i.satisfied, i.tested
                        ));
                    }
                    if let Some(c) = connection {
                        t.push_str(&format!(
                            "family connection: {}/{} tails land in class {}\n",
                            c.landed, c.tested, c.class
                        ));
                    }
                    t
                }
            })
        }
        Command::Scan {
            map,
            from,
            to,
            limits,
        } => {
            let map = parse_map(&map)?;
            if from == 0 || from > to {
                return Err(Failure::usage("need 1 <= --from <= --to"));
            }
            let records = scan(&map, from..=to, &limits.limits()?)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let code = if records.iter().all(|r| r.steps_to_cycle.is_some()) {
                EXIT_OK
            } else {
                EXIT_LIMIT
            };
            Ok(Output {
                text: scan_to_csv(&records),
                code,
            })
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, Failure> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .parse()
            .map(Some)
            .map_err(|_| Failure::usage(format!("{THREADS_ENV}={v} is not a thread count"))),
        Err(_) => Ok(None),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = thread_count(cli.threads).and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| Failure::usage(format!("thread pool: {e}")))?;
        pool.install(|| execute(cli.command))
    });
    match result {
        Ok(output) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &output.text),
                None => io::stdout().write_all(output.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            output.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
