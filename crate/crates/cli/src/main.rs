//! `svaudit` — exact Shapley attributions, formal explanations, and
//! misleading-ranking checks for Boolean classifiers given as truth tables.
//!
//! Exit codes: 0 success, 2 invalid input, 3 over the arity/scale capacity,
//! 4 a requested verification failed.

mod report;

use std::path::PathBuf;
use std::process::exit;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use svaudit::constructions::{build_for_arity, lower_bound};
use svaudit::model::{parse_function, serialize_function, ExplanationProblem, Point};
use svaudit::search::survey;
use svaudit::{Issue, MAX_ARITY};

use report::Analysis;

#[derive(Parser)]
#[command(
    name = "svaudit",
    version,
    about = "Audit Shapley-style feature attributions of truth-table classifiers \
             against formal abductive/contrastive explanations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Attributions, explanations, relevancy and issue flags for one
    /// function at one instance
    Analyze {
        /// Function file in .btt format
        #[arg(long, value_name = "FILE")]
        function: PathBuf,
        /// Instance bits, feature 1 leftmost (e.g. 001)
        #[arg(long, value_name = "BITS")]
        instance: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Skip the per-feature table (table format only)
        #[arg(long)]
        quiet: bool,
    },
    /// Build a function/instance pair guaranteed to exhibit an issue
    Construct {
        /// Target issue: i1, i2, i3, i4 or i5
        #[arg(long)]
        issue: String,
        /// Feature count of the built function
        #[arg(long, value_name = "N", conflicts_with = "m")]
        n: Option<u8>,
        /// Seed feature count; the built function gets the issue-dependent
        /// total (i1/i5: m+1, i2: m+2, i3: 2m+1, i4: 2m+2)
        #[arg(long, value_name = "M")]
        m: Option<u8>,
        /// Ball radius for i2 (1 or 2)
        #[arg(long, default_value_t = 1)]
        radius: u8,
        /// Center point bits for i2/i5 (defaults: all zeros / all ones)
        #[arg(long, value_name = "BITS")]
        center: Option<String>,
        /// Also write the function here in .btt format
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Re-run the detector on the result; exit 4 if the issue is absent
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        quiet: bool,
    },
    /// Count issue hits across a whole space of functions
    Survey {
        /// Feature count (exhaustive up to m=4; sampled up to m=8)
        #[arg(long)]
        m: u8,
        /// Draw this many random tables instead of enumerating
        #[arg(long, value_name = "K")]
        sample: Option<u64>,
        /// Sampling seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print the proven lower bound on the number of n-feature functions
    /// exhibiting an issue
    Bound {
        /// Issue: i1, i2, i3 or i4 (no bound exists for i5)
        #[arg(long)]
        issue: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

/// Rust ignores SIGPIPE, so `svaudit ... | head` would panic mid-print;
/// restore the default so the process dies quietly like any Unix filter.
fn restore_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() {
    restore_sigpipe();
    let cli = Cli::parse();
    if let Err(e) = configure_workers() {
        eprintln!("error: {e:#}");
        exit(2);
    }
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        exit(exit_code(&e));
    }
}

fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<svaudit::Error>() {
        Some(svaudit::Error::Capacity { .. }) => 3,
        Some(svaudit::Error::Verification(_)) => 4,
        _ => 2,
    }
}

/// Size the global worker pool from SVAUDIT_WORKERS (default: all cores).
/// Only the survey fans out, and its results never depend on this.
fn configure_workers() -> Result<()> {
    let Ok(raw) = std::env::var("SVAUDIT_WORKERS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("SVAUDIT_WORKERS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("worker pool already initialized")?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze { function, instance, format, quiet } => {
            let text = std::fs::read_to_string(&function)
                .with_context(|| format!("cannot read {}", function.display()))?;
            let f = parse_function(&text)?;
            let point = Point::parse(instance.trim())?;
            let problem = ExplanationProblem::at_point(f, point)?;
            let started = Instant::now();
            let analysis = Analysis::run(&problem);
            let elapsed = started.elapsed();
            let source = function.display().to_string();
            match format {
                Format::Json => println!(
                    "{}",
                    report::to_json(&report::analyze_report(&source, &problem, &analysis, elapsed))
                ),
                Format::Table => {
                    print!("{}", report::render_table(&source, &problem, &analysis, quiet))
                }
            }
        }
        Command::Construct { issue, n, m, radius, center, out, verify, format, quiet } => {
            let issue: Issue = issue.parse::<Issue>().map_err(anyhow::Error::from)?;
            let center = center.map(|s| Point::parse(s.trim())).transpose()?;
            let n = resolve_arity(issue, n, m)?;
            let started = Instant::now();
            let built = build_for_arity(issue, n, radius, center)?;
            let file = match &out {
                Some(path) => {
                    std::fs::write(path, serialize_function(&built.function))
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    Some(path.display().to_string())
                }
                None => None,
            };
            let analysis = verify
                .then(|| -> Result<Analysis> {
                    let report = built.verify()?;
                    let problem = built.problem()?;
                    let sets = svaudit::xplain::explanation_sets(&problem);
                    Ok(Analysis { report, axps: sets.axps, cxps: sets.cxps })
                })
                .transpose()?;
            let elapsed = started.elapsed();
            let rep = report::construct_report(&built, file.clone(), analysis.as_ref(), elapsed);
            match format {
                Format::Json => println!("{}", report::to_json(&rep)),
                Format::Table => {
                    println!(
                        "constructed: {} witness with {n} features ({})",
                        built.target_issue.as_str(),
                        built.provenance
                    );
                    if let Some(path) = &file {
                        println!("wrote: {path}");
                    }
                    match &analysis {
                        Some(a) => {
                            println!("verification: {} fires", built.target_issue);
                            print!(
                                "{}",
                                report::render_table(
                                    "constructed",
                                    &built.problem()?,
                                    a,
                                    quiet
                                )
                            );
                        }
                        None => println!(
                            "instance: v = {} (table index {}), class {}",
                            built.instance.point,
                            built.instance.point.index(),
                            built.instance.class as u8
                        ),
                    }
                }
            }
        }
        Command::Survey { m, sample, seed, format } => {
            let result = survey(m, sample, seed)?;
            match format {
                Format::Json => {
                    println!("{}", report::to_json(&report::survey_report(&result, sample, seed)))
                }
                Format::Table => print!("{}", report::render_survey_table(&result, sample, seed)),
            }
        }
        Command::Bound { issue, n, format } => {
            let issue: Issue = issue.parse::<Issue>().map_err(anyhow::Error::from)?;
            let bound = lower_bound(issue, n)?;
            match format {
                Format::Json => println!(
                    "{}",
                    report::to_json(&report::BoundReport {
                        command: "bound",
                        issue: issue.as_str().to_string(),
                        n,
                        bound: bound.to_string(),
                    })
                ),
                Format::Table => println!("{bound}"),
            }
        }
    }
    Ok(())
}

/// Turn --n/--m into the built function's feature count.
fn resolve_arity(issue: Issue, n: Option<u8>, m: Option<u8>) -> Result<u8> {
    match (n, m) {
        (Some(n), None) => Ok(n),
        (None, Some(m)) => {
            let n = match issue {
                Issue::I1 | Issue::I5 => m as u32 + 1,
                Issue::I2 => m as u32 + 2,
                Issue::I3 => 2 * m as u32 + 1,
                Issue::I4 => 2 * m as u32 + 2,
            };
            if n > MAX_ARITY as u32 {
                return Err(svaudit::Error::Capacity { requested: n, cap: MAX_ARITY }.into());
            }
            Ok(n as u8)
        }
        (None, None) => bail!("one of --n or --m is required"),
        (Some(_), Some(_)) => bail!("--n and --m are mutually exclusive"),
    }
}
