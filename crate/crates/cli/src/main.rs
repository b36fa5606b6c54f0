//! Command-line driver: graph generation, cover construction, certificate
//! verification, empirical property checks, and brute-force oracles, all over
//! the plain-text edge-list format.
//!
//! Exit codes follow one contract everywhere: `0` success (and, for `cover`,
//! an optimal certificate; for `verify` and `check-props`, a passing result),
//! `2` a valid but suboptimal cover, `1` an honest failure, `64` usage
//! errors, `65` malformed data (with a line number where one exists), and
//! `66` unreadable input files. Identical invocations write byte-identical
//! files: every random choice flows from `--seed`.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use hamcover_core::graph::{degree_stats, verify_cover, Graph};
use hamcover_core::io::{certificate_from_json, certificate_to_json, parse_edge_list, write_edge_list};
use hamcover_core::pipeline::{brute_force_min_cover, cover, CoverError, MinCover, PipelineConfig};
use hamcover_core::random::{
    check_cross_edges, check_degree_window, check_expansion, high_degree_set, sample_gnp,
    CheckMode, ExpansionParams, PropertyReport, SampleSpec, Verdict,
};
use hamcover_core::{brute_force_linear_arboricity, ForestError};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Environment variable naming a directory of profile files. A profile named
/// `NAME` is read from `$HAMCOVER_PROFILE_DIR/NAME.json` before the built-in
/// profiles are consulted.
const PROFILE_DIR_ENV: &str = "HAMCOVER_PROFILE_DIR";

const EXIT_SUBOPTIMAL: u8 = 2;
const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NOINPUT: u8 = 66;

#[derive(Parser)]
#[command(name = "hamcover")]
#[command(about = "Covers of random graphs by Hamilton cycles: construction, verification, checks")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a G(n, p) graph and write it as an edge-list file.
    Gen {
        /// Number of vertices
        #[arg(long)]
        n: usize,

        /// Edge probability in (0, 1]
        #[arg(long)]
        p: f64,

        /// RNG seed; the output is a pure function of (n, p, seed)
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Output path for the edge list
        #[arg(long)]
        out: PathBuf,
    },

    /// Construct a cover by Hamilton cycles and write certificate and report.
    Cover {
        /// Input edge-list file
        #[arg(long = "in")]
        input: PathBuf,

        /// Edge density the instance was sampled at (drives internal bounds)
        #[arg(long)]
        p: f64,

        /// Profile name: a file in $HAMCOVER_PROFILE_DIR, or built-in desk | paper
        #[arg(long, default_value = "desk")]
        profile: String,

        /// RNG seed; overrides the seed stored in the profile
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Output path for the certificate JSON
        #[arg(long)]
        cert_out: PathBuf,

        /// Output path for the pipeline report JSON
        #[arg(long)]
        report_out: PathBuf,

        /// Worker count; currently the extension loop always runs
        /// sequentially so that equal seeds give equal outputs
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },

    /// Verify a certificate against a graph; exit 0 only if it covers.
    Verify {
        /// Input edge-list file
        #[arg(long = "in")]
        input: PathBuf,

        /// Certificate JSON to check
        #[arg(long)]
        cert: PathBuf,
    },

    /// Run an empirical property check and print its report as JSON.
    CheckProps {
        /// Input edge-list file
        #[arg(long = "in")]
        input: PathBuf,

        /// Edge density the property statements refer to
        #[arg(long)]
        p: f64,

        /// Which property to check
        #[arg(long, value_enum)]
        which: Property,

        /// exact enumerates (small graphs only); sampled draws from --seed
        #[arg(long, value_enum, default_value_t = Mode::Sampled)]
        mode: Mode,

        /// Step budget for sampled mode
        #[arg(long, default_value_t = 10_000)]
        budget: u64,

        /// RNG seed for sampled mode
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Set-size bound s (expansion)
        #[arg(long, required_if_eq("which", "expansion"))]
        s: Option<usize>,

        /// Expansion demand d (expansion)
        #[arg(long, required_if_eq("which", "expansion"))]
        d: Option<usize>,

        /// Deleted-edge fraction (expansion) or degree margin (highdeg)
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,

        /// First set size (cross)
        #[arg(long, required_if_eq("which", "cross"))]
        size_a: Option<usize>,

        /// Second set size (cross)
        #[arg(long, required_if_eq("which", "cross"))]
        size_b: Option<usize>,

        /// Minimum edges demanded between the sets (cross)
        #[arg(long, required_if_eq("which", "cross"))]
        min_edges: Option<usize>,
    },

    /// Run a brute-force oracle (small inputs only) and print its answer.
    Oracle {
        /// Input edge-list file
        #[arg(long = "in")]
        input: PathBuf,

        /// Which oracle to run
        #[arg(long, value_enum)]
        which: OracleKind,
    },

    /// Print degree statistics of a graph as JSON.
    Stats {
        /// Input edge-list file
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    /// Max/min degree inside the concentration window
    Degree,
    /// Robust neighbourhood expansion
    Expansion,
    /// Edge count between disjoint vertex sets
    Cross,
    /// High-degree set small enough
    Highdeg,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    /// Minimum number of Hamilton cycles covering all edges
    Mincover,
    /// Minimum linear-forest partition size
    Linarb,
}

/// A terminal error carrying its exit code; the message goes to stderr.
struct CliError {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> CliError {
    CliError {
        code,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hamcover: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Gen { n, p, seed, out } => run_gen(n, p, seed, &out),
        Command::Cover {
            input,
            p,
            profile,
            seed,
            cert_out,
            report_out,
            jobs,
        } => run_cover(&input, p, &profile, seed, &cert_out, &report_out, jobs),
        Command::Verify { input, cert } => run_verify(&input, &cert),
        Command::CheckProps {
            input,
            p,
            which,
            mode,
            budget,
            seed,
            s,
            d,
            alpha,
            size_a,
            size_b,
            min_edges,
        } => run_check_props(
            &input, p, which, mode, budget, seed, s, d, alpha, size_a, size_b, min_edges,
        ),
        Command::Oracle { input, which } => run_oracle(&input, which),
        Command::Stats { input } => run_stats(&input),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_NOINPUT, format!("cannot read {}: {e}", path.display())))?;
    parse_edge_list(&text)
        .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| fail(EXIT_FAILURE, format!("cannot write {}: {e}", path.display())))
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

/// Resolves a profile name: a `NAME.json` file under [`PROFILE_DIR_ENV`]
/// wins, then the built-in profiles. The `--seed` flag always overrides the
/// seed the profile carries.
fn load_profile(name: &str, seed: u64) -> Result<PipelineConfig, CliError> {
    if let Ok(dir) = std::env::var(PROFILE_DIR_ENV) {
        let path = Path::new(&dir).join(format!("{name}.json"));
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                fail(EXIT_NOINPUT, format!("cannot read {}: {e}", path.display()))
            })?;
            let mut cfg: PipelineConfig = serde_json::from_str(&text).map_err(|e| {
                fail(
                    EXIT_DATA,
                    format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()),
                )
            })?;
            cfg.seed = seed;
            cfg.validate().map_err(|e| {
                fail(EXIT_DATA, format!("{}: {e}", path.display()))
            })?;
            return Ok(cfg);
        }
    }
    PipelineConfig::builtin(name, seed)
        .ok_or_else(|| fail(EXIT_USAGE, format!("unknown profile '{name}'")))
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run_gen(n: usize, p: f64, seed: u64, out: &Path) -> Result<u8, CliError> {
    let g = sample_gnp(&SampleSpec::new(n, p, seed))
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    write_output(out, &write_edge_list(&g))?;
    Ok(0)
}

fn run_cover(
    input: &Path,
    p: f64,
    profile: &str,
    seed: u64,
    cert_out: &Path,
    report_out: &Path,
    jobs: usize,
) -> Result<u8, CliError> {
    if jobs == 0 {
        return Err(fail(EXIT_USAGE, "--jobs must be at least 1"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(fail(EXIT_USAGE, format!("--p must lie in (0, 1], got {p}")));
    }
    let g = read_graph(input)?;
    let cfg = load_profile(profile, seed)?;
    match cover(&g, p, &cfg) {
        Ok((cert, report)) => {
            write_output(cert_out, &certificate_to_json(&cert))?;
            write_output(report_out, &pretty(&report))?;
            println!(
                "cycles={} target={} optimal={} route={}",
                report.cycles, report.target, report.optimal, report.route
            );
            Ok(if report.optimal { 0 } else { EXIT_SUBOPTIMAL })
        }
        Err(CoverError::BadConfig { detail }) => Err(fail(EXIT_USAGE, detail)),
        Err(e) => Err(fail(EXIT_FAILURE, e.to_string())),
    }
}

fn run_verify(input: &Path, cert_path: &Path) -> Result<u8, CliError> {
    let g = read_graph(input)?;
    let text = std::fs::read_to_string(cert_path).map_err(|e| {
        fail(EXIT_NOINPUT, format!("cannot read {}: {e}", cert_path.display()))
    })?;
    let cert = certificate_from_json(&text).map_err(|e| {
        fail(
            EXIT_DATA,
            format!("{}: line {} column {}: {e}", cert_path.display(), e.line(), e.column()),
        )
    })?;
    let report = verify_cover(&g, &cert);
    print!("{}", pretty(&report));
    Ok(if report.valid { 0 } else { EXIT_FAILURE })
}

#[allow(clippy::too_many_arguments)]
fn run_check_props(
    input: &Path,
    p: f64,
    which: Property,
    mode: Mode,
    budget: u64,
    seed: u64,
    s: Option<usize>,
    d: Option<usize>,
    alpha: f64,
    size_a: Option<usize>,
    size_b: Option<usize>,
    min_edges: Option<usize>,
) -> Result<u8, CliError> {
    let g = read_graph(input)?;
    let check_mode = match mode {
        Mode::Exact => CheckMode::Exact,
        Mode::Sampled => CheckMode::Sampled { seed },
    };
    let report = match which {
        Property::Degree => check_degree_window(&g, p),
        Property::Expansion => {
            let params = ExpansionParams {
                s: s.expect("clap enforces --s for expansion"),
                d: d.expect("clap enforces --d for expansion"),
                alpha,
            };
            check_expansion(&g, &params, check_mode, budget)
                .map_err(|e| fail(EXIT_USAGE, e.to_string()))?
        }
        Property::Cross => check_cross_edges(
            &g,
            size_a.expect("clap enforces --size-a for cross"),
            size_b.expect("clap enforces --size-b for cross"),
            min_edges.expect("clap enforces --min-edges for cross"),
            check_mode,
            budget,
        )
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?,
        Property::Highdeg => high_degree_report(&g, p, alpha),
    };
    print!("{}", pretty(&report));
    Ok(if report.verdict == Verdict::Holds { 0 } else { EXIT_FAILURE })
}

/// Wraps [`high_degree_set`] as a property report: the set must not exceed
/// `n^{1/10}` vertices.
fn high_degree_report(g: &Graph, p: f64, alpha: f64) -> PropertyReport {
    let set = high_degree_set(g, p, alpha);
    let n = g.vertex_count() as f64;
    let cap = n.powf(0.1);
    let ok = (set.vertices.len() as f64) <= cap;
    PropertyReport {
        property: "high_degree_set".to_string(),
        verdict: if ok { Verdict::Holds } else { Verdict::Violated },
        witness: if ok {
            serde_json::Value::Null
        } else {
            json!({ "vertices": set.vertices })
        },
        stats: json!({
            "size": set.vertices.len(),
            "cap": cap,
            "degree_threshold": set.threshold,
        }),
        params: json!({ "n": g.vertex_count(), "p": p, "alpha": alpha }),
    }
}

fn run_oracle(input: &Path, which: OracleKind) -> Result<u8, CliError> {
    let g = read_graph(input)?;
    let answer = match which {
        OracleKind::Mincover => match brute_force_min_cover(&g) {
            Ok(MinCover::Exact(count)) => json!({
                "oracle": "mincover",
                "result": "exact",
                "count": count,
            }),
            Ok(MinCover::Infeasible) => json!({
                "oracle": "mincover",
                "result": "infeasible",
            }),
            Err(e) => return Err(fail(EXIT_USAGE, e.to_string())),
        },
        OracleKind::Linarb => match brute_force_linear_arboricity(&g) {
            Ok((count, witness)) => json!({
                "oracle": "linarb",
                "count": count,
                "witness": witness,
            }),
            Err(e @ ForestError::TooLarge { .. }) => return Err(fail(EXIT_USAGE, e.to_string())),
            Err(e) => return Err(fail(EXIT_FAILURE, e.to_string())),
        },
    };
    print!("{}", pretty(&answer));
    Ok(0)
}

fn run_stats(input: &Path) -> Result<u8, CliError> {
    let g = read_graph(input)?;
    let stats = degree_stats(&g);
    let out = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "min_degree": stats.min,
        "max_degree": stats.max,
        "mean_degree": stats.mean,
        "histogram": stats.histogram,
    });
    print!("{}", pretty(&out));
    Ok(0)
}
