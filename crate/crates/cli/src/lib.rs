//! The `sodeg` command line.
//!
//! [`run`] parses arguments and returns the exit code and the text destined
//! for standard output and standard error, so the binary is a thin wrapper
//! and tests can call the driver in process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use sodeg_core::kazarnovskij::{degree_via_kazarnovskij, RootFamily, Route};
use sodeg_core::lattice::{
    count_via_determinant, count_with_first_path, enumerate_nonintersecting, first_path_choices,
    PathSystem, ENUMERATION_CAP,
};
use sodeg_core::sdp::{critical_count, delta, DeltaQuery};
use sodeg_core::{deg_so, BigInt, GroupFamily, GroupId};
use sodeg_witness::witness::{so_witness_by_monodromy, so_witness_by_total_degree, WitnessSet};
use sodeg_witness::{census_to_csv, real_census, sdp_critical_solve, witness_to_json, TrackerSettings};

/// Exit status and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "sodeg", version, about = "Degrees of SO(n), O(n) and Sp(r) by several independent routes")]
pub struct Cli {
    /// Worker threads for enumeration and path tracking.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Endpoint residual tolerance for path tracking.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Degree of a classical group.
    Degree(DegreeArgs),
    /// Non-intersecting lattice path systems.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Algebraic degree of semidefinite programming.
    #[command(subcommand)]
    Sdp(SdpCommand),
    /// Numerical witness sets of SO(n).
    #[command(subcommand)]
    Witness(WitnessCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    So,
    O,
    Sp,
}

impl From<GroupArg> for GroupFamily {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::So => GroupFamily::SO,
            GroupArg::O => GroupFamily::O,
            GroupArg::Sp => GroupFamily::Sp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    KazarnovskijDirect,
    KazarnovskijClosed,
    Lattice,
    Numeric,
    All,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::KazarnovskijDirect => "kazarnovskij-direct",
            Method::KazarnovskijClosed => "kazarnovskij-closed",
            Method::Lattice => "lattice",
            Method::Numeric => "numeric",
            Method::All => "all",
        }
    }
}

#[derive(Debug, Args)]
struct DegreeArgs {
    group: GroupArg,
    /// Matrix size for so and o, rank for sp.
    n: u32,
    #[arg(long, value_enum, default_value = "formula")]
    method: Method,
    /// Seed for the numeric method.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum LatticeCommand {
    /// Count path systems by the path-count determinant.
    Count { n: u32 },
    /// Enumerate path systems and compare with the determinant.
    Enumerate {
        n: u32,
        /// Print every system as a JSON array of step strings.
        #[arg(long)]
        emit: bool,
    },
}

#[derive(Debug, Subcommand)]
enum SdpCommand {
    /// δ(m, n, r).
    Delta { m: u64, n: u32, r: u32 },
    /// 2·deg SO(r)·δ(m, n, r).
    CriticalCount { m: u64, n: u32, r: u32 },
    /// Count critical points of a random instance numerically.
    Oracle {
        m: u64,
        n: u32,
        r: u32,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Subcommand)]
enum WitnessCommand {
    /// Witness set of SO(n) on a random slice.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Populate by monodromy from the identity instead of a total-degree solve.
        #[arg(long)]
        monodromy: bool,
    },
    /// Real-point frequencies over random real slices.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long)]
        seed: u64,
        /// Also write the CSV table to this file.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

/// Why a command did not complete normally.
#[derive(Debug)]
enum Failure {
    /// Bad input; exit 2.
    Usage(String),
    /// A cross-check or internal step failed; exit 1.
    Internal(String),
}

impl From<sodeg_core::Error> for Failure {
    fn from(e: sodeg_core::Error) -> Self {
        match e {
            sodeg_core::Error::Inconsistent(_) => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<sodeg_witness::Error> for Failure {
    fn from(e: sodeg_witness::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Text to print and whether every cross-check agreed.
struct Report {
    text: String,
    agree: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, agree: true }
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let result = match cli.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k as usize).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Failure::Internal(e.to_string())),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(report) => Outcome {
            code: if report.agree { 0 } else { 1 },
            stderr: if report.agree {
                String::new()
            } else {
                "error: routes disagree\n".into()
            },
            stdout: report.text,
        },
        Err(Failure::Usage(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Internal(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    let format = if cli.csv { Format::Csv } else { Format::Json };
    let mut settings = TrackerSettings::default();
    if let Some(t) = cli.tolerance {
        settings.endpoint_tolerance = t;
        settings.validate()?;
    }
    match &cli.command {
        Command::Degree(args) => degree(args, format, &settings),
        Command::Lattice(LatticeCommand::Count { n }) => lattice_count(*n, format),
        Command::Lattice(LatticeCommand::Enumerate { n, emit }) => lattice_enumerate(*n, *emit, format),
        Command::Sdp(cmd) => sdp(cmd, format, &settings),
        Command::Witness(WitnessCommand::Solve { n, seed, monodromy }) => {
            if format == Format::Csv {
                return Err(Failure::Usage("witness solve writes JSON only".into()));
            }
            witness_solve(*n, *seed, *monodromy, &settings)
        }
        Command::Witness(WitnessCommand::Census { n, samples, seed, out }) => {
            witness_census(*n, *samples as usize, *seed, out.as_deref(), format, &settings)
        }
    }
}

// ---------------------------------------------------------------- degree

/// Rank-`r` root family of the group, with the factor relating its degree
/// to the requested group (O(n) is two copies of SO(n)).
fn root_family(family: GroupFamily, n: u32) -> Result<(RootFamily, u32, u32), Failure> {
    match family {
        GroupFamily::Sp => Ok((RootFamily::Sp, n, 1)),
        GroupFamily::SO | GroupFamily::O => {
            let (f, r) = RootFamily::for_so(n)
                .ok_or_else(|| Failure::Usage("the integral formula needs n >= 2".into()))?;
            Ok((f, r, if family == GroupFamily::O { 2 } else { 1 }))
        }
    }
}

/// `N(k)` by parallel enumeration, one task per outermost path.
fn parallel_enumeration(k: u32) -> Result<BigInt, Failure> {
    let firsts = first_path_choices(k)?;
    let counts: Vec<u64> = firsts
        .par_iter()
        .map(|p| count_with_first_path::<fn(&PathSystem)>(k, p, ENUMERATION_CAP, None))
        .collect::<Result<_, _>>()?;
    Ok(BigInt::from(counts.iter().sum::<u64>()))
}

fn degree_by(family: GroupFamily, n: u32, method: Method, seed: u64, settings: &TrackerSettings) -> Result<BigInt, Failure> {
    match method {
        Method::Formula => Ok(GroupId::new(family, n)?.degree()),
        Method::KazarnovskijDirect | Method::KazarnovskijClosed => {
            let (f, r, factor) = root_family(family, n)?;
            let route = if method == Method::KazarnovskijDirect {
                Route::Direct
            } else {
                Route::Closed
            };
            Ok(degree_via_kazarnovskij(f, r, route)? * factor)
        }
        Method::Lattice => match family {
            // 2^(n−1)·N(n) and twice that for O(n)
            GroupFamily::SO => Ok(parallel_enumeration(n)? << (n - 1)),
            GroupFamily::O => Ok(parallel_enumeration(n)? << n),
            GroupFamily::Sp => parallel_enumeration(2 * n + 1),
        },
        Method::Numeric => {
            if family == GroupFamily::Sp {
                return Err(Failure::Usage("the numeric method covers so and o only".into()));
            }
            let (report, parts) = so_witness_by_total_degree(n as usize, seed, settings)?;
            if report.degraded {
                return Err(Failure::Internal("too many path failures".into()));
            }
            let count = match family {
                GroupFamily::SO => parts.so_points.len(),
                _ => report.witness.len(),
            };
            Ok(BigInt::from(count))
        }
        Method::All => unreachable!("expanded by the caller"),
    }
}

/// Exact routes that accept `(family, n)`.
fn exact_routes(family: GroupFamily, n: u32) -> Vec<Method> {
    let rank = match family {
        GroupFamily::Sp => n,
        _ => n / 2,
    };
    let lattice_size = match family {
        GroupFamily::Sp => 2 * n + 1,
        _ => n,
    };
    let mut routes = vec![Method::Formula];
    if rank >= 1 {
        if rank <= sodeg_core::kazarnovskij::DIRECT_RANK_CAP {
            routes.push(Method::KazarnovskijDirect);
        }
        routes.push(Method::KazarnovskijClosed);
    }
    if (2..=ENUMERATION_CAP).contains(&lattice_size) {
        routes.push(Method::Lattice);
    }
    routes
}

#[derive(Serialize)]
struct DegreeOut {
    group: &'static str,
    n: u32,
    degree: String,
    method: &'static str,
}

#[derive(Serialize)]
struct RouteOut {
    method: &'static str,
    degree: String,
}

#[derive(Serialize)]
struct AllOut {
    group: &'static str,
    n: u32,
    degree: String,
    method: &'static str,
    routes: Vec<RouteOut>,
    agree: bool,
}

fn degree(args: &DegreeArgs, format: Format, settings: &TrackerSettings) -> Result<Report, Failure> {
    let family = GroupFamily::from(args.group);
    GroupId::new(family, args.n)?;
    let group = family.name();
    if args.method != Method::All {
        let d = degree_by(family, args.n, args.method, args.seed, settings)?.to_string();
        let text = match format {
            Format::Json => json_line(&DegreeOut {
                group,
                n: args.n,
                degree: d,
                method: args.method.name(),
            }),
            Format::Csv => format!("group,n,method,degree\n{group},{},{},{d}\n", args.n, args.method.name()),
        };
        return Ok(Report::ok(text));
    }
    let routes: Vec<RouteOut> = exact_routes(family, args.n)
        .into_iter()
        .map(|m| {
            Ok(RouteOut {
                method: m.name(),
                degree: degree_by(family, args.n, m, args.seed, settings)?.to_string(),
            })
        })
        .collect::<Result<_, Failure>>()?;
    let agree = routes.windows(2).all(|w| w[0].degree == w[1].degree);
    let text = match format {
        Format::Json => json_line(&AllOut {
            group,
            n: args.n,
            degree: routes[0].degree.clone(),
            method: Method::All.name(),
            routes,
            agree,
        }),
        Format::Csv => {
            let mut s = String::from("group,n,method,degree\n");
            for r in &routes {
                writeln!(s, "{group},{},{},{}", args.n, r.method, r.degree).expect("string write");
            }
            s
        }
    };
    Ok(Report { text, agree })
}

// ---------------------------------------------------------------- lattice

#[derive(Serialize)]
struct LatticeCountOut {
    n: u32,
    count: String,
}

fn lattice_count(n: u32, format: Format) -> Result<Report, Failure> {
    if n < 2 {
        return Err(Failure::Usage("lattice paths need n >= 2".into()));
    }
    let count = count_via_determinant(n).to_string();
    Ok(Report::ok(match format {
        Format::Json => json_line(&LatticeCountOut { n, count }),
        Format::Csv => format!("n,count\n{n},{count}\n"),
    }))
}

#[derive(Serialize)]
struct EnumerateOut {
    n: u32,
    systems: String,
    determinant: String,
    agree: bool,
}

fn lattice_enumerate(n: u32, emit: bool, format: Format) -> Result<Report, Failure> {
    let mut text = String::new();
    let systems = if emit {
        let mut visit = |s: &PathSystem| text.push_str(&json_line(&s.step_strings()));
        enumerate_nonintersecting(n, Some(&mut visit))?
    } else {
        parallel_enumeration(n)?
    };
    let determinant = count_via_determinant(n);
    let agree = systems == determinant;
    let (systems, determinant) = (systems.to_string(), determinant.to_string());
    match format {
        Format::Json => text.push_str(&json_line(&EnumerateOut {
            n,
            systems,
            determinant,
            agree,
        })),
        Format::Csv => {
            write!(text, "n,systems,determinant,agree\n{n},{systems},{determinant},{agree}\n").expect("string write")
        }
    }
    Ok(Report { text, agree })
}

// ---------------------------------------------------------------- sdp

#[derive(Serialize)]
struct DeltaOut {
    m: u64,
    n: u32,
    r: u32,
    delta: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_points: Option<String>,
}

#[derive(Serialize)]
struct OracleOut {
    m: u64,
    n: u32,
    r: u32,
    seed: u64,
    solutions: usize,
    critical_points: String,
    agree: bool,
    /// `2·deg SO(r)·δ(m, n, n − r)`.
    complementary: String,
    agree_complementary: bool,
    paths: usize,
    failed: usize,
    degraded: bool,
}

fn sdp(cmd: &SdpCommand, format: Format, settings: &TrackerSettings) -> Result<Report, Failure> {
    match *cmd {
        SdpCommand::Delta { m, n, r } | SdpCommand::CriticalCount { m, n, r } => {
            let q = DeltaQuery::new(m, n, r)?;
            let d = delta(&q).to_string();
            let critical = match cmd {
                SdpCommand::CriticalCount { .. } => Some(critical_count(&q)?.to_string()),
                _ => None,
            };
            Ok(Report::ok(match format {
                Format::Json => json_line(&DeltaOut {
                    m,
                    n,
                    r,
                    delta: d,
                    critical_points: critical,
                }),
                Format::Csv => match critical {
                    Some(c) => format!("m,n,r,delta,critical_points\n{m},{n},{r},{d},{c}\n"),
                    None => format!("m,n,r,delta\n{m},{n},{r},{d}\n"),
                },
            }))
        }
        SdpCommand::Oracle { m, n, r, seed } => {
            let q = DeltaQuery::new(m, n, r)?;
            let expected = critical_count(&q)?;
            if r > n {
                return Err(Failure::Usage("rank must satisfy r <= n".into()));
            }
            let report = sdp_critical_solve(m as usize, n as usize, r as usize, seed, settings)?;
            let complementary = deg_so(r) * delta(&DeltaQuery::new(m, n, n - r)?) * 2u32;
            let count = BigInt::from(report.count);
            let out = OracleOut {
                m,
                n,
                r,
                seed,
                solutions: report.count,
                agree: count == expected,
                critical_points: expected.to_string(),
                agree_complementary: count == complementary,
                complementary: complementary.to_string(),
                paths: report.paths,
                failed: report.failed,
                degraded: report.degraded,
            };
            let text = match format {
                Format::Json => json_line(&out),
                Format::Csv => format!(
                    "m,n,r,seed,solutions,critical_points,agree,complementary,agree_complementary,paths,failed,degraded\n\
                     {m},{n},{r},{seed},{},{},{},{},{},{},{},{}\n",
                    out.solutions,
                    out.critical_points,
                    out.agree,
                    out.complementary,
                    out.agree_complementary,
                    out.paths,
                    out.failed,
                    out.degraded
                ),
            };
            // a measurement: disagreement is reported, not treated as failure
            Ok(Report::ok(text))
        }
    }
}

// ---------------------------------------------------------------- witness

fn so_witness(n: usize, seed: u64, monodromy: bool, settings: &TrackerSettings) -> Result<WitnessSet, Failure> {
    if monodromy {
        if !(2..=5).contains(&n) {
            return Err(Failure::Usage("monodromy supports 2 <= n <= 5".into()));
        }
        let r = so_witness_by_monodromy(n, seed, settings)?;
        if !r.settled {
            return Err(Failure::Internal("monodromy did not settle".into()));
        }
        Ok(r.witness)
    } else {
        let (report, parts) = so_witness_by_total_degree(n, seed, settings)?;
        if report.degraded {
            return Err(Failure::Internal("too many path failures".into()));
        }
        let mut ws = report.witness;
        ws.points = parts.so_points;
        Ok(ws)
    }
}

fn witness_solve(n: usize, seed: u64, monodromy: bool, settings: &TrackerSettings) -> Result<Report, Failure> {
    let ws = so_witness(n, seed, monodromy, settings)?;
    let mut text = witness_to_json(&ws);
    text.push('\n');
    Ok(Report::ok(text))
}

#[derive(Serialize)]
struct Bucket {
    real_count: usize,
    frequency: u64,
}

#[derive(Serialize)]
struct CensusOut {
    n: usize,
    samples: usize,
    seed: u64,
    degree: usize,
    histogram: Vec<Bucket>,
    fail: u64,
}

fn witness_census(
    n: usize,
    samples: usize,
    seed: u64,
    out: Option<&std::path::Path>,
    format: Format,
    settings: &TrackerSettings,
) -> Result<Report, Failure> {
    if !(2..=4).contains(&n) {
        return Err(Failure::Usage("census supports 2 <= n <= 4".into()));
    }
    let base = so_witness(n, seed, true, settings)?;
    let report = real_census(n, &base, samples, seed, settings)?;
    let csv = census_to_csv(&report);
    if let Some(path) = out {
        std::fs::write(path, &csv).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
    }
    Ok(Report::ok(match format {
        Format::Csv => csv,
        Format::Json => json_line(&CensusOut {
            n,
            samples,
            seed,
            degree: report.degree,
            histogram: report
                .histogram
                .iter()
                .map(|(&real_count, &frequency)| Bucket { real_count, frequency })
                .collect(),
            fail: report.fails,
        }),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &str) -> Outcome {
        run(std::iter::once("sodeg").chain(args.split_whitespace()))
    }

    #[test]
    fn degree_formula_json() {
        let o = run_args("degree so 7 --method formula");
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout, "{\"group\":\"SO\",\"n\":7,\"degree\":\"111616\",\"method\":\"formula\"}\n");
    }

    #[test]
    fn degree_all_agrees() {
        let o = run_args("degree so 5 --method all");
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("\"agree\":true"));
        for m in ["formula", "kazarnovskij-direct", "kazarnovskij-closed", "lattice"] {
            assert!(o.stdout.contains(&format!("{{\"method\":\"{m}\",\"degree\":\"384\"}}")), "{m}");
        }
    }

    #[test]
    fn sdp_critical_count_json() {
        let o = run_args("sdp critical-count 1 2 1");
        assert_eq!(o.stdout, "{\"m\":1,\"n\":2,\"r\":1,\"delta\":\"2\",\"critical_points\":\"4\"}\n");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args("frobnicate").code, 2);
        assert_eq!(run_args("degree so 7 --method magic").code, 2);
        assert_eq!(run_args("degree so 0").code, 2);
        assert_eq!(run_args("degree sp 2 --method numeric").code, 2);
        assert_eq!(run_args("lattice enumerate 12").code, 2);
        assert_eq!(run_args("degree so 3 --json --csv").code, 2);
        assert!(!run_args("frobnicate").stderr.is_empty());
    }

    #[test]
    fn csv_output() {
        let o = run_args("degree o 3 --csv");
        assert_eq!(o.stdout, "group,n,method,degree\nO,3,formula,16\n");
        let o = run_args("lattice count 5 --csv");
        assert_eq!(o.stdout, "n,count\n5,24\n");
    }

    #[test]
    fn lattice_enumerate_emits_each_system() {
        let o = run_args("lattice enumerate 5 --emit");
        assert_eq!(o.code, 0);
        let lines: Vec<&str> = o.stdout.lines().collect();
        assert_eq!(lines.len(), 25);
        assert!(lines[0].starts_with("[\""));
        assert_eq!(lines[24], "{\"n\":5,\"systems\":\"24\",\"determinant\":\"24\",\"agree\":true}");
    }

    #[test]
    fn sp_and_o_routes() {
        let o = run_args("degree sp 3 --method all");
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("\"degree\":\"1744\""));
        let o = run_args("degree o 4 --method lattice");
        assert!(o.stdout.contains("\"degree\":\"80\""));
    }
}
