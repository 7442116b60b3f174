//! The `tentlab` command line. Every subcommand prints one JSON document
//! (or CSV where a table makes sense) and exits 0 on success, 1 when a
//! verification report contains failures, 2 on usage errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::audit_report;
use crate::commutants::{audit_counts, brute_force_commuting, X0Filter};
use crate::conjugacy::{density_probe, graph_length, slope_measure, ConjugacyIterate, Mode};
use crate::continuation::{
    audit_continuable, continuable_from_point, enumerate_continuable, solve_k0, ContinuationProblem,
};
use crate::error::Error;
use crate::plm::PiecewiseLinearMap;
use crate::probe::linearity_probe;
use crate::rational::Rational;
use crate::sample::unit_rationals;
use crate::sawtooth::{classify_solution, verify_commutation, SawtoothMap};
use crate::tent::{preimage_set, PreimageKind, PreimageMethod};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tentlab",
    version,
    about = "Exact computations around maps commuting with the tent map"
)]
pub struct Cli {
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for exhaustive searches (output does not depend on it)
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn start_pair(s: &str) -> Result<(u32, u64), String> {
    let (n, k) = s.split_once(',').ok_or_else(|| format!("expected n,k, got {s:?}"))?;
    Ok((
        n.trim().parse().map_err(|e| format!("level: {e}"))?,
        k.trim().parse().map_err(|e| format!("index: {e}"))?,
    ))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Preimage sets A_n, B_n, F_n
    Preimages {
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = |s: &str| s.parse::<PreimageKind>().map_err(|e| e.to_string()))]
        kind: PreimageKind,
        #[arg(long, value_enum, default_value_t = MethodArg::ClosedForm)]
        method: MethodArg,
    },
    /// The sawtooth family
    #[command(subcommand)]
    Sawtooth(SawtoothCmd),
    /// Search for an interval of linearity of a sawtooth map
    Probe {
        #[arg(long)]
        k: u64,
        /// starting dyadic interval `n,k`
        #[arg(long, value_parser = start_pair)]
        start: (u32, u64),
        /// absolute depth budget
        #[arg(long, default_value_t = 20)]
        depth: u32,
    },
    /// Finite commuting tables on A_n
    #[command(subcommand)]
    Commutants(CommutantsCmd),
    /// Tables that extend to continuous commuting maps
    Continuable(ContinuableArgs),
    /// Conjugacy iterates between the tent map and a skew tent
    #[command(subcommand)]
    Conjugacy(ConjugacyCmd),
    /// Recompute every checkable claim and report a verdict for each
    Audit {
        #[arg(long, default_value_t = 3)]
        max_n: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Iterated,
    ClosedForm,
}

#[derive(Debug, Subcommand)]
pub enum SawtoothCmd {
    /// ξ_(k)(x)
    Eval {
        #[arg(long)]
        k: u64,
        #[arg(long, value_parser = rational)]
        x: Rational,
    },
    /// Classify a piecewise linear map given as a JSON breakpoint file
    Classify {
        #[arg(long)]
        plm: PathBuf,
    },
    /// Check commutation with the tent map on seeded random rationals
    Verify {
        #[arg(long, conflicts_with = "plm", required_unless_present = "plm")]
        k: Option<u64>,
        #[arg(long)]
        plm: Option<PathBuf>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..=10_000_000))]
        samples: u64,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        max_denom: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum CommutantsCmd {
    /// Every commuting table on A_n, by exhaustive search
    Enumerate {
        #[arg(long)]
        n: u32,
        /// keep only tables with this value at 0 (0 or 2/3)
        #[arg(long, value_parser = rational)]
        x0: Option<Rational>,
    },
    /// Exhaustive count next to the closed formula and the recursions
    Audit {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct ContinuableArgs {
    #[command(subcommand)]
    pub command: Option<ContinuableCmd>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, value_parser = rational, requires = "beta")]
    pub alpha: Option<Rational>,
    #[arg(long, value_parser = rational, requires = "alpha")]
    pub beta: Option<Rational>,
}

#[derive(Debug, Subcommand)]
pub enum ContinuableCmd {
    /// Continuable count next to the claimed 2^(n-1)
    Audit {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConjugacyCmd {
    /// Breakpoints of h_n
    Table {
        #[arg(long, value_parser = rational)]
        v: Rational,
        #[arg(long)]
        n: u32,
    },
    /// Graph length of h_n
    Length {
        #[arg(long, value_parser = rational)]
        v: Rational,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Aggregate)]
        mode: ModeArg,
    },
    /// Measure of the pieces of h_n with |slope| >= threshold
    Slopes {
        #[arg(long, value_parser = rational)]
        v: Rational,
        #[arg(long)]
        n: u32,
        #[arg(long, value_parser = rational, default_value = "1")]
        threshold: Rational,
        #[arg(long, value_enum, default_value_t = ModeArg::Aggregate)]
        mode: ModeArg,
    },
    /// Gaps left by the preimages of 1 under the skew tent
    Density {
        #[arg(long, value_parser = rational)]
        v: Rational,
        #[arg(long)]
        depth: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Explicit,
    Aggregate,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Explicit => Mode::Explicit,
            ModeArg::Aggregate => Mode::Aggregate,
        }
    }
}

/// What a subcommand produced: the document and whether it reports a
/// verification failure.
pub struct Outcome {
    pub body: String,
    pub failed: bool,
}

fn json<T: Serialize>(value: &T, failed: bool) -> Result<Outcome, Error> {
    let mut body = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    body.push('\n');
    Ok(Outcome { body, failed })
}

fn csv_rows<const N: usize>(header: [&str; N], rows: impl IntoIterator<Item = [String; N]>) -> Result<Outcome, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(Outcome {
        body: String::from_utf8(bytes).expect("utf-8"),
        failed: false,
    })
}

fn no_csv(what: &str) -> Error {
    Error::Malformed(format!("csv output is not available for {what}"))
}

fn read_plm(path: &PathBuf) -> Result<PiecewiseLinearMap, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct PreimagesOut {
    n: u32,
    kind: PreimageKind,
    method: &'static str,
    count: usize,
    points: Vec<Rational>,
}

#[derive(Serialize)]
struct EnumerateOut {
    n: u32,
    x0: Option<Rational>,
    count: usize,
    tables: Vec<crate::commutants::CommutingTable>,
}

#[derive(Serialize)]
struct VerifyOut {
    k: Option<u64>,
    seed: u64,
    report: crate::sawtooth::CommutationReport,
}

#[derive(Serialize)]
struct ContinuableOut {
    n: u32,
    alpha: Rational,
    beta: Rational,
    k0: String,
    classes: Vec<String>,
    k: String,
    table: crate::commutants::CommutingTable,
    commutes: bool,
}

/// Runs a parsed command line and returns its document.
pub fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Preimages { n, kind, method } => {
            let (m, name) = match method {
                MethodArg::Iterated => (PreimageMethod::Iterated, "iterated"),
                MethodArg::ClosedForm => (PreimageMethod::ClosedForm, "closed-form"),
            };
            let set = preimage_set(*n, *kind, m)?;
            if csv {
                return csv_rows(["x"], set.points.iter().map(|x| [x.to_string()]));
            }
            json(
                &PreimagesOut {
                    n: *n,
                    kind: *kind,
                    method: name,
                    count: set.len(),
                    points: set.points,
                },
                false,
            )
        }
        Command::Sawtooth(cmd) => match cmd {
            SawtoothCmd::Eval { k, x } => {
                let y = SawtoothMap::new(*k)?.eval(x)?;
                if csv {
                    return csv_rows(["k", "x", "y"], [[k.to_string(), x.to_string(), y.to_string()]]);
                }
                json(&y, false)
            }
            SawtoothCmd::Classify { plm } => {
                if csv {
                    return Err(no_csv("sawtooth classify"));
                }
                json(&classify_solution(&read_plm(plm)?), false)
            }
            SawtoothCmd::Verify {
                k,
                plm,
                samples,
                max_denom,
            } => {
                if csv {
                    return Err(no_csv("sawtooth verify"));
                }
                if *max_denom == 0 {
                    return Err(Error::Domain("max-denom must be positive".into()));
                }
                let pts = unit_rationals(cli.seed, *samples as usize, *max_denom);
                let report = match (k, plm) {
                    (Some(k), _) => verify_commutation(&SawtoothMap::new(*k)?, &pts)?,
                    (None, Some(path)) => verify_commutation(&read_plm(path)?, &pts)?,
                    (None, None) => unreachable!("clap requires one of --k, --plm"),
                };
                let failed = !report.ok;
                json(
                    &VerifyOut {
                        k: *k,
                        seed: cli.seed,
                        report,
                    },
                    failed,
                )
            }
        },
        Command::Probe { k, start, depth } => {
            if csv {
                return Err(no_csv("probe"));
            }
            json(&linearity_probe(&SawtoothMap::new(*k)?, *start, *depth)?, false)
        }
        Command::Commutants(cmd) => match cmd {
            CommutantsCmd::Enumerate { n, x0 } => {
                let filter = match x0 {
                    Some(c) => X0Filter::Only(c.clone()),
                    None => X0Filter::Any,
                };
                let tables = brute_force_commuting(*n, &filter, workers)?;
                if csv {
                    let rows = tables.iter().enumerate().flat_map(|(i, t)| {
                        t.values()
                            .iter()
                            .map(move |(x, y)| [i.to_string(), x.to_string(), y.to_string()])
                            .collect::<Vec<_>>()
                    });
                    return csv_rows(["table", "x", "psi"], rows);
                }
                json(
                    &EnumerateOut {
                        n: *n,
                        x0: x0.clone(),
                        count: tables.len(),
                        tables,
                    },
                    false,
                )
            }
            CommutantsCmd::Audit { n } => {
                if csv {
                    return Err(no_csv("commutants audit"));
                }
                let a = audit_counts(*n, workers)?;
                let failed = !a.agree;
                json(&a, failed)
            }
        },
        Command::Continuable(args) => {
            if csv {
                return Err(no_csv("continuable"));
            }
            match (&args.command, args.n) {
                (Some(ContinuableCmd::Audit { n }), _) => {
                    let a = audit_continuable(*n)?;
                    let failed = !a.matches_claim;
                    json(&a, failed)
                }
                (None, Some(n)) => match (&args.alpha, &args.beta) {
                    (Some(alpha), Some(beta)) => {
                        let p = ContinuationProblem::new(n, alpha.clone(), beta.clone())?;
                        let sol = solve_k0(&p);
                        let table = continuable_from_point(&p)?;
                        let commutes = table.commutes();
                        json(
                            &ContinuableOut {
                                n,
                                alpha: alpha.clone(),
                                beta: beta.clone(),
                                k0: sol.k0.to_string(),
                                classes: sol.classes.iter().map(|c| c.to_string()).collect(),
                                k: sol.smallest_k().to_string(),
                                table,
                                commutes,
                            },
                            !commutes,
                        )
                    }
                    _ => json(&enumerate_continuable(n)?, false),
                },
                (None, None) => Err(Error::Malformed("continuable needs --n or the audit subcommand".into())),
            }
        }
        Command::Conjugacy(cmd) => match cmd {
            ConjugacyCmd::Table { v, n } => {
                let h = ConjugacyIterate::iterate(v.clone(), *n)?;
                if csv {
                    return csv_rows(["x", "h"], h.breakpoints().map(|(x, y)| [x.to_string(), y.to_string()]));
                }
                json(&h, false)
            }
            ConjugacyCmd::Length { v, n, mode } => {
                let g = graph_length(*n, v, (*mode).into())?;
                if csv {
                    return csv_rows(
                        ["n", "v", "mode", "length", "deficit"],
                        [[
                            n.to_string(),
                            v.to_string(),
                            g.mode.to_string(),
                            g.length.to_string(),
                            g.deficit.to_string(),
                        ]],
                    );
                }
                json(&g, false)
            }
            ConjugacyCmd::Slopes { v, n, threshold, mode } => {
                let m = slope_measure(*n, v, threshold, (*mode).into())?;
                if csv {
                    return csv_rows(
                        ["n", "v", "threshold", "measure"],
                        [[
                            n.to_string(),
                            v.to_string(),
                            threshold.to_string(),
                            m.measure.to_string(),
                        ]],
                    );
                }
                json(&m, false)
            }
            ConjugacyCmd::Density { v, depth } => {
                if csv {
                    return Err(no_csv("conjugacy density"));
                }
                json(&density_probe(v, *depth)?, false)
            }
        },
        Command::Audit { max_n } => {
            if csv {
                return Err(no_csv("audit"));
            }
            let r = audit_report(*max_n, cli.seed, workers)?;
            let failed = r.any_refuted();
            json(&r, failed)
        }
    }
}

/// Parses `args` (program name first), runs, writes the document and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &out.body),
                None => std::io::stdout().lock().write_all(out.body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("tentlab: {e}");
                return EXIT_USAGE;
            }
            if out.failed {
                EXIT_FAILURE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("tentlab: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(args: &[&str]) -> Outcome {
        let cli = Cli::try_parse_from(std::iter::once("tentlab").chain(args.iter().copied())).unwrap();
        execute(&cli).unwrap()
    }

    #[test]
    fn sawtooth_eval_prints_rational() {
        assert_eq!(exec(&["sawtooth", "eval", "--k", "3", "--x", "1/2"]).body, "\"1/2\"\n");
    }

    #[test]
    fn preimages_count() {
        let out = exec(&["preimages", "--n", "2", "--kind", "F"]);
        let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["count"], 7);
        assert_eq!(v["points"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(
            run(["tentlab", "sawtooth", "eval", "--k", "3", "--x", "0.5"]),
            EXIT_USAGE
        );
        assert_eq!(run(["tentlab", "nonsense"]), EXIT_USAGE);
        assert_eq!(run(["tentlab", "preimages", "--n", "2", "--kind", "Q"]), EXIT_USAGE);
    }

    #[test]
    fn continuable_point_and_audit() {
        let out = exec(&["continuable", "--n", "2", "--alpha", "1/2", "--beta", "1/2"]);
        let v: serde_json::Value = serde_json::from_str(&out.body).unwrap();
        assert_eq!(v["k0"], "1");
        assert_eq!(v["commutes"], true);
        let out = exec(&["continuable", "audit", "--n", "2"]);
        assert!(out.failed);
    }

    #[test]
    fn conjugacy_csv() {
        let cli = Cli::try_parse_from([
            "tentlab",
            "--format",
            "csv",
            "conjugacy",
            "table",
            "--v",
            "1/4",
            "--n",
            "1",
        ])
        .unwrap();
        assert_eq!(execute(&cli).unwrap().body, "x,h\n0/1,0/1\n1/2,1/4\n1/1,1/1\n");
    }
}
