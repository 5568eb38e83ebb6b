mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use polycount::counts::{
    approx_irreducible, approx_irreducible_multi, count_irreducible_multi,
    count_irreducible_univariate, eval_count, irreducible_from_log, sorted_desc, Approximant,
};
use polycount::indec::{approx_indecomposable, count_indecomposable};
use polycount::oracle::{self, CensusReport, DegreeSpec};
use polycount::{Error, QPolyOverQm1, ZSeries};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "polycount",
    version,
    about = "Exact counts of irreducible and indecomposable polynomials over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Irreducible monic polynomials of total degree n in nu variables
    Irr(IrrArgs),
    /// Irreducible monic polynomials of an exact multidegree
    IrrMulti(MultiArgs),
    /// Indecomposable polynomials of total degree n
    Indec(TotalArgs),
    /// First-order approximation and its error exponent
    Approx {
        #[command(subcommand)]
        which: ApproxCommand,
    },
    /// Coefficients of log(1 + N(z))
    Series(SeriesArgs),
    /// Compare brute-force censuses over F_p with the formulas
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum ApproxCommand {
    Irr(ApproxTotal),
    IrrMulti(ApproxMulti),
    Indec(ApproxTotal),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Irr,
    Indec,
    Multi,
    Uni,
}

#[derive(Args)]
struct TotalArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    vars: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    deg: u32,
    /// Also evaluate at this field size
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    q: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct IrrArgs {
    #[command(flatten)]
    total: TotalArgs,
    /// JSON file caching the log series between runs
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct MultiArgs {
    /// Comma-separated multidegree, e.g. 11,5
    #[arg(long, value_delimiter = ',', required = true)]
    deg: Vec<u32>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    q: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ApproxTotal {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    vars: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    deg: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct ApproxMulti {
    #[arg(long, value_delimiter = ',', required = true)]
    deg: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    vars: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    terms: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Field size; one of 2, 3, 5
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    vars: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_deg: u32,
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::HypothesisViolation(_)
            | Error::UnsupportedPrime(_)
            | Error::BudgetExceeded { .. }
            | Error::OutOfBounds { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

struct Output {
    stdout: String,
    code: u8,
}

impl From<String> for Output {
    fn from(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

type Run = std::result::Result<Output, Failure>;

fn render_count(c: &QPolyOverQm1, q: Option<u64>, format: Format) -> Run {
    let value = q.map(|q0| eval_count(c, q0).map(|v| (q0, v))).transpose()?;
    let out = match format {
        Format::Json => {
            let mut v = serde_json::to_value(c).expect("count serializes");
            if let Some((q0, n)) = &value {
                v["q"] = json!(q0);
                v["value"] = json!(n.to_string());
            }
            format!("{v}\n")
        }
        Format::Text | Format::Latex => {
            let mut s = match format {
                Format::Text => c.to_string(),
                _ => c.to_latex(),
            };
            s.push('\n');
            if let Some((_, n)) = &value {
                let _ = writeln!(s, "{n}");
            }
            s
        }
    };
    Ok(out.into())
}

fn render_approx(a: &Approximant, format: Format) -> Run {
    let err = a.error_exponent.finite();
    let out = match format {
        Format::Text => format!("main: {}\nerror_exponent: {}\n", a.main, a.error_exponent),
        Format::Latex => match err {
            Some(e) => format!("{} + O(q^{{{e}}})\n", a.main.to_latex()),
            None => format!("{}\n", a.main.to_latex()),
        },
        Format::Json => {
            let v = json!({
                "main": a.main,
                "full_main": a.full_main,
                "error_exponent": err,
            });
            format!("{v}\n")
        }
    };
    Ok(out.into())
}

fn render_series(s: &ZSeries, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(s).expect("series serializes")),
        Format::Text => s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| format!("[z^{}] {c}\n", i + 1))
            .collect(),
        Format::Latex => s
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| format!("[z^{{{}}}] {}\n", i + 1, c.to_latex()))
            .collect(),
    }
}

fn cmd_irr(args: &IrrArgs) -> Run {
    let t = &args.total;
    let count = if t.vars == 1 {
        QPolyOverQm1::from_polynomial(count_irreducible_univariate(t.deg)?)
    } else {
        let log = cache::cached_log_series(t.vars, t.deg, args.cache.as_deref())?;
        irreducible_from_log(&log, t.deg)?
    };
    render_count(&count, t.q, t.format)
}

fn cmd_irr_multi(args: &MultiArgs) -> Run {
    let count = count_irreducible_multi(&sorted_desc(&args.deg))?;
    render_count(&count, args.q, args.format)
}

fn cmd_indec(args: &TotalArgs) -> Run {
    let count = QPolyOverQm1::from_polynomial(count_indecomposable(args.vars, args.deg as u64)?);
    render_count(&count, args.q, args.format)
}

fn cmd_approx(which: &ApproxCommand) -> Run {
    match which {
        ApproxCommand::Irr(a) => render_approx(&approx_irreducible(a.vars, a.deg)?, a.format),
        ApproxCommand::IrrMulti(a) => render_approx(&approx_irreducible_multi(&a.deg)?, a.format),
        ApproxCommand::Indec(a) => {
            render_approx(&approx_indecomposable(a.vars, a.deg as u64)?, a.format)
        }
    }
}

fn cmd_series(args: &SeriesArgs) -> Run {
    if args.vars < 2 {
        return Err(Failure::Usage(
            "series needs --vars >= 2; one variable has a closed form (use irr)".into(),
        ));
    }
    let log = cache::cached_log_series(args.vars, args.terms, args.cache.as_deref())?;
    Ok(render_series(&log, args.format).into())
}

struct Row {
    report: CensusReport,
    formula: BigInt,
}

impl Row {
    fn pass(&self) -> bool {
        BigInt::from(self.report.count) == self.formula
    }
}

// non-increasing multidegrees with leading entry at most max_deg
fn multidegrees(nu: u32, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..nu {
        out = out
            .into_iter()
            .flat_map(|v| {
                let cap = v.last().copied().unwrap_or(max_deg);
                (0..=cap).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|x| *x > 0));
    out.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum()).then(b.cmp(a)));
    out
}

fn cmd_verify(args: &VerifyArgs) -> Run {
    oracle::check_prime(args.p)?;
    let (p, nu) = (args.p, args.vars);
    let at_p = |c: &QPolyOverQm1| eval_count(c, p as u64);
    let mut rows = Vec::new();
    match args.mode {
        Mode::Irr => {
            for n in 1..=args.max_deg {
                let report = oracle::census_irreducible_monic(p, nu, n)?;
                let count = if nu == 1 {
                    QPolyOverQm1::from_polynomial(count_irreducible_univariate(n)?)
                } else {
                    polycount::counts::count_irreducible_degree(nu, n)?
                };
                rows.push(Row {
                    report,
                    formula: at_p(&count)?,
                });
            }
        }
        Mode::Indec => {
            for n in 1..=args.max_deg {
                let count = QPolyOverQm1::from_polynomial(count_indecomposable(nu, n as u64)?);
                let report = oracle::census_indecomposable(p, nu, n)?;
                rows.push(Row {
                    report,
                    formula: at_p(&count)?,
                });
            }
        }
        Mode::Multi => {
            for md in multidegrees(nu, args.max_deg) {
                let count = count_irreducible_multi(&md)?;
                let report = oracle::census_irreducible_multidegree(p, &md)?;
                rows.push(Row {
                    report,
                    formula: at_p(&count)?,
                });
            }
        }
        Mode::Uni => {
            for n in 1..=args.max_deg {
                let count = QPolyOverQm1::from_polynomial(count_irreducible_univariate(n)?);
                let report = oracle::census_irreducible_univariate(p, n)?;
                rows.push(Row {
                    report,
                    formula: at_p(&count)?,
                });
            }
        }
    }
    let failures = rows.iter().filter(|r| !r.pass()).count();
    let mut out = String::new();
    match args.format {
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let degree = match &r.report.degree {
                        DegreeSpec::Total(n) => json!(n),
                        DegreeSpec::Multi(v) => json!(v),
                    };
                    json!({
                        "p": r.report.p,
                        "nu": r.report.nu,
                        "degree": degree,
                        "population": r.report.population,
                        "census": r.report.count,
                        "formula": r.formula.to_string(),
                        "pass": r.pass(),
                    })
                })
                .collect();
            let _ = writeln!(out, "{}", Value::Array(list));
        }
        Format::Text | Format::Latex => {
            let _ = writeln!(out, "p\tnu\tdegree\tpopulation\tcensus\tformula\tstatus");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.report.p,
                    r.report.nu,
                    r.report.degree,
                    r.report.population,
                    r.report.count,
                    r.formula,
                    if r.pass() { "PASS" } else { "FAIL" }
                );
            }
        }
    }
    if failures > 0 {
        eprintln!("error: {failures} census/formula mismatches");
        return Ok(Output {
            stdout: out,
            code: 2,
        });
    }
    Ok(out.into())
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Irr(a) => cmd_irr(a),
        Command::IrrMulti(a) => cmd_irr_multi(a),
        Command::Indec(a) => cmd_indec(a),
        Command::Approx { which } => cmd_approx(which),
        Command::Series(a) => cmd_series(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
