//! `qac`: compute Macdonald and Al-Salam & Carlitz polynomials and run the verification suites.

mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qac_core::algebra::{format_rational, parse_rational, ParamPoint, Rational};
use qac_core::asc::{asc_u, asc_v_route, det_formula, Family, Route};
use qac_core::macdonald::macdonald_p;
use qac_core::partition::Partition;
use qac_core::Error;

const DEFAULT_DIGITS: usize = 60;

#[derive(Parser)]
#[command(name = "qac", version, about = "Exact multivariable Al-Salam & Carlitz polynomials and their identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Macdonald polynomial P_kappa(x; q, t).
    Macdonald(MacArgs),
    /// U_kappa or V_kappa by one route, or by all three with an agreement flag.
    Asc(AscArgs),
    /// U_kappa at t = q from the determinant formula.
    Det(DetArgs),
    /// Run a verification suite and print the per-check reports.
    Verify(verify::VerifyArgs),
}

#[derive(Args)]
struct MacArgs {
    #[arg(long, value_parser = parse_partition)]
    partition: Partition,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    q: Rational,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    t: Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    U,
    V,
}

#[derive(Clone, Copy, ValueEnum)]
enum RouteArg {
    Eigen,
    Genfun,
    Expop,
    All,
}

#[derive(Args)]
struct AscArgs {
    #[arg(long, value_enum, ignore_case = true)]
    family: FamilyArg,
    #[arg(long, value_parser = parse_partition)]
    partition: Partition,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    q: Rational,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    t: Rational,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    a: Rational,
    #[arg(long, value_enum, default_value = "eigen")]
    route: RouteArg,
}

#[derive(Args)]
struct DetArgs {
    #[arg(long, value_parser = parse_partition)]
    partition: Partition,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    q: Rational,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    a: Rational,
}

pub(crate) fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// Comma-separated parts; `0` or an empty string is the empty partition.
fn parse_partition(s: &str) -> Result<Partition, String> {
    let parts = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<u32>().map_err(|_| format!("{p:?} is not a nonnegative integer")))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::try_from_parts(parts).map_err(|e| e.to_string())
}

/// Failure with its exit code.
pub(crate) struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Failure { kind: "usage", message: message.into(), code: 2 }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (kind, code) = match e {
            Error::Resonance { .. } => ("resonance", 3),
            Error::InvalidParameter(_)
            | Error::Parse(_)
            | Error::PartitionTooLong { .. }
            | Error::OutOfRange(_)
            | Error::VarCountMismatch { .. } => ("invalid-argument", 2),
            _ => ("computation", 1),
        };
        Failure { kind, message: e.to_string(), code }
    }
}

fn point(q: &Rational, t: &Rational, a: &Rational, n: usize) -> Result<ParamPoint, Failure> {
    let pt = ParamPoint::new(q.clone(), t.clone(), a.clone(), n);
    pt.check_exact()?;
    Ok(pt)
}

fn macdonald(args: &MacArgs) -> Result<Value, Failure> {
    let pt = point(&args.q, &args.t, &Rational::from_integer(0.into()), args.n)?;
    args.partition.check_len(args.n)?;
    let p = macdonald_p(&args.partition, &pt)?;
    Ok(json!({
        "kappa": args.partition.to_json(),
        "params": {"q": format_rational(&pt.q), "t": format_rational(&pt.t), "n": pt.nvars},
        "poly": p.to_json(),
    }))
}

fn build(family: FamilyArg, kappa: &Partition, pt: &ParamPoint, route: Route) -> Result<Value, Failure> {
    let p = match family {
        FamilyArg::U => asc_u(kappa, pt, route)?,
        FamilyArg::V => asc_v_route(kappa, pt, route)?,
    };
    Ok(p.to_json())
}

fn asc(args: &AscArgs) -> Result<Value, Failure> {
    let pt = point(&args.q, &args.t, &args.a, args.n)?;
    args.partition.check_len(args.n)?;
    let single = |r| build(args.family, &args.partition, &pt, r);
    match args.route {
        RouteArg::Eigen => single(Route::Eigen),
        RouteArg::Genfun => single(Route::Genfun),
        RouteArg::Expop => single(Route::Expop),
        RouteArg::All => {
            let polys = [Route::Eigen, Route::Genfun, Route::Expop]
                .into_iter()
                .map(single)
                .collect::<Result<Vec<_>, _>>()?;
            let agree = polys.iter().all(|p| p["poly"] == polys[0]["poly"]);
            let mut out = polys[0].clone();
            out["route"] = json!("all");
            out["agree"] = json!(agree);
            Ok(out)
        }
    }
}

fn det(args: &DetArgs) -> Result<Value, Failure> {
    let pt = point(&args.q, &args.q, &args.a, args.n)?;
    args.partition.check_len(args.n)?;
    let poly = det_formula(&args.partition, &pt)?;
    Ok(json!({
        "family": Family::U,
        "kappa": args.partition.to_json(),
        "params": pt.to_json(),
        "route": "det",
        "poly": poly.to_json(),
    }))
}

/// `--precision`, then `QAC_PRECISION`, then the default.
pub(crate) fn digits(flag: Option<usize>) -> Result<usize, Failure> {
    let d = match flag {
        Some(d) => d,
        None => match std::env::var("QAC_PRECISION") {
            Ok(s) => s.trim().parse().map_err(|_| Failure::usage(format!("QAC_PRECISION={s:?} is not an integer")))?,
            Err(_) => DEFAULT_DIGITS,
        },
    };
    if !(16..=2000).contains(&d) {
        return Err(Failure::usage(format!("precision {d} outside 16..=2000 digits")));
    }
    Ok(d)
}

fn print(v: &Value) {
    use std::io::Write;
    // a closed pipe downstream is not an error of ours
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let msg = e.kind().to_string();
            let detail = e.to_string();
            print(&json!({"error": "usage", "message": msg, "detail": detail.trim()}));
            return ExitCode::from(2);
        }
    };
    let res = match &cli.cmd {
        Cmd::Macdonald(a) => macdonald(a).map(|v| (v, true)),
        Cmd::Asc(a) => asc(a).map(|v| (v, true)),
        Cmd::Det(a) => det(a).map(|v| (v, true)),
        Cmd::Verify(a) => verify::run(a),
    };
    match res {
        Ok((v, ok)) => {
            print(&v);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            print(&json!({"error": f.kind, "message": f.message}));
            ExitCode::from(f.code)
        }
    }
}
