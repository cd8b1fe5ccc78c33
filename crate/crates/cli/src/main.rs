use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use permstat::asymptotics::{alpha_limit, variance_limit};
use permstat::expectation::RationalExpectation;
use permstat::indicator::{Engine, DEFAULT_SUPPORT_CAP};
use permstat::oracle::{definitions, ClassTable, DEFAULT_MAX_N};
use permstat::poly::{fmt_rational, Naming};
use permstat::statistic::{moment, parse_statistic, uniform_moment, variance, RegularStatistic};
use permstat::Error;

/// Exact moments of permutation statistics on conjugacy classes.
#[derive(Parser)]
#[command(name = "permstat", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// On-disk JSON cache of indicator polynomials.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Largest support whose Bell-many set partitions may be enumerated.
    #[arg(long, global = true, value_name = "INT", default_value_t = DEFAULT_SUPPORT_CAP)]
    bell_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic E_λ[Ψ^d] in n, m1, m2, …
    Moment(MomentArgs),
    /// Scaling limits along m1 ~ alpha n, m2 ~ beta n.
    Limit(LimitArgs),
    /// Compare against brute force over every class of S_n, n <= nmax.
    Verify(VerifyArgs),
    /// Print the translate expansion.
    Expand { expr: String },
}

#[derive(Args)]
struct MomentArgs {
    expr: String,
    #[arg(short = 'd', default_value_t = 1)]
    d: u32,
    /// Cycle type to evaluate at, e.g. 4,2,1.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    lambda: Option<Vec<u32>>,
    /// Report E[Ψ^2] - E[Ψ]^2 instead of E[Ψ^d].
    #[arg(long, conflicts_with = "uniform")]
    variance: bool,
    /// Uniform measure on S_n instead of a single class.
    #[arg(long, conflicts_with = "lambda")]
    uniform: bool,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct LimitKind {
    #[arg(long)]
    mean: bool,
    #[arg(long)]
    variance: bool,
}

#[derive(Args)]
struct LimitArgs {
    expr: String,
    #[command(flatten)]
    kind: LimitKind,
}

#[derive(Args)]
struct VerifyArgs {
    expr: String,
    #[arg(long)]
    nmax: u32,
    #[arg(short = 'd', default_value_t = 1)]
    d: u32,
}

struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => 3,
        Error::Consistency(_) | Error::Divergence(_) => 4,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Malformed(_) => "malformed",
        Error::SizeMismatch { .. } => "size-mismatch",
        Error::Parse { .. } => "parse",
        Error::UnknownBuiltin(_) => "unknown-builtin",
        Error::ResourceLimit(_) => "resource-limit",
        Error::Consistency(_) => "consistency",
        Error::Domain(_) => "domain",
        Error::DegenerateEvaluation(_) => "degenerate-evaluation",
        Error::Divergence(_) => "divergence",
        Error::Io(_) => "io",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, expr) = match &cli.command {
        Command::Moment(a) => ("moment", &a.expr),
        Command::Limit(a) => ("limit", &a.expr),
        Command::Verify(a) => ("verify", &a.expr),
        Command::Expand { expr } => ("expand", expr),
    };
    match run(&cli) {
        Ok(report) => {
            let out = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&report.json).expect("json"))
            } else {
                report.text
            };
            let _ = std::io::stdout().write_all(out.as_bytes());
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                let body = json!({
                    "command": command,
                    "statistic": expr,
                    "error": {"kind": error_kind(&e), "message": e.to_string()},
                });
                println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let engine = match &cli.cache {
        Some(path) => Engine::with_disk_cache(cli.bell_cap, path)?,
        None => Engine::new(cli.bell_cap),
    };
    let report = match &cli.command {
        Command::Moment(a) => cmd_moment(&engine, a)?,
        Command::Limit(a) => cmd_limit(&engine, a)?,
        Command::Verify(a) => cmd_verify(&engine, a)?,
        Command::Expand { expr } => cmd_expand(expr)?,
    };
    engine.persist()?;
    Ok(report)
}

fn header(command: &str, expr: &str, psi: &RegularStatistic) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("statistic".into(), json!(expr));
    m.insert("power".into(), json!(psi.power()));
    m.insert("shift".into(), json!(psi.shift()));
    m.insert("size".into(), json!(psi.size()));
    m
}

fn expectation_json(e: &RationalExpectation) -> Value {
    json!({
        "numerator": e.numerator().to_json(Naming::Graded),
        "denominator": e.denominator(),
        "text": e.to_string(),
    })
}

fn lambda_text(lambda: &[u32]) -> String {
    lambda.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn cmd_moment(engine: &Engine, a: &MomentArgs) -> Result<Report, Error> {
    let psi = parse_statistic(&a.expr)?;
    let mut text = String::new();
    let (shown, degree_lines, value) = if a.variance {
        let v = variance(engine, &psi)?;
        let value = match &a.lambda {
            Some(l) => Some(v.evaluate_at(l)?),
            None => None,
        };
        let lines = vec![
            format!("mean: {}", v.first.total),
            format!("second moment: {}", v.second.total),
            degree_line(&v.first),
            degree_line(&v.second),
        ];
        (v.variance, lines, value)
    } else {
        let m = if a.uniform {
            uniform_moment(&psi, a.d)?
        } else {
            moment(engine, &psi, a.d)?
        };
        let value = match &a.lambda {
            Some(l) => Some(m.evaluate_at(l)?),
            None => None,
        };
        let lines = vec![
            format!("translates in the expansion of Psi^{}: {}", a.d, m.expansion_terms),
            degree_line(&m),
        ];
        (m.total, lines, value)
    };
    text.push_str(&format!("{shown}\n"));
    for l in &degree_lines {
        text.push_str(&format!("{l}\n"));
    }
    text.push_str(&format!("size {}, shift {}, power {}\n", psi.size(), psi.shift(), psi.power()));
    let mut result = expectation_json(&shown);
    if let (Some(lambda), Some(v)) = (&a.lambda, &value) {
        text.push_str(&format!("at lambda = {}: {}\n", lambda_text(lambda), fmt_rational(v)));
        result["evaluations"] = json!([{ "lambda": lambda, "value": fmt_rational(v) }]);
    }
    result["measure"] = json!(if a.uniform { "uniform" } else { "class" });
    result["moment"] = json!(if a.variance { "variance".to_string() } else { format!("d={}", a.d) });
    let mut json = header("moment", &a.expr, &psi);
    json.insert("result".into(), result);
    Ok(Report {
        text,
        json: Value::Object(json),
        ok: true,
    })
}

fn degree_line(m: &permstat::statistic::Moment) -> String {
    let degree = m.degree.map_or("-inf".to_string(), |d| d.to_string());
    format!(
        "d={}: graded degree of (n)_{} E[Psi^{}] is {degree}, bound dp + dq = {}",
        m.d,
        m.d as usize * m.shift,
        m.d,
        m.bound
    )
}

fn cmd_limit(engine: &Engine, a: &LimitArgs) -> Result<Report, Error> {
    let psi = parse_statistic(&a.expr)?;
    let mut json = header("limit", &a.expr, &psi);
    let (text, result) = if a.kind.mean {
        let lim = alpha_limit(engine, &psi)?;
        let at0 = fmt_rational(&lim.at(&BigRational::from_integer(0.into())));
        let text = format!("p={}, f(alpha) = {}\nf(0) = {at0}\n", lim.power, lim.text());
        let result = json!({
            "kind": "mean",
            "numerator": lim.f.to_json(Naming::Limit),
            "denominator": [],
            "text": lim.text(),
            "at_zero": at0,
        });
        (text, result)
    } else {
        let lim = variance_limit(engine, &psi)?;
        let (v1, v2) = lim.text();
        let full = &lim.v1 + &(&lim.v2 * &permstat::poly::Poly::var(1));
        let text = format!(
            "p={}, lim V / n^(2p-1) = V1(alpha) + beta*V2(alpha)\nV1(alpha) = {v1}\nV2(alpha) = {v2}\n",
            lim.power
        );
        let result = json!({
            "kind": "variance",
            "numerator": full.to_json(Naming::Limit),
            "denominator": [],
            "v1": v1,
            "v2": v2,
        });
        (text, result)
    };
    json.insert("result".into(), result);
    Ok(Report {
        text,
        json: Value::Object(json),
        ok: true,
    })
}

fn definitional(expr: &str) -> Option<fn(&[u32]) -> BigRational> {
    Some(match expr.trim() {
        "exc" => definitions::exc,
        "des" => definitions::des,
        "maj" => definitions::maj,
        "inv" => definitions::inv,
        "fix" | "fixpoints" => definitions::fix,
        _ => return None,
    })
}

fn cmd_verify(engine: &Engine, a: &VerifyArgs) -> Result<Report, Error> {
    let psi = parse_statistic(&a.expr)?;
    if a.nmax > DEFAULT_MAX_N {
        return Err(Error::ResourceLimit(format!(
            "--nmax {} exceeds the brute-force cap {DEFAULT_MAX_N}",
            a.nmax
        )));
    }
    if a.d == 0 {
        return Err(Error::Malformed("moment order must be at least 1".into()));
    }
    let moments = (1..=a.d)
        .map(|e| moment(engine, &psi, e))
        .collect::<Result<Vec<_>, _>>()?;
    let direct = definitional(&a.expr);
    let eval = |p: &[u32]| match direct {
        Some(f) => f(p),
        None => psi.evaluate(p),
    };
    let mut text = String::new();
    let mut cells = Vec::new();
    let mut failures = 0;
    for n in 1..=a.nmax {
        let table = ClassTable::new(n, DEFAULT_MAX_N)?;
        for (lambda, _) in table.classes() {
            let oracle = table.class_moments(lambda, a.d, eval)?;
            for (m, expected) in moments.iter().zip(&oracle) {
                let got = m.evaluate_at(lambda)?;
                let pass = &got == expected;
                let cell = format!("n={n} lambda={} d={}", lambda_text(lambda), m.d);
                if pass {
                    text.push_str(&format!("PASS {cell}: {}\n", fmt_rational(&got)));
                } else {
                    failures += 1;
                    text.push_str(&format!(
                        "FAIL {cell}: engine {} oracle {}\n",
                        fmt_rational(&got),
                        fmt_rational(expected)
                    ));
                }
                cells.push(json!({
                    "n": n,
                    "lambda": lambda,
                    "d": m.d,
                    "engine": fmt_rational(&got),
                    "oracle": fmt_rational(expected),
                    "pass": pass,
                }));
            }
        }
    }
    let total = cells.len();
    if failures == 0 {
        text.push_str(&format!("all {total} cells PASS\n"));
    } else {
        text.push_str(&format!("{failures} of {total} cells FAIL\n"));
    }
    let top = moments.last().expect("d >= 1");
    let mut result = expectation_json(&top.total);
    result["evaluations"] = Value::Array(cells);
    result["pass"] = json!(failures == 0);
    let mut json = header("verify", &a.expr, &psi);
    json.insert("result".into(), result);
    Ok(Report {
        text,
        json: Value::Object(json),
        ok: failures == 0,
    })
}

fn cmd_expand(expr: &str) -> Result<Report, Error> {
    let psi = parse_statistic(expr)?;
    let lines: Vec<String> = psi.translates().map(|t| t.to_string()).collect();
    let mut text = String::new();
    for l in &lines {
        text.push_str(&format!("{l}\n"));
    }
    if lines.is_empty() {
        text.push_str("0\n");
    }
    text.push_str(&format!("size {}, shift {}, power {}\n", psi.size(), psi.shift(), psi.power()));
    let mut json = header("expand", expr, &psi);
    json.insert("result".into(), json!({ "translates": lines }));
    Ok(Report {
        text,
        json: Value::Object(json),
        ok: true,
    })
}
