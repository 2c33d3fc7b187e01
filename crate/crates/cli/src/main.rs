use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::{json, Value};

use hermite_core::algebra::{fmt_rational, parse_rational, Rational};
use hermite_core::cascade::{
    auto_window, basic_limit_samples, oracle_reproduces, write_limit_csv, OracleVerdict,
};
use hermite_core::catalog::{SchemeFamily, SchemeSpec};
use hermite_core::construct::{
    construct, parse_binding, ConstructError, ConstructionStatus, MaskTemplate,
};
use hermite_core::families::{alpha1, alpha2, gamma_table, AlphaTable};
use hermite_core::reproduction::{certify, infer_tau};
use hermite_core::symbol::{load_mask, save_mask, HermiteMask};

const AFTER_HELP: &str = "\
EXAMPLES:
    $ hermite catalog emit merrien --param lambda=-1/8 --param mu=-1/2 > merrien.json
    $ hermite check merrien.json
    $ hermite oracle merrien.json --degree 4 --levels 3 --window -24 24
    $ hermite construct --template extended.json --tau 0 --degree 5 --bind b2=1/384 --bind b3=0
    $ hermite coeffs --alpha1 7

EXIT STATUS:
    0 on success, including negative verdicts; 2 on malformed input;
    3 when an internal consistency check fails.
";

#[derive(Parser, Debug)]
#[command(name = "hermite", version)]
#[command(about = "Exact polynomial-reproduction certificates for Hermite subdivision schemes")]
#[command(after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the reproduction degree of a mask
    Check {
        mask: PathBuf,
        /// Parametrization; inferred from the symbol when omitted
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        tau: Option<Rational>,
        /// Highest degree to test
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long)]
        json: bool,
    },
    /// Infer the parametrization of a mask
    Tau {
        mask: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the subdivision cascade on monomial samples
    Oracle {
        mask: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        levels: usize,
        /// Level-0 window; sized automatically when omitted
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        window: Option<Vec<i64>>,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        tau: Option<Rational>,
        #[arg(long)]
        json: bool,
    },
    /// Sample a basic limit function on a dyadic grid as CSV
    Limit {
        mask: PathBuf,
        /// Unit vector index s (1-based) of the initial data
        #[arg(long)]
        component: usize,
        #[arg(long)]
        levels: usize,
        /// Output file; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print 17 significant digits instead of exact fractions
        #[arg(long)]
        decimal: bool,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        tau: Option<Rational>,
    },
    /// Solve a mask template for a target reproduction degree
    Construct {
        #[arg(long)]
        template: PathBuf,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        tau: Rational,
        #[arg(long)]
        degree: usize,
        /// Fix a free unknown, as name=p/q (repeatable)
        #[arg(long = "bind", allow_hyphen_values = true)]
        bindings: Vec<String>,
        /// Write the resulting mask here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Print coefficient tables
    Coeffs(CoeffsArgs),
    /// Built-in scheme families
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("table").required(true).multiple(false)))]
struct CoeffsArgs {
    /// First-family ladder up to row K
    #[arg(long, value_name = "K", group = "table")]
    alpha1: Option<usize>,
    /// Second-family ladder up to row K
    #[arg(long, value_name = "K", group = "table")]
    alpha2: Option<usize>,
    /// Monomial coefficients of q_K(-x; SHIFT)
    #[arg(long, num_args = 2, value_names = ["K", "SHIFT"], allow_hyphen_values = true, group = "table")]
    gamma: Option<Vec<String>>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// List families and their parameters
    List,
    /// Print a family member as a mask file
    Emit {
        family: String,
        /// Parameter assignment name=p/q (repeatable)
        #[arg(long = "param", allow_hyphen_values = true)]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Input(String),
    Internal(String),
}

type CliResult = Result<(), CliError>;

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read_mask(path: &Path) -> Result<HermiteMask, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    load_mask(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn resolve_tau(mask: &HermiteMask, tau: Option<Rational>) -> Result<Rational, CliError> {
    match tau {
        Some(t) => Ok(t),
        None => infer_tau(mask).map_err(|e| CliError::Input(format!("{e}; pass --tau"))),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CliResult {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Input(e.to_string())),
    }
}

fn print_json(v: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("values serialize")
    );
}

fn vec_str(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("[{}]", parts.join(", "))
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rational).collect()
}

fn run_check(mask: &Path, tau: Option<Rational>, max_degree: usize, as_json: bool) -> CliResult {
    let mask = read_mask(mask)?;
    let report = certify(&mask, tau.as_ref(), max_degree)
        .map_err(|e| CliError::Input(format!("{e}; pass --tau")))?;
    if as_json {
        print_json(&report.to_json());
    } else {
        print!("{}", report.to_table());
    }
    Ok(())
}

fn run_tau(mask: &Path, as_json: bool) -> CliResult {
    let mask = read_mask(mask)?;
    let tau = infer_tau(&mask).map_err(input)?;
    if as_json {
        print_json(&json!({ "tau": fmt_rational(&tau) }));
    } else {
        println!("tau: {}", fmt_rational(&tau));
    }
    Ok(())
}

fn run_oracle(
    mask: &Path,
    degree: usize,
    levels: usize,
    window: Option<Vec<i64>>,
    tau: Option<Rational>,
    as_json: bool,
) -> CliResult {
    let mask = read_mask(mask)?;
    let tau = resolve_tau(&mask, tau)?;
    let (lo, hi) = match window.as_deref() {
        Some([lo, hi]) => (*lo, *hi),
        _ => auto_window(&mask, levels),
    };
    let verdict = oracle_reproduces(&mask, &tau, degree, levels, lo, hi).map_err(input)?;
    if as_json {
        let mut v = json!({
            "degree": degree,
            "levels": levels,
            "window": [lo, hi],
            "tau": fmt_rational(&tau),
            "verdict": if verdict.passed() { "pass" } else { "fail" },
        });
        if let OracleVerdict::Fail {
            degree,
            level,
            index,
            expected,
            got,
        } = &verdict
        {
            v["failure"] = json!({
                "monomial_degree": degree,
                "level": level,
                "index": index,
                "expected": strs(expected),
                "got": strs(got),
            });
        }
        print_json(&v);
        return Ok(());
    }
    match verdict {
        OracleVerdict::Pass => println!(
            "PASS: monomials up to degree {degree} reproduced through {levels} levels \
             (window [{lo}, {hi}], tau {})",
            fmt_rational(&tau)
        ),
        OracleVerdict::Fail {
            degree: p,
            level,
            index,
            expected,
            got,
        } => println!(
            "FAIL at level {level}: x^{p} at index {index}, expected {}, got {}",
            vec_str(&expected),
            vec_str(&got)
        ),
    }
    Ok(())
}

fn run_limit(
    mask: &Path,
    component: usize,
    levels: usize,
    out: Option<&Path>,
    decimal: bool,
    tau: Option<Rational>,
) -> CliResult {
    let mask = read_mask(mask)?;
    let tau = resolve_tau(&mask, tau)?;
    let samples = basic_limit_samples(&mask, component, levels, &tau).map_err(input)?;
    let mut buf = Vec::new();
    write_limit_csv(&mut buf, mask.d(), &samples, decimal)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    emit(out, &buf)
}

fn run_construct(
    template: &Path,
    tau: &Rational,
    degree: usize,
    bindings: &[String],
    out: Option<&Path>,
    as_json: bool,
) -> CliResult {
    let bytes =
        fs::read(template).map_err(|e| CliError::Input(format!("{}: {e}", template.display())))?;
    let template = MaskTemplate::load(&bytes)
        .map_err(|e| CliError::Input(format!("{}: {e}", template.display())))?;
    let bindings = bindings
        .iter()
        .map(|b| parse_binding(b))
        .collect::<Result<Vec<_>, _>>()
        .map_err(input)?;
    let res = construct(&template, tau, degree, &bindings).map_err(|e| match e {
        ConstructError::Internal(msg) => CliError::Internal(msg),
        other => input(other),
    })?;
    if let (Some(path), Some(mask)) = (out, &res.mask) {
        emit(Some(path), &save_mask(mask))?;
    }
    if as_json {
        let (status, row) = match &res.status {
            ConstructionStatus::Solved => ("solved", Value::Null),
            ConstructionStatus::Parametric => ("parametric", Value::Null),
            ConstructionStatus::Infeasible { row, label } => {
                ("infeasible", json!({ "index": row, "label": label }))
            }
        };
        let values: serde_json::Map<String, Value> = res
            .values
            .iter()
            .map(|(n, v)| (n.clone(), Value::String(fmt_rational(v))))
            .collect();
        print_json(&json!({
            "status": status,
            "infeasible_row": row,
            "constraints": res.constraints_used,
            "solution_dimension": res.family_dimension,
            "free": res.free_names,
            "values": values,
            "certified_degree": res.certified_degree,
        }));
    } else {
        print!("{}", res.to_text());
    }
    Ok(())
}

fn table_json(t: &AlphaTable) -> Value {
    json!(t
        .rows()
        .map(|(k, row)| json!({ "k": k, "values": strs(row) }))
        .collect::<Vec<_>>())
}

fn print_table(t: &AlphaTable) {
    for (k, row) in t.rows() {
        println!("k={k}: {}", strs(row).join(" "));
    }
}

fn run_coeffs(args: &CoeffsArgs) -> CliResult {
    if let Some(k) = args.alpha1.or(args.alpha2) {
        let table = if args.alpha1.is_some() {
            alpha1(k)
        } else {
            alpha2(k)
        };
        if args.json {
            print_json(&table_json(&table));
        } else {
            print_table(&table);
        }
        return Ok(());
    }
    let Some([k, shift]) = args.gamma.as_deref() else {
        return Err(CliError::Input("no table selected".into()));
    };
    let k: usize = k
        .parse()
        .map_err(|_| CliError::Input(format!("degree {k:?} is not a nonnegative integer")))?;
    let shift = parse_rational(shift).map_err(input)?;
    let table = gamma_table(k, &shift);
    if args.json {
        print_json(&json!({
            "k": k,
            "shift": fmt_rational(&shift),
            "values": strs(&table.values),
        }));
    } else {
        for (n, v) in table.values.iter().enumerate() {
            println!("n={n}: {}", fmt_rational(v));
        }
    }
    Ok(())
}

fn run_catalog(action: &CatalogAction) -> CliResult {
    match action {
        CatalogAction::List => {
            for f in SchemeFamily::ALL {
                println!("{f}: {}", f.param_names().join(", "));
            }
            Ok(())
        }
        CatalogAction::Emit {
            family,
            params,
            out,
        } => {
            let family: SchemeFamily = family.parse().map_err(input)?;
            let mut spec = SchemeSpec::new(family);
            for p in params {
                spec.set_assignment(p).map_err(input)?;
            }
            emit(out.as_deref(), &save_mask(&spec.build()))
        }
    }
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Check {
            mask,
            tau,
            max_degree,
            json,
        } => run_check(&mask, tau, max_degree, json),
        Command::Tau { mask, json } => run_tau(&mask, json),
        Command::Oracle {
            mask,
            degree,
            levels,
            window,
            tau,
            json,
        } => run_oracle(&mask, degree, levels, window, tau, json),
        Command::Limit {
            mask,
            component,
            levels,
            out,
            decimal,
            tau,
        } => run_limit(&mask, component, levels, out.as_deref(), decimal, tau),
        Command::Construct {
            template,
            tau,
            degree,
            bindings,
            out,
            json,
        } => run_construct(&template, &tau, degree, &bindings, out.as_deref(), json),
        Command::Coeffs(args) => run_coeffs(&args),
        Command::Catalog { action } => run_catalog(&action),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
