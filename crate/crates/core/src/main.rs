use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use ssx_core::bench::{run_bench, summarize, to_csv, RunReport};
use ssx_core::corpus::{eos_equation_of_state, load_corpus, parse_case, RHO0};
use ssx_core::literal::{parse_series_literal, AnyScalar, AnySeries};
use ssx_core::method::{build_approximant, run_method, Family, MethodSpec, Mode};
use ssx_core::Error;

const USAGE: u8 = 1;
const METHOD_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(name = "ssx", version, about = "Extrapolate small-variable series to their large-variable behaviour")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(clap::Args)]
struct MethodArgs {
    /// Series literal or corpus case file.
    input: PathBuf,
    /// Family: factor, root, corrected-root, corrected-factor, power-factor, power-root, double, pade.
    #[arg(long)]
    method: Family,
    /// Order `k`, or `k/p` for corrected families.
    #[arg(long)]
    order: String,
    /// Target large-x exponent; defaults to the case value when the input is a corpus case.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// constrained, free, scale-fixed or variational (factor families).
    #[arg(long)]
    mode: Option<Mode>,
}

#[derive(Subcommand)]
enum Command {
    /// Large-x amplitude of one approximant.
    Extrapolate {
        #[command(flatten)]
        args: MethodArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Critical exponent from the log-derivative series.
    Exponent {
        input: PathBuf,
        /// factor, root or corrected-root.
        #[arg(long, default_value = "factor")]
        family: Family,
        /// Order `k`, or `k/p` for corrected roots.
        #[arg(long)]
        order: String,
        #[arg(long)]
        mode: Option<Mode>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run every quoted value of the corpus and compare.
    Bench {
        #[arg(long, env = "SSX_CORPUS_DIR")]
        corpus_dir: Option<PathBuf>,
        /// Comma-separated families to run; all when omitted.
        #[arg(long, value_delimiter = ',')]
        families: Vec<Family>,
        /// Also write the CSV report to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Samples of f*(x) on a log-spaced grid, as CSV.
    Curve {
        #[command(flatten)]
        args: MethodArgs,
        #[arg(long, default_value_t = 1e-3)]
        xmin: f64,
        #[arg(long, default_value_t = 1e3)]
        xmax: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Hard-sphere equation of state from the second-order iterated root.
    Eos {
        /// Emit E/N against rho/rho0 at this many points in (0, 1).
        #[arg(long, default_value_t = 0)]
        points: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Method(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ParseError { .. } | Error::InvariantViolation { .. } | Error::InvalidArgument(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Method(e),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Method(e)) => {
            eprintln!("error: {}: {e}", e.tag());
            ExitCode::from(METHOD_FAILURE)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Extrapolate { args, format } => extrapolate(&args, format),
        Command::Exponent { input, family, order, mode, format } => exponent(&input, family, &order, mode, format),
        Command::Bench { corpus_dir, families, report, format } => bench(corpus_dir, &families, report, format),
        Command::Curve { args, xmin, xmax, points } => curve(&args, xmin, xmax, points),
        Command::Eos { points, format } => eos(points, format),
    }
}

/// Reads a series literal or a corpus case; a case also supplies its target exponent.
fn load_input(path: &Path) -> Result<(AnySeries, Option<AnyScalar>), Failure> {
    let file = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{file}: {e}")))?;
    let is_case = serde_json::from_str::<serde_json::Value>(&text).ok().is_some_and(|v| v.get("id").is_some());
    if is_case {
        let case = parse_case(&text, &file)?;
        Ok((case.series, case.target_beta))
    } else {
        Ok((parse_series_literal(&text, &file)?, None))
    }
}

fn parse_order(order: &str) -> Result<(usize, Option<usize>), Failure> {
    let bad = || Failure::Usage(format!("invalid order `{order}`; expected k or k/p"));
    let (k, p) = match order.split_once('/') {
        Some((k, p)) => (k, Some(p.trim().parse().map_err(|_| bad())?)),
        None => (order, None),
    };
    Ok((k.trim().parse().map_err(|_| bad())?, p))
}

fn parse_beta(text: &str) -> Result<AnyScalar, Failure> {
    let v = serde_json::Value::String(text.to_string());
    ssx_core::literal::scalar_from_value(&v).map_err(|t| Failure::Usage(format!("invalid beta `{t}`")))
}

fn spec_for(family: Family, order: &str, mode: Option<Mode>, have_beta: bool) -> Result<MethodSpec, Failure> {
    let (k, p) = parse_order(order)?;
    let p = match (family, p) {
        (Family::CorrectedRoot | Family::CorrectedFactor | Family::ExponentCorrected, None) => Some(2),
        (_, p) => p,
    };
    let mode = match (family, mode) {
        (_, Some(m)) => m,
        (Family::Factor, None) if !have_beta => Mode::Free,
        _ => Mode::Default,
    };
    Ok(MethodSpec::new(family, k, p, mode)?)
}

fn resolve(args: &MethodArgs) -> Result<(AnySeries, Option<AnyScalar>, MethodSpec), Failure> {
    let (series, case_beta) = load_input(&args.input)?;
    let beta = match &args.beta {
        Some(b) => Some(parse_beta(b)?),
        None => case_beta,
    };
    let spec = spec_for(args.method, &args.order, args.mode, beta.is_some())?;
    if spec.family.is_exponent() {
        return Err(Failure::Usage("use the `exponent` subcommand for exponent families".into()));
    }
    Ok((series, beta, spec))
}

fn extrapolate(args: &MethodArgs, format: Format) -> Result<(), Failure> {
    let (series, beta, spec) = resolve(args)?;
    let out = run_method(&series, beta.as_ref(), &spec)?;
    let beta_out = out.exponent.or(beta.as_ref().map(AnyScalar::to_f64));
    let mut w = std::io::stdout().lock();
    let r = match format {
        Format::Text => {
            let mut s = format!("method     {spec}\n");
            for v in &out.values {
                s += &format!("amplitude  {v:.6}\n");
            }
            if let Some(b) = beta_out {
                s += &format!("exponent   {b:.6}\n");
            }
            if let Some(d) = &out.diagnostics {
                s += &format!("diagnostic {d}\n");
            }
            write!(w, "{s}")
        }
        Format::Csv => {
            let mut s = String::from("method,amplitude,exponent,diagnostics\n");
            for v in &out.values {
                let b = beta_out.map(|b| format!("{b:.6}")).unwrap_or_default();
                s += &format!("{spec},{v:.6},{b},{}\n", out.diagnostics.clone().unwrap_or_default());
            }
            write!(w, "{s}")
        }
        Format::Json => writeln!(
            w,
            "{}",
            json!({"method": spec.to_string(), "amplitudes": out.values, "exponent": beta_out, "diagnostics": out.diagnostics})
        ),
    };
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn exponent(input: &Path, family: Family, order: &str, mode: Option<Mode>, format: Format) -> Result<(), Failure> {
    let (series, _) = load_input(input)?;
    let family = match family {
        Family::Factor | Family::ExponentFactor => Family::ExponentFactor,
        Family::Root | Family::ExponentRoot => Family::ExponentRoot,
        Family::CorrectedRoot | Family::ExponentCorrected => Family::ExponentCorrected,
        other => return Err(Failure::Usage(format!("no exponent estimator for family `{other}`"))),
    };
    let spec = spec_for(family, order, mode, true)?;
    let out = run_method(&series, None, &spec)?;
    let b = out.values[0];
    match format {
        Format::Text => println!("method     {spec}\nexponent   {b:.6}"),
        Format::Csv => println!("method,exponent\n{spec},{b:.6}"),
        Format::Json => println!("{}", json!({"method": spec.to_string(), "exponent": b})),
    }
    Ok(())
}

fn default_corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn bench(dir: Option<PathBuf>, families: &[Family], report: Option<PathBuf>, format: Format) -> Result<(), Failure> {
    let dir = dir.unwrap_or_else(default_corpus_dir);
    let cases = load_corpus(&dir)?;
    let rows = run_bench(&cases, families);
    let summary = summarize(&rows);
    let csv = to_csv(&rows);
    if let Some(path) = report {
        fs::write(&path, &csv).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    match format {
        Format::Text => {
            print!("{}", text_table(&rows));
            println!("summary: {summary}");
        }
        Format::Csv => {
            print!("{csv}");
            eprintln!("summary: {summary}");
        }
        Format::Json => println!("{}", json!({"rows": rows, "summary": summary})),
    }
    Ok(())
}

fn text_table(rows: &[RunReport]) -> String {
    let mut s = format!(
        "{:<20} {:<36} {:<24} {:<24} {:<10} {:<13} {}\n",
        "case", "method", "value", "reference", "abs_error", "status", "result"
    );
    for r in rows {
        s += &format!(
            "{:<20} {:<36} {:<24} {:<24} {:<10} {:<13} {}\n",
            r.case_id,
            r.method_tag,
            r.value_text(),
            r.reference_text(),
            r.abs_error_text(),
            r.status.name(),
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}

fn curve(args: &MethodArgs, xmin: f64, xmax: f64, points: usize) -> Result<(), Failure> {
    if !(xmin > 0.0 && xmax > xmin) || points < 2 {
        return Err(Failure::Usage("need 0 < xmin < xmax and at least 2 points".into()));
    }
    let (series, beta, spec) = resolve(args)?;
    let approx = build_approximant(&series.to_f64(), beta.as_ref().map(AnyScalar::to_f64), &spec)?;
    let mut s = String::from("x,f\n");
    let ratio = (xmax / xmin).ln();
    for i in 0..points {
        let x = xmin * (ratio * i as f64 / (points - 1) as f64).exp();
        match approx.eval(x) {
            Ok(v) => s += &format!("{x:.6e},{v:.9e}\n"),
            Err(_) => s += &format!("{x:.6e},nan\n"),
        }
    }
    print!("{s}");
    Ok(())
}

fn eos(points: usize, format: Format) -> Result<(), Failure> {
    let r = eos_equation_of_state();
    let samples: Vec<(f64, f64)> = (1..=points)
        .map(|i| {
            let ratio = i as f64 / (points + 1) as f64;
            (ratio, r.energy(ratio).unwrap_or(f64::NAN))
        })
        .collect();
    match format {
        Format::Text => {
            println!("A2         {:.12}", r.a2);
            println!("b          {:.12}", r.b);
            println!("rho0       {RHO0:.12}");
            for (x, e) in &samples {
                println!("{x:.6}  {e:.9e}");
            }
        }
        Format::Csv => {
            println!("rho_over_rho0,energy_per_particle");
            for (x, e) in &samples {
                println!("{x:.6},{e:.9e}");
            }
        }
        Format::Json => println!("{}", json!({"A2": r.a2, "b": r.b, "rho0": RHO0, "samples": samples})),
    }
    Ok(())
}
