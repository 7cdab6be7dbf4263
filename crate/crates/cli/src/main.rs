use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tachibana::curvature::{CurvatureSuite, Name};
use tachibana::fixtures::{fixture, FIXTURES};
use tachibana::geometry::{load_chart, Chart};
use tachibana::structures::condition::{self, ConditionError};
use tachibana::structures::{catalog, report, Engine, Options, Status};

const EXIT_ERROR: u8 = 1;
const EXIT_FAILS: u8 = 2;
const EXIT_IMPROPER: u8 = 3;
const EXIT_UNAVAILABLE: u8 = 4;
const EXIT_PARSE: u8 = 64;
const EXIT_VALENCE: u8 = 65;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

/// Symbolic curvature tensors and pseudosymmetry-type condition checks.
#[derive(Debug, Parser)]
#[command(name = "tachibana", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Seed of the randomized zero test.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Grade every check at sample points only.
    #[arg(long, global = true)]
    numeric_only: bool,
    /// Relative tolerance of numeric zero tests.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dump the nonzero components of tensors.
    Compute {
        /// Spec file or built-in example name.
        spec: String,
        /// Tensor names, e.g. R S kappa P.
        #[arg(default_values_t = ["R".to_string(), "S".to_string(), "kappa".to_string(), "P".to_string()])]
        tensors: Vec<String>,
    },
    /// Run one condition, e.g. "R.R = L*Q(g,R)".
    Check { spec: String, condition: String },
    /// Run every registered check.
    Report { spec: String },
    /// Print a built-in metric spec.
    Example {
        /// Omit to list the available names.
        name: Option<String>,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

fn read_spec(spec: &str) -> Result<(String, String), Failure> {
    let p = Path::new(spec);
    if p.exists() {
        let text = std::fs::read_to_string(p).map_err(|e| fail(EXIT_ERROR, format!("{spec}: {e}")))?;
        return Ok((spec.to_string(), text));
    }
    match fixture(spec) {
        Some(f) => Ok((f.name.to_string(), f.spec.to_string())),
        None => Err(fail(EXIT_ERROR, format!("{spec}: no such file or built-in example"))),
    }
}

fn load(spec: &str) -> Result<(String, Chart), Failure> {
    let (label, text) = read_spec(spec)?;
    let chart = load_chart(&text).map_err(|e| {
        let mut msg = format!("{label}: {e}");
        if let Some(note) = fixture(spec).and_then(|f| f.note) {
            let _ = write!(msg, "\nnote: {note}");
        }
        fail(EXIT_ERROR, msg)
    })?;
    let label = chart.name.clone().unwrap_or(label);
    Ok((label, chart))
}

fn suite(chart: Chart) -> Result<CurvatureSuite, Failure> {
    CurvatureSuite::new(chart).map_err(|e| fail(EXIT_ERROR, e.to_string()))
}

fn options(cli: &Cli) -> Options {
    Options { seed: cli.seed, tolerance: cli.tolerance, numeric_only: cli.numeric_only, ..Options::default() }
}

fn compute(cli: &Cli, spec: &str, tensors: &[String]) -> Result<String, Failure> {
    let names: Vec<Name> = tensors.iter().map(|t| t.parse::<Name>().map_err(|m| fail(EXIT_PARSE, m))).collect::<Result<_, _>>()?;
    let (label, chart) = load(spec)?;
    let s = suite(chart)?;
    let mut out = String::new();
    if cli.format == Format::Kv {
        let _ = writeln!(out, "compute.chart={label}");
    }
    for n in names {
        let t = s.get(n).map_err(|e| fail(EXIT_ERROR, format!("{n}: {e}")))?;
        match cli.format {
            Format::Text => {
                let _ = writeln!(out, "# {n}");
                for (idx, x) in t.nonzero() {
                    let _ = writeln!(out, "{n}{} = {}", bracket(&idx), s.chart().render(x));
                }
            }
            Format::Kv => {
                let _ = writeln!(out, "tensor.{n}.nonzero={}", t.nonzero().count());
                for (idx, x) in t.nonzero() {
                    let key: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
                    let dot = if key.is_empty() { String::new() } else { format!(".{}", key.join(".")) };
                    let _ = writeln!(out, "tensor.{n}{dot}={}", s.chart().render(x));
                }
            }
        }
    }
    Ok(out)
}

fn bracket(idx: &[usize]) -> String {
    if idx.is_empty() {
        return String::new();
    }
    let v: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("[{}]", v.join(","))
}

fn check(cli: &Cli, spec: &str, cond: &str) -> Result<(String, u8), Failure> {
    let c = condition::parse(cond).map_err(|e| match e {
        ConditionError::Parse { .. } => fail(EXIT_PARSE, e.to_string()),
        ConditionError::Valence(_) => fail(EXIT_VALENCE, e.to_string()),
    })?;
    let (_, chart) = load(spec)?;
    let s = suite(chart)?;
    let e = Engine::new(&s, options(cli));
    let v = c.run(&e);
    let code = match v.status {
        Status::HoldsSymbolic | Status::HoldsNumeric => 0,
        Status::Fails => EXIT_FAILS,
        Status::Improper => EXIT_IMPROPER,
        Status::NotApplicable | Status::Unavailable => EXIT_UNAVAILABLE,
    };
    let out = match cli.format {
        Format::Text => report::verdict_text(&v),
        Format::Kv => report::verdict_kv("check", &v),
    };
    Ok((out, code))
}

fn full_report(cli: &Cli, spec: &str) -> Result<String, Failure> {
    let (label, chart) = load(spec)?;
    let s = suite(chart)?;
    let e = Engine::new(&s, options(cli));
    let sections = catalog::report(&e);
    Ok(match cli.format {
        Format::Text => report::text(&label, &sections),
        Format::Kv => report::kv(&label, &sections),
    })
}

fn example(cli: &Cli, name: Option<&str>) -> Result<(String, String), Failure> {
    let Some(name) = name else {
        let names: Vec<String> = FIXTURES.iter().map(|f| f.name.to_string()).collect();
        return Ok((names.join("\n") + "\n", String::new()));
    };
    let f = fixture(name).ok_or_else(|| fail(EXIT_ERROR, format!("unknown example '{name}'")))?;
    let mut err = String::new();
    if let Some(note) = f.note {
        let _ = writeln!(err, "note: {note}");
    }
    let diagnostic = load_chart(f.spec).err().map(|e| e.to_string());
    if let Some(d) = &diagnostic {
        let _ = writeln!(err, "error: {d}");
    }
    let out = match cli.format {
        Format::Text => f.spec.to_string(),
        Format::Kv => {
            let mut s = format!("example.name={}\n", f.name);
            for (i, l) in f.spec.lines().enumerate() {
                let _ = writeln!(s, "example.line.{i}={l}");
            }
            if let Some(n) = f.note {
                let _ = writeln!(s, "example.note={n}");
            }
            if let Some(d) = &diagnostic {
                let _ = writeln!(s, "example.diagnostic={d}");
            }
            s
        }
    };
    Ok((out, err))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Compute { spec, tensors } => {
            print!("{}", compute(cli, spec, tensors)?);
            Ok(0)
        }
        Command::Check { spec, condition } => {
            let (out, code) = check(cli, spec, condition)?;
            print!("{out}");
            Ok(code)
        }
        Command::Report { spec } => {
            print!("{}", full_report(cli, spec)?);
            Ok(0)
        }
        Command::Example { name } => {
            let (out, err) = example(cli, name.as_deref())?;
            print!("{out}");
            eprint!("{err}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
