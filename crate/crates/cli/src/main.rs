//! `tangle`: evaluate diagrams, dump operator matrices, run the relation
//! battery and print Poincaré tables.
//!
//! Exit codes: 0 success, 1 parse or I/O error, 2 validation error,
//! 3 mismatch or failed check, 4 matrix size cap exceeded.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use tangle_core::diagram::Label;
use tangle_core::ktheory::DEFAULT_MATRIX_CAP;
use tangle_core::laurent::small_coeff;
use tangle_core::relations::{run_battery, summarize, BatteryConfig};
use tangle_core::skein::{evaluate_by_resolution, SkeinError};
use tangle_core::{parse_dsl, DslError, Engine, EngineError, EngineOptions, LaurentPoly, StrandSeq, TangleWord};

#[derive(Parser)]
#[command(name = "tangle", version, about = "Exact sl(m) tangle and link invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Rank m (at least 2).
    #[arg(long = "m", value_name = "INT")]
    m: u32,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Negate every cap (negative control for the relation battery).
    #[arg(long, hide = true)]
    flip_cap_sign: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed diagram.
    Eval {
        #[command(flatten)]
        common: Common,
        /// DSL file; reads stdin when absent.
        path: Option<PathBuf>,
        /// Also evaluate by crossing resolution and compare.
        #[arg(long)]
        check_resolution: bool,
    },
    /// Run the relation battery and print one row per instance.
    TestRelations {
        #[command(flatten)]
        common: Common,
        /// Largest bottom sequence length.
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Largest matrix (rows * columns) the battery may build.
        #[arg(long, value_name = "ENTRIES", default_value_t = DEFAULT_MATRIX_CAP)]
        matrix_cap: u64,
    },
    /// Print dim H^{i,-i} for a closed crossingless graph.
    Poincare {
        #[command(flatten)]
        common: Common,
        /// DSL file; reads stdin when absent.
        path: Option<PathBuf>,
    },
    /// Dump the operator matrix of a word.
    Matrix {
        #[command(flatten)]
        common: Common,
        /// DSL file with the generators; reads stdin when absent.
        path: Option<PathBuf>,
        /// Generators given inline, e.g. "cap 1; cross 2 1".
        #[arg(long, conflicts_with = "path")]
        gens: Option<String>,
        /// Bottom labels, e.g. "1 1" or "1,m-1".
        #[arg(long)]
        bottom: Option<String>,
        /// Largest matrix (rows * columns) to build.
        #[arg(long, value_name = "ENTRIES", default_value_t = DEFAULT_MATRIX_CAP)]
        matrix_cap: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Invalid(String),
    Mismatch(String),
    Cap(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Mismatch(_) => 3,
            CliError::Cap(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(s) | CliError::Invalid(s) | CliError::Mismatch(s) | CliError::Cap(s) => s,
        }
    }
}

impl From<DslError> for CliError {
    fn from(e: DslError) -> Self {
        if e.is_validation() {
            CliError::Invalid(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::DimensionCap { .. } => CliError::Cap(e.to_string()),
            EngineError::Diagram(_) | EngineError::HasCrossings(_) | EngineError::RankMismatch { .. } => {
                CliError::Invalid(e.to_string())
            }
            _ => CliError::Mismatch(e.to_string()),
        }
    }
}

impl From<SkeinError> for CliError {
    fn from(e: SkeinError) -> Self {
        match e {
            SkeinError::Engine(inner) => inner.into(),
            SkeinError::Diagram(inner) => CliError::Invalid(inner.to_string()),
            other => CliError::Mismatch(other.to_string()),
        }
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn engine(common: &Common) -> Result<Engine, CliError> {
    let options = EngineOptions {
        flip_cap_sign: common.flip_cap_sign,
    };
    Ok(Engine::with_options(common.m, options)?)
}

fn poly_json(p: &LaurentPoly) -> Value {
    let mut map = Map::new();
    for (e, c) in p.terms().rev() {
        let v = match small_coeff(c) {
            Some(x) => json!(x),
            None => json!(c.to_string()),
        };
        map.insert(e.to_string(), v);
    }
    Value::Object(map)
}

fn closed_word(text: &str, m: u32) -> Result<TangleWord, CliError> {
    let word = parse_dsl(text, Some(m))?;
    if !word.is_closed() {
        return Err(CliError::Invalid(format!(
            "diagram is not closed (bottom has {} strands, top has {})",
            word.bottom().len(),
            word.top().len()
        )));
    }
    Ok(word)
}

fn cmd_eval(common: &Common, path: Option<&PathBuf>, check: bool, out: &mut String) -> Result<(), CliError> {
    let e = engine(common)?;
    let word = closed_word(&read_input(path)?, common.m)?;
    let value = e.evaluate_closed(&word)?;
    let resolved = if check { Some(evaluate_by_resolution(&e, &word)?) } else { None };
    let equal = resolved.as_ref().map(|r| *r == value);
    if common.json {
        let mut obj = Map::new();
        obj.insert("invariant".into(), poly_json(&value));
        if let (Some(r), Some(eq)) = (&resolved, equal) {
            obj.insert("resolution".into(), poly_json(r));
            obj.insert("verdict".into(), json!(if eq { "EQUAL" } else { "DIFFER" }));
        }
        out.push_str(&Value::Object(obj).to_string());
        out.push('\n');
    } else {
        out.push_str(&format!("{value}\n"));
        if let (Some(r), Some(eq)) = (&resolved, equal) {
            out.push_str(&format!("resolution: {r}\n{}\n", if eq { "EQUAL" } else { "DIFFER" }));
        }
    }
    match equal {
        Some(false) => Err(CliError::Mismatch("direct and resolution values differ".into())),
        _ => Ok(()),
    }
}

fn cmd_test_relations(common: &Common, max_n: usize, matrix_cap: u64, out: &mut String) -> Result<(), CliError> {
    let e = engine(common)?;
    let cfg = BatteryConfig {
        matrix_cap,
        ..BatteryConfig::new(max_n)
    };
    let checks = run_battery(&e, cfg)?;
    let summary = summarize(&checks);
    let ok = summary.iter().all(|s| s.ok());
    if common.json {
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| json!({"family": c.family.name(), "instance": c.instance, "passed": c.passed}))
            .collect();
        let fams: Vec<Value> = summary
            .iter()
            .map(|s| json!({"family": s.family.name(), "passed": s.passed, "total": s.total}))
            .collect();
        let v = json!({"m": common.m, "max_n": max_n, "rows": rows, "summary": fams, "ok": ok});
        out.push_str(&v.to_string());
        out.push('\n');
    } else {
        for c in &checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag}\t{}\t{}\n", c.family.name(), c.instance));
        }
        out.push_str(&format!("# m={} max_n={max_n}\n", common.m));
        for s in &summary {
            let tag = if s.ok() { "PASS" } else { "FAIL" };
            out.push_str(&format!("# {tag}\t{}\t{}/{}\n", s.family.name(), s.passed, s.total));
        }
    }
    if ok {
        Ok(())
    } else {
        let bad: Vec<_> = summary.iter().filter(|s| !s.ok()).map(|s| s.family.name()).collect();
        Err(CliError::Mismatch(format!("relation failures in {}", bad.join(", "))))
    }
}

fn cmd_poincare(common: &Common, path: Option<&PathBuf>, out: &mut String) -> Result<(), CliError> {
    let e = engine(common)?;
    let word = closed_word(&read_input(path)?, common.m)?;
    let table = e.poincare_table(&word)?;
    if common.json {
        let mut map = Map::new();
        for (i, d) in table.iter().rev() {
            map.insert(i.to_string(), json!(d));
        }
        out.push_str(&json!({ "table": map }).to_string());
        out.push('\n');
    } else {
        for (i, d) in &table {
            out.push_str(&format!("{i}\t{d}\n"));
        }
    }
    Ok(())
}

fn parse_bottom(text: &str, m: u32) -> Result<StrandSeq, CliError> {
    let labels = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| Label::from_token(t, m))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Invalid(format!("--bottom: {e}")))?;
    StrandSeq::new(m, labels).map_err(|e| CliError::Invalid(e.to_string()))
}

fn cmd_matrix(
    common: &Common,
    path: Option<&PathBuf>,
    gens: Option<&str>,
    bottom: Option<&str>,
    matrix_cap: u64,
    out: &mut String,
) -> Result<(), CliError> {
    let e = engine(common)?;
    let body = match gens {
        Some(g) => g.to_string(),
        None => read_input(path)?,
    };
    let text = match bottom {
        Some(b) => {
            let seq = parse_bottom(b, common.m)?;
            let tokens: Vec<String> = seq.labels().iter().map(|l| l.token(common.m)).collect();
            format!("bottom {}\n{body}", tokens.join(" "))
        }
        None => body,
    };
    let word = parse_dsl(&text, Some(common.m))?;
    let mat = e.operator_matrix(word.bottom(), word.gens(), matrix_cap)?;
    if common.json {
        let entries: Vec<Value> = mat
            .entries()
            .iter()
            .map(|((r, c), v)| json!({"row": r.to_string(), "col": c.to_string(), "value": poly_json(v)}))
            .collect();
        let v = json!({
            "m": common.m,
            "bottom": mat.domain().to_string(),
            "top": mat.codomain().to_string(),
            "entries": entries,
        });
        out.push_str(&v.to_string());
        out.push('\n');
    } else {
        out.push_str(&mat.dump());
    }
    Ok(())
}

fn run(cli: &Cli, out: &mut String) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval {
            common,
            path,
            check_resolution,
        } => cmd_eval(common, path.as_ref(), *check_resolution, out),
        Command::TestRelations {
            common,
            max_n,
            matrix_cap,
        } => cmd_test_relations(common, *max_n, *matrix_cap, out),
        Command::Poincare { common, path } => cmd_poincare(common, path.as_ref(), out),
        Command::Matrix {
            common,
            path,
            gens,
            bottom,
            matrix_cap,
        } => cmd_matrix(common, path.as_ref(), gens.as_deref(), bottom.as_deref(), *matrix_cap, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(&cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
