//! Command-line surface: parses job specs, runs one engine operation per
//! invocation, and emits JSON/CSV/text reports. Exit codes: 0 success,
//! 1 verification failure, 2 usage or schema error.

use capable_core::arith::TriangularDecomposition;
use capable_core::capability::{is_capable, GroupPresentation};
use capable_core::closure::closure_report;
use capable_core::verify::{verify_suite, SuiteConfig, SuiteReport, SUITE_NAMES};
use capable_core::wedge::ker_phi_basis;
use capable_core::{
    bounds_dim_star, classify_n4, f_of, r_of, PrimeModulus, SubspaceBasis, WedgeIndexing, F_TABLE,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "capable",
    about = "Decide capability of class-2 odd-prime-exponent groups and run verification oracles"
)]
struct Cli {
    /// Input: a file path, or inline JSON
    #[arg(long, global = true)]
    input: Option<String>,
    /// Output file (written atomically); stdout when absent
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// RNG seed for sampled suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Enumeration budget in subspaces before switching to sampling
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u64,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Field characteristic, for commands that build spaces directly
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Generator count, for commands that build spaces directly
    #[arg(long, global = true)]
    n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide capability of a presented group (reads presentation JSON)
    Capable,
    /// Full closure diagnostics for a subspace (reads subspace JSON)
    Closure,
    /// Emit the explicit kernel basis of the block map at the given n, p
    Kerphi,
    /// The maximal-overlap function f(m)
    Fval { m: usize },
    /// The overlap-level bound r(d)
    Rval { d: usize },
    /// Bounds on dim X* for dim X = m inside V(n) (requires --n)
    Bounds { m: usize },
    /// Classify a 5-dimensional subspace of V(4) (reads subspace JSON)
    ClassifyN4,
    /// Run a named verification suite, or "all"
    Verify { suite: String },
    /// Reproduce the published f-value table as a 48-row report
    Table1,
}

/// {"p", "n", "relators": [[[j,i,e],...], ...]}
#[derive(Deserialize)]
struct PresentationInput {
    p: u64,
    n: usize,
    relators: Vec<Vec<(usize, usize, i64)>>,
}

/// {"p", "n", "generators": [[[j,i,c],...], ...]}
#[derive(Deserialize, Serialize)]
struct SubspaceInput {
    p: u64,
    n: usize,
    generators: Vec<Vec<(usize, usize, i64)>>,
}

enum CliError {
    /// exit 2
    Usage(String),
    /// exit 1
    Failure(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> CliError {
        CliError::Usage(e.to_string())
    }
}

/// One finished job: the same result in every emission format.
struct Rendered {
    json: Value,
    csv: String,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        // a failed rebuild only means a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match run(&cli) {
        Ok(rendered) => {
            let body = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&rendered.json).expect("serializable");
                    s.push('\n');
                    s
                }
                Format::Csv => rendered.csv,
                Format::Text => rendered.text,
            };
            if let Err(e) = emit(&cli.output, &body) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Write to stdout, or atomically to the output path (temp file + rename).
fn emit(output: &Option<PathBuf>, body: &str) -> std::io::Result<()> {
    match output {
        None => {
            print!("{body}");
            std::io::stdout().flush()
        }
        Some(path) => {
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, body)?;
            fs::rename(&tmp, path)
        }
    }
}

fn read_input(cli: &Cli) -> Result<String, CliError> {
    let Some(spec) = &cli.input else {
        return Err(CliError::Usage("this command requires --input".into()));
    };
    match fs::read_to_string(spec) {
        Ok(s) => Ok(s),
        // not a readable file: treat the argument as inline JSON
        Err(_) if spec.trim_start().starts_with('{') => Ok(spec.clone()),
        Err(e) => Err(CliError::Usage(format!("cannot read input '{spec}': {e}"))),
    }
}

fn parse_subspace(text: &str) -> Result<(WedgeIndexing, SubspaceBasis), CliError> {
    let input: SubspaceInput = serde_json::from_str(text).map_err(CliError::usage)?;
    let p = PrimeModulus::new(input.p).map_err(CliError::usage)?;
    if input.n < 2 {
        return Err(CliError::Usage("subspace input needs n >= 2".into()));
    }
    let idx = WedgeIndexing::new(input.n);
    let mut rows = Vec::with_capacity(input.generators.len());
    for g in &input.generators {
        rows.push(idx.v_from_sparse(p, g).map_err(CliError::usage)?);
    }
    let x = SubspaceBasis::from_spanning(p, idx.dim_v(), &rows);
    Ok((idx, x))
}

fn subspace_json(idx: &WedgeIndexing, x: &SubspaceBasis) -> Value {
    let generators: Vec<Vec<(usize, usize, u64)>> =
        x.basis_rows().iter().map(|v| idx.v_to_sparse(v)).collect();
    json!({
        "p": x.p().get(),
        "n": idx.n(),
        "generators": generators,
    })
}

fn suite_config(cli: &Cli) -> SuiteConfig {
    SuiteConfig {
        seed: cli.seed,
        budget: cli.budget,
        samples: None,
    }
}

fn run(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Capable => cmd_capable(cli),
        Command::Closure => cmd_closure(cli),
        Command::Kerphi => cmd_kerphi(cli),
        Command::Fval { m } => Ok(cmd_fval(*m)),
        Command::Rval { d } => Ok(cmd_rval(*d)),
        Command::Bounds { m } => cmd_bounds(cli, *m),
        Command::ClassifyN4 => cmd_classify_n4(cli),
        Command::Verify { suite } => cmd_verify(cli, suite),
        Command::Table1 => Ok(cmd_table1()),
    }
}

fn cmd_capable(cli: &Cli) -> Result<Rendered, CliError> {
    let text = read_input(cli)?;
    let input: PresentationInput = serde_json::from_str(&text).map_err(CliError::usage)?;
    let p = PrimeModulus::new(input.p).map_err(CliError::usage)?;
    let pres = GroupPresentation {
        p,
        n: input.n,
        relators: input.relators,
    };
    let verdict = is_capable(&pres).map_err(CliError::usage)?;
    let mut body = json!({
        "capable": verdict.capable,
        "reason": verdict.reason.as_str(),
        "p": input.p,
        "n": input.n,
    });
    if let Some(report) = &verdict.report {
        let idx = WedgeIndexing::new(input.n);
        body["dim_x"] = json!(report.input.dim());
        body["dim_star"] = json!(report.star.dim());
        body["overlap_dim"] = json!(report.overlap_dim);
        body["z_dims"] = json!(report.z_dims);
        body["d_dims"] = json!(report.d_dims);
        body["closure"] = subspace_json(&idx, &report.closure);
        body["central_points"] = json!(verdict
            .central_points
            .iter()
            .map(|pt| pt.coords().to_vec())
            .collect::<Vec<_>>());
        body["reduction_chain"] = json!(verdict
            .reduced_chain
            .iter()
            .map(|(n, x)| subspace_json(&WedgeIndexing::new(*n), x))
            .collect::<Vec<_>>());
    }
    let text_out = format!(
        "capable: {}\nreason: {}\n",
        verdict.capable,
        verdict.reason.as_str()
    );
    let csv = format!(
        "capable,reason,n,p\n{},{},{},{}\n",
        verdict.capable,
        verdict.reason.as_str(),
        input.n,
        input.p
    );
    Ok(Rendered {
        json: body,
        csv,
        text: text_out,
    })
}

fn cmd_closure(cli: &Cli) -> Result<Rendered, CliError> {
    let text = read_input(cli)?;
    let (idx, x) = parse_subspace(&text)?;
    let report = closure_report(&idx, &x).map_err(CliError::usage)?;
    let body = json!({
        "p": x.p().get(),
        "n": idx.n(),
        "dim_x": report.input.dim(),
        "dim_star": report.star.dim(),
        "dim_closure": report.closure.dim(),
        "closed": report.closed,
        "overlap_dim": report.overlap_dim,
        "z_dims": report.z_dims,
        "d_dims": report.d_dims,
        "closure": subspace_json(&idx, &report.closure),
    });
    let text_out = format!(
        "dim X = {}, dim X* = {}, dim X** = {}, closed: {}\noverlap {}, Z dims {:?}, d dims {:?}\n",
        report.input.dim(),
        report.star.dim(),
        report.closure.dim(),
        report.closed,
        report.overlap_dim,
        report.z_dims,
        report.d_dims
    );
    let csv = format!(
        "dim_x,dim_star,dim_closure,closed,overlap_dim\n{},{},{},{},{}\n",
        report.input.dim(),
        report.star.dim(),
        report.closure.dim(),
        report.closed,
        report.overlap_dim
    );
    Ok(Rendered {
        json: body,
        csv,
        text: text_out,
    })
}

fn cmd_kerphi(cli: &Cli) -> Result<Rendered, CliError> {
    let pv = cli.p.unwrap_or(3);
    let n = cli
        .n
        .ok_or_else(|| CliError::Usage("kerphi requires --n".into()))?;
    if n < 2 {
        return Err(CliError::Usage("kerphi requires n >= 2".into()));
    }
    let p = PrimeModulus::new(pv).map_err(CliError::usage)?;
    let idx = WedgeIndexing::new(n);
    let basis = ker_phi_basis(&idx, p);
    let mut triples_json = Vec::new();
    let mut text_out = String::new();
    let mut csv = String::from("a,b,c,component,j,i,coefficient\n");
    let mut triple_iter = (1..=n)
        .flat_map(|a| ((a + 1)..=n).flat_map(move |b| ((b + 1)..=n).map(move |c| (a, b, c))));
    for elem in &basis {
        let (a, b, c) = triple_iter.next().expect("basis ordered by triples");
        let components: Vec<Vec<(usize, usize, u64)>> = elem
            .components()
            .iter()
            .map(|v| idx.v_to_sparse(v))
            .collect();
        text_out.push_str(&format!("v_({a}{b}{c}): {components:?}\n"));
        for (k, comp) in components.iter().enumerate() {
            for &(j, i, coef) in comp {
                csv.push_str(&format!("{a},{b},{c},{},{j},{i},{coef}\n", k + 1));
            }
        }
        triples_json.push(json!({
            "triple": [a, b, c],
            "components": components,
        }));
    }
    Ok(Rendered {
        json: json!({ "p": pv, "n": n, "dim": basis.len(), "basis": triples_json }),
        csv,
        text: text_out,
    })
}

fn cmd_fval(m: usize) -> Rendered {
    let dec = TriangularDecomposition::of(m);
    let f = f_of(m);
    Rendered {
        json: json!({ "m": m, "t": dec.t, "s": dec.s, "f": f }),
        csv: format!("m,f\n{m},{f}\n"),
        text: format!("f({m}) = {f}\n"),
    }
}

fn cmd_rval(d: usize) -> Rendered {
    let r = r_of(d);
    Rendered {
        json: json!({ "d": d, "r": r }),
        csv: format!("d,r\n{d},{r}\n"),
        text: format!("r({d}) = {r}\n"),
    }
}

fn cmd_bounds(cli: &Cli, m: usize) -> Result<Rendered, CliError> {
    let n = cli
        .n
        .ok_or_else(|| CliError::Usage("bounds requires --n".into()))?;
    let (lower, upper) = bounds_dim_star(n, m).map_err(CliError::usage)?;
    Ok(Rendered {
        json: json!({ "n": n, "m": m, "lower": lower, "upper": upper }),
        csv: format!("n,m,lower,upper\n{n},{m},{lower},{upper}\n"),
        text: format!("{lower} <= dim X* <= {upper} for dim X = {m} in V({n})\n"),
    })
}

fn cmd_classify_n4(cli: &Cli) -> Result<Rendered, CliError> {
    let text = read_input(cli)?;
    let (idx, x) = parse_subspace(&text)?;
    if idx.n() != 4 {
        return Err(CliError::Usage("classify-n4 requires n = 4".into()));
    }
    let closed = classify_n4(&idx, &x).map_err(CliError::usage)?;
    Ok(Rendered {
        json: json!({ "closed": closed, "capable": closed, "dim": x.dim() }),
        csv: format!("closed,capable\n{closed},{closed}\n"),
        text: format!("closed (capable): {closed}\n"),
    })
}

fn report_json(r: &SuiteReport) -> Value {
    json!({
        "name": r.name,
        "passed": r.passed,
        "checks": r.checks,
        "failures": r.failures,
        "detail": r.detail,
        "counterexample": r.counterexample,
    })
}

fn cmd_verify(cli: &Cli, suite: &str) -> Result<Rendered, CliError> {
    let cfg = suite_config(cli);
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![suite]
    };
    let mut reports = Vec::new();
    for name in names {
        reports.push(verify_suite(name, &cfg).map_err(CliError::usage)?);
    }
    let mut csv = String::from("suite,passed,checks,failures\n");
    let mut text_out = String::new();
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.name, r.passed, r.checks, r.failures
        ));
        text_out.push_str(&format!(
            "{}: {} ({} checks, {} failures)\n",
            r.name,
            if r.passed { "pass" } else { "FAIL" },
            r.checks,
            r.failures
        ));
        if let Some(cx) = &r.counterexample {
            text_out.push_str(&format!("  counterexample: {cx}\n"));
        }
    }
    let failed: Vec<&SuiteReport> = reports.iter().filter(|r| !r.passed).collect();
    if let Some(first) = failed.first() {
        return Err(CliError::Failure(format!(
            "suite '{}': {}",
            first.name,
            first
                .counterexample
                .clone()
                .unwrap_or_else(|| "checks failed".into())
        )));
    }
    Ok(Rendered {
        json: json!(reports.iter().map(report_json).collect::<Vec<_>>()),
        csv,
        text: text_out,
    })
}

fn cmd_table1() -> Rendered {
    let mut csv = String::from("m,f,published,match\n");
    let mut rows = Vec::new();
    let mut text_out = String::from("  m    f  published  match\n");
    for &(m, published) in F_TABLE.iter() {
        let f = f_of(m);
        let matched = f == published;
        csv.push_str(&format!("{m},{f},{published},{matched}\n"));
        text_out.push_str(&format!("{m:>3} {f:>4} {published:>10}  {matched}\n"));
        rows.push(json!({ "m": m, "f": f, "published": published, "match": matched }));
    }
    Rendered {
        json: json!(rows),
        csv,
        text: text_out,
    }
}
