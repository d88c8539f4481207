//! Command line front end for the bracket and homology computations.
//!
//! Exit codes: 0 all checks passed, 1 a verification or comparison
//! failed, 2 bad input (unreadable file, parse error, crossing budget,
//! operation undefined for the diagram), 3 internal invariant violated.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use fkh::complex::{build_complex, verify_dsquare, Boundary, FrobeniusRule, FrobeniusTable};
use fkh::diagram::TangleDiagram;
use fkh::homology::{compare_homology, homology, BigradedHomology};
use fkh::ring::{phase, LaurentPoly};
use fkh::rmatrix::{bracket_tensor, bracket_tensor_marked, check_matrix_identities, open_tensor_report, WeightTable};
use fkh::states::enumerate_markers;
use fkh::statesum::{bracket_state_sum, bracket_via_ranks};

#[derive(Parser)]
#[command(name = "fkh", version, about = "Framed bracket homology of tangle diagrams")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Refuse diagrams with more crossings than this.
    #[arg(long, global = true, default_value_t = 12)]
    max_crossings: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the bracket polynomial of each diagram.
    Bracket {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Computation route.
        #[arg(long, value_enum, default_value_t = Method::Statesum)]
        method: Method,
    },
    /// List the enhanced states of a diagram as CSV.
    States { file: PathBuf },
    /// Show chain group dimensions, optionally with boundary matrices.
    Complex {
        file: PathBuf,
        #[arg(long)]
        matrices: bool,
    },
    /// Compute bigraded homology.
    Homology { file: PathBuf },
    /// Cross-check every computation route on each diagram.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also require identical homology across all the files.
        #[arg(long)]
        compare: bool,
        /// Flip one boundary coefficient first; the run must then fail.
        #[arg(long, hide = true)]
        corrupt_sign: bool,
    },
    /// Compare the homology of two diagrams.
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Statesum,
    Ranks,
    Tensor,
    Marked,
}

impl Method {
    fn name(&self) -> &'static str {
        match self {
            Method::Statesum => "statesum",
            Method::Ranks => "ranks",
            Method::Tensor => "tensor",
            Method::Marked => "marked",
        }
    }
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError { code: 2, msg: msg.into() }
    }

    fn internal(msg: impl Into<String>) -> Self {
        CliError { code: 3, msg: msg.into() }
    }
}

impl From<fkh::Error> for CliError {
    fn from(e: fkh::Error) -> Self {
        match e {
            fkh::Error::NotAComplex { .. } => CliError::internal(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`fkh ... | head`) instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::Bracket { files, method } => cmd_bracket(cli, files, *method),
        Command::States { file } => cmd_states(cli, file),
        Command::Complex { file, matrices } => cmd_complex(cli, file, *matrices),
        Command::Homology { file } => cmd_homology(cli, file),
        Command::Verify { files, compare, corrupt_sign } => {
            cmd_verify(cli, files, *compare, *corrupt_sign)
        }
        Command::Compare { a, b } => cmd_compare(cli, a, b),
    }
}

fn load(path: &Path, max_crossings: usize) -> Result<TangleDiagram, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let d = TangleDiagram::parse(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if d.crossing_count() > max_crossings {
        return Err(CliError::input(format!(
            "{}: {} crossings exceed the limit of {max_crossings} (raise with --max-crossings)",
            path.display(),
            d.crossing_count()
        )));
    }
    Ok(d)
}

fn cmd_bracket(cli: &Cli, files: &[PathBuf], method: Method) -> Result<bool, CliError> {
    let results: Vec<Result<Value, CliError>> = files
        .par_iter()
        .map(|path| bracket_one(path, method, cli.max_crossings))
        .collect();

    let mut values = Vec::new();
    for r in results {
        values.push(r?);
    }
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&Value::Array(values)).unwrap());
    } else {
        for v in &values {
            let file = v["file"].as_str().unwrap();
            if let Some(entries) = v.get("open_tensor").and_then(Value::as_array) {
                println!("{file}: open tangle tensor");
                for e in entries {
                    println!(
                        "  bottom={} top={} tensor={} statesum={}",
                        e["bottom"].as_str().unwrap(),
                        e["top"].as_str().unwrap(),
                        e["tensor"].as_str().unwrap(),
                        e["state_sum"].as_str().unwrap()
                    );
                }
            } else {
                println!("{file}: {}", v["value"].as_str().unwrap());
            }
        }
    }
    Ok(true)
}

fn bracket_one(path: &Path, method: Method, max: usize) -> Result<Value, CliError> {
    let d = load(path, max)?;
    let file = path.display().to_string();
    let value = match method {
        Method::Statesum => {
            let r = bracket_state_sum(&d);
            return Ok(json!({
                "file": file,
                "method": method.name(),
                "value": r.value.to_string(),
                "state_count": r.state_count,
            }));
        }
        Method::Ranks => bracket_via_ranks(&build_complex(&d)),
        Method::Tensor => {
            if !d.is_closed() {
                let entries: Vec<Value> = open_tensor_report(&d)
                    .into_iter()
                    .map(|e| {
                        json!({
                            "bottom": e.bottom,
                            "top": e.top,
                            "tensor": e.tensor.to_string(),
                            "state_sum": e.state_sum.to_string(),
                        })
                    })
                    .collect();
                return Ok(json!({
                    "file": file,
                    "method": method.name(),
                    "open_tensor": entries,
                }));
            }
            bracket_tensor(&d)?
        }
        Method::Marked => {
            let mut total = LaurentPoly::zero();
            for m in enumerate_markers(&d) {
                total += &bracket_tensor_marked(&d, &m)?;
            }
            total
        }
    };
    Ok(json!({
        "file": file,
        "method": method.name(),
        "value": value.to_string(),
    }))
}

fn cmd_states(cli: &Cli, file: &Path) -> Result<bool, CliError> {
    let d = load(file, cli.max_crossings)?;
    let mut rows = Vec::new();
    for m in enumerate_markers(&d) {
        let state = fkh::states::smooth(&d, &m);
        let components = state.components.len();
        for e in state.enhance() {
            rows.push((m.to_string(), components, e.sigma, e.tau.twice(), e.p.twice(), e.q));
        }
    }
    if cli.json {
        let values: Vec<Value> = rows
            .iter()
            .map(|(markers, components, sigma, tau2, p2, q)| {
                json!({
                    "markers": markers,
                    "components": components,
                    "sigma": sigma,
                    "tau2": tau2,
                    "p2": p2,
                    "q": q,
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&Value::Array(values)).unwrap());
    } else {
        println!("markers,components,sigma,tau2,p2,q");
        for (markers, components, sigma, tau2, p2, q) in rows {
            println!("{markers},{components},{sigma},{tau2},{p2},{q}");
        }
    }
    Ok(true)
}

fn cmd_complex(cli: &Cli, file: &Path, matrices: bool) -> Result<bool, CliError> {
    let d = load(file, cli.max_crossings)?;
    let cx = build_complex(&d);
    let b = matrices.then(|| cx.boundary_tangle());

    if cli.json {
        let groups: Vec<Value> = cx
            .groups()
            .iter()
            .map(|(&(p2, q), ids)| json!({"p2": p2, "q": q, "dim": ids.len()}))
            .collect();
        let mut out = json!({"groups": groups});
        if let Some(b) = &b {
            let ms: Vec<Value> = b
                .matrices
                .iter()
                .map(|(&(p2, q), m)| {
                    let rows: Vec<Vec<i64>> = (0..m.rows())
                        .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
                        .collect();
                    json!({"p2": p2, "q": q, "rows": m.rows(), "cols": m.cols(), "entries": rows})
                })
                .collect();
            out["matrices"] = Value::Array(ms);
        }
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        for (&(p2, q), ids) in cx.groups() {
            println!("(p2={p2}, q={q}): dim {}", ids.len());
        }
        if let Some(b) = &b {
            for (&(p2, q), m) in &b.matrices {
                println!("d(p2={p2}, q={q}) -> (p2={}, q={q}): {}x{}", p2 - 2, m.rows(), m.cols());
                print!("{m}");
            }
        }
    }
    Ok(true)
}

fn homology_json(h: &BigradedHomology) -> Value {
    let mut entries: Vec<(&(i64, i64), &fkh::homology::HomologyGroup)> = h.groups.iter().collect();
    entries.sort_by(|a, b| b.0 .1.cmp(&a.0 .1).then(a.0 .0.cmp(&b.0 .0)));
    Value::Array(
        entries
            .into_iter()
            .map(|(&(p2, q), g)| {
                let torsion: Vec<Value> = g
                    .torsion
                    .iter()
                    .map(|t| match u64::try_from(t) {
                        Ok(n) => json!(n),
                        Err(_) => json!(t.to_string()),
                    })
                    .collect();
                json!({"p2": p2, "q": q, "rank": g.free_rank, "torsion": torsion})
            })
            .collect(),
    )
}

fn cmd_homology(cli: &Cli, file: &Path) -> Result<bool, CliError> {
    let d = load(file, cli.max_crossings)?;
    let cx = build_complex(&d);
    let h = homology(&cx, &cx.boundary_tangle())?;
    if cli.json {
        println!("{}", serde_json::to_string(&homology_json(&h)).unwrap());
    } else {
        let rendered = homology_json(&h);
        for entry in rendered.as_array().unwrap() {
            let (p2, q) = (entry["p2"].as_i64().unwrap(), entry["q"].as_i64().unwrap());
            let g = &h.groups[&(p2, q)];
            println!("(p2={p2}, q={q}): {g}");
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }

    fn failed(&self) -> bool {
        *self == Status::Fail
    }
}

struct FileReport {
    file: String,
    checks: Vec<(&'static str, Status)>,
    time_ms: u128,
    homology: BigradedHomology,
}

fn verify_one(
    path: &Path,
    max: usize,
    table: &FrobeniusTable,
) -> Result<FileReport, CliError> {
    let t0 = Instant::now();
    let d = load(path, max)?;
    let cx = build_complex(&d);
    let direct = bracket_state_sum(&d).value;
    let tangle = cx.boundary_tangle();
    let mut checks = Vec::new();

    checks.push(("dsquare", Status::of(verify_dsquare(&tangle).is_ok())));
    let link: Option<Boundary> = if d.is_closed() {
        let b = cx.boundary_link(table)?;
        checks.push(("dsquare_link", Status::of(verify_dsquare(&b).is_ok())));
        Some(b)
    } else {
        checks.push(("dsquare_link", Status::Skipped));
        None
    };

    checks.push(("euler_ranks", Status::of(bracket_via_ranks(&cx) == direct)));
    let h = match homology(&cx, &tangle) {
        Ok(h) => {
            checks.push(("euler_homology", Status::of(h.graded_euler() == direct)));
            h
        }
        Err(_) => {
            checks.push(("euler_homology", Status::Fail));
            BigradedHomology::default()
        }
    };

    if d.is_closed() {
        let tensor_ok = bracket_tensor(&d)? == direct;
        checks.push(("tensor", Status::of(tensor_ok)));
        let marked_ok = marked_slices_ok(&d)?;
        checks.push(("marked", Status::of(marked_ok)));
        if let Some(link) = &link {
            checks.push(("rules_agree", Status::of(*link == tangle)));
        }
    } else {
        checks.push(("tensor", Status::Skipped));
        checks.push(("marked", Status::Skipped));
        checks.push(("rules_agree", Status::Skipped));
    }

    Ok(FileReport {
        file: path.display().to_string(),
        checks,
        time_ms: t0.elapsed().as_millis(),
        homology: h,
    })
}

fn marked_slices_ok(d: &TangleDiagram) -> Result<bool, CliError> {
    for m in enumerate_markers(d) {
        let slice = bracket_tensor_marked(d, &m)?;
        let mut per_marker = LaurentPoly::zero();
        for e in fkh::states::smooth(d, &m).enhance() {
            per_marker.add_term(e.q, phase(e.p));
        }
        if slice != per_marker {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cmd_verify(
    cli: &Cli,
    files: &[PathBuf],
    compare: bool,
    corrupt_sign: bool,
) -> Result<bool, CliError> {
    let table = if corrupt_sign {
        FrobeniusTable::with_flipped(FrobeniusRule::SplitOneToOneX)
    } else {
        FrobeniusTable::standard()
    };
    let identities_ok = check_matrix_identities(&WeightTable::standard());

    let results: Vec<Result<FileReport, CliError>> = files
        .par_iter()
        .map(|path| verify_one(path, cli.max_crossings, &table))
        .collect();
    let mut reports = Vec::new();
    for r in results {
        reports.push(r?);
    }

    let comparison = compare.then(|| {
        reports
            .windows(2)
            .all(|w| compare_homology(&w[0].homology, &w[1].homology))
    });

    let all_ok = identities_ok
        && reports.iter().all(|r| r.checks.iter().all(|(_, s)| !s.failed()))
        && comparison != Some(false);

    if cli.json {
        let files: Vec<Value> = reports
            .iter()
            .map(|r| {
                let checks: serde_json::Map<String, Value> = r
                    .checks
                    .iter()
                    .map(|(name, s)| (name.to_string(), json!(s.name())))
                    .collect();
                json!({"file": r.file, "checks": checks, "time_ms": r.time_ms})
            })
            .collect();
        let out = json!({
            "matrix_identities": identities_ok,
            "files": files,
            "comparison": comparison.map(|ok| if ok { "pass" } else { "fail" }),
            "result": if all_ok { "pass" } else { "fail" },
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("matrix identities: {}", Status::of(identities_ok).name());
        for r in &reports {
            let checks: Vec<String> = r
                .checks
                .iter()
                .map(|(name, s)| format!("{name}={}", s.name()))
                .collect();
            println!("{}: {} ({} ms)", r.file, checks.join(" "), r.time_ms);
        }
        if let Some(ok) = comparison {
            println!("homology comparison: {}", Status::of(ok).name());
        }
        println!("result: {}", if all_ok { "pass" } else { "fail" });
    }
    Ok(all_ok)
}

fn cmd_compare(cli: &Cli, a: &Path, b: &Path) -> Result<bool, CliError> {
    let (da, db) = (load(a, cli.max_crossings)?, load(b, cli.max_crossings)?);
    let (ca, cb) = (build_complex(&da), build_complex(&db));
    let ha = homology(&ca, &ca.boundary_tangle())?;
    let hb = homology(&cb, &cb.boundary_tangle())?;
    let equal = compare_homology(&ha, &hb);

    if cli.json {
        let out = json!({
            "a": {"file": a.display().to_string(), "homology": homology_json(&ha)},
            "b": {"file": b.display().to_string(), "homology": homology_json(&hb)},
            "equal": equal,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
    } else {
        println!("{}:", a.display());
        print_homology(&ha);
        println!("{}:", b.display());
        print_homology(&hb);
        println!("equal: {}", if equal { "yes" } else { "no" });
    }
    Ok(equal)
}

fn print_homology(h: &BigradedHomology) {
    let rendered = homology_json(h);
    for entry in rendered.as_array().unwrap() {
        let (p2, q) = (entry["p2"].as_i64().unwrap(), entry["q"].as_i64().unwrap());
        println!("  (p2={p2}, q={q}): {}", h.groups[&(p2, q)]);
    }
}
