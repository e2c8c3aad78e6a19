use clap::{Parser, Subcommand, ValueEnum};
use gridhom::connected_sum::{verify_kunneth, Check, ConnectedSum, Coverage, VerifyOptions};
use gridhom::homology::{default_probe_depth, HomologyEngine, Window};
use gridhom::legendrian::{additivity_check, lambdas};
use gridhom::{GridComplex, GridDiagram};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gridhom", version, about = "Minus-flavor grid homology and connected sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Bigrading window M_LO:M_HI,A_LO:A_HI.
    #[arg(long, global = true)]
    window: Option<Window>,
    /// Probe depth in Alexander levels.
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Worker threads.
    #[arg(long, global = true, env = "GRIDHOM_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a diagram and check the minus complex (d^2 = 0, gradings).
    Validate { path: PathBuf },
    /// Homology as an F[U]-module, and tau.
    Homology { path: PathBuf },
    /// Build the connected-sum diagram of two knots of equal size.
    Connect {
        left: PathBuf,
        right: PathBuf,
        /// Output file; JSON if it ends in .json, text otherwise.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Chain-level and homology-level checks of the connected-sum comparison.
    VerifyKunneth {
        left: PathBuf,
        right: PathBuf,
        /// Check only this many f slices, chosen with --seed.
        #[arg(long)]
        samples: Option<usize>,
        /// Largest g# whose full homology is computed.
        #[arg(long, default_value_t = 6)]
        full_max_size: usize,
    },
    /// Classes of the canonical states x+ and x-, and their behavior under
    /// connected sum when two diagrams are given.
    Legendrian { path: PathBuf, right: Option<PathBuf> },
    /// Print a diagram as text.
    Render { path: PathBuf },
}

/// Report shape shared by every command.
#[derive(Serialize)]
struct Report {
    command: &'static str,
    inputs: Vec<String>,
    passed: bool,
    checks: Vec<Check>,
    result: Value,
}

enum Failure {
    Input(String),
    Compute(String),
}

fn read(path: &Path) -> Result<GridDiagram, Failure> {
    let s = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    GridDiagram::parse_any(&s).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn exhaustive(name: &'static str, passed: bool, detail: String) -> Check {
    Check { name, coverage: Coverage::Exhaustive, passed, window: None, slices: 0, detail, millis: 0 }
}

const VALIDATE_MAX: usize = 8;

fn validate(path: &Path) -> Result<Report, Failure> {
    let d = read(path)?;
    let n = d.n();
    let mut checks = Vec::new();
    if n <= VALIDATE_MAX {
        let gc = GridComplex::build(&d).map_err(compute)?;
        let bad = gc.complex.d_squared_failures();
        checks.push(exhaustive("d_squared", bad.is_empty(), format!("{} of {} generators with d^2 != 0", bad.len(), gc.states.len())));
        let bad = gc.complex.inhomogeneous_generators();
        checks.push(exhaustive("homogeneous", bad.is_empty(), format!("{} generators with a boundary term off bidegree (-1,0)", bad.len())));
    } else {
        for name in ["d_squared", "homogeneous"] {
            checks.push(Check {
                name,
                coverage: Coverage::Skipped { reason: format!("{n}! states exceed the {VALIDATE_MAX}x{VALIDATE_MAX} limit") },
                passed: false,
                window: None,
                slices: 0,
                detail: String::new(),
                millis: 0,
            });
        }
    }
    Ok(report("validate", &[path], checks, json!({ "size": n, "diagram": d.render_text() })))
}

fn homology(cli: &Cli, path: &Path) -> Result<Report, Failure> {
    let d = read(path)?;
    let gc = GridComplex::build(&d).map_err(compute)?;
    let mut e = HomologyEngine::new(&gc.complex).map_err(compute)?;
    let r = e.resolve(cli.depth.unwrap_or_else(|| default_probe_depth(&gc.complex))).map_err(compute)?;
    let mut result = json!({
        "module": r.module,
        "display": r.module.to_string(),
        "tau": r.tau(),
        "depth": r.depth,
    });
    if let Some(w) = &cli.window {
        e.extend_to(w.a_lo);
        let dims: Vec<Value> = w
            .levels()
            .flat_map(|a| (w.m_lo..=w.m_hi).map(move |m| gridhom::Bigrading::new(m, a)))
            .filter(|&b| b.alexander <= e.a_max())
            .map(|b| json!({ "maslov": b.maslov, "alexander": b.alexander, "dim": e.dim(b) }))
            .collect();
        result["window"] = json!(w.to_string());
        result["dims"] = Value::Array(dims);
    }
    Ok(report("homology", &[path], Vec::new(), result))
}

fn connect(left: &Path, right: &Path, out: Option<&Path>) -> Result<Report, Failure> {
    let (g1, g2) = (read(left)?, read(right)?);
    let sum = ConnectedSum::new(&g1, &g2).map_err(|e| Failure::Input(e.to_string()))?;
    let g = &sum.gsharp;
    if let Some(out) = out {
        let body = if out.extension().is_some_and(|x| x == "json") { g.to_json() + "\n" } else { g.render_text() };
        std::fs::write(out, body).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    }
    Ok(report("connect", &[left, right], Vec::new(), json!({ "size": g.n(), "diagram": g.render_text() })))
}

fn verify(cli: &Cli, left: &Path, right: &Path, samples: Option<usize>, full_max_size: usize) -> Result<Report, Failure> {
    let (g1, g2) = (read(left)?, read(right)?);
    if g1.n() != g2.n() {
        return Err(Failure::Input(format!("summands have sizes {} and {}", g1.n(), g2.n())));
    }
    let mut opts = VerifyOptions { full_max_size, window: cli.window, f_samples: samples, seed: cli.seed, ..VerifyOptions::default() };
    if let Some(d) = cli.depth {
        opts.depth = d;
    }
    let r = verify_kunneth(&g1, &g2, &opts).map_err(compute)?;
    Ok(report("verify-kunneth", &[left, right], r.checks, json!({ "summand_size": r.summand_size, "size": r.size })))
}

fn legendrian(left: &Path, right: Option<&Path>) -> Result<Report, Failure> {
    let g1 = read(left)?;
    let Some(right) = right else {
        let [plus, minus] = lambdas(&g1).map_err(compute)?;
        return Ok(report("legendrian", &[left], Vec::new(), json!({ "lambda_plus": plus, "lambda_minus": minus, "theta": plus })));
    };
    let g2 = read(right)?;
    if g1.n() != g2.n() {
        return Err(Failure::Input(format!("summands have sizes {} and {}", g1.n(), g2.n())));
    }
    let r = additivity_check(&g1, &g2, 6).map_err(compute)?;
    let mut checks: Vec<Check> = r
        .chain
        .iter()
        .map(|c| {
            let name = if c.which == gridhom::legendrian::Corner::Plus { "eta_x_plus" } else { "eta_x_minus" };
            exhaustive(name, c.holds && c.is_cycle, format!("x{} of g# lies in {:?}", c.which, c.class))
        })
        .collect();
    match &r.homology {
        Some(h) => checks.extend(h.iter().map(|c| {
            let name = if c.which == gridhom::legendrian::Corner::Plus { "lambda_plus_additive" } else { "lambda_minus_additive" };
            exhaustive(name, c.holds, format!("{:?} at {} vs {:?} at {}", c.sharp, c.sharp_bigrading, c.tensor, c.tensor_bigrading))
        })),
        None => {
            for name in ["lambda_plus_additive", "lambda_minus_additive"] {
                checks.push(Check {
                    name,
                    coverage: Coverage::Skipped { reason: r.scale.clone().unwrap_or_default() },
                    passed: false,
                    window: None,
                    slices: 0,
                    detail: String::new(),
                    millis: 0,
                });
            }
        }
    }
    Ok(report("legendrian", &[left, right], checks, json!({ "size": r.size, "report": r })))
}

fn render(path: &Path) -> Result<Report, Failure> {
    let d = read(path)?;
    Ok(report("render", &[path], Vec::new(), json!({ "size": d.n(), "diagram": d.render_text() })))
}

fn report(command: &'static str, inputs: &[&Path], checks: Vec<Check>, result: Value) -> Report {
    let passed = checks.iter().all(|c| c.passed || matches!(c.coverage, Coverage::Skipped { .. }));
    Report { command, inputs: inputs.iter().map(|p| p.display().to_string()).collect(), passed, checks, result }
}

fn print_text(r: &Report) {
    if r.command == "render" {
        print!("{}", r.result["diagram"].as_str().unwrap_or_default());
        return;
    }
    match r.command {
        "homology" => {
            println!("H = {}", r.result["display"].as_str().unwrap_or_default());
            println!("tau = {}", r.result["tau"]);
            if let Some(dims) = r.result["dims"].as_array() {
                for d in dims.iter().filter(|d| d["dim"].as_u64() != Some(0)) {
                    println!("dim at ({},{}) = {}", d["maslov"], d["alexander"], d["dim"]);
                }
            }
        }
        "connect" => print!("{}", r.result["diagram"].as_str().unwrap_or_default()),
        "legendrian" if r.result.get("lambda_plus").is_some() => {
            for key in ["lambda_plus", "lambda_minus"] {
                let c = &r.result[key];
                println!("{key}: state {} at ({},{}) {}", c["state"], c["bigrading"]["maslov"], c["bigrading"]["alexander"], c["location"]);
            }
        }
        _ => {}
    }
    for c in &r.checks {
        let (tag, cov) = match &c.coverage {
            Coverage::Exhaustive => (if c.passed { "PASS" } else { "FAIL" }, "exhaustive".to_string()),
            Coverage::Window => (if c.passed { "PASS" } else { "FAIL" }, format!("window {}", c.window.map(|w| w.to_string()).unwrap_or_default())),
            Coverage::Sampled { covered, total } => (if c.passed { "PASS (sampled)" } else { "FAIL" }, format!("sampled {covered}/{total}")),
            Coverage::Skipped { reason } => ("SKIP", reason.clone()),
        };
        println!("{tag:14} {:22} [{cov}] {}", c.name, c.detail);
    }
    if !r.checks.is_empty() {
        println!("{}", if r.passed { "all checks passed" } else { "some checks failed" });
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match &cli.command {
        Command::Validate { path } => validate(path),
        Command::Homology { path } => homology(&cli, path),
        Command::Connect { left, right, out } => connect(left, right, out.as_deref()),
        Command::VerifyKunneth { left, right, samples, full_max_size } => verify(&cli, left, right, *samples, *full_max_size),
        Command::Legendrian { path, right } => legendrian(path, right.as_deref()),
        Command::Render { path } => render(path),
    };
    match out {
        Ok(r) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r).expect("serializable report")),
                Format::Text => print_text(&r),
            }
            if r.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("input error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
