//! Command-line harness: single runs with trace output, quota sweeps,
//! trace audits, and problem validation.
//!
//! Exit codes: 0 success, 2 step-budget timeout, 3 parse error,
//! 4 configuration/validation error, 5 audit violation.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rtsearch::bounds::{sweep_quota, write_sweep_csv};
use rtsearch::config::RunConfig;
use rtsearch::framework::{run_search, StepBudget};
use rtsearch::gen::{gen_problem, GenKind, GenSpec};
use rtsearch::grid::{grid_to_problem, parse_grid_map};
use rtsearch::policies::make_policy;
use rtsearch::probfile::parse_problem;
use rtsearch::trace::{emit_trace_csv, emit_trace_table, parse_trace, replay_audit};
use rtsearch::{DistanceOracle, Error, ProblemSpec};

#[derive(Parser)]
#[command(
    name = "rtsearch",
    version,
    about = "Stack-based real-time heuristic search"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Default)]
struct Opts {
    /// Flat key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Algorithm: lrta, sla, slat, slat-acyclic, lrta-acyclic, dynlook, piecewise.
    #[arg(long)]
    algo: Option<String>,
    /// Grid map file ('#' blocked, '.' free, 'S' start, 'G' goal).
    #[arg(long)]
    map: Option<PathBuf>,
    /// Problem file (state/edge/goal/start directives).
    #[arg(long)]
    problem: Option<PathBuf>,
    /// Generator kind: chain or random.
    #[arg(long)]
    gen: Option<String>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Learning quota T in real cost ('inf' for unlimited).
    #[arg(long)]
    quota: Option<String>,
    #[arg(long)]
    gamma_bar: Option<f64>,
    #[arg(long)]
    dmax: Option<u64>,
    /// Piecewise segment length.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    tie_seed: Option<u64>,
    /// Learning-amount accounting: total or axiom.
    #[arg(long)]
    accounting: Option<String>,
    /// Runtime auditing: on or off.
    #[arg(long)]
    audit: Option<String>,
    /// Step budget (defaults to the completeness budget).
    #[arg(long)]
    budget: Option<u64>,
    /// Initial heuristic for maps: zero, manhattan, exact.
    #[arg(long)]
    h0: Option<String>,
    #[arg(long)]
    weight_min: Option<u64>,
    #[arg(long)]
    weight_max: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one search and emit its trace.
    Run {
        #[command(flatten)]
        opts: Opts,
        /// Trace format: csv or table.
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Sweep the learning quota over a problem set and emit CSV records.
    Sweep {
        #[command(flatten)]
        opts: Opts,
        /// Comma-separated quota values in real cost.
        #[arg(long)]
        quotas: String,
        /// Number of generated problems (consecutive seeds).
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// Replay a recorded trace through the transition auditor.
    Audit {
        #[command(flatten)]
        opts: Opts,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Check a problem for reachability and θ-admissibility.
    Validate {
        #[command(flatten)]
        opts: Opts,
    },
}

fn build_config(opts: &Opts) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &opts.config {
        cfg.apply_text(&fs::read_to_string(path)?)?;
    }
    let overrides: Vec<(&str, Option<String>)> = vec![
        ("algo", opts.algo.clone()),
        ("gen", opts.gen.clone()),
        ("size", opts.size.map(|v| v.to_string())),
        ("seed", opts.seed.map(|v| v.to_string())),
        ("theta", opts.theta.map(|v| v.to_string())),
        ("quota", opts.quota.clone()),
        ("gamma_bar", opts.gamma_bar.map(|v| v.to_string())),
        ("dmax", opts.dmax.map(|v| v.to_string())),
        ("k", opts.k.map(|v| v.to_string())),
        ("tie_seed", opts.tie_seed.map(|v| v.to_string())),
        ("accounting", opts.accounting.clone()),
        ("audit", opts.audit.clone()),
        ("budget", opts.budget.map(|v| v.to_string())),
        ("h0", opts.h0.clone()),
        ("weight_min", opts.weight_min.map(|v| v.to_string())),
        ("weight_max", opts.weight_max.map(|v| v.to_string())),
        ("map", opts.map.as_ref().map(|p| p.display().to_string())),
        (
            "problem",
            opts.problem.as_ref().map(|p| p.display().to_string()),
        ),
        ("out", opts.out.as_ref().map(|p| p.display().to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    Ok(cfg)
}

fn load_problem(cfg: &RunConfig, seed: u64) -> Result<(String, ProblemSpec), Error> {
    if let Some(path) = &cfg.problem {
        let text = fs::read_to_string(path)?;
        return Ok((path.display().to_string(), parse_problem(&text)?));
    }
    if let Some(path) = &cfg.map {
        let text = fs::read_to_string(path)?;
        let map = parse_grid_map(&text)?;
        return Ok((
            path.display().to_string(),
            grid_to_problem(&map, cfg.theta, cfg.h0)?,
        ));
    }
    let kind = cfg
        .gen
        .ok_or_else(|| Error::Config("no problem source: use --problem, --map or --gen".into()))?;
    let spec = GenSpec {
        kind,
        size: cfg.size,
        seed,
        weight_units: (cfg.weight_min, cfg.weight_max),
        theta: cfg.theta,
    };
    let label = match kind {
        GenKind::Chain => format!("chain-{}", cfg.size),
        GenKind::Random => format!("random-{}-{seed}", cfg.size),
    };
    Ok((label, gen_problem(&spec)?))
}

fn checked_problem(cfg: &RunConfig, seed: u64) -> Result<(String, ProblemSpec), Error> {
    let (name, problem) = load_problem(cfg, seed)?;
    let oracle = DistanceOracle::new(&problem);
    let report = oracle.validate_problem();
    if !report.is_valid() {
        let mut msg = format!("{name}: invalid problem");
        for v in &report.violations {
            msg.push_str(&format!("\n  {v}"));
        }
        return Err(Error::Config(msg));
    }
    Ok((name, problem))
}

fn write_output(cfg: &RunConfig, text: &str) -> Result<(), Error> {
    match &cfg.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. } => 3,
        Error::Config(_) => 4,
        _ => 1,
    }
}

fn cmd_run(opts: &Opts, format: &str) -> Result<u8, Error> {
    let cfg = build_config(opts)?;
    let (name, problem) = checked_problem(&cfg, cfg.seed)?;
    let params = cfg.to_params(problem.epsilon())?;
    let oracle = DistanceOracle::new(&problem);
    let mut policy = make_policy(&cfg.algo, &params)?;
    let budget = cfg.budget.map_or(StepBudget::Auto, StepBudget::Steps);
    let result = run_search(policy.as_mut(), &oracle, &params, budget, cfg.audit)?;

    let text = match format {
        "csv" => emit_trace_csv(&problem, &result.trace),
        "table" => emit_trace_table(&problem, &result.trace)?,
        other => return Err(Error::Config(format!("unknown trace format '{other}'"))),
    };
    write_output(&cfg, &text)?;

    let eps = problem.epsilon();
    eprintln!(
        "{name}: algo={} cycles={} cost={} travel={} u={}{}",
        cfg.algo,
        result.cycles,
        rtsearch::cost::format_cost(result.solution_cost, eps),
        rtsearch::cost::format_cost(result.travel_cost, eps),
        rtsearch::cost::format_units(result.final_u, eps),
        if result.timed_out { " TIMEOUT" } else { "" },
    );
    if !result.audit.is_empty() {
        for v in &result.audit {
            eprintln!("audit: cycle {}: {v}", v.cycle());
        }
        return Ok(5);
    }
    if result.timed_out {
        return Ok(2);
    }
    Ok(0)
}

fn cmd_sweep(opts: &Opts, quotas: &str, count: u64) -> Result<u8, Error> {
    let cfg = build_config(opts)?;
    let mut problems = Vec::new();
    for seed in cfg.seed..cfg.seed + count.max(1) {
        problems.push(checked_problem(&cfg, seed)?);
        if cfg.gen != Some(GenKind::Random) {
            break; // files and chains do not vary with the seed
        }
    }
    let epsilon = problems[0].1.epsilon();
    if problems.iter().any(|(_, p)| p.epsilon() != epsilon) {
        return Err(Error::Config(
            "sweep problems must share one epsilon".into(),
        ));
    }
    let mut quota_units = Vec::new();
    let mut one = RunConfig::default();
    for field in quotas.split(',') {
        one.set("quota", field.trim())?;
        match one.quota_units(epsilon)? {
            rtsearch::Cost::Finite(u) => quota_units.push(u),
            rtsearch::Cost::Infinity => {
                return Err(Error::Config("sweep quotas must be finite".into()))
            }
        }
    }
    let params = cfg.to_params(epsilon)?;
    let budget = cfg.budget.map_or(StepBudget::Auto, StepBudget::Steps);
    let records = sweep_quota(&cfg.algo, &problems, &quota_units, &params, budget)?;
    let mut buf = Vec::new();
    write_sweep_csv(&records, &mut buf)?;
    write_output(&cfg, &String::from_utf8(buf).expect("csv is utf-8"))?;
    if records.iter().any(|r| !r.audit_clean) {
        eprintln!("sweep: audit violations recorded");
        return Ok(5);
    }
    Ok(0)
}

fn cmd_audit(opts: &Opts, trace_path: &PathBuf) -> Result<u8, Error> {
    let cfg = build_config(opts)?;
    let (name, problem) = checked_problem(&cfg, cfg.seed)?;
    let params = cfg.to_params(problem.epsilon())?;
    let text = fs::read_to_string(trace_path)?;
    let records = parse_trace(&problem, &text)?;
    let findings = replay_audit(&problem, &records, &params)?;
    if findings.is_empty() {
        println!("{name}: {} cycles, audit clean", records.len());
        Ok(0)
    } else {
        for (t, v) in &findings {
            println!("{name}: cycle {t}: {v}");
        }
        Ok(5)
    }
}

fn cmd_validate(opts: &Opts) -> Result<u8, Error> {
    let cfg = build_config(opts)?;
    let (name, problem) = load_problem(&cfg, cfg.seed)?;
    let oracle = DistanceOracle::new(&problem);
    let report = oracle.validate_problem();
    if report.is_valid() {
        println!(
            "{name}: valid ({} states, {} goals, theta {})",
            problem.state_count(),
            problem.goals().len(),
            problem.theta()
        );
        Ok(0)
    } else {
        for v in &report.violations {
            println!("{name}: {v}");
        }
        Ok(4)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Run { opts, format } => cmd_run(opts, format),
        Cmd::Sweep {
            opts,
            quotas,
            count,
        } => cmd_sweep(opts, quotas, *count),
        Cmd::Audit { opts, trace } => cmd_audit(opts, trace),
        Cmd::Validate { opts } => cmd_validate(opts),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
