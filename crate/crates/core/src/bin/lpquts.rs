use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lpquts_core::cli::{apply_config_text, format_cycles, parse_vertex_values, solve_summary};
use lpquts_core::engine::bench::{run_bench, BenchSpec};
use lpquts_core::engine::{exact_mwis_with, lp_quts, EngineConfig, ExactOptions, EXACT_GUARD};
use lpquts_core::generate::{gen_erdos_renyi, gen_series_parallel};
use lpquts_core::graph::connected_components;
use lpquts_core::io::{read_graph, write_atomic, write_graph};
use lpquts_core::samplers::SamplerKind;
use lpquts_core::separation::{alpha_schedule, find_violated_cycles, SeparationInput, DEFAULT_ALPHA_STEPS};

/// Hybrid LP / sampling cutting-plane solver for maximum weighted independent set.
#[derive(Parser)]
#[command(name = "lpquts", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Run the cutting-plane loop on a graph file.
    Solve(SolveArgs),
    /// Solve exactly by branch and bound.
    Exact(ExactArgs),
    /// Run a budget-matched benchmark described by a spec file.
    Bench(BenchArgs),
    /// List violated odd cycles for a given x (and occupations).
    SepDebug(SepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    /// Connected Erdős-Rényi graph.
    Er,
    /// Series-parallel graph (unit weights).
    Sp,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    n: usize,
    /// Edge probability (er only).
    #[arg(long, default_value_t = 0.2)]
    p: f64,
    /// Uniform(0,1) weights instead of unit weights (er only).
    #[arg(long)]
    weighted: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Engine overrides; each beats the config file, which beats the defaults.
#[derive(Args)]
struct EngineFlags {
    /// Flat key=value file of engine settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_sampler)]
    sampler: Option<SamplerKind>,
    /// Shots per iteration.
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    patience: Option<usize>,
    #[arg(long)]
    alpha_steps: Option<usize>,
    #[arg(long)]
    max_subgraph: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol_lp: Option<f64>,
    #[arg(long)]
    tol_dual: Option<f64>,
}

fn parse_sampler(s: &str) -> Result<SamplerKind, String> {
    s.parse().map_err(|e: lpquts_core::Error| e.to_string())
}

impl EngineFlags {
    fn resolve(&self, mut config: EngineConfig) -> Result<EngineConfig> {
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            apply_config_text(&mut config, &text, path)?;
        }
        if let Some(v) = self.sampler {
            config.sampler = v;
        }
        if let Some(v) = self.shots {
            config.shots = v;
        }
        if let Some(v) = self.max_iter {
            config.max_iterations = v;
        }
        if let Some(v) = self.patience {
            config.patience = v;
        }
        if let Some(v) = self.alpha_steps {
            config.alpha_steps = v;
        }
        if let Some(v) = self.max_subgraph {
            config.max_subgraph = Some(v);
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.tol_lp {
            config.tol_lp = v;
        }
        if let Some(v) = self.tol_dual {
            config.tol_dual = v;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineFlags,
}

#[derive(Args)]
struct ExactArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Where to write the JSON result.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest vertex count attempted.
    #[arg(long, default_value_t = EXACT_GUARD)]
    max_n: usize,
    /// Seconds before giving up.
    #[arg(long)]
    time_budget: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    /// key=value spec: n, p, weighted, instances, seed, methods, engine keys.
    spec: PathBuf,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional JSON output with per-iteration traces.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Fill the wall_ms column (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct SepArgs {
    #[arg(long)]
    graph: PathBuf,
    /// "<vertex_id> <value>" lines with the LP solution.
    #[arg(long)]
    x: PathBuf,
    /// "<vertex_id> <value>" lines with average occupations (default 0).
    #[arg(long)]
    occ: Option<PathBuf>,
    /// Fixed α; without it the α schedule is run.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_ALPHA_STEPS)]
    alpha_steps: usize,
}

fn main() -> ExitCode {
    // Exit code 2 means "budget-terminated", so usage errors map to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Bench(a) => cmd_bench(a),
        Command::SepDebug(a) => cmd_sep_debug(a),
    }
}

fn cmd_gen(a: GenArgs) -> Result<u8> {
    let g = match a.kind {
        GenKind::Er => gen_erdos_renyi(a.n, a.p, a.weighted, a.seed)?,
        GenKind::Sp => {
            if a.weighted {
                bail!("series-parallel instances are unit weighted");
            }
            gen_series_parallel(a.n, a.seed)?
        }
    };
    write_graph(&g, &a.out)?;
    let connected = connected_components(&g).len() == 1;
    println!("wrote {}: n {} m {} connected {connected}", a.out.display(), g.n(), g.m());
    Ok(0)
}

fn cmd_solve(a: SolveArgs) -> Result<u8> {
    let config = a.engine.resolve(EngineConfig::default())?;
    let g = read_graph(&a.graph)?;
    let report = lp_quts(&g, &config)?;
    print!("{}", solve_summary(&report));
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    Ok(if report.converged { 0 } else { 2 })
}

fn cmd_exact(a: ExactArgs) -> Result<u8> {
    let g = read_graph(&a.graph)?;
    let opts = ExactOptions {
        max_n: a.max_n,
        time_budget: a.time_budget.map(Duration::from_secs_f64),
    };
    let s = exact_mwis_with(&g, &opts)?;
    let members: Vec<String> = s.set.members().iter().map(usize::to_string).collect();
    println!("value {}", s.value);
    println!("set {}", members.join(" "));
    if let Some(out) = &a.out {
        write_json(out, &s)?;
    }
    Ok(0)
}

fn cmd_bench(a: BenchArgs) -> Result<u8> {
    let text = fs::read_to_string(&a.spec).with_context(|| format!("reading {}", a.spec.display()))?;
    let mut spec = BenchSpec::parse(&text, &a.spec)?;
    spec.timing |= a.timing;
    let report = run_bench(&spec)?;
    write_atomic(&a.out, report.to_csv()?.as_bytes())?;
    if let Some(json) = &a.json {
        write_atomic(json, report.to_json()?.as_bytes())?;
    }
    println!(
        "{} instances, {} rows written to {}",
        report.instances.len(),
        report.rows().count(),
        a.out.display()
    );
    Ok(0)
}

fn cmd_sep_debug(a: SepArgs) -> Result<u8> {
    let g = read_graph(&a.graph)?;
    let x = read_values(&a.x, g.n())?;
    let occ = match &a.occ {
        Some(p) => read_values(p, g.n())?,
        None => vec![0.0; g.n()],
    };
    match a.alpha {
        Some(alpha) => {
            if alpha < 0.0 {
                bail!("alpha must be nonnegative");
            }
            let cycles = find_violated_cycles(&SeparationInput::new(&g, &x, &occ, alpha))?;
            print!("{}", format_cycles(&cycles, alpha));
        }
        None => {
            let out = alpha_schedule(&g, &x, &occ, a.alpha_steps)?;
            if let Some(alpha) = out.alpha {
                println!("alpha {alpha} after {} rounds", out.rounds);
            }
            print!("{}", format_cycles(&out.cycles, out.alpha.unwrap_or(0.0)));
        }
    }
    Ok(0)
}

fn read_values(path: &Path, n: usize) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_vertex_values(&text, n, path)?)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())?;
    Ok(())
}
