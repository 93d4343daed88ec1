use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hopgdp::bench::{
    read_records, run_experiment, summarize, to_csv, ExperimentConfig, GeneratorRegistry,
    RESULTS_FILE,
};
use hopgdp::landmarks::{compute_hgn_landmarks, export};
use hopgdp::model::execute_plan;
use hopgdp::search::{trace_from_json, trace_to_json, validate, Budget, Outcome, PlannerRegistry};
use hopgdp::task::HgnProblem;

const SOLVED: u8 = 0;
const FAILED: u8 = 1;
const ABORTED: u8 = 2;
const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hopgdp",
    version,
    about = "Optimal planning over hierarchical goal networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Inputs {
    /// Domain file.
    #[arg(short, long)]
    domain: PathBuf,
    /// Problem file.
    #[arg(short, long)]
    problem: PathBuf,
    /// Method library.
    #[arg(short, long)]
    methods: Option<PathBuf>,
}

impl Inputs {
    fn load(&self) -> Result<HgnProblem, String> {
        HgnProblem::from_files(&self.domain, &self.problem, self.methods.as_deref())
            .map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Find an optimal plan.
    Plan {
        #[command(flatten)]
        inputs: Inputs,
        /// hopgdp, blind (hopgdp_blind) or astar (astar_hl).
        #[arg(long, default_value = "hopgdp")]
        planner: String,
        /// Wall-clock budget in seconds.
        #[arg(long, env = "HOPGDP_BUDGET_S")]
        budget_s: Option<f64>,
        /// Write the decomposition trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write search metrics as JSON.
        #[arg(long)]
        metrics: Option<PathBuf>,
    },
    /// Check a decomposition trace; exit 0 if valid, 1 if not.
    Validate {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Print the landmark graph of the initial state and network as JSON.
    Landmarks {
        #[command(flatten)]
        inputs: Inputs,
        /// Also write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Generate a random problem.
    Gen {
        /// blocksworld, logistics or depots.
        domain: String,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory; the problem goes to NAME.pddl, with the
        /// domain and method files next to it.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run an experiment described by a TOML file.
    Bench {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Use 25-minute / 4 GB budgets instead of the configured ones.
        #[arg(long)]
        full_scale: bool,
    },
    /// Aggregate the results in a bench output directory.
    Summarize {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Print the summary as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn plan(
    inputs: &Inputs,
    planner: &str,
    budget_s: Option<f64>,
    trace: Option<&Path>,
    metrics: Option<&Path>,
) -> Result<u8, String> {
    let p = inputs.load()?;
    let reg = PlannerRegistry::default();
    let planner = reg.get(planner).ok_or_else(|| {
        format!(
            "unknown planner `{planner}` (known: {})",
            reg.names().join(", ")
        )
    })?;
    let budget = budget_s.map(Budget::seconds).unwrap_or_default();
    let r = planner.solve(&p, budget);
    if let Some(path) = metrics {
        let json = serde_json::to_string_pretty(&r.metrics).expect("metrics serialize");
        write_file(path, &json)?;
    }
    match &r.outcome {
        Outcome::Solved(sol) => {
            if let Some(path) = trace {
                write_file(path, &trace_to_json(&sol.trace))?;
            }
            print!("{}", sol.plan.display(&p.task));
            Ok(SOLVED)
        }
        Outcome::Failed => {
            eprintln!("no solution exists");
            Ok(FAILED)
        }
        Outcome::Aborted(reason) => {
            eprintln!("search aborted: {reason:?} budget exhausted");
            Ok(ABORTED)
        }
    }
}

fn validate_cmd(inputs: &Inputs, trace: &Path) -> Result<u8, String> {
    let p = inputs.load()?;
    let text = std::fs::read_to_string(trace).map_err(|e| format!("{}: {e}", trace.display()))?;
    let steps = trace_from_json(&text).map_err(|e| format!("{}: {e}", trace.display()))?;
    match validate(&p, &steps) {
        Ok(v) => {
            // Independent re-execution of the extracted plan.
            match execute_plan(&p.task, &p.initial, &v.plan) {
                Ok((_, cost)) if cost == v.cost => {
                    println!("valid; cost = {}", v.cost);
                    Ok(SOLVED)
                }
                Ok((_, cost)) => {
                    println!("invalid: trace cost {} but execution cost {cost}", v.cost);
                    Ok(FAILED)
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Ok(FAILED)
                }
            }
        }
        Err(v) => {
            println!("invalid: {v}");
            Ok(FAILED)
        }
    }
}

fn landmarks(inputs: &Inputs, dot: Option<&Path>) -> Result<u8, String> {
    let p = inputs.load()?;
    let lg = compute_hgn_landmarks(&p.initial, &p.network, &p.task);
    if let Some(path) = dot {
        write_file(path, &export::to_dot(&lg, &p.task))?;
    }
    let json = export::to_json(&lg, &p.task);
    println!(
        "{}",
        serde_json::to_string_pretty(&json).expect("graph serializes")
    );
    Ok(SOLVED)
}

fn generate(domain: &str, size: usize, seed: u64, out: &Path) -> Result<u8, String> {
    let reg = GeneratorRegistry::default();
    let g = reg.get(domain).ok_or_else(|| {
        format!(
            "unknown domain `{domain}` (known: {})",
            reg.domains().join(", ")
        )
    })?;
    if size == 0 {
        return Err("--size must be positive".into());
    }
    let inst = g.generate(size, seed);
    let bundle = hopgdp::bench::bundle(domain).expect("generated domains are bundled");
    std::fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    write_file(&out.join("domain.pddl"), bundle.domain)?;
    write_file(&out.join("methods.pddl"), bundle.methods)?;
    let path = out.join(format!("{}.pddl", inst.name));
    write_file(&path, &inst.problem)?;
    println!("{}", path.display());
    Ok(SOLVED)
}

fn bench(config: &Path, out: &Path, full_scale: bool) -> Result<u8, String> {
    let text = std::fs::read_to_string(config).map_err(|e| format!("{}: {e}", config.display()))?;
    let mut cfg =
        ExperimentConfig::parse(&text).map_err(|e| format!("{}: {e}", config.display()))?;
    if full_scale {
        cfg = cfg.full_scale();
    }
    let records = run_experiment(&cfg, out).map_err(|e| format!("{}: {e}", out.display()))?;
    let solved = records.iter().filter(|r| r.solved).count();
    println!(
        "{} runs, {solved} solved; results in {}",
        records.len(),
        out.join(RESULTS_FILE).display()
    );
    Ok(SOLVED)
}

fn summarize_cmd(input: &Path, csv: Option<&Path>, json: bool) -> Result<u8, String> {
    let path = input.join(RESULTS_FILE);
    if !path.exists() {
        return Err(format!("{}: no such file", path.display()));
    }
    let records = read_records(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let s = summarize(&records);
    if let Some(csv) = csv {
        write_file(csv, &to_csv(&s.buckets))?;
    }
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&s).expect("summary serializes")
        );
        return Ok(SOLVED);
    }
    println!(
        "{:<12} {:>5} {:<13} {:>7} {:>14} {:>14} {:>10}",
        "domain", "size", "planner", "solved", "mean expanded", "geo expanded", "mean s"
    );
    for b in &s.buckets {
        let flag = if b.discarded { " (discarded)" } else { "" };
        println!(
            "{:<12} {:>5} {:<13} {:>3}/{:<3} {:>14.1} {:>14.1} {:>10.3}{flag}",
            b.domain,
            b.size,
            b.planner,
            b.solved,
            b.instances,
            b.mean_expanded,
            b.geomean_expanded,
            b.mean_seconds
        );
    }
    for r in &s.reductions {
        println!(
            "{}: landmark search expands {:.1}% fewer nodes than blind search (sizes {:?})",
            r.domain,
            100.0 * r.reduction,
            r.sizes
        );
    }
    Ok(SOLVED)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR } else { SOLVED });
        }
    };
    let result = match &cli.command {
        Command::Plan {
            inputs,
            planner,
            budget_s,
            trace,
            metrics,
        } => plan(
            inputs,
            planner,
            *budget_s,
            trace.as_deref(),
            metrics.as_deref(),
        ),
        Command::Validate { inputs, trace } => validate_cmd(inputs, trace),
        Command::Landmarks { inputs, dot } => landmarks(inputs, dot.as_deref()),
        Command::Gen {
            domain,
            size,
            seed,
            out,
        } => generate(domain, *size, *seed, out),
        Command::Bench {
            config,
            out,
            full_scale,
        } => bench(config, out, *full_scale),
        Command::Summarize { input, csv, json } => summarize_cmd(input, csv.as_deref(), *json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
