use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::domains::bundle;
use super::generators::GeneratorRegistry;
use crate::search::{Budget, Outcome, PlannerRegistry};
use crate::task::HgnProblem;

fn default_time() -> f64 {
    120.0
}

fn default_memory() -> usize {
    1 << 30
}

fn default_workers() -> usize {
    1
}

/// An experiment: every planner on every generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: String,
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub seed: u64,
    pub planners: Vec<String>,
    #[serde(default = "default_time")]
    pub time_budget_s: f64,
    #[serde(default = "default_memory")]
    pub memory_budget_bytes: usize,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Node cap for the classical baseline, as a multiple of the blind
    /// goal-network search's expansions on the same instance.
    #[serde(default)]
    pub baseline_expansion_factor: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("sizes must be positive")]
    Size,
    #[error("instances must be at least 1")]
    Instances,
    #[error("unknown domain `{0}`")]
    Domain(String),
    #[error("unknown planner `{0}`")]
    Planner(String),
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if self.sizes.contains(&0) {
            return Err(ConfigError::Size);
        }
        if self.instances == 0 {
            return Err(ConfigError::Instances);
        }
        if GeneratorRegistry::default().get(&self.domain).is_none() {
            return Err(ConfigError::Domain(self.domain.clone()));
        }
        let reg = PlannerRegistry::default();
        for p in &self.planners {
            if reg.get(p).is_none() {
                return Err(ConfigError::Planner(p.clone()));
            }
        }
        Ok(())
    }

    /// Long budgets: 25 minutes, 4 GB.
    pub fn full_scale(mut self) -> ExperimentConfig {
        self.time_budget_s = 1500.0;
        self.memory_budget_bytes = 4 << 30;
        self
    }

    pub fn instance_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub domain: String,
    pub size: usize,
    pub instance: usize,
    pub planner: String,
    pub solved: bool,
    /// Exact cost as a string (`7` or `7/2`).
    pub cost: Option<String>,
    pub expanded: u64,
    pub generated: u64,
    pub total_seconds: f64,
    pub heuristic_seconds: f64,
    /// `time`, `expansions` or `memory` when the run hit a budget.
    #[serde(default)]
    pub aborted: Option<String>,
}

impl ResultRecord {
    fn key(&self) -> (usize, usize, String) {
        (self.size, self.instance, self.planner.clone())
    }
}

pub const RESULTS_FILE: &str = "results.jsonl";

pub fn read_records(path: &Path) -> std::io::Result<Vec<ResultRecord>> {
    let mut out = Vec::new();
    if !path.exists() {
        return Ok(out);
    }
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        // A torn last line from an interrupted run is skipped and redone.
        if let Ok(r) = serde_json::from_str(&line) {
            out.push(r);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
struct Job {
    size: usize,
    instance: usize,
    planner: String,
}

fn run_job(cfg: &ExperimentConfig, job: &Job, blind_expanded: Option<u64>) -> ResultRecord {
    let generated = GeneratorRegistry::default()
        .get(&cfg.domain)
        .expect("domain checked")
        .generate(job.size, cfg.instance_seed(job.instance));
    let b = bundle(&cfg.domain).expect("every generator has a bundle");
    let p = HgnProblem::from_texts(b.domain, &generated.problem, Some(b.methods))
        .expect("generated problems parse");
    let reg = PlannerRegistry::default();
    let planner = reg.get(&job.planner).expect("planner checked");
    let mut budget = Budget::seconds(cfg.time_budget_s).with_memory(cfg.memory_budget_bytes);
    if let (Some(f), Some(n)) = (cfg.baseline_expansion_factor, blind_expanded) {
        budget = budget.with_max_expansions(n.saturating_mul(f).max(1));
    }
    let r = planner.solve(&p, budget);
    let aborted = match &r.outcome {
        Outcome::Aborted(reason) => Some(
            serde_json::to_value(reason)
                .unwrap()
                .as_str()
                .unwrap()
                .to_string(),
        ),
        _ => None,
    };
    ResultRecord {
        domain: cfg.domain.clone(),
        size: job.size,
        instance: job.instance,
        planner: planner.name().to_string(),
        solved: r.solution().is_some(),
        cost: r.solution().map(|s| s.cost.to_string()),
        expanded: r.metrics.expanded,
        generated: r.metrics.generated,
        total_seconds: r.metrics.total_seconds,
        heuristic_seconds: r.metrics.heuristic_seconds,
        aborted,
    }
}

/// Runs every (planner, instance) job not already recorded in
/// `out_dir/results.jsonl`, appending each record as it finishes. Returns
/// all records for the configuration, in job order.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out_dir: &Path,
) -> std::io::Result<Vec<ResultRecord>> {
    std::fs::create_dir_all(out_dir)?;
    let path: PathBuf = out_dir.join(RESULTS_FILE);
    let existing = read_records(&path)?;
    let reg = PlannerRegistry::default();
    let planners: Vec<String> = cfg
        .planners
        .iter()
        .map(|p| {
            reg.get(p)
                .map(|p| p.name().to_string())
                .unwrap_or(p.clone())
        })
        .collect();
    let done: HashSet<_> = existing
        .iter()
        .filter(|r| r.domain == cfg.domain)
        .map(|r| r.key())
        .collect();

    // The classical baseline's node cap depends on the blind run, so blind
    // jobs go first when a cap is configured.
    let capped = cfg.baseline_expansion_factor.is_some();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for &size in &cfg.sizes {
        for instance in 0..cfg.instances {
            for planner in &planners {
                let job = Job {
                    size,
                    instance,
                    planner: planner.clone(),
                };
                if done.contains(&(size, instance, planner.clone())) {
                    continue;
                }
                if capped && planner == "astar_hl" {
                    second.push(job);
                } else {
                    first.push(job);
                }
            }
        }
    }

    let file = OpenOptions::new().create(true).append(true).open(&path)?;
    let appender = Mutex::new(file);
    let mut all = existing;
    for batch in [first, second] {
        let blind: Vec<ResultRecord> = all
            .iter()
            .filter(|r| r.domain == cfg.domain && r.planner == "hopgdp_blind")
            .cloned()
            .collect();
        let queue = Mutex::new(batch.into_iter());
        let (tx, rx) = mpsc::channel::<ResultRecord>();
        std::thread::scope(|scope| -> std::io::Result<()> {
            for _ in 0..cfg.workers.max(1) {
                let tx = tx.clone();
                let queue = &queue;
                let blind = &blind;
                scope.spawn(move || loop {
                    let Some(job) = queue.lock().unwrap().next() else {
                        break;
                    };
                    let cap = blind
                        .iter()
                        .find(|r| r.size == job.size && r.instance == job.instance)
                        .map(|r| r.expanded);
                    if tx.send(run_job(cfg, &job, cap)).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            for record in rx {
                let mut f = appender.lock().unwrap();
                writeln!(f, "{}", serde_json::to_string(&record).unwrap())?;
                f.flush()?;
                all.push(record);
            }
            Ok(())
        })?;
    }

    let order = |r: &ResultRecord| {
        let pi = planners
            .iter()
            .position(|p| *p == r.planner)
            .unwrap_or(usize::MAX);
        let si = cfg
            .sizes
            .iter()
            .position(|s| *s == r.size)
            .unwrap_or(usize::MAX);
        (si, r.instance, pi)
    };
    let mut out: Vec<ResultRecord> = all
        .into_iter()
        .filter(|r| {
            r.domain == cfg.domain
                && cfg.sizes.contains(&r.size)
                && r.instance < cfg.instances
                && planners.contains(&r.planner)
        })
        .collect();
    out.sort_by_key(order);
    Ok(out)
}
