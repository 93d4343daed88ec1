use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::runner::ResultRecord;

/// Aggregates for one (domain, size, planner) bucket.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BucketSummary {
    pub domain: String,
    pub size: usize,
    pub planner: String,
    pub instances: usize,
    pub solved: usize,
    /// Some instance in the bucket went unsolved; such buckets are left out
    /// of comparisons.
    pub discarded: bool,
    pub mean_expanded: f64,
    /// Shifted geometric mean: exp(mean(ln(x + 1))) - 1, so trivial
    /// instances with zero expansions do not zero the mean.
    pub geomean_expanded: f64,
    pub mean_seconds: f64,
    pub geomean_seconds: f64,
}

/// Relative reduction in mean expansions of the landmark-guided search over
/// blind search, on sizes where neither bucket is discarded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub domain: String,
    pub sizes: Vec<usize>,
    pub mean_blind: f64,
    pub mean_landmarks: f64,
    /// 1 - mean_landmarks / mean_blind.
    pub reduction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub buckets: Vec<BucketSummary>,
    pub reductions: Vec<Reduction>,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

fn shifted_geomean(xs: &[f64], shift: f64) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    (xs.iter().map(|x| (x + shift).ln()).sum::<f64>() / xs.len() as f64).exp() - shift
}

pub fn summarize(records: &[ResultRecord]) -> Summary {
    let mut groups: BTreeMap<(String, usize, String), Vec<&ResultRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.domain.clone(), r.size, r.planner.clone()))
            .or_default()
            .push(r);
    }
    let buckets: Vec<BucketSummary> = groups
        .into_iter()
        .map(|((domain, size, planner), rs)| {
            let expanded: Vec<f64> = rs.iter().map(|r| r.expanded as f64).collect();
            let seconds: Vec<f64> = rs.iter().map(|r| r.total_seconds).collect();
            let solved = rs.iter().filter(|r| r.solved).count();
            BucketSummary {
                domain,
                size,
                planner,
                instances: rs.len(),
                solved,
                discarded: solved < rs.len(),
                mean_expanded: mean(&expanded),
                geomean_expanded: shifted_geomean(&expanded, 1.0),
                mean_seconds: mean(&seconds),
                geomean_seconds: shifted_geomean(&seconds, 1.0),
            }
        })
        .collect();

    let mut reductions = Vec::new();
    let mut domains: Vec<&str> = buckets.iter().map(|b| b.domain.as_str()).collect();
    domains.dedup();
    for d in domains {
        let find = |size: usize, planner: &str| {
            buckets
                .iter()
                .find(|b| b.domain == d && b.size == size && b.planner == planner)
        };
        let mut sizes = Vec::new();
        let (mut blind, mut hl) = (Vec::new(), Vec::new());
        for b in buckets
            .iter()
            .filter(|b| b.domain == d && b.planner == "hopgdp_blind")
        {
            if let Some(h) = find(b.size, "hopgdp") {
                if !b.discarded && !h.discarded {
                    sizes.push(b.size);
                    blind.extend(records_of(records, d, b.size, "hopgdp_blind"));
                    hl.extend(records_of(records, d, b.size, "hopgdp"));
                }
            }
        }
        if sizes.is_empty() {
            continue;
        }
        let (mb, mh) = (mean(&blind), mean(&hl));
        let reduction = if mb > 0.0 { 1.0 - mh / mb } else { 0.0 };
        reductions.push(Reduction {
            domain: d.to_string(),
            sizes,
            mean_blind: mb,
            mean_landmarks: mh,
            reduction,
        });
    }
    Summary {
        buckets,
        reductions,
    }
}

fn records_of<'a>(
    records: &'a [ResultRecord],
    domain: &'a str,
    size: usize,
    planner: &'a str,
) -> impl Iterator<Item = f64> + 'a {
    records
        .iter()
        .filter(move |r| r.domain == domain && r.size == size && r.planner == planner)
        .map(|r| r.expanded as f64)
}

pub const CSV_HEADER: &str = "domain,size,planner,instances,solved,discarded,mean_expanded,geomean_expanded,mean_seconds,geomean_seconds";

pub fn to_csv(buckets: &[BucketSummary]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for b in buckets {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            b.domain,
            b.size,
            b.planner,
            b.instances,
            b.solved,
            b.discarded,
            b.mean_expanded,
            b.geomean_expanded,
            b.mean_seconds,
            b.geomean_seconds
        )
        .unwrap();
    }
    out
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct CsvError {
    pub line: usize,
    pub message: String,
}

pub fn from_csv(text: &str) -> Result<Vec<BucketSummary>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => {
            return Err(CsvError {
                line: 1,
                message: "unexpected header".into(),
            })
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let bad = |m: &str| CsvError {
            line: i + 1,
            message: m.to_string(),
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(bad("expected 10 fields"));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad("bad integer"));
        out.push(BucketSummary {
            domain: f[0].to_string(),
            size: int(f[1])?,
            planner: f[2].to_string(),
            instances: int(f[3])?,
            solved: int(f[4])?,
            discarded: f[5].parse().map_err(|_| bad("bad flag"))?,
            mean_expanded: num(f[6])?,
            geomean_expanded: num(f[7])?,
            mean_seconds: num(f[8])?,
            geomean_seconds: num(f[9])?,
        });
    }
    Ok(out)
}
