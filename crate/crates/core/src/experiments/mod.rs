//! Monte-Carlo harness: sample `G(n, p)`, add it to a fixed base graph, run
//! the exact search, and aggregate into success curves, critical
//! probabilities and a fitted threshold exponent.
//!
//! Trials are independent tasks on a worker pool; results are collected in
//! `(n, p, trial)` order so output does not depend on the number of workers.

pub mod audit;
pub mod config;
pub mod rng;
pub mod stats;

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

pub use audit::{c_prime, lower_bound_audit, path_edge_audit, AuditReport, PathEdgeAudit};
pub use config::{BaseSpec, ExperimentConfig};
pub use rng::{sample_gnp, trial_seed};
pub use stats::{fit_threshold_exponent, wilson_interval, CurvePoint, ExponentFit};

use crate::error::{Error, Result};
use crate::gadgets::{lower_bound_graph, parse_ratio, LowerBoundSpec};
use crate::graph::Graph;
use crate::search::{contains_power_ham_cycle, count_cliques, SearchBudget, Verdict};

/// `K_ℓ` counts in the sampled random graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueAudit {
    pub total: u64,
    /// Copies inside a single part of the lower-bound graph.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intra_part: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub config_hash: String,
    pub n: usize,
    pub p: f64,
    pub trial: usize,
    pub seed: u64,
    pub verdict: &'static str,
    pub nodes_expanded: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique_audit: Option<CliqueAudit>,
}

/// The deterministic graph at one size.
#[derive(Clone, Debug)]
pub struct BaseGraph {
    pub graph: Graph,
    /// Part boundaries when the base is the lower-bound graph.
    pub parts: Option<Vec<std::ops::Range<usize>>>,
}

pub fn build_base(cfg: &ExperimentConfig, n: usize) -> Result<BaseGraph> {
    let params = cfg.params()?;
    Ok(match &cfg.base {
        BaseSpec::Empty => BaseGraph {
            graph: Graph::empty(n),
            parts: None,
        },
        BaseSpec::Complete => BaseGraph {
            graph: Graph::complete(n),
            parts: None,
        },
        BaseSpec::File { path } => {
            let graph = Graph::read_edge_list(path, false)?;
            if graph.n() != n {
                return Err(Error::SizeMismatch(graph.n(), n));
            }
            BaseGraph { graph, parts: None }
        }
        BaseSpec::LowerBound { eps } => {
            let spec = LowerBoundSpec::new(n, params.k, params.m(), parse_ratio(eps)?)?;
            let lb = lower_bound_graph(&spec)?;
            BaseGraph {
                graph: lb.graph,
                parts: Some(lb.parts),
            }
        }
    })
}

/// Runs one prepared trial.
fn trial_on_base(
    cfg: &ExperimentConfig,
    hash: &str,
    base: &BaseGraph,
    budget: &SearchBudget,
    n: usize,
    p: f64,
    trial: usize,
) -> Result<TrialRecord> {
    let params = cfg.params()?;
    let seed = trial_seed(cfg.run.seed, n, trial);
    let random = sample_gnp(n, p, seed);
    let union = base.graph.union(&random)?;
    let outcome = contains_power_ham_cycle(&union, params.m(), budget)?;
    let clique_audit = cfg.run.clique_audit.then(|| CliqueAudit {
        total: count_cliques(&random, params.l, u64::MAX).count,
        intra_part: base.parts.as_ref().map(|parts| {
            parts
                .iter()
                .map(|part| {
                    let ids: Vec<usize> = part.clone().collect();
                    count_cliques(&random.induced(&ids), params.l, u64::MAX).count
                })
                .sum()
        }),
    });
    Ok(TrialRecord {
        config_hash: hash.to_string(),
        n,
        p,
        trial,
        seed,
        verdict: outcome.verdict.token(),
        nodes_expanded: outcome.nodes_expanded,
        elapsed_ms: outcome.elapsed.map(|d| d.as_secs_f64() * 1e3),
        clique_audit,
    })
}

/// Builds the base graph, samples `G(n, p)` for trial `trial`, searches the
/// union for `C_n^m` and records the outcome.
pub fn run_trial(cfg: &ExperimentConfig, n: usize, p: f64, trial: usize) -> Result<TrialRecord> {
    cfg.validate()?;
    let base = build_base(cfg, n)?;
    trial_on_base(cfg, &cfg.hash(), &base, &cfg.budget()?, n, p, trial)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

fn point_from(n: usize, p: f64, records: &[TrialRecord]) -> CurvePoint {
    let count = |v: &str| records.iter().filter(|r| r.verdict == v).count();
    CurvePoint::new(
        n,
        p,
        count(Verdict::Found(vec![]).token()),
        count(Verdict::NotFound.token()),
        count(Verdict::Timeout.token()),
    )
}

/// Runs all trials for the given `(n, p)` pairs on `workers` threads.
///
/// With `timeout_limit = Some(k)`, remaining trials are skipped once more than
/// `k` have timed out and `None` is returned: the outcome is already decided.
fn run_points(
    cfg: &ExperimentConfig,
    bases: &[(usize, BaseGraph)],
    probes: &[(usize, f64)],
    workers: usize,
    timeout_limit: Option<usize>,
) -> Result<Option<(Vec<CurvePoint>, Vec<TrialRecord>)>> {
    let hash = cfg.hash();
    let budget = cfg.budget()?;
    let trials = cfg.run.trials;
    let tasks: Vec<(usize, f64, usize)> = probes
        .iter()
        .flat_map(|&(n, p)| (0..trials).map(move |t| (n, p, t)))
        .collect();
    let base_for = |n: usize| &bases.iter().find(|(bn, _)| *bn == n).expect("base built").1;
    let timeouts = AtomicUsize::new(0);
    let over = |count: usize| timeout_limit.is_some_and(|k| count > k);
    let results: Vec<Result<Option<TrialRecord>>> = pool(workers)?.install(|| {
        tasks
            .par_iter()
            .map(|&(n, p, t)| {
                if over(timeouts.load(Ordering::Relaxed)) {
                    return Ok(None);
                }
                let rec = trial_on_base(cfg, &hash, base_for(n), &budget, n, p, t)?;
                if rec.verdict == Verdict::Timeout.token() {
                    timeouts.fetch_add(1, Ordering::Relaxed);
                }
                Ok(Some(rec))
            })
            .collect()
    });
    let records = results.into_iter().collect::<Result<Vec<_>>>()?;
    if over(timeouts.into_inner()) {
        return Ok(None);
    }
    let records: Vec<TrialRecord> = records
        .into_iter()
        .map(|r| r.expect("not skipped"))
        .collect();
    let points = records
        .chunks(trials)
        .zip(probes)
        .map(|(chunk, &(n, p))| point_from(n, p, chunk))
        .collect();
    Ok(Some((points, records)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveRun {
    pub points: Vec<CurvePoint>,
    pub records: Vec<TrialRecord>,
}

/// One curve point per `(n, p)` of the grid.
pub fn success_curve(cfg: &ExperimentConfig, workers: usize) -> Result<CurveRun> {
    cfg.validate()?;
    let bases = cfg
        .model
        .n
        .iter()
        .map(|&n| Ok((n, build_base(cfg, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let probes: Vec<(usize, f64)> = cfg
        .model
        .n
        .iter()
        .flat_map(|&n| cfg.model.probabilities(n).into_iter().map(move |p| (n, p)))
        .collect();
    let (points, records) = run_points(cfg, &bases, &probes, workers, None)?.expect("no limit");
    Ok(CurveRun { points, records })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PHalf {
    pub n: usize,
    pub p_half: f64,
    pub bracket: (f64, f64),
    pub probes: Vec<CurvePoint>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

fn next_probe(lo: f64, hi: f64) -> f64 {
    if lo == 0.0 {
        hi / 2.0
    } else {
        (lo * hi).sqrt()
    }
}

/// Bisection for the probability at which the success rate crosses 1/2.
///
/// The bracket is multiplicative: once the lower end is positive, probes are
/// geometric midpoints and the search stops when `hi/lo − 1` drops below
/// `bisect.rel_width` (or after `bisect.max_iters` probes). While the lower
/// end is still 0 the upper end is halved.
pub fn find_p_half(cfg: &ExperimentConfig, n: usize, workers: usize) -> Result<PHalf> {
    cfg.validate()?;
    let b = cfg.bisect;
    let bases = vec![(n, build_base(cfg, n)?)];
    let mut probes = Vec::new();
    let mut records = Vec::new();
    // fraction of trials allowed to time out, as a count
    let limit = (b.max_timeout_rate * cfg.run.trials as f64).floor() as usize;
    let mut probe = |p: f64, probes: &mut Vec<CurvePoint>| -> Result<f64> {
        let Some((mut pts, recs)) = run_points(cfg, &bases, &[(n, p)], workers, Some(limit))?
        else {
            // stopped early: at least limit + 1 timeouts
            let rate = (limit + 1) as f64 / cfg.run.trials as f64;
            return Err(Error::ExcessiveTimeouts {
                p,
                rate,
                limit: b.max_timeout_rate,
            });
        };
        let pt = pts.pop().expect("one probe");
        records.extend(recs);
        let rate = pt.rate;
        let timeouts = pt.timeout_rate();
        probes.push(pt);
        if timeouts > b.max_timeout_rate {
            return Err(Error::ExcessiveTimeouts {
                p,
                rate: timeouts,
                limit: b.max_timeout_rate,
            });
        }
        Ok(rate.unwrap_or(f64::NAN))
    };
    let (mut lo, mut hi) = (b.p_lo, b.p_hi);
    let rate_lo = probe(lo, &mut probes)?;
    let rate_hi = probe(hi, &mut probes)?;
    if !(rate_lo < 0.5 && rate_hi >= 0.5) {
        return Err(Error::NonStraddling {
            p_lo: lo,
            p_hi: hi,
            rate_lo,
            rate_hi,
        });
    }
    for _ in 0..b.max_iters {
        if lo > 0.0 && hi / lo - 1.0 < b.rel_width {
            break;
        }
        let mid = next_probe(lo, hi);
        if probe(mid, &mut probes)? < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(PHalf {
        n,
        p_half: next_probe(lo, hi),
        bracket: (lo, hi),
        probes,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdScan {
    pub estimates: Vec<PHalf>,
    pub fit: ExponentFit,
}

/// `find_p_half` at every configured `n`, then the log-log fit.
pub fn threshold_scan(cfg: &ExperimentConfig, workers: usize) -> Result<ThresholdScan> {
    let estimates = cfg
        .model
        .n
        .iter()
        .map(|&n| find_p_half(cfg, n, workers))
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = estimates.iter().map(|e| (e.n as f64, e.p_half)).collect();
    let fit = fit_threshold_exponent(&pts)?;
    Ok(ThresholdScan { estimates, fit })
}

/// One JSON object per line.
pub fn write_jsonl<W: Write>(records: &[TrialRecord], mut w: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| Error::Io(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn jsonl_string(records: &[TrialRecord]) -> String {
    let mut buf = Vec::new();
    write_jsonl(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// CSV columns `n,p,successes,trials,timeouts,rate,ci_lo,ci_hi`.
pub fn write_summary_csv<W: Write>(points: &[CurvePoint], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    out.write_record([
        "n",
        "p",
        "successes",
        "trials",
        "timeouts",
        "rate",
        "ci_lo",
        "ci_hi",
    ])
    .map_err(io)?;
    for pt in points {
        out.write_record([
            pt.n.to_string(),
            pt.p.to_string(),
            pt.successes.to_string(),
            pt.trials.to_string(),
            pt.timeouts.to_string(),
            pt.rate.map(|r| r.to_string()).unwrap_or_default(),
            pt.ci_lo.to_string(),
            pt.ci_hi.to_string(),
        ])
        .map_err(io)?;
    }
    out.flush()?;
    Ok(())
}

/// Expected number of triangles `C(n,3) p³`.
pub fn expected_triangles(n: usize, p: f64) -> f64 {
    let n = n as f64;
    n * (n - 1.0) * (n - 2.0) / 6.0 * p.powi(3)
}
