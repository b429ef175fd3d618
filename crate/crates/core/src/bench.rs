//! Experiment battery over random chordal instances and the reference bound
//! curves, both emitted as CSV.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::graph_stats;
use crate::instances::random_chordal;
use crate::oracle::{GroundTruth, Responder};
use crate::sepsys::{
    best_known_upper_bound, build_separating_system, chromatic_lower_bound, info_lower_bound,
    katona_lower_bound,
};
use crate::strategies::{Strategy, StrategyError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance {instance} (seed {seed}), strategy {strategy}: {source}")]
    Strategy {
        instance: usize,
        seed: u64,
        strategy: Strategy,
        source: StrategyError,
    },
    #[error("instance {instance} (seed {seed}): {strategy} learned a graph different from the ground truth")]
    Mismatch {
        instance: usize,
        seed: u64,
        strategy: Strategy,
    },
    #[error("instance {instance} (seed {seed}): generated skeleton is not chordal")]
    NotChordal { instance: usize, seed: u64 },
    #[error("invalid range {0:?}")]
    Range(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug)]
pub struct BatteryConfig {
    pub n: usize,
    pub k: usize,
    pub densities: Vec<f64>,
    /// Instances per density.
    pub trials: usize,
    pub seed: u64,
    pub strategies: Vec<Strategy>,
    /// Record wall-clock time per run. Off by default so that output is
    /// byte-identical across runs.
    pub timing: bool,
}

/// One row per (instance, strategy).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub instance_id: usize,
    pub n: usize,
    pub k: usize,
    pub chi: usize,
    pub alpha: usize,
    pub strategy: String,
    pub interventions_used: usize,
    pub node_accesses: usize,
    /// `chi / (2k)`
    pub info_lb: f64,
    pub chromatic_lb: Option<f64>,
    pub katona_lb_n: Option<f64>,
    pub sepsys_size_chi: Option<usize>,
    pub sepsys_size_n: Option<usize>,
    pub wall_time_ms: f64,
}

/// Mixes the battery seed with an instance id (splitmix64 finalizer).
pub fn derive_seed(seed: u64, id: usize) -> u64 {
    let mut z = seed ^ (id as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs every strategy on one instance, verifying each result.
pub fn run_instance(
    config: &BatteryConfig,
    instance: usize,
    density: f64,
) -> Result<Vec<TrialRecord>, BenchError> {
    let seed = derive_seed(config.seed, instance);
    let inst = random_chordal(config.n, density, seed);
    let g = inst.skeleton();
    let stats = graph_stats(g).map_err(|_| BenchError::NotChordal { instance, seed })?;
    let (n, k, chi) = (config.n, config.k, stats.chi);
    let sepsys_n = build_separating_system(n, k).ok().map(|s| s.len());
    let sepsys_chi = build_separating_system(chi, k).ok().map(|s| s.len());
    let mut out = Vec::with_capacity(config.strategies.len());
    for &strategy in &config.strategies {
        let mut oracle = GroundTruth::new(inst.dag.clone(), k);
        let start = Instant::now();
        let result = strategy
            .run(g.clone(), k, &mut oracle, seed)
            .map_err(|source| BenchError::Strategy {
                instance,
                seed,
                strategy,
                source,
            })?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        if &result.final_pdag != inst.dag.as_pdag() {
            return Err(BenchError::Mismatch {
                instance,
                seed,
                strategy,
            });
        }
        out.push(TrialRecord {
            instance_id: instance,
            n,
            k,
            chi,
            alpha: stats.alpha,
            strategy: strategy.name().to_string(),
            interventions_used: result.interventions_used,
            node_accesses: oracle.node_accesses(),
            info_lb: info_lower_bound(chi, k),
            chromatic_lb: chromatic_lower_bound(chi, k).ok(),
            katona_lb_n: katona_lower_bound(n, k).ok(),
            sepsys_size_chi: sepsys_chi,
            sepsys_size_n: sepsys_n,
            wall_time_ms: if config.timing { elapsed } else { 0.0 },
        });
    }
    Ok(out)
}

/// Generates `trials` instances per density and runs every strategy on each,
/// in parallel. Rows come back ordered by (instance id, strategy order).
pub fn run_battery(config: &BatteryConfig) -> Result<Vec<TrialRecord>, BenchError> {
    let jobs: Vec<(usize, f64)> = config
        .densities
        .iter()
        .flat_map(|&d| std::iter::repeat_n(d, config.trials))
        .enumerate()
        .collect();
    let rows: Vec<Vec<TrialRecord>> = jobs
        .par_iter()
        .map(|&(id, d)| run_instance(config, id, d))
        .collect::<Result<_, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Reference series per clique size.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub chi: usize,
    /// `chi / (2k)`
    pub info_lb: f64,
    /// entropic bound on the largest clique
    pub chromatic_lb: Option<f64>,
    /// best known `(chi, k)` separating system size
    pub clique_sepsys_achievable: Option<usize>,
    /// size of this crate's `(chi, k)` construction
    pub clique_sepsys_ours: Option<usize>,
    /// best known `(n, k)` separating system size
    pub sepsys_ub_n: Option<usize>,
    /// size of this crate's `(n, k)` construction
    pub sepsys_size_n: Option<usize>,
    pub note: String,
}

pub fn bound_curves(chi_lo: usize, chi_hi: usize, n: usize, k: usize) -> Vec<BoundRow> {
    let ub_n = best_known_upper_bound(n, k);
    let ours_n = build_separating_system(n, k);
    (chi_lo..=chi_hi)
        .map(|chi| {
            let mut notes = Vec::new();
            let chromatic = chromatic_lower_bound(chi, k);
            let achievable = best_known_upper_bound(chi, k);
            let ours = build_separating_system(chi, k);
            if let Err(e) = &chromatic {
                notes.push(e.to_string());
            }
            if let Err(e) = &ours {
                notes.push(e.to_string());
            }
            if let Err(e) = &ours_n {
                notes.push(e.to_string());
            }
            notes.dedup();
            BoundRow {
                chi,
                info_lb: info_lower_bound(chi, k),
                chromatic_lb: chromatic.ok(),
                clique_sepsys_achievable: achievable.ok(),
                clique_sepsys_ours: ours.ok().map(|s| s.len()),
                sepsys_ub_n: ub_n.clone().ok(),
                sepsys_size_n: ours_n.as_ref().ok().map(|s| s.len()),
                note: notes.join("; "),
            }
        })
        .collect()
}

/// Writes rows with a header. With no rows the header is still written.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], header: &[&str], out: W) -> Result<(), BenchError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub const TRIAL_HEADER: [&str; 14] = [
    "instance_id",
    "n",
    "k",
    "chi",
    "alpha",
    "strategy",
    "interventions_used",
    "node_accesses",
    "info_lb",
    "chromatic_lb",
    "katona_lb_n",
    "sepsys_size_chi",
    "sepsys_size_n",
    "wall_time_ms",
];

pub const BOUND_HEADER: [&str; 8] = [
    "chi",
    "info_lb",
    "chromatic_lb",
    "clique_sepsys_achievable",
    "clique_sepsys_ours",
    "sepsys_ub_n",
    "sepsys_size_n",
    "note",
];

pub fn trials_csv(rows: &[TrialRecord]) -> Result<String, BenchError> {
    let mut buf = Vec::new();
    write_csv(rows, &TRIAL_HEADER, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn bounds_csv(rows: &[BoundRow]) -> Result<String, BenchError> {
    let mut buf = Vec::new();
    write_csv(rows, &BOUND_HEADER, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Parses `start:stop:step` (inclusive) into a list of values.
pub fn parse_float_range(s: &str) -> Result<Vec<f64>, BenchError> {
    let bad = || BenchError::Range(s.to_string());
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x] => Ok(vec![x]),
        [a, b, step] if step > 0.0 && a <= b => {
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| a + i as f64 * step).collect())
        }
        _ => Err(bad()),
    }
}

/// Parses `lo:hi` (inclusive) or a single integer.
pub fn parse_int_range(s: &str) -> Result<(usize, usize), BenchError> {
    let bad = || BenchError::Range(s.to_string());
    let parts: Vec<usize> = s
        .split(':')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x] => Ok((x, x)),
        [a, b] if a <= b => Ok((a, b)),
        _ => Err(bad()),
    }
}

/// Nearest multiple of ten, used to bin instances by realized clique size.
pub fn chi_bucket(chi: usize) -> usize {
    (chi + 5) / 10 * 10
}

/// Mean interventions per (chi bucket, strategy), sorted by bucket then name.
pub fn bucket_means(rows: &[TrialRecord]) -> Vec<(usize, String, f64, usize)> {
    let mut acc: std::collections::BTreeMap<(usize, String), (usize, usize)> = Default::default();
    for r in rows {
        let e = acc
            .entry((chi_bucket(r.chi), r.strategy.clone()))
            .or_default();
        e.0 += r.interventions_used;
        e.1 += 1;
    }
    acc.into_iter()
        .map(|((b, s), (sum, cnt))| (b, s, sum as f64 / cnt as f64, cnt))
        .collect()
}
