// SPDX-License-Identifier: MIT OR Apache-2.0

//! End-to-end runs: sweep the segmentation threshold, cluster the mapped
//! series into `L` groups for every threshold, score each clustering with
//! the internal indices and keep one according to a selection strategy.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::dataset_io::Dataset;
use crate::error::{Error, Result};
use crate::hier_clustering::{ward_cluster, Partition};
use crate::series_mapping::{build_mapped_dataset, MappingConfig};
use crate::validity::{evaluate, rand_index, IndexReport, InternalIndex, NsseDenominator};

/// `{10, 20, ..., 100}`.
pub fn default_grid() -> Vec<f64> {
    (1..=10).map(|i| 10.0 * i as f64).collect()
}

/// How the threshold is chosen from a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Largest Calinski–Harabasz index.
    Ch,
    /// Most internal indices in favour.
    MajorityVoting,
}

impl Strategy {
    pub fn method_name(self) -> &'static str {
        match self {
            Strategy::Ch => "ts3c_ch",
            Strategy::MajorityVoting => "ts3c_mv",
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ch" => Ok(Strategy::Ch),
            "mv" => Ok(Strategy::MajorityVoting),
            other => Err(Error::invalid(format!("unknown strategy {other:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Ch => "ch",
            Strategy::MajorityVoting => "mv",
        })
    }
}

/// Settings shared by every grid entry.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub grid: Vec<f64>,
    /// Number of final clusters.
    pub l: usize,
    /// Segment clusters per series.
    pub k: usize,
    pub degree: usize,
    pub min_len: Option<usize>,
    /// Z-score every mapped-series dimension before the final clustering.
    pub standardize: bool,
    pub nsse: NsseDenominator,
}

impl PipelineConfig {
    /// Default grid, `k = 2`, degree 1.
    pub fn new(l: usize) -> Self {
        Self {
            grid: default_grid(),
            l,
            k: 2,
            degree: 1,
            min_len: None,
            standardize: false,
            nsse: NsseDenominator::MeanPairwise,
        }
    }

    pub fn with_grid(mut self, grid: Vec<f64>) -> Self {
        self.grid = grid;
        self
    }

    /// `L` = number of classes of a labeled dataset.
    pub fn for_dataset(dataset: &Dataset) -> Self {
        Self::new(dataset.num_classes)
    }

    fn mapping(&self, sep_max: f64) -> MappingConfig {
        MappingConfig {
            sep_max,
            degree: self.degree,
            k: self.k,
            min_len: self.min_len,
        }
    }
}

/// What happened for one grid value.
#[derive(Clone, Debug, PartialEq)]
pub enum EntryOutcome {
    Scored {
        partition: Partition,
        report: IndexReport,
    },
    /// The final clustering could not be scored (e.g. coincident centroids).
    Skipped { partition: Partition, reason: String },
}

/// One grid value of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepEntry {
    pub sep_max: f64,
    pub outcome: EntryOutcome,
    pub wall_seconds: f64,
}

impl SweepEntry {
    pub fn partition(&self) -> &Partition {
        match &self.outcome {
            EntryOutcome::Scored { partition, .. } | EntryOutcome::Skipped { partition, .. } => {
                partition
            }
        }
    }

    pub fn report(&self) -> Option<&IndexReport> {
        match &self.outcome {
            EntryOutcome::Scored { report, .. } => Some(report),
            EntryOutcome::Skipped { .. } => None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        self.report().is_none()
    }
}

/// Column-wise z-scores; constant columns become 0.
pub fn standardize_columns(vectors: &mut [Vec<f64>]) {
    let Some(dim) = vectors.first().map(Vec::len) else {
        return;
    };
    let n = vectors.len() as f64;
    for d in 0..dim {
        let mean = vectors.iter().map(|v| v[d]).sum::<f64>() / n;
        let sd = (vectors.iter().map(|v| (v[d] - mean).powi(2)).sum::<f64>() / n).sqrt();
        for v in vectors.iter_mut() {
            v[d] = if sd > 0.0 { (v[d] - mean) / sd } else { 0.0 };
        }
    }
}

/// The stage-two input for one threshold.
pub fn mapped_points(dataset: &Dataset, sep_max: f64, config: &PipelineConfig) -> Result<Vec<Vec<f64>>> {
    let mut points: Vec<Vec<f64>> = build_mapped_dataset(dataset, &config.mapping(sep_max))?
        .into_iter()
        .map(|m| m.vector)
        .collect();
    if config.standardize {
        standardize_columns(&mut points);
    }
    Ok(points)
}

fn sweep_entry(dataset: &Dataset, sep_max: f64, config: &PipelineConfig) -> Result<SweepEntry> {
    let started = Instant::now();
    let points = mapped_points(dataset, sep_max, config)?;
    let partition = ward_cluster(&points, config.l)?;
    let outcome = match evaluate(&points, &partition, config.nsse) {
        Ok(report) => EntryOutcome::Scored { partition, report },
        Err(e @ Error::DegeneratePartition(_)) => EntryOutcome::Skipped {
            partition,
            reason: e.to_string(),
        },
        Err(e) => return Err(e),
    };
    Ok(SweepEntry {
        sep_max,
        outcome,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Runs the mapping, final clustering and scoring for every grid value, in
/// grid order.
pub fn sweep(dataset: &Dataset, config: &PipelineConfig) -> Result<Vec<SweepEntry>> {
    if config.grid.is_empty() {
        return Err(Error::invalid("the threshold grid is empty"));
    }
    if config.l < 2 {
        return Err(Error::invalid(format!("L must be at least 2, got {}", config.l)));
    }
    if config.l > dataset.len() {
        return Err(Error::Pipeline(format!(
            "cannot form {} clusters from {} series",
            config.l,
            dataset.len()
        )));
    }
    config
        .grid
        .iter()
        .map(|&sep_max| sweep_entry(dataset, sep_max, config))
        .collect()
}

fn scored(entries: &[SweepEntry]) -> Result<Vec<(usize, &IndexReport)>> {
    let s: Vec<_> = entries
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.report().map(|r| (i, r)))
        .collect();
    if s.is_empty() {
        return Err(Error::Pipeline("every sweep entry was skipped".into()));
    }
    Ok(s)
}

/// Among the scored entries, the one `index` rates best; ties go to the
/// smaller threshold.
fn best_for(entries: &[SweepEntry], candidates: &[(usize, &IndexReport)], index: InternalIndex) -> usize {
    let mut best = candidates[0];
    for &(i, r) in &candidates[1..] {
        let (v, bv) = (r.get(index), best.1.get(index));
        let tied = v == bv || (v.is_nan() && bv.is_nan());
        if (index.better(v, bv) || bv.is_nan() && !v.is_nan())
            || (tied && entries[i].sep_max < entries[best.0].sep_max)
        {
            best = (i, r);
        }
    }
    best.0
}

/// Index of the entry with maximal CH (smaller threshold on ties).
pub fn select_ch(entries: &[SweepEntry]) -> Result<usize> {
    let candidates = scored(entries)?;
    Ok(best_for(entries, &candidates, InternalIndex::Ch))
}

/// Votes per entry: every internal index gives one vote to the entry it
/// rates best. Skipped entries get none.
pub fn vote_counts(entries: &[SweepEntry]) -> Result<Vec<usize>> {
    let candidates = scored(entries)?;
    let mut votes = vec![0; entries.len()];
    for index in InternalIndex::ALL {
        votes[best_for(entries, &candidates, index)] += 1;
    }
    Ok(votes)
}

/// Index of the entry with the most votes; ties go to higher CH, then to
/// the smaller threshold.
pub fn select_majority_voting(entries: &[SweepEntry]) -> Result<usize> {
    let votes = vote_counts(entries)?;
    let candidates = scored(entries)?;
    let mut best = candidates[0];
    for &(i, r) in &candidates[1..] {
        let (b, br) = best;
        let wins = votes[i] > votes[b]
            || (votes[i] == votes[b]
                && (r.ch > br.ch || (r.ch == br.ch && entries[i].sep_max < entries[b].sep_max)));
        if wins {
            best = (i, r);
        }
    }
    Ok(best.0)
}

pub fn select(entries: &[SweepEntry], strategy: Strategy) -> Result<usize> {
    match strategy {
        Strategy::Ch => select_ch(entries),
        Strategy::MajorityVoting => select_majority_voting(entries),
    }
}

/// Result of a full run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub strategy: Strategy,
    /// Position of the chosen entry in `entries`.
    pub chosen: usize,
    /// Rand index of the chosen clustering against the labels, if any.
    pub ri: Option<f64>,
    pub entries: Vec<SweepEntry>,
    pub wall_seconds: f64,
}

impl RunResult {
    pub fn chosen(&self) -> &SweepEntry {
        &self.entries[self.chosen]
    }
}

/// Sweep, select and score against ground truth when it exists.
pub fn run(dataset: &Dataset, strategy: Strategy, config: &PipelineConfig) -> Result<RunResult> {
    let started = Instant::now();
    let entries = sweep(dataset, config)?;
    let chosen = select(&entries, strategy)?;
    let ri = match dataset.labels() {
        Some(labels) => Some(rand_index(&entries[chosen].partition().assignment, &labels)?),
        None => None,
    };
    Ok(RunResult {
        strategy,
        chosen,
        ri,
        entries,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}
