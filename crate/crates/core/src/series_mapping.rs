// SPDX-License-Identifier: MIT OR Apache-2.0

//! Stage one: turn every series into one fixed-length vector.
//!
//! Each series is segmented, its segments are mapped to feature vectors and
//! Ward-clustered into `k` groups. Every group is summarized by its centroid
//! and by its highest-variance member. The summaries of all series are put
//! in a common order by matching their centroids against those of series 0,
//! and the series vector is
//!
//! ```text
//! [centroid_1 | extreme_1 | ... | centroid_k | extreme_k | MD | m]
//! ```
//!
//! of length `2·l·k + 2`, where `l = degree + 3` is the segment feature
//! width, `MD` is the MSE difference between the segment farthest from and
//! the segment closest to its own cluster centroid, and `m` the number of
//! segments.

use rayon::prelude::*;

use crate::dataset_io::{Dataset, TimeSeries};
use crate::error::{Error, Result};
use crate::hier_clustering::{squared_euclidean, ward_cluster};
use crate::segment_features::{map_segment, MappedSegment, NUM_STATISTICS};
use crate::segmentation::{segment_values, SegmentParams};

/// Centroid and most extreme member of one segment cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterSummary {
    pub centroid: Vec<f64>,
    /// Features of the member with the highest variance.
    pub extreme: Vec<f64>,
}

/// Stage-one result for one series, before cross-series alignment.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSummary {
    /// Exactly `k` summaries; the last is repeated when there are fewer
    /// segments than clusters.
    pub summaries: Vec<ClusterSummary>,
    pub md: f64,
    pub segment_count: usize,
}

/// The fixed-length representation of one series.
#[derive(Clone, Debug, PartialEq)]
pub struct MappedSeries {
    pub series_id: usize,
    pub vector: Vec<f64>,
}

/// Stage-one settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MappingConfig {
    pub sep_max: f64,
    pub degree: usize,
    /// Segment clusters per series.
    pub k: usize,
    /// Minimum segmentation window; `None` means `degree + 2`.
    pub min_len: Option<usize>,
}

impl MappingConfig {
    pub fn new(sep_max: f64, degree: usize, k: usize) -> Self {
        Self {
            sep_max,
            degree,
            k,
            min_len: None,
        }
    }

    fn segment_params(&self) -> SegmentParams {
        let params = SegmentParams::new(self.sep_max, self.degree);
        match self.min_len {
            Some(m) => params.with_min_len(m),
            None => params,
        }
    }

    /// Length of every mapped series vector.
    pub fn mapped_width(&self) -> usize {
        mapped_width(self.degree, self.k)
    }
}

/// `2·(degree + 3)·k + 2`.
pub fn mapped_width(degree: usize, k: usize) -> usize {
    2 * (degree + NUM_STATISTICS) * k + 2
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// Clusters the mapped segments of one series and summarizes the clusters.
pub fn summarize_series(segments: &[MappedSegment], k: usize) -> Result<SeriesSummary> {
    if segments.is_empty() {
        return Err(Error::invalid("a series needs at least one segment"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let points: Vec<Vec<f64>> = segments.iter().map(|s| s.features.clone()).collect();
    let groups = k.min(points.len());
    let partition = ward_cluster(&points, groups)?;

    let mut summaries: Vec<ClusterSummary> = (0..partition.k)
        .map(|c| {
            let extreme = partition
                .members(c)
                .into_iter()
                .map(|i| &segments[i])
                .fold(None::<&MappedSegment>, |best, s| match best {
                    Some(b) if b.variance() >= s.variance() => Some(b),
                    _ => Some(s),
                })
                .expect("clusters are non-empty");
            ClusterSummary {
                centroid: partition.centroids[c].clone(),
                extreme: extreme.features.clone(),
            }
        })
        .collect();
    while summaries.len() < k {
        let last = summaries.last().cloned().expect("at least one summary");
        summaries.push(last);
    }

    // First occurrence wins on ties, for both extremes.
    let mut farthest = (0usize, f64::NEG_INFINITY);
    let mut closest = (0usize, f64::INFINITY);
    for (i, (p, &c)) in points.iter().zip(&partition.assignment).enumerate() {
        let d = euclidean(p, &partition.centroids[c]);
        if d > farthest.1 {
            farthest = (i, d);
        }
        if d < closest.1 {
            closest = (i, d);
        }
    }
    let md = segments[farthest.0].mse() - segments[closest.0].mse();

    Ok(SeriesSummary {
        summaries,
        md,
        segment_count: segments.len(),
    })
}

/// Greedy centroid matching. Returns `perm` such that `other[perm[j]]` is
/// aligned with `reference[j]`: pairs are taken in ascending centroid
/// distance, ties by `(reference, other)` index.
pub fn match_centroids(reference: &[ClusterSummary], other: &[ClusterSummary]) -> Vec<usize> {
    let k = reference.len().min(other.len());
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(k * k);
    for (r, rs) in reference.iter().take(k).enumerate() {
        for (o, os) in other.iter().take(k).enumerate() {
            pairs.push((euclidean(&rs.centroid, &os.centroid), r, o));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut perm = vec![usize::MAX; k];
    let mut used = vec![false; k];
    for (_, r, o) in pairs {
        if perm[r] == usize::MAX && !used[o] {
            perm[r] = o;
            used[o] = true;
        }
    }
    perm
}

/// Segments, maps and summarizes one series.
pub fn summarize_time_series(series: &TimeSeries, config: &MappingConfig) -> Result<SeriesSummary> {
    let segments = segment_values(&series.values, config.segment_params())?;
    let mapped: Vec<MappedSegment> = segments
        .iter()
        .map(|s| map_segment(s, &series.values))
        .collect();
    summarize_series(&mapped, config.k)
}

fn assemble(series_id: usize, summary: &SeriesSummary, order: &[usize], width: usize) -> MappedSeries {
    let mut vector = Vec::with_capacity(width);
    for &j in order {
        vector.extend_from_slice(&summary.summaries[j].centroid);
        vector.extend_from_slice(&summary.summaries[j].extreme);
    }
    vector.push(summary.md);
    vector.push(summary.segment_count as f64);
    MappedSeries { series_id, vector }
}

/// Maps every series of `dataset`, aligned against series 0.
pub fn build_mapped_dataset(dataset: &Dataset, config: &MappingConfig) -> Result<Vec<MappedSeries>> {
    if dataset.is_empty() {
        return Err(Error::invalid("dataset has no series"));
    }
    let summaries = dataset
        .series
        .par_iter()
        .map(|s| summarize_time_series(s, config))
        .collect::<Result<Vec<_>>>()?;

    let width = config.mapped_width();
    let reference = &summaries[0].summaries;
    Ok(dataset
        .series
        .iter()
        .zip(&summaries)
        .map(|(series, summary)| {
            let order = match_centroids(reference, &summary.summaries);
            assemble(series.id, summary, &order, width)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::Segment;

    fn seg(features: Vec<f64>, mse: f64) -> MappedSegment {
        MappedSegment {
            features,
            segment: Segment {
                start: 0,
                end: 1,
                coefficients: vec![0.0, 0.0],
                sse: mse * 2.0,
                mse,
                sep: 0.0,
                degenerate: false,
            },
        }
    }

    fn summary(c: &[f64]) -> ClusterSummary {
        ClusterSummary {
            centroid: c.to_vec(),
            extreme: c.to_vec(),
        }
    }

    #[test]
    fn single_segment_is_duplicated() {
        let s = summarize_series(&[seg(vec![1.0, 2.0, 3.0, 4.0], 0.5)], 2).unwrap();
        assert_eq!(s.summaries.len(), 2);
        assert_eq!(s.summaries[0], s.summaries[1]);
        assert_eq!(s.md, 0.0);
        assert_eq!(s.segment_count, 1);
    }

    #[test]
    fn identical_segments_have_zero_md() {
        let a = seg(vec![1.0, 1.0, 0.0, 0.0], 0.25);
        let s = summarize_series(&[a.clone(), a], 2).unwrap();
        assert_eq!(s.md, 0.0);
    }

    #[test]
    fn empty_or_zero_k() {
        assert!(summarize_series(&[], 2).is_err());
        assert!(summarize_series(&[seg(vec![0.0; 4], 0.0)], 0).is_err());
    }

    #[test]
    fn matching_identity_and_swap() {
        let r = vec![summary(&[0.0, 0.0]), summary(&[5.0, 5.0])];
        assert_eq!(match_centroids(&r, &r), vec![0, 1]);
        let rev: Vec<_> = r.iter().rev().cloned().collect();
        assert_eq!(match_centroids(&r, &rev), vec![1, 0]);
    }

    #[test]
    fn width_formula() {
        assert_eq!(mapped_width(1, 2), 18);
        assert_eq!(mapped_width(2, 3), 32);
    }

    #[test]
    fn short_series_still_full_width() {
        let ds = Dataset::from_unlabeled("t", vec![vec![1.0], vec![1.0, 2.0, 3.0, 5.0, 4.0]]).unwrap();
        let cfg = MappingConfig::new(0.01, 1, 2);
        let mapped = build_mapped_dataset(&ds, &cfg).unwrap();
        assert!(mapped.iter().all(|m| m.vector.len() == 18));
        assert_eq!(mapped[0].vector[17], 1.0);
    }
}
