// SPDX-License-Identifier: MIT OR Apache-2.0

//! Raw-series distances and the DD_DTW hierarchical-clustering baseline.
//!
//! `dd_dtw(x, y, α) = (1 − α)·DTW(x, y) + α·DTW(x', y')`, where `x'` is the
//! derivative estimate of `x`. The baseline clusters a dataset with average
//! linkage on the DD_DTW matrix for every α in a grid and keeps the α whose
//! clustering has the largest medoid-based intergroup variance.

use rayon::prelude::*;

use crate::dataset_io::Dataset;
use crate::error::{Error, Result};
use crate::hier_clustering::{condensed_index, linkage, Linkage, Partition};

/// Symmetric, zero-diagonal matrix of non-negative dissimilarities, stored
/// as its strict upper triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    condensed: Vec<f64>,
}

impl DistanceMatrix {
    /// Fills the matrix with `f(i, j)` for `i < j`, computing rows in
    /// parallel.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<f64> + Sync,
    {
        let rows = (0..n)
            .into_par_iter()
            .map(|i| ((i + 1)..n).map(|j| f(i, j)).collect::<Result<Vec<f64>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            condensed: rows.into_iter().flatten().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.condensed[condensed_index(self.n, i, j)],
            std::cmp::Ordering::Greater => self.condensed[condensed_index(self.n, j, i)],
        }
    }

    pub fn condensed(&self) -> &[f64] {
        &self.condensed
    }

    /// `(1 − α)·self + α·other`, cell by cell.
    pub fn blend(&self, other: &Self, alpha: f64) -> Self {
        Self {
            n: self.n,
            condensed: self
                .condensed
                .iter()
                .zip(&other.condensed)
                .map(|(a, b)| (1.0 - alpha) * a + alpha * b)
                .collect(),
        }
    }
}

/// Euclidean distance between equal-length series.
pub fn euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "euclidean distance needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
}

/// Dynamic time warping: square root of the minimal summed squared
/// difference over monotone, contiguous warping paths from `(0, 0)` to
/// `(n-1, m-1)`. `band` restricts the path to `|i − j| ≤ band`.
pub fn dtw(x: &[f64], y: &[f64], band: Option<usize>) -> Result<f64> {
    let (n, m) = (x.len(), y.len());
    if n == 0 || m == 0 {
        return Err(Error::invalid("dtw needs non-empty series"));
    }
    let w = band.unwrap_or(usize::MAX);
    if n.abs_diff(m) > w {
        return Err(Error::invalid(format!(
            "band {w} admits no warping path between lengths {n} and {m}"
        )));
    }

    let mut prev = vec![f64::INFINITY; m + 1];
    let mut curr = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for i in 1..=n {
        curr.fill(f64::INFINITY);
        let lo = (i - 1).saturating_sub(w);
        let hi = (i - 1).saturating_add(w).min(m - 1);
        for j in lo..=hi {
            let cost = (x[i - 1] - y[j]).powi(2);
            let best = prev[j].min(prev[j + 1]).min(curr[j]);
            curr[j + 1] = cost + best;
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    Ok(prev[m].sqrt())
}

/// Derivative estimate `((x_i − x_{i−1}) + (x_{i+1} − x_{i−1})/2) / 2` at
/// interior points; each endpoint copies its neighbour.
pub fn derivative_series(x: &[f64]) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 3 {
        return Err(Error::invalid(format!(
            "derivative estimate needs at least 3 points, got {n}"
        )));
    }
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        d[i] = ((x[i] - x[i - 1]) + (x[i + 1] - x[i - 1]) / 2.0) / 2.0;
    }
    d[0] = d[1];
    d[n - 1] = d[n - 2];
    Ok(d)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::invalid(format!("alpha {alpha} outside [0, 1]")));
    }
    Ok(())
}

/// `(1 − α)·DTW(x, y) + α·DTW(x', y')`.
pub fn dd_dtw(x: &[f64], y: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let raw = dtw(x, y, None)?;
    let deriv = dtw(&derivative_series(x)?, &derivative_series(y)?, None)?;
    Ok((1.0 - alpha) * raw + alpha * deriv)
}

/// Index of the item minimizing the summed distance to `items`; ties go to
/// the earliest item.
fn medoid(d: &DistanceMatrix, items: &[usize]) -> usize {
    let mut best = (items[0], f64::INFINITY);
    for &i in items {
        let total: f64 = items.iter().map(|&j| d.get(i, j)).sum();
        if total < best.1 {
            best = (i, total);
        }
    }
    best.0
}

/// Medoid-based intergroup variance `Σ_l |G_l|·d(medoid_l, medoid)²`.
pub fn intergroup_variance(d: &DistanceMatrix, partition: &Partition) -> f64 {
    let all: Vec<usize> = (0..d.len()).collect();
    let global = medoid(d, &all);
    (0..partition.k)
        .map(|c| {
            let members = partition.members(c);
            let m = medoid(d, &members);
            members.len() as f64 * d.get(m, global).powi(2)
        })
        .sum()
}

/// Average-linkage clustering of a distance matrix into `l` groups.
pub fn cluster_matrix(d: &DistanceMatrix, l: usize) -> Result<Partition> {
    linkage(d.condensed(), d.len(), Linkage::Average)?.cut(l)
}

/// Outcome of the DD_DTW baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct BaselineResult {
    pub partition: Partition,
    pub alpha: f64,
    pub intergroup_variance: f64,
}

/// `alpha` grid `0, 0.01, ..., 1`.
pub fn default_alpha_grid() -> Vec<f64> {
    (0..=100).map(|i| i as f64 / 100.0).collect()
}

/// DTW and derivative-DTW matrices of a dataset.
pub fn dtw_matrices(dataset: &Dataset) -> Result<(DistanceMatrix, DistanceMatrix)> {
    let series = &dataset.series;
    let derivs = series
        .iter()
        .map(|s| derivative_series(&s.values))
        .collect::<Result<Vec<_>>>()?;
    let raw = DistanceMatrix::from_fn(series.len(), |i, j| {
        dtw(&series[i].values, &series[j].values, None)
    })?;
    let deriv = DistanceMatrix::from_fn(series.len(), |i, j| dtw(&derivs[i], &derivs[j], None))?;
    Ok((raw, deriv))
}

/// DD_DTW + average-linkage baseline: picks the α in `alpha_grid` whose
/// `l`-group clustering maximizes the intergroup variance (smallest α on
/// ties).
pub fn dddtw_hc(dataset: &Dataset, l: usize, alpha_grid: &[f64]) -> Result<BaselineResult> {
    if l < 2 {
        return Err(Error::invalid("the baseline needs at least two groups"));
    }
    if alpha_grid.is_empty() {
        return Err(Error::invalid("alpha grid is empty"));
    }
    alpha_grid.iter().try_for_each(|&a| check_alpha(a))?;
    if l > dataset.len() {
        return Err(Error::invalid(format!(
            "cannot form {l} groups from {} series",
            dataset.len()
        )));
    }

    let (raw, deriv) = dtw_matrices(dataset)?;
    let mut alphas = alpha_grid.to_vec();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();

    let mut best: Option<BaselineResult> = None;
    for alpha in alphas {
        let d = raw.blend(&deriv, alpha);
        let partition = cluster_matrix(&d, l)?;
        let v = intergroup_variance(&d, &partition);
        if best.as_ref().is_none_or(|b| v > b.intergroup_variance) {
            best = Some(BaselineResult {
                partition,
                alpha,
                intergroup_variance: v,
            });
        }
    }
    Ok(best.expect("grid is non-empty"))
}

/// Euclidean + average-linkage baseline.
pub fn ed_hc(dataset: &Dataset, l: usize) -> Result<Partition> {
    let series = &dataset.series;
    let d = DistanceMatrix::from_fn(series.len(), |i, j| {
        euclidean(&series[i].values, &series[j].values)
    })?;
    cluster_matrix(&d, l)
}
