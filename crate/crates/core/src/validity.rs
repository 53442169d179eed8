// SPDX-License-Identifier: MIT OR Apache-2.0

//! Internal clustering validity indices and the Rand index.
//!
//! Every internal index takes the clustered points and a [`Partition`];
//! centroids are recomputed from the points. All distances are Euclidean.
//! Partitions with fewer than two clusters, and partitions whose indices
//! would divide by zero, are reported as [`Error::DegeneratePartition`]
//! rather than as NaN.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::hier_clustering::{centroids, check_points, squared_euclidean, Partition};

fn ed(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// Whether larger or smaller values of an index indicate a better clustering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Maximize,
    Minimize,
}

/// The nine internal indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InternalIndex {
    Sse,
    Nsse,
    Ch,
    Si,
    Db,
    DuGd33,
    DuGd43,
    DuGd53,
    Cop,
}

impl InternalIndex {
    pub const ALL: [InternalIndex; 9] = [
        Self::Sse,
        Self::Nsse,
        Self::Ch,
        Self::Si,
        Self::Db,
        Self::DuGd33,
        Self::DuGd43,
        Self::DuGd53,
        Self::Cop,
    ];

    pub fn orientation(self) -> Orientation {
        match self {
            Self::Ch | Self::Si | Self::DuGd33 | Self::DuGd43 | Self::DuGd53 => Orientation::Maximize,
            Self::Sse | Self::Nsse | Self::Db | Self::Cop => Orientation::Minimize,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sse => "SSE",
            Self::Nsse => "NSSE",
            Self::Ch => "CH",
            Self::Si => "SI",
            Self::Db => "DB",
            Self::DuGd33 => "DU-GD33",
            Self::DuGd43 => "DU-GD43",
            Self::DuGd53 => "DU-GD53",
            Self::Cop => "COP",
        }
    }

    /// True when `a` is strictly better than `b` for this index.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self.orientation() {
            Orientation::Maximize => a > b,
            Orientation::Minimize => a < b,
        }
    }
}

/// All internal indices of one clustering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexReport {
    pub sse: f64,
    pub nsse: f64,
    pub ch: f64,
    pub si: f64,
    pub db: f64,
    pub du_gd33: f64,
    pub du_gd43: f64,
    pub du_gd53: f64,
    pub cop: f64,
}

impl IndexReport {
    pub fn get(&self, index: InternalIndex) -> f64 {
        match index {
            InternalIndex::Sse => self.sse,
            InternalIndex::Nsse => self.nsse,
            InternalIndex::Ch => self.ch,
            InternalIndex::Si => self.si,
            InternalIndex::Db => self.db,
            InternalIndex::DuGd33 => self.du_gd33,
            InternalIndex::DuGd43 => self.du_gd43,
            InternalIndex::DuGd53 => self.du_gd53,
            InternalIndex::Cop => self.cop,
        }
    }
}

/// Denominator used by [`nsse`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NsseDenominator {
    /// Mean pairwise centroid distance.
    #[default]
    MeanPairwise,
    /// `(T-1)!` times the sum of pairwise centroid distances. Overflows to
    /// infinity, and hence NSSE to zero, beyond `T = 171`.
    LiteralFactorial,
}

/// Dunn index variants, by their between-cluster dissimilarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DunnVariant {
    /// Mean of all cross-cluster pairwise distances.
    Gd33,
    /// Distance between centroids.
    Gd43,
    /// Summed member-to-own-centroid distances of both clusters over their
    /// joint size, with a point-symmetry diameter.
    Gd53,
}

/// Checked view of points + partition with centroids and member lists.
struct Clustering<'a> {
    points: &'a [Vec<f64>],
    assignment: &'a [usize],
    centroids: Vec<Vec<f64>>,
    members: Vec<Vec<usize>>,
    /// Distances at or below this are rounding noise for these coordinates.
    noise: f64,
}

impl<'a> Clustering<'a> {
    fn new(points: &'a [Vec<f64>], partition: &'a Partition) -> Result<Self> {
        check_points(points)?;
        if partition.assignment.len() != points.len() {
            return Err(Error::invalid(format!(
                "partition covers {} items but {} points were given",
                partition.assignment.len(),
                points.len()
            )));
        }
        let k = partition.k;
        let mut members = vec![Vec::new(); k];
        for (i, &c) in partition.assignment.iter().enumerate() {
            if c >= k {
                return Err(Error::invalid(format!("cluster id {c} out of range 0..{k}")));
            }
            members[c].push(i);
        }
        if let Some(c) = members.iter().position(Vec::is_empty) {
            return Err(Error::invalid(format!("cluster {c} is empty")));
        }
        let scale = points.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self {
            points,
            assignment: &partition.assignment,
            centroids: centroids(points, &partition.assignment, k),
            members,
            noise: 64.0 * f64::EPSILON * scale,
        })
    }

    fn multi(points: &'a [Vec<f64>], partition: &'a Partition) -> Result<Self> {
        let c = Self::new(points, partition)?;
        if c.k() < 2 {
            return Err(Error::degenerate("at least two clusters are required"));
        }
        Ok(c)
    }

    fn k(&self) -> usize {
        self.members.len()
    }

    fn t(&self) -> usize {
        self.points.len()
    }

    fn within_squares(&self) -> f64 {
        self.points
            .iter()
            .zip(self.assignment)
            .map(|(p, &c)| squared_euclidean(p, &self.centroids[c]))
            .sum()
    }

    fn mean_distance_to_centroid(&self, c: usize) -> f64 {
        let m = &self.members[c];
        m.iter()
            .map(|&i| ed(&self.points[i], &self.centroids[c]))
            .sum::<f64>()
            / m.len() as f64
    }

    fn mean_distance_to_cluster(&self, x: &[f64], c: usize) -> f64 {
        let m = &self.members[c];
        m.iter().map(|&i| ed(x, &self.points[i])).sum::<f64>() / m.len() as f64
    }
}

/// Mean squared distance of each point to its cluster centroid.
pub fn sse(points: &[Vec<f64>], partition: &Partition) -> Result<f64> {
    let c = Clustering::new(points, partition)?;
    Ok(c.within_squares() / c.t() as f64)
}

/// SSE normalized by the separation of the centroids.
pub fn nsse(points: &[Vec<f64>], partition: &Partition, denominator: NsseDenominator) -> Result<f64> {
    let c = Clustering::multi(points, partition)?;
    let k = c.k();
    let mut sum = 0.0;
    for i in 0..k {
        for j in (i + 1)..k {
            sum += ed(&c.centroids[i], &c.centroids[j]);
        }
    }
    let denom = match denominator {
        NsseDenominator::MeanPairwise => 2.0 * sum / (k * (k - 1)) as f64,
        NsseDenominator::LiteralFactorial => (1..c.t()).map(|v| v as f64).product::<f64>() * sum,
    };
    if denom == 0.0 {
        return Err(Error::degenerate("all centroids coincide"));
    }
    Ok(c.within_squares() / c.t() as f64 / denom)
}

/// Calinski–Harabasz: between-cluster over within-cluster scatter, scaled by
/// degrees of freedom. Infinite when every point sits on its centroid, up to
/// rounding.
pub fn calinski_harabasz(points: &[Vec<f64>], partition: &Partition) -> Result<f64> {
    let c = Clustering::multi(points, partition)?;
    let (t, k) = (c.t(), c.k());
    let dim = points[0].len();
    let mut grand = vec![0.0; dim];
    for p in points {
        grand.iter_mut().zip(p).for_each(|(g, v)| *g += v);
    }
    grand.iter_mut().for_each(|g| *g /= t as f64);

    let between: f64 = (0..k)
        .map(|i| c.members[i].len() as f64 * squared_euclidean(&c.centroids[i], &grand))
        .sum();
    let within = c.within_squares();
    if within <= t as f64 * c.noise * c.noise {
        return Ok(f64::INFINITY);
    }
    Ok(between * (t - k) as f64 / (within * (k - 1) as f64))
}

/// Mean silhouette. The own-cluster mean distance includes the point
/// itself; `0/0` counts as 0.
pub fn silhouette(points: &[Vec<f64>], partition: &Partition) -> Result<f64> {
    let c = Clustering::multi(points, partition)?;
    let total: f64 = points
        .iter()
        .zip(c.assignment)
        .map(|(x, &own)| {
            let a = c.mean_distance_to_cluster(x, own);
            let b = (0..c.k())
                .filter(|&l| l != own)
                .map(|l| c.mean_distance_to_cluster(x, l))
                .fold(f64::INFINITY, f64::min);
            let m = a.max(b);
            if m == 0.0 {
                0.0
            } else {
                (b - a) / m
            }
        })
        .sum();
    Ok(total / c.t() as f64)
}

/// Davies–Bouldin.
pub fn davies_bouldin(points: &[Vec<f64>], partition: &Partition) -> Result<f64> {
    let c = Clustering::multi(points, partition)?;
    let k = c.k();
    let alpha: Vec<f64> = (0..k).map(|i| c.mean_distance_to_centroid(i)).collect();
    let mut total = 0.0;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in (0..k).filter(|&j| j != i) {
            let sep = ed(&c.centroids[i], &c.centroids[j]);
            if sep == 0.0 {
                return Err(Error::degenerate(format!("centroids {i} and {j} coincide")));
            }
            worst = worst.max((alpha[i] + alpha[j]) / sep);
        }
        total += worst;
    }
    Ok(total / k as f64)
}

fn point_symmetry_distance(c: &Clustering<'_>, x: &[f64], cluster: usize) -> f64 {
    let centroid = &c.centroids[cluster];
    let reflected: Vec<f64> = centroid.iter().zip(x).map(|(m, v)| 2.0 * m - v).collect();
    c.members[cluster]
        .iter()
        .map(|&i| ed(&reflected, &c.points[i]))
        .fold(f64::INFINITY, f64::min)
}

fn diameter(c: &Clustering<'_>, cluster: usize, variant: DunnVariant) -> f64 {
    let m = &c.members[cluster];
    match variant {
        DunnVariant::Gd33 | DunnVariant::Gd43 => {
            let mut max = 0.0f64;
            for (a, &i) in m.iter().enumerate() {
                for &j in &m[a + 1..] {
                    max = max.max(ed(&c.points[i], &c.points[j]));
                }
            }
            max
        }
        DunnVariant::Gd53 => {
            let sum: f64 = m
                .iter()
                .map(|&i| point_symmetry_distance(c, &c.points[i], cluster))
                .sum();
            2.0 * sum / m.len() as f64
        }
    }
}

fn dissimilarity(c: &Clustering<'_>, i: usize, j: usize, variant: DunnVariant) -> f64 {
    let (mi, mj) = (&c.members[i], &c.members[j]);
    match variant {
        DunnVariant::Gd33 => {
            let sum: f64 = mi
                .iter()
                .flat_map(|&x| mj.iter().map(move |&y| (x, y)))
                .map(|(x, y)| ed(&c.points[x], &c.points[y]))
                .sum();
            sum / (mi.len() * mj.len()) as f64
        }
        DunnVariant::Gd43 => ed(&c.centroids[i], &c.centroids[j]),
        DunnVariant::Gd53 => {
            let own = |members: &[usize], cl: usize| -> f64 {
                members
                    .iter()
                    .map(|&p| ed(&c.points[p], &c.centroids[cl]))
                    .sum()
            };
            (own(mi, i) + own(mj, j)) / (mi.len() + mj.len()) as f64
        }
    }
}

/// Generalized Dunn index. Infinite when the largest diameter is zero (up to
/// rounding).
pub fn dunn(points: &[Vec<f64>], partition: &Partition, variant: DunnVariant) -> Result<f64> {
    let c = Clustering::multi(points, partition)?;
    let k = c.k();
    let max_diam = (0..k)
        .map(|m| diameter(&c, m, variant))
        .fold(0.0f64, f64::max);
    // Two-point clusters are exactly point-symmetric; their reflected
    // distances are pure rounding.
    if max_diam <= c.noise {
        return Ok(f64::INFINITY);
    }
    let mut best = f64::INFINITY;
    for i in 0..k {
        for j in (i + 1)..k {
            best = best.min(dissimilarity(&c, i, j, variant) / max_diam);
        }
    }
    Ok(best)
}

/// COP index: per cluster, mean distance to the centroid over the smallest
/// furthest-neighbour distance from an outside point, averaged with weight
/// `1/T`.
pub fn cop(points: &[Vec<f64>], partition: &Partition) -> Result<f64> {
    let c = Clustering::multi(points, partition)?;
    let mut total = 0.0;
    for (cluster, members) in c.members.iter().enumerate() {
        let spread: f64 = members
            .iter()
            .map(|&i| ed(&c.points[i], &c.centroids[cluster]))
            .sum();
        let nearest_far = (0..c.t())
            .filter(|&x| c.assignment[x] != cluster)
            .map(|x| {
                members
                    .iter()
                    .map(|&y| ed(&c.points[x], &c.points[y]))
                    .fold(0.0f64, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        if nearest_far == 0.0 {
            return Err(Error::degenerate(format!(
                "an outside point coincides with every member of cluster {cluster}"
            )));
        }
        total += spread / (members.len() as f64 * nearest_far);
    }
    Ok(total / c.t() as f64)
}

/// Computes all nine internal indices.
pub fn evaluate(points: &[Vec<f64>], partition: &Partition, nsse_mode: NsseDenominator) -> Result<IndexReport> {
    Ok(IndexReport {
        sse: sse(points, partition)?,
        nsse: nsse(points, partition, nsse_mode)?,
        ch: calinski_harabasz(points, partition)?,
        si: silhouette(points, partition)?,
        db: davies_bouldin(points, partition)?,
        du_gd33: dunn(points, partition, DunnVariant::Gd33)?,
        du_gd43: dunn(points, partition, DunnVariant::Gd43)?,
        du_gd53: dunn(points, partition, DunnVariant::Gd53)?,
        cop: cop(points, partition)?,
    })
}

/// Rand index between a predicted clustering and ground-truth labels:
/// the fraction of item pairs on which both agree (same/same or
/// different/different).
pub fn rand_index(predicted: &[usize], truth: &[usize]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::invalid(format!(
            "{} predictions for {} labels",
            predicted.len(),
            truth.len()
        )));
    }
    let t = predicted.len() as u64;
    if t < 2 {
        return Err(Error::invalid("the Rand index needs at least two items"));
    }
    let pairs = |n: u64| n * n.saturating_sub(1) / 2;

    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    let mut by_cluster: HashMap<usize, u64> = HashMap::new();
    let mut by_class: HashMap<usize, u64> = HashMap::new();
    for (&p, &q) in predicted.iter().zip(truth) {
        *joint.entry((p, q)).or_default() += 1;
        *by_cluster.entry(p).or_default() += 1;
        *by_class.entry(q).or_default() += 1;
    }
    let same_both: u64 = joint.values().map(|&n| pairs(n)).sum();
    let same_cluster: u64 = by_cluster.values().map(|&n| pairs(n)).sum();
    let same_class: u64 = by_class.values().map(|&n| pairs(n)).sum();
    let total = pairs(t);
    let different_both = total + same_both - same_cluster - same_class;
    Ok((same_both + different_both) as f64 / total as f64)
}
