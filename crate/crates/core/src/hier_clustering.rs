// SPDX-License-Identifier: MIT OR Apache-2.0

//! Agglomerative hierarchical clustering.
//!
//! Both linkages run on the same Lance–Williams engine over a condensed
//! dissimilarity matrix. Clusters live in slots: initially slot `i` holds
//! item `i`, and merging slots `a < b` stores the union in `a` and retires
//! `b`. At each step the pair with the smallest dissimilarity is merged;
//! among equal candidates the lexicographically smallest `(a, b)` wins.
//!
//! For Ward linkage the engine runs on squared Euclidean distances, where
//! the Lance–Williams update keeps `d(A, B) = 2·|A||B|/(|A|+|B|)·‖c_A − c_B‖²`,
//! twice the increase in within-cluster sum of squares caused by merging.
//! The reported merge cost is that increase.

use crate::error::{Error, Result};

/// Assignment of items to clusters `0..k`, labeled in order of first
/// appearance.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub k: usize,
    /// Arithmetic mean of each cluster's members. Empty when the partition
    /// was built without access to the points (e.g. from a distance matrix).
    pub centroids: Vec<Vec<f64>>,
}

impl Partition {
    /// Canonicalizes arbitrary cluster ids into first-appearance order.
    pub fn from_assignment(assignment: &[usize]) -> Self {
        let mut map: Vec<(usize, usize)> = Vec::new();
        let assignment = assignment
            .iter()
            .map(|&raw| match map.iter().find(|(r, _)| *r == raw) {
                Some(&(_, id)) => id,
                None => {
                    map.push((raw, map.len()));
                    map.len() - 1
                }
            })
            .collect();
        Self {
            assignment,
            k: map.len(),
            centroids: Vec::new(),
        }
    }

    /// Same partition with centroids computed from `points`.
    pub fn with_centroids(mut self, points: &[Vec<f64>]) -> Self {
        self.centroids = centroids(points, &self.assignment, self.k);
        self
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        self.assignment.iter().for_each(|&c| sizes[c] += 1);
        sizes
    }

    /// Indices of the items in cluster `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| (a == c).then_some(i))
            .collect()
    }
}

/// Means of each cluster's points.
pub fn centroids(points: &[Vec<f64>], assignment: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dim = points.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in points.iter().zip(assignment) {
        counts[c] += 1;
        sums[c].iter_mut().zip(p).for_each(|(s, v)| *s += v);
    }
    for (s, &n) in sums.iter_mut().zip(&counts) {
        if n > 0 {
            s.iter_mut().for_each(|v| *v /= n as f64);
        }
    }
    sums
}

/// Linkage criterion driving the Lance–Williams update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linkage {
    /// Ward's minimum-variance criterion; the input must hold squared
    /// Euclidean distances.
    Ward,
    /// Unweighted mean of pairwise dissimilarities (UPGMA).
    Average,
}

/// One agglomeration step: slot `b` merged into slot `a` (`a < b`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub cost: f64,
    /// Size of the merged cluster.
    pub size: usize,
}

/// Full merge history over `n` items.
#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    pub n: usize,
    pub steps: Vec<Merge>,
}

impl Dendrogram {
    /// Applies the first `n - k` merges.
    pub fn cut(&self, k: usize) -> Result<Partition> {
        cut_dendrogram(self, k)
    }
}

/// Undo the last `k - 1` merges of `d` and label the resulting clusters.
pub fn cut_dendrogram(d: &Dendrogram, k: usize) -> Result<Partition> {
    if k == 0 || k > d.n {
        return Err(Error::invalid(format!(
            "cannot cut {} items into {k} clusters",
            d.n
        )));
    }
    let mut parent: Vec<usize> = (0..d.n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for m in &d.steps[..d.n - k] {
        let (ra, rb) = (find(&mut parent, m.a), find(&mut parent, m.b));
        parent[rb] = ra;
    }
    let roots: Vec<usize> = (0..d.n).map(|i| find(&mut parent, i)).collect();
    Ok(Partition::from_assignment(&roots))
}

#[inline]
pub(crate) fn condensed_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Runs agglomerative clustering over a condensed upper-triangular
/// dissimilarity matrix (`n·(n-1)/2` entries, row-major over `i < j`).
pub fn linkage(condensed: &[f64], n: usize, method: Linkage) -> Result<Dendrogram> {
    if n == 0 {
        return Err(Error::invalid("cannot cluster zero items"));
    }
    if condensed.len() != n * (n - 1) / 2 {
        return Err(Error::invalid(format!(
            "condensed matrix has {} entries, expected {} for n = {n}",
            condensed.len(),
            n * (n - 1) / 2
        )));
    }
    if let Some(v) = condensed.iter().find(|v| v.is_nan()) {
        return Err(Error::invalid(format!("dissimilarity {v} is not a number")));
    }

    let mut d = condensed.to_vec();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut nn = vec![usize::MAX; n];
    let mut nn_d = vec![f64::INFINITY; n];

    let nearest = |d: &[f64], active: &[bool], i: usize| -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for j in (i + 1)..n {
            if active[j] {
                let v = d[condensed_index(n, i, j)];
                if best.0 == usize::MAX || v < best.1 {
                    best = (j, v);
                }
            }
        }
        best
    };
    for i in 0..n {
        (nn[i], nn_d[i]) = nearest(&d, &active, i);
    }

    let mut steps = Vec::with_capacity(n.saturating_sub(1));
    for _ in 1..n {
        let mut a = usize::MAX;
        for i in 0..n {
            if active[i] && nn[i] != usize::MAX && (a == usize::MAX || nn_d[i] < nn_d[a]) {
                a = i;
            }
        }
        let b = nn[a];
        let d_ab = nn_d[a];
        let (na, nb) = (size[a] as f64, size[b] as f64);

        for x in 0..n {
            if !active[x] || x == a || x == b {
                continue;
            }
            let ia = condensed_index(n, a.min(x), a.max(x));
            let ib = condensed_index(n, b.min(x), b.max(x));
            d[ia] = match method {
                Linkage::Ward => {
                    let nx = size[x] as f64;
                    ((na + nx) * d[ia] + (nb + nx) * d[ib] - nx * d_ab) / (na + nb + nx)
                }
                Linkage::Average => (na * d[ia] + nb * d[ib]) / (na + nb),
            };
        }
        let cost = match method {
            Linkage::Ward => d_ab / 2.0,
            Linkage::Average => d_ab,
        };
        size[a] += size[b];
        active[b] = false;
        steps.push(Merge {
            a,
            b,
            cost,
            size: size[a],
        });

        for i in 0..n {
            if !active[i] {
                continue;
            }
            if i == a || nn[i] == a || nn[i] == b {
                (nn[i], nn_d[i]) = nearest(&d, &active, i);
            } else if i < a {
                let v = d[condensed_index(n, i, a)];
                if v < nn_d[i] || (v == nn_d[i] && a < nn[i]) {
                    nn[i] = a;
                    nn_d[i] = v;
                }
            }
        }
    }
    Ok(Dendrogram { n, steps })
}

pub(crate) fn check_points(points: &[Vec<f64>]) -> Result<usize> {
    let Some(first) = points.first() else {
        return Err(Error::invalid("no points given"));
    };
    let dim = first.len();
    if let Some(i) = points.iter().position(|p| p.len() != dim) {
        return Err(Error::invalid(format!(
            "point {i} has length {} but point 0 has {dim}",
            points[i].len()
        )));
    }
    Ok(dim)
}

pub(crate) fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Ward dendrogram of a set of equal-length vectors.
pub fn ward_dendrogram(points: &[Vec<f64>]) -> Result<Dendrogram> {
    check_points(points)?;
    let n = points.len();
    let mut condensed = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            condensed.push(squared_euclidean(&points[i], &points[j]));
        }
    }
    linkage(&condensed, n, Linkage::Ward)
}

/// Ward clustering of `points` into `k` clusters, with centroids.
pub fn ward_cluster(points: &[Vec<f64>], k: usize) -> Result<Partition> {
    check_points(points)?;
    if k == 0 || k > points.len() {
        return Err(Error::invalid(format!(
            "k = {k} outside 1..={}",
            points.len()
        )));
    }
    Ok(ward_dendrogram(points)?.cut(k)?.with_centroids(points))
}
