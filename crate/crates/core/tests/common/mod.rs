// SPDX-License-Identifier: MIT OR Apache-2.0

//! Independent reference implementations used by the integration tests.
//!
//! Everything here is written from the textbook formulas with plain loops and
//! shares no code with the library beyond its public types.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-3)
}

fn clusters(assignment: &[usize]) -> Vec<Vec<usize>> {
    let k = assignment.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); k];
    for (i, &c) in assignment.iter().enumerate() {
        out[c].push(i);
    }
    out
}

fn mean_of(points: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let mut m = vec![0.0; points[0].len()];
    for &i in members {
        for (acc, v) in m.iter_mut().zip(&points[i]) {
            *acc += v;
        }
    }
    m.iter().map(|v| v / members.len() as f64).collect()
}

/// Reference values of every internal index, in `InternalIndex::ALL` order:
/// SSE, NSSE, CH, SI, DB, GD33, GD43, GD53, COP.
pub fn brute_indices(points: &[Vec<f64>], assignment: &[usize]) -> [f64; 9] {
    let t = points.len();
    // Quantities that are exactly zero in real arithmetic (for example the
    // point-symmetric diameter of a two-point cluster) come out at rounding
    // level in floating point; anything below this counts as zero.
    let scale = points.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let noise = 64.0 * f64::EPSILON * scale;
    let cl = clusters(assignment);
    let k = cl.len();
    let cent: Vec<Vec<f64>> = cl.iter().map(|m| mean_of(points, m)).collect();
    let all: Vec<usize> = (0..t).collect();
    let grand = mean_of(points, &all);

    let mut within = 0.0;
    for (c, m) in cl.iter().enumerate() {
        for &i in m {
            within += dist(&points[i], &cent[c]).powi(2);
        }
    }
    let sse = within / t as f64;

    let mut pair_sum = 0.0;
    let mut pairs = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i < j {
                pair_sum += dist(&cent[i], &cent[j]);
                pairs += 1.0;
            }
        }
    }
    let nsse = sse / (pair_sum / pairs);

    let mut between = 0.0;
    for (c, m) in cl.iter().enumerate() {
        between += m.len() as f64 * dist(&cent[c], &grand).powi(2);
    }
    let ch = if within <= t as f64 * noise * noise {
        f64::INFINITY
    } else {
        (between * (t - k) as f64) / (within * (k - 1) as f64)
    };

    let mut si = 0.0;
    for x in 0..t {
        let own = assignment[x];
        let mut a = 0.0;
        for &y in &cl[own] {
            a += dist(&points[x], &points[y]);
        }
        a /= cl[own].len() as f64;
        let mut b = f64::INFINITY;
        for (c, m) in cl.iter().enumerate() {
            if c == own {
                continue;
            }
            let mut s = 0.0;
            for &y in m {
                s += dist(&points[x], &points[y]);
            }
            b = b.min(s / m.len() as f64);
        }
        let denom = if a > b { a } else { b };
        si += if denom == 0.0 { 0.0 } else { (b - a) / denom };
    }
    si /= t as f64;

    let alpha: Vec<f64> = cl
        .iter()
        .enumerate()
        .map(|(c, m)| m.iter().map(|&i| dist(&points[i], &cent[c])).sum::<f64>() / m.len() as f64)
        .collect();
    let mut db = 0.0;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in 0..k {
            if j != i {
                worst = worst.max((alpha[i] + alpha[j]) / dist(&cent[i], &cent[j]));
            }
        }
        db += worst;
    }
    db /= k as f64;

    let max_pair_diam = cl
        .iter()
        .map(|m| {
            let mut d = 0.0f64;
            for &x in m {
                for &y in m {
                    d = d.max(dist(&points[x], &points[y]));
                }
            }
            d
        })
        .fold(0.0f64, f64::max);
    let ps_diam = cl
        .iter()
        .enumerate()
        .map(|(c, m)| {
            let mut s = 0.0;
            for &x in m {
                let mirror: Vec<f64> = cent[c].iter().zip(&points[x]).map(|(cc, v)| 2.0 * cc - v).collect();
                let mut nearest = f64::INFINITY;
                for &y in m {
                    nearest = nearest.min(dist(&mirror, &points[y]));
                }
                s += nearest;
            }
            2.0 * s / m.len() as f64
        })
        .fold(0.0f64, f64::max);
    let dunn = |delta: &dyn Fn(usize, usize) -> f64, diam: f64| {
        if diam <= noise {
            return f64::INFINITY;
        }
        let mut best = f64::INFINITY;
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    best = best.min(delta(i, j) / diam);
                }
            }
        }
        best
    };
    let gd33 = dunn(
        &|i, j| {
            let mut s = 0.0;
            for &x in &cl[i] {
                for &y in &cl[j] {
                    s += dist(&points[x], &points[y]);
                }
            }
            s / (cl[i].len() * cl[j].len()) as f64
        },
        max_pair_diam,
    );
    let gd43 = dunn(&|i, j| dist(&cent[i], &cent[j]), max_pair_diam);
    let gd53 = dunn(
        &|i, j| {
            let mut s = 0.0;
            for &x in &cl[i] {
                s += dist(&points[x], &cent[i]);
            }
            for &y in &cl[j] {
                s += dist(&points[y], &cent[j]);
            }
            s / (cl[i].len() + cl[j].len()) as f64
        },
        ps_diam,
    );

    let mut cop = 0.0;
    for (c, m) in cl.iter().enumerate() {
        let num: f64 = m.iter().map(|&y| dist(&points[y], &cent[c])).sum();
        let mut min_far = f64::INFINITY;
        for x in 0..t {
            if assignment[x] == c {
                continue;
            }
            let mut far = 0.0f64;
            for &y in m {
                far = far.max(dist(&points[x], &points[y]));
            }
            min_far = min_far.min(far);
        }
        cop += num / (m.len() as f64 * min_far);
    }
    cop /= t as f64;

    [sse, nsse, ch, si, db, gd33, gd43, gd53, cop]
}

/// Random points with a random assignment covering all `k` clusters.
pub fn random_instance(rng: &mut impl Rng, t: usize, dims: usize, k: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let points = (0..t)
        .map(|_| (0..dims).map(|_| rng.random_range(-5.0..5.0)).collect())
        .collect();
    let mut assignment: Vec<usize> = (0..t).map(|i| if i < k { i } else { rng.random_range(0..k) }).collect();
    for i in (1..t).rev() {
        let j = rng.random_range(0..=i);
        assignment.swap(i, j);
    }
    (points, assignment)
}

/// Relabels clusters in order of first appearance.
pub fn canonical(assignment: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    assignment
        .iter()
        .map(|a| match seen.iter().position(|s| s == a) {
            Some(p) => p,
            None => {
                seen.push(*a);
                seen.len() - 1
            }
        })
        .collect()
}

fn cluster_sse(points: &[Vec<f64>], members: &[usize]) -> f64 {
    let c = mean_of(points, members);
    members.iter().map(|&i| dist(&points[i], &c).powi(2)).sum()
}

/// Agglomerative Ward by brute force: every step recomputes the SSE increase
/// of every candidate merge from the raw points. Returns the canonical
/// assignment for every `k` from `n` down to 1 (index `k - 1`).
pub fn naive_ward(points: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut out = vec![Vec::new(); n];
    loop {
        let mut assignment = vec![0; n];
        for (g, members) in groups.iter().enumerate() {
            for &i in members {
                assignment[i] = g;
            }
        }
        out[groups.len() - 1] = canonical(&assignment);
        if groups.len() == 1 {
            break;
        }
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                let mut union = groups[a].clone();
                union.extend(&groups[b]);
                let cost =
                    cluster_sse(points, &union) - cluster_sse(points, &groups[a]) - cluster_sse(points, &groups[b]);
                if cost < best.0 {
                    best = (cost, a, b);
                }
            }
        }
        let (_, a, b) = best;
        let moved = groups.remove(b);
        groups[a].extend(moved);
    }
    out
}

/// DTW by enumerating every admissible warping path.
pub fn dtw_by_paths(x: &[f64], y: &[f64]) -> f64 {
    fn walk(x: &[f64], y: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + (x[i] - y[j]).powi(2);
        if i + 1 == x.len() && j + 1 == y.len() {
            *best = best.min(acc);
            return;
        }
        if i + 1 < x.len() {
            walk(x, y, i + 1, j, acc, best);
        }
        if j + 1 < y.len() {
            walk(x, y, i, j + 1, acc, best);
        }
        if i + 1 < x.len() && j + 1 < y.len() {
            walk(x, y, i + 1, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(x, y, 0, 0, 0.0, &mut best);
    best.sqrt()
}

/// Batch least squares over abscissae `0..n` via SVD: coefficients
/// (intercept first) and residual sum of squares.
pub fn batch_polyfit(y: &[f64], degree: usize) -> (Vec<f64>, f64) {
    let n = y.len();
    // Abscissae scaled to [0, 1] keep the design matrix well conditioned.
    let scale = (n.max(2) - 1) as f64;
    let x = DMatrix::from_fn(n, degree + 1, |r, c| (r as f64 / scale).powi(c as i32));
    let yv = DVector::from_column_slice(y);
    let gamma = x.clone().svd(true, true).solve(&yv, 1e-14).expect("svd solve");
    let resid = &x * &gamma - &yv;
    let beta = gamma.iter().enumerate().map(|(c, g)| g / scale.powi(c as i32)).collect();
    (beta, resid.norm_squared())
}

/// Rand index by visiting every unordered pair.
pub fn rand_index_by_pairs(p: &[usize], q: &[usize]) -> f64 {
    let t = p.len();
    let (mut agree, mut total) = (0u64, 0u64);
    for i in 0..t {
        for j in (i + 1)..t {
            total += 1;
            if (p[i] == p[j]) == (q[i] == q[j]) {
                agree += 1;
            }
        }
    }
    agree as f64 / total as f64
}
