// SPDX-License-Identifier: MIT OR Apache-2.0

//! Seeded synthetic datasets with known class structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset_io::Dataset;
use crate::error::Result;

/// Knots `(position in [0, 1], value)` of the three shape families.
fn family_knots(class: usize, jitter: &mut impl FnMut() -> f64) -> Vec<(f64, f64)> {
    match class % 3 {
        // Low plateau, short ramp, high plateau.
        0 => vec![(0.0, -1.0), (0.45 + jitter(), -1.0), (0.55 + jitter(), 1.0), (1.0, 1.0)],
        // Valley.
        1 => vec![(0.0, 1.0), (0.5 + jitter(), -1.0), (1.0, 1.0)],
        // Four teeth.
        _ => {
            let mut knots = vec![(0.0, -1.0)];
            for t in 0..4 {
                let top = (t as f64 + 1.0) / 4.0 - 0.02 + jitter() * 0.2;
                knots.push((top, 1.0));
                knots.push(((t as f64 + 1.0) / 4.0, -1.0));
            }
            knots
        }
    }
}

fn interpolate(knots: &[(f64, f64)], u: f64) -> f64 {
    let i = knots
        .windows(2)
        .position(|w| u <= w[1].0)
        .unwrap_or(knots.len() - 2);
    let ((x0, y0), (x1, y1)) = (knots[i], knots[i + 1]);
    if x1 == x0 {
        y1
    } else {
        y0 + (y1 - y0) * (u - x0) / (x1 - x0)
    }
}

/// Parameters of [`piecewise_linear_families`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySpec {
    pub classes: usize,
    pub per_class: usize,
    pub length: usize,
    /// Noise standard deviation as a fraction of the signal range.
    pub noise_fraction: f64,
    /// Constant added to every value.
    pub offset: f64,
    pub seed: u64,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self {
            classes: 3,
            per_class: 30,
            length: 200,
            noise_fraction: 0.05,
            offset: 0.0,
            seed: 7,
        }
    }
}

/// Labeled dataset of piecewise-linear shapes (step, valley,
/// sawtooth, cycling for more than three classes) with jittered knots and
/// Gaussian noise. Series are interleaved by class.
pub fn piecewise_linear_families(spec: FamilySpec) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // Every family spans [-1, 1].
    let noise = Normal::new(0.0, spec.noise_fraction * 2.0).expect("valid sigma");
    let mut rows = Vec::with_capacity(spec.classes * spec.per_class);
    for _ in 0..spec.per_class {
        for class in 0..spec.classes {
            let mut jitter = || rng.random_range(-0.05..0.05);
            let knots = family_knots(class, &mut jitter);
            let values = (0..spec.length)
                .map(|t| {
                    let u = t as f64 / (spec.length - 1).max(1) as f64;
                    interpolate(&knots, u) + spec.offset + noise.sample(&mut rng)
                })
                .collect();
            rows.push((class as f64, values));
        }
    }
    Dataset::from_labeled(format!("synthetic{}", spec.classes), rows)
}
