// SPDX-License-Identifier: MIT OR Apache-2.0

//! Fixed-length descriptors of variable-length segments.
//!
//! A segment of degree-`c` fit becomes `[p_1..p_c | variance | skewness |
//! autocorrelation]`: the fit coefficients without the intercept followed by
//! three statistics of the raw segment values. All statistics use the
//! population (divide-by-`n`) moments.

use crate::segmentation::Segment;

/// Number of statistics appended after the slope coefficients.
pub const NUM_STATISTICS: usize = 3;

/// Feature vector of one segment plus the segment it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct MappedSegment {
    pub features: Vec<f64>,
    pub segment: Segment,
}

impl MappedSegment {
    /// Polynomial degree the features were built from.
    pub fn degree(&self) -> usize {
        self.features.len() - NUM_STATISTICS
    }

    pub fn variance(&self) -> f64 {
        self.features[self.degree()]
    }

    pub fn skewness(&self) -> f64 {
        self.features[self.degree() + 1]
    }

    pub fn autocorrelation(&self) -> f64 {
        self.features[self.degree() + 2]
    }

    /// Mean squared error of the segment's polynomial fit.
    pub fn mse(&self) -> f64 {
        self.segment.mse
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn is_constant(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// Population variance.
pub fn variance(values: &[f64]) -> f64 {
    if values.is_empty() || is_constant(values) {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|y| (y - m).powi(2)).sum::<f64>() / values.len() as f64
}

/// Third central moment over the cubed population standard deviation;
/// zero for constant input.
pub fn skewness(values: &[f64]) -> f64 {
    let var = variance(values);
    if var == 0.0 {
        return 0.0;
    }
    let m = mean(values);
    let m3 = values.iter().map(|y| (y - m).powi(3)).sum::<f64>() / values.len() as f64;
    m3 / var.powf(1.5)
}

/// Lag-one autocovariance sum over the population variance:
/// `Σ_{i<n-1} (y_i - ȳ)(y_{i+1} - ȳ) / S²`. Not divided by `n`, so its
/// magnitude grows with segment length. Zero for constant input.
pub fn autocorrelation(values: &[f64]) -> f64 {
    let var = variance(values);
    if var == 0.0 || values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let lagged: f64 = values.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum();
    lagged / var
}

/// Builds the feature vector of `segment`, whose indices refer to
/// `series_values`.
pub fn map_segment(segment: &Segment, series_values: &[f64]) -> MappedSegment {
    let values = &series_values[segment.start..=segment.end];
    let mut features = Vec::with_capacity(segment.coefficients.len() - 1 + NUM_STATISTICS);
    features.extend_from_slice(segment.slopes());
    features.push(variance(values));
    features.push(skewness(values));
    features.push(autocorrelation(values));
    MappedSegment {
        features,
        segment: segment.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segmentation::{segment_values, SegmentParams};

    #[test]
    fn variance_examples() {
        assert_eq!(variance(&[5.0, 5.0, 5.0, 5.0]), 0.0);
        assert_eq!(variance(&[0.0, 2.0]), 1.0);
        assert!((variance(&[1.0, 2.0, 3.0]) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn skewness_examples() {
        assert!(skewness(&[1.0, 2.0, 3.0]).abs() < 1e-15);
        assert_eq!(skewness(&[0.1; 9]), 0.0);
        assert!((skewness(&[0.0, 0.0, 3.0]) - 2.0 / 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn autocorrelation_examples() {
        assert_eq!(autocorrelation(&[2.5; 6]), 0.0);
        assert!((autocorrelation(&[1.0, -1.0, 1.0, -1.0]) + 3.0).abs() < 1e-12);
        // devs (-1.5,-.5,.5,1.5): lag sum 1.25, variance 1.25.
        assert!((autocorrelation(&[0.0, 1.0, 2.0, 3.0]) - 1.0).abs() < 1e-12);
        assert_eq!(autocorrelation(&[1.0]), 0.0);
    }

    #[test]
    fn mapped_line_and_constant() {
        let ys: Vec<f64> = (0..10).map(|x| 2.0 * x as f64).collect();
        let segs = segment_values(&ys, SegmentParams::new(1.0, 1)).unwrap();
        let m = map_segment(&segs[0], &ys);
        assert_eq!(m.features.len(), 4);
        assert!((m.features[0] - 2.0).abs() < 1e-12);
        assert!(m.skewness().abs() < 1e-12);
        assert!((m.variance() - variance(&ys)).abs() < 1e-12);

        let ys = vec![3.0; 12];
        let segs = segment_values(&ys, SegmentParams::new(1.0, 1)).unwrap();
        let m = map_segment(&segs[0], &ys);
        assert!(m.features.iter().all(|f| f.abs() < 1e-12), "{:?}", m.features);
    }

    #[test]
    fn mapping_width_follows_degree() {
        let ys: Vec<f64> = (0..40).map(|x| (x as f64 * 0.3).sin() + 4.0).collect();
        for degree in 1..=3 {
            let segs = segment_values(&ys, SegmentParams::new(0.01, degree)).unwrap();
            for s in &segs {
                let m = map_segment(s, &ys);
                assert_eq!(m.features.len(), degree + NUM_STATISTICS);
                assert_eq!(m.degree(), degree);
                assert!(m.variance() >= 0.0);
            }
        }
    }
}
