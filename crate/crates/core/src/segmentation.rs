// SPDX-License-Identifier: MIT OR Apache-2.0

//! Growing-window least-squares polynomial segmentation.
//!
//! A window is extended one point at a time while a running polynomial fit
//! is kept up to date. The fit is stored as the triangular factor of a QR
//! decomposition of the design matrix, updated with Givens rotations, so
//! adding a point costs `O(c²)` for degree `c` regardless of how long the
//! window already is. The residual sum of squares falls out of the update
//! directly.
//!
//! The window stops growing when its standard error of prediction
//! `sqrt(SSE) / |mean|` first exceeds the threshold. The segment is then
//! closed at the previous point and the next window starts at that same
//! point, so consecutive segments share an endpoint.

use crate::dataset_io::TimeSeries;
use crate::error::{Error, Result};

/// Floor applied to `|mean|` in the SEP denominator.
pub const SEP_EPSILON: f64 = 1e-8;

/// Running least-squares fit of a polynomial over abscissae `0, 1, 2, ...`.
#[derive(Clone, Debug)]
pub struct RunningFit {
    degree: usize,
    count: usize,
    /// Upper-triangular factor, row-major `(degree+1)²`.
    r: Vec<f64>,
    /// `Qᵀy`.
    qty: Vec<f64>,
    sse: f64,
    sum_y: f64,
}

impl RunningFit {
    pub fn new(degree: usize) -> Self {
        let p = degree + 1;
        Self {
            degree,
            count: 0,
            r: vec![0.0; p * p],
            qty: vec![0.0; p],
            sse: 0.0,
            sum_y: 0.0,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of points pushed so far.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Appends the next point; its abscissa is the current length.
    #[allow(clippy::needless_range_loop)]
    pub fn push(&mut self, y: f64) {
        let p = self.degree + 1;
        let x = self.count as f64;
        let mut row: Vec<f64> = std::iter::successors(Some(1.0), |v| Some(v * x))
            .take(p)
            .collect();
        let mut rhs = y;

        for i in 0..p {
            let a = row[i];
            if a == 0.0 {
                continue;
            }
            let d = self.r[i * p + i];
            let h = d.hypot(a);
            let (c, s) = (d / h, a / h);
            for j in i..p {
                let rij = self.r[i * p + j];
                self.r[i * p + j] = c * rij + s * row[j];
                row[j] = c * row[j] - s * rij;
            }
            let zi = self.qty[i];
            self.qty[i] = c * zi + s * rhs;
            rhs = c * rhs - s * zi;
        }

        // Once the factor is full rank every further point leaves a residual.
        if self.count >= p {
            self.sse += rhs * rhs;
        }
        self.count += 1;
        self.sum_y += y;
    }

    /// Returns a copy with `y` appended.
    pub fn pushed(&self, y: f64) -> Self {
        let mut next = self.clone();
        next.push(y);
        next
    }

    /// Polynomial coefficients, intercept first. Requires at least
    /// `degree + 1` points.
    pub fn coefficients(&self) -> Option<Vec<f64>> {
        let p = self.degree + 1;
        if self.count < p {
            return None;
        }
        let mut beta = vec![0.0; p];
        for i in (0..p).rev() {
            let tail: f64 = ((i + 1)..p).map(|j| self.r[i * p + j] * beta[j]).sum();
            let diag = self.r[i * p + i];
            if diag == 0.0 {
                return None;
            }
            beta[i] = (self.qty[i] - tail) / diag;
        }
        Some(beta)
    }

    /// Residual sum of squares of the current fit.
    pub fn sse(&self) -> f64 {
        self.sse
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum_y / self.count as f64
        }
    }

    /// Standard error of prediction, `sqrt(SSE) / max(|mean|, ε)`.
    pub fn sep(&self) -> f64 {
        sep_value(self.sse, self.mean())
    }
}

pub(crate) fn sep_value(sse: f64, mean: f64) -> f64 {
    sse.sqrt() / mean.abs().max(SEP_EPSILON)
}

/// A contiguous slice `start..=end` of a series and its polynomial fit.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    /// Coefficients over the local abscissa `0..=end-start`, intercept first.
    pub coefficients: Vec<f64>,
    pub sse: f64,
    pub mse: f64,
    pub sep: f64,
    /// Set when the segment is shorter than the configured minimum length
    /// (only possible for series shorter than that minimum).
    pub degenerate: bool,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Slope coefficients (intercept dropped).
    pub fn slopes(&self) -> &[f64] {
        &self.coefficients[1..]
    }

    fn from_fit(start: usize, fit: &RunningFit, degenerate: bool) -> Self {
        let coefficients = fit
            .coefficients()
            .unwrap_or_else(|| underdetermined_coefficients(fit));
        let count = fit.len();
        Self {
            start,
            end: start + count - 1,
            coefficients,
            sse: fit.sse(),
            mse: fit.sse() / count as f64,
            sep: fit.sep(),
            degenerate,
        }
    }
}

// Fewer points than coefficients: keep the level, zero the rest.
fn underdetermined_coefficients(fit: &RunningFit) -> Vec<f64> {
    let mut c = vec![0.0; fit.degree() + 1];
    c[0] = fit.mean();
    c
}

/// The segments of one series, tiling it with shared endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Segmentation {
    pub series_id: usize,
    pub segments: Vec<Segment>,
}

impl Segmentation {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Parameters of the growing-window segmentation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SegmentParams {
    pub sep_max: f64,
    pub degree: usize,
    pub min_len: usize,
}

impl SegmentParams {
    /// `min_len` defaults to `degree + 2`.
    pub fn new(sep_max: f64, degree: usize) -> Self {
        Self {
            sep_max,
            degree,
            min_len: degree + 2,
        }
    }

    pub fn with_min_len(mut self, min_len: usize) -> Self {
        self.min_len = min_len;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.sep_max.is_nan() || self.sep_max <= 0.0 {
            return Err(Error::invalid(format!("sep_max must be > 0, got {}", self.sep_max)));
        }
        if self.degree < 1 {
            return Err(Error::invalid("polynomial degree must be >= 1"));
        }
        if self.min_len < self.degree + 1 {
            return Err(Error::invalid(format!(
                "min_len {} is below degree + 1 = {}",
                self.min_len,
                self.degree + 1
            )));
        }
        Ok(())
    }
}

/// Segments a slice of values.
pub fn segment_values(values: &[f64], params: SegmentParams) -> Result<Vec<Segment>> {
    params.validate()?;
    if values.is_empty() {
        return Err(Error::invalid("cannot segment an empty series"));
    }
    if values.len() < params.min_len {
        let mut fit = RunningFit::new(params.degree);
        values.iter().for_each(|&y| fit.push(y));
        return Ok(vec![Segment::from_fit(0, &fit, true)]);
    }

    let mut segments = Vec::new();
    let mut start = 0;
    let mut fit = RunningFit::new(params.degree);
    fit.push(values[0]);

    for t in 1..values.len() {
        let grown = fit.pushed(values[t]);
        if grown.len() >= params.min_len && grown.sep() > params.sep_max {
            segments.push(Segment::from_fit(start, &fit, false));
            start = t - 1;
            fit = RunningFit::new(params.degree);
            fit.push(values[t - 1]);
            fit.push(values[t]);
        } else {
            fit = grown;
        }
    }
    segments.push(Segment::from_fit(start, &fit, false));
    Ok(segments)
}

/// Segments one series with threshold `sep_max`, polynomial `degree` and
/// minimum window length `min_len`.
pub fn segment_series(
    series: &TimeSeries,
    sep_max: f64,
    degree: usize,
    min_len: usize,
) -> Result<Segmentation> {
    let params = SegmentParams::new(sep_max, degree).with_min_len(min_len);
    Ok(Segmentation {
        series_id: series.id,
        segments: segment_values(&series.values, params)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit_of(ys: &[f64], degree: usize) -> RunningFit {
        let mut f = RunningFit::new(degree);
        ys.iter().for_each(|&y| f.push(y));
        f
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn exact_line() {
        let f = fit_of(&[0.0, 1.0, 2.0], 1);
        let c = f.coefficients().unwrap();
        assert!(close(c[0], 0.0) && close(c[1], 1.0));
        assert!(f.sse().abs() < 1e-24);
    }

    #[test]
    fn constant() {
        let f = fit_of(&[1.0, 1.0, 1.0], 1);
        let c = f.coefficients().unwrap();
        assert!(close(c[0], 1.0) && close(c[1], 0.0));
        assert!(f.sse().abs() < 1e-24);
    }

    #[test]
    fn tent_normal_equations() {
        // X'X = [[3,3],[3,5]], X'y = [1,1]: intercept 1/3, slope 0,
        // residuals (-1/3, 2/3, -1/3).
        let f = fit_of(&[0.0, 1.0, 0.0], 1);
        let c = f.coefficients().unwrap();
        assert!(close(c[0], 1.0 / 3.0));
        assert!(c[1].abs() < 1e-15);
        assert!(close(f.sse(), 2.0 / 3.0));
    }

    #[test]
    fn sep_values() {
        let f = fit_of(&[5.0; 7], 1);
        assert!(f.sep() < 1e-14);

        // (0,0,2): slope 1, intercept -1/3, residuals (1/3,-2/3,1/3).
        let f = fit_of(&[0.0, 0.0, 2.0], 1);
        assert!(close(f.sse(), 2.0 / 3.0));
        assert!(close(f.sep(), (2.0f64 / 3.0).sqrt() / (2.0 / 3.0)));

        assert_eq!(sep_value(1.0, 0.0), 1e8);
    }

    #[test]
    fn pushed_leaves_original_untouched() {
        let f = fit_of(&[1.0, 2.0], 1);
        let g = f.pushed(10.0);
        assert_eq!(f.len(), 2);
        assert_eq!(g.len(), 3);
        assert!(g.sse() > 0.0);
    }

    #[test]
    fn linear_series_is_one_segment() {
        let ys: Vec<f64> = (0..100).map(|i| 3.0 + 0.5 * i as f64).collect();
        for sep_max in [1e-6, 1.0, 10.0, f64::INFINITY] {
            let segs = segment_values(&ys, SegmentParams::new(sep_max, 1)).unwrap();
            assert_eq!(segs.len(), 1);
            assert_eq!((segs[0].start, segs[0].end), (0, 99));
        }
    }

    #[test]
    fn corner_is_cut() {
        let ys: Vec<f64> = (0..100)
            .map(|x| if x < 50 { x as f64 } else { 100.0 - x as f64 })
            .collect();
        let segs = segment_values(&ys, SegmentParams::new(1e-3, 1)).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].end, 50);
        assert_eq!(segs[1].start, 50);
        assert_eq!(segs[1].end, 99);
    }

    #[test]
    fn short_series_is_one_degenerate_segment() {
        let segs = segment_values(&[1.0, 2.0], SegmentParams::new(1.0, 1)).unwrap();
        assert_eq!(segs.len(), 1);
        assert!(segs[0].degenerate);
        let segs = segment_values(&[4.0], SegmentParams::new(1.0, 1)).unwrap();
        assert_eq!(segs[0].coefficients, vec![4.0, 0.0]);
        assert!(segs[0].degenerate);
    }

    #[test]
    fn zero_mean_noise_cuts_at_minimum_length() {
        let ys = [1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let segs = segment_values(&ys, SegmentParams::new(1.0, 1)).unwrap();
        assert!(segs.iter().all(|s| s.len() == 2));
        assert_eq!(segs.len(), 5);
    }

    #[test]
    fn rejects_bad_params() {
        let ys = [1.0, 2.0, 3.0];
        assert!(segment_values(&ys, SegmentParams::new(0.0, 1)).is_err());
        assert!(segment_values(&ys, SegmentParams::new(f64::NAN, 1)).is_err());
        assert!(segment_values(&ys, SegmentParams::new(1.0, 0)).is_err());
        assert!(segment_values(&ys, SegmentParams::new(1.0, 2).with_min_len(2)).is_err());
        assert!(segment_values(&[], SegmentParams::new(1.0, 1)).is_err());
    }

    #[test]
    fn segments_except_last_respect_threshold() {
        let ys: Vec<f64> = (0..300)
            .map(|i| 5.0 + (i as f64 * 0.13).sin() * 3.0 + ((i * 7919) % 13) as f64 * 0.05)
            .collect();
        let segs = segment_values(&ys, SegmentParams::new(0.05, 1)).unwrap();
        assert!(segs.len() > 2);
        for s in &segs[..segs.len() - 1] {
            assert!(s.sep <= 0.05, "segment {s:?}");
        }
        assert!(segs
            .iter()
            .all(|s| (s.mse - s.sse / s.len() as f64).abs() < 1e-15));
    }
}
