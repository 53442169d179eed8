// SPDX-License-Identifier: MIT OR Apache-2.0

//! Two-stage segmentation-clustering of whole time series.
//!
//! Stage one summarizes every series by segmenting it with a growing-window
//! polynomial fit, describing each segment by a short feature vector and
//! clustering those vectors. Stage two clusters the resulting fixed-length
//! series descriptors with Ward linkage. The segmentation threshold is
//! chosen from a grid using internal validity indices only.
//!
//! ```
//! use ts3c::pipeline::{run, PipelineConfig, Strategy};
//! use ts3c::synthetic::{piecewise_linear_families, FamilySpec};
//!
//! let data = piecewise_linear_families(FamilySpec { per_class: 8, ..FamilySpec::default() })?;
//! let config = PipelineConfig::for_dataset(&data).with_grid(vec![10.0, 50.0]);
//! let result = run(&data, Strategy::Ch, &config)?;
//! assert!(result.ri.unwrap() > 0.5);
//! # Ok::<(), ts3c::Error>(())
//! ```
//!
//! The module layout follows the data flow:
//!
//! * [`dataset_io`] loads UCR files and writes result tables;
//! * [`segmentation`] and [`segment_features`] build the per-segment vectors;
//! * [`hier_clustering`] provides Ward and average linkage;
//! * [`series_mapping`] assembles the per-series descriptors;
//! * [`validity`] holds the internal indices and the Rand index;
//! * [`pipeline`] runs sweeps and threshold selection;
//! * [`baseline_distances`] implements DTW-based comparison baselines.

pub mod baseline_distances;
pub mod dataset_io;
mod error;
pub mod hier_clustering;
pub mod pipeline;
pub mod segment_features;
pub mod segmentation;
pub mod series_mapping;
pub mod synthetic;
pub mod validity;

pub use error::{Error, Result};

pub use dataset_io::{load_ucr, Dataset, TimeSeries};
pub use hier_clustering::{ward_cluster, Partition};
pub use pipeline::{run, PipelineConfig, RunResult, Strategy};
pub use validity::{rand_index, IndexReport};

// The guide's code blocks run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/segmentation.md")]
    mod segmentation {}
    #[doc = include_str!("../../../book/src/features.md")]
    mod features {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/mapping.md")]
    mod mapping {}
    #[doc = include_str!("../../../book/src/validity.md")]
    mod validity {}
    #[doc = include_str!("../../../book/src/selection.md")]
    mod selection {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
