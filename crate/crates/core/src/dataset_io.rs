// SPDX-License-Identifier: MIT OR Apache-2.0

//! Loading UCR-archive text files and writing result tables.
//!
//! A UCR file holds one series per line: a class label followed by the
//! values. Older archive vintages separate tokens with whitespace, the 2015
//! release uses commas; both are accepted. Labels are read as reals and
//! mapped to dense class ids in order of first appearance.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// One univariate series of a dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    /// Position of the series in its dataset (load order, 0-based).
    pub id: usize,
    /// Dense ground-truth class id, when known.
    pub label: Option<usize>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(id: usize, label: Option<usize>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid(format!("series {id} is empty")));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "series {id} has a non-finite value at position {pos}"
            )));
        }
        Ok(Self { id, label, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Zero mean, unit (population) standard deviation. A constant series
    /// maps to all zeros.
    pub fn znormalized(&self) -> Self {
        let n = self.values.len() as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        let var = self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let sd = var.sqrt();
        let values = if sd > 0.0 {
            self.values.iter().map(|v| (v - mean) / sd).collect()
        } else {
            vec![0.0; self.values.len()]
        };
        Self {
            id: self.id,
            label: self.label,
            values,
        }
    }
}

/// A named collection of series, either all labeled or all unlabeled.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub series: Vec<TimeSeries>,
    /// Number of distinct classes; 1 for unlabeled data.
    pub num_classes: usize,
    /// Original label value of each dense class id.
    pub class_values: Vec<f64>,
}

impl Dataset {
    /// Builds a labeled dataset from `(label, values)` rows. Labels may be
    /// arbitrary reals; they are densified in first-appearance order.
    pub fn from_labeled(name: impl Into<String>, rows: Vec<(f64, Vec<f64>)>) -> Result<Self> {
        let mut class_values: Vec<f64> = Vec::new();
        let mut series = Vec::with_capacity(rows.len());
        for (id, (label, values)) in rows.into_iter().enumerate() {
            let class = dense_class(&mut class_values, label);
            series.push(TimeSeries::new(id, Some(class), values)?);
        }
        Ok(Self {
            name: name.into(),
            num_classes: class_values.len().max(1),
            series,
            class_values,
        })
    }

    pub fn from_unlabeled(name: impl Into<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let series = rows
            .into_iter()
            .enumerate()
            .map(|(id, values)| TimeSeries::new(id, None, values))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name: name.into(),
            series,
            num_classes: 1,
            class_values: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn is_labeled(&self) -> bool {
        self.series.first().is_some_and(|s| s.label.is_some())
    }

    /// Ground-truth labels, if every series carries one.
    pub fn labels(&self) -> Option<Vec<usize>> {
        self.series.iter().map(|s| s.label).collect()
    }

    pub fn znormalized(&self) -> Self {
        Self {
            series: self.series.iter().map(TimeSeries::znormalized).collect(),
            ..self.clone()
        }
    }
}

fn dense_class(class_values: &mut Vec<f64>, label: f64) -> usize {
    match class_values.iter().position(|&c| c == label) {
        Some(i) => i,
        None => {
            class_values.push(label);
            class_values.len() - 1
        }
    }
}

fn split_tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

/// Reads the `(label, values)` rows of one UCR file.
pub fn read_ucr_rows(path: &Path) -> Result<Vec<(f64, Vec<f64>)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    let mut width: Option<(usize, usize)> = None;

    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let mut tokens = split_tokens(line);
        let Some(label_token) = tokens.next() else {
            continue;
        };
        let parse = |token: &str| -> Result<f64> {
            token.parse::<f64>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: line_no,
                message: format!("non-numeric token {token:?}"),
            })
        };
        let label = parse(label_token)?;
        let values = tokens.map(parse).collect::<Result<Vec<f64>>>()?;

        if values.is_empty() {
            return Err(Error::Format {
                path: path.to_path_buf(),
                message: format!("line {line_no} has a label but no values"),
            });
        }
        if !label.is_finite() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format {
                path: path.to_path_buf(),
                message: format!("line {line_no} contains a non-finite value"),
            });
        }
        match width {
            None => width = Some((values.len(), line_no)),
            Some((expected, first_line)) if expected != values.len() => {
                return Err(Error::Format {
                    path: path.to_path_buf(),
                    message: format!(
                        "line {line_no} has {} values but line {first_line} has {expected}",
                        values.len()
                    ),
                });
            }
            Some(_) => {}
        }
        rows.push((label, values));
    }
    Ok(rows)
}

/// Dataset name from a file path: the file stem with any `_TRAIN`/`_TEST`
/// suffix removed.
pub fn dataset_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    ["_TRAIN", "_TEST"]
        .iter()
        .find_map(|suffix| stem.strip_suffix(suffix))
        .map(str::to_owned)
        .unwrap_or(stem)
}

/// Loads a UCR dataset. When a test file is given, its rows are appended
/// after the train rows and both share one label mapping.
pub fn load_ucr(path_train: &Path, path_test: Option<&Path>) -> Result<Dataset> {
    let mut rows = read_ucr_rows(path_train)?;
    if let Some(test) = path_test {
        rows.extend(read_ucr_rows(test)?);
    }
    if rows.is_empty() {
        return Err(Error::Format {
            path: path_train.to_path_buf(),
            message: "no series found".into(),
        });
    }
    Dataset::from_labeled(dataset_name(path_train), rows)
}

/// Writes a labeled dataset in comma-separated UCR format. Values use the
/// shortest representation that parses back to the same `f64`.
pub fn write_ucr(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    for s in &dataset.series {
        let label = s
            .label
            .and_then(|c| dataset.class_values.get(c).copied())
            .ok_or_else(|| Error::invalid(format!("series {} has no label", s.id)))?;
        out.push_str(&label.to_string());
        for v in &s.values {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// One line of a results table.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub dataset: String,
    pub method: String,
    pub sep_max: Option<f64>,
    pub rand_index: f64,
    pub time_s: f64,
}

pub const RESULTS_HEADER: [&str; 5] = ["dataset", "method", "sep_max", "rand_index", "time_s"];

fn format_time(seconds: f64) -> String {
    ((seconds * 1000.0).round() / 1000.0).to_string()
}

/// Writes `rows` as CSV in the given order.
pub fn write_results(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_results_to(rows, file).map_err(|e| Error::io(path, e))
}

pub fn write_results_to<W: Write>(rows: &[ResultRow], writer: W) -> std::io::Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(RESULTS_HEADER)?;
    for row in rows {
        let sep = row.sep_max.map(|s| s.to_string()).unwrap_or_default();
        csv.write_record([
            row.dataset.as_str(),
            row.method.as_str(),
            sep.as_str(),
            &format!("{:.3}", row.rand_index),
            &format_time(row.time_s),
        ])?;
    }
    csv.flush()
}

/// Pairs every `<name>_TRAIN*` file under `dir` with its `<name>_TEST*`
/// sibling. Results are sorted by dataset name.
pub fn discover_ucr_pairs(dir: &Path) -> Result<Vec<(String, PathBuf, Option<PathBuf>)>> {
    let mut pairs = Vec::new();
    for entry in walkdir::WalkDir::new(dir).max_depth(2).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            Error::io(
                dir,
                e.into_io_error()
                    .unwrap_or_else(|| std::io::Error::other("directory walk failed")),
            )
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let path = entry.path();
        let Some(file_name) = path.file_name().map(|n| n.to_string_lossy().into_owned()) else {
            continue;
        };
        let Some(pos) = file_name.find("_TRAIN") else {
            continue;
        };
        let test_name = format!("{}_TEST{}", &file_name[..pos], &file_name[pos + 6..]);
        let test_path = path.with_file_name(test_name);
        let test = test_path.is_file().then_some(test_path);
        pairs.push((dataset_name(path), path.to_path_buf(), test));
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn minimal_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "X_TRAIN", "1,0.0,0.0\n");
        let ds = load_ucr(&p, None).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.num_classes, 1);
        assert_eq!(ds.series[0].values, vec![0.0, 0.0]);
        assert_eq!(ds.name, "X");
    }

    #[test]
    fn whitespace_rows_and_merge_order() {
        let dir = tempfile::tempdir().unwrap();
        let train = write(dir.path(), "D_TRAIN.txt", "  2.0e+00  1.0 2.0\n -1 3 4\n\n");
        let test = write(dir.path(), "D_TEST.txt", "2,5,6\n7,7,8\n");
        let ds = load_ucr(&train, Some(&test)).unwrap();
        assert_eq!(ds.name, "D");
        assert_eq!(ds.len(), 4);
        assert_eq!(ds.num_classes, 3);
        assert_eq!(ds.labels().unwrap(), vec![0, 1, 0, 2]);
        assert_eq!(ds.class_values, vec![2.0, -1.0, 7.0]);
        assert_eq!(ds.series[2].values, vec![5.0, 6.0]);
        assert!(ds.series.iter().enumerate().all(|(i, s)| s.id == i));
    }

    #[test]
    fn parse_error_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "B_TRAIN", "1,2,3\n1,x,3\n");
        match load_ucr(&p, None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn ragged_file_is_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "B_TRAIN", "1,2,3\n1,2\n");
        assert!(matches!(load_ucr(&p, None), Err(Error::Format { .. })));
        let p = write(dir.path(), "N_TRAIN", "1,NaN,3\n");
        assert!(matches!(load_ucr(&p, None), Err(Error::Format { .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_ucr(Path::new("/nonexistent/ts3c/A_TRAIN"), None).unwrap_err();
        assert!(err.is_data_error());
    }

    #[test]
    fn results_csv() {
        let mut buf = Vec::new();
        write_results_to(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "dataset,method,sep_max,rand_index,time_s\n");

        let rows = vec![
            ResultRow {
                dataset: "COF".into(),
                method: "ts3c_ch".into(),
                sep_max: Some(80.0),
                rand_index: 0.507,
                time_s: 12.3,
            },
            ResultRow {
                dataset: "BEE".into(),
                method: "dddtw_hc".into(),
                sep_max: None,
                rand_index: 0.68049,
                time_s: 1.23456,
            },
        ];
        let mut buf = Vec::new();
        write_results_to(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "COF,ts3c_ch,80,0.507,12.3");
        assert_eq!(lines[2], "BEE,dddtw_hc,,0.680,1.235");
    }

    #[test]
    fn unwritable_results_path() {
        let err = write_results(&[], Path::new("/nonexistent/dir/out.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn pairs_discovered_in_flat_and_nested_layouts() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "B_TRAIN.tsv", "1,1,2\n");
        write(dir.path(), "B_TEST.tsv", "1,1,2\n");
        fs::create_dir(dir.path().join("A")).unwrap();
        write(&dir.path().join("A"), "A_TRAIN", "1,1,2\n");
        let pairs = discover_ucr_pairs(dir.path()).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(pairs[0].0, "A");
        assert!(pairs[0].2.is_none());
        assert_eq!(pairs[1].0, "B");
        assert!(pairs[1].2.is_some());
    }
}
