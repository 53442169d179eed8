// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 pipeline error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use ts3c::baseline_distances::{dddtw_hc, ed_hc};
use ts3c::dataset_io::{discover_ucr_pairs, load_ucr, write_results, Dataset, ResultRow};
use ts3c::pipeline::{run, sweep, PipelineConfig, Strategy};
use ts3c::validity::{rand_index, InternalIndex};
use ts3c::Error;

#[derive(Parser, Debug)]
#[command(name = "ts3c", version, about = "Two-stage segmentation-clustering of time series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Ch,
    Mv,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Ch => Strategy::Ch,
            StrategyArg::Mv => Strategy::MajorityVoting,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BaselineMethod {
    #[value(name = "dddtw-hc")]
    DddtwHc,
    #[value(name = "ed-hc")]
    EdHc,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// Training file (UCR format).
    #[arg(long)]
    train: PathBuf,
    /// Test file, appended after the training rows.
    #[arg(long)]
    test: Option<PathBuf>,
    /// Z-normalize every series after loading.
    #[arg(long)]
    znorm: bool,
}

impl Input {
    fn load(&self) -> Result<Dataset, Error> {
        let ds = load_ucr(&self.train, self.test.as_deref())?;
        Ok(if self.znorm { ds.znormalized() } else { ds })
    }
}

#[derive(clap::Args, Debug)]
struct Stage {
    /// Segment clusters per series.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Degree of the segment polynomial.
    #[arg(long, default_value_t = 1)]
    degree: usize,
    /// Number of final clusters, or `auto` for the number of classes.
    #[arg(long = "L", default_value = "auto")]
    l: String,
    /// Z-score mapped-series dimensions before the final clustering.
    #[arg(long)]
    standardize: bool,
}

impl Stage {
    fn config(&self, dataset: &Dataset, sep_max: Option<f64>) -> Result<PipelineConfig, Error> {
        let l = match self.l.as_str() {
            "auto" => dataset.num_classes,
            v => v
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("--L expects auto or an integer, got {v:?}")))?,
        };
        let mut config = PipelineConfig::new(l);
        config.k = self.k;
        config.degree = self.degree;
        config.standardize = self.standardize;
        if let Some(s) = sep_max {
            config.grid = vec![s];
        }
        Ok(config)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cluster one dataset, sweeping the threshold grid or using a fixed one.
    Cluster {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// Fixed segmentation threshold instead of the default grid.
        #[arg(long)]
        sep_max: Option<f64>,
        #[command(flatten)]
        stage: Stage,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster every *_TRAIN/*_TEST pair found in a directory.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        /// Datasets processed concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        znorm: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a raw-series baseline.
    Baseline {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        method: BaselineMethod,
        /// `start:end:step` or a comma-separated list.
        #[arg(long, default_value = "0:1:0.01")]
        alpha_grid: String,
        #[arg(long = "L", default_value = "auto")]
        l: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print every internal index for each threshold.
    Indices {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        sep_max: Option<f64>,
        #[command(flatten)]
        stage: Stage,
    },
}

fn parse_alpha_grid(spec: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::InvalidArgument(format!("malformed alpha grid {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, end, step] => {
            let (start, end, step): (f64, f64, f64) = (
                start.parse().map_err(|_| bad())?,
                end.parse().map_err(|_| bad())?,
                step.parse().map_err(|_| bad())?,
            );
            if step <= 0.0 || end < start {
                return Err(bad());
            }
            let count = ((end - start) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|i| start + i as f64 * step).map(|a| a.min(end)).collect())
        }
        [_] => spec
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
            .collect(),
        _ => Err(bad()),
    }
}

fn write_or_print(rows: &[ResultRow], out: Option<&Path>) -> Result<(), Error> {
    if let Some(path) = out {
        write_results(rows, path)?;
    }
    for r in rows {
        let sep = r.sep_max.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
        println!(
            "{}\t{}\tsep_max={}\tRI={:.3}\ttime={:.3}s",
            r.dataset, r.method, sep, r.rand_index, r.time_s
        );
    }
    Ok(())
}

fn cluster_row(dataset: &Dataset, strategy: Strategy, config: &PipelineConfig) -> Result<ResultRow, Error> {
    let started = Instant::now();
    let result = run(dataset, strategy, config)?;
    let ri = result
        .ri
        .ok_or_else(|| Error::Pipeline("dataset has no labels to score against".into()))?;
    Ok(ResultRow {
        dataset: dataset.name.clone(),
        method: strategy.method_name().into(),
        sep_max: Some(result.chosen().sep_max),
        rand_index: ri,
        time_s: started.elapsed().as_secs_f64(),
    })
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Cluster {
            input,
            strategy,
            sep_max,
            stage,
            out,
        } => {
            let dataset = input.load()?;
            let config = stage.config(&dataset, sep_max)?;
            let row = cluster_row(&dataset, strategy.into(), &config)?;
            write_or_print(&[row], out.as_deref())
        }
        Command::Bench {
            dir,
            strategy,
            jobs,
            znorm,
            out,
        } => {
            let pairs = discover_ucr_pairs(&dir)?;
            if pairs.is_empty() {
                return Err(Error::Format {
                    path: dir,
                    message: "no *_TRAIN files found".into(),
                });
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::Pipeline(e.to_string()))?;
            let rows = pool.install(|| {
                pairs
                    .par_iter()
                    .map(|(_, train, test)| {
                        let ds = load_ucr(train, test.as_deref())?;
                        let ds = if znorm { ds.znormalized() } else { ds };
                        cluster_row(&ds, strategy.into(), &PipelineConfig::for_dataset(&ds))
                    })
                    .collect::<Result<Vec<_>, Error>>()
            })?;
            write_or_print(&rows, Some(&out))
        }
        Command::Baseline {
            input,
            method,
            alpha_grid,
            l,
            out,
        } => {
            let dataset = input.load()?;
            let l = match l.as_str() {
                "auto" => dataset.num_classes,
                v => v
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("--L expects auto or an integer, got {v:?}")))?,
            };
            let labels = dataset
                .labels()
                .ok_or_else(|| Error::Pipeline("dataset has no labels".into()))?;
            let started = Instant::now();
            let (assignment, name, alpha) = match method {
                BaselineMethod::DddtwHc => {
                    let grid = parse_alpha_grid(&alpha_grid)?;
                    let r = dddtw_hc(&dataset, l, &grid)?;
                    (r.partition.assignment, "dddtw_hc", Some(r.alpha))
                }
                BaselineMethod::EdHc => (ed_hc(&dataset, l)?.assignment, "ed_hc", None),
            };
            if let Some(a) = alpha {
                eprintln!("chosen alpha = {a}");
            }
            let row = ResultRow {
                dataset: dataset.name.clone(),
                method: name.into(),
                sep_max: None,
                rand_index: rand_index(&assignment, &labels)?,
                time_s: started.elapsed().as_secs_f64(),
            };
            write_or_print(&[row], out.as_deref())
        }
        Command::Indices {
            input,
            sep_max,
            stage,
        } => {
            let dataset = input.load()?;
            let config = stage.config(&dataset, sep_max)?;
            let entries = sweep(&dataset, &config)?;
            let mut header = vec!["sep_max".to_string()];
            header.extend(InternalIndex::ALL.iter().map(|i| i.name().to_string()));
            println!("{}", header.join("\t"));
            for e in &entries {
                match e.report() {
                    Some(r) => {
                        let cells: Vec<String> =
                            InternalIndex::ALL.iter().map(|&i| format!("{:.6}", r.get(i))).collect();
                        println!("{}\t{}", e.sep_max, cells.join("\t"));
                    }
                    None => println!("{}\tskipped", e.sep_max),
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidArgument(_) => 1,
                ref e if e.is_data_error() => 2,
                _ => 3,
            })
        }
    }
}
