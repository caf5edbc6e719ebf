//! Command implementations behind the `codemine` binary.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use codemine::dataset::{Dataset, Dropped, join_rows, read_arff, write_arff};
use codemine::exec::Execution;
use codemine::history::{
    ClassFix, FixClassifier, FixCountTable, RevisionRef, compute_ncfix_with, get_snapshot,
    java_sources,
};
use codemine::ingest::{
    Project, Rejection, SelectionCriteria, SelectionRecord, evaluate, load_manifest, open_project,
};
use codemine::metrics::{METRIC_NAMES, MetricsRow, compute_all_with, metric_dump};
use codemine::model::{ForestConfig, cross_validate, holdout};
use codemine::stats::{Population, StatsError, fix_distribution, reference_values, stats_csv};

#[derive(Debug, Parser)]
#[command(name = "codemine", version, about = "Class metrics, fix counts and defect models from git histories")]
pub struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the project selection criteria and write selection.tsv.
    Select(SelectArgs),
    /// Mine accepted projects into classes.arff plus per-metric and fix-count dumps.
    Mine(SelectArgs),
    /// Fit the random forest and print its evaluation.
    Train(TrainArgs),
    /// Write reference values and the fix distribution as CSV.
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Holds clones of remote projects.
    #[arg(long, default_value = "work")]
    pub workdir: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Projects need more revisions than this.
    #[arg(long, default_value_t = 100)]
    pub min_commits: usize,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub arff: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trees: usize,
    #[arg(long, default_value_t = 12)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 12)]
    pub features: usize,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Evaluate on a held-out split instead of cross-validating.
    #[arg(long)]
    pub holdout: bool,
    /// Training fraction for --holdout.
    #[arg(long, default_value_t = 0.9)]
    pub split: f64,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub arff: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad input or usage.
    Input(anyhow::Error),
    /// Ran fine but produced nothing.
    Empty(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Empty(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => write!(f, "{e:#}"),
            CliError::Empty(msg) => f.write_str(msg),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Input(e)
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Select(args) => cmd_select(&args).map(|_| ()),
        Command::Mine(args) => cmd_mine(&args).map(|_| ()),
        Command::Train(args) => {
            let report = cmd_train(&args)?;
            print!("{report}");
            Ok(())
        }
        Command::Stats(args) => {
            let (reference, distribution) = cmd_stats(&args)?;
            print!("{reference}\n{distribution}");
            Ok(())
        }
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Opens every manifest project and applies the criteria. Projects that
/// cannot be opened are rejected as having no repository.
fn select(args: &SelectArgs) -> Result<(Vec<Project>, Vec<SelectionRecord>), CliError> {
    let specs = load_manifest(&args.manifest)
        .with_context(|| format!("manifest {}", args.manifest.display()))?;
    let criteria = SelectionCriteria {
        min_commits_exclusive: args.min_commits,
        ..SelectionCriteria::default()
    };
    let opened: Vec<_> = specs
        .into_par_iter()
        .map(|spec| {
            let id = spec.id.clone();
            (id, open_project(spec, &args.workdir))
        })
        .collect();
    let mut accepted = Vec::new();
    let mut report = Vec::new();
    for (id, result) in opened {
        let verdict = match result {
            Ok(project) => {
                let verdict = evaluate(&project, &criteria);
                if verdict.is_ok() {
                    accepted.push(project);
                }
                verdict
            }
            Err(err) => {
                log::warn!("{id}: {err}");
                Err(Rejection::NoRepository)
            }
        };
        report.push(SelectionRecord { id, verdict });
    }
    let text: String = report.iter().map(|r| format!("{r}\n")).collect();
    write(&args.out.join("selection.tsv"), &text)?;
    Ok((accepted, report))
}

pub fn cmd_select(args: &SelectArgs) -> Result<Vec<SelectionRecord>, CliError> {
    let (accepted, report) = select(args)?;
    eprintln!("accepted {} of {} projects", accepted.len(), report.len());
    Ok(report)
}

struct Mined {
    rows: Vec<MetricsRow>,
    fixes: Vec<ClassFix>,
    table: FixCountTable,
}

fn mine_project(project: &Project, exec: Execution) -> anyhow::Result<Mined> {
    let snapshot = get_snapshot(project, &RevisionRef::Head)?;
    let sources = java_sources(project, &snapshot)?;
    let rows = compute_all_with(&sources, project.id(), exec);
    let (table, fixes) = compute_ncfix_with(project, &FixClassifier::default(), exec)?;
    Ok(Mined { rows, fixes, table })
}

/// Mines every accepted project and writes the dataset. Returns it with the
/// join's dropped keys.
pub fn cmd_mine(args: &SelectArgs) -> Result<(Dataset, Vec<Dropped>), CliError> {
    let (accepted, report) = select(args)?;
    eprintln!("accepted {} of {} projects", accepted.len(), report.len());
    if accepted.is_empty() {
        return Err(CliError::Empty("no accepted projects to mine".into()));
    }
    let exec = Execution::default();
    let mined: Vec<(String, anyhow::Result<Mined>)> = accepted
        .into_par_iter()
        .map(|p| (p.id().to_string(), mine_project(&p, exec)))
        .collect();
    let mut rows = Vec::new();
    let mut fixes = Vec::new();
    for (id, result) in mined {
        let m = result.with_context(|| format!("mining {id}"))?;
        write(&args.out.join("ncfix").join(format!("{id}.tsv")), &m.table.dump())?;
        rows.extend(m.rows);
        fixes.extend(m.fixes);
    }
    for name in METRIC_NAMES {
        let dump = metric_dump(&rows, name).expect("known metric");
        write(&args.out.join("metrics").join(format!("{name}.tsv")), &dump)?;
    }
    let (ds, dropped) = join_rows(&rows, &fixes).context("joining metrics with fix counts")?;
    let log: String = dropped.iter().map(|d| format!("{d}\n")).collect();
    write(&args.out.join("join.log"), &log)?;
    if ds.is_empty() {
        return Err(CliError::Empty("no classes mined from the accepted projects".into()));
    }
    let arff = args.out.join("classes.arff");
    write_arff(&ds, &arff).context("writing ARFF")?;
    eprintln!("wrote {} classes to {}", ds.len(), arff.display());
    Ok((ds, dropped))
}

fn read_dataset(path: &Path) -> anyhow::Result<Dataset> {
    read_arff(path).with_context(|| format!("reading {}", path.display()))
}

/// Returns the report text: a header line and the statistics line.
pub fn cmd_train(args: &TrainArgs) -> Result<String, CliError> {
    let ds = read_dataset(&args.arff)?;
    let cfg = ForestConfig {
        n_trees: args.trees,
        max_depth: args.max_depth,
        n_features_per_split: args.features,
        cv_folds: args.folds,
        seed: args.seed,
        ..ForestConfig::default()
    };
    cfg.validate().map_err(anyhow::Error::from)?;
    if ds.is_empty() {
        return Err(CliError::Empty(format!("{} has no rows", args.arff.display())));
    }
    let text = if args.holdout {
        let report = holdout(&ds, &cfg, args.split, Execution::default())
            .map_err(|e| anyhow::anyhow!("holdout evaluation: {e}"))?;
        format!(
            "mode=holdout split={} rows={} seed={}\n{report}\n",
            args.split,
            ds.len(),
            cfg.seed
        )
    } else {
        if ds.len() < cfg.cv_folds {
            return Err(CliError::Input(anyhow::anyhow!(
                "--folds {} needs at least {} rows, {} has {}",
                cfg.cv_folds,
                cfg.cv_folds,
                args.arff.display(),
                ds.len()
            )));
        }
        let cv = cross_validate(&ds, &cfg).map_err(anyhow::Error::from)?;
        format!(
            "mode=cv folds={} rows={} seed={}\n{}\n",
            cfg.cv_folds,
            ds.len(),
            cfg.seed,
            cv.report
        )
    };
    if let Some(out) = &args.out {
        write(out, &text)?;
    }
    Ok(text)
}

/// Writes `reference_values.csv` and `fix_distribution.csv`; returns both.
pub fn cmd_stats(args: &StatsArgs) -> Result<(String, String), CliError> {
    let ds = read_dataset(&args.arff)?;
    let distribution = match fix_distribution(&ds) {
        Ok(d) => d,
        Err(_) => return Err(CliError::Empty(format!("{} has no rows", args.arff.display()))),
    };
    let mut tables = Vec::new();
    for population in [Population::All, Population::FixesGt0] {
        match reference_values(&ds, population) {
            Ok(t) => tables.push(t),
            Err(StatsError::EmptyPopulation(p)) => log::warn!("population {p} is empty"),
        }
    }
    let reference = stats_csv(&tables);
    let distribution = distribution.to_csv();
    write(&args.out.join("reference_values.csv"), &reference)?;
    write(&args.out.join("fix_distribution.csv"), &distribution)?;
    Ok((reference, distribution))
}
