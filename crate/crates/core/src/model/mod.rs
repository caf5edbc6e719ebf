//! Random-forest regression of `fixingRevisions` from the metric columns.
//!
//! Each tree is grown on a bootstrap sample (n draws with replacement) and
//! draws `n_features_per_split` candidate features without replacement at
//! every split node. Tree `t` owns the random stream `mix(seed, t)`, so a
//! forest is identical whether its trees are grown in parallel or not.

mod eval;
mod tree;
mod validate;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::exec::Execution;
use crate::rng;

pub use eval::{EvaluationReport, evaluate, evaluate_with_baselines, format_sig};
pub use tree::{Node, RegressionTree};
pub use validate::{CrossValidation, cross_validate, cross_validate_with, fold_assignment, holdout};

use tree::{TreeBuilder, TreeParams};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("cannot train on an empty dataset")]
    EmptyDataset,
    #[error("row {row}: target is not a finite number")]
    NonNumericTarget { row: usize },
    #[error("expected {expected} features, got {got}")]
    FeatureMismatch { expected: usize, got: usize },
    #[error("{rows} rows cannot be split into {folds} folds")]
    TooFewRows { rows: usize, folds: usize },
    #[error("predictions ({predictions}) and actuals ({actuals}) differ in length")]
    LengthMismatch { predictions: usize, actuals: usize },
    #[error("nothing to evaluate")]
    NoPairs,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Dataset(#[from] crate::dataset::DatasetError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    /// Clamped to the number of feature columns.
    pub n_features_per_split: usize,
    pub cv_folds: usize,
    pub seed: u64,
    pub min_samples_split: usize,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 200,
            max_depth: 12,
            n_features_per_split: 12,
            cv_folds: 10,
            seed: 1,
            min_samples_split: 2,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let checks = [
            (self.n_trees, "n_trees"),
            (self.max_depth, "max_depth"),
            (self.n_features_per_split, "n_features_per_split"),
            (self.cv_folds, "cv_folds"),
            (self.min_samples_split, "min_samples_split"),
        ];
        for (value, name) in checks {
            if value == 0 {
                return Err(ModelError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Forest {
    pub trees: Vec<RegressionTree>,
    pub n_features: usize,
}

impl Forest {
    /// Mean of the per-tree predictions.
    pub fn predict(&self, row: &[f64]) -> Result<f64, ModelError> {
        if row.len() < self.n_features {
            return Err(ModelError::FeatureMismatch {
                expected: self.n_features,
                got: row.len(),
            });
        }
        let sum: f64 = self.trees.iter().map(|t| t.predict(row)).sum();
        Ok(sum / self.trees.len() as f64)
    }
}

pub fn predict(forest: &Forest, row: &[f64]) -> Result<f64, ModelError> {
    forest.predict(row)
}

pub fn train_forest(train: &Dataset, cfg: &ForestConfig) -> Result<Forest, ModelError> {
    train_forest_with(train, cfg, Execution::default())
}

pub fn train_forest_with(
    train: &Dataset,
    cfg: &ForestConfig,
    exec: Execution,
) -> Result<Forest, ModelError> {
    let x: Vec<Vec<f64>> = train.rows.iter().map(|r| r.features.clone()).collect();
    let y = train.targets();
    fit(&x, &y, cfg, exec)
}

/// Grows a forest on row-major features `x` and targets `y`.
pub fn fit(
    x: &[Vec<f64>],
    y: &[f64],
    cfg: &ForestConfig,
    exec: Execution,
) -> Result<Forest, ModelError> {
    cfg.validate()?;
    if y.is_empty() {
        return Err(ModelError::EmptyDataset);
    }
    if x.len() != y.len() {
        return Err(ModelError::LengthMismatch {
            predictions: x.len(),
            actuals: y.len(),
        });
    }
    if let Some(row) = y.iter().position(|v| !v.is_finite()) {
        return Err(ModelError::NonNumericTarget { row });
    }
    let n_features = x[0].len();
    if let Some(bad) = x.iter().find(|r| r.len() != n_features) {
        return Err(ModelError::FeatureMismatch {
            expected: n_features,
            got: bad.len(),
        });
    }
    let params = TreeParams {
        max_depth: cfg.max_depth,
        min_samples_split: cfg.min_samples_split,
        features_per_split: cfg.n_features_per_split.min(n_features),
    };
    let n = y.len();
    let trees = exec.map_range(cfg.n_trees, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(rng::mix(cfg.seed, t as u64));
        let mut samples: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        TreeBuilder::new(x, y, &params, &mut rng).build(&mut samples)
    });
    Ok(Forest { trees, n_features })
}
