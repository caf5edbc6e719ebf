//! k-fold cross-validation with pooled statistics, and the holdout protocol.

use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::{EvaluationReport, ForestConfig, ModelError, evaluate, evaluate_with_baselines, fit};
use crate::dataset::{Dataset, split_dataset};
use crate::exec::Execution;
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation {
    pub report: EvaluationReport,
    /// Held-out prediction for each row, in dataset order.
    pub predictions: Vec<f64>,
    /// Fold that held out each row.
    pub fold_of: Vec<usize>,
}

/// Seeded shuffle of `0..n`, cut into `folds` contiguous near-equal parts.
/// The first `n % folds` folds get one extra row.
pub fn fold_assignment(n: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng::mix_label(seed, "shuffle"));
    order.shuffle(&mut rng);
    let base = n / folds.max(1);
    let extra = n % folds.max(1);
    let mut fold_of = vec![0; n];
    let mut at = 0;
    for fold in 0..folds {
        let size = base + usize::from(fold < extra);
        for &row in &order[at..at + size] {
            fold_of[row] = fold;
        }
        at += size;
    }
    fold_of
}

pub fn cross_validate(ds: &Dataset, cfg: &ForestConfig) -> Result<CrossValidation, ModelError> {
    cross_validate_with(ds, cfg, Execution::default())
}

/// Folds run one after another; trees within a fold use `exec`.
pub fn cross_validate_with(
    ds: &Dataset,
    cfg: &ForestConfig,
    exec: Execution,
) -> Result<CrossValidation, ModelError> {
    cfg.validate()?;
    let n = ds.len();
    if n < cfg.cv_folds {
        return Err(ModelError::TooFewRows {
            rows: n,
            folds: cfg.cv_folds,
        });
    }
    let fold_of = fold_assignment(n, cfg.cv_folds, cfg.seed);
    let mut predictions = vec![0.0; n];
    let mut baselines = vec![0.0; n];
    for fold in 0..cfg.cv_folds {
        let (held, kept): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| fold_of[i] == fold);
        let x: Vec<Vec<f64>> = kept.iter().map(|&i| ds.rows[i].features.clone()).collect();
        let y: Vec<f64> = kept.iter().map(|&i| ds.rows[i].target).collect();
        let forest = fit(&x, &y, cfg, exec)?;
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        for i in held {
            predictions[i] = forest.predict(&ds.rows[i].features)?;
            baselines[i] = mean;
        }
    }
    let report = evaluate_with_baselines(&predictions, &ds.targets(), &baselines)?;
    Ok(CrossValidation {
        report,
        predictions,
        fold_of,
    })
}

/// Trains on a seeded `train_fraction` of the rows and scores the rest
/// against the training mean.
pub fn holdout(
    ds: &Dataset,
    cfg: &ForestConfig,
    train_fraction: f64,
    exec: Execution,
) -> Result<EvaluationReport, ModelError> {
    cfg.validate()?;
    let (train, test) = split_dataset(ds, train_fraction, cfg.seed)?;
    if train.is_empty() || test.is_empty() {
        return Err(ModelError::TooFewRows {
            rows: ds.len(),
            folds: 2,
        });
    }
    let forest = super::train_forest_with(&train, cfg, exec)?;
    let predictions = test
        .rows
        .iter()
        .map(|r| forest.predict(&r.features))
        .collect::<Result<Vec<_>, _>>()?;
    let y = train.targets();
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    evaluate(&predictions, &test.targets(), mean)
}
