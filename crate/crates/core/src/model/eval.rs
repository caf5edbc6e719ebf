//! Regression evaluation: correlation, absolute and squared errors, and
//! errors relative to a predict-the-mean baseline.

use std::fmt;

use super::ModelError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationReport {
    /// Pearson correlation; `None` when either side has zero variance.
    pub r: Option<f64>,
    pub mae: f64,
    pub rmse: f64,
    /// Percentages; `None` when the baseline makes no error.
    pub rae: Option<f64>,
    pub rrse: Option<f64>,
    pub n: usize,
}

pub fn evaluate(
    predictions: &[f64],
    actuals: &[f64],
    baseline_mean: f64,
) -> Result<EvaluationReport, ModelError> {
    let baselines = vec![baseline_mean; actuals.len()];
    evaluate_with_baselines(predictions, actuals, &baselines)
}

/// Like [`evaluate`], with a baseline per pair: pooled cross-validation
/// compares each held-out row against the mean of its own training fold.
pub fn evaluate_with_baselines(
    predictions: &[f64],
    actuals: &[f64],
    baselines: &[f64],
) -> Result<EvaluationReport, ModelError> {
    if predictions.len() != actuals.len() || baselines.len() != actuals.len() {
        return Err(ModelError::LengthMismatch {
            predictions: predictions.len(),
            actuals: actuals.len(),
        });
    }
    let n = actuals.len();
    if n == 0 {
        return Err(ModelError::NoPairs);
    }
    let mut abs_err = 0.0;
    let mut sq_err = 0.0;
    let mut abs_base = 0.0;
    let mut sq_base = 0.0;
    for i in 0..n {
        let e = predictions[i] - actuals[i];
        let b = baselines[i] - actuals[i];
        abs_err += e.abs();
        sq_err += e * e;
        abs_base += b.abs();
        sq_base += b * b;
    }
    let nf = n as f64;
    let relative = |num: f64, den: f64| (den > 0.0).then(|| num / den * 100.0);
    Ok(EvaluationReport {
        r: pearson(predictions, actuals),
        mae: abs_err / nf,
        rmse: (sq_err / nf).sqrt(),
        rae: relative(abs_err, abs_base),
        rrse: relative(sq_err, sq_base).map(|pct| (pct / 100.0).sqrt() * 100.0),
        n,
    })
}

fn pearson(p: &[f64], a: &[f64]) -> Option<f64> {
    let n = p.len() as f64;
    let mp = p.iter().sum::<f64>() / n;
    let ma = a.iter().sum::<f64>() / n;
    let (mut cov, mut vp, mut va) = (0.0, 0.0, 0.0);
    for (x, y) in p.iter().zip(a) {
        let dx = x - mp;
        let dy = y - ma;
        cov += dx * dy;
        vp += dx * dx;
        va += dy * dy;
    }
    if vp <= 0.0 || va <= 0.0 {
        return None;
    }
    Some((cov / (vp.sqrt() * va.sqrt())).clamp(-1.0, 1.0))
}

/// Formats with three significant digits; zero prints as `0`.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (2 - magnitude).max(0) as usize;
    let rounded = format!("{x:.decimals$}");
    // rounding may carry into a new digit, e.g. 9.996 -> 10.00
    let carried = rounded.parse::<f64>().map_or(magnitude, |v| v.abs().log10().floor() as i32);
    if carried > magnitude && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        rounded
    }
}

fn opt(v: Option<f64>, suffix: &str) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{}{suffix}", format_sig(x)))
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R={} MAE={} RMSE={} RAE={} RRSE={}",
            opt(self.r, ""),
            format_sig(self.mae),
            format_sig(self.rmse),
            opt(self.rae, "%"),
            opt(self.rrse, "%"),
        )
    }
}
