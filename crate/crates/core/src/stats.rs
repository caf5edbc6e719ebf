//! Descriptive reference values per metric column and the split of classes
//! into fixed and never-fixed.

use std::fmt;

use crate::dataset::Dataset;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("no rows in population {0}")]
    EmptyPopulation(Population),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Population {
    All,
    FixesGt0,
}

impl Population {
    pub fn as_str(self) -> &'static str {
        match self {
            Population::All => "ALL",
            Population::FixesGt0 => "FIXES_GT_0",
        }
    }

    fn admits(self, target: f64) -> bool {
        match self {
            Population::All => true,
            Population::FixesGt0 => target > 0.0,
        }
    }
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    pub stddev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsTable {
    pub population: Population,
    pub size: usize,
    /// One entry per metric column, in dataset order.
    pub rows: Vec<(String, Summary)>,
}

/// Panics on an empty slice.
pub fn summarize(values: &[f64]) -> Summary {
    assert!(!values.is_empty(), "summary of an empty sample");
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let stddev = if n < 2 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    Summary {
        mean,
        median,
        stddev,
    }
}

pub fn reference_values(ds: &Dataset, population: Population) -> Result<StatsTable, StatsError> {
    let kept: Vec<&[f64]> = ds
        .rows
        .iter()
        .filter(|r| population.admits(r.target))
        .map(|r| r.features.as_slice())
        .collect();
    if kept.is_empty() {
        return Err(StatsError::EmptyPopulation(population));
    }
    let rows = ds
        .feature_names
        .iter()
        .enumerate()
        .map(|(col, name)| {
            let column: Vec<f64> = kept.iter().map(|f| f[col]).collect();
            (name.clone(), summarize(&column))
        })
        .collect();
    Ok(StatsTable {
        population,
        size: kept.len(),
        rows,
    })
}

pub const STATS_HEADER: &str = "metric,population,mean,median,stddev";

impl StatsTable {
    /// CSV rows without the header.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (name, s) in &self.rows {
            out.push_str(&format!(
                "{name},{},{:.2},{:.2},{:.2}\n",
                self.population, s.mean, s.median, s.stddev
            ));
        }
        out
    }
}

/// Header plus the rows of every table.
pub fn stats_csv(tables: &[StatsTable]) -> String {
    let mut out = format!("{STATS_HEADER}\n");
    for t in tables {
        out.push_str(&t.csv_rows());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixDistribution {
    pub zero_count: usize,
    pub positive_count: usize,
}

impl FixDistribution {
    pub fn total(&self) -> usize {
        self.zero_count + self.positive_count
    }

    pub fn zero_pct(&self) -> f64 {
        100.0 * self.zero_count as f64 / self.total() as f64
    }

    pub fn positive_pct(&self) -> f64 {
        100.0 * self.positive_count as f64 / self.total() as f64
    }

    pub fn to_csv(&self) -> String {
        format!(
            "bucket,count,pct\nzero,{},{:.1}\npositive,{},{:.1}\n",
            self.zero_count,
            self.zero_pct(),
            self.positive_count,
            self.positive_pct()
        )
    }
}

pub fn fix_distribution(ds: &Dataset) -> Result<FixDistribution, StatsError> {
    if ds.is_empty() {
        return Err(StatsError::EmptyPopulation(Population::All));
    }
    let positive_count = ds.rows.iter().filter(|r| r.target > 0.0).count();
    Ok(FixDistribution {
        zero_count: ds.len() - positive_count,
        positive_count,
    })
}
