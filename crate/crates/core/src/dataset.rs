//! The class table: joining metric rows with fix counts, ARFF I/O and
//! train/test splitting.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::history::ClassFix;
use crate::metrics::{METRIC_NAMES, MetricsRow, row_key};
use crate::rng;

pub const RELATION: &str = "classes";
pub const ID_ATTRIBUTE: &str = "classID";
pub const TARGET_ATTRIBUTE: &str = "fixingRevisions";

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("duplicate key `{key}` in {side} input")]
    DuplicateKey { key: String, side: Side },
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("dataset needs at least 2 rows to split, got {0}")]
    TooSmall(usize),
    #[error("train fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Metrics,
    Fixes,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Metrics => "metrics",
            Side::Fixes => "fixes",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataRow {
    /// Full key, `<project_id>:<file_path>#<qualified_id>`.
    pub class_id: String,
    pub features: Vec<f64>,
    pub target: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub relation_name: String,
    /// Numeric feature columns between `classID` and `fixingRevisions`.
    pub feature_names: Vec<String>,
    pub rows: Vec<DataRow>,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>) -> Self {
        Dataset {
            relation_name: RELATION.to_string(),
            feature_names,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// All attribute names in file order.
    pub fn attribute_names(&self) -> Vec<&str> {
        std::iter::once(ID_ATTRIBUTE)
            .chain(self.feature_names.iter().map(String::as_str))
            .chain(std::iter::once(TARGET_ATTRIBUTE))
            .collect()
    }

    pub fn targets(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.target).collect()
    }

    pub fn column(&self, idx: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.features[idx]).collect()
    }

    fn with_rows(&self, rows: Vec<DataRow>) -> Dataset {
        Dataset {
            relation_name: self.relation_name.clone(),
            feature_names: self.feature_names.clone(),
            rows,
        }
    }
}

/// A key missing from one side of the join.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dropped {
    pub key: String,
    /// The side the key was missing from.
    pub missing_from: Side,
}

impl std::fmt::Display for Dropped {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}\tdropped:{}", self.key, self.missing_from)
    }
}

/// Inner join on `(project_id, class_id)`. Rows come out sorted by key;
/// keys present on one side only are reported in `Dropped`.
pub fn join_rows(
    metric_rows: &[MetricsRow],
    fixes: &[ClassFix],
) -> Result<(Dataset, Vec<Dropped>), DatasetError> {
    let mut metrics = BTreeMap::new();
    for row in metric_rows {
        let key = row.key();
        if metrics.insert(key.clone(), row).is_some() {
            return Err(DatasetError::DuplicateKey {
                key,
                side: Side::Metrics,
            });
        }
    }
    let mut fix_map = BTreeMap::new();
    for fix in fixes {
        let key = row_key(&fix.project_id, &fix.class_id);
        if fix_map.insert(key.clone(), fix.ncfix).is_some() {
            return Err(DatasetError::DuplicateKey {
                key,
                side: Side::Fixes,
            });
        }
    }
    let mut ds = Dataset::new(METRIC_NAMES.iter().map(|s| s.to_string()).collect());
    let mut dropped = Vec::new();
    for (key, row) in &metrics {
        match fix_map.get(key) {
            Some(&ncfix) => ds.rows.push(DataRow {
                class_id: key.clone(),
                features: row.metrics.values().iter().map(|&v| v as f64).collect(),
                target: ncfix as f64,
            }),
            None => dropped.push(Dropped {
                key: key.clone(),
                missing_from: Side::Fixes,
            }),
        }
    }
    for key in fix_map.keys().filter(|k| !metrics.contains_key(*k)) {
        dropped.push(Dropped {
            key: key.clone(),
            missing_from: Side::Metrics,
        });
    }
    for d in &dropped {
        log::info!("{d}");
    }
    Ok((ds, dropped))
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('\'');
    for c in s.chars() {
        if c == '\'' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('\'');
    out
}

/// Renders the ARFF text.
pub fn to_arff(ds: &Dataset) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "@RELATION {}", ds.relation_name);
    let _ = writeln!(out, "@ATTRIBUTE {ID_ATTRIBUTE} string");
    for name in &ds.feature_names {
        let _ = writeln!(out, "@ATTRIBUTE {name} NUMERIC");
    }
    let _ = writeln!(out, "@ATTRIBUTE {TARGET_ATTRIBUTE} NUMERIC");
    out.push_str("@DATA\n");
    for row in &ds.rows {
        out.push_str(&quote(&row.class_id));
        for v in row.features.iter().chain(std::iter::once(&row.target)) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_arff(ds: &Dataset, path: &Path) -> Result<(), DatasetError> {
    fs::write(path, to_arff(ds)).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_arff(path: &Path) -> Result<Dataset, DatasetError> {
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_arff(&text)
}

/// Splits a data line into raw fields, honoring single and double quotes.
fn split_fields(line: &str) -> Result<Vec<String>, String> {
    let mut fields = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        let mut field = String::new();
        if let Some(&q) = chars.peek().filter(|c| **c == '\'' || **c == '"') {
            chars.next();
            loop {
                match chars.next() {
                    Some('\\') => field.push(chars.next().ok_or("dangling escape")?),
                    Some(c) if c == q => break,
                    Some(c) => field.push(c),
                    None => return Err("unterminated quote".into()),
                }
            }
            while chars.peek().is_some_and(|c| c.is_whitespace()) {
                chars.next();
            }
            match chars.next() {
                None => {
                    fields.push(field);
                    return Ok(fields);
                }
                Some(',') => {}
                Some(c) => return Err(format!("unexpected `{c}` after quoted value")),
            }
        } else {
            let mut ended = true;
            for c in chars.by_ref() {
                if c == ',' {
                    ended = false;
                    break;
                }
                field.push(c);
            }
            fields.push(field.trim().to_string());
            if ended {
                return Ok(fields);
            }
            continue;
        }
        fields.push(field);
    }
}

#[derive(Debug, PartialEq)]
enum AttrType {
    String,
    Numeric,
}

pub fn parse_arff(text: &str) -> Result<Dataset, DatasetError> {
    let malformed = |line: usize, reason: String| DatasetError::Malformed { line, reason };
    let mut relation = None;
    let mut attrs: Vec<(String, AttrType)> = Vec::new();
    let mut in_data = false;
    let mut ds: Option<Dataset> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if !in_data {
            let mut parts = trimmed.split_whitespace();
            let keyword = parts.next().unwrap_or_default().to_ascii_uppercase();
            match keyword.as_str() {
                "@RELATION" => {
                    let name = parts.collect::<Vec<_>>().join(" ");
                    relation = Some(name.trim_matches(['\'', '"']).to_string());
                }
                "@ATTRIBUTE" => {
                    let name = parts
                        .next()
                        .ok_or_else(|| malformed(line, "attribute without a name".into()))?;
                    let ty = parts
                        .next()
                        .ok_or_else(|| malformed(line, format!("attribute `{name}` without a type")))?;
                    let ty = match ty.to_ascii_uppercase().as_str() {
                        "STRING" => AttrType::String,
                        "NUMERIC" | "REAL" | "INTEGER" => AttrType::Numeric,
                        other => return Err(malformed(line, format!("unsupported type `{other}`"))),
                    };
                    attrs.push((name.to_string(), ty));
                }
                "@DATA" => {
                    if attrs.len() < 2
                        || attrs[0] != (ID_ATTRIBUTE.to_string(), AttrType::String)
                        || attrs.last().map(|a| a.0.as_str()) != Some(TARGET_ATTRIBUTE)
                        || attrs[1..].iter().any(|a| a.1 != AttrType::Numeric)
                    {
                        return Err(malformed(
                            line,
                            format!(
                                "header must be `{ID_ATTRIBUTE} string`, numeric metrics, then `{TARGET_ATTRIBUTE}`"
                            ),
                        ));
                    }
                    let relation =
                        relation.take().ok_or_else(|| malformed(line, "missing @RELATION".into()))?;
                    let mut d = Dataset::new(
                        attrs[1..attrs.len() - 1].iter().map(|a| a.0.clone()).collect(),
                    );
                    d.relation_name = relation;
                    ds = Some(d);
                    in_data = true;
                }
                _ => return Err(malformed(line, format!("unexpected header line `{trimmed}`"))),
            }
            continue;
        }
        let d = ds.as_mut().expect("set when @DATA is read");
        let fields = split_fields(trimmed).map_err(|reason| malformed(line, reason))?;
        if fields.len() != attrs.len() {
            return Err(malformed(
                line,
                format!("expected {} values, found {}", attrs.len(), fields.len()),
            ));
        }
        let mut numbers = Vec::with_capacity(fields.len() - 1);
        for value in &fields[1..] {
            let v: f64 = value
                .parse()
                .map_err(|_| malformed(line, format!("`{value}` is not numeric")))?;
            numbers.push(v);
        }
        let target = numbers.pop().expect("at least the target column");
        d.rows.push(DataRow {
            class_id: fields[0].clone(),
            features: numbers,
            target,
        });
    }
    ds.ok_or_else(|| malformed(last_line.max(1), "missing @DATA marker".into()))
}

/// Seeded shuffle, then the first `floor(n * train_fraction)` rows train.
pub fn split_dataset(
    ds: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), DatasetError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::BadFraction(train_fraction));
    }
    let n = ds.len();
    if n < 2 {
        return Err(DatasetError::TooSmall(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng::mix_label(seed, "split"));
    order.shuffle(&mut rng);
    let n_train = (n as f64 * train_fraction).floor() as usize;
    let pick = |idx: &[usize]| ds.with_rows(idx.iter().map(|&i| ds.rows[i].clone()).collect());
    Ok((pick(&order[..n_train]), pick(&order[n_train..])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::java::DeclarationKind;
    use crate::metrics::MetricVector;
    use proptest::prelude::*;

    fn metric_row(project: &str, class: &str, nom: u64) -> MetricsRow {
        MetricsRow {
            project_id: project.into(),
            class_id: class.into(),
            kind: DeclarationKind::Class,
            metrics: MetricVector {
                nom,
                cnom: nom,
                rfc: nom,
                ..Default::default()
            },
            ncfix: None,
        }
    }

    fn fix(project: &str, class: &str, ncfix: u64) -> ClassFix {
        ClassFix {
            project_id: project.into(),
            class_id: class.into(),
            ncfix,
        }
    }

    fn sample(n: usize) -> Dataset {
        let mut ds = Dataset::new(vec!["A".into(), "B".into()]);
        for i in 0..n {
            ds.rows.push(DataRow {
                class_id: format!("p:F{i}.java#F{i}"),
                features: vec![i as f64, 0.5 * i as f64],
                target: (i % 3) as f64,
            });
        }
        ds
    }

    #[test]
    fn join_matching_rows() {
        let metrics: Vec<_> = (0..4).map(|i| metric_row("p", &format!("c{i}"), i)).collect();
        let fixes: Vec<_> = (0..4).map(|i| fix("p", &format!("c{i}"), i * 2)).collect();
        let (ds, dropped) = join_rows(&metrics, &fixes).unwrap();
        assert_eq!(ds.len(), 4);
        assert!(dropped.is_empty());
        assert_eq!(ds.rows[3].class_id, "p:c3");
        assert_eq!(ds.rows[3].target, 6.0);
        assert_eq!(ds.feature_names.len(), 12);
    }

    #[test]
    fn join_drops_one_sided_keys() {
        let metrics = vec![metric_row("p", "a", 1), metric_row("p", "b", 1)];
        let fixes = vec![fix("p", "a", 0), fix("q", "z", 3)];
        let (ds, dropped) = join_rows(&metrics, &fixes).unwrap();
        assert_eq!(ds.len(), 1);
        let log: Vec<_> = dropped.iter().map(|d| d.to_string()).collect();
        assert_eq!(log, ["p:b\tdropped:fixes", "q:z\tdropped:metrics"]);
    }

    #[test]
    fn join_rejects_duplicates() {
        let metrics = vec![metric_row("p", "a", 1), metric_row("p", "a", 2)];
        let err = join_rows(&metrics, &[]).unwrap_err();
        assert!(matches!(err, DatasetError::DuplicateKey { ref key, side: Side::Metrics } if key == "p:a"));
        let err = join_rows(&[], &[fix("p", "x", 0), fix("p", "x", 0)]).unwrap_err();
        assert!(err.to_string().contains("p:x"));
    }

    #[test]
    fn header_layout() {
        let ds = Dataset::new(METRIC_NAMES.iter().map(|s| s.to_string()).collect());
        let text = to_arff(&ds);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "@RELATION classes");
        assert_eq!(lines[1], "@ATTRIBUTE classID string");
        assert_eq!(lines.iter().filter(|l| l.starts_with("@ATTRIBUTE")).count(), 14);
        assert_eq!(lines[13], "@ATTRIBUTE RFC NUMERIC");
        assert_eq!(lines[14], "@ATTRIBUTE fixingRevisions NUMERIC");
        assert_eq!(lines[15], "@DATA");
        assert_eq!(lines.len(), 16);
    }

    #[test]
    fn quoting_and_round_trip() {
        let mut ds = sample(3);
        ds.rows[0].class_id = "p:it's\\odd.java#A$1".into();
        ds.rows[1].features[1] = 0.1;
        let text = to_arff(&ds);
        assert!(text.contains("'p:it\\'s\\\\odd.java#A$1',0,0,0\n"));
        let back = parse_arff(&text).unwrap();
        assert_eq!(back, ds);
        assert_eq!(to_arff(&back), text);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.arff");
        let ds = sample(5);
        write_arff(&ds, &path).unwrap();
        assert_eq!(read_arff(&path).unwrap(), ds);
        assert!(write_arff(&ds, &dir.path().join("missing/dir/c.arff")).is_err());
    }

    #[test]
    fn read_errors_carry_lines() {
        let text = to_arff(&sample(2)).replace("'p:F1.java#F1',1,0.5,1", "'p:F1.java#F1',1,1");
        let err = parse_arff(&text).unwrap_err();
        assert!(matches!(err, DatasetError::Malformed { line: 8, .. }), "{err}");

        let err = parse_arff("@RELATION classes\n@ATTRIBUTE classID string\n@ATTRIBUTE fixingRevisions NUMERIC\n")
            .unwrap_err();
        assert!(err.to_string().contains("@DATA"));

        let err = parse_arff("@RELATION classes\n@ATTRIBUTE classID string\n@ATTRIBUTE x NUMERIC\n@DATA\n'a',zz\n")
            .unwrap_err();
        assert!(matches!(err, DatasetError::Malformed { line: 4, .. }), "{err}");
    }

    #[test]
    fn empty_dataset_has_header_only() {
        let ds = Dataset::new(vec!["NOM".into()]);
        let text = to_arff(&ds);
        assert!(text.ends_with("@DATA\n"));
        assert_eq!(parse_arff(&text).unwrap(), ds);
    }

    #[test]
    fn split_sizes() {
        let (train, test) = split_dataset(&sample(1000), 0.9, 1).unwrap();
        assert_eq!((train.len(), test.len()), (900, 100));
        let (train, test) = split_dataset(&sample(7), 0.9, 1).unwrap();
        assert_eq!((train.len(), test.len()), (6, 1));
        assert_eq!(split_dataset(&sample(50), 0.9, 4).unwrap(), split_dataset(&sample(50), 0.9, 4).unwrap());
        assert!(matches!(split_dataset(&sample(1), 0.9, 1), Err(DatasetError::TooSmall(1))));
        assert!(split_dataset(&sample(5), 1.0, 1).is_err());
    }

    proptest! {
        #[test]
        fn split_partitions(n in 2usize..200, frac in 0.05f64..0.95, seed in any::<u64>()) {
            let ds = sample(n);
            let (train, test) = split_dataset(&ds, frac, seed).unwrap();
            prop_assert_eq!(train.len(), (n as f64 * frac).floor() as usize);
            prop_assert_eq!(train.len() + test.len(), n);
            let mut ids: Vec<_> = train.rows.iter().chain(&test.rows).map(|r| r.class_id.clone()).collect();
            ids.sort();
            let mut all: Vec<_> = ds.rows.iter().map(|r| r.class_id.clone()).collect();
            all.sort();
            prop_assert_eq!(ids, all);
        }

        #[test]
        fn arff_write_read_write_is_stable(
            values in prop::collection::vec((any::<u32>(), -1e6f64..1e6, 0u16..500), 0..20),
            name in "[a-zA-Z0-9_'$#./\\\\ :-]{1,20}",
        ) {
            let mut ds = Dataset::new(vec!["X".into(), "Y".into()]);
            for (i, (a, b, t)) in values.into_iter().enumerate() {
                ds.rows.push(DataRow { class_id: format!("{name}{i}"), features: vec![a as f64, b], target: t as f64 });
            }
            let first = to_arff(&ds);
            let back = parse_arff(&first).unwrap();
            prop_assert_eq!(&back, &ds);
            prop_assert_eq!(to_arff(&back), first);
        }
    }
}
