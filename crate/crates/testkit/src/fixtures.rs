//! The hand-annotated Java metric fixtures and their expected values.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

pub fn metric_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("metrics")
}

/// `(relative path, content)` of every `.java` file below `dir`, sorted.
pub fn java_files(dir: &Path) -> Vec<(String, String)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(String, String)>) {
        let mut entries: Vec<_> = fs::read_dir(dir)
            .expect("read fixture dir")
            .map(|e| e.expect("dir entry").path())
            .collect();
        entries.sort();
        for path in entries {
            if path.is_dir() {
                walk(root, &path, out);
            } else if path.extension().is_some_and(|e| e == "java") {
                let rel = path.strip_prefix(root).expect("below root");
                let rel = rel.to_string_lossy().replace('\\', "/");
                out.push((rel, fs::read_to_string(&path).expect("read fixture")));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out
}

/// Header names and `class_id -> values` from a tab-separated table.
pub fn expected_metrics(path: &Path) -> (Vec<String>, BTreeMap<String, Vec<u64>>) {
    let text = fs::read_to_string(path).expect("read expected table");
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .expect("header")
        .split('\t')
        .skip(1)
        .map(str::to_string)
        .collect();
    let rows = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut cols = l.split('\t');
            let id = cols.next().expect("class id").to_string();
            let values = cols.map(|v| v.parse().expect("integer cell")).collect();
            (id, values)
        })
        .collect();
    (header, rows)
}
