use std::collections::BTreeMap;

use codemine::java::{ParseOutcome, enumerate_class_declarations, parse_compilation_unit};
use codemine::metrics::{METRIC_NAMES, SourceFile, class_id, compute_all, compute_metric_vector};
use codemine_testkit::fixtures::{expected_metrics, java_files, metric_fixture_dir};

fn sources() -> Vec<SourceFile> {
    java_files(&metric_fixture_dir())
        .into_iter()
        .map(|(path, content)| SourceFile { path, content })
        .collect()
}

#[test]
fn hand_annotated_classes_match() {
    let (header, expected) = expected_metrics(&metric_fixture_dir().join("expected.tsv"));
    assert_eq!(header, METRIC_NAMES);
    assert!(expected.len() >= 30);
    let rows = compute_all(&sources(), "fx");
    let got: BTreeMap<String, Vec<u64>> = rows
        .iter()
        .map(|r| (r.class_id.clone(), r.metrics.values().to_vec()))
        .collect();
    assert_eq!(got.len(), rows.len(), "class ids are unique");
    for (id, want) in &expected {
        let have = got.get(id).unwrap_or_else(|| panic!("missing row {id}"));
        let diff: Vec<String> = METRIC_NAMES
            .iter()
            .zip(want.iter().zip(have))
            .filter(|(_, (w, h))| w != h)
            .map(|(name, (w, h))| format!("{name}: want {w}, got {h}"))
            .collect();
        assert!(diff.is_empty(), "{id}: {}", diff.join(", "));
    }
    let extra: Vec<&String> = got.keys().filter(|k| !expected.contains_key(*k)).collect();
    assert!(extra.is_empty(), "unexpected rows {extra:?}");
}

#[test]
fn direct_definitions_agree_with_the_visitor() {
    let rows = compute_all(&sources(), "fx");
    let by_id: BTreeMap<&str, _> = rows.iter().map(|r| (r.class_id.as_str(), r.metrics)).collect();
    for file in sources() {
        let ParseOutcome::Parsed(unit) = parse_compilation_unit(&file.content, &file.path) else {
            panic!("{} must parse", file.path);
        };
        for decl in enumerate_class_declarations(&unit) {
            let id = class_id(&file.path, decl);
            assert_eq!(by_id[id.as_str()], compute_metric_vector(decl), "{id}");
        }
    }
}
