use std::collections::BTreeMap;
use std::path::Path;

use codemine::history::{
    ChangeKind, RevisionRef, compute_ncfix, get_snapshot, java_sources, list_revisions,
};
use codemine::ingest::{
    Origin, ProjectSpec, SelectionCriteria, Source, detect_java, load_manifest, open_project,
    select_projects,
};
use codemine_testkit::{Corpus, Expected, FixtureRepo, brute_force_ncfix};

fn local(id: &str, path: &Path) -> ProjectSpec {
    ProjectSpec {
        id: id.into(),
        source: Source::Local(path.to_path_buf()),
        name: id.into(),
    }
}

fn five_commit_repo(dir: &Path) -> FixtureRepo {
    let mut repo = FixtureRepo::init(dir).unwrap();
    repo.write("src/A.java", "class A {}\n").write("README", "hi\n");
    repo.commit("Initial import").unwrap();
    repo.write("src/A.java", "class A { void f() {} }\n");
    repo.commit("Fix f").unwrap();
    repo.write("src/B.java", "class B {}\n");
    repo.commit("Add B").unwrap();
    repo.delete("README");
    repo.commit("Drop readme").unwrap();
    repo.rename("src/B.java", "lib/B.java");
    repo.commit("Move B, fixes layout").unwrap();
    repo
}

#[test]
fn opens_a_local_repository() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = five_commit_repo(&dir.path().join("r"));
    let project = open_project(local("r", fixture.path()), dir.path()).unwrap();
    assert_eq!(project.origin, Origin::Local);
    assert_eq!(project.revision_count(), 5);
    let revs = list_revisions(&project);
    let ids: Vec<String> = revs.iter().map(|r| r.id.clone()).collect();
    let expected: Vec<String> = fixture.log().iter().map(|c| c.id.to_string()).collect();
    assert_eq!(ids, expected);
    assert!(revs[0].changes.iter().all(|c| c.change_kind == ChangeKind::Added));
    assert_eq!(revs[0].changes.len(), 2);
    assert_eq!(revs[0].committer, "Fixture Author");
    let moved: BTreeMap<&str, ChangeKind> = revs[4]
        .changes
        .iter()
        .map(|c| (c.path.as_str(), c.change_kind))
        .collect();
    assert_eq!(
        moved,
        BTreeMap::from([("lib/B.java", ChangeKind::Added), ("src/B.java", ChangeKind::Deleted)])
    );
}

#[test]
fn clones_urls_once_and_reuses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = five_commit_repo(&dir.path().join("upstream"));
    let url = format!("file://{}", fixture.path().display());
    let workdir = dir.path().join("work");
    let spec = ProjectSpec {
        id: "u".into(),
        source: Source::Url(url),
        name: "u".into(),
    };
    let first = open_project(spec.clone(), &workdir).unwrap();
    assert_eq!(first.origin, Origin::Cloned);
    let second = open_project(spec, &workdir).unwrap();
    assert_eq!(second.origin, Origin::Cached);
    assert_eq!(first.revisions(), second.revisions());
    assert_eq!(first.revision_count(), 5);
}

#[test]
fn missing_repository_is_an_open_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = open_project(local("x", &dir.path().join("nope")), dir.path()).unwrap_err();
    assert!(err.to_string().contains("cannot open repository"));
}

#[test]
fn merges_follow_the_first_parent_chain() {
    let dir = tempfile::tempdir().unwrap();
    let mut repo = FixtureRepo::init(dir.path()).unwrap();
    repo.write("A.java", "class A {}\n");
    repo.commit("root").unwrap();
    let base = repo.checkpoint();
    repo.write("S.java", "class S {}\n");
    repo.commit("side 1").unwrap();
    repo.write("S.java", "class S { int x; }\n");
    repo.commit("side 2, fix").unwrap();
    let side = repo.checkpoint();
    repo.restore(&base).unwrap();
    repo.write("A.java", "class A { int y; }\n");
    repo.commit("main").unwrap();
    repo.write("S.java", "class S { int x; }\n");
    repo.merge("merge side", &side).unwrap();

    let project = open_project(local("m", dir.path()), dir.path()).unwrap();
    let ids: Vec<String> = project.revisions().iter().map(|r| r.id.clone()).collect();
    let chain: Vec<String> = repo
        .first_parent_chain()
        .into_iter()
        .map(|i| repo.log()[i].id.to_string())
        .collect();
    assert_eq!(ids, chain);
    assert_eq!(ids.len(), 3);
    let merge = project.revisions().last().unwrap();
    assert_eq!(merge.changes.len(), 1);
    assert_eq!(merge.changes[0].path, "S.java");
    assert_eq!(merge.changes[0].change_kind, ChangeKind::Added);
}

#[test]
fn revision_order_ignores_committer_clock() {
    let dir = tempfile::tempdir().unwrap();
    let mut repo = FixtureRepo::init(dir.path()).unwrap();
    repo.write("A.java", "class A {}\n");
    repo.commit_at("first", 2_000_000_000).unwrap();
    repo.write("A.java", "class A { }\n");
    repo.commit_at("second", 1_000_000_000).unwrap();
    let project = open_project(local("c", dir.path()), dir.path()).unwrap();
    let messages: Vec<&str> = project.revisions().iter().map(|r| r.message.as_str()).collect();
    assert_eq!(messages, ["first", "second"]);
    assert_eq!(project.revisions()[1].timestamp, 1_000_000_000);
}

#[test]
fn snapshots_replay_renames_and_deletes() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = five_commit_repo(&dir.path().join("r"));
    let project = open_project(local("r", fixture.path()), dir.path()).unwrap();
    let head = get_snapshot(&project, &RevisionRef::Head).unwrap();
    let paths: Vec<&str> = head.files.keys().map(String::as_str).collect();
    assert_eq!(paths, ["lib/B.java", "src/A.java"]);
    assert_eq!(head.at_revision, fixture.log()[4].id.to_string());

    let third = fixture.log()[2].id.to_string();
    let earlier = get_snapshot(&project, &RevisionRef::Id(third[..10].to_string())).unwrap();
    let paths: Vec<&str> = earlier.files.keys().map(String::as_str).collect();
    assert_eq!(paths, ["README", "src/A.java", "src/B.java"]);

    let sources = java_sources(&project, &head).unwrap();
    assert_eq!(sources.len(), 2);
    assert_eq!(sources[1].content, "class A { void f() {} }\n");
    assert!(get_snapshot(&project, &RevisionRef::Id("deadbeefdead".into())).is_err());
}

#[test]
fn fix_counts_restart_when_a_file_is_added_again() {
    let dir = tempfile::tempdir().unwrap();
    let mut repo = FixtureRepo::init(dir.path()).unwrap();
    repo.write("A.java", "class A {}\n");
    repo.commit("Fix: add A").unwrap();
    repo.write("A.java", "class A { int a; }\n");
    repo.commit("bug in A").unwrap();
    repo.delete("A.java");
    repo.commit("remove A").unwrap();
    repo.write("A.java", "class A { class In {} }\n");
    repo.commit("restore A").unwrap();
    repo.write("A.java", "class A { class In { int q; } }\n");
    repo.commit("patched In").unwrap();
    let project = open_project(local("f", dir.path()), dir.path()).unwrap();
    let (table, rows) = compute_ncfix(&project).unwrap();
    assert_eq!(table.dump(), "A.java\t1\n");
    let pairs: Vec<(&str, u64)> = rows.iter().map(|r| (r.class_id.as_str(), r.ncfix)).collect();
    assert_eq!(pairs, [("A.java#A", 1), ("A.java#A$In", 1)]);
    assert_eq!(brute_force_ncfix(&repo), BTreeMap::from([("A.java".to_string(), 1)]));
}

#[test]
fn corpus_matches_the_brute_force_oracle() {
    let corpus = Corpus::generate(7);
    assert!(corpus.projects.len() <= 20);
    assert!(corpus.java_file_count() <= 1000);
    let specs = load_manifest(&corpus.manifest).unwrap();
    for spec in specs {
        let fixture = corpus.project(&spec.id);
        let project = open_project(spec, &corpus.root).unwrap();
        let (table, rows) = compute_ncfix(&project).unwrap();
        assert_eq!(table.entries, brute_force_ncfix(&fixture.repo), "{}", fixture.id);
        for row in &rows {
            let path = row.class_id.split('#').next().unwrap();
            assert_eq!(row.ncfix, table.entries[path]);
            assert!(!fixture.unparseable.iter().any(|u| u == path));
        }
    }
}

#[test]
fn selection_matches_fixture_expectations() {
    let corpus = Corpus::generate(3);
    let projects: Vec<_> = load_manifest(&corpus.manifest)
        .unwrap()
        .into_iter()
        .map(|s| open_project(s, &corpus.root).unwrap())
        .collect();
    for p in &projects {
        let expected = corpus.project(p.id()).expected;
        let has_java = !matches!(expected, Expected::NotJava | Expected::NoRepository);
        assert_eq!(detect_java(p), has_java, "{}", p.id());
    }
    assert_eq!(projects.iter().find(|p| p.id() == "edge100").unwrap().revision_count(), 100);
    assert_eq!(projects.iter().find(|p| p.id() == "edge101").unwrap().revision_count(), 101);
    let (accepted, report) = select_projects(projects, &SelectionCriteria::default());
    for record in &report {
        let verdict = record.to_string();
        let expected = corpus.project(&record.id).expected;
        assert_eq!(verdict, format!("{}\t{}", record.id, expected.as_str()));
    }
    let ids: Vec<&str> = accepted.iter().map(|p| p.id()).collect();
    let want: Vec<&str> = corpus
        .projects
        .iter()
        .filter(|p| p.expected == Expected::Accepted)
        .map(|p| p.id.as_str())
        .collect();
    assert_eq!(ids, want);
}
