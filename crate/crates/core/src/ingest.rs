//! Project manifests, repository access and project selection.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use git2::Repository;
use sha2::{Digest, Sha256};

use crate::history::{self, Revision};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: duplicate project id `{id}`")]
    DuplicateId { id: String, line: usize },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("cannot open repository {}: {source}", path.display())]
    Open {
        path: PathBuf,
        #[source]
        source: git2::Error,
    },
    #[error("cannot clone {url}: {source}")]
    Clone {
        url: String,
        #[source]
        source: git2::Error,
    },
    #[error(transparent)]
    Git(#[from] git2::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Local(PathBuf),
    Url(String),
}

impl Source {
    pub fn parse(raw: &str, base: &Path) -> Source {
        if raw.contains("://") || raw.starts_with("git@") {
            Source::Url(raw.to_string())
        } else {
            let path = Path::new(raw);
            if path.is_absolute() {
                Source::Local(path.to_path_buf())
            } else {
                Source::Local(base.join(path))
            }
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Local(p) => write!(f, "{}", p.display()),
            Source::Url(u) => f.write_str(u),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectSpec {
    pub id: String,
    pub source: Source,
    pub name: String,
}

/// Reads `<id>\t<path-or-url>` lines. `#` starts a comment line; blank lines
/// are skipped. Relative paths resolve against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<Vec<ProjectSpec>, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&text, base)
}

pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ProjectSpec>, IngestError> {
    let mut specs = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let mut cols = raw.split('\t');
        let id = cols.next().unwrap_or_default().trim();
        let Some(source) = cols.next().map(str::trim).filter(|s| !s.is_empty()) else {
            return Err(IngestError::Malformed {
                line,
                reason: "expected `<id><TAB><path-or-url>`".into(),
            });
        };
        if cols.next().is_some() {
            return Err(IngestError::Malformed {
                line,
                reason: "too many columns".into(),
            });
        }
        if id.is_empty() || id.contains([':', ' ']) {
            return Err(IngestError::Malformed {
                line,
                reason: format!("invalid project id `{id}`"),
            });
        }
        if !seen.insert(id.to_string()) {
            return Err(IngestError::DuplicateId {
                id: id.to_string(),
                line,
            });
        }
        specs.push(ProjectSpec {
            id: id.to_string(),
            source: Source::parse(source, base),
            name: id.to_string(),
        });
    }
    Ok(specs)
}

/// How the repository behind a [`Project`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Local,
    Cloned,
    Cached,
}

/// An opened repository with its linearized revision list.
pub struct Project {
    pub spec: ProjectSpec,
    pub origin: Origin,
    repo: Repository,
    revisions: Vec<Revision>,
}

impl fmt::Debug for Project {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Project")
            .field("spec", &self.spec)
            .field("origin", &self.origin)
            .field("revision_count", &self.revisions.len())
            .finish()
    }
}

impl Project {
    pub fn id(&self) -> &str {
        &self.spec.id
    }

    pub fn repository(&self) -> &Repository {
        &self.repo
    }

    pub fn revisions(&self) -> &[Revision] {
        &self.revisions
    }

    pub fn revision_count(&self) -> usize {
        self.revisions.len()
    }
}

/// Opens a local repository, or clones a URL into `workdir/clones/` keyed by
/// the URL's hash. A cached clone is reused as is.
pub fn open_project(spec: ProjectSpec, workdir: &Path) -> Result<Project, IngestError> {
    let (repo, origin) = match &spec.source {
        Source::Local(path) => {
            let repo = Repository::open(path).map_err(|source| IngestError::Open {
                path: path.clone(),
                source,
            })?;
            (repo, Origin::Local)
        }
        Source::Url(url) => {
            let dir = clone_dir(workdir, url);
            if dir.exists() {
                let repo = Repository::open(&dir).map_err(|source| IngestError::Open {
                    path: dir.clone(),
                    source,
                })?;
                (repo, Origin::Cached)
            } else {
                fs::create_dir_all(dir.parent().unwrap_or(workdir)).map_err(|source| {
                    IngestError::Io {
                        path: dir.clone(),
                        source,
                    }
                })?;
                log::info!("cloning {url} into {}", dir.display());
                let repo = git2::build::RepoBuilder::new()
                    .bare(true)
                    .clone(url, &dir)
                    .map_err(|source| {
                        // leave no half-written clone behind for the next run
                        let _ = fs::remove_dir_all(&dir);
                        IngestError::Clone {
                            url: url.clone(),
                            source,
                        }
                    })?;
                (repo, Origin::Cloned)
            }
        }
    };
    let revisions = history::linearize(&repo)?;
    Ok(Project {
        spec,
        origin,
        repo,
        revisions,
    })
}

pub fn clone_dir(workdir: &Path, url: &str) -> PathBuf {
    let digest = Sha256::digest(url.as_bytes());
    let hex: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
    workdir.join("clones").join(hex)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionCriteria {
    /// Projects need strictly more revisions than this.
    pub min_commits_exclusive: usize,
    pub required_language: String,
    pub require_java_source: bool,
}

impl Default for SelectionCriteria {
    fn default() -> Self {
        SelectionCriteria {
            min_commits_exclusive: 100,
            required_language: "java".into(),
            require_java_source: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rejection {
    NoRepository,
    TooFewCommits,
    NotJava,
}

impl Rejection {
    pub fn as_str(self) -> &'static str {
        match self {
            Rejection::NoRepository => "no-repository",
            Rejection::TooFewCommits => "too-few-commits",
            Rejection::NotJava => "not-java",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One line of the selection report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionRecord {
    pub id: String,
    pub verdict: Result<(), Rejection>,
}

impl fmt::Display for SelectionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Ok(()) => write!(f, "{}\taccepted", self.id),
            Err(reason) => write!(f, "{}\t{reason}", self.id),
        }
    }
}

/// What the selection filter needs to know about a project.
pub trait Selectable {
    fn id(&self) -> &str;
    fn revision_count(&self) -> usize;
    fn has_source_in(&self, language: &str) -> bool;
}

impl Selectable for Project {
    fn id(&self) -> &str {
        &self.spec.id
    }

    fn revision_count(&self) -> usize {
        self.revisions.len()
    }

    fn has_source_in(&self, language: &str) -> bool {
        detect_language(self, language)
    }
}

pub fn evaluate<P: Selectable>(project: &P, criteria: &SelectionCriteria) -> Result<(), Rejection> {
    let revisions = project.revision_count();
    if revisions == 0 {
        return Err(Rejection::NoRepository);
    }
    if revisions <= criteria.min_commits_exclusive {
        return Err(Rejection::TooFewCommits);
    }
    if criteria.require_java_source && !project.has_source_in(&criteria.required_language) {
        return Err(Rejection::NotJava);
    }
    Ok(())
}

/// Keeps the projects passing `criteria`, in input order, and reports one
/// verdict per input project.
pub fn select_projects<P: Selectable>(
    projects: Vec<P>,
    criteria: &SelectionCriteria,
) -> (Vec<P>, Vec<SelectionRecord>) {
    let mut accepted = Vec::new();
    let mut report = Vec::with_capacity(projects.len());
    for project in projects {
        let verdict = evaluate(&project, criteria);
        report.push(SelectionRecord {
            id: project.id().to_string(),
            verdict,
        });
        if verdict.is_ok() {
            accepted.push(project);
        }
    }
    (accepted, report)
}

/// True iff the HEAD snapshot holds at least one `.java` file.
pub fn detect_java(project: &Project) -> bool {
    detect_language(project, "java")
}

fn detect_language(project: &Project, language: &str) -> bool {
    let suffix = format!(".{}", language.to_ascii_lowercase());
    match history::head_paths(project) {
        Ok(paths) => paths.iter().any(|p| p.to_ascii_lowercase().ends_with(&suffix)),
        Err(err) => {
            log::warn!("{}: cannot list HEAD snapshot: {err}", project.id());
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn manifest_order_and_comments() {
        let text = "# corpus\np1\t/repos/one\np2\thttps://example.org/two.git\n\np3\trel/three\n";
        let specs = parse_manifest(text, Path::new("/base")).unwrap();
        let ids: Vec<_> = specs.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["p1", "p2", "p3"]);
        assert_eq!(specs[0].source, Source::Local("/repos/one".into()));
        assert_eq!(specs[1].source, Source::Url("https://example.org/two.git".into()));
        assert_eq!(specs[2].source, Source::Local("/base/rel/three".into()));
    }

    #[test]
    fn manifest_empty_and_errors() {
        assert!(parse_manifest("", Path::new(".")).unwrap().is_empty());
        let err = parse_manifest("p1\ta\np1\tb\n", Path::new(".")).unwrap_err();
        assert!(matches!(&err, IngestError::DuplicateId { id, line: 2 } if id == "p1"));
        assert!(err.to_string().contains("p1"));
        let err = parse_manifest("ok\ta\nbroken line\n", Path::new(".")).unwrap_err();
        assert!(matches!(err, IngestError::Malformed { line: 2, .. }));
        let err = parse_manifest("a:b\tx\n", Path::new(".")).unwrap_err();
        assert!(matches!(err, IngestError::Malformed { line: 1, .. }));
    }

    #[test]
    fn missing_manifest_is_io_error() {
        let err = load_manifest(Path::new("/nonexistent/manifest.tsv")).unwrap_err();
        assert!(matches!(err, IngestError::Io { .. }));
    }

    #[test]
    fn nonexistent_repository() {
        let dir = tempfile::tempdir().unwrap();
        let spec = ProjectSpec {
            id: "x".into(),
            source: Source::Local(dir.path().join("missing")),
            name: "x".into(),
        };
        assert!(open_project(spec, dir.path()).is_err());
    }

    #[derive(Debug, Clone, PartialEq)]
    struct Fake {
        id: String,
        revisions: usize,
        java: bool,
    }

    impl Selectable for Fake {
        fn id(&self) -> &str {
            &self.id
        }
        fn revision_count(&self) -> usize {
            self.revisions
        }
        fn has_source_in(&self, _: &str) -> bool {
            self.java
        }
    }

    fn fake(id: &str, revisions: usize, java: bool) -> Fake {
        Fake {
            id: id.into(),
            revisions,
            java,
        }
    }

    #[test]
    fn commit_threshold_is_strict() {
        let criteria = SelectionCriteria::default();
        assert_eq!(evaluate(&fake("a", 101, true), &criteria), Ok(()));
        assert_eq!(evaluate(&fake("b", 100, true), &criteria), Err(Rejection::TooFewCommits));
        assert_eq!(evaluate(&fake("c", 500, false), &criteria), Err(Rejection::NotJava));
        assert_eq!(evaluate(&fake("d", 0, true), &criteria), Err(Rejection::NoRepository));
        let lax = SelectionCriteria {
            require_java_source: false,
            ..criteria
        };
        assert_eq!(evaluate(&fake("c", 500, false), &lax), Ok(()));
    }

    #[test]
    fn report_lines() {
        let (kept, report) = select_projects(
            vec![fake("a", 101, true), fake("b", 3, true)],
            &SelectionCriteria::default(),
        );
        assert_eq!(kept.len(), 1);
        let lines: Vec<_> = report.iter().map(|r| r.to_string()).collect();
        assert_eq!(lines, ["a\taccepted", "b\ttoo-few-commits"]);
    }

    proptest! {
        #[test]
        fn selection_is_idempotent_subsequence(
            items in prop::collection::vec((0usize..250, any::<bool>()), 0..30),
            threshold in 0usize..200,
        ) {
            let projects: Vec<Fake> = items
                .iter()
                .enumerate()
                .map(|(i, &(n, java))| fake(&format!("p{i}"), n, java))
                .collect();
            let criteria = SelectionCriteria { min_commits_exclusive: threshold, ..Default::default() };
            let (once, report) = select_projects(projects.clone(), &criteria);
            prop_assert_eq!(report.len(), projects.len());
            let mut it = projects.iter();
            for kept in &once {
                prop_assert!(it.any(|p| p == kept));
            }
            let (twice, _) = select_projects(once.clone(), &criteria);
            prop_assert_eq!(&twice, &once);
            let accepted = report.iter().filter(|r| r.verdict.is_ok()).count();
            prop_assert_eq!(accepted, once.len());
        }
    }
}
