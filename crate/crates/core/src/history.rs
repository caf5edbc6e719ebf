//! Revision history, fixing-revision classification, snapshots and NCFIX.
//!
//! NCFIX replays the linear revision list with a path -> count map: a
//! deleted path is dropped, an added path starts at 1 when the revision is a
//! fixing one and 0 otherwise, and a modified path gains 1 per fixing
//! revision. Every class declared in a surviving file inherits that file's
//! count.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use git2::{Delta, DiffOptions, FileMode, Oid, Repository, Tree};

use crate::exec::Execution;
use crate::ingest::Project;
use crate::java::{ParseOutcome, enumerate_class_declarations, parse_compilation_unit};
use crate::metrics::{SourceFile, class_id, is_java_path};

#[derive(Debug, thiserror::Error)]
pub enum HistoryError {
    #[error("unknown revision `{0}`")]
    UnknownRevision(String),
    #[error(transparent)]
    Git(#[from] git2::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChangeKind {
    Added,
    Modified,
    Deleted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangedFile {
    pub path: String,
    pub change_kind: ChangeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Revision {
    pub id: String,
    pub timestamp: i64,
    pub committer: String,
    pub message: String,
    pub changes: Vec<ChangedFile>,
}

/// Blob id of a file version.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlobId(pub Oid);

impl fmt::Display for BlobId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub at_revision: String,
    pub files: BTreeMap<String, BlobId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RevisionRef {
    Head,
    Id(String),
}

/// The first-parent chain of HEAD, root first. Each revision's changes are
/// diffed against its first parent without rename detection, so a rename
/// shows up as a delete plus an add. An unborn HEAD yields no revisions.
pub fn linearize(repo: &Repository) -> Result<Vec<Revision>, git2::Error> {
    let head = match repo.head() {
        Ok(head) => head.peel_to_commit()?,
        Err(e) if matches!(e.code(), git2::ErrorCode::UnbornBranch | git2::ErrorCode::NotFound) => {
            return Ok(Vec::new());
        }
        Err(e) => return Err(e),
    };
    let mut chain = vec![head];
    while let Ok(parent) = chain.last().expect("non-empty").parent(0) {
        chain.push(parent);
    }
    chain.reverse();

    let mut opts = DiffOptions::new();
    opts.ignore_submodules(true);
    let mut revisions = Vec::with_capacity(chain.len());
    let mut previous: Option<Tree<'_>> = None;
    for commit in &chain {
        let tree = commit.tree()?;
        let diff = repo.diff_tree_to_tree(previous.as_ref(), Some(&tree), Some(&mut opts))?;
        let mut changes = Vec::new();
        for delta in diff.deltas() {
            let (file, kind) = match delta.status() {
                Delta::Added => (delta.new_file(), ChangeKind::Added),
                Delta::Deleted => (delta.old_file(), ChangeKind::Deleted),
                Delta::Modified | Delta::Typechange => (delta.new_file(), ChangeKind::Modified),
                _ => continue,
            };
            if file.mode() == FileMode::Commit {
                continue;
            }
            let Some(path) = file.path().and_then(|p| p.to_str()) else {
                continue;
            };
            changes.push(ChangedFile {
                path: path.to_string(),
                change_kind: kind,
            });
        }
        let committer = commit.committer();
        revisions.push(Revision {
            id: commit.id().to_string(),
            timestamp: commit.time().seconds(),
            committer: committer.name().unwrap_or_default().to_string(),
            message: commit.message().unwrap_or_default().to_string(),
            changes,
        });
        previous = Some(tree);
    }
    Ok(revisions)
}

pub fn list_revisions(project: &Project) -> &[Revision] {
    project.revisions()
}

/// Whole-word, case-insensitive keyword match over commit messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixClassifier {
    keywords: BTreeSet<String>,
}

pub const DEFAULT_FIX_KEYWORDS: [&str; 13] = [
    "fix", "fixes", "fixed", "fixing", "bug", "bugs", "bugfix", "bugfixes", "defect", "defects",
    "patch", "patched", "patching",
];

impl Default for FixClassifier {
    fn default() -> Self {
        FixClassifier::new(DEFAULT_FIX_KEYWORDS)
    }
}

impl FixClassifier {
    pub fn new<I, S>(keywords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        FixClassifier {
            keywords: keywords
                .into_iter()
                .map(|k| k.as_ref().to_lowercase())
                .collect(),
        }
    }

    pub fn is_fixing(&self, message: &str) -> bool {
        message
            .to_lowercase()
            .split(|c: char| !c.is_alphanumeric())
            .any(|word| self.keywords.contains(word))
    }
}

pub fn is_fixing_revision(message: &str) -> bool {
    FixClassifier::default().is_fixing(message)
}

fn replay_paths<'a>(revisions: impl IntoIterator<Item = &'a Revision>) -> BTreeSet<String> {
    let mut live = BTreeSet::new();
    for rev in revisions {
        for change in &rev.changes {
            match change.change_kind {
                ChangeKind::Deleted => {
                    live.remove(&change.path);
                }
                ChangeKind::Added | ChangeKind::Modified => {
                    live.insert(change.path.clone());
                }
            }
        }
    }
    live
}

/// Files live at `at`, by replaying adds and deletes, with blob handles read
/// from that revision's tree.
pub fn get_snapshot(project: &Project, at: &RevisionRef) -> Result<Snapshot, HistoryError> {
    let revisions = project.revisions();
    let end = match at {
        RevisionRef::Head => revisions.len(),
        RevisionRef::Id(id) => {
            revisions
                .iter()
                .position(|r| r.id == *id || (id.len() >= 7 && r.id.starts_with(id.as_str())))
                .ok_or_else(|| HistoryError::UnknownRevision(id.clone()))?
                + 1
        }
    };
    let Some(last) = end.checked_sub(1).map(|i| &revisions[i]) else {
        return Ok(Snapshot {
            at_revision: String::new(),
            files: BTreeMap::new(),
        });
    };
    let repo = project.repository();
    let tree = repo.find_commit(Oid::from_str(&last.id)?)?.tree()?;
    let mut files = BTreeMap::new();
    for path in replay_paths(&revisions[..end]) {
        let entry = tree.get_path(std::path::Path::new(&path))?;
        files.insert(path, BlobId(entry.id()));
    }
    Ok(Snapshot {
        at_revision: last.id.clone(),
        files,
    })
}

/// Paths of every blob in the HEAD tree, read directly from git.
pub fn head_paths(project: &Project) -> Result<Vec<String>, git2::Error> {
    let repo = project.repository();
    let Some(last) = project.revisions().last() else {
        return Ok(Vec::new());
    };
    let tree = repo.find_commit(Oid::from_str(&last.id)?)?.tree()?;
    let mut out = Vec::new();
    tree.walk(git2::TreeWalkMode::PreOrder, |dir, entry| {
        if entry.kind() == Some(git2::ObjectType::Blob) {
            out.push(format!("{dir}{}", entry.name().unwrap_or_default()));
        }
        git2::TreeWalkResult::Ok
    })?;
    Ok(out)
}

/// Contents of the snapshot's `.java` files, decoded lossily as UTF-8.
pub fn java_sources(project: &Project, snapshot: &Snapshot) -> Result<Vec<SourceFile>, git2::Error> {
    let repo = project.repository();
    snapshot
        .files
        .iter()
        .filter(|(path, _)| is_java_path(path))
        .map(|(path, blob)| {
            let blob = repo.find_blob(blob.0)?;
            Ok(SourceFile {
                path: path.clone(),
                content: String::from_utf8_lossy(blob.content()).into_owned(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FixCountTable {
    pub entries: BTreeMap<String, u64>,
}

impl FixCountTable {
    /// `<path>\t<ncfix>` lines sorted by path.
    pub fn dump(&self) -> String {
        self.entries
            .iter()
            .map(|(path, n)| format!("{path}\t{n}\n"))
            .collect()
    }
}

/// Replays revisions in order into per-path fix counts.
pub fn replay_fix_counts(revisions: &[Revision], classifier: &FixClassifier) -> FixCountTable {
    let mut entries = BTreeMap::new();
    for rev in revisions {
        let fixing = classifier.is_fixing(&rev.message);
        for change in &rev.changes {
            match change.change_kind {
                ChangeKind::Deleted => {
                    entries.remove(&change.path);
                }
                ChangeKind::Added => {
                    entries.insert(change.path.clone(), u64::from(fixing));
                }
                ChangeKind::Modified => {
                    *entries.entry(change.path.clone()).or_insert(0) += u64::from(fixing);
                }
            }
        }
    }
    FixCountTable { entries }
}

/// NCFIX of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFix {
    pub project_id: String,
    pub class_id: String,
    pub ncfix: u64,
}

pub fn compute_ncfix(project: &Project) -> Result<(FixCountTable, Vec<ClassFix>), HistoryError> {
    compute_ncfix_with(project, &FixClassifier::default(), Execution::default())
}

/// Fix counts per file, then one row per declaration in every surviving file
/// that parses. Rows are sorted by class id.
pub fn compute_ncfix_with(
    project: &Project,
    classifier: &FixClassifier,
    exec: Execution,
) -> Result<(FixCountTable, Vec<ClassFix>), HistoryError> {
    let table = replay_fix_counts(project.revisions(), classifier);
    let snapshot = get_snapshot(project, &RevisionRef::Head)?;
    debug_assert!(snapshot.files.keys().eq(table.entries.keys()));
    let sources = java_sources(project, &snapshot)?;
    let project_id = project.id();
    let per_file = exec.map(&sources, |file| {
        let ncfix = table.entries.get(&file.path).copied().unwrap_or(0);
        match parse_compilation_unit(&file.content, &file.path) {
            ParseOutcome::Parsed(unit) => enumerate_class_declarations(&unit)
                .into_iter()
                .map(|decl| ClassFix {
                    project_id: project_id.to_string(),
                    class_id: class_id(&file.path, decl),
                    ncfix,
                })
                .collect(),
            ParseOutcome::Failed(diag) => {
                log::warn!("{project_id}: no classes from {}: {diag}", file.path);
                Vec::new()
            }
        }
    });
    let mut rows: Vec<ClassFix> = per_file.into_iter().flatten().collect();
    rows.sort_by(|a, b| a.class_id.cmp(&b.class_id));
    Ok((table, rows))
}
