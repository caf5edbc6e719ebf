//! Scripted git repositories built without a working tree.
//!
//! File contents live in memory; each commit writes them as fresh trees
//! and moves `refs/heads/main`. Every commit is also recorded in a script
//! log that the oracles read instead of git.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use git2::{Oid, Repository, Signature, Time};

pub const BRANCH: &str = "refs/heads/main";

/// One commit as scripted: its message and the complete file state after it.
#[derive(Debug, Clone)]
pub struct ScriptedCommit {
    pub id: Oid,
    pub message: String,
    pub time: i64,
    pub files: BTreeMap<String, Vec<u8>>,
    /// Index into the log of the first parent.
    pub first_parent: Option<usize>,
}

/// Saved branch state for building side branches and merges.
#[derive(Debug, Clone)]
pub struct Checkpoint {
    files: BTreeMap<String, Vec<u8>>,
    head: Option<usize>,
}

impl Checkpoint {
    pub fn files(&self) -> &BTreeMap<String, Vec<u8>> {
        &self.files
    }
}

pub struct FixtureRepo {
    repo: Repository,
    path: PathBuf,
    files: BTreeMap<String, Vec<u8>>,
    head: Option<usize>,
    clock: i64,
    log: Vec<ScriptedCommit>,
    blobs: HashMap<Vec<u8>, Oid>,
}

impl FixtureRepo {
    /// Creates a bare repository at `path` with HEAD on `main`.
    pub fn init(path: &Path) -> Result<Self, git2::Error> {
        // every object written here is built from ids this process just created
        git2::opts::strict_object_creation(false);
        let repo = Repository::init_bare(path)?;
        repo.set_head(BRANCH)?;
        Ok(FixtureRepo {
            repo,
            path: path.to_path_buf(),
            files: BTreeMap::new(),
            head: None,
            clock: 1_300_000_000,
            log: Vec::new(),
            blobs: HashMap::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn repository(&self) -> &Repository {
        &self.repo
    }

    pub fn log(&self) -> &[ScriptedCommit] {
        &self.log
    }

    pub fn files(&self) -> &BTreeMap<String, Vec<u8>> {
        &self.files
    }

    /// Log indices of the first-parent chain of the tip, root first.
    pub fn first_parent_chain(&self) -> Vec<usize> {
        let mut chain = Vec::new();
        let mut at = self.head;
        while let Some(i) = at {
            chain.push(i);
            at = self.log[i].first_parent;
        }
        chain.reverse();
        chain
    }

    pub fn write(&mut self, path: &str, content: impl AsRef<[u8]>) -> &mut Self {
        self.files.insert(path.to_string(), content.as_ref().to_vec());
        self
    }

    pub fn delete(&mut self, path: &str) -> &mut Self {
        self.files.remove(path);
        self
    }

    pub fn rename(&mut self, from: &str, to: &str) -> &mut Self {
        if let Some(content) = self.files.remove(from) {
            self.files.insert(to.to_string(), content);
        }
        self
    }

    /// Commits the current files one minute after the previous commit.
    pub fn commit(&mut self, message: &str) -> Result<Oid, git2::Error> {
        let time = self.clock + 60;
        self.commit_at(message, time)
    }

    /// Commits with an explicit committer time, which may run backwards.
    pub fn commit_at(&mut self, message: &str, time: i64) -> Result<Oid, git2::Error> {
        self.commit_with_parents(message, time, None)
    }

    /// Records a merge of `other` (a checkpoint's tip) into the current
    /// branch. The current files become the merge result.
    pub fn merge(&mut self, message: &str, other: &Checkpoint) -> Result<Oid, git2::Error> {
        let time = self.clock + 60;
        self.commit_with_parents(message, time, other.head)
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint {
            files: self.files.clone(),
            head: self.head,
        }
    }

    /// Moves the branch back to a checkpoint.
    pub fn restore(&mut self, checkpoint: &Checkpoint) -> Result<(), git2::Error> {
        self.files = checkpoint.files.clone();
        self.head = checkpoint.head;
        if let Some(i) = self.head {
            self.repo.reference(BRANCH, self.log[i].id, true, "restore")?;
        }
        Ok(())
    }

    fn commit_with_parents(
        &mut self,
        message: &str,
        time: i64,
        second_parent: Option<usize>,
    ) -> Result<Oid, git2::Error> {
        let mut entries = Vec::with_capacity(self.files.len());
        for (path, content) in &self.files {
            let blob = match self.blobs.get(content) {
                Some(&id) => id,
                None => {
                    let id = self.repo.blob(content)?;
                    self.blobs.insert(content.clone(), id);
                    id
                }
            };
            entries.push((path.as_str(), blob));
        }
        let tree_id = write_tree(&self.repo, &entries)?;
        let tree = self.repo.find_tree(tree_id)?;
        let sig = Signature::new("Fixture Author", "fixture@example.org", &Time::new(time, 0))?;
        let parents: Vec<git2::Commit<'_>> = self
            .head
            .into_iter()
            .chain(second_parent)
            .map(|i| self.repo.find_commit(self.log[i].id))
            .collect::<Result<_, _>>()?;
        let parent_refs: Vec<&git2::Commit<'_>> = parents.iter().collect();
        let id = self.repo.commit(None, &sig, &sig, message, &tree, &parent_refs)?;
        self.repo.reference(BRANCH, id, true, "commit")?;
        self.log.push(ScriptedCommit {
            id,
            message: message.to_string(),
            time,
            files: self.files.clone(),
            first_parent: self.head,
        });
        self.head = Some(self.log.len() - 1);
        self.clock = self.clock.max(time);
        Ok(id)
    }
}

/// Writes `(relative path, blob)` pairs as a nested tree.
fn write_tree(repo: &Repository, entries: &[(&str, Oid)]) -> Result<Oid, git2::Error> {
    let mut builder = repo.treebuilder(None)?;
    let mut subdirs: BTreeMap<&str, Vec<(&str, Oid)>> = BTreeMap::new();
    for &(path, blob) in entries {
        match path.split_once('/') {
            Some((dir, rest)) => subdirs.entry(dir).or_default().push((rest, blob)),
            None => {
                builder.insert(path, blob, 0o100644)?;
            }
        }
    }
    for (dir, children) in subdirs {
        let sub = write_tree(repo, &children)?;
        builder.insert(dir, sub, 0o040000)?;
    }
    builder.write()
}
