//! Seeded fixture corpus: a handful of scripted repositories plus a
//! manifest, each repository tagged with the selection verdict it should get.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use crate::java::java_class;
use crate::repo::FixtureRepo;

pub const FIXING_MESSAGES: [&str; 8] = [
    "Fix null check in loader",
    "bug 1432: wrong offset after resize",
    "Patched race in the cache",
    "bugfix for empty input",
    "FIXES #12",
    "Defect: counter overflow",
    "fixed typo that broke parsing",
    "resolve crash (fixing issue-7)",
];

/// Messages that contain keyword fragments without a whole keyword.
pub const PLAIN_MESSAGES: [&str; 8] = [
    "Add export option",
    "prefix handling for names",
    "Debugging output cleanup",
    "Refactor fixture setup",
    "Update README",
    "patchwork of small renames",
    "Bump version",
    "suffix and infix helpers",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Accepted,
    TooFewCommits,
    NotJava,
    NoRepository,
}

impl Expected {
    /// The selection report's wording.
    pub fn as_str(self) -> &'static str {
        match self {
            Expected::Accepted => "accepted",
            Expected::TooFewCommits => "too-few-commits",
            Expected::NotJava => "not-java",
            Expected::NoRepository => "no-repository",
        }
    }
}

pub struct FixtureProject {
    pub id: String,
    pub repo: FixtureRepo,
    pub expected: Expected,
    /// Files that must fail to parse.
    pub unparseable: Vec<String>,
}

pub struct Corpus {
    _dir: Option<TempDir>,
    pub root: PathBuf,
    pub manifest: PathBuf,
    pub projects: Vec<FixtureProject>,
}

impl Corpus {
    /// Builds the corpus in a fresh temporary directory.
    pub fn generate(seed: u64) -> Corpus {
        let dir = tempfile::tempdir().expect("temp dir");
        let mut corpus = Corpus::generate_in(dir.path(), seed);
        corpus._dir = Some(dir);
        corpus
    }

    pub fn generate_in(root: &Path, seed: u64) -> Corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let repos = root.join("repos");
        let mut projects = Vec::new();
        let mut add = |id: &str, expected, build: &mut dyn FnMut(&mut FixtureRepo) -> Vec<String>| {
            let mut repo = FixtureRepo::init(&repos.join(id)).expect("init fixture repo");
            let unparseable = build(&mut repo);
            projects.push(FixtureProject {
                id: id.to_string(),
                repo,
                expected,
                unparseable,
            });
        };

        let plans: [(&str, usize, usize); 7] = [
            ("alpha", 140, 40),
            ("beta", 160, 60),
            ("gamma", 115, 30),
            ("delta", 180, 80),
            ("epsilon", 125, 45),
            ("zeta", 210, 90),
            ("eta", 102, 25),
        ];
        for (id, commits, files) in plans {
            let mut r = ChaCha8Rng::seed_from_u64(rng.random());
            add(id, Expected::Accepted, &mut |repo| {
                random_history(repo, &mut r, commits, files, id);
                Vec::new()
            });
        }
        let mut r = ChaCha8Rng::seed_from_u64(rng.random());
        add("merges", Expected::Accepted, &mut |repo| {
            history_with_merges(repo, &mut r);
            Vec::new()
        });
        let mut r = ChaCha8Rng::seed_from_u64(rng.random());
        add("edge100", Expected::TooFewCommits, &mut |repo| {
            random_history(repo, &mut r, 100, 20, "edge100");
            Vec::new()
        });
        let mut r = ChaCha8Rng::seed_from_u64(rng.random());
        add("edge101", Expected::Accepted, &mut |repo| {
            random_history(repo, &mut r, 101, 20, "edge101");
            Vec::new()
        });
        let mut r = ChaCha8Rng::seed_from_u64(rng.random());
        add("scripts", Expected::NotJava, &mut |repo| {
            non_java_history(repo, &mut r, 130);
            Vec::new()
        });
        let mut r = ChaCha8Rng::seed_from_u64(rng.random());
        add("broken", Expected::Accepted, &mut |repo| {
            random_history(repo, &mut r, 105, 20, "broken");
            let path = "src/broken/Unbalanced.java";
            repo.write(path, "package broken;\nclass Unbalanced {\n    void f() {\n        if (x) {\n}\n");
            repo.commit("Add unbalanced draft").expect("commit");
            vec![path.to_string()]
        });
        add("empty", Expected::NoRepository, &mut |_| Vec::new());

        let manifest = root.join("manifest.tsv");
        let mut text = String::from("# id\tsource\n");
        for p in &projects {
            text.push_str(&format!("{}\trepos/{}\n", p.id, p.id));
        }
        fs::write(&manifest, text).expect("write manifest");
        Corpus {
            _dir: None,
            root: root.to_path_buf(),
            manifest,
            projects,
        }
    }

    pub fn project(&self, id: &str) -> &FixtureProject {
        self.projects.iter().find(|p| p.id == id).expect("fixture project")
    }

    /// `.java` files alive at the tips of all repositories.
    pub fn java_file_count(&self) -> usize {
        self.projects
            .iter()
            .map(|p| p.repo.files().keys().filter(|k| k.ends_with(".java")).count())
            .sum()
    }
}

pub fn message(rng: &mut ChaCha8Rng) -> &'static str {
    if rng.random_bool(0.35) {
        FIXING_MESSAGES.choose(rng).expect("non-empty")
    } else {
        PLAIN_MESSAGES.choose(rng).expect("non-empty")
    }
}

struct JavaTree {
    package: String,
    revision: u32,
    /// Class name -> directory, for the files currently alive.
    live: BTreeMap<String, String>,
}

impl JavaTree {
    fn path(&self, name: &str) -> String {
        format!("{}/{name}.java", self.live[name])
    }

    fn write(&mut self, repo: &mut FixtureRepo, rng: &mut ChaCha8Rng, name: &str) {
        self.revision += 1;
        let source = java_class(rng, &self.package, name, self.revision);
        let path = self.path(name);
        repo.write(&path, source);
    }
}

/// `commits` revisions over at most `max_files` class names, mixing edits,
/// additions, deletions (names may come back later) and directory moves.
pub fn random_history(
    repo: &mut FixtureRepo,
    rng: &mut ChaCha8Rng,
    commits: usize,
    max_files: usize,
    package: &str,
) {
    let mut tree = JavaTree {
        package: package.to_string(),
        revision: 0,
        live: BTreeMap::new(),
    };
    let dirs = [format!("src/{package}"), format!("lib/{package}")];
    for k in 0..4.min(max_files) {
        let name = format!("C{k}");
        tree.live.insert(name.clone(), dirs[0].clone());
        tree.write(repo, rng, &name);
    }
    repo.write("README.md", format!("# {package}\n"));
    repo.commit("Initial import").expect("commit");
    for _ in 1..commits {
        let names: Vec<String> = tree.live.keys().cloned().collect();
        let roll = rng.random_range(0..100);
        if roll < 18 && tree.live.len() < max_files {
            let free: Vec<String> = (0..max_files)
                .map(|k| format!("C{k}"))
                .filter(|n| !tree.live.contains_key(n))
                .collect();
            let name = free.choose(rng).expect("free name").clone();
            tree.live.insert(name.clone(), dirs.choose(rng).expect("dir").clone());
            tree.write(repo, rng, &name);
        } else if roll < 23 && names.len() > 3 {
            let name = names.choose(rng).expect("name");
            repo.delete(&tree.path(name));
            tree.live.remove(name);
        } else if roll < 28 && !names.is_empty() {
            let name = names.choose(rng).expect("name").clone();
            let from = tree.path(&name);
            let dir = if tree.live[&name] == dirs[0] { &dirs[1] } else { &dirs[0] };
            tree.live.insert(name.clone(), dir.clone());
            repo.rename(&from, &tree.path(&name));
        } else if roll < 31 {
            repo.write("README.md", format!("# {package}\n\nnotes {}\n", rng.random::<u32>()));
        } else {
            for _ in 0..rng.random_range(1..4) {
                let name = names.choose(rng).expect("name").clone();
                tree.write(repo, rng, &name);
            }
        }
        // occasional clock skew: committer time earlier than the parent's
        if rng.random_bool(0.05) {
            repo.commit_at(message(rng), 1_200_000_000 + rng.random_range(0..1000)).expect("commit");
        } else {
            repo.commit(message(rng)).expect("commit");
        }
    }
}

/// A main line with two side branches merged back in.
pub fn history_with_merges(repo: &mut FixtureRepo, rng: &mut ChaCha8Rng) {
    random_history(repo, rng, 60, 20, "merges");
    for round in 0..2 {
        let base = repo.checkpoint();
        repo.write(&format!("src/side{round}/Side.java"), format!("package side{round};\nclass Side {{ void f() {{}} }}\n"));
        repo.commit("side: Fix startup bug").expect("commit");
        repo.write(&format!("src/side{round}/Side.java"), format!("package side{round};\nclass Side {{ void f() {{ g(); }} void g() {{}} }}\n"));
        repo.commit("side: patch handler").expect("commit");
        let side = repo.checkpoint();
        repo.restore(&base).expect("restore");
        repo.write("src/merges/Main.java", format!("package merges;\nclass Main {{ int round = {round}; }}\n"));
        repo.commit("main: add entry point").expect("commit");
        let side_file = format!("src/side{round}/Side.java");
        let content = side.files()[&side_file].clone();
        repo.write(&side_file, content);
        let merge_message = if round == 0 { "Merge branch 'side'" } else { "Merge fix branch" };
        repo.merge(merge_message, &side).expect("merge");
        let mut r = ChaCha8Rng::seed_from_u64(rng.random());
        for _ in 0..25 {
            repo.write("src/merges/Main.java", format!("package merges;\nclass Main {{ int round = {}; }}\n", r.random::<u16>()));
            repo.commit(message(&mut r)).expect("commit");
        }
    }
}

pub fn non_java_history(repo: &mut FixtureRepo, rng: &mut ChaCha8Rng, commits: usize) {
    repo.write("tool/main.py", "print('hi')\n");
    repo.commit("Initial import").expect("commit");
    for i in 1..commits {
        let path = format!("tool/mod{}.py", rng.random_range(0..10));
        repo.write(&path, format!("x = {i}\n"));
        repo.commit(message(rng)).expect("commit");
    }
}
