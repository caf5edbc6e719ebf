//! Brute-force NCFIX computed from the script log alone.
//!
//! For each file alive at the tip, find the last revision that brought it
//! into existence, then count the fixing revisions from there on whose
//! content for that file differs from the previous revision's.

use std::collections::BTreeMap;

use crate::repo::FixtureRepo;

const KEYWORDS: [&str; 13] = [
    "fix", "fixes", "fixed", "fixing", "bug", "bugs", "bugfix", "bugfixes", "defect", "defects",
    "patch", "patched", "patching",
];

/// Keyword test written independently of the library's classifier.
pub fn message_is_fixing(message: &str) -> bool {
    let lower = message.to_lowercase();
    let mut word = String::new();
    for c in lower.chars().chain(std::iter::once(' ')) {
        if c.is_alphanumeric() {
            word.push(c);
        } else {
            if KEYWORDS.contains(&word.as_str()) {
                return true;
            }
            word.clear();
        }
    }
    false
}

/// Path -> NCFIX for every file alive at the tip of `repo`.
pub fn brute_force_ncfix(repo: &FixtureRepo) -> BTreeMap<String, u64> {
    let log = repo.log();
    let chain = repo.first_parent_chain();
    let Some(&tip) = chain.last() else {
        return BTreeMap::new();
    };
    let mut out = BTreeMap::new();
    for path in log[tip].files.keys() {
        let state = |k: usize| log[chain[k]].files.get(path);
        let born = (0..chain.len())
            .rev()
            .find(|&k| state(k).is_some() && (k == 0 || state(k - 1).is_none()))
            .expect("tip file has a birth");
        let count = (born..chain.len())
            .filter(|&k| k == born || state(k) != state(k - 1))
            .filter(|&k| message_is_fixing(&log[chain[k]].message))
            .count();
        out.insert(path.clone(), count as u64);
    }
    out
}
