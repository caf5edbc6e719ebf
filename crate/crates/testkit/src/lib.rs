//! Fixtures for the codemine test suites: scripted git repositories, a
//! seeded multi-repository corpus and a brute-force NCFIX oracle.

pub mod corpus;
pub mod fixtures;
pub mod java;
pub mod oracle;
pub mod repo;

pub use corpus::{Corpus, Expected, FixtureProject};
pub use oracle::{brute_force_ncfix, message_is_fixing};
pub use repo::{Checkpoint, FixtureRepo, ScriptedCommit};
