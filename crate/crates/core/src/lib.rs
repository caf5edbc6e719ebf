pub mod dataset;
pub mod exec;
pub mod history;
pub mod ingest;
pub mod java;
pub mod metrics;
pub mod model;
pub mod stats;
mod rng;
