//! Benchmark harness for the `edge-search` planners: trial matrices over
//! algorithms, thread counts and (w, ε) pairs, CSV tables and SVG plots.

pub mod config;
pub mod matrix;
pub mod report;
pub mod verify;

use std::path::PathBuf;

use edge_search::domain::MapError;
use edge_search::SearchError;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Planner(#[from] SearchError),
    #[error("trial {trial} saw a different instance than in earlier cells")]
    Parity { trial: usize },
    #[error("cannot write {}: {1}", .0.display())]
    Write(PathBuf, std::io::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
