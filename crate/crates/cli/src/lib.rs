//! Library side of the `cognate` command: session directories, selection
//! specs, dataset generators and the benchmark harness.

pub mod bench;
pub mod generate;
pub mod select;
pub mod store;

use thiserror::Error;

/// A failure with the process exit code it maps to.
#[derive(Debug, Error)]
#[error("{message}")]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }

    /// Exit code 1.
    pub fn error(message: impl ToString) -> Self {
        Failure::new(1, message)
    }

    /// Exit code 2: a file named on the command line could not be read.
    pub fn missing(message: impl ToString) -> Self {
        Failure::new(2, message)
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/benchmarks.md")]
mod book {}
