//! Argument parsing, dispatch and artifact encoding for the `flp` binary.

pub mod args;
pub mod artifact;
pub mod error;
pub mod run;
