//! Library side of the `holonomy` command-line tool: document formats and the
//! command implementations, so they can be driven from tests without spawning
//! a process.

pub mod commands;
pub mod csv;
pub mod document;

pub use commands::{cmd_expm, cmd_simulate, cmd_synth, cmd_verify, CliError, FlowMode, Outcome, SimulateOptions};
pub use document::{FieldError, ProblemDocument, ResultDocument};
