//! Command-line front end for `qasym-core`: spec files, presets, and
//! deterministic CSV/JSON output.

pub mod error;
pub mod run;
pub mod spec_file;

pub use error::CliError;
pub use run::{parse_t_grid, run, Command, Outcome, RunConfig, SpecSource};
pub use spec_file::{load_spec, parse_spec, LoadedSpec};
