pub mod format;
pub mod run;

pub use run::{run, Cli, Outcome};
