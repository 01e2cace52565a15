//! Command-line tooling around [`voter_qsd`]: graph and table formats,
//! thread-parallel replica drivers, the experiment commands and the
//! verification suite shared by `voter-qsd --check` and the acceptance tests.

pub mod checks;
pub mod error;
pub mod experiments;
pub mod io;
pub mod parallel;
pub mod stats;

pub use error::CliError;
