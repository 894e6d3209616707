//! File formats, configuration, evaluation and the command line front end
//! for `brickbg-core`.

pub mod bench;
pub mod config;
pub mod error;
pub mod eval;
pub mod exec;
pub mod io;
pub mod run;
pub mod script;

pub use error::{AppError, Result};
pub use exec::Parallel;
