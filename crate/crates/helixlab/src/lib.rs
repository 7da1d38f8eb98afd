//! Command-line front end for `helixlab-core`: problem documents in,
//! canonical JSON reports out.
//!
//! Exit codes: 0 success (for `theorem`, a comparison theorem applies),
//! 1 `theorem` ran but no theorem applies, 2 invalid input or parity
//! violation, 3 non-exceptional pair or invalid collection, 4 census over
//! budget, 5 outside the scope of the comparison theorems.

pub mod cli;
pub mod commands;
pub mod document;
pub mod render;

pub use cli::main_with_args;
pub use commands::{exit_code, Outcome};
pub use document::ProblemDocument;
