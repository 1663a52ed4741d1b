//! The `tmwords` command-line tool: subcommands, report envelopes, the
//! sequence cache and the acceptance suite behind `verify-all`.

pub mod cache;
pub mod commands;
pub mod report;
pub mod sequences;
pub mod suite;

pub use commands::run;
