//! Library half of the CLI: file formats, certificate serialization and the
//! command implementations, kept separate from argument parsing so tests can
//! drive them directly.

pub mod certificate;
pub mod commands;
pub mod format;
