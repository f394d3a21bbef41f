//! Text format, elaboration and commands behind the `catv` binary.

pub mod commands;
pub mod dot;
pub mod dsl;
pub mod workspace;
