//! Command-line front end: expression parsing, canonical printing, JSON
//! encoding and command dispatch.

pub mod commands;
pub mod json;
pub mod parse;
pub mod render;

pub use commands::{run, Outcome};
