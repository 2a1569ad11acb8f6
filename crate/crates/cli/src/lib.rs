//! Library side of the command-line front end: verification campaigns, the
//! worked examples, output formatting, and exit-code policy. The binary in
//! `main.rs` is a thin argument-parsing layer over this.

pub mod campaign;
pub mod examples;
pub mod failure;
pub mod output;
pub mod pool;
