//! JSON documents and the `cosegal` command line over `cosegal-core`.

pub mod cli;
pub mod codec;
pub mod report;
