//! Library side of the `qwtopo` command-line tool.

pub mod config;
pub mod error;
pub mod manifest;
pub mod plots;
pub mod replot;
pub mod run;
pub mod svg;
pub mod table;
