//! Regenerates SVG plots from the data files of a run directory.

use crate::error::{CliError, Result};
use crate::manifest::read_manifest;
use crate::plots::{render, PlotContext};
use crate::table::read_data_file;
use std::path::{Path, PathBuf};

/// Rewrites `<stem>.svg` next to every CSV with a recognized header and
/// returns the paths written, in file-name order.
pub fn replot(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut csvs: Vec<PathBuf> = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "csv") && path.is_file() {
            csvs.push(path);
        }
    }
    csvs.sort();
    let mut ctx = PlotContext::default();
    if let Some(tol) = read_manifest(dir)?.and_then(|m| m.tolerance) {
        ctx.tolerance = tol;
    }
    let mut written = Vec::new();
    for path in csvs {
        let Some(file) = read_data_file(&path)? else { continue };
        let svg = path.with_extension("svg");
        std::fs::write(&svg, render(file.kind, &file.rows, &ctx)).map_err(|e| CliError::io(&svg, e))?;
        written.push(svg);
    }
    if written.is_empty() {
        return Err(CliError::UnknownDataKind(dir.to_path_buf()));
    }
    Ok(written)
}
