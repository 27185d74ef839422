//! Chart for each data family, built only from the numeric table so that
//! `run` and `replot` draw identical figures.

use crate::svg::{heatmap, plot, ramp, Series, PALETTE};
use crate::table::DataKind;

/// Settings that are not recoverable from a data file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlotContext {
    /// Distance from ½ within which an invariant counts as quantized.
    pub tolerance: f64,
}

impl Default for PlotContext {
    fn default() -> Self {
        PlotContext { tolerance: 0.05 }
    }
}

fn col(rows: &[Vec<f64>], k: usize) -> Vec<f64> {
    rows.iter().map(|r| r[k]).collect()
}

fn same_mod2(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(2.0);
    d < 1e-9 || 2.0 - d < 1e-9
}

pub fn render(kind: DataKind, rows: &[Vec<f64>], ctx: &PlotContext) -> String {
    match kind {
        DataKind::Scan => scan(rows),
        DataKind::PhaseDiagram => phase_diagram(rows, ctx.tolerance),
        DataKind::DisorderRuns => {
            let pts = rows.iter().map(|r| (r[0], r[2])).collect();
            plot(
                "½ r(0) per configuration",
                "p",
                "½ r(0)",
                &[Series::markers("configurations", pts)],
                Some((-0.6, 0.6)),
            )
        }
        DataKind::DisorderSummary => {
            let s =
                Series::markers("mean ± std", rows.iter().map(|r| (r[0], r[1])).collect()).with_errors(col(rows, 2));
            plot("Ensemble average ½⟨r(0)⟩", "p", "½⟨r(0)⟩", &[s], Some((-0.6, 0.6)))
        }
        DataKind::Edge => {
            let pts = rows.iter().map(|r| (r[0], r[2])).collect();
            plot(
                "Edge localization per configuration",
                "p",
                "P_Loc",
                &[Series::markers("configurations", pts)],
                Some((0.0, 1.0)),
            )
        }
        DataKind::EdgeSummary => {
            let s =
                Series::markers("mean ± std", rows.iter().map(|r| (r[0], r[1])).collect()).with_errors(col(rows, 2));
            plot("Edge localization", "p", "P_Loc", &[s], Some((0.0, 1.0)))
        }
        DataKind::Intensity => intensity(rows),
        DataKind::Emulation => {
            let signed = Series::line("signed amplitude", rows.iter().map(|r| (r[0], r[2])).collect());
            let mag = Series::markers("magnitude", rows.iter().map(|r| (r[0], r[1])).collect());
            plot("Reconstructed reflection amplitudes", "step j", "ρ_j", &[signed, mag], None)
        }
        DataKind::McSets => {
            let pts = rows.iter().map(|r| (r[1], r[4])).collect();
            plot(
                "Monte-Carlo parameter sets",
                "loss asymmetry",
                "distance to data",
                &[Series::markers("sets", pts)],
                None,
            )
        }
    }
}

fn scan(rows: &[Vec<f64>]) -> String {
    let (t1, t2) = (col(rows, 0), col(rows, 1));
    let (x, label): (Vec<f64>, &str) = if t1.iter().zip(&t2).all(|(a, b)| same_mod2(*b, 2.0 * a)) {
        (t1, "θ1 / π")
    } else if t1.iter().zip(&t2).all(|(a, b)| same_mod2(*a, 2.0 * b)) {
        (t2, "θ2 / π")
    } else {
        ((0..rows.len()).map(|k| k as f64).collect(), "point")
    };
    let q0 = Series::line("Q0", x.iter().zip(rows).map(|(x, r)| (*x, r[2])).collect());
    let qp = Series::line("Qπ", x.iter().zip(rows).map(|(x, r)| (*x, r[3])).collect());
    let t = rows.first().map_or(0.0, |r| r[5]);
    plot(&format!("Invariants along the scan, t = {t}"), label, "Q", &[q0, qp], Some((-0.6, 0.6)))
}

fn phase_diagram(rows: &[Vec<f64>], tol: f64) -> String {
    let labels = ["Q0 < 0, Qπ < 0", "Q0 > 0, Qπ > 0", "Q0 < 0, Qπ > 0", "Q0 > 0, Qπ < 0", "boundary"];
    let colors = [PALETTE[0], PALETTE[1], PALETTE[2], PALETTE[3], "#bbbbbb"];
    let cells: Vec<(f64, f64, String)> = rows
        .iter()
        .map(|r| {
            let (q0, qp) = (r[2], r[3]);
            let quantized = q0.abs() >= 0.5 - tol && qp.abs() >= 0.5 - tol;
            let k = match (quantized, q0 > 0.0, qp > 0.0) {
                (false, _, _) => 4,
                (true, false, false) => 0,
                (true, true, true) => 1,
                (true, false, true) => 2,
                (true, true, false) => 3,
            };
            (r[0], r[1], colors[k].to_string())
        })
        .collect();
    let key: Vec<(String, &str)> = labels.iter().zip(colors).map(|(l, c)| (l.to_string(), c)).collect();
    let t = rows.first().map_or(0.0, |r| r[5]);
    heatmap(&format!("Phase diagram, t = {t}"), "θ1 / π", "θ2 / π", &cells, &key)
}

fn intensity(rows: &[Vec<f64>]) -> String {
    let max = rows.iter().map(|r| r[2]).fold(0.0, f64::max);
    let scale = if max > 0.0 { max } else { 1.0 };
    let cells: Vec<(f64, f64, String)> = rows.iter().map(|r| (r[1], r[0], ramp(r[2] / scale))).collect();
    heatmap("Walker intensity", "position", "step", &cells, &[])
}
