//! Experiment dispatch: turns a validated config into named output files.

use crate::config::{
    DisorderConfig, EdgeConfig, EmulateConfig, ExperimentConfig, ExperimentKind, GaugeChoice, InputCoin, LineKind,
    McConfig, PhaseDiagramConfig, ScanConfig,
};
use crate::error::{CliError, Result};
use crate::plots::{render, PlotContext};
use crate::table::{read_data_file, Cell, DataKind, Table};
use qwtopo::angle::{from_pi, to_pi};
use qwtopo::apparatus::{emulate_measurement, monte_carlo_errorbars, McOptions, Readout};
use qwtopo::disorder::{sweep, transition_locator};
use qwtopo::edge::{localization_vs_disorder_from, reference_system, run_interface, InterfaceSystem};
use qwtopo::scattering::{invariants, phase_diagram, scan_line, PhaseLabel, ScanLine};
use qwtopo::{CoinState, DisorderSpec, Gauge, LocalizationRecord, Relation, ScatteringSystem};
use serde_json::{json, Value};
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A file produced by a run, relative to the output directory.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Default)]
pub struct Outputs {
    pub artifacts: Vec<Artifact>,
    pub tolerance: Option<f64>,
}

impl Outputs {
    fn table(&mut self, stem: &str, table: &Table, format: Format, ctx: &PlotContext) {
        let data = match format {
            Format::Csv => table.to_csv(),
            Format::Json => table.to_json(),
        };
        self.file(format!("{stem}.{}", format.extension()), data);
        self.file(format!("{stem}.svg"), render(table.kind, &table.numeric(), ctx));
    }

    fn json(&mut self, name: &str, value: &Value) {
        let mut s = serde_json::to_string_pretty(value).expect("plain values serialize");
        s.push('\n');
        self.file(name.to_string(), s);
    }

    fn file(&mut self, name: String, contents: String) {
        self.artifacts.push(Artifact { name, contents });
    }
}

/// Runs the experiment. `base` resolves relative paths inside the config.
pub fn execute(config: &ExperimentConfig, format: Format, base: &Path) -> Result<Outputs> {
    let mut out = Outputs::default();
    let seed = config.seed;
    match config.experiment {
        ExperimentKind::Scan => scan(config.scan.as_ref().expect("validated"), format, &mut out),
        ExperimentKind::PhaseDiagram => phase(config.phase_diagram.as_ref().expect("validated"), format, &mut out)?,
        ExperimentKind::Disorder => disorder(config.disorder.as_ref().expect("validated"), seed, format, &mut out)?,
        ExperimentKind::Edge => edge(config.edge.as_ref().expect("validated"), seed, format, &mut out)?,
        ExperimentKind::Emulate => emulate(config.emulate.as_ref().expect("validated"), seed, format, &mut out)?,
        ExperimentKind::McErrorbars => {
            mc(config.mc_errorbars.as_ref().expect("validated"), seed, format, base, &mut out)?
        }
    }
    Ok(out)
}

fn linspace(from: f64, to: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![from];
    }
    (0..n).map(|k| from + (to - from) * k as f64 / (n - 1) as f64).collect()
}

fn finite_or_null(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

fn scan(s: &ScanConfig, format: Format, out: &mut Outputs) {
    let grid = || linspace(from_pi(s.from_pi), from_pi(s.to_pi), s.points);
    let line = match s.line {
        LineKind::Theta2Double => ScanLine::Theta2Double(grid()),
        LineKind::Theta1Double => ScanLine::Theta1Double(grid()),
        LineKind::Pairs => ScanLine::Pairs(s.pairs_pi.iter().map(|[a, b]| (from_pi(*a), from_pi(*b))).collect()),
    };
    let gauge = match s.gauge {
        GaugeChoice::Auto => Gauge::Auto,
        GaugeChoice::Reference => Gauge::reference(),
    };
    let result = scan_line(&line, s.t, gauge);
    let mut table = Table::new(DataKind::Scan);
    let mut flagged = Vec::new();
    for (k, point) in result.points.iter().enumerate() {
        let (q0, qp, res) = match &point.invariants {
            Ok(q) => (q.q0, q.q_pi, q.residual),
            Err(e) => {
                flagged.push(json!({ "index": k, "reason": e.to_string() }));
                (f64::NAN, f64::NAN, f64::NAN)
            }
        };
        table.push(vec![
            to_pi(point.theta1).into(),
            to_pi(point.theta2).into(),
            q0.into(),
            qp.into(),
            res.into(),
            s.t.into(),
        ]);
    }
    out.table("scan", &table, format, &PlotContext::default());
    let parameter_unit = if s.line == LineKind::Pairs { "pair index" } else { "pi" };
    let transitions: Vec<Value> = result
        .transitions
        .iter()
        .map(|&p| finite_or_null(if s.line == LineKind::Pairs { p } else { to_pi(p) }))
        .collect();
    out.json(
        "scan_summary.json",
        &json!({ "t": s.t, "parameter_unit": parameter_unit, "transitions": transitions, "flagged": flagged }),
    );
}

fn phase(s: &PhaseDiagramConfig, format: Format, out: &mut Outputs) -> Result<()> {
    let diagram = phase_diagram(s.resolution, s.t, s.tolerance, Gauge::reference())?;
    let mut table = Table::new(DataKind::PhaseDiagram);
    let mut counts = [0usize; 5];
    for cell in &diagram.cells {
        let (q0, qp, res) = match &cell.invariants {
            Ok(q) => (q.q0, q.q_pi, q.residual),
            Err(_) => (f64::NAN, f64::NAN, f64::NAN),
        };
        table.push(vec![
            to_pi(cell.theta1).into(),
            to_pi(cell.theta2).into(),
            q0.into(),
            qp.into(),
            res.into(),
            s.t.into(),
        ]);
        let k = match cell.label {
            PhaseLabel::Phase { q0_positive: false, q_pi_positive: false } => 0,
            PhaseLabel::Phase { q0_positive: true, q_pi_positive: true } => 1,
            PhaseLabel::Phase { q0_positive: false, q_pi_positive: true } => 2,
            PhaseLabel::Phase { q0_positive: true, q_pi_positive: false } => 3,
            PhaseLabel::Boundary => 4,
        };
        counts[k] += 1;
    }
    out.tolerance = Some(s.tolerance);
    out.table("phase_diagram", &table, format, &PlotContext { tolerance: s.tolerance });
    out.json(
        "phase_diagram_summary.json",
        &json!({
            "t": s.t,
            "resolution": s.resolution,
            "tolerance": s.tolerance,
            "cells": {
                "q0_neg_qpi_neg": counts[0],
                "q0_pos_qpi_pos": counts[1],
                "q0_neg_qpi_pos": counts[2],
                "q0_pos_qpi_neg": counts[3],
                "boundary": counts[4],
            }
        }),
    );
    Ok(())
}

fn disorder(s: &DisorderConfig, seed: u64, format: Format, out: &mut Outputs) -> Result<()> {
    let mut spec =
        DisorderSpec::new(from_pi(s.theta_a_pi), from_pi(s.theta_b_pi), 0.0, seed)?.with_n_configs(s.n_configs);
    if let Some(len) = s.sample_len {
        spec = spec.with_sample_len(len);
    }
    let results = sweep(&spec, &s.p.values(), s.t)?;
    let mut runs = Table::new(DataKind::DisorderRuns);
    let mut summary = Table::new(DataKind::DisorderSummary);
    for r in &results {
        for (c, v) in r.half_r0.iter().enumerate() {
            runs.push(vec![r.p.into(), c.into(), (*v).into(), r.t.into(), r.seed.into()]);
        }
        summary.push(vec![r.p.into(), r.mean.into(), r.std.into(), r.half_r0.len().into(), r.t.into()]);
    }
    let ctx = PlotContext::default();
    out.table("disorder_runs", &runs, format, &ctx);
    out.table("disorder_summary", &summary, format, &ctx);

    if let Some(l) = &s.locate {
        let steps = (1.0 / l.p_step).round() as usize;
        let grid = linspace(0.0, 1.0, steps + 1);
        let value = match transition_locator(&spec, l.t_large, &grid, l.n_configs) {
            Ok(est) => json!({
                "t_large": l.t_large,
                "n_configs": l.n_configs,
                "p_step": l.p_step,
                "p_crit": finite_or_null(est.p_crit),
                "slope": finite_or_null(est.slope),
                "evaluated": est.evaluated.iter().map(|(p, b)| json!({ "p": p, "sign_balance": b })).collect::<Vec<_>>(),
            }),
            Err(qwtopo::Error::NoCrossing) => json!({
                "t_large": l.t_large,
                "n_configs": l.n_configs,
                "p_step": l.p_step,
                "p_crit": null,
                "outcome": "no crossing",
            }),
            Err(e) => return Err(e.into()),
        };
        out.json("transition.json", &value);
    }
    Ok(())
}

fn intensity_table(record: &LocalizationRecord) -> Table {
    let mut t = Table::new(DataKind::Intensity);
    for (step, x, v) in record.intensity_map() {
        t.push(vec![step.into(), x.into(), v.into()]);
    }
    t
}

fn edge(s: &EdgeConfig, seed: u64, format: Format, out: &mut Outputs) -> Result<()> {
    let spec = DisorderSpec::new(from_pi(s.theta_a_pi), from_pi(s.theta_b_pi), 0.0, seed)?.with_n_configs(s.n_configs);
    let input = match s.input {
        InputCoin::H => CoinState::H,
        InputCoin::V => CoinState::V,
    };
    let summaries = localization_vs_disorder_from(input, from_pi(s.theta_left_pi), &spec, s.t, &s.p.values())?;
    let ctx = PlotContext::default();
    let mut per_config = Table::new(DataKind::Edge);
    let mut summary = Table::new(DataKind::EdgeSummary);
    for sm in &summaries {
        for r in &sm.records {
            per_config.push(vec![sm.p.into(), r.config.into(), r.p_loc.into(), s.t.into()]);
        }
        summary.push(vec![sm.p.into(), sm.mean.into(), sm.std.into(), sm.records.len().into(), s.t.into()]);
    }
    out.table("edge", &per_config, format, &ctx);
    out.table("edge_summary", &summary, format, &ctx);
    for sm in &summaries {
        out.table(&format!("intensity_p{}", sm.p), &intensity_table(&sm.records[0]), format, &ctx);
    }

    let reference = match &s.reference {
        Some(r) => {
            let right = DisorderSpec::new(from_pi(r.theta_right_pi), from_pi(r.theta_right_pi), 0.0, seed)?;
            InterfaceSystem::new(from_pi(r.theta_left_pi), right, 0)
        }
        None => reference_system(),
    }
    .with_input(input);
    let record = run_interface(&reference, s.t);
    out.table("intensity_reference", &intensity_table(&record), format, &ctx);
    out.json(
        "edge_reference.json",
        &json!({
            "theta_left_pi": to_pi(reference.theta_left),
            "theta_right_pi": to_pi(reference.right.theta_a),
            "t": s.t,
            "P_loc": record.p_loc,
            "argmax": record.argmax(),
        }),
    );
    Ok(())
}

fn relation_code(r: Option<Relation>) -> i64 {
    match r {
        Some(Relation::Same) => 1,
        Some(Relation::Opposite) => -1,
        None => 0,
    }
}

fn pair_json(q: &qwtopo::Result<qwtopo::InvariantPair>) -> Value {
    match q {
        Ok(q) => json!({ "Q0": q.q0, "Qpi": q.q_pi }),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn emulate(s: &EmulateConfig, seed: u64, format: Format, out: &mut Outputs) -> Result<()> {
    let system = ScatteringSystem::clean(from_pi(s.theta1_pi), from_pi(s.theta2_pi));
    let readout = match s.photons {
        Some(photons) => Readout::Shots { photons, seed },
        None => Readout::Exact,
    };
    let model = s.model.model();
    let run = emulate_measurement(&system, s.t, &model, readout)?;
    let reconstructed = run.reconstruct();
    let signed: Vec<f64> = match &reconstructed {
        Ok(series) => series.imaginary_parts(),
        Err(_) => vec![f64::NAN; s.t],
    };
    let mut table = Table::new(DataKind::Emulation);
    for (k, value) in signed.iter().enumerate() {
        let relation = if k == 0 { run.reference } else { run.relations[k] };
        let delta = run.sign_measurements[k].map_or(f64::NAN, |m| m.delta_i());
        table.push(vec![
            (k + 1).into(),
            run.magnitudes[k].into(),
            (*value).into(),
            relation_code(relation).into(),
            delta.into(),
        ]);
    }
    let ctx = PlotContext::default();
    out.table("emulation", &table, format, &ctx);

    let mut map = Table::new(DataKind::Intensity);
    for (k, row) in run.distributions.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            map.push(vec![(k + 1).into(), (run.x_min + i as i64).into(), (*v).into()]);
        }
    }
    out.table("emulation_intensity", &map, format, &ctx);

    let ideal = invariants(&system.reflection_amplitudes(s.t), Gauge::reference());
    let measured = match &reconstructed {
        Ok(series) => pair_json(&invariants(series, Gauge::reference())),
        Err(e) => json!({ "error": e.to_string() }),
    };
    out.json(
        "emulation_summary.json",
        &json!({
            "theta1_pi": s.theta1_pi,
            "theta2_pi": s.theta2_pi,
            "t": s.t,
            "model": s.model,
            "photons": s.photons,
            "ideal": pair_json(&ideal),
            "realized": pair_json(&invariants(&run.realized_series(), Gauge::reference())),
            "reconstructed": measured,
        }),
    );
    Ok(())
}

/// Reads an intensity-map file into per-step rows on the emulator window.
fn observed_distributions(path: &Path, t: usize) -> Result<Vec<Vec<f64>>> {
    let invalid = |m: String| CliError::io(path, std::io::Error::new(std::io::ErrorKind::InvalidData, m));
    let file = read_data_file(path)?.ok_or_else(|| invalid("not an intensity map (step,position,intensity)".into()))?;
    if file.kind != DataKind::Intensity {
        return Err(invalid("not an intensity map (step,position,intensity)".into()));
    }
    let reach = t as i64 + 1;
    let mut rows = vec![vec![0.0; (2 * reach + 1) as usize]; t];
    for r in &file.rows {
        let (step, x) = (r[0] as i64, r[1] as i64);
        if step >= 1 && step as usize <= t && x.abs() <= reach {
            rows[step as usize - 1][(x + reach) as usize] = r[2];
        }
    }
    Ok(rows)
}

fn mc(s: &McConfig, seed: u64, format: Format, base: &Path, out: &mut Outputs) -> Result<()> {
    let system = ScatteringSystem::clean(from_pi(s.theta1_pi), from_pi(s.theta2_pi));
    let ctx = PlotContext::default();
    let observed = match &s.observed {
        Some(file) => observed_distributions(&base.join(file), s.t)?,
        None => {
            let run = emulate_measurement(&system, s.t, &s.truth.model(), Readout::Exact)?;
            let mut map = Table::new(DataKind::Intensity);
            for (k, row) in run.distributions.iter().enumerate() {
                for (i, v) in row.iter().enumerate() {
                    map.push(vec![(k + 1).into(), (run.x_min + i as i64).into(), (*v).into()]);
                }
            }
            out.table("observed_intensity", &map, format, &ctx);
            run.distributions
        }
    };
    let options = McOptions {
        n_sets: s.n_sets,
        horizon: s.horizon,
        seed,
        detector_efficiency: s.detector_efficiency,
        ..McOptions::default()
    };
    let report = monte_carlo_errorbars(&system, s.t, &observed, &options)?;
    let best = *report.best_set();
    let mut table = Table::new(DataKind::McSets);
    for (k, set) in report.sets.iter().enumerate() {
        table.push(vec![
            k.into(),
            set.model.loss_asymmetry.into(),
            set.model.eom_error.to_degrees().into(),
            set.model.sbc_error.to_degrees().into(),
            set.distance.into(),
            Cell::Float(set.q0 - best.q0),
            Cell::Float(set.q_pi - best.q_pi),
        ]);
    }
    out.table("mc_sets", &table, format, &ctx);
    let ideal = invariants(&system.reflection_amplitudes(s.t), Gauge::reference());
    out.json(
        "mc_summary.json",
        &json!({
            "theta1_pi": s.theta1_pi,
            "theta2_pi": s.theta2_pi,
            "t": s.t,
            "n_sets": s.n_sets,
            "horizon": s.horizon,
            "observed": s.observed,
            "best_set": report.best,
            "best_model": {
                "loss_asymmetry": best.model.loss_asymmetry,
                "eom_error_deg": best.model.eom_error.to_degrees(),
                "sbc_error_deg": best.model.sbc_error.to_degrees(),
                "distance": best.distance,
            },
            "Q0": best.q0,
            "Qpi": best.q_pi,
            "error_Q0": report.error_q0,
            "error_Qpi": report.error_q_pi,
            "ideal": pair_json(&ideal),
        }),
    );
    Ok(())
}
