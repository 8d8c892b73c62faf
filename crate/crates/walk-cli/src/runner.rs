//! Scenario execution: runs the configured walk, records per-step
//! observables, writes the requested outputs, and optionally replays the
//! run against the dense reference implementation.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use walk_core::{
    balance_defect, branch_weights, brute_force_oracle, build, classify_clustering,
    clustering_defect, coherent_reference, coherent_step, direction_masses, exit_port_table,
    polarization_bell_fidelity, step, CoherentField, Direction, Statistics, Transfer,
    TwoPhotonState, WalkError, NORM_TOL,
};

use crate::config::{FormatKind, ObservableKind, Resolved, Scenario};
use crate::error::CliError;

const VERIFY_TOL: f64 = 1e-12;
const HEATMAP_CELL_PX: usize = 8;

/// Per-step observable record. Fields that do not apply to the scenario
/// are omitted from the serialized report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct StepRecord {
    pub step: u32,
    /// Total probability (two-photon runs) or mean photon number
    /// (coherent runs).
    pub norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clustering_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction_ll: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction_rr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction_mixed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oscillating: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ballistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub front_site: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balance_right: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub balance_left: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusRecord {
    pub state: String,
    pub classification: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantSummary {
    pub max_norm_drift: f64,
    pub max_clustering_defect: Option<f64>,
    pub breaches: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationRecord {
    pub compared_steps: u32,
    pub max_amplitude_difference: f64,
}

/// Deterministic run summary; regenerating it from the same configuration
/// produces identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub engine_version: &'static str,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub scenario: &'static str,
    pub steps: u32,
    pub lattice_half_width: u32,
    pub polarized: bool,
    pub per_step: Vec<StepRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub census: Vec<CensusRecord>,
    pub invariants: InvariantSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationRecord>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}

/// Executes a resolved configuration, writing outputs under `out_dir`.
///
/// Invariant breaches (norm drift beyond tolerance, verification
/// disagreement) are reported through the error channel after all outputs
/// are written, so a failing run still leaves its artifacts for
/// inspection.
pub fn run(resolved: &Resolved, out_dir: &Path, verify: bool) -> Result<RunReport, CliError> {
    fs::create_dir_all(out_dir)?;
    let mut report = match &resolved.scenario {
        Scenario::TwoPhoton { initial, track_branches } => {
            run_two_photon(resolved, initial, *track_branches, out_dir, verify)?
        }
        Scenario::Coherent { initial } => run_coherent(resolved, initial, out_dir, verify)?,
        Scenario::Census { members } => run_census(resolved, members, out_dir, verify)?,
    };

    report.config_hash = resolved.config_hash.clone();
    report.preset = resolved.preset.clone();

    for spec in &resolved.outputs {
        if spec.observable == ObservableKind::Report {
            write_text(out_dir, &spec.path, &report.to_json())?;
        }
    }

    if !report.invariants.breaches.is_empty() {
        return Err(CliError::InvariantBreach(
            report.invariants.breaches.join("; "),
        ));
    }
    Ok(report)
}

fn empty_report(resolved: &Resolved, scenario: &'static str) -> RunReport {
    RunReport {
        engine_version: env!("CARGO_PKG_VERSION"),
        config_hash: String::new(),
        preset: None,
        scenario,
        steps: resolved.steps,
        lattice_half_width: resolved.lattice.half_width,
        polarized: resolved.lattice.polarized,
        per_step: Vec::new(),
        census: Vec::new(),
        invariants: InvariantSummary {
            max_norm_drift: 0.0,
            max_clustering_defect: None,
            breaches: Vec::new(),
        },
        verification: None,
    }
}

fn run_two_photon(
    resolved: &Resolved,
    initial: &TwoPhotonState,
    track_branches: bool,
    out_dir: &Path,
    verify: bool,
) -> Result<RunReport, CliError> {
    let mut report = empty_report(resolved, "two_photon");
    let lattice = resolved.lattice;
    let boson = initial.statistics() == Statistics::Boson;

    let mut state = initial.clone();
    let mut fidelity_rows: Vec<(u32, &str, f64)> = Vec::new();
    let wants_fidelity = resolved
        .outputs
        .iter()
        .any(|o| o.observable == ObservableKind::Fidelity);

    for n in 0..=resolved.steps {
        let record = record_two_photon(&state, track_branches, boson, &mut report);
        report.per_step.push(record);
        if wants_fidelity {
            let front = state.time() as i32;
            if let Ok(f) = polarization_bell_fidelity(&state, -1..=0) {
                fidelity_rows.push((n, "oscillating", f));
            }
            if let Ok(f) = polarization_bell_fidelity(&state, front..=front) {
                fidelity_rows.push((n, "ballistic", f));
            }
        }
        if n < resolved.steps {
            let transfer = Transfer::new(&resolved.coin, &resolved.schedule, state.time(), lattice);
            state = step(&state, &transfer)?;
        }
    }

    for spec in &resolved.outputs {
        match spec.observable {
            ObservableKind::Joint => {
                let joint = walk_core::joint_site_distribution(&state);
                write_text(out_dir, &spec.path, &joint.to_csv())?;
            }
            ObservableKind::Heatmap => {
                let joint = walk_core::joint_site_distribution(&state);
                match spec.format {
                    FormatKind::Ppm => {
                        write_bytes(out_dir, &spec.path, &joint.to_ppm(HEATMAP_CELL_PX))?
                    }
                    _ => write_text(out_dir, &spec.path, &joint.to_svg(HEATMAP_CELL_PX))?,
                }
            }
            ObservableKind::State => {
                write_text(out_dir, &spec.path, &state.snapshot(&lattice).to_json())?;
            }
            ObservableKind::ExitTable => {
                let transfer =
                    Transfer::new(&resolved.coin, &resolved.schedule, initial.time(), lattice);
                let table = exit_port_table(initial, &transfer)?;
                write_text(out_dir, &spec.path, &exit_table_csv(&table))?;
            }
            ObservableKind::Branches => {
                write_text(out_dir, &spec.path, &branches_csv(&report.per_step))?;
            }
            ObservableKind::Fidelity => {
                let mut text = String::from("step,window,fidelity\n");
                for (n, window, f) in &fidelity_rows {
                    let _ = writeln!(text, "{n},{window},{f}");
                }
                write_text(out_dir, &spec.path, &text)?;
            }
            ObservableKind::Report | ObservableKind::Coherent | ObservableKind::Census => {}
        }
    }

    if verify {
        let dense = brute_force_oracle(
            initial,
            &resolved.coin,
            &resolved.schedule,
            &lattice,
            resolved.steps,
        )?;
        let diff = state.max_amplitude_difference(&dense);
        report.verification = Some(VerificationRecord {
            compared_steps: resolved.steps,
            max_amplitude_difference: diff,
        });
        if diff > VERIFY_TOL {
            report.invariants.breaches.push(format!(
                "sparse and dense evolutions disagree by {diff:.3e}"
            ));
        }
    }
    Ok(report)
}

fn record_two_photon(
    state: &TwoPhotonState,
    track_branches: bool,
    boson: bool,
    report: &mut RunReport,
) -> StepRecord {
    let norm = state.norm_sqr();
    let drift = (norm - 1.0).abs();
    if drift > report.invariants.max_norm_drift {
        report.invariants.max_norm_drift = drift;
    }
    if drift > NORM_TOL {
        report
            .invariants
            .breaches
            .push(format!("norm drift {drift:.3e} at step {}", state.time()));
    }
    let defect = clustering_defect(state);
    if boson {
        let worst = report.invariants.max_clustering_defect.unwrap_or(0.0);
        if defect > worst {
            report.invariants.max_clustering_defect = Some(defect);
        }
    }
    let dirs = direction_masses(state);
    let mut record = StepRecord {
        step: state.time(),
        norm,
        clustering_defect: Some(defect),
        direction_ll: Some(dirs.ll),
        direction_rr: Some(dirs.rr),
        direction_mixed: Some(dirs.mixed),
        ..StepRecord::default()
    };
    if track_branches {
        let weights = branch_weights(state, 1);
        record.oscillating = Some(weights.oscillating);
        record.ballistic = Some(weights.ballistic);
        record.other = Some(weights.other);
        record.front_site = Some(weights.front_site);
    }
    record
}

fn run_coherent(
    resolved: &Resolved,
    initial: &CoherentField,
    out_dir: &Path,
    verify: bool,
) -> Result<RunReport, CliError> {
    let mut report = empty_report(resolved, "coherent");
    let lattice = resolved.lattice;
    let reference_intensity = initial.total_intensity();

    let mut field = initial.clone();
    let mut amplitude_rows = String::from("step,mode,re,im\n");
    for n in 0..=resolved.steps {
        let intensity = field.total_intensity();
        let drift = (intensity - reference_intensity).abs();
        if drift > report.invariants.max_norm_drift {
            report.invariants.max_norm_drift = drift;
        }
        if drift > NORM_TOL * (1.0 + reference_intensity) {
            report
                .invariants
                .breaches
                .push(format!("intensity drift {drift:.3e} at step {n}"));
        }
        report.per_step.push(StepRecord {
            step: n,
            norm: intensity,
            balance_right: Some(balance_defect(&field, Direction::R)),
            balance_left: Some(balance_defect(&field, Direction::L)),
            ..StepRecord::default()
        });
        for (mode, amp) in field.iter() {
            let _ = writeln!(amplitude_rows, "{n},{},{},{}", mode.encode(), amp.re, amp.im);
        }
        if n < resolved.steps {
            let transfer = Transfer::new(&resolved.coin, &resolved.schedule, field.time(), lattice);
            field = coherent_step(&field, &transfer)?;
        }
    }

    for spec in &resolved.outputs {
        if spec.observable == ObservableKind::Coherent {
            write_text(out_dir, &spec.path, &amplitude_rows)?;
        }
    }

    if verify {
        let dense = coherent_reference(
            initial,
            &resolved.coin,
            &resolved.schedule,
            &lattice,
            resolved.steps,
        )?;
        let mut diff = 0.0f64;
        for (mode, amp) in field.iter() {
            diff = diff.max((amp - dense.amplitude(*mode)).norm());
        }
        for (mode, amp) in dense.iter() {
            diff = diff.max((amp - field.amplitude(*mode)).norm());
        }
        report.verification = Some(VerificationRecord {
            compared_steps: resolved.steps,
            max_amplitude_difference: diff,
        });
        if diff > VERIFY_TOL {
            report.invariants.breaches.push(format!(
                "coherent evolution disagrees with the dense reference by {diff:.3e}"
            ));
        }
    }
    Ok(report)
}

fn run_census(
    resolved: &Resolved,
    members: &[walk_core::NamedState],
    out_dir: &Path,
    verify: bool,
) -> Result<RunReport, CliError> {
    let mut report = empty_report(resolved, "census");
    let steps = resolved.steps.max(2);
    let mut worst_diff = 0.0f64;

    for named in members {
        let classification = match classify_clustering(named, steps) {
            Ok(class) => class.label().to_string(),
            Err(WalkError::VanishingState(_)) => "vanishes".to_string(),
            Err(other) => return Err(other.into()),
        };
        report.census.push(CensusRecord {
            state: named.label(),
            classification,
        });
        if verify {
            match build(named, &resolved.lattice) {
                Ok(state) => {
                    let sparse = walk_core::evolve(
                        &state,
                        &resolved.coin,
                        &resolved.schedule,
                        &resolved.lattice,
                        resolved.steps,
                    )?;
                    let dense = brute_force_oracle(
                        &state,
                        &resolved.coin,
                        &resolved.schedule,
                        &resolved.lattice,
                        resolved.steps,
                    )?;
                    worst_diff = worst_diff.max(sparse.max_amplitude_difference(&dense));
                }
                Err(WalkError::VanishingState(_)) => {}
                Err(other) => return Err(other.into()),
            }
        }
    }

    for spec in &resolved.outputs {
        if spec.observable == ObservableKind::Census {
            let mut text = String::from("state,classification\n");
            for row in &report.census {
                let _ = writeln!(text, "{},{}", row.state, row.classification);
            }
            write_text(out_dir, &spec.path, &text)?;
        }
    }

    if verify {
        report.verification = Some(VerificationRecord {
            compared_steps: resolved.steps,
            max_amplitude_difference: worst_diff,
        });
        if worst_diff > VERIFY_TOL {
            report.invariants.breaches.push(format!(
                "census evolutions disagree with the dense reference by {worst_diff:.3e}"
            ));
        }
    }
    Ok(report)
}

fn exit_table_csv(table: &std::collections::BTreeMap<(u8, u8), f64>) -> String {
    let mut text = String::from("transition,probability,exit_direction\n");
    for (&(i, j), &p) in table {
        let side = |port: u8| if port <= 2 { 'L' } else { 'R' };
        let _ = writeln!(text, "{i}{j},{p},{}{}", side(i), side(j));
    }
    text
}

fn branches_csv(records: &[StepRecord]) -> String {
    let mut text = String::from("step,oscillating,ballistic,other,front_site\n");
    for r in records {
        if let (Some(osc), Some(ball), Some(other), Some(front)) =
            (r.oscillating, r.ballistic, r.other, r.front_site)
        {
            let _ = writeln!(text, "{},{osc},{ball},{other},{front}", r.step);
        }
    }
    text
}

fn write_text(out_dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    fs::write(out_dir.join(name), content)?;
    Ok(())
}

fn write_bytes(out_dir: &Path, name: &str, content: &[u8]) -> Result<(), CliError> {
    fs::write(out_dir.join(name), content)?;
    Ok(())
}
