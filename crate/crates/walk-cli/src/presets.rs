//! Built-in scenario presets, one per headline experiment.

use std::f64::consts::FRAC_PI_2;

use walk_core::census_inputs;

use crate::config::{
    CoherentEntry, ConfigFile, FormatKind, InitialSection, LatticeSection, ObservableKind,
    OutputSpec, ScheduleRecord, StatisticsField,
};
use crate::error::CliError;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: ConfigFile,
}

pub const PRESET_NAMES: [&str; 9] = [
    "table1",
    "split",
    "fig6",
    "fig7",
    "entangled",
    "coherent_balanced",
    "coherent_unbalanced",
    "phase_switch",
    "appendixB_census",
];

fn out(observable: ObservableKind, format: FormatKind, path: &str) -> OutputSpec {
    OutputSpec {
        observable,
        format,
        path: path.to_string(),
    }
}

fn origin_pair(statistics: StatisticsField) -> InitialSection {
    InitialSection::Modes {
        modes: ["0:1".into(), "0:2".into()],
        statistics,
    }
}

fn base(steps: u32, initial: InitialSection) -> ConfigFile {
    ConfigFile {
        steps,
        lattice: LatticeSection::default(),
        coin: Default::default(),
        initial,
        schedule: Vec::new(),
        outputs: vec![out(ObservableKind::Report, FormatKind::Json, "report.json")],
    }
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<Preset, CliError> {
    let (description, config): (&'static str, ConfigFile) = match name {
        "table1" => {
            let mut config = base(1, origin_pair(StatisticsField::Boson));
            config
                .outputs
                .push(out(ObservableKind::ExitTable, FormatKind::Csv, "exit_table.csv"));
            (
                "one-vertex exit probabilities for the photon pair entering ports 1 and 2",
                config,
            )
        }
        "split" => {
            let mut config = base(20, origin_pair(StatisticsField::Boson));
            config
                .outputs
                .push(out(ObservableKind::Branches, FormatKind::Csv, "branches.csv"));
            config
                .outputs
                .push(out(ObservableKind::Joint, FormatKind::Csv, "joint.csv"));
            (
                "20-step walk splitting into equal oscillating and ballistic branches",
                config,
            )
        }
        "fig6" => {
            let mut config = base(12, origin_pair(StatisticsField::Boson));
            config
                .outputs
                .push(out(ObservableKind::Joint, FormatKind::Csv, "joint.csv"));
            config
                .outputs
                .push(out(ObservableKind::Heatmap, FormatKind::Ppm, "joint.ppm"));
            (
                "indistinguishable pair, 12 steps: joint distribution stays on the diagonal",
                config,
            )
        }
        "fig7" => {
            let mut config = base(12, origin_pair(StatisticsField::Distinguishable));
            config
                .outputs
                .push(out(ObservableKind::Joint, FormatKind::Csv, "joint.csv"));
            config
                .outputs
                .push(out(ObservableKind::Heatmap, FormatKind::Ppm, "joint.ppm"));
            (
                "distinguishable pair, 12 steps: off-diagonal joint amplitude appears",
                config,
            )
        }
        "entangled" => {
            let mut config = base(
                10,
                InitialSection::Named {
                    state: "A+:1,2".into(),
                },
            );
            config.lattice.polarized = true;
            config
                .outputs
                .push(out(ObservableKind::Fidelity, FormatKind::Csv, "fidelity.csv"));
            config
                .outputs
                .push(out(ObservableKind::State, FormatKind::Json, "state.json"));
            (
                "polarization-entangled pair: Bell-pattern fidelity in both branches",
                config,
            )
        }
        "coherent_balanced" => {
            let config = coherent_preset(0.5, 0.5);
            (
                "balanced coherent input: transmits indefinitely with zero reflection",
                config,
            )
        }
        "coherent_unbalanced" => {
            let config = coherent_preset(0.3, 0.1);
            (
                "unbalanced coherent input: transmitted lines even out, reflection is antisymmetric",
                config,
            )
        }
        "phase_switch" => {
            let mut config = base(20, origin_pair(StatisticsField::Boson));
            config.schedule = vec![
                ScheduleRecord {
                    step: 5,
                    edge: 5,
                    line: crate::config::LineField::Upper,
                    phase: FRAC_PI_2,
                    persist: false,
                },
                ScheduleRecord {
                    step: 5,
                    edge: 5,
                    line: crate::config::LineField::Lower,
                    phase: -FRAC_PI_2,
                    persist: false,
                },
            ];
            config
                .outputs
                .push(out(ObservableKind::Branches, FormatKind::Csv, "branches.csv"));
            config
                .outputs
                .push(out(ObservableKind::Joint, FormatKind::Csv, "joint.csv"));
            (
                "pi/2 / -pi/2 insertion on edge 5 at step 5 pins the ballistic branch",
                config,
            )
        }
        "appendixB_census" => {
            let members = census_inputs().iter().map(|n| n.label()).collect();
            let mut config = base(6, InitialSection::Census { members });
            config.lattice.polarized = true;
            config
                .outputs
                .push(out(ObservableKind::Census, FormatKind::Csv, "census.csv"));
            (
                "clustering census of the polarized A/B/C input families",
                config,
            )
        }
        other => return Err(CliError::UnknownPreset(other.to_string())),
    };
    Ok(Preset {
        name: PRESET_NAMES
            .iter()
            .find(|n| **n == name)
            .expect("matched presets are listed"),
        description,
        config,
    })
}

fn coherent_preset(upper: f64, lower: f64) -> ConfigFile {
    let mut config = base(
        20,
        InitialSection::Coherent {
            fields: vec![CoherentEntry {
                site: 0,
                upper: [upper, 0.0],
                lower: [lower, 0.0],
            }],
        },
    );
    config
        .outputs
        .push(out(ObservableKind::Coherent, FormatKind::Csv, "amplitudes.csv"));
    config
}

/// All presets with their descriptions, for `list-presets`.
pub fn all_presets() -> Vec<Preset> {
    PRESET_NAMES
        .iter()
        .map(|name| preset(name).expect("listed presets exist"))
        .collect()
}
