//! Run configuration: the TOML file schema and its resolution into engine
//! types. Parsing uses strict field checking so typos are reported with
//! the offending line and column.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use walk_core::{
    CoherentField, CoinUnitary, LatticeConfig, Line, Mode, NamedState, PhaseSchedule, Statistics,
    TwoPhotonState,
};

use crate::error::CliError;

/// On-disk run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// Number of walk steps to simulate.
    pub steps: u32,
    #[serde(default)]
    pub lattice: LatticeSection,
    #[serde(default)]
    pub coin: CoinSection,
    pub initial: InitialSection,
    #[serde(default)]
    pub schedule: Vec<ScheduleRecord>,
    #[serde(default)]
    pub outputs: Vec<OutputSpec>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    /// Sites run -half_width..=half_width. Omit to auto-size for the
    /// requested number of steps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<u32>,
    #[serde(default)]
    pub polarized: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum CoinSection {
    #[default]
    Grover,
    /// Arbitrary 4x4 unitary; each entry is `[re, im]`, rows are output
    /// ports 1..4, columns input ports 1..4.
    Custom { matrix: [[[f64; 2]; 4]; 4] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsField {
    Boson,
    Distinguishable,
}

impl From<StatisticsField> for Statistics {
    fn from(value: StatisticsField) -> Statistics {
        match value {
            StatisticsField::Boson => Statistics::Boson,
            StatisticsField::Distinguishable => Statistics::Distinguishable,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum InitialSection {
    /// One photon in each of two incoming modes (`site:port[:pol]`).
    Modes {
        modes: [String; 2],
        #[serde(default = "default_statistics")]
        statistics: StatisticsField,
    },
    /// A named state, e.g. `A+:1,2`, `psi_t:m=0:RR`.
    Named { state: String },
    /// Classical coherent amplitudes entering vertices rightward.
    Coherent { fields: Vec<CoherentEntry> },
    /// Clustering census over a list of named states.
    Census { members: Vec<String> },
}

fn default_statistics() -> StatisticsField {
    StatisticsField::Boson
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherentEntry {
    pub site: i32,
    /// `[re, im]` amplitude on the upper line (port 1).
    pub upper: [f64; 2],
    /// `[re, im]` amplitude on the lower line (port 2).
    pub lower: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineField {
    Upper,
    Lower,
}

impl From<LineField> for Line {
    fn from(value: LineField) -> Line {
        match value {
            LineField::Upper => Line::Upper,
            LineField::Lower => Line::Lower,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleRecord {
    pub step: u32,
    /// Edge key: the site of the edge's left endpoint.
    pub edge: i32,
    pub line: LineField,
    /// Phase angle in radians.
    pub phase: f64,
    /// Apply from `step` through the end of the run instead of once.
    #[serde(default)]
    pub persist: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    /// Joint site distribution of the final state.
    Joint,
    /// Joint site distribution as a grayscale image.
    Heatmap,
    /// Full amplitude snapshot of the final state.
    State,
    /// Run report with per-step records and invariant summary.
    Report,
    /// Per-step branch weights of the origin-pair scenario.
    Branches,
    /// One-vertex exit-port probability table of the initial state.
    ExitTable,
    /// Per-step coherent mode amplitudes.
    Coherent,
    /// Census classification table.
    Census,
    /// Per-step Bell-pattern fidelity in the two walk windows.
    Fidelity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatKind {
    Csv,
    Json,
    Ppm,
    Svg,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub observable: ObservableKind,
    pub format: FormatKind,
    pub path: String,
}

/// The scenario a run executes.
#[derive(Debug, Clone)]
pub enum Scenario {
    TwoPhoton {
        initial: TwoPhotonState,
        /// Branch weights are reported for the origin-pair input.
        track_branches: bool,
    },
    Coherent {
        initial: CoherentField,
    },
    Census {
        members: Vec<NamedState>,
    },
}

/// Fully validated configuration, ready to run.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub steps: u32,
    pub lattice: LatticeConfig,
    pub coin: CoinUnitary,
    pub schedule: PhaseSchedule,
    pub scenario: Scenario,
    pub outputs: Vec<OutputSpec>,
    pub config_hash: String,
    pub preset: Option<String>,
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<ConfigFile, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// SHA-256 over the canonical JSON encoding of the configuration.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialization cannot fail");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Validates the file and builds engine values.
    pub fn resolve(&self, preset: Option<&str>) -> Result<Resolved, CliError> {
        let polarized = self.lattice.polarized || self.wants_polarized();

        // Sites the initial state occupies, for lattice sizing.
        let initial_reach = self.initial_sites()?.into_iter().map(i32::unsigned_abs).max().unwrap_or(0);
        let needed = initial_reach + self.steps + 1;
        let half_width = match self.lattice.half_width {
            Some(m) => {
                if needed > m {
                    return Err(CliError::Config(format!(
                        "half_width {m} is too small: a {}-step run from this input needs at least {needed} \
                         (omit lattice.half_width to auto-size)",
                        self.steps
                    )));
                }
                m
            }
            None => needed,
        };
        let lattice = LatticeConfig::new(half_width.max(1), polarized);

        let coin = match &self.coin {
            CoinSection::Grover => CoinUnitary::grover(),
            CoinSection::Custom { matrix } => {
                let mut entries = [[Complex64::new(0.0, 0.0); 4]; 4];
                for (r, row) in matrix.iter().enumerate() {
                    for (c, cell) in row.iter().enumerate() {
                        entries[r][c] = Complex64::new(cell[0], cell[1]);
                    }
                }
                CoinUnitary::custom(entries)
                    .map_err(|e| CliError::Config(e.to_string()))?
            }
        };

        let mut schedule = PhaseSchedule::empty();
        for record in &self.schedule {
            if !record.phase.is_finite() {
                return Err(CliError::Config("schedule phases must be finite".into()));
            }
            if record.persist {
                schedule.insert_range(
                    record.step..self.steps,
                    record.edge,
                    record.line.into(),
                    record.phase,
                );
            } else {
                schedule.insert(record.step, record.edge, record.line.into(), record.phase);
            }
        }

        let scenario = self.build_scenario(&lattice)?;
        self.check_outputs(&scenario)?;

        Ok(Resolved {
            steps: self.steps,
            lattice,
            coin,
            schedule,
            scenario,
            outputs: self.outputs.clone(),
            config_hash: self.hash(),
            preset: preset.map(str::to_owned),
        })
    }

    fn wants_polarized(&self) -> bool {
        match &self.initial {
            InitialSection::Modes { modes, .. } => {
                modes.iter().any(|m| m.split(':').count() == 3)
            }
            InitialSection::Named { state } => NamedState::parse(state)
                .map(|n| n.tag.is_polarized())
                .unwrap_or(false),
            InitialSection::Coherent { .. } => false,
            InitialSection::Census { .. } => true,
        }
    }

    fn initial_sites(&self) -> Result<Vec<i32>, CliError> {
        Ok(match &self.initial {
            InitialSection::Modes { modes, .. } => modes
                .iter()
                .map(|m| Mode::parse(m).map(|mode| mode.site))
                .collect::<Result<_, _>>()
                .map_err(CliError::Config)?,
            InitialSection::Named { state } => {
                vec![NamedState::parse(state).map_err(CliError::Config)?.site]
            }
            InitialSection::Coherent { fields } => fields.iter().map(|f| f.site).collect(),
            InitialSection::Census { members } => members
                .iter()
                .map(|m| NamedState::parse(m).map(|n| n.site))
                .collect::<Result<_, _>>()
                .map_err(CliError::Config)?,
        })
    }

    fn build_scenario(&self, lattice: &LatticeConfig) -> Result<Scenario, CliError> {
        match &self.initial {
            InitialSection::Modes { modes, statistics } => {
                let a = Mode::parse(&modes[0]).map_err(CliError::Config)?;
                let b = Mode::parse(&modes[1]).map_err(CliError::Config)?;
                let initial =
                    TwoPhotonState::from_single_modes(a, b, (*statistics).into(), lattice)?;
                let track_branches = *statistics == StatisticsField::Boson
                    && a.site == 0
                    && b.site == 0
                    && a.polarization.is_none()
                    && {
                        let mut ports = [a.port.number(), b.port.number()];
                        ports.sort_unstable();
                        ports == [1, 2]
                    };
                Ok(Scenario::TwoPhoton {
                    initial,
                    track_branches,
                })
            }
            InitialSection::Named { state } => {
                let named = NamedState::parse(state).map_err(CliError::Config)?;
                let initial = walk_core::build(&named, lattice)?;
                Ok(Scenario::TwoPhoton {
                    initial,
                    track_branches: false,
                })
            }
            InitialSection::Coherent { fields } => {
                if fields.is_empty() {
                    return Err(CliError::Config("coherent input needs at least one field".into()));
                }
                let mut entries = Vec::new();
                for f in fields {
                    entries.push((
                        Mode::incoming(f.site, walk_core::Port::P1),
                        Complex64::new(f.upper[0], f.upper[1]),
                    ));
                    entries.push((
                        Mode::incoming(f.site, walk_core::Port::P2),
                        Complex64::new(f.lower[0], f.lower[1]),
                    ));
                }
                let initial = CoherentField::from_amplitudes(entries, 0, lattice)?;
                Ok(Scenario::Coherent { initial })
            }
            InitialSection::Census { members } => {
                if members.is_empty() {
                    return Err(CliError::Config("census needs at least one member".into()));
                }
                let members = members
                    .iter()
                    .map(|m| NamedState::parse(m))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(CliError::Config)?;
                Ok(Scenario::Census { members })
            }
        }
    }

    fn check_outputs(&self, scenario: &Scenario) -> Result<(), CliError> {
        use FormatKind::*;
        use ObservableKind::*;
        for spec in &self.outputs {
            let format_ok = matches!(
                (spec.observable, spec.format),
                (Joint, Csv)
                    | (Heatmap, Ppm)
                    | (Heatmap, Svg)
                    | (State, Json)
                    | (Report, Json)
                    | (Branches, Csv)
                    | (ExitTable, Csv)
                    | (Coherent, Csv)
                    | (Census, Csv)
                    | (Fidelity, Csv)
            );
            if !format_ok {
                return Err(CliError::Config(format!(
                    "output {:?} does not support format {:?}",
                    spec.observable, spec.format
                )));
            }
            let scenario_ok = match spec.observable {
                Coherent => matches!(scenario, Scenario::Coherent { .. }),
                Census => matches!(scenario, Scenario::Census { .. }),
                Joint | Heatmap | State | ExitTable | Fidelity | Branches => {
                    matches!(scenario, Scenario::TwoPhoton { .. })
                }
                Report => true,
            };
            if !scenario_ok {
                return Err(CliError::Config(format!(
                    "output {:?} does not apply to this scenario",
                    spec.observable
                )));
            }
            if spec.path.is_empty() || spec.path.contains("..") {
                return Err(CliError::Config(format!(
                    "output path '{}' must be a plain relative file name",
                    spec.path
                )));
            }
        }
        Ok(())
    }
}
