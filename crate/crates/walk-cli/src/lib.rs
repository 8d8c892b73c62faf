//! Configuration, presets, and the run loop behind the `walk` binary.

pub mod config;
pub mod error;
pub mod presets;
pub mod runner;

pub use config::{ConfigFile, Resolved, Scenario};
pub use error::CliError;
pub use presets::{all_presets, preset, Preset, PRESET_NAMES};
pub use runner::{run, RunReport};
