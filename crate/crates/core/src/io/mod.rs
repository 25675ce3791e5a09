//! File formats: model configs, sweep CSV, EP reports, manifests and plot
//! scripts.

pub mod config;
pub mod csv;
pub mod plot;
pub mod report;

pub use config::{ConfigError, ModelConfig, RefineSection, StateSection, SweepSection};
pub use csv::{csv_header, write_csv, CsvLayout};
pub use plot::plot_script;
pub use report::{ep_report_toml, manifest_toml, LocationRecord};
