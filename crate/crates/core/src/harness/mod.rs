//! Experiment configuration, the closed-loop Monte Carlo engine, SNR sweeps,
//! and CSV/report output.

mod closed_loop;
mod config;
mod output;
mod rng;
mod sweep;

pub use closed_loop::{rmse, DecoderRule, LoopOptions, Simulator, TrialAccumulator, TrialRecord, DIVERGENCE_LIMIT};
pub use config::{
    CodeSection, ConfigFile, DecoderChoice, ExperimentConfig, GammaMode, PlantSection, QuantizerSection, BoundsSection,
    SimSection,
};
pub use output::{bounds_csv, merge_reports, read_csv_table, sweep_csv, write_meta, CsvTable, BOUND_COLUMNS, CSV_COLUMNS};
pub use rng::{stream_rng, Purpose};
pub use sweep::{run_bounds, sweep, SweepResult, SweepRow};
