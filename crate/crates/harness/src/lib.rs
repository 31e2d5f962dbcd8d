//! Experiment harness: dataset ingestion, stratified splits, the
//! (latent dim x autoencoder x classifier) sweep, single-view baselines,
//! the view-combination study, and report emission.

pub mod dataset;
pub mod error;
pub mod records;
pub mod report;
pub mod split;
pub mod svg;
pub mod sweep;
pub mod views;

pub use dataset::{load_dataset, DatasetKind, DatasetSpec, LoadedDataset};
pub use error::{Error, Result};
pub use records::{read_records, write_records, ExperimentRecord, RecordStatus, CSV_COLUMNS};
pub use report::{emit_reports, summarize, BoxStats, ComboRow, GroupCount, Summary};
pub use split::stratified_split;
pub use sweep::{
    combos_plan, run_baselines, run_sweep, run_view_combinations, sha256_hex, sweep_plan,
    SweepGrid, SweepInput, TrainKnobs,
};
pub use views::{
    build_views, load_view_artifacts, save_view_artifacts, BuiltViews, FittedView, Manifest,
    ViewArtifacts, ViewKind, ViewSpec,
};
