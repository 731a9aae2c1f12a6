//! PPAC metrics, run records, experiment orchestration and reports.

mod record;

pub use record::RunRecord;
