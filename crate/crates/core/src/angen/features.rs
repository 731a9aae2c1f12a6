//! Ten-feature vector of a completed run, for external clustering and
//! visualization. Fixed field order:
//! instances, nets, primary IOs, average fanout, sequential count,
//! wirelength (um), area (um2), DRC-proxy count, WNS (ns), TNS (ns).
//! Failing-endpoint count stays on the run record but is not part of the
//! vector.

use crate::explore::RunRecord;
use crate::{Error, Result};

pub const FEATURE_NAMES: [&str; 10] = [
    "instances",
    "nets",
    "primary_ios",
    "avg_fanout",
    "sequential",
    "wirelength_um",
    "area_um2",
    "drc_proxy",
    "wns_ns",
    "tns_ns",
];

/// Extracts the feature vector from a run that completed through routing
/// and timing. Failed-route runs still produce a vector (the DRC proxy
/// carries the overflow count); rows with a pipeline error do not.
pub fn feature_vector(run: &RunRecord) -> Result<[f64; 10]> {
    if !run.has_outputs() {
        return Err(Error::Metric(format!(
            "run has no outputs: {}",
            run.error.as_deref().unwrap_or("?")
        )));
    }
    Ok([
        run.n_inst as f64,
        run.n_nets as f64,
        run.n_prim as f64,
        run.avg_fanout,
        run.n_seq as f64,
        run.wirelength_um,
        run.area_um2,
        run.drc_proxy as f64,
        run.wns_ns,
        run.tns_ns,
    ])
}
