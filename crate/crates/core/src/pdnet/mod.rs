//! Power delivery: the four PDN configurations, stripe geometry, tap-cell
//! insertion, router capacity derates, and resistive-network extraction.

mod config;
mod mesh;
mod network;
mod taps;

pub use config::{
    default_stripe_table, tap_width_cpp, PdnConfig, PdnElectrical, PdnKind, StripeRow, TapScheme,
    TAP_PITCHES_CPP,
};
pub use mesh::{build_pdn, extract_resistive_network, PdnMesh, Stripe, LAYER_BM1, LAYER_BM2};
pub use network::{Rail, ResistiveNetwork};
pub use taps::{
    expected_tap_count, floorplan_with_taps, insert_tap_cells, insert_tap_cells_with_ring,
    TapCell, TapPlan,
};
