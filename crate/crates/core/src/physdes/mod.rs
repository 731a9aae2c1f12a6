//! Desk-scale physical-design proxy: row/site placement, neighbor-swap
//! tangling, congestion-aware grid global routing with an overflow-based
//! DRC proxy, minimal static timing analysis, and the swap-threshold
//! routability protocol.

mod floorplan;
mod kth;
mod place;
mod route;
mod sta;
mod tangle;

pub use floorplan::{Floorplan, Placement};
pub use kth::{kth, kth_on_floorplan, KthConfig, KthOutcome, KthReport, KthRow};
pub use place::place;
pub use route::{default_route_layers, route, RouteConfig, RouteLayer, RouteResult};
pub use sta::{sta, StaResult};
pub use tangle::{neighbor_swap_tangle, TangleStream};
