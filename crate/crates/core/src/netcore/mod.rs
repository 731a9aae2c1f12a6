//! Netlist hypergraph model, cell library and technology description, text
//! file formats, topological-parameter extraction, and the naive
//! width-regularization baseline.

mod format;
mod hypergraph;
mod library;
mod regularize;
mod topo;

pub use format::{emit_netlist, parse_netlist};
pub use hypergraph::{Hyperedge, Hypergraph, Pin, Vertex, VertexKind};
pub use library::{
    emit_library, load_library, CellLibrary, CellSpec, LibPreset, PgPin, TechProfile,
};
pub use regularize::width_regularize_naive;
pub use topo::{bin_grid_side, extract_topo_params, PlacedPositions, TopoParams};
pub(crate) use topo::comb_topo_order;
