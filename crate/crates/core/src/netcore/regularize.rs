//! Naive cell width-regularization: every combinational vertex is inflated
//! to the maximum combinational width in the library. Connectivity and
//! sequential widths are untouched.

use crate::netcore::{CellLibrary, Hypergraph, VertexKind};

pub fn width_regularize_naive(h: &Hypergraph, lib: &CellLibrary) -> Hypergraph {
    let w_max = lib.max_comb_width();
    let mut out = h.clone();
    for v in &mut out.vertices {
        if v.kind == VertexKind::Combinational {
            v.width_cpp = w_max;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{load_library, parse_netlist};

    const TINY_LIB: &str = "\
tech cpp=45 m0p=24 m1p=30 m2p=24 fin=2 rt=4 pgpin=M0 ch=6 vop=0.7
cell INV width=1 seq=0 d0=10 d1=3 leak=1e-6 edyn=1e-4
cell AND width=2 seq=0 d0=12 d1=3 leak=2e-6 edyn=2e-4
cell DFF width=7 seq=1 d0=20 d1=3 leak=7e-6 edyn=7e-4
";

    #[test]
    fn inflates_to_max_comb_width() {
        let (lib, _) = load_library(TINY_LIB).unwrap();
        let text = "cell INV a\ncell INV b\ncell INV c\nnet n1 a.o b.a\nnet n2 b.o c.a\n";
        let h = parse_netlist(text, &lib).unwrap();
        let r = width_regularize_naive(&h, &lib);
        assert!(r.vertices.iter().all(|v| v.width_cpp == 2));
        assert_eq!(r.edges.len(), h.edges.len());
    }

    #[test]
    fn sequential_only_unchanged() {
        let (lib, _) = load_library(TINY_LIB).unwrap();
        let text = "cell DFF f1\ncell DFF f2\nnet n f1.q f2.d\n";
        let h = parse_netlist(text, &lib).unwrap();
        let r = width_regularize_naive(&h, &lib);
        assert!(r.structurally_eq(&h));
    }

    #[test]
    fn idempotent_and_grows_total_width() {
        let (lib, _) = load_library(TINY_LIB).unwrap();
        let text = "cell INV a\ncell AND b\ncell DFF f\nnet n1 a.o b.a\nnet n2 b.o f.d\n";
        let h = parse_netlist(text, &lib).unwrap();
        let r1 = width_regularize_naive(&h, &lib);
        let r2 = width_regularize_naive(&r1, &lib);
        assert!(r1.structurally_eq(&r2));
        assert!(r1.total_instance_width() > h.total_instance_width());
    }
}
