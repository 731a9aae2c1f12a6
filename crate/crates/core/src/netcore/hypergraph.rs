//! Netlist hypergraph: cells and primary IOs as vertices, nets as weighted
//! hyperedges. The first pin of every hyperedge is the net driver; the
//! remaining pins are sinks. Vertices carry widths in CPP units so the graph
//! stays meaningful after width regularization and clustering.

use std::collections::{HashMap, HashSet};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Combinational,
    Sequential,
    /// Primary input port. Width 0, drives nets.
    PrimaryInput,
    /// Primary output port. Width 0, sinks nets; a timing endpoint.
    PrimaryOutput,
    /// Reserved power-tap block. Not produced by parsing or generation.
    Tap,
}

impl VertexKind {
    pub fn is_primary_io(self) -> bool {
        matches!(self, VertexKind::PrimaryInput | VertexKind::PrimaryOutput)
    }

    /// Instances are the placeable netlist cells: everything but IOs and taps.
    pub fn is_instance(self) -> bool {
        matches!(self, VertexKind::Combinational | VertexKind::Sequential)
    }
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub name: String,
    /// Referenced cell name; `None` for primary IOs.
    pub cell: Option<String>,
    pub kind: VertexKind,
    /// Width in CPP units. Agrees with the referenced cell spec unless the
    /// vertex is a cluster or has been width-regularized.
    pub width_cpp: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pin {
    pub vertex: usize,
    /// Pin name on the instance; empty for IO endpoints.
    pub pin: String,
}

#[derive(Debug, Clone)]
pub struct Hyperedge {
    pub name: String,
    pub weight: f64,
    /// `pins[0]` is the driver. No vertex appears twice.
    pub pins: Vec<Pin>,
}

#[derive(Debug, Clone, Default)]
pub struct Hypergraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Hyperedge>,
    name_index: HashMap<String, usize>,
}

impl Hypergraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: Vertex) -> Result<usize> {
        if self.name_index.contains_key(&v.name) {
            return Err(Error::Netlist(format!("duplicate vertex `{}`", v.name)));
        }
        let id = self.vertices.len();
        self.name_index.insert(v.name.clone(), id);
        self.vertices.push(v);
        Ok(id)
    }

    /// Adds a net. Rejects duplicate vertices within the pin list and nets
    /// with fewer than two distinct vertices.
    pub fn add_edge(&mut self, name: String, weight: f64, pins: Vec<Pin>) -> Result<usize> {
        let mut seen = HashSet::new();
        for p in &pins {
            if p.vertex >= self.vertices.len() {
                return Err(Error::Netlist(format!("net `{name}` references unknown vertex")));
            }
            if !seen.insert(p.vertex) {
                return Err(Error::Netlist(format!(
                    "net `{name}` pins vertex `{}` more than once",
                    self.vertices[p.vertex].name
                )));
            }
        }
        if pins.len() < 2 {
            return Err(Error::Netlist(format!("net `{name}` has fewer than 2 pins")));
        }
        let id = self.edges.len();
        self.edges.push(Hyperedge { name, weight, pins });
        Ok(id)
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Instance count: combinational + sequential vertices.
    pub fn n_inst(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind.is_instance()).count()
    }

    pub fn n_seq(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.kind == VertexKind::Sequential)
            .count()
    }

    pub fn n_prim(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| v.kind.is_primary_io())
            .count()
    }

    /// Mean pin count over nets.
    pub fn d_avg(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        let pins: usize = self.edges.iter().map(|e| e.pins.len()).sum();
        pins as f64 / self.edges.len() as f64
    }

    /// Mean sink count over nets (Table-IX-style average fanout).
    pub fn avg_fanout(&self) -> f64 {
        if self.edges.is_empty() {
            return 0.0;
        }
        let sinks: usize = self.edges.iter().map(|e| e.pins.len() - 1).sum();
        sinks as f64 / self.edges.len() as f64
    }

    /// Incidence lists: for each vertex, the edge indices touching it.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (ei, e) in self.edges.iter().enumerate() {
            for p in &e.pins {
                inc[p.vertex].push(ei);
            }
        }
        inc
    }

    /// Total width of instances, in CPP.
    pub fn total_instance_width(&self) -> u64 {
        self.vertices
            .iter()
            .filter(|v| v.kind.is_instance())
            .map(|v| v.width_cpp as u64)
            .sum()
    }

    /// Canonical clone: vertices sorted by name, nets sorted by name, each
    /// net's sink tail sorted by vertex name (driver kept first). Used for
    /// equality checks and deterministic emission.
    pub fn canonical(&self) -> Hypergraph {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a].name.cmp(&self.vertices[b].name));
        let mut remap = vec![0usize; self.vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut out = Hypergraph::new();
        for &old in &order {
            out.add_vertex(self.vertices[old].clone()).expect("unique names");
        }
        let mut edges: Vec<Hyperedge> = self
            .edges
            .iter()
            .map(|e| {
                let mut pins: Vec<Pin> = e
                    .pins
                    .iter()
                    .map(|p| Pin { vertex: remap[p.vertex], pin: p.pin.clone() })
                    .collect();
                let tail = &mut pins[1..];
                tail.sort_by(|a, b| out.vertices[a.vertex].name.cmp(&out.vertices[b.vertex].name));
                Hyperedge { name: e.name.clone(), weight: e.weight, pins }
            })
            .collect();
        edges.sort_by(|a, b| a.name.cmp(&b.name));
        out.edges = edges;
        out
    }

    /// Structural equality on canonical forms (names, kinds, widths, nets,
    /// driver-first pin lists). Weights compared exactly.
    pub fn structurally_eq(&self, other: &Hypergraph) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        if a.vertices.len() != b.vertices.len() || a.edges.len() != b.edges.len() {
            return false;
        }
        for (va, vb) in a.vertices.iter().zip(&b.vertices) {
            if va.name != vb.name
                || va.cell != vb.cell
                || va.kind != vb.kind
                || va.width_cpp != vb.width_cpp
            {
                return false;
            }
        }
        for (ea, eb) in a.edges.iter().zip(&b.edges) {
            if ea.name != eb.name || ea.weight != eb.weight || ea.pins != eb.pins {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(name: &str, w: u32) -> Vertex {
        Vertex {
            name: name.into(),
            cell: Some("INV_X1".into()),
            kind: VertexKind::Combinational,
            width_cpp: w,
        }
    }

    #[test]
    fn rejects_duplicate_pins() {
        let mut h = Hypergraph::new();
        let a = h.add_vertex(inst("a", 2)).unwrap();
        let b = h.add_vertex(inst("b", 2)).unwrap();
        let pins = vec![
            Pin { vertex: a, pin: "o".into() },
            Pin { vertex: b, pin: "a".into() },
            Pin { vertex: b, pin: "b".into() },
        ];
        assert!(h.add_edge("n".into(), 1.0, pins).is_err());
    }

    #[test]
    fn rejects_short_nets() {
        let mut h = Hypergraph::new();
        let a = h.add_vertex(inst("a", 2)).unwrap();
        let e = h.add_edge("n".into(), 1.0, vec![Pin { vertex: a, pin: "o".into() }]);
        assert!(e.is_err());
    }

    #[test]
    fn canonical_is_label_stable() {
        let mut h1 = Hypergraph::new();
        let a = h1.add_vertex(inst("a", 2)).unwrap();
        let b = h1.add_vertex(inst("b", 2)).unwrap();
        h1.add_edge(
            "n".into(),
            1.0,
            vec![Pin { vertex: a, pin: "o".into() }, Pin { vertex: b, pin: "a".into() }],
        )
        .unwrap();

        let mut h2 = Hypergraph::new();
        let b2 = h2.add_vertex(inst("b", 2)).unwrap();
        let a2 = h2.add_vertex(inst("a", 2)).unwrap();
        h2.add_edge(
            "n".into(),
            1.0,
            vec![Pin { vertex: a2, pin: "o".into() }, Pin { vertex: b2, pin: "a".into() }],
        )
        .unwrap();

        assert!(h1.structurally_eq(&h2));
    }
}
