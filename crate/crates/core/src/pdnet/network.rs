//! Resistive network: nodes on rails/stripes, conductance edges, ideal
//! voltage pads, and instance attachment points. VDD and VSS subnetworks
//! are disjoint and solved independently.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rail {
    Vdd,
    Vss,
}

#[derive(Debug, Clone)]
pub struct ResistiveNetwork {
    pub node_rail: Vec<Rail>,
    /// Undirected conductance edges (a, b, siemens), conductance > 0.
    pub edges: Vec<(usize, usize, f64)>,
    pub pads: Vec<usize>,
    /// vertex id -> (vdd node, vss node).
    pub instance_nodes: Vec<Option<(usize, usize)>>,
}

impl ResistiveNetwork {
    pub fn new(n_instances: usize) -> Self {
        Self {
            node_rail: Vec::new(),
            edges: Vec::new(),
            pads: Vec::new(),
            instance_nodes: vec![None; n_instances],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.node_rail.len()
    }

    pub fn add_node(&mut self, rail: Rail) -> usize {
        self.node_rail.push(rail);
        self.node_rail.len() - 1
    }

    pub fn add_conductance(&mut self, a: usize, b: usize, siemens: f64) -> Result<()> {
        if a == b {
            return Err(Error::Solve("self-loop edge".into()));
        }
        if !(siemens > 0.0) || !siemens.is_finite() {
            return Err(Error::Solve(format!("conductance must be positive, got {siemens}")));
        }
        if self.node_rail[a] != self.node_rail[b] {
            return Err(Error::Solve("edge bridges VDD and VSS".into()));
        }
        self.edges.push((a, b, siemens));
        Ok(())
    }

    pub fn add_resistor(&mut self, a: usize, b: usize, ohms: f64) -> Result<()> {
        if !(ohms > 0.0) {
            return Err(Error::Solve(format!("resistance must be positive, got {ohms}")));
        }
        self.add_conductance(a, b, 1.0 / ohms)
    }

    pub fn mark_pad(&mut self, node: usize) {
        self.pads.push(node);
    }

    pub fn attach_instance(&mut self, vertex: usize, vdd_node: usize, vss_node: usize) {
        self.instance_nodes[vertex] = Some((vdd_node, vss_node));
    }

    /// Every attached instance must reach a pad of the matching rail.
    /// Returns the offending vertex id on failure.
    pub fn validate_connectivity(&self) -> Result<()> {
        let n = self.n_nodes();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b, _) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut reach = vec![false; n];
        let mut queue: Vec<usize> = self.pads.clone();
        for &p in &self.pads {
            reach[p] = true;
        }
        while let Some(v) = queue.pop() {
            for &u in &adj[v] {
                if !reach[u] {
                    reach[u] = true;
                    queue.push(u);
                }
            }
        }
        for (vertex, nodes) in self.instance_nodes.iter().enumerate() {
            if let Some((vdd, vss)) = nodes {
                if !reach[*vdd] || !reach[*vss] {
                    return Err(Error::Solve(format!(
                        "instance {vertex} has no path to a pad"
                    )));
                }
            }
        }
        Ok(())
    }

    /// CSV dump: `node_a,node_b,conductance`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node_a,node_b,conductance\n");
        for &(a, b, g) in &self.edges {
            out.push_str(&format!("{a},{b},{g:.9}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rail_bridging_rejected() {
        let mut net = ResistiveNetwork::new(0);
        let a = net.add_node(Rail::Vdd);
        let b = net.add_node(Rail::Vss);
        assert!(net.add_resistor(a, b, 1.0).is_err());
    }

    #[test]
    fn disconnected_instance_detected() {
        let mut net = ResistiveNetwork::new(2);
        let pad = net.add_node(Rail::Vdd);
        net.mark_pad(pad);
        let a = net.add_node(Rail::Vdd);
        net.add_resistor(pad, a, 5.0).unwrap();
        let island_vdd = net.add_node(Rail::Vdd);
        let island_vss = net.add_node(Rail::Vss);
        net.attach_instance(0, a, island_vss);
        // instance 0's VSS side has no pad at all
        assert!(net.validate_connectivity().is_err());
        net.instance_nodes[0] = None;
        net.attach_instance(1, island_vdd, island_vss);
        assert!(net.validate_connectivity().is_err());
    }
}
