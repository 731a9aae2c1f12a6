//! Clustering-based cell width-regularization: bottom-up first-choice
//! clustering under a width cap, final best-fit bin packing, clustered-cell
//! physical composition, and the placement-induced clustering baseline.

mod compose;
mod induced;
mod packing;
mod stats;

pub use compose::{
    compose_clustered_cell, padded_width, site_alignment, ClusteredCellLayout, Slot,
};
pub use induced::placement_induced_cluster;
pub use packing::best_fit_pack;
pub use stats::{regularized_netlist_stats, RegularizationStats};

use std::collections::HashMap;

use crate::netcore::{CellLibrary, CellSpec, Hypergraph, Pin, Vertex, VertexKind};
use crate::{Error, Result};

/// Final cluster assignment over the original hypergraph.
#[derive(Debug, Clone)]
pub struct ClusterMap {
    /// Original vertex id -> cluster id.
    pub cmap: Vec<usize>,
    /// Cluster id -> member vertex ids in cluster order.
    pub members: Vec<Vec<usize>>,
    /// Cluster id -> total member width in CPP.
    pub widths: Vec<u32>,
}

impl ClusterMap {
    pub fn n_clusters(&self) -> usize {
        self.members.len()
    }

    /// CSV dump: `vertex_id,cluster_id,slot_index`.
    pub fn to_csv(&self, h: &Hypergraph) -> String {
        let mut out = String::from("vertex_id,cluster_id,slot_index\n");
        for (cid, members) in self.members.iter().enumerate() {
            for (slot, &v) in members.iter().enumerate() {
                out.push_str(&format!("{},{cid},{slot}\n", h.vertices[v].name));
            }
        }
        out
    }
}

/// Connectivity strength over shared hyperedges divided by the combined
/// width: (sum over shared nets of weight/(pins-1)) / (w_i + w_cluster_j).
/// `w_i` is the candidate vertex width and `w_cluster_j` the accumulated
/// width of the cluster the neighbor belongs to.
pub fn cluster_score(h: &Hypergraph, v_i: usize, v_j: usize, w_i: u32, w_cluster_j: u32) -> f64 {
    let mut num = 0.0;
    for e in &h.edges {
        let mut has_i = false;
        let mut has_j = false;
        for p in &e.pins {
            has_i |= p.vertex == v_i;
            has_j |= p.vertex == v_j;
        }
        if has_i && has_j {
            num += e.weight / (e.pins.len() - 1) as f64;
        }
    }
    num / (w_i + w_cluster_j) as f64
}

fn clusterable(kind: VertexKind) -> bool {
    kind == VertexKind::Combinational
}

/// One first-choice pass over the working hypergraph. Vertices traverse in
/// increasing width order; each unvisited combinational vertex joins the
/// adjacent cluster with the best score among those that respect the cap.
/// Returns the vertex -> representative map and the merge count.
fn fc_pass(h: &Hypergraph, w_max: u32) -> (Vec<usize>, usize) {
    let n = h.vertices.len();
    let incidence = h.incidence();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (h.vertices[v].width_cpp, v));

    let mut visited = vec![false; n];
    let mut cmap: Vec<usize> = (0..n).collect();
    let mut w_next: Vec<u32> = h.vertices.iter().map(|v| v.width_cpp).collect();
    let mut merges = 0usize;

    for &v_i in &order {
        if visited[v_i] || !clusterable(h.vertices[v_i].kind) {
            continue;
        }
        let mut neighbors: Vec<usize> = incidence[v_i]
            .iter()
            .flat_map(|&ei| h.edges[ei].pins.iter().map(|p| p.vertex))
            .filter(|&u| u != v_i && clusterable(h.vertices[u].kind))
            .collect();
        neighbors.sort_unstable();
        neighbors.dedup();

        let w_i = h.vertices[v_i].width_cpp;
        let mut best_score = 0.0;
        let mut best: Option<usize> = None;
        for &v_j in &neighbors {
            let rep = cmap[v_j];
            if rep == v_i {
                continue; // already clustered into this vertex
            }
            let combined = w_i + w_next[rep];
            if combined > w_max {
                continue;
            }
            let mut num = 0.0;
            for &ei in &incidence[v_i] {
                let e = &h.edges[ei];
                if e.pins.iter().any(|p| p.vertex == v_j) {
                    num += e.weight / (e.pins.len() - 1) as f64;
                }
            }
            let score = num / combined as f64;
            if score > best_score {
                best_score = score;
                best = Some(v_j);
            }
        }
        match best {
            None => {
                visited[v_i] = true;
            }
            Some(v_best) => {
                let rep = cmap[v_best];
                cmap[v_i] = rep;
                w_next[rep] += w_i;
                visited[v_i] = true;
                visited[v_best] = true;
                merges += 1;
            }
        }
    }
    (cmap, merges)
}

/// Builds the coarsened hypergraph from a vertex -> representative map.
/// Nets collapse onto cluster pins; intra-cluster nets drop; nets with an
/// identical pin set merge and sum weights. `groups` lists, per new vertex,
/// the old vertex ids it absorbed (representative first, joiners in
/// traversal order).
fn coarsen(h: &Hypergraph, cmap: &[usize]) -> (Hypergraph, Vec<Vec<usize>>) {
    let n = h.vertices.len();
    let mut new_id = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut out = Hypergraph::new();
    for v in 0..n {
        if cmap[v] == v {
            new_id[v] = groups.len();
            groups.push(vec![v]);
        }
    }
    for v in 0..n {
        if cmap[v] != v {
            groups[new_id[cmap[v]]].push(v);
        }
    }
    for g in &groups {
        let rep = g[0];
        let width: u32 = g.iter().map(|&v| h.vertices[v].width_cpp).sum();
        let v = &h.vertices[rep];
        out.add_vertex(Vertex {
            name: v.name.clone(),
            cell: v.cell.clone(),
            kind: v.kind,
            width_cpp: width,
        })
        .expect("names unique after coarsening");
    }
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for e in &h.edges {
        let mut pins: Vec<Pin> = Vec::with_capacity(e.pins.len());
        for p in &e.pins {
            let nv = new_id[cmap[p.vertex]];
            if !pins.iter().any(|q| q.vertex == nv) {
                let pin = if pins.is_empty() { "o" } else { "i" };
                pins.push(Pin { vertex: nv, pin: pin.into() });
            }
        }
        if pins.len() < 2 {
            continue;
        }
        let mut key: Vec<usize> = pins.iter().map(|p| p.vertex).collect();
        key.sort_unstable();
        match seen.get(&key) {
            Some(&ei) => out.edges[ei].weight += e.weight,
            None => {
                let name = format!("n{}", out.edges.len());
                let ei = out.add_edge(name, e.weight, pins).expect("collapsed nets are valid");
                seen.insert(key, ei);
            }
        }
    }
    (out, groups)
}

/// Cell width-regularization by clustering: iterative first-choice passes
/// under the `w_max` cap with early termination when a pass creates no new
/// cluster, then best-fit bin packing (decreasing width) over the resulting
/// combinational clusters. Sequential cells and IOs stay singletons.
pub fn cwr_fc_cluster(
    h: &Hypergraph,
    w_max: u32,
    n_iter: usize,
) -> Result<(Hypergraph, ClusterMap)> {
    let max_comb = h
        .vertices
        .iter()
        .filter(|v| v.kind == VertexKind::Combinational)
        .map(|v| v.width_cpp)
        .max()
        .unwrap_or(0);
    if w_max < max_comb {
        return Err(Error::Netlist(format!(
            "w_max {w_max} smaller than the widest combinational cell ({max_comb})"
        )));
    }
    if n_iter < 1 {
        return Err(Error::Netlist("n_iter must be >= 1".into()));
    }

    let mut work = h.clone();
    let mut membership: Vec<Vec<usize>> = (0..h.vertices.len()).map(|v| vec![v]).collect();

    for _ in 0..n_iter {
        let (cmap, merges) = fc_pass(&work, w_max);
        if merges == 0 {
            break;
        }
        let (next, groups) = coarsen(&work, &cmap);
        membership = groups
            .iter()
            .map(|g| g.iter().flat_map(|&v| membership[v].iter().copied()).collect())
            .collect();
        work = next;
    }

    // Final best-fit bin packing over combinational clusters, decreasing
    // width, ties by index.
    let mut comb_items: Vec<(usize, u32)> = work
        .vertices
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VertexKind::Combinational)
        .map(|(i, v)| (i, v.width_cpp))
        .collect();
    comb_items.sort_by_key(|&(i, w)| (std::cmp::Reverse(w), i));
    let bins = best_fit_pack(&comb_items, w_max)?;

    let mut final_map: Vec<usize> = (0..work.vertices.len()).collect();
    for bin in &bins {
        for &m in bin {
            final_map[m] = bin[0];
        }
    }
    let (mut packed, groups) = coarsen(&work, &final_map);
    let final_members: Vec<Vec<usize>> = groups
        .iter()
        .map(|g| g.iter().flat_map(|&v| membership[v].iter().copied()).collect())
        .collect();

    let mut cmap = vec![usize::MAX; h.vertices.len()];
    let mut widths = Vec::with_capacity(final_members.len());
    for (cid, members) in final_members.iter().enumerate() {
        let mut width = 0;
        for &ov in members {
            cmap[ov] = cid;
            width += h.vertices[ov].width_cpp;
        }
        widths.push(width);
        if members.len() > 1 {
            let cell_name = members
                .iter()
                .map(|&ov| h.vertices[ov].cell.as_deref().unwrap_or("IO"))
                .collect::<Vec<_>>()
                .join("_");
            packed.vertices[cid].cell = Some(cell_name);
            packed.vertices[cid].name = format!("cl{cid}");
        }
    }

    let map = ClusterMap { cmap, members: final_members, widths };
    Ok((packed, map))
}

/// Synthesizes cell specs for multi-member clusters on top of a base
/// library: width is the member sum, intrinsic delay the serial worst case,
/// power adds up. The clustered netlist then runs through the ordinary
/// timing, power and IR models.
pub fn synthesize_cluster_library(
    h: &Hypergraph,
    map: &ClusterMap,
    clustered: &Hypergraph,
    base: &CellLibrary,
) -> Result<CellLibrary> {
    let mut lib = base.clone();
    for (cid, members) in map.members.iter().enumerate() {
        if members.len() <= 1 {
            continue;
        }
        let name = clustered.vertices[cid]
            .cell
            .clone()
            .ok_or_else(|| Error::Netlist("cluster vertex without cell name".into()))?;
        let mut spec = CellSpec {
            name,
            width_cpp: 0,
            is_sequential: false,
            intrinsic_delay_ps: 0.0,
            load_delay_ps_per_fanout: 0.0,
            leakage_mw: 0.0,
            dyn_energy_mw_per_ghz: 0.0,
        };
        for &ov in members {
            let cell = h.vertices[ov]
                .cell
                .as_deref()
                .and_then(|c| base.get(c))
                .ok_or_else(|| Error::Netlist("cluster member without base cell".into()))?;
            spec.width_cpp += cell.width_cpp;
            spec.intrinsic_delay_ps += cell.intrinsic_delay_ps;
            spec.load_delay_ps_per_fanout =
                spec.load_delay_ps_per_fanout.max(cell.load_delay_ps_per_fanout);
            spec.leakage_mw += cell.leakage_mw;
            spec.dyn_energy_mw_per_ghz += cell.dyn_energy_mw_per_ghz;
        }
        lib.add_cell(spec)?;
    }
    Ok(lib)
}

/// Invariant checks shared by tests: width bookkeeping, width cap on
/// combinational clusters, sequential purity, connectivity conservation,
/// and net-count monotonicity.
pub fn check_cluster_invariants(
    h: &Hypergraph,
    clustered: &Hypergraph,
    map: &ClusterMap,
    w_max: u32,
) -> Result<()> {
    for (cid, members) in map.members.iter().enumerate() {
        let width: u32 = members.iter().map(|&v| h.vertices[v].width_cpp).sum();
        if width != map.widths[cid] {
            return Err(Error::Netlist(format!("cluster {cid}: width bookkeeping off")));
        }
        let comb = members
            .iter()
            .filter(|&&v| h.vertices[v].kind == VertexKind::Combinational)
            .count();
        if comb > 0 && width > w_max {
            return Err(Error::Netlist(format!(
                "cluster {cid}: width {width} exceeds cap {w_max}"
            )));
        }
        if members.len() > 1 && comb != members.len() {
            return Err(Error::Netlist(format!(
                "cluster {cid}: non-combinational vertex in a multi-member cluster"
            )));
        }
    }
    use std::collections::HashSet;
    let mut have: HashSet<Vec<usize>> = HashSet::new();
    for e in &clustered.edges {
        let mut k: Vec<usize> = e.pins.iter().map(|p| p.vertex).collect();
        k.sort_unstable();
        have.insert(k);
    }
    for e in &h.edges {
        let mut img: Vec<usize> = e.pins.iter().map(|p| map.cmap[p.vertex]).collect();
        img.sort_unstable();
        img.dedup();
        if img.len() >= 2 && !have.contains(&img) {
            return Err(Error::Netlist(format!(
                "net {} lost its image in the clustered hypergraph",
                e.name
            )));
        }
    }
    if clustered.edges.len() > h.edges.len() {
        return Err(Error::Netlist(
            "clustered hypergraph has more nets than the original".into(),
        ));
    }
    Ok(())
}
