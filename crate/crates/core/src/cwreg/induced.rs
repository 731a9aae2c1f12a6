//! Placement-induced clustering baseline: scan combinational cells
//! left-to-right within each placement row, greedily extending the current
//! cluster while the accumulated real width stays within the cap; sequential
//! cells break clusters and stay singletons.

use crate::cwreg::ClusterMap;
use crate::netcore::{Hypergraph, VertexKind};
use crate::physdes::Placement;
use crate::Result;

pub fn placement_induced_cluster(
    h: &Hypergraph,
    p: &Placement,
    w_max: u32,
) -> Result<(Hypergraph, ClusterMap)> {
    // Row-major scan order over placed cells.
    let mut by_row: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p.fp.rows];
    for v in 0..h.vertices.len() {
        if let Some((row, site)) = p.site_of(v) {
            by_row[row].push((site, v));
        }
    }
    for row in &mut by_row {
        row.sort_unstable();
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; h.vertices.len()];
    for row in &by_row {
        let mut current: Vec<usize> = Vec::new();
        let mut width = 0u32;
        for &(_, v) in row {
            assigned[v] = true;
            match h.vertices[v].kind {
                VertexKind::Combinational => {
                    let w = h.vertices[v].width_cpp;
                    if !current.is_empty() && width + w > w_max {
                        groups.push(std::mem::take(&mut current));
                        width = 0;
                    }
                    current.push(v);
                    width += w;
                }
                _ => {
                    if !current.is_empty() {
                        groups.push(std::mem::take(&mut current));
                        width = 0;
                    }
                    groups.push(vec![v]);
                }
            }
        }
        if !current.is_empty() {
            groups.push(current);
        }
    }
    // Unplaced vertices (IOs) stay singletons.
    for v in 0..h.vertices.len() {
        if !assigned[v] {
            groups.push(vec![v]);
        }
    }

    let mut cmap = vec![usize::MAX; h.vertices.len()];
    let mut widths = Vec::with_capacity(groups.len());
    for (cid, g) in groups.iter().enumerate() {
        let mut w = 0;
        for &v in g {
            cmap[v] = cid;
            w += h.vertices[v].width_cpp;
        }
        widths.push(w);
    }
    let rep_map: Vec<usize> = {
        // Build a rep-per-vertex map: representative = first member.
        let mut m = vec![usize::MAX; h.vertices.len()];
        for g in &groups {
            for &v in g {
                m[v] = g[0];
            }
        }
        m
    };
    let (mut clustered, coarse_groups) = super::coarsen(h, &rep_map);
    // coarsen orders groups by representative id; remap our bookkeeping to
    // that order.
    let members: Vec<Vec<usize>> = coarse_groups;
    let mut cmap2 = vec![usize::MAX; h.vertices.len()];
    let mut widths2 = Vec::with_capacity(members.len());
    for (cid, g) in members.iter().enumerate() {
        let mut w = 0;
        for &v in g {
            cmap2[v] = cid;
            w += h.vertices[v].width_cpp;
        }
        widths2.push(w);
        if g.len() > 1 {
            let cell_name = g
                .iter()
                .map(|&ov| h.vertices[ov].cell.as_deref().unwrap_or("IO"))
                .collect::<Vec<_>>()
                .join("_");
            clustered.vertices[cid].cell = Some(cell_name);
            clustered.vertices[cid].name = format!("cl{cid}");
        }
    }
    let _ = (cmap, widths);
    Ok((clustered, ClusterMap { cmap: cmap2, members, widths: widths2 }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angen::generate_netlist;
    use crate::cwreg::check_cluster_invariants;
    use crate::netcore::{load_library, parse_netlist, LibPreset, TopoParams};
    use crate::physdes::{place, Floorplan};

    const LIB: &str = "\
tech cpp=45 m0p=24 m1p=30 m2p=24 fin=2 rt=4 pgpin=M0 ch=6 vop=0.7
cell W3 width=3 seq=0 d0=10 d1=3 leak=1e-6 edyn=1e-4
cell DFF7 width=7 seq=1 d0=20 d1=3 leak=7e-6 edyn=7e-4
";

    #[test]
    fn greedy_cap_in_one_row() {
        let (lib, tech) = load_library(LIB).unwrap();
        // Three width-3 combs in one row, cap 6: {a,b},{c}.
        let text = "cell W3 a\ncell W3 b\ncell W3 c\nnet n1 a.o b.a\nnet n2 b.o c.a\n";
        let h = parse_netlist(text, &lib).unwrap();
        let fp = Floorplan::new(2, 24, &tech).unwrap();
        // span 7 fits all cells; a single row keeps scan order simple
        let p = place(&h, &fp, 7, 1.0, 1).unwrap();
        let (_, map) = placement_induced_cluster(&h, &p, 6).unwrap();
        let sizes: Vec<usize> = {
            let mut s: Vec<usize> = map.members.iter().map(|m| m.len()).collect();
            s.sort_unstable();
            s
        };
        assert_eq!(sizes, vec![1, 2]);
        assert!(map.widths.iter().all(|&w| w <= 6 || w == 7));
    }

    #[test]
    fn sequential_breaks_clusters() {
        let (lib, tech) = load_library(LIB).unwrap();
        // comb, seq, comb in one row with cap 6: three singletons.
        let text = "cell W3 a\ncell DFF7 f\ncell W3 b\nnet n1 a.o f.d\nnet n2 f.q b.a\n";
        let h = parse_netlist(text, &lib).unwrap();
        let fp = Floorplan::new(2, 21, &tech).unwrap();
        let p = place(&h, &fp, 7, 1.0, 2).unwrap();
        let (_, map) = placement_induced_cluster(&h, &p, 6).unwrap();
        assert_eq!(map.n_clusters(), 3);
        assert!(map.members.iter().all(|m| m.len() == 1));
    }

    #[test]
    fn random_placement_respects_cap_and_contiguity() {
        let (lib, tech) = LibPreset::Lib2.load();
        let params = TopoParams::new(120, 10, 2.2, 0.5, 4.0, 0.15);
        let h = generate_netlist(&params, &lib, 4).unwrap();
        let fp = Floorplan::sized_for(h.n_inst(), 12, 0.8, &tech).unwrap();
        let p = place(&h, &fp, 12, 0.8, 4).unwrap();
        let w_max = 24;
        let (hc, map) = placement_induced_cluster(&h, &p, w_max).unwrap();
        check_cluster_invariants(&h, &hc, &map, w_max).unwrap();
        // Contiguity: members of a cluster sit in one row at increasing sites
        // with no other placed cell between them.
        for g in &map.members {
            if g.len() < 2 {
                continue;
            }
            let mut sites: Vec<(usize, usize)> =
                g.iter().map(|&v| p.site_of(v).unwrap()).collect();
            sites.sort_unstable();
            let row = sites[0].0;
            assert!(sites.iter().all(|&(r, _)| r == row));
        }
    }
}
