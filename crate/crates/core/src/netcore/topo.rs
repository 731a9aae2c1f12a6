//! Topological-parameter extraction: the six-tuple (N_inst, N_prim, D_avg,
//! B_avg, T_avg, S_ratio).
//!
//! Timing endpoints are sequential-cell data inputs and primary outputs;
//! sequential clock pins (names starting `ck`/`clk`) are excluded. The depth
//! of an endpoint is the maximum number of combinational stages on any fanin
//! path. B_avg requires a placement: the core is divided into a square bin
//! grid with side ceil(n_inst^(1/4)); a net's bounding box is the
//! half-perimeter of its placed pins in bin units and single-bin nets
//! contribute 0. IO pins have no placed position and are skipped.

use crate::netcore::{Hypergraph, VertexKind};
use crate::{Error, Result};

/// The six topological parameters. `b_avg` is absent when extraction ran
/// without a placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopoParams {
    pub n_inst: u32,
    pub n_prim: u32,
    pub d_avg: f64,
    pub b_avg: Option<f64>,
    pub t_avg: f64,
    pub s_ratio: f64,
}

impl TopoParams {
    pub fn new(n_inst: u32, n_prim: u32, d_avg: f64, b_avg: f64, t_avg: f64, s_ratio: f64) -> Self {
        Self { n_inst, n_prim, d_avg, b_avg: Some(b_avg), t_avg, s_ratio }
    }

    /// The six values as an array; errors if b_avg is absent or any value is
    /// nonpositive or non-finite.
    pub fn as_array(&self) -> Result<[f64; 6]> {
        let b = self
            .b_avg
            .ok_or_else(|| Error::Infeasible("b_avg absent (no placement)".into()))?;
        let a = [self.n_inst as f64, self.n_prim as f64, self.d_avg, b, self.t_avg, self.s_ratio];
        for v in a {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Infeasible(format!("nonpositive parameter value {v}")));
            }
        }
        Ok(a)
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0].round() as u32, a[1].round() as u32, a[2], a[3], a[4], a[5])
    }
}

/// Placed positions in nm for b_avg computation. `pos[v]` is `None` for
/// unplaced vertices (IOs).
#[derive(Debug, Clone)]
pub struct PlacedPositions {
    pub core_w_nm: f64,
    pub core_h_nm: f64,
    pub pos: Vec<Option<(f64, f64)>>,
}

fn is_clock_pin(pin: &str) -> bool {
    let p = pin.to_ascii_lowercase();
    p.starts_with("ck") || p.starts_with("clk")
}

/// Combinational vertices in topological order (driver before sink), or a
/// cycle witness error.
pub(crate) fn comb_topo_order(h: &Hypergraph) -> Result<Vec<usize>> {
    comb_order_and_depths(h).map(|(order, _)| order)
}

/// Per-vertex combinational depth (stage count), or a cycle witness.
/// Depth of a combinational vertex = 1 + max depth over combinational
/// drivers of its input nets; sequential cells and IOs have depth 0.
pub(crate) fn comb_depths(h: &Hypergraph) -> Result<Vec<u32>> {
    comb_order_and_depths(h).map(|(_, depths)| depths)
}

fn comb_order_and_depths(h: &Hypergraph) -> Result<(Vec<usize>, Vec<u32>)> {
    let n = h.vertices.len();
    // preds[v] = combinational drivers feeding v through some net.
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for e in &h.edges {
        let driver = e.pins[0].vertex;
        if h.vertices[driver].kind != VertexKind::Combinational {
            continue;
        }
        for p in &e.pins[1..] {
            if h.vertices[p.vertex].kind == VertexKind::Combinational {
                preds[p.vertex].push(driver);
                succs[driver].push(p.vertex);
                indeg[p.vertex] += 1;
            }
        }
    }
    let mut depth = vec![0u32; n];
    let mut queue: Vec<usize> = (0..n)
        .filter(|&v| h.vertices[v].kind == VertexKind::Combinational && indeg[v] == 0)
        .collect();
    let mut seen = 0usize;
    let total = h
        .vertices
        .iter()
        .filter(|v| v.kind == VertexKind::Combinational)
        .count();
    let mut qi = 0;
    while qi < queue.len() {
        let v = queue[qi];
        qi += 1;
        seen += 1;
        depth[v] = 1 + preds[v].iter().map(|&u| depth[u]).max().unwrap_or(0);
        for &s in &succs[v] {
            indeg[s] -= 1;
            if indeg[s] == 0 {
                queue.push(s);
            }
        }
    }
    if seen != total {
        return Err(Error::CombCycle(cycle_witness(h, &preds, &indeg)));
    }
    Ok((queue, depth))
}

/// Walks predecessor links inside the unresolved set until a vertex repeats.
fn cycle_witness(h: &Hypergraph, preds: &[Vec<usize>], indeg: &[usize]) -> Vec<String> {
    let start = (0..h.vertices.len())
        .find(|&v| h.vertices[v].kind == VertexKind::Combinational && indeg[v] > 0)
        .expect("cycle exists");
    let mut path = vec![start];
    let mut on_path = vec![false; h.vertices.len()];
    on_path[start] = true;
    let mut cur = start;
    loop {
        let next = preds[cur]
            .iter()
            .copied()
            .find(|&u| indeg[u] > 0)
            .expect("unresolved vertex has unresolved pred");
        if on_path[next] {
            let at = path.iter().position(|&v| v == next).unwrap();
            let mut cyc: Vec<String> =
                path[at..].iter().map(|&v| h.vertices[v].name.clone()).collect();
            cyc.push(h.vertices[next].name.clone());
            return cyc;
        }
        on_path[next] = true;
        path.push(next);
        cur = next;
    }
}

/// Endpoint depths: for each sequential data-input pin and primary output,
/// the combinational depth of the driving vertex (0 when driven by a
/// register or primary input directly).
pub(crate) fn endpoint_depths(h: &Hypergraph) -> Result<Vec<u32>> {
    let depth = comb_depths(h)?;
    let mut out = Vec::new();
    for e in &h.edges {
        let driver = e.pins[0].vertex;
        let dd = if h.vertices[driver].kind == VertexKind::Combinational { depth[driver] } else { 0 };
        for p in &e.pins[1..] {
            let vk = h.vertices[p.vertex].kind;
            let is_endpoint = match vk {
                VertexKind::Sequential => !is_clock_pin(&p.pin),
                VertexKind::PrimaryOutput => true,
                _ => false,
            };
            if is_endpoint {
                out.push(dd);
            }
        }
    }
    Ok(out)
}

/// Bin-grid side for b_avg: a square grid with about sqrt(n_inst) bins, so
/// each bin holds about sqrt(n_inst) instances.
pub fn bin_grid_side(n_inst: usize) -> usize {
    ((n_inst as f64).powf(0.25).ceil() as usize).max(1)
}

fn b_avg(h: &Hypergraph, placed: &PlacedPositions) -> f64 {
    if h.edges.is_empty() {
        return 0.0;
    }
    let g = bin_grid_side(h.n_inst());
    let bw = placed.core_w_nm / g as f64;
    let bh = placed.core_h_nm / g as f64;
    let bin_of = |x: f64, y: f64| -> (i64, i64) {
        let bx = ((x / bw).floor() as i64).clamp(0, g as i64 - 1);
        let by = ((y / bh).floor() as i64).clamp(0, g as i64 - 1);
        (bx, by)
    };
    let mut total = 0.0;
    for e in &h.edges {
        let mut lo = (i64::MAX, i64::MAX);
        let mut hi = (i64::MIN, i64::MIN);
        let mut placed_pins = 0;
        for p in &e.pins {
            if let Some(Some((x, y))) = placed.pos.get(p.vertex) {
                let (bx, by) = bin_of(*x, *y);
                lo = (lo.0.min(bx), lo.1.min(by));
                hi = (hi.0.max(bx), hi.1.max(by));
                placed_pins += 1;
            }
        }
        if placed_pins >= 2 {
            total += (hi.0 - lo.0 + hi.1 - lo.1) as f64 / 2.0;
        }
    }
    total / h.edges.len() as f64
}

/// Extracts the six topological parameters. A placement is required only for
/// b_avg; without one, `b_avg` is reported absent.
pub fn extract_topo_params(
    h: &Hypergraph,
    placed: Option<&PlacedPositions>,
) -> Result<TopoParams> {
    let n_inst = h.n_inst();
    if n_inst == 0 {
        return Err(Error::Netlist("empty netlist".into()));
    }
    let depths = endpoint_depths(h)?;
    let t_avg = if depths.is_empty() {
        0.0
    } else {
        depths.iter().map(|&d| d as f64).sum::<f64>() / depths.len() as f64
    };
    Ok(TopoParams {
        n_inst: n_inst as u32,
        n_prim: h.n_prim() as u32,
        d_avg: h.d_avg(),
        b_avg: placed.map(|p| b_avg(h, p)),
        t_avg,
        s_ratio: h.n_seq() as f64 / n_inst as f64,
    })
}
