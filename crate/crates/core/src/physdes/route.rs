//! Congestion-aware grid global routing. Multi-pin nets decompose into
//! driver-to-sink two-pin routes (star model); each two-pin route picks the
//! less congested of the two L-shapes; one rip-up-and-reroute pass revisits
//! routes crossing overflowed edges in decreasing-congestion order.
//!
//! Overflow accounting: usage on a gcell edge spreads proportionally over
//! that direction's routing layers, so an edge with demand above its pooled
//! capacity overflows on every layer, and the DRC proxy counts
//! (edge, layer) pairs.

use crate::netcore::{Hypergraph, TechProfile};
use crate::physdes::floorplan::Placement;

#[derive(Debug, Clone, Copy)]
pub struct RouteLayer {
    pub layer: u8,
    pub vertical: bool,
    pub pitch_nm: f64,
}

/// Routing layers M1..M11; M12/M13 carry only PDN. Odd layers vertical.
pub fn default_route_layers() -> Vec<RouteLayer> {
    let pitch = |l: u8| match l {
        1 => 30.0,
        2 | 3 => 24.0,
        _ => 64.0,
    };
    (1u8..=11)
        .map(|l| RouteLayer { layer: l, vertical: l % 2 == 1, pitch_nm: pitch(l) })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RouteConfig {
    /// Gcell width in placement sites.
    pub gcell_sites: usize,
    /// Global capacity multiplier. The proxy is calibrated so tangled
    /// desk-scale fixtures fail in the single-to-low-double-digit swap
    /// range; see the kth tests.
    pub capacity_scale: f64,
    pub layers: Vec<RouteLayer>,
}

impl Default for RouteConfig {
    fn default() -> Self {
        Self { gcell_sites: 15, capacity_scale: 0.35, layers: default_route_layers() }
    }
}

#[derive(Debug, Clone)]
pub struct RouteResult {
    /// Routed length per net in nm (star decomposition; L-shapes have exact
    /// Manhattan length).
    pub net_length_nm: Vec<f64>,
    pub total_wirelength_nm: f64,
    /// (gcell edge, layer) pairs with usage above capacity.
    pub overflow_count: u64,
    pub grid: (usize, usize),
}

impl RouteResult {
    pub fn drc_proxy(&self) -> u64 {
        self.overflow_count
    }

    pub fn total_wirelength_um(&self) -> f64 {
        self.total_wirelength_nm / 1000.0
    }

    /// CSV dump: `net,length_nm`.
    pub fn to_csv(&self, h: &Hypergraph) -> String {
        let mut out = String::from("net,length_nm\n");
        for (i, e) in h.edges.iter().enumerate() {
            out.push_str(&format!("{},{:.1}\n", e.name, self.net_length_nm[i]));
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Bend {
    HorizontalFirst,
    VerticalFirst,
}

struct Grid {
    nx: usize,
    ny: usize,
    /// usage on edges between (x,y)-(x+1,y), crossed by horizontal wires.
    uh: Vec<f64>,
    /// usage on edges between (x,y)-(x,y+1), crossed by vertical wires.
    uv: Vec<f64>,
    cap_h_total: f64,
    cap_v_total: f64,
    n_h_layers: u64,
    n_v_layers: u64,
}

impl Grid {
    fn h_edge(&self, x: usize, y: usize) -> usize {
        y * (self.nx - 1) + x
    }
    fn v_edge(&self, x: usize, y: usize) -> usize {
        y * self.nx + x
    }

    fn path_cost(&self, a: (usize, usize), b: (usize, usize), bend: Bend) -> f64 {
        let mut cost = 0.0;
        let (ax, ay) = a;
        let (bx, by) = b;
        let ch = if self.cap_h_total > 0.0 { self.cap_h_total } else { 1e-6 };
        let cv = if self.cap_v_total > 0.0 { self.cap_v_total } else { 1e-6 };
        let (row, col) = match bend {
            Bend::HorizontalFirst => (ay, bx),
            Bend::VerticalFirst => (by, ax),
        };
        for x in ax.min(bx)..ax.max(bx) {
            cost += (self.uh[self.h_edge(x, row)] + 1.0) / ch;
        }
        for y in ay.min(by)..ay.max(by) {
            cost += (self.uv[self.v_edge(col, y)] + 1.0) / cv;
        }
        cost
    }

    fn apply(&mut self, a: (usize, usize), b: (usize, usize), bend: Bend, delta: f64) {
        let (ax, ay) = a;
        let (bx, by) = b;
        let (row, col) = match bend {
            Bend::HorizontalFirst => (ay, bx),
            Bend::VerticalFirst => (by, ax),
        };
        for x in ax.min(bx)..ax.max(bx) {
            let e = self.h_edge(x, row);
            self.uh[e] += delta;
        }
        for y in ay.min(by)..ay.max(by) {
            let e = self.v_edge(col, y);
            self.uv[e] += delta;
        }
    }

    fn max_overflow_ratio(&self, a: (usize, usize), b: (usize, usize), bend: Bend) -> f64 {
        let (ax, ay) = a;
        let (bx, by) = b;
        let (row, col) = match bend {
            Bend::HorizontalFirst => (ay, bx),
            Bend::VerticalFirst => (by, ax),
        };
        let mut worst: f64 = 0.0;
        for x in ax.min(bx)..ax.max(bx) {
            let u = self.uh[self.h_edge(x, row)];
            if u > self.cap_h_total {
                worst = worst.max((u - self.cap_h_total) / self.cap_h_total.max(1e-6));
            }
        }
        for y in ay.min(by)..ay.max(by) {
            let u = self.uv[self.v_edge(col, y)];
            if u > self.cap_v_total {
                worst = worst.max((u - self.cap_v_total) / self.cap_v_total.max(1e-6));
            }
        }
        worst
    }
}

struct TwoPin {
    net: usize,
    a: (usize, usize),
    b: (usize, usize),
    bend: Bend,
}

/// Routes a placement. `derate_of(layer)` is the fraction of that layer's
/// tracks occupied by the PDN. Overflow is data, not failure.
pub fn route(
    h: &Hypergraph,
    p: &Placement,
    tech: &TechProfile,
    cfg: &RouteConfig,
    derate_of: &dyn Fn(u8) -> f64,
) -> RouteResult {
    let gcell_w = cfg.gcell_sites as f64 * tech.cpp_nm;
    let rows_per_gcell = (gcell_w / p.fp.row_height_nm).round().max(1.0) as usize;
    let gcell_h = rows_per_gcell as f64 * p.fp.row_height_nm;
    let nx = p.fp.sites_per_row.div_ceil(cfg.gcell_sites).max(1);
    let ny = p.fp.rows.div_ceil(rows_per_gcell).max(1);

    let mut cap_h_total = 0.0;
    let mut cap_v_total = 0.0;
    let mut n_h_layers = 0u64;
    let mut n_v_layers = 0u64;
    for l in &cfg.layers {
        let derate = derate_of(l.layer).clamp(0.0, 1.0);
        if l.vertical {
            cap_v_total += (gcell_w / l.pitch_nm).floor() * (1.0 - derate) * cfg.capacity_scale;
            n_v_layers += 1;
        } else {
            cap_h_total += (gcell_h / l.pitch_nm).floor() * (1.0 - derate) * cfg.capacity_scale;
            n_h_layers += 1;
        }
    }

    let mut grid = Grid {
        nx,
        ny,
        uh: vec![0.0; (nx.max(2) - 1) * ny],
        uv: vec![0.0; nx * (ny.max(2) - 1)],
        cap_h_total,
        cap_v_total,
        n_h_layers,
        n_v_layers,
    };

    let gcell_of = |x_nm: f64, y_nm: f64| -> (usize, usize) {
        let gx = ((x_nm / gcell_w) as usize).min(nx - 1);
        let gy = ((y_nm / gcell_h) as usize).min(ny - 1);
        (gx, gy)
    };

    // Star decomposition over placed pins.
    let mut twopins: Vec<TwoPin> = Vec::new();
    let mut net_length = vec![0.0f64; h.edges.len()];
    for (ni, e) in h.edges.iter().enumerate() {
        let placed: Vec<(f64, f64)> =
            e.pins.iter().filter_map(|pin| p.position_nm(pin.vertex)).collect();
        if placed.len() < 2 {
            continue;
        }
        let driver = placed[0];
        for &sink in &placed[1..] {
            net_length[ni] += (driver.0 - sink.0).abs() + (driver.1 - sink.1).abs();
            let a = gcell_of(driver.0, driver.1);
            let b = gcell_of(sink.0, sink.1);
            if a != b {
                twopins.push(TwoPin { net: ni, a, b, bend: Bend::HorizontalFirst });
            }
        }
    }

    // First pass: congestion-aware L choice.
    for tp in &mut twopins {
        let c1 = grid.path_cost(tp.a, tp.b, Bend::HorizontalFirst);
        let c2 = grid.path_cost(tp.a, tp.b, Bend::VerticalFirst);
        tp.bend = if c2 < c1 { Bend::VerticalFirst } else { Bend::HorizontalFirst };
        grid.apply(tp.a, tp.b, tp.bend, 1.0);
    }

    // One rip-up-and-reroute pass over overflowed routes.
    let mut over: Vec<(usize, f64)> = twopins
        .iter()
        .enumerate()
        .filter_map(|(i, tp)| {
            let r = grid.max_overflow_ratio(tp.a, tp.b, tp.bend);
            (r > 0.0).then_some((i, r))
        })
        .collect();
    over.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for (i, _) in over {
        let (a, b, bend) = (twopins[i].a, twopins[i].b, twopins[i].bend);
        grid.apply(a, b, bend, -1.0);
        let c1 = grid.path_cost(a, b, Bend::HorizontalFirst);
        let c2 = grid.path_cost(a, b, Bend::VerticalFirst);
        let nb = if c2 < c1 { Bend::VerticalFirst } else { Bend::HorizontalFirst };
        twopins[i].bend = nb;
        grid.apply(a, b, nb, 1.0);
    }

    // Proportional per-layer overflow: demand above the pooled capacity
    // overflows every layer crossing that edge.
    let mut overflow = 0u64;
    for &u in &grid.uh {
        if u > grid.cap_h_total + 1e-9 {
            overflow += grid.n_h_layers;
        }
    }
    for &u in &grid.uv {
        if u > grid.cap_v_total + 1e-9 {
            overflow += grid.n_v_layers;
        }
    }

    RouteResult {
        total_wirelength_nm: net_length.iter().sum(),
        net_length_nm: net_length,
        overflow_count: overflow,
        grid: (nx, ny),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angen::generate_netlist;
    use crate::netcore::{parse_netlist, LibPreset, TopoParams};
    use crate::physdes::{place, Floorplan};

    #[test]
    fn single_net_empty_grid() {
        let (lib, tech) = LibPreset::Lib2.load();
        let text = "cell INV_X1 a\ncell INV_X1 b\nnet n1 a.o b.a\n";
        let h = parse_netlist(text, &lib).unwrap();
        let fp = Floorplan::new(2, 60, &tech).unwrap();
        let p = place(&h, &fp, 2, 0.2, 1).unwrap();
        let r = route(&h, &p, &tech, &RouteConfig::default(), &|_| 0.0);
        assert_eq!(r.overflow_count, 0);
        // routed length equals the pin-to-pin half-perimeter
        let pa = p.position_nm(h.vertex_id("a").unwrap()).unwrap();
        let pb = p.position_nm(h.vertex_id("b").unwrap()).unwrap();
        let hpwl = (pa.0 - pb.0).abs() + (pa.1 - pb.1).abs();
        assert!((r.total_wirelength_nm - hpwl).abs() < 1e-9);
    }

    #[test]
    fn zero_capacity_forces_overflow() {
        let (lib, tech) = LibPreset::Lib2.load();
        let params = TopoParams::new(200, 10, 2.2, 0.5, 4.5, 0.1);
        let h = generate_netlist(&params, &lib, 2).unwrap();
        let fp = Floorplan::sized_for(h.n_inst(), 12, 0.8, &tech).unwrap();
        let p = place(&h, &fp, 12, 0.8, 2).unwrap();
        let cfg = RouteConfig { capacity_scale: 0.0, ..RouteConfig::default() };
        let r = route(&h, &p, &tech, &cfg, &|_| 0.0);
        assert!(r.overflow_count > 0);
    }

    #[test]
    fn wirelength_lower_bounded_by_half_perimeter() {
        let (lib, tech) = LibPreset::Lib2.load();
        let params = TopoParams::new(300, 12, 2.3, 0.5, 5.0, 0.1);
        let h = generate_netlist(&params, &lib, 3).unwrap();
        let fp = Floorplan::sized_for(h.n_inst(), 12, 0.8, &tech).unwrap();
        let p = place(&h, &fp, 12, 0.8, 3).unwrap();
        let r = route(&h, &p, &tech, &RouteConfig::default(), &|_| 0.0);
        for (ni, e) in h.edges.iter().enumerate() {
            let pts: Vec<(f64, f64)> =
                e.pins.iter().filter_map(|pin| p.position_nm(pin.vertex)).collect();
            if pts.len() < 2 {
                continue;
            }
            let (mut xs, mut ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let hpwl = xs.last().unwrap() - xs[0] + ys.last().unwrap() - ys[0];
            assert!(r.net_length_nm[ni] >= hpwl - 1e-6);
        }
    }

    #[test]
    fn capacity_doubling_never_increases_overflow() {
        let (lib, tech) = LibPreset::Lib2.load();
        let params = TopoParams::new(400, 16, 2.3, 0.6, 5.0, 0.12);
        let h = generate_netlist(&params, &lib, 4).unwrap();
        let fp = Floorplan::sized_for(h.n_inst(), 12, 0.85, &tech).unwrap();
        let base = place(&h, &fp, 12, 0.85, 4).unwrap();
        let tangled = crate::physdes::neighbor_swap_tangle(&base, 8.0, 4);
        let mut prev = u64::MAX;
        for scale in [0.05, 0.1, 0.2, 0.4, 0.8] {
            let cfg = RouteConfig { capacity_scale: scale, ..RouteConfig::default() };
            let r = route(&h, &tangled, &tech, &cfg, &|_| 0.0);
            assert!(r.overflow_count <= prev, "overflow rose at scale {scale}");
            prev = r.overflow_count;
        }
    }

    #[test]
    fn congested_edge_contributes_overflow() {
        let (lib, tech) = LibPreset::Lib2.load();
        // Three parallel nets forced through one column of gcell edges.
        let mut text = String::new();
        for i in 0..3 {
            text.push_str(&format!("cell INV_X1 l{i}\ncell INV_X1 r{i}\n"));
        }
        for i in 0..3 {
            text.push_str(&format!("net n{i} l{i}.o r{i}.a\n"));
        }
        let h = parse_netlist(&text, &lib).unwrap();
        let fp = Floorplan::new(2, 90, &tech).unwrap();
        let p = place(&h, &fp, 2, 0.2, 1).unwrap();
        // capacity below one wire per edge
        let cfg = RouteConfig { capacity_scale: 1e-9, ..RouteConfig::default() };
        let r = route(&h, &p, &tech, &cfg, &|_| 0.0);
        assert!(r.overflow_count > 0);
    }
}
