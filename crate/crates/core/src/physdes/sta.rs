//! Minimal static timing analysis: topological longest path with a lumped
//! stage delay per arc of intrinsic + load-per-fanout + wire delay from the
//! routed net length. Endpoints are sequential data pins and primary
//! outputs; register intrinsic delay stands in for clock-to-output.

use crate::netcore::{comb_topo_order, CellLibrary, Hypergraph, TechProfile, VertexKind};
use crate::physdes::route::RouteResult;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaResult {
    pub wns_ns: f64,
    pub tns_ns: f64,
    pub failing_endpoints: u64,
    pub max_arrival_ps: f64,
}

fn is_clock_pin(pin: &str) -> bool {
    let p = pin.to_ascii_lowercase();
    p.starts_with("ck") || p.starts_with("clk")
}

/// Runs STA at the given clock period. `route` supplies per-net wire
/// lengths; `None` analyzes with zero wire delay.
pub fn sta(
    h: &Hypergraph,
    lib: &CellLibrary,
    route: Option<&RouteResult>,
    tech: &TechProfile,
    clkp_ns: f64,
) -> Result<StaResult> {
    let order = comb_topo_order(h)?;

    // Arc delay contributed by `driver` through net `ei`.
    let arc_ps = |driver: usize, ei: usize, fanout: usize| -> f64 {
        let mut d = 0.0;
        if let Some(cell) = h.vertices[driver].cell.as_deref().and_then(|c| lib.get(c)) {
            d += cell.intrinsic_delay_ps + cell.load_delay_ps_per_fanout * fanout as f64;
        }
        if let Some(r) = route {
            d += r.net_length_nm[ei] / 1000.0 * tech.wire_delay_ps_per_um;
        }
        d
    };

    // arrival[v]: worst arrival at the OUTPUT pin side of v's drivers, i.e.
    // at each vertex input we take max over input nets.
    let mut arrival = vec![0.0f64; h.vertices.len()];
    // input_arr[v] = max over nets sinking into v (combinational only).
    let mut input_arr = vec![0.0f64; h.vertices.len()];
    // Process nets in driver topological order: build per-vertex input
    // arrivals, then vertex arrival = its input arrival.
    // Precompute: nets driven by each vertex.
    let mut driven: Vec<Vec<usize>> = vec![Vec::new(); h.vertices.len()];
    for (ei, e) in h.edges.iter().enumerate() {
        driven[e.pins[0].vertex].push(ei);
    }

    let mut relax = |v: usize, arrival: &mut Vec<f64>, input_arr: &mut Vec<f64>| {
        arrival[v] = input_arr[v];
        for &ei in &driven[v] {
            let e = &h.edges[ei];
            let d = arc_ps(v, ei, e.pins.len() - 1);
            for p in &e.pins[1..] {
                let at = arrival[v] + d;
                if at > input_arr[p.vertex] {
                    input_arr[p.vertex] = at;
                }
            }
        }
    };

    // Level-0 sources first (PIs and registers launch at t=0), then
    // combinational vertices in topological order.
    for v in 0..h.vertices.len() {
        match h.vertices[v].kind {
            VertexKind::PrimaryInput | VertexKind::Sequential => {
                relax(v, &mut arrival, &mut input_arr)
            }
            _ => {}
        }
    }
    for &v in &order {
        relax(v, &mut arrival, &mut input_arr);
    }

    // Endpoint slacks, one per endpoint pin.
    let clkp_ps = clkp_ns * 1000.0;
    let mut max_arrival: f64 = 0.0;
    let mut tns_ps = 0.0;
    let mut failing = 0u64;
    for (ei, e) in h.edges.iter().enumerate() {
        let driver = e.pins[0].vertex;
        let d = arc_ps(driver, ei, e.pins.len() - 1);
        let pin_arrival = arrival[driver] + d;
        for p in &e.pins[1..] {
            let is_endpoint = match h.vertices[p.vertex].kind {
                VertexKind::Sequential => !is_clock_pin(&p.pin),
                VertexKind::PrimaryOutput => true,
                _ => false,
            };
            if !is_endpoint {
                continue;
            }
            max_arrival = max_arrival.max(pin_arrival);
            let slack = clkp_ps - pin_arrival;
            if slack < 0.0 {
                failing += 1;
                tns_ps += slack;
            }
        }
    }

    Ok(StaResult {
        wns_ns: (clkp_ps - max_arrival) / 1000.0,
        tns_ns: tns_ps / 1000.0,
        failing_endpoints: failing,
        max_arrival_ps: max_arrival,
    })
}
