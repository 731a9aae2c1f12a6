//! Seeded artificial netlist generation.
//!
//! Construction is a levelized DAG. Registers and primary inputs sit at
//! level 0; combinational cells spread over levels 1..=L with widths
//! tapering toward the top. Every cell at level l takes one "spine" input
//! from level l-1, which pins its maximum fanin depth to exactly l; extra
//! inputs come from strictly lower levels. Spine sources are assigned by a
//! position-sorted alignment with a jitter that grows with the bounding-box
//! parameter, so low b yields tight local cones and high b scatters
//! connections across the virtual sqrt(N) x sqrt(N) grid.
//!
//! Sink bookkeeping drives the remaining parameters. Mean net degree is
//! 1 + total_sinks/nets, so a sink budget is computed from the degree target
//! and spent on extra fanin. Every driver must end with at least one sink;
//! drivers left uncovered by spines are absorbed in priority order: budgeted
//! extra inputs, then timing endpoints (register data pins and primary
//! outputs) via a transportation step that also fixes the mean endpoint
//! depth, then forced extra inputs, then endpoint rewiring, and as a last
//! resort cell deletion (the instance-count tolerance absorbs it).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angen::sweep::passes_filters;
use crate::netcore::{CellLibrary, Hypergraph, Pin, TopoParams, Vertex, VertexKind};
use crate::{Error, Result};

/// Input-pin count a generated instance of this cell should have.
fn data_arity(name: &str) -> usize {
    let n = name.to_ascii_uppercase();
    if n.starts_with("INV") || n.starts_with("BUF") || n.starts_with("DFF") || n.starts_with("LHQ")
    {
        1
    } else if n.starts_with("MUX2") || n.starts_with("AOI21") || n.starts_with("OAI21") {
        3
    } else if n.starts_with("AOI22")
        || n.starts_with("OAI22")
        || n.starts_with("NAND4")
        || n.starts_with("NOR4")
    {
        4
    } else if n.contains('3') {
        3
    } else {
        2
    }
}

const MAX_ARITY: usize = 4;
const PICK_TRIES: usize = 8;

struct Gen<'a> {
    rng: ChaCha8Rng,
    lib: &'a CellLibrary,
    n_in: usize,
    n_out: usize,
    n_seq: usize,
    n_comb: usize,
    levels: usize,
    /// Vertex ids: PIs, then POs, then registers, then comb cells.
    level_of: Vec<usize>,
    comb_by_level: Vec<Vec<usize>>,
    radius: i64,
    pos: Vec<(i64, i64)>,
    /// fanin[v] = source driver vids (comb cells only populate this).
    fanin: Vec<Vec<usize>>,
    /// sinks[driver] = sink vids (comb inputs and endpoints).
    sinks: Vec<Vec<usize>>,
    /// endpoint index (registers then POs) -> driver vid, usize::MAX unset.
    endpoint_driver: Vec<usize>,
    dead: Vec<bool>,
}

impl<'a> Gen<'a> {
    fn pi(&self, i: usize) -> usize {
        i
    }
    fn po(&self, i: usize) -> usize {
        self.n_in + i
    }
    fn reg(&self, i: usize) -> usize {
        self.n_in + self.n_out + i
    }
    fn comb(&self, i: usize) -> usize {
        self.n_in + self.n_out + self.n_seq + i
    }
    fn n_vertices(&self) -> usize {
        self.n_in + self.n_out + self.n_seq + self.n_comb
    }
    fn endpoint_sink(&self, e: usize) -> usize {
        if e < self.n_seq {
            self.reg(e)
        } else {
            self.po(e - self.n_seq)
        }
    }
    fn level0_drivers(&self) -> Vec<usize> {
        (0..self.n_in).map(|i| self.pi(i)).chain((0..self.n_seq).map(|i| self.reg(i))).collect()
    }

    fn cheb(&self, a: usize, b: usize) -> i64 {
        let (ax, ay) = self.pos[a];
        let (bx, by) = self.pos[b];
        (ax - bx).abs().max((ay - by).abs())
    }

    /// Locality-biased pick: first try within the radius, else nearest try.
    fn pick_near(&mut self, cands: &[usize], anchor: usize) -> Option<usize> {
        if cands.is_empty() {
            return None;
        }
        let mut best: Option<(i64, usize)> = None;
        for _ in 0..PICK_TRIES {
            let c = cands[self.rng.gen_range(0..cands.len())];
            let d = self.cheb(c, anchor);
            if d <= self.radius {
                return Some(c);
            }
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, c));
            }
        }
        best.map(|(_, c)| c)
    }

    /// Attaches `d` as an extra input of some live cell strictly above its
    /// level. Returns false when no cell has fanin slack left.
    fn try_attach_above(&mut self, d: usize) -> bool {
        let lev = self.level_of[d];
        let mut homes: Vec<usize> = Vec::new();
        for hl in lev + 1..=self.levels {
            homes.extend(self.comb_by_level[hl].iter().copied().filter(|&c| {
                !self.dead[c] && self.fanin[c].len() < MAX_ARITY && !self.fanin[c].contains(&d)
            }));
            if homes.len() >= 32 {
                break;
            }
        }
        match self.pick_near(&homes, d) {
            Some(c) => {
                self.fanin[c].push(d);
                self.sinks[d].push(c);
                true
            }
            None => false,
        }
    }
}

/// Generates a netlist honoring the six topological parameters as measured
/// by extraction: exact primary-IO count, near-exact instance count and
/// sequential ratio, average depth and net degree within tolerance, and
/// locality structure steered by the bounding-box parameter. Deterministic
/// for a fixed (params, seed) pair.
pub fn generate_netlist(params: &TopoParams, lib: &CellLibrary, seed: u64) -> Result<Hypergraph> {
    let arr = params.as_array()?;
    if !passes_filters(&arr) {
        return Err(Error::Infeasible(format!(
            "parameters outside generator bounds: {arr:?}"
        )));
    }
    let n_inst = params.n_inst as usize;
    let n_prim = params.n_prim as usize;
    let n_seq = (params.s_ratio * n_inst as f64).floor() as usize;
    let n_comb = n_inst
        .checked_sub(n_seq)
        .filter(|&c| c > 0)
        .ok_or_else(|| Error::Infeasible("no combinational cells left (s_ratio too high)".into()))?;
    let n_out = if n_prim >= 2 { n_prim / 2 } else { 0 };
    let n_in = n_prim - n_out;

    let t = params.t_avg;
    let sigma = t / 6.0;
    let levels = ((t + 3.0 * sigma).ceil() as usize).max(t.ceil() as usize + 2);
    if n_comb < 2 * levels {
        return Err(Error::Infeasible(format!(
            "depth budget: {n_comb} combinational cells cannot support ~{levels} levels"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Level widths: quadratic taper, wide cones at the bottom.
    let weights: Vec<f64> = (1..=levels).map(|l| ((levels - l + 1) as f64).powi(2)).collect();
    let wsum: f64 = weights.iter().sum();
    let mut width: Vec<usize> =
        weights.iter().map(|w| ((w / wsum) * n_comb as f64).floor().max(1.0) as usize).collect();
    let mut assigned: usize = width.iter().sum();
    let mut l = 0;
    while assigned < n_comb {
        width[l % levels] += 1;
        assigned += 1;
        l += 1;
    }
    l = 0;
    while assigned > n_comb {
        if width[l % levels] > 1 {
            width[l % levels] -= 1;
            assigned -= 1;
        }
        l += 1;
    }

    let n_vertices = n_in + n_out + n_seq + n_comb;
    let grid_side = ((n_inst as f64).sqrt().ceil() as i64).max(1);
    let b_param = params.b_avg.unwrap_or(0.5).min(1.0);
    let radius = ((b_param * grid_side as f64).round() as i64).max(1);

    // Virtual positions: a random permutation of grid slots (wrapping).
    let mut slots: Vec<i64> = (0..n_vertices as i64).collect();
    slots.shuffle(&mut rng);
    let pos: Vec<(i64, i64)> =
        slots.iter().map(|&s| (s % grid_side, (s / grid_side) % grid_side)).collect();

    let mut g = Gen {
        rng,
        lib,
        n_in,
        n_out,
        n_seq,
        n_comb,
        levels,
        level_of: vec![0; n_vertices],
        comb_by_level: vec![Vec::new(); levels + 1],
        radius,
        pos,
        fanin: vec![Vec::new(); n_vertices],
        sinks: vec![Vec::new(); n_vertices],
        endpoint_driver: vec![usize::MAX; n_seq + n_out],
        dead: vec![false; n_vertices],
    };

    let mut next = 0usize;
    for lev in 1..=levels {
        for _ in 0..width[lev - 1] {
            let v = g.comb(next);
            g.level_of[v] = lev;
            g.comb_by_level[lev].push(v);
            next += 1;
        }
    }

    // Spines: both sides sorted by virtual position, the lower side permuted
    // by a block shuffle whose block size scales with the bounding-box
    // parameter, then aligned cyclically. The permutation is a bijection, so
    // a level of width w covers w distinct drivers below it; small b keeps
    // the pairing spatially tight, large b scatters it.
    for lev in 1..=levels {
        let mut lower: Vec<usize> =
            if lev == 1 { g.level0_drivers() } else { g.comb_by_level[lev - 1].clone() };
        lower.sort_by_key(|&v| (g.pos[v].1, g.pos[v].0));
        let block = ((b_param * lower.len() as f64).round() as usize).max(1);
        for chunk in lower.chunks_mut(block) {
            chunk.shuffle(&mut g.rng);
        }
        let mut upper = g.comb_by_level[lev].clone();
        upper.sort_by_key(|&v| (g.pos[v].1, g.pos[v].0));
        let rot = g.rng.gen_range(0..lower.len());
        for (j, &c) in upper.iter().enumerate() {
            let src = lower[(rot + j) % lower.len()];
            g.fanin[c].push(src);
            g.sinks[src].push(c);
        }
    }

    // Sink budget from the degree target: degree = 1 + sinks/nets.
    let n_nets_est = n_comb + n_seq + n_in;
    let mandatory = n_comb + n_seq + n_out;
    let wanted_sinks = ((params.d_avg - 1.0) * n_nets_est as f64).round() as usize;
    let mut budget = wanted_sinks.saturating_sub(mandatory);

    // Budgeted absorption of sink-less drivers, lowest levels first (they
    // have the most homes above and contribute least to depth skew).
    for lev in 0..g.levels {
        if budget == 0 {
            break;
        }
        let danglers: Vec<usize> = if lev == 0 {
            g.level0_drivers().into_iter().filter(|&v| g.sinks[v].is_empty()).collect()
        } else {
            g.comb_by_level[lev].iter().copied().filter(|&v| g.sinks[v].is_empty()).collect()
        };
        for d in danglers {
            if budget == 0 {
                break;
            }
            if g.try_attach_above(d) {
                budget -= 1;
            }
        }
    }

    // Endpoint transportation: cover remaining sink-less drivers with
    // endpoints (highest levels first; level-0 coverage means register or
    // primary-input nets driving data pins directly), accepting a candidate
    // only while the endpoints still to be placed can pull the overall mean
    // depth back to the target. Rejected candidates become forced extra
    // inputs, trading net degree for depth fidelity.
    let n_ep = n_seq + n_out;
    let l_eff = g.levels as f64;
    let mut candidates: Vec<(usize, usize)> = Vec::new(); // (level, driver)
    for lev in (1..=g.levels).rev() {
        for &v in &g.comb_by_level[lev] {
            if g.sinks[v].is_empty() {
                candidates.push((lev, v));
            }
        }
    }
    let mut level0_uncovered: Vec<usize> =
        g.level0_drivers().into_iter().filter(|&v| g.sinks[v].is_empty()).collect();
    level0_uncovered.shuffle(&mut g.rng);
    candidates.extend(level0_uncovered.iter().map(|&v| (0usize, v)));

    let mut cov: Vec<(usize, usize)> = Vec::new();
    let mut sum_planned = 0.0;
    for &(lev, drv) in &candidates {
        let accepted = if cov.len() >= n_ep {
            false
        } else {
            let left = (n_ep - cov.len() - 1) as f64;
            let residual = n_ep as f64 * t - sum_planned - lev as f64;
            if left == 0.0 {
                residual.abs() <= n_ep as f64 // mean error within ~1 level
            } else {
                let mu = residual / left;
                (0.0..=l_eff).contains(&mu)
            }
        };
        if accepted {
            cov.push((lev, drv));
            sum_planned += lev as f64;
        } else if !g.try_attach_above(drv) {
            if lev == 0 {
                return Err(Error::Infeasible(
                    "no fanin slack left for a primary input or register output".into(),
                ));
            }
            // stays sink-less; the final sweep rewires or deletes it
        }
    }

    let mut ep_order: Vec<usize> = (0..n_ep).collect();
    ep_order.shuffle(&mut g.rng);
    let mut ep_iter = 0usize;

    // Takes the next endpoint from the shuffled order and wires it to
    // `driver`, skipping the self-pairing of a register with its own data pin.
    fn assign_endpoint(
        g: &mut Gen,
        driver: usize,
        order: &mut [usize],
        ep_iter: &mut usize,
    ) -> bool {
        let mut idx = *ep_iter;
        while idx < order.len() && g.endpoint_sink(order[idx]) == driver {
            idx += 1;
        }
        if idx == order.len() {
            idx = *ep_iter;
            if g.endpoint_sink(order[idx]) == driver {
                return false;
            }
        }
        order.swap(*ep_iter, idx);
        let e = order[*ep_iter];
        *ep_iter += 1;
        let sink = g.endpoint_sink(e);
        g.sinks[driver].push(sink);
        g.endpoint_driver[e] = driver;
        true
    }

    let mut sum_cov = 0usize;
    let mut covered = 0usize;
    for (lev, drv) in cov.clone() {
        if assign_endpoint(&mut g, drv, &mut ep_order, &mut ep_iter) {
            sum_cov += lev;
            covered += 1;
        }
    }
    let r = n_ep - covered;
    if r > 0 {
        let mu = ((n_ep as f64 * t) - sum_cov as f64) / r as f64;
        let mu = mu.clamp(0.0, g.levels as f64);
        let base = mu.floor() as usize;
        let n_hi = ((mu - base as f64) * r as f64).round() as usize;
        for i in 0..r {
            let lev = if i < n_hi { (base + 1).min(g.levels) } else { base };
            let anchor = g.endpoint_sink(ep_order[ep_iter.min(n_ep - 1)]);
            let cands: Vec<usize> = if lev == 0 {
                g.level0_drivers()
            } else {
                g.comb_by_level[lev].clone()
            };
            let drv = g.pick_near(&cands, anchor).expect("levels are nonempty");
            assign_endpoint(&mut g, drv, &mut ep_order, &mut ep_iter);
        }
    }

    // Remaining budget becomes generic extra fanin.
    let mut order: Vec<usize> = (0..n_comb).map(|i| g.comb(i)).collect();
    order.shuffle(&mut g.rng);
    'outer: for _pass in 0..MAX_ARITY - 1 {
        let mut progressed = false;
        for idx in 0..order.len() {
            if budget == 0 {
                break 'outer;
            }
            let c = order[idx];
            if g.fanin[c].len() >= MAX_ARITY {
                continue;
            }
            let lev = g.level_of[c];
            let mut src = None;
            for _ in 0..PICK_TRIES {
                let cand = sample_below(&mut g, lev);
                if !g.fanin[c].contains(&cand) {
                    if g.cheb(cand, c) <= g.radius || g.rng.gen_bool(0.25) {
                        src = Some(cand);
                        break;
                    }
                }
            }
            if let Some(s) = src {
                g.fanin[c].push(s);
                g.sinks[s].push(c);
                budget -= 1;
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }

    // Final sweep, top level first: attach above, rewire an endpoint off a
    // multi-sink driver, or delete the cell (cascading to sources that lose
    // their last sink).
    let mut queue: Vec<usize> = (0..n_comb)
        .map(|i| g.comb(i))
        .chain(g.level0_drivers())
        .filter(|&v| g.sinks[v].is_empty())
        .collect();
    queue.sort_by_key(|&v| std::cmp::Reverse(g.level_of[v]));
    let mut qi = 0;
    while qi < queue.len() {
        let d = queue[qi];
        qi += 1;
        if g.dead[d] || !g.sinks[d].is_empty() {
            continue;
        }
        if g.try_attach_above(d) {
            continue;
        }
        let lev = g.level_of[d];
        if lev == 0 {
            return Err(Error::Infeasible(
                "no fanin slack left for a primary input or register output".into(),
            ));
        }
        let mut rewired = false;
        for e in 0..g.endpoint_driver.len() {
            let old = g.endpoint_driver[e];
            if old != usize::MAX && old != d && g.sinks[old].len() >= 2 {
                let sink = g.endpoint_sink(e);
                if sink == d {
                    continue;
                }
                g.sinks[old].retain(|&s| s != sink);
                g.sinks[d].push(sink);
                g.endpoint_driver[e] = d;
                rewired = true;
                break;
            }
        }
        if rewired {
            continue;
        }
        g.dead[d] = true;
        let srcs = std::mem::take(&mut g.fanin[d]);
        for s in srcs {
            g.sinks[s].retain(|&x| x != d);
            if g.sinks[s].is_empty() && !g.dead[s] {
                queue.push(s);
            }
        }
        g.comb_by_level[lev].retain(|&x| x != d);
    }

    build_hypergraph(&mut g)
}

/// Uniform driver below `level`: level-0 drivers plus comb levels 1..level.
fn sample_below(g: &mut Gen, level: usize) -> usize {
    let level0 = g.n_in + g.n_seq;
    let mut total = level0;
    for l in 1..level {
        total += g.comb_by_level[l].len();
    }
    let mut idx = g.rng.gen_range(0..total);
    if idx < g.n_in {
        return g.pi(idx);
    }
    idx -= g.n_in;
    if idx < g.n_seq {
        return g.reg(idx);
    }
    idx -= g.n_seq;
    for l in 1..level {
        if idx < g.comb_by_level[l].len() {
            return g.comb_by_level[l][idx];
        }
        idx -= g.comb_by_level[l].len();
    }
    unreachable!()
}

fn build_hypergraph(g: &mut Gen) -> Result<Hypergraph> {
    let mut comb_cells_by_arity: Vec<Vec<&str>> = vec![Vec::new(); MAX_ARITY + 1];
    let mut seq_cells: Vec<&str> = Vec::new();
    for c in g.lib.cells() {
        if c.is_sequential {
            seq_cells.push(&c.name);
        } else {
            let a = data_arity(&c.name).min(MAX_ARITY);
            comb_cells_by_arity[a].push(&c.name);
        }
    }
    seq_cells.sort();
    for v in &mut comb_cells_by_arity {
        v.sort();
    }
    if seq_cells.is_empty() && g.n_seq > 0 {
        return Err(Error::Infeasible("library has no sequential cells".into()));
    }
    // Narrow drives dominate real netlists; weight choices by 1/width^2.
    let weights_for = |names: &[&str], lib: &CellLibrary| -> Vec<f64> {
        let mut acc = 0.0;
        names
            .iter()
            .map(|n| {
                let w = lib.get(n).map_or(1, |c| c.width_cpp) as f64;
                acc += 1.0 / (w * w);
                acc
            })
            .collect()
    };
    let cum_by_arity: Vec<Vec<f64>> =
        comb_cells_by_arity.iter().map(|names| weights_for(names, g.lib)).collect();
    let pick_comb = |rng: &mut ChaCha8Rng, arity: usize| -> Result<&str> {
        for a in (1..=arity).rev() {
            let names = &comb_cells_by_arity[a];
            if !names.is_empty() {
                let cum = &cum_by_arity[a];
                let total = *cum.last().unwrap();
                let t = rng.gen_range(0.0..total);
                let idx = cum.partition_point(|&c| c <= t).min(names.len() - 1);
                return Ok(names[idx]);
            }
        }
        Err(Error::Infeasible("library has no combinational cells".into()))
    };

    let mut h = Hypergraph::new();
    let mut vid_map = vec![usize::MAX; g.n_vertices()];
    for i in 0..g.n_in {
        vid_map[g.pi(i)] = h.add_vertex(Vertex {
            name: format!("pi{i}"),
            cell: None,
            kind: VertexKind::PrimaryInput,
            width_cpp: 0,
        })?;
    }
    for i in 0..g.n_out {
        vid_map[g.po(i)] = h.add_vertex(Vertex {
            name: format!("po{i}"),
            cell: None,
            kind: VertexKind::PrimaryOutput,
            width_cpp: 0,
        })?;
    }
    for i in 0..g.n_seq {
        let v = g.reg(i);
        let cell = seq_cells[g.rng.gen_range(0..seq_cells.len())];
        let spec = g.lib.get(cell).unwrap();
        vid_map[v] = h.add_vertex(Vertex {
            name: format!("r{i}"),
            cell: Some(cell.to_string()),
            kind: VertexKind::Sequential,
            width_cpp: spec.width_cpp,
        })?;
    }
    let mut alive_idx = 0usize;
    for i in 0..g.n_comb {
        let v = g.comb(i);
        if g.dead[v] {
            continue;
        }
        let arity = g.fanin[v].len().max(1);
        let cell = pick_comb(&mut g.rng, arity)?;
        let spec = g.lib.get(cell).unwrap();
        vid_map[v] = h.add_vertex(Vertex {
            name: format!("c{alive_idx}"),
            cell: Some(cell.to_string()),
            kind: VertexKind::Combinational,
            width_cpp: spec.width_cpp,
        })?;
        alive_idx += 1;
    }

    // One net per driver with sinks. Sink pin letters follow fanin order.
    const PIN_LETTERS: [&str; MAX_ARITY] = ["a", "b", "c", "e"];
    let mut net_idx = 0usize;
    for v in 0..g.n_vertices() {
        if g.dead[v] || g.sinks[v].is_empty() || vid_map[v] == usize::MAX {
            continue;
        }
        let driver_pin = if v < g.n_in {
            String::new()
        } else if v < g.n_in + g.n_out {
            continue; // POs never drive
        } else if v < g.n_in + g.n_out + g.n_seq {
            "q".to_string()
        } else {
            "o".to_string()
        };
        let mut pins = vec![Pin { vertex: vid_map[v], pin: driver_pin }];
        for &s in &g.sinks[v] {
            if g.dead[s] {
                continue;
            }
            let pin = if s < g.n_in + g.n_out {
                String::new() // primary output sink
            } else if s < g.n_in + g.n_out + g.n_seq {
                "d".to_string()
            } else {
                let slot = g.fanin[s].iter().position(|&x| x == v).unwrap();
                PIN_LETTERS[slot.min(MAX_ARITY - 1)].to_string()
            };
            pins.push(Pin { vertex: vid_map[s], pin });
        }
        if pins.len() >= 2 {
            h.add_edge(format!("n{net_idx}"), 1.0, pins)?;
            net_idx += 1;
        } else {
            return Err(Error::Infeasible("internal: driver left without sinks".into()));
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::{emit_netlist, extract_topo_params, parse_netlist, LibPreset, TopoParams};

    fn lib2() -> CellLibrary {
        LibPreset::Lib2.load().0
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = TopoParams::new(1000, 20, 2.5, 0.8, 6.0, 0.2);
        let lib = lib2();
        let a = generate_netlist(&p, &lib, 7).unwrap();
        let b = generate_netlist(&p, &lib, 7).unwrap();
        assert_eq!(emit_netlist(&a), emit_netlist(&b));
        let c = generate_netlist(&p, &lib, 8).unwrap();
        assert_ne!(emit_netlist(&a), emit_netlist(&c));
    }

    #[test]
    fn tolerances_hold_on_reference_point() {
        let p = TopoParams::new(1000, 20, 2.5, 0.8, 6.0, 0.2);
        let lib = lib2();
        let h = generate_netlist(&p, &lib, 7).unwrap();
        let m = extract_topo_params(&h, None).unwrap();
        assert_eq!(m.n_prim, 20);
        assert!((m.n_inst as f64 - 1000.0).abs() <= 100.0, "n_inst {}", m.n_inst);
        assert!((m.s_ratio - 0.2).abs() <= 0.05, "s_ratio {}", m.s_ratio);
        assert!((m.t_avg - 6.0).abs() <= 1.2, "t_avg {}", m.t_avg);
        assert!((m.d_avg - 2.5).abs() <= 0.25, "d_avg {}", m.d_avg);
    }

    #[test]
    fn round_trips_through_the_text_format() {
        let p = TopoParams::new(100, 10, 2.2, 0.5, 4.5, 0.2);
        let lib = lib2();
        let h = generate_netlist(&p, &lib, 3).unwrap();
        let text = emit_netlist(&h);
        let h2 = parse_netlist(&text, &lib).unwrap();
        assert!(h.structurally_eq(&h2));
    }

    #[test]
    fn degenerate_all_sequential_errors() {
        let p = TopoParams::new(100, 10, 2.2, 0.5, 4.0, 1.0);
        let lib = lib2();
        assert!(matches!(generate_netlist(&p, &lib, 1), Err(Error::Infeasible(_))));
    }

    #[test]
    fn out_of_bounds_parameters_rejected() {
        let lib = lib2();
        // d_avg at the open upper bound.
        let p = TopoParams::new(1000, 20, 2.6, 0.8, 6.0, 0.2);
        assert!(generate_netlist(&p, &lib, 1).is_err());
        // t_avg at the open lower bound.
        let p = TopoParams::new(1000, 20, 2.2, 0.8, 3.0, 0.2);
        assert!(generate_netlist(&p, &lib, 1).is_err());
    }

    #[test]
    fn acyclic_and_well_formed_over_seeds() {
        let lib = lib2();
        let p = TopoParams::new(600, 16, 2.3, 0.5, 5.0, 0.15);
        for seed in 0..20 {
            let h = generate_netlist(&p, &lib, seed).unwrap();
            // extraction runs the cycle check internally
            let m = extract_topo_params(&h, None).unwrap();
            assert_eq!(m.n_prim, 16);
            assert!(h.edges.iter().all(|e| e.pins.len() >= 2));
        }
    }
}
