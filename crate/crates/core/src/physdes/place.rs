//! Placement: recursive-bisection ordering by connectivity, then row-major
//! assignment onto the snake-ordered slot grid with uniform spreading to the
//! requested utilization.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::netcore::Hypergraph;
use crate::physdes::floorplan::{usable_slots_snake, Floorplan, Placement};
use crate::{Error, Result};

/// Clique-model neighbor lists; large nets are expanded from the driver only.
fn adjacency(h: &Hypergraph, placeable: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); h.vertices.len()];
    for e in &h.edges {
        let pins: Vec<usize> =
            e.pins.iter().map(|p| p.vertex).filter(|&v| placeable[v]).collect();
        if pins.len() < 2 {
            continue;
        }
        if pins.len() <= 8 {
            for i in 0..pins.len() {
                for j in i + 1..pins.len() {
                    adj[pins[i]].push(pins[j]);
                    adj[pins[j]].push(pins[i]);
                }
            }
        } else {
            for &s in &pins[1..] {
                adj[pins[0]].push(s);
                adj[s].push(pins[0]);
            }
        }
    }
    adj
}

/// Splits `group` into two halves by greedy region growing: start from a
/// seeded vertex, repeatedly absorb the outside vertex with the most links
/// into the region.
fn grow_split(group: &[usize], adj: &[Vec<usize>], rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
    let half = group.len() / 2;
    let in_group: std::collections::HashSet<usize> = group.iter().copied().collect();
    let seed = group[rng.gen_range(0..group.len())];

    let mut gain: std::collections::HashMap<usize, i64> = std::collections::HashMap::new();
    let mut in_region: std::collections::HashSet<usize> = std::collections::HashSet::new();
    let mut heap: BinaryHeap<(i64, Reverse<usize>)> = BinaryHeap::new();
    let mut region = Vec::with_capacity(half);

    let mut absorb = |v: usize,
                      region: &mut Vec<usize>,
                      in_region: &mut std::collections::HashSet<usize>,
                      gain: &mut std::collections::HashMap<usize, i64>,
                      heap: &mut BinaryHeap<(i64, Reverse<usize>)>| {
        region.push(v);
        in_region.insert(v);
        for &u in &adj[v] {
            if in_group.contains(&u) && !in_region.contains(&u) {
                let g = gain.entry(u).or_insert(0);
                *g += 1;
                heap.push((*g, Reverse(u)));
            }
        }
    };

    absorb(seed, &mut region, &mut in_region, &mut gain, &mut heap);
    while region.len() < half {
        // Lazy-deletion pop: entries may be stale.
        let next = loop {
            match heap.pop() {
                Some((g, Reverse(u))) => {
                    if !in_region.contains(&u) && gain.get(&u) == Some(&g) {
                        break Some(u);
                    }
                }
                None => break None,
            }
        };
        let v = match next {
            Some(v) => v,
            // Disconnected remainder: take the smallest-index outsider.
            None => match group.iter().copied().find(|v| !in_region.contains(v)) {
                Some(v) => v,
                None => break,
            },
        };
        absorb(v, &mut region, &mut in_region, &mut gain, &mut heap);
    }
    let rest: Vec<usize> = group.iter().copied().filter(|v| !in_region.contains(v)).collect();
    (region, rest)
}

fn bisect_order(group: Vec<usize>, adj: &[Vec<usize>], rng: &mut ChaCha8Rng, out: &mut Vec<usize>) {
    if group.len() <= 4 {
        out.extend(group);
        return;
    }
    let (a, b) = grow_split(&group, adj, rng);
    bisect_order(a, adj, rng, out);
    bisect_order(b, adj, rng, out);
}

/// Places all instances of `h` on `fp`. Every cell occupies `span` sites;
/// cells are ordered by recursive bisection and spread uniformly over the
/// snake-ordered usable slots so local density approximates `util`.
pub fn place(
    h: &Hypergraph,
    fp: &Floorplan,
    span: u32,
    util: f64,
    seed: u64,
) -> Result<Placement> {
    let placeable: Vec<bool> = h.vertices.iter().map(|v| v.kind.is_instance()).collect();
    let cells: Vec<usize> =
        (0..h.vertices.len()).filter(|&v| placeable[v]).collect();
    for &v in &cells {
        if h.vertices[v].width_cpp > span {
            return Err(Error::Capacity(format!(
                "cell {} width {} exceeds the uniform span {span}",
                h.vertices[v].name, h.vertices[v].width_cpp
            )));
        }
    }
    let slots_per_row = fp.sites_per_row / span as usize;
    if slots_per_row == 0 {
        return Err(Error::Capacity("rows narrower than one cell span".into()));
    }
    let usable = usable_slots_snake(fp, span, slots_per_row);
    let demand = cells.len() * span as usize;
    let cap = (util * fp.available_sites() as f64).ceil() as usize + span as usize;
    if demand > cap {
        return Err(Error::Capacity(format!(
            "demand {demand} sites exceeds util-implied capacity {cap}"
        )));
    }
    if cells.len() > usable.len() {
        return Err(Error::Capacity(format!(
            "{} cells cannot fit in {} usable slots",
            cells.len(),
            usable.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let adj = adjacency(h, &placeable);
    let mut order = Vec::with_capacity(cells.len());
    bisect_order(cells.clone(), &adj, &mut rng, &mut order);

    // Spread cells uniformly over the usable slots. When the floorplan was
    // sized for `util`, occupancy lands within one cell of the request.
    let n = order.len();
    let u = usable.len();
    let mut placement = Placement {
        fp: fp.clone(),
        span,
        slots_per_row,
        slot_of: vec![None; h.vertices.len()],
        cell_at: vec![None; fp.rows * slots_per_row],
    };
    for (i, &v) in order.iter().enumerate() {
        let j = if n <= 1 { 0 } else { i * (u - 1) / (n - 1) };
        // Collisions are impossible: i*(u-1)/(n-1) is strictly increasing
        // in i when u >= n.
        let slot = usable[j];
        placement.slot_of[v] = Some(slot);
        placement.cell_at[slot] = Some(v);
    }
    placement.check_legal(h)?;
    Ok(placement)
}
