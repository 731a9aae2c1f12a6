//! Neighbor-swap tangling: random pairs of neighboring cells exchange slots,
//! progressively degrading placement locality while staying legal (all cells
//! share one slot span). The swap stream is cumulative: tangling by k2 > k1
//! under the same seed extends the k1 stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::physdes::floorplan::Placement;

/// A reusable swap stream; `kth` walks it cumulatively across checkpoints.
pub struct TangleStream {
    rng: ChaCha8Rng,
    /// Placed vertex ids in stable order, for uniform cell draws.
    cells: Vec<usize>,
}

impl TangleStream {
    pub fn new(p: &Placement, seed: u64) -> Self {
        let cells: Vec<usize> =
            (0..p.slot_of.len()).filter(|&v| p.slot_of[v].is_some()).collect();
        Self { rng: ChaCha8Rng::seed_from_u64(seed), cells }
    }

    /// Applies `count` neighbor swaps in place.
    pub fn apply(&mut self, p: &mut Placement, count: usize) {
        for _ in 0..count {
            let v = self.cells[self.rng.gen_range(0..self.cells.len())];
            let slot = p.slot_of[v].expect("tangle stream built from this placement");
            let (row, col) = p.slot_coords(slot);
            let mut options: Vec<usize> = Vec::with_capacity(4);
            if let Some(s) = nearest_in_row(p, row, col, -1) {
                options.push(s);
            }
            if let Some(s) = nearest_in_row(p, row, col, 1) {
                options.push(s);
            }
            if row > 0 {
                if let Some(s) = nearest_in_other_row(p, row - 1, col) {
                    options.push(s);
                }
            }
            if row + 1 < p.fp.rows {
                if let Some(s) = nearest_in_other_row(p, row + 1, col) {
                    options.push(s);
                }
            }
            if options.is_empty() {
                continue;
            }
            let other_slot = options[self.rng.gen_range(0..options.len())];
            let u = p.cell_at[other_slot].expect("neighbor slots are occupied");
            p.cell_at[slot] = Some(u);
            p.cell_at[other_slot] = Some(v);
            p.slot_of[v] = Some(other_slot);
            p.slot_of[u] = Some(slot);
        }
    }
}

fn nearest_in_row(p: &Placement, row: usize, col: usize, dir: i64) -> Option<usize> {
    let mut c = col as i64 + dir;
    while c >= 0 && (c as usize) < p.slots_per_row {
        let slot = row * p.slots_per_row + c as usize;
        if p.cell_at[slot].is_some() {
            return Some(slot);
        }
        c += dir;
    }
    None
}

/// Closest occupied slot in a neighboring row by column distance, lower
/// column on ties.
fn nearest_in_other_row(p: &Placement, row: usize, col: usize) -> Option<usize> {
    for d in 0..p.slots_per_row as i64 {
        for c in [col as i64 - d, col as i64 + d] {
            if c >= 0 && (c as usize) < p.slots_per_row {
                let slot = row * p.slots_per_row + c as usize;
                if p.cell_at[slot].is_some() {
                    return Some(slot);
                }
            }
        }
    }
    None
}

/// Applies `round(k * n_placed)` neighbor swaps and returns the tangled
/// placement. Deterministic per seed; see [`TangleStream`] for cumulative use.
pub fn neighbor_swap_tangle(p: &Placement, k: f64, seed: u64) -> Placement {
    let mut out = p.clone();
    let swaps = (k * p.n_placed() as f64).round() as usize;
    let mut stream = TangleStream::new(p, seed);
    stream.apply(&mut out, swaps);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angen::generate_netlist;
    use crate::netcore::{LibPreset, TopoParams};
    use crate::physdes::{place, Floorplan};

    fn placed_fixture(seed: u64) -> (crate::netcore::Hypergraph, Placement) {
        let (lib, tech) = LibPreset::Lib2.load();
        let params = TopoParams::new(150, 10, 2.2, 0.5, 4.5, 0.1);
        let h = generate_netlist(&params, &lib, seed).unwrap();
        let fp = Floorplan::sized_for(h.n_inst(), 12, 0.8, &tech).unwrap();
        let p = place(&h, &fp, 12, 0.8, seed).unwrap();
        (h, p)
    }

    #[test]
    fn zero_swaps_is_identity() {
        let (_, p) = placed_fixture(1);
        let q = neighbor_swap_tangle(&p, 0.0, 7);
        assert_eq!(p.slot_of, q.slot_of);
    }

    #[test]
    fn legality_preserved_after_many_swaps() {
        let (h, p) = placed_fixture(2);
        let q = neighbor_swap_tangle(&p, 3.0, 7);
        q.check_legal(&h).unwrap();
        assert_ne!(p.slot_of, q.slot_of);
    }

    #[test]
    fn deterministic_and_cumulative() {
        let (_, p) = placed_fixture(3);
        let a = neighbor_swap_tangle(&p, 2.0, 9);
        let b = neighbor_swap_tangle(&p, 2.0, 9);
        assert_eq!(a.slot_of, b.slot_of);

        // tangle(p, 2) extends tangle(p, 1) under one stream.
        let n = p.n_placed();
        let mut c = p.clone();
        let mut stream = TangleStream::new(&p, 9);
        stream.apply(&mut c, n);
        stream.apply(&mut c, n);
        assert_eq!(a.slot_of, c.slot_of);
    }
}
