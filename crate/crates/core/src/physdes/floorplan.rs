//! Row/site floorplan with tap keepouts, and the slot-grid placement model:
//! every placed cell occupies one span-aligned slot of uniform site width,
//! which keeps arbitrary neighbor swaps legality-preserving.

use std::collections::HashSet;

use crate::netcore::{Hypergraph, PlacedPositions, TechProfile};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Floorplan {
    pub rows: usize,
    pub sites_per_row: usize,
    pub row_height_nm: f64,
    pub cpp_nm: f64,
    /// Reserved (row, site) pairs; cells may not overlap them.
    pub keepouts: HashSet<(usize, usize)>,
}

impl Floorplan {
    pub fn new(rows: usize, sites_per_row: usize, tech: &TechProfile) -> Result<Self> {
        if rows < 2 {
            return Err(Error::Capacity("floorplan needs at least 2 rows".into()));
        }
        Ok(Self {
            rows,
            sites_per_row,
            row_height_nm: tech.row_height_nm(),
            cpp_nm: tech.cpp_nm,
            keepouts: HashSet::new(),
        })
    }

    /// Sizes a square-ish core for `n_cells` of `span_sites` each at the
    /// requested placement utilization. Rows and slot counts are searched
    /// near the square aspect so total capacity overshoots the target by as
    /// little as the grid allows (the request then lands within a cell).
    pub fn sized_for(
        n_cells: usize,
        span_sites: u32,
        util: f64,
        tech: &TechProfile,
    ) -> Result<Self> {
        if !(0.0 < util && util <= 1.0) {
            return Err(Error::Capacity(format!("utilization {util} outside (0, 1]")));
        }
        let target_slots = (n_cells as f64 / util).ceil() as usize;
        let rh = tech.row_height_nm();
        let slot_w = span_sites as f64 * tech.cpp_nm;
        let rows0 = ((target_slots as f64 * slot_w / rh).sqrt().round() as usize).max(2);
        let lo = rows0.saturating_sub(rows0 / 6 + 2).max(2);
        let hi = rows0 + rows0 / 6 + 2;
        let mut best: Option<(usize, usize, usize)> = None; // (overshoot, rows, spr)
        for rows in lo..=hi {
            let spr = target_slots.div_ceil(rows).max(1);
            let overshoot = rows * spr - target_slots;
            if best.map_or(true, |(b, _, _)| overshoot < b) {
                best = Some((overshoot, rows, spr));
            }
        }
        let (_, rows, spr) = best.unwrap();
        Self::new(rows, spr * span_sites as usize, tech)
    }

    pub fn core_w_nm(&self) -> f64 {
        self.sites_per_row as f64 * self.cpp_nm
    }

    pub fn core_h_nm(&self) -> f64 {
        self.rows as f64 * self.row_height_nm
    }

    pub fn area_um2(&self) -> f64 {
        self.core_w_nm() * self.core_h_nm() / 1e6
    }

    pub fn total_sites(&self) -> usize {
        self.rows * self.sites_per_row
    }

    pub fn available_sites(&self) -> usize {
        self.total_sites() - self.keepouts.len()
    }

    pub fn add_keepout_rect(&mut self, row0: usize, n_rows: usize, site0: usize, width: usize) {
        for r in row0..(row0 + n_rows).min(self.rows) {
            for s in site0..(site0 + width).min(self.sites_per_row) {
                self.keepouts.insert((r, s));
            }
        }
    }

    pub fn is_keepout(&self, row: usize, site: usize) -> bool {
        self.keepouts.contains(&(row, site))
    }

    fn slot_blocked(&self, row: usize, slot: usize, span: u32) -> bool {
        let s0 = slot * span as usize;
        (s0..s0 + span as usize).any(|s| self.is_keepout(row, s))
    }
}

/// A legal placement on the slot grid. Slots are indexed row-major:
/// `slot = row * slots_per_row + col`, occupying sites
/// `col*span .. col*span+span` of the row.
#[derive(Debug, Clone)]
pub struct Placement {
    pub fp: Floorplan,
    pub span: u32,
    pub slots_per_row: usize,
    /// vertex id -> global slot, None for unplaced (IOs).
    pub slot_of: Vec<Option<usize>>,
    /// global slot -> vertex id.
    pub cell_at: Vec<Option<usize>>,
}

impl Placement {
    pub fn slot_coords(&self, slot: usize) -> (usize, usize) {
        (slot / self.slots_per_row, slot % self.slots_per_row)
    }

    /// Cell center in nm.
    pub fn position_nm(&self, vertex: usize) -> Option<(f64, f64)> {
        let slot = self.slot_of.get(vertex).copied().flatten()?;
        let (row, col) = self.slot_coords(slot);
        let x = (col as f64 * self.span as f64 + self.span as f64 / 2.0) * self.fp.cpp_nm;
        let y = (row as f64 + 0.5) * self.fp.row_height_nm;
        Some((x, y))
    }

    /// Site index (not slot) of a cell's left edge.
    pub fn site_of(&self, vertex: usize) -> Option<(usize, usize)> {
        let slot = self.slot_of.get(vertex).copied().flatten()?;
        let (row, col) = self.slot_coords(slot);
        Some((row, col * self.span as usize))
    }

    pub fn positions(&self) -> PlacedPositions {
        PlacedPositions {
            core_w_nm: self.fp.core_w_nm(),
            core_h_nm: self.fp.core_h_nm(),
            pos: (0..self.slot_of.len()).map(|v| self.position_nm(v)).collect(),
        }
    }

    pub fn n_placed(&self) -> usize {
        self.slot_of.iter().filter(|s| s.is_some()).count()
    }

    /// Occupied sites over available sites.
    pub fn achieved_utilization(&self) -> f64 {
        self.n_placed() as f64 * self.span as f64 / self.fp.available_sites() as f64
    }

    /// No overlaps, no keepout intersections, everything inside the core.
    pub fn check_legal(&self, h: &Hypergraph) -> Result<()> {
        let mut seen = vec![false; self.cell_at.len()];
        for (v, slot) in self.slot_of.iter().enumerate() {
            let Some(slot) = slot else { continue };
            if seen[*slot] {
                return Err(Error::Capacity(format!("slot {slot} doubly occupied")));
            }
            seen[*slot] = true;
            let (row, col) = self.slot_coords(*slot);
            if row >= self.fp.rows || (col + 1) * self.span as usize > self.fp.sites_per_row {
                return Err(Error::Capacity(format!(
                    "cell {} outside the core",
                    h.vertices[v].name
                )));
            }
            if self.fp.slot_blocked(row, col, self.span) {
                return Err(Error::Capacity(format!(
                    "cell {} intersects a keepout",
                    h.vertices[v].name
                )));
            }
            if self.cell_at[*slot] != Some(v) {
                return Err(Error::Capacity("slot_of/cell_at out of sync".into()));
            }
        }
        Ok(())
    }

    /// CSV dump: `vertex_id,row,site`.
    pub fn to_csv(&self, h: &Hypergraph) -> String {
        let mut out = String::from("vertex_id,row,site\n");
        let mut rows: Vec<(usize, usize, &str)> = self
            .slot_of
            .iter()
            .enumerate()
            .filter_map(|(v, s)| s.map(|slot| {
                let (row, col) = self.slot_coords(slot);
                (row, col * self.span as usize, h.vertices[v].name.as_str())
            }))
            .collect();
        rows.sort();
        for (row, site, name) in rows {
            out.push_str(&format!("{name},{row},{site}\n"));
        }
        out
    }

    pub(crate) fn usable_slots_snake(&self) -> Vec<usize> {
        usable_slots_snake(&self.fp, self.span, self.slots_per_row)
    }
}

/// Usable (non-blocked) slots in snake order: even rows left to right, odd
/// rows right to left, so consecutive ordering positions stay adjacent.
pub(crate) fn usable_slots_snake(fp: &Floorplan, span: u32, slots_per_row: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for row in 0..fp.rows {
        let cols: Vec<usize> = if row % 2 == 0 {
            (0..slots_per_row).collect()
        } else {
            (0..slots_per_row).rev().collect()
        };
        for col in cols {
            if !fp.slot_blocked(row, col, span) {
                out.push(row * slots_per_row + col);
            }
        }
    }
    out
}
