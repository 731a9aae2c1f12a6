//! Power tap cell insertion. Taps are double-height blocks bridging PDN
//! tiers: 2CPP wide for the buried-rail bridge, 6CPP for the backside
//! bridge (sized by the ~90nm TSV and its 50nm keepout ring). Column
//! placement repeats the tap columns on every two placement rows; Staggered
//! places them on every four rows with successive row-pairs offset by half
//! the tap pitch.

use crate::pdnet::config::{tap_width_cpp, PdnKind, TapScheme};
use crate::physdes::Floorplan;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TapCell {
    /// Lower of the two rows the double-height tap occupies.
    pub row: usize,
    /// Leftmost site.
    pub site: usize,
    pub width_sites: usize,
    /// Power-Ground-Power when the bottom rail is VDD, else Ground-Power-Ground.
    pub starts_with_vdd: bool,
}

#[derive(Debug, Clone)]
pub struct TapPlan {
    pub taps: Vec<TapCell>,
    /// (row, site) pairs the placer must avoid; includes any keepout-ring
    /// sites extending beyond the tap footprint.
    pub keepouts: Vec<(usize, usize)>,
}

/// Keepout half-width in sites for the backside tap's TSV ring. The ring
/// (TSV width + 2 * ring spacing) normally fits inside the 6CPP tap, so no
/// extra sites are reserved with the default geometry.
fn ring_extra_sites(kind: PdnKind, cpp_nm: f64, ring_nm: f64) -> usize {
    if kind != PdnKind::Bs {
        return 0;
    }
    let tsv_w_nm = 90.0;
    let ring_span = tsv_w_nm + 2.0 * ring_nm;
    let tap_span = tap_width_cpp(kind) as f64 * cpp_nm;
    if ring_span <= tap_span {
        0
    } else {
        (((ring_span - tap_span) / 2.0) / cpp_nm).ceil() as usize
    }
}

/// Inserts tap cells for the two PDN options that need them.
pub fn insert_tap_cells(
    fp: &Floorplan,
    kind: PdnKind,
    pitch_cpp: u32,
    scheme: TapScheme,
) -> Result<TapPlan> {
    insert_tap_cells_with_ring(fp, kind, pitch_cpp, scheme, 50.0)
}

pub fn insert_tap_cells_with_ring(
    fp: &Floorplan,
    kind: PdnKind,
    pitch_cpp: u32,
    scheme: TapScheme,
    ring_nm: f64,
) -> Result<TapPlan> {
    if !kind.needs_taps() {
        return Err(Error::PdnConfig(format!("{} does not take tap cells", kind.id())));
    }
    let width = tap_width_cpp(kind) as usize;
    if (pitch_cpp as usize) < width {
        return Err(Error::PdnConfig(format!(
            "tap pitch {pitch_cpp} smaller than tap width {width}"
        )));
    }
    let row_step = match scheme {
        TapScheme::Column => 2,
        TapScheme::Staggered => 4,
    };
    if fp.rows < 2 || fp.sites_per_row < width {
        return Err(Error::PdnConfig("floorplan too small for any tap".into()));
    }

    let extra = ring_extra_sites(kind, fp.cpp_nm, ring_nm);
    let mut taps = Vec::new();
    let mut keepouts = Vec::new();
    let mut pair_idx = 0usize;
    let mut row = 0usize;
    while row + 1 < fp.rows {
        let offset = match scheme {
            TapScheme::Column => 0,
            TapScheme::Staggered => (pair_idx % 2) * (pitch_cpp as usize / 2),
        };
        let mut site = offset;
        while site + width <= fp.sites_per_row {
            taps.push(TapCell {
                row,
                site,
                width_sites: width,
                starts_with_vdd: row % 2 == 0,
            });
            let lo = site.saturating_sub(extra);
            let hi = (site + width + extra).min(fp.sites_per_row);
            for r in row..row + 2 {
                for s in lo..hi {
                    keepouts.push((r, s));
                }
            }
            site += pitch_cpp as usize;
        }
        row += row_step;
        pair_idx += 1;
    }
    if taps.is_empty() {
        return Err(Error::PdnConfig("floorplan too small for any tap".into()));
    }
    Ok(TapPlan { taps, keepouts })
}

/// Sizes a floorplan for `n_cells` at `util` with tap keepouts already
/// carved out. The core grows until the usable slots still meet the
/// utilization target after tap insertion.
pub fn floorplan_with_taps(
    n_cells: usize,
    span_sites: u32,
    util: f64,
    tech: &crate::netcore::TechProfile,
    cfg: &crate::pdnet::config::PdnConfig,
) -> Result<(Floorplan, Option<TapPlan>)> {
    if !cfg.kind.needs_taps() {
        return Ok((Floorplan::sized_for(n_cells, span_sites, util, tech)?, None));
    }
    let pitch = cfg.tap_pitch_cpp.unwrap();
    let scheme = cfg.tap_scheme.unwrap();
    let mut extra = 0usize;
    for _ in 0..6 {
        let mut fp = Floorplan::sized_for(n_cells + extra, span_sites, util, tech)?;
        let plan = insert_tap_cells(&fp, cfg.kind, pitch, scheme)?;
        for &(r, s) in &plan.keepouts {
            fp.add_keepout_rect(r, 1, s, 1);
        }
        // Count slots lost to keepouts and check capacity at the target.
        let slots_per_row = fp.sites_per_row / span_sites as usize;
        let mut blocked = 0usize;
        for row in 0..fp.rows {
            for col in 0..slots_per_row {
                let s0 = col * span_sites as usize;
                if (s0..s0 + span_sites as usize).any(|s| fp.is_keepout(row, s)) {
                    blocked += 1;
                }
            }
        }
        let usable = fp.rows * slots_per_row - blocked;
        let needed = (n_cells as f64 / util).ceil() as usize;
        if usable >= needed {
            return Ok((fp, Some(plan)));
        }
        extra += needed - usable + 1;
    }
    Err(Error::Capacity("could not fit taps and cells at the requested utilization".into()))
}

/// Closed-form tap count used as the test oracle.
pub fn expected_tap_count(
    rows: usize,
    sites: usize,
    kind: PdnKind,
    pitch_cpp: u32,
    scheme: TapScheme,
) -> usize {
    let width = tap_width_cpp(kind) as usize;
    let row_step = match scheme {
        TapScheme::Column => 2,
        TapScheme::Staggered => 4,
    };
    let mut count = 0;
    let mut pair_idx = 0;
    let mut row = 0;
    while row + 1 < rows {
        let offset = match scheme {
            TapScheme::Column => 0,
            TapScheme::Staggered => (pair_idx % 2) * (pitch_cpp as usize / 2),
        };
        if sites >= offset + width {
            count += (sites - offset - width) / pitch_cpp as usize + 1;
        }
        row += row_step;
        pair_idx += 1;
    }
    count
}
