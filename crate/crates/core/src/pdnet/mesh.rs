//! PDN mesh construction and resistive-network extraction.
//!
//! Frontside configurations instantiate M3..M13 stripe pairs from the
//! geometry table; backside configurations instantiate BM1/BM2 with the top
//! frontside geometry and leave the frontside free. Rails run per placement
//! row on M0 (or as buried rails at lower resistance). Extraction
//! discretizes every conductor at its crossings, inserts via/TSV resistances
//! there, attaches instances at their site midpoints on both adjacent rails,
//! and marks ideal-voltage pads at same-net crossings of the top two layers.

use std::collections::HashMap;

use crate::netcore::{Hypergraph, TechProfile};
use crate::pdnet::config::{PdnConfig, PdnKind};
use crate::pdnet::network::{Rail, ResistiveNetwork};
use crate::pdnet::taps::{insert_tap_cells, TapCell, TapPlan};
use crate::physdes::{Floorplan, Placement};
use crate::{Error, Result};

/// Layer codes: 0 = rail tier (M0 or buried), 3..=13 frontside metals,
/// 21/22 backside metals BM1/BM2.
pub const LAYER_BM1: u8 = 21;
pub const LAYER_BM2: u8 = 22;

#[derive(Debug, Clone, Copy)]
pub struct Stripe {
    pub layer: u8,
    pub rail: Rail,
    /// Centerline position in nm: x for vertical stripes, y for horizontal.
    pub center_nm: f64,
    pub width_nm: f64,
    pub vertical: bool,
}

#[derive(Debug, Clone)]
pub struct PdnMesh {
    pub kind: PdnKind,
    pub stripes: Vec<Stripe>,
    pub taps: Vec<TapCell>,
    pub core_w_nm: f64,
    pub core_h_nm: f64,
    pub rows: usize,
}

fn layer_vertical(layer: u8) -> bool {
    match layer {
        LAYER_BM1 => false,
        LAYER_BM2 => true,
        l => l % 2 == 1,
    }
}

fn emit_pairs(stripes: &mut Vec<Stripe>, layer: u8, pitch_nm: f64, width_nm: f64, spacing_nm: f64, axis_len_nm: f64) {
    let vertical = layer_vertical(layer);
    let mut i = 0.0;
    loop {
        let vdd = i * pitch_nm + width_nm / 2.0;
        let vss = i * pitch_nm + 1.5 * width_nm + spacing_nm;
        if vss + width_nm / 2.0 > axis_len_nm {
            break;
        }
        stripes.push(Stripe { layer, rail: Rail::Vdd, center_nm: vdd, width_nm, vertical });
        stripes.push(Stripe { layer, rail: Rail::Vss, center_nm: vss, width_nm, vertical });
        i += 1.0;
    }
}

/// Builds the stripe mesh for a configuration. Tap sites come from the
/// supplied plan, or are computed from the config for the two tapped kinds.
pub fn build_pdn(
    cfg: &PdnConfig,
    fp: &Floorplan,
    tech: &TechProfile,
    taps: Option<&TapPlan>,
) -> Result<PdnMesh> {
    cfg.validate()?;
    let _ = tech;
    let core_w = fp.core_w_nm();
    let core_h = fp.core_h_nm();
    let mut stripes = Vec::new();
    if cfg.kind.backside() {
        // BM1/BM2 reuse the top-group geometry.
        let top = cfg
            .stripes
            .iter()
            .find(|r| r.hi_layer >= 12)
            .ok_or_else(|| Error::PdnConfig("stripe table lacks a top-layer row".into()))?;
        emit_pairs(&mut stripes, LAYER_BM1, top.pitch_um * 1e3, top.width_um * 1e3, top.spacing_um * 1e3, core_h);
        emit_pairs(&mut stripes, LAYER_BM2, top.pitch_um * 1e3, top.width_um * 1e3, top.spacing_um * 1e3, core_w);
    } else {
        for row in &cfg.stripes {
            for layer in row.lo_layer..=row.hi_layer {
                let axis = if layer_vertical(layer) { core_w } else { core_h };
                emit_pairs(&mut stripes, layer, row.pitch_um * 1e3, row.width_um * 1e3, row.spacing_um * 1e3, axis);
            }
        }
    }
    let taps = match (cfg.kind.needs_taps(), taps) {
        (true, Some(plan)) => plan.taps.clone(),
        (true, None) => {
            insert_tap_cells(fp, cfg.kind, cfg.tap_pitch_cpp.unwrap(), cfg.tap_scheme.unwrap())?
                .taps
        }
        (false, _) => Vec::new(),
    };
    Ok(PdnMesh { kind: cfg.kind, stripes, taps, core_w_nm: core_w, core_h_nm: core_h, rows: fp.rows })
}

fn sheet_res(cfg: &PdnConfig, layer: u8) -> f64 {
    let e = &cfg.electrical;
    match layer {
        3 => e.sheet_res_m3,
        4 => e.sheet_res_m4,
        5..=11 => e.sheet_res_mid,
        _ => e.sheet_res_top,
    }
}

fn via_ohms(cfg: &PdnConfig, lower: u8) -> f64 {
    let e = &cfg.electrical;
    match lower {
        3 => e.via_lo_ohm,          // V3
        4..=11 => e.via_mid_ohm,    // V4..V11
        _ => e.via_top_ohm,         // V12 and the backside via tier
    }
}

struct Extractor {
    conductors: Vec<Conductor>,
    points: Vec<Vec<i64>>,
    pending: Vec<(usize, i64, usize, i64, f64)>,
    pad_marks: Vec<(usize, i64)>,
}

struct Conductor {
    rail: Rail,
    center_nm: f64,
    res_per_nm: f64,
}

impl Extractor {
    fn point(&mut self, c: usize, pos: f64) -> (usize, i64) {
        let key = pos.round() as i64;
        self.points[c].push(key);
        (c, key)
    }

    fn resistor(&mut self, a: (usize, i64), b: (usize, i64), ohms: f64) {
        self.pending.push((a.0, a.1, b.0, b.1, ohms));
    }
}

/// Extracts the nodal conductance network for a built mesh over a placement.
pub fn extract_resistive_network(
    mesh: &PdnMesh,
    h: &Hypergraph,
    p: &Placement,
    cfg: &PdnConfig,
) -> Result<ResistiveNetwork> {
    let e = &cfg.electrical;
    let rail_res_per_nm = if cfg.kind.buried_rails() {
        e.bpr_rail_ohm_per_um / 1000.0
    } else {
        e.m0_rail_ohm_per_um / 1000.0
    };

    let mut ex = Extractor {
        conductors: Vec::new(),
        points: Vec::new(),
        pending: Vec::new(),
        pad_marks: Vec::new(),
    };
    // Rails first: conductor r for rail line r at y = r*row_height.
    let n_rails = mesh.rows + 1;
    for r in 0..n_rails {
        ex.conductors.push(Conductor {
            rail: if r % 2 == 0 { Rail::Vdd } else { Rail::Vss },
            center_nm: r as f64 * p.fp.row_height_nm,
            res_per_nm: rail_res_per_nm,
        });
    }
    let stripe_base = n_rails;
    for s in &mesh.stripes {
        ex.conductors.push(Conductor {
            rail: s.rail,
            center_nm: s.center_nm,
            res_per_nm: sheet_res(cfg, s.layer) / s.width_nm,
        });
    }
    for _ in 0..ex.conductors.len() {
        ex.points.push(Vec::new());
    }

    // Stripe index by layer for crossings and nearest-stripe lookups.
    let mut by_layer: HashMap<u8, Vec<usize>> = HashMap::new();
    for (i, s) in mesh.stripes.iter().enumerate() {
        by_layer.entry(s.layer).or_default().push(i);
    }

    // Same-net crossings between consecutive layers of the stack.
    let stack: Vec<(u8, u8)> = if mesh.kind.backside() {
        vec![(LAYER_BM1, LAYER_BM2)]
    } else {
        (3u8..13).map(|l| (l, l + 1)).collect()
    };
    let top_pair = *stack.last().unwrap();
    for &(lo, hi) in &stack {
        let (Some(lo_idx), Some(hi_idx)) = (by_layer.get(&lo), by_layer.get(&hi)) else {
            continue;
        };
        let ohms = via_ohms(cfg, lo);
        for &a in lo_idx {
            for &b in hi_idx {
                let (sa, sb) = (&mesh.stripes[a], &mesh.stripes[b]);
                if sa.rail != sb.rail || sa.vertical == sb.vertical {
                    continue;
                }
                let (v, hz) = if sa.vertical { (a, b) } else { (b, a) };
                let (sv, sh) = (&mesh.stripes[v], &mesh.stripes[hz]);
                let pa = ex.point(stripe_base + v, sh.center_nm);
                let pb = ex.point(stripe_base + hz, sv.center_nm);
                ex.resistor(pa, pb, ohms);
                if (lo, hi) == top_pair {
                    // Pads live on the top layer at same-net crossings.
                    let top_side = if mesh.stripes[v].layer == hi { pa } else { pb };
                    ex.pad_marks.push(top_side);
                }
            }
        }
    }

    // Rail connections per configuration.
    let nearest_same_rail = |layer: u8, rail: Rail, pos: f64| -> Option<usize> {
        by_layer.get(&layer).and_then(|list| {
            list.iter()
                .copied()
                .filter(|&i| mesh.stripes[i].rail == rail)
                .min_by(|&a, &b| {
                    let da = (mesh.stripes[a].center_nm - pos).abs();
                    let db = (mesh.stripes[b].center_nm - pos).abs();
                    da.partial_cmp(&db).unwrap()
                })
        })
    };

    match mesh.kind {
        PdnKind::Fs => {
            // Every same-net M3 crossing taps the rail through the V0-V2 stack.
            if let Some(m3) = by_layer.get(&3) {
                for r in 0..n_rails {
                    let ry = ex.conductors[r].center_nm;
                    let rail = ex.conductors[r].rail;
                    for &si in m3 {
                        let s = &mesh.stripes[si];
                        if s.rail != rail {
                            continue;
                        }
                        let pa = ex.point(r, s.center_nm);
                        let pb = ex.point(stripe_base + si, ry);
                        ex.resistor(pa, pb, 3.0 * e.via_lo_ohm);
                    }
                }
            }
        }
        PdnKind::Fb => {
            // Buried rails reach the frontside stack through tap nano-TSVs
            // (1:7 aspect) plus the V1-V2 stack onto the nearest M3 stripe.
            let tsv = e.tsv_resistance_ohm(7.0) + 2.0 * e.via_lo_ohm;
            for tap in &mesh.taps {
                let x = (tap.site as f64 + tap.width_sites as f64 / 2.0) * p.fp.cpp_nm;
                for r in tap.row..=(tap.row + 2).min(n_rails - 1) {
                    let rail = ex.conductors[r].rail;
                    let ry = ex.conductors[r].center_nm;
                    if let Some(si) = nearest_same_rail(3, rail, x) {
                        let pa = ex.point(r, x);
                        let pb = ex.point(stripe_base + si, ry);
                        ex.resistor(pa, pb, tsv);
                    }
                }
            }
        }
        PdnKind::Bs => {
            // Backside reaches M0 rails through tap nano-TSVs (1:10 aspect).
            let tsv = e.tsv_resistance_ohm(10.0);
            for tap in &mesh.taps {
                let x = (tap.site as f64 + tap.width_sites as f64 / 2.0) * p.fp.cpp_nm;
                for r in tap.row..=(tap.row + 2).min(n_rails - 1) {
                    let rail = ex.conductors[r].rail;
                    let ry = ex.conductors[r].center_nm;
                    if let Some(si) = nearest_same_rail(LAYER_BM1, rail, ry) {
                        let pa = ex.point(r, x);
                        let pb = ex.point(stripe_base + si, x);
                        ex.resistor(pa, pb, tsv);
                    }
                }
            }
        }
        PdnKind::Bb => {
            // Buried rails connect straight down at a configurable pitch.
            let tsv = e.tsv_resistance_ohm(10.0);
            let pitch_nm = e.bb_tsv_pitch_cpp as f64 * p.fp.cpp_nm;
            for r in 0..n_rails {
                let rail = ex.conductors[r].rail;
                let ry = ex.conductors[r].center_nm;
                let mut x = pitch_nm / 2.0;
                while x < mesh.core_w_nm {
                    if let Some(si) = nearest_same_rail(LAYER_BM1, rail, ry) {
                        let pa = ex.point(r, x);
                        let pb = ex.point(stripe_base + si, x);
                        ex.resistor(pa, pb, tsv);
                    }
                    x += pitch_nm;
                }
            }
        }
    }

    // Instance attachments on both adjacent rails at the site midpoint.
    let mut net = ResistiveNetwork::new(h.vertices.len());
    let mut attach: Vec<(usize, (usize, i64), (usize, i64))> = Vec::new();
    for v in 0..h.vertices.len() {
        let Some((x, _)) = p.position_nm(v) else { continue };
        let Some((row, _)) = p.site_of(v) else { continue };
        let below = ex.point(row, x);
        let above = ex.point(row + 1, x);
        let (vdd, vss) = if row % 2 == 0 { (below, above) } else { (above, below) };
        attach.push((v, vdd, vss));
    }

    // Materialize nodes per conductor and chain segment conductances.
    let mut node_of: HashMap<(usize, i64), usize> = HashMap::new();
    for (c, pts) in ex.points.iter_mut().enumerate() {
        pts.sort_unstable();
        pts.dedup();
        let rail = ex.conductors[c].rail;
        let mut prev: Option<(i64, usize)> = None;
        for &pos in pts.iter() {
            let n = net.add_node(rail);
            node_of.insert((c, pos), n);
            if let Some((ppos, pn)) = prev {
                let len = (pos - ppos) as f64;
                if len > 0.0 {
                    net.add_resistor(pn, n, ex.conductors[c].res_per_nm * len)?;
                }
            }
            prev = Some((pos, n));
        }
    }
    for (ca, pa, cb, pb, ohms) in ex.pending {
        let a = node_of[&(ca, pa)];
        let b = node_of[&(cb, pb)];
        net.add_resistor(a, b, ohms)?;
    }
    for (c, pos) in ex.pad_marks {
        net.mark_pad(node_of[&(c, pos)]);
    }
    for (v, vdd, vss) in attach {
        net.attach_instance(v, node_of[&vdd], node_of[&vss]);
    }

    net.validate_connectivity()?;
    Ok(net)
}
