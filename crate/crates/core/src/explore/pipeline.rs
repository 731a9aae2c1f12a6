//! One implementation trial: place, route with PDN derates, time, build the
//! PDN, solve IR, compute metrics and the validity verdict. Errors land in
//! the record instead of aborting, so sweeps always complete.

use crate::explore::metrics::{edp, edp_literal, fmax, total_power, valid};
use crate::explore::RunRecord;
use crate::irsolve::{eiv_percentile, instance_currents, solve_ir};
use crate::netcore::{CellLibrary, Hypergraph, TechProfile};
use crate::pdnet::{build_pdn, extract_resistive_network, floorplan_with_taps, PdnConfig};
use crate::physdes::{place, route, sta, RouteConfig};
use crate::Result;

#[derive(Debug, Clone)]
pub struct PointSpec {
    pub design: String,
    pub lib_id: String,
    pub pdn: PdnConfig,
    pub util: f64,
    pub clkp_ns: f64,
    pub seed: u64,
    pub activity: f64,
    pub edp_literal: bool,
    pub route: RouteConfig,
}

fn blank_record(spec: &PointSpec) -> RunRecord {
    RunRecord {
        design: spec.design.clone(),
        lib: spec.lib_id.clone(),
        pdn: spec.pdn.kind,
        tap_pitch_cpp: spec.pdn.tap_pitch_cpp,
        tap_scheme: spec.pdn.tap_scheme,
        util: spec.util,
        clkp_ns: spec.clkp_ns,
        seed: spec.seed,
        n_inst: 0,
        n_nets: 0,
        n_prim: 0,
        avg_fanout: 0.0,
        n_seq: 0,
        failing_endpoints: 0,
        wns_ns: 0.0,
        tns_ns: 0.0,
        drc_proxy: 0,
        wirelength_um: 0.0,
        area_um2: 0.0,
        achieved_util: 0.0,
        total_power_mw: 0.0,
        fmax_ghz: 0.0,
        edp_mw_ns2: 0.0,
        eiv_p997_v: 0.0,
        valid: false,
        error: None,
    }
}

fn run_point_inner(
    spec: &PointSpec,
    h: &Hypergraph,
    lib: &CellLibrary,
    tech: &TechProfile,
    span: u32,
    rec: &mut RunRecord,
) -> Result<()> {
    let (fp, taps) = floorplan_with_taps(h.n_inst(), span, spec.util, tech, &spec.pdn)?;
    let p = place(h, &fp, span, spec.util, spec.seed)?;
    let derate = |l: u8| spec.pdn.routing_derate(l);
    let r = route(h, &p, tech, &spec.route, &derate);
    let timing = sta(h, lib, Some(&r), tech, spec.clkp_ns)?;

    rec.n_inst = h.n_inst() as u64;
    rec.n_nets = h.edges.len() as u64;
    rec.n_prim = h.n_prim() as u64;
    rec.avg_fanout = h.avg_fanout();
    rec.n_seq = h.n_seq() as u64;
    rec.failing_endpoints = timing.failing_endpoints;
    rec.wns_ns = timing.wns_ns;
    rec.tns_ns = timing.tns_ns;
    rec.drc_proxy = r.drc_proxy();
    rec.wirelength_um = r.total_wirelength_um();
    rec.area_um2 = fp.area_um2();
    rec.achieved_util = p.achieved_utilization();

    let f = fmax(spec.clkp_ns, timing.wns_ns)?;
    rec.fmax_ghz = f;
    rec.total_power_mw = total_power(h, lib, f, spec.activity)?;
    rec.edp_mw_ns2 = if spec.edp_literal {
        edp_literal(rec.total_power_mw, f)
    } else {
        edp(rec.total_power_mw, f)?
    };

    let mesh = build_pdn(&spec.pdn, &fp, tech, taps.as_ref())?;
    let net = extract_resistive_network(&mesh, h, &p, &spec.pdn)?;
    let loads = instance_currents(h, lib, f, spec.activity, tech.vop_v)?;
    let ir = solve_ir(&net, &loads, tech.vop_v)?;
    rec.eiv_p997_v = eiv_percentile(&ir, 0.997)?;
    rec.valid = valid(rec, tech.vop_v)?;
    Ok(())
}

/// A record carrying only the grid-point identity and an error message.
pub(crate) fn error_record(spec: &PointSpec, msg: impl Into<String>) -> RunRecord {
    let mut rec = blank_record(spec);
    rec.error = Some(msg.into());
    rec
}

/// Runs the full pipeline for one grid point. Pipeline failures are captured
/// in the record's `error` field.
pub fn run_point(
    spec: &PointSpec,
    h: &Hypergraph,
    lib: &CellLibrary,
    tech: &TechProfile,
    span: u32,
) -> RunRecord {
    let mut rec = blank_record(spec);
    if let Err(e) = run_point_inner(spec, h, lib, tech, span, &mut rec) {
        rec.error = Some(e.to_string());
        rec.valid = false;
    }
    rec
}

/// Validity handling for utilization exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidityRule {
    /// The three-part predicate at the library's operating voltage.
    Standard,
    ForceTrue,
    ForceFalse,
}

/// Maximum placement utilization among valid runs over the util x clkp
/// grid, or None when no run is valid. Grid points run independently (in
/// parallel when enabled).
pub fn achievable_utilization(
    design: &str,
    h: &Hypergraph,
    lib: &CellLibrary,
    tech: &TechProfile,
    span: u32,
    pdn: &PdnConfig,
    util_grid: &[f64],
    clkp_grid: &[f64],
    seed: u64,
    rule: ValidityRule,
) -> Option<f64> {
    let points: Vec<(f64, f64)> = util_grid
        .iter()
        .flat_map(|&u| clkp_grid.iter().map(move |&c| (u, c)))
        .collect();
    let records = crate::par::map_slice(&points, |&(util, clkp_ns)| {
        let spec = PointSpec {
            design: design.to_string(),
            lib_id: String::new(),
            pdn: pdn.clone(),
            util,
            clkp_ns,
            seed,
            activity: 0.2,
            edp_literal: false,
            route: RouteConfig::default(),
        };
        run_point(&spec, h, lib, tech, span)
    });
    records
        .into_iter()
        .filter(|r| match rule {
            ValidityRule::Standard => r.has_outputs() && r.valid,
            ValidityRule::ForceTrue => true,
            ValidityRule::ForceFalse => false,
        })
        .map(|r| r.util)
        .fold(None, |acc: Option<f64>, u| Some(acc.map_or(u, |a| a.max(u))))
}

/// The default exploration grids: utilization 0.70..=0.94 step 0.02 and
/// clock period 0.12..=0.24 ns step 0.02.
pub fn default_util_grid() -> Vec<f64> {
    (0..13).map(|i| 0.70 + 0.02 * i as f64).collect()
}

pub fn default_clkp_grid() -> Vec<f64> {
    (0..7).map(|i| 0.12 + 0.02 * i as f64).collect()
}
