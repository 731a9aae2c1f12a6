//! The swap-threshold routability protocol: place once, walk an increasing
//! swap-multiple grid with one cumulative swap stream, route at every
//! checkpoint, and report the smallest multiple whose DRC proxy crosses the
//! failure threshold.

use crate::netcore::{Hypergraph, TechProfile};
use crate::pdnet::PdnConfig;
use crate::physdes::floorplan::Floorplan;
use crate::physdes::place::place;
use crate::physdes::route::{route, RouteConfig};
use crate::physdes::tangle::TangleStream;
use crate::Result;

#[derive(Debug, Clone)]
pub struct KthConfig {
    pub drc_threshold: u64,
    /// Increasing swap multiples; the default walks 1..=64.
    pub k_grid: Vec<f64>,
    pub route: RouteConfig,
    pub util: f64,
}

impl Default for KthConfig {
    fn default() -> Self {
        Self {
            drc_threshold: 500,
            k_grid: (1..=64).map(|k| k as f64).collect(),
            route: RouteConfig::default(),
            util: 0.6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KthOutcome {
    /// Smallest checkpoint whose DRC proxy exceeded the threshold.
    FailAt(f64),
    /// No failure up to the last checkpoint.
    ExceedsMax(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct KthRow {
    pub k: f64,
    pub overflow: u64,
    pub wirelength_nm: f64,
}

#[derive(Debug, Clone)]
pub struct KthReport {
    pub rows: Vec<KthRow>,
    pub outcome: KthOutcome,
    pub achieved_util: f64,
}

impl KthReport {
    pub fn kth_value(&self) -> Option<f64> {
        match self.outcome {
            KthOutcome::FailAt(k) => Some(k),
            KthOutcome::ExceedsMax(_) => None,
        }
    }

    /// CSV dump: `k,overflow,wirelength`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,overflow,wirelength\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{:.1}\n", r.k, r.overflow, r.wirelength_nm));
        }
        out
    }
}

/// Runs the protocol on a width-regularized netlist. The floorplan is sized
/// for `cfg.util`; capacity derates come from the PDN configuration.
pub fn kth(
    h: &Hypergraph,
    span: u32,
    tech: &TechProfile,
    pdn: &PdnConfig,
    seed: u64,
    cfg: &KthConfig,
) -> Result<KthReport> {
    let fp = Floorplan::sized_for(h.n_inst(), span, cfg.util, tech)?;
    kth_on_floorplan(h, span, tech, pdn, seed, cfg, &fp)
}

/// Same protocol on a caller-provided floorplan (taps already inserted).
pub fn kth_on_floorplan(
    h: &Hypergraph,
    span: u32,
    tech: &TechProfile,
    pdn: &PdnConfig,
    seed: u64,
    cfg: &KthConfig,
    fp: &Floorplan,
) -> Result<KthReport> {
    let mut p = place(h, fp, span, cfg.util, seed)?;
    let achieved_util = p.achieved_utilization();
    let n = p.n_placed();
    let derate = |l: u8| pdn.routing_derate(l);

    let mut stream = TangleStream::new(&p, seed);
    let mut applied = 0usize;
    let mut rows = Vec::with_capacity(cfg.k_grid.len());
    let mut outcome = None;
    for &k in &cfg.k_grid {
        let want = (k * n as f64).round() as usize;
        stream.apply(&mut p, want.saturating_sub(applied));
        applied = applied.max(want);
        let r = route(h, &p, tech, &cfg.route, &derate);
        rows.push(KthRow { k, overflow: r.overflow_count, wirelength_nm: r.total_wirelength_nm });
        if r.overflow_count > cfg.drc_threshold {
            outcome = Some(KthOutcome::FailAt(k));
            break;
        }
    }
    let outcome =
        outcome.unwrap_or(KthOutcome::ExceedsMax(cfg.k_grid.last().copied().unwrap_or(0.0)));
    Ok(KthReport { rows, outcome, achieved_util })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angen::generate_netlist;
    use crate::netcore::{width_regularize_naive, LibPreset, TopoParams};
    use crate::pdnet::PdnKind;

    fn fixture() -> (crate::netcore::Hypergraph, TechProfile) {
        let (lib, tech) = LibPreset::Lib2.load();
        let params = TopoParams::new(400, 16, 2.3, 0.6, 5.0, 0.12);
        let h = generate_netlist(&params, &lib, 11).unwrap();
        (width_regularize_naive(&h, &lib), tech)
    }

    #[test]
    fn forced_failure_fails_at_first_checkpoint() {
        let (h, tech) = fixture();
        let pdn = PdnConfig::new(PdnKind::Fs, None, None).unwrap();
        let mut cfg = KthConfig::default();
        cfg.route.capacity_scale = 0.0;
        let rep = kth(&h, 12, &tech, &pdn, 1, &cfg).unwrap();
        assert_eq!(rep.outcome, KthOutcome::FailAt(1.0));
        assert_eq!(rep.rows.len(), 1);
    }

    #[test]
    fn forced_pass_returns_sentinel() {
        let (h, tech) = fixture();
        let pdn = PdnConfig::new(PdnKind::Fs, None, None).unwrap();
        let mut cfg = KthConfig::default();
        cfg.route.capacity_scale = 1e6;
        cfg.k_grid = (1..=4).map(|k| k as f64).collect();
        let rep = kth(&h, 12, &tech, &pdn, 1, &cfg).unwrap();
        assert_eq!(rep.outcome, KthOutcome::ExceedsMax(4.0));
        assert!(rep.kth_value().is_none());
        assert_eq!(rep.rows.len(), 4);
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let (h, tech) = fixture();
        let pdn = PdnConfig::new(PdnKind::Fs, None, None).unwrap();
        let cfg = KthConfig { k_grid: (1..=12).map(|k| k as f64).collect(), ..Default::default() };
        let a = kth(&h, 12, &tech, &pdn, 5, &cfg).unwrap();
        let b = kth(&h, 12, &tech, &pdn, 5, &cfg).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.outcome, b.outcome);
    }
}
