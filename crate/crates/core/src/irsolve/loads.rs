//! Per-instance current loads: static analysis at an activity-scaled
//! average current, I = (leakage + dynamic_energy * f * activity) / Vop.

use crate::netcore::{CellLibrary, Hypergraph};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct CurrentLoads {
    /// mA per vertex; zero for IOs and taps.
    pub ma: Vec<f64>,
    pub total_ma: f64,
}

impl CurrentLoads {
    pub fn scaled(&self, factor: f64) -> CurrentLoads {
        CurrentLoads {
            ma: self.ma.iter().map(|i| i * factor).collect(),
            total_ma: self.total_ma * factor,
        }
    }

    pub fn add(&self, other: &CurrentLoads) -> CurrentLoads {
        CurrentLoads {
            ma: self.ma.iter().zip(&other.ma).map(|(a, b)| a + b).collect(),
            total_ma: self.total_ma + other.total_ma,
        }
    }
}

pub fn instance_currents(
    h: &Hypergraph,
    lib: &CellLibrary,
    f_ghz: f64,
    activity: f64,
    vop_v: f64,
) -> Result<CurrentLoads> {
    if !(f_ghz > 0.0) {
        return Err(Error::Metric(format!("f_ghz must be positive, got {f_ghz}")));
    }
    if !(activity > 0.0 && activity <= 1.0) {
        return Err(Error::Metric(format!("activity {activity} outside (0, 1]")));
    }
    let mut ma = vec![0.0; h.vertices.len()];
    let mut total = 0.0;
    for (v, vert) in h.vertices.iter().enumerate() {
        let Some(cell) = vert.cell.as_deref().and_then(|c| lib.get(c)) else { continue };
        let mw = cell.leakage_mw + cell.dyn_energy_mw_per_ghz * f_ghz * activity;
        ma[v] = mw / vop_v;
        total += ma[v];
    }
    Ok(CurrentLoads { ma, total_ma: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::load_library;

    const LIB: &str = "\
tech cpp=45 m0p=24 m1p=30 m2p=24 fin=2 rt=4 pgpin=M0 ch=6 vop=0.7
cell C width=2 seq=0 d0=10 d1=3 leak=0 edyn=0.7
";

    #[test]
    fn unit_current_case() {
        let (lib, _) = load_library(LIB).unwrap();
        let h = crate::netcore::parse_netlist("cell C a\ncell C b\nnet n a.o b.a\n", &lib).unwrap();
        // leak 0, edyn 0.7 mW/GHz, f=1, act=1, vop=0.7 -> 1 mA each.
        let loads = instance_currents(&h, &lib, 1.0, 1.0, 0.7).unwrap();
        assert!((loads.total_ma - 2.0).abs() < 1e-12);
        assert!(loads.ma.iter().all(|&i| (i - 1.0).abs() < 1e-12));
    }

    #[test]
    fn leakage_only_limit() {
        let text = "\
tech cpp=45 m0p=24 m1p=30 m2p=24 fin=2 rt=4 pgpin=M0 ch=6 vop=0.7
cell C width=2 seq=0 d0=10 d1=3 leak=0.07 edyn=0.7
";
        let (lib, _) = load_library(text).unwrap();
        let h = crate::netcore::parse_netlist("cell C a\ncell C b\nnet n a.o b.a\n", &lib).unwrap();
        let tiny = instance_currents(&h, &lib, 1e-9, 0.2, 0.7).unwrap();
        // f -> 0: currents converge to leakage / vop = 0.1 mA.
        assert!((tiny.ma[0] - 0.1).abs() < 1e-6);
        assert!(instance_currents(&h, &lib, 0.0, 0.2, 0.7).is_err());
    }
}
