//! PPAC metrics: maximum achievable frequency, total power, energy-delay
//! product, and the three-part valid-run predicate.

use crate::explore::RunRecord;
use crate::irsolve::ir_valid;
use crate::netcore::{CellLibrary, Hypergraph};
use crate::{Error, Result};

/// f_max = 1 / (clkp - WNS) in GHz for ns inputs.
pub fn fmax(clkp_ns: f64, wns_ns: f64) -> Result<f64> {
    let period = clkp_ns - wns_ns;
    if period <= 0.0 {
        return Err(Error::Metric(format!(
            "nonpositive effective period: clkp {clkp_ns} - wns {wns_ns}"
        )));
    }
    Ok(1.0 / period)
}

/// Leakage plus activity-scaled dynamic power over all instances, in mW.
pub fn total_power(h: &Hypergraph, lib: &CellLibrary, f_ghz: f64, activity: f64) -> Result<f64> {
    if !(f_ghz > 0.0) {
        return Err(Error::Metric(format!("f_ghz must be positive, got {f_ghz}")));
    }
    let mut mw = 0.0;
    for v in &h.vertices {
        if let Some(cell) = v.cell.as_deref().and_then(|c| lib.get(c)) {
            mw += cell.leakage_mw + cell.dyn_energy_mw_per_ghz * f_ghz * activity;
        }
    }
    Ok(mw)
}

/// Energy-delay product as power times the squared effective period,
/// mW * ns^2. Lower is better.
pub fn edp(power_mw: f64, fmax_ghz: f64) -> Result<f64> {
    if !(fmax_ghz > 0.0) {
        return Err(Error::Metric(format!("fmax must be positive, got {fmax_ghz}")));
    }
    Ok(power_mw / (fmax_ghz * fmax_ghz))
}

/// The literal power-times-frequency-squared reading, kept behind a flag for
/// comparison (its units are not mW * ns^2).
pub fn edp_literal(power_mw: f64, fmax_ghz: f64) -> f64 {
    power_mw * fmax_ghz * fmax_ghz
}

/// WNS threshold in ns; strict inequality with a femtosecond guard so the
/// -50ps boundary itself is invalid regardless of binary rounding.
const WNS_LIMIT_NS: f64 = -0.050;

/// The valid-run predicate: WNS above -50ps, DRC proxy below 500, and the
/// 99.7th-percentile effective instance voltage above 80% of Vop. A pure
/// conjunction of exactly these three.
pub fn valid(rec: &RunRecord, vop_v: f64) -> Result<bool> {
    if !rec.has_outputs() {
        return Err(Error::Metric("record has no outputs".into()));
    }
    Ok(rec.wns_ns > WNS_LIMIT_NS + 1e-9
        && rec.drc_proxy < 500
        && ir_valid(rec.eiv_p997_v, vop_v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::record::tests_support::sample_record;

    #[test]
    fn fmax_cases() {
        assert!((fmax(0.2, 0.0).unwrap() - 5.0).abs() < 1e-12);
        assert!((fmax(0.2, -0.05).unwrap() - 4.0).abs() < 1e-12);
        assert!(fmax(0.2, 0.2).is_err());
    }

    #[test]
    fn power_cases() {
        use crate::netcore::load_library;
        let text = "\
tech cpp=45 m0p=24 m1p=30 m2p=24 fin=2 rt=4 pgpin=M0 ch=6 vop=0.7
cell C width=2 seq=0 d0=10 d1=3 leak=0.001 edyn=0.5
";
        let (lib, _) = load_library(text).unwrap();
        let h = crate::netcore::parse_netlist("cell C a\ncell C b\nnet n a.o b.a\n", &lib).unwrap();
        let p = total_power(&h, &lib, 2.0, 0.5).unwrap();
        assert!((p - 2.0 * 0.501).abs() < 1e-12);
        // f -> 0 limit: leakage only.
        let p0 = total_power(&h, &lib, 1e-12, 0.5).unwrap();
        assert!((p0 - 0.002).abs() < 1e-9);
        assert!(total_power(&h, &lib, 0.0, 0.5).is_err());
    }

    #[test]
    fn power_matches_current_cross_check() {
        use crate::irsolve::instance_currents;
        use crate::netcore::LibPreset;
        let (lib, tech) = LibPreset::Lib2.load();
        let params = crate::netcore::TopoParams::new(300, 12, 2.2, 0.5, 4.5, 0.1);
        let h = crate::angen::generate_netlist(&params, &lib, 8).unwrap();
        let p = total_power(&h, &lib, 5.0, 0.2).unwrap();
        let loads = instance_currents(&h, &lib, 5.0, 0.2, tech.vop_v).unwrap();
        assert!((loads.total_ma * tech.vop_v - p).abs() < 1e-9 * p);
    }

    #[test]
    fn edp_cases() {
        assert!((edp(10.0, 2.0).unwrap() - 2.5).abs() < 1e-12);
        // doubling fmax at fixed power quarters EDP
        let e1 = edp(8.0, 1.5).unwrap();
        let e2 = edp(8.0, 3.0).unwrap();
        assert!((e1 / e2 - 4.0).abs() < 1e-12);
        // the literal reading is available but distinct
        assert!((edp_literal(10.0, 2.0) - 40.0).abs() < 1e-12);
    }

    #[test]
    fn validity_boundaries() {
        let mut r = sample_record();
        r.wns_ns = -0.049;
        r.drc_proxy = 499;
        r.eiv_p997_v = 0.561;
        assert!(valid(&r, 0.7).unwrap());

        r.wns_ns = -0.050;
        assert!(!valid(&r, 0.7).unwrap());
        r.wns_ns = -0.049;

        r.drc_proxy = 500;
        assert!(!valid(&r, 0.7).unwrap());
        r.drc_proxy = 499;

        r.eiv_p997_v = 0.56;
        assert!(!valid(&r, 0.7).unwrap());

        r.eiv_p997_v = 0.561;
        r.error = Some("boom".into());
        assert!(valid(&r, 0.7).is_err());
    }
}
