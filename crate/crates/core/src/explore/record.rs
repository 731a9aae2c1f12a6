//! Run records: one implementation trial through the full pipeline, plus
//! CSV persistence. Rows never contain commas in free-text fields (error
//! messages are sanitized), so the format stays a plain line-per-row CSV.

use crate::pdnet::{PdnKind, TapScheme};
use crate::{Error, Result};

/// One pipeline trial. Inputs identify the grid point; outputs are present
/// only when the pipeline completed (`error` is `None`).
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    // inputs
    pub design: String,
    pub lib: String,
    pub pdn: PdnKind,
    pub tap_pitch_cpp: Option<u32>,
    pub tap_scheme: Option<TapScheme>,
    pub util: f64,
    pub clkp_ns: f64,
    pub seed: u64,
    // design stats (populated with outputs)
    pub n_inst: u64,
    pub n_nets: u64,
    pub n_prim: u64,
    pub avg_fanout: f64,
    pub n_seq: u64,
    pub failing_endpoints: u64,
    // outputs
    pub wns_ns: f64,
    pub tns_ns: f64,
    pub drc_proxy: u64,
    pub wirelength_um: f64,
    pub area_um2: f64,
    pub achieved_util: f64,
    pub total_power_mw: f64,
    pub fmax_ghz: f64,
    pub edp_mw_ns2: f64,
    pub eiv_p997_v: f64,
    pub valid: bool,
    /// Pipeline error for this row, if any; outputs are zeroed then.
    pub error: Option<String>,
}

impl RunRecord {
    pub fn has_outputs(&self) -> bool {
        self.error.is_none()
    }

    pub const CSV_HEADER: &'static str = "design,lib,pdn,tap_pitch,tap_scheme,util,clkp_ns,seed,\
n_inst,n_nets,n_prim,avg_fanout,n_seq,failing_endpoints,\
wns_ns,tns_ns,drc_proxy,wirelength_um,area_um2,achieved_util,total_power_mw,fmax_ghz,edp_mw_ns2,eiv_p997_v,valid,error";

    /// Grid-point identity: the input columns only.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}|{:.4}|{:.4}|{}",
            self.design,
            self.lib,
            self.pdn.id(),
            self.tap_pitch_cpp.map_or(String::from("-"), |p| p.to_string()),
            self.tap_scheme.map_or(String::from("-"), |s| s.id().to_string()),
            self.util,
            self.clkp_ns,
            self.seed
        )
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{:.6},{},{},{:.6},{:.6},{},{:.3},{:.3},{:.6},{:.6},{:.6},{:.6},{:.6},{},{}",
            self.design,
            self.lib,
            self.pdn.id(),
            self.tap_pitch_cpp.map_or(String::from("-"), |p| p.to_string()),
            self.tap_scheme.map_or(String::from("-"), |s| s.id().to_string()),
            self.util,
            self.clkp_ns,
            self.seed,
            self.n_inst,
            self.n_nets,
            self.n_prim,
            self.avg_fanout,
            self.n_seq,
            self.failing_endpoints,
            self.wns_ns,
            self.tns_ns,
            self.drc_proxy,
            self.wirelength_um,
            self.area_um2,
            self.achieved_util,
            self.total_power_mw,
            self.fmax_ghz,
            self.edp_mw_ns2,
            self.eiv_p997_v,
            self.valid,
            self.error.as_deref().map_or(String::from("-"), |e| e.replace(',', ";")),
        )
    }

    pub fn from_csv_row(line: &str) -> Result<RunRecord> {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 26 {
            return Err(Error::Config(format!("bad record row ({} fields)", f.len())));
        }
        let pf = |s: &str, what: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Config(format!("bad {what}: `{s}`")))
        };
        let pu = |s: &str, what: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Config(format!("bad {what}: `{s}`")))
        };
        Ok(RunRecord {
            design: f[0].into(),
            lib: f[1].into(),
            pdn: PdnKind::from_id(f[2])
                .ok_or_else(|| Error::Config(format!("bad pdn `{}`", f[2])))?,
            tap_pitch_cpp: if f[3] == "-" { None } else { Some(pu(f[3], "tap_pitch")? as u32) },
            tap_scheme: if f[4] == "-" {
                None
            } else {
                Some(
                    TapScheme::from_id(f[4])
                        .ok_or_else(|| Error::Config(format!("bad tap_scheme `{}`", f[4])))?,
                )
            },
            util: pf(f[5], "util")?,
            clkp_ns: pf(f[6], "clkp")?,
            seed: pu(f[7], "seed")?,
            n_inst: pu(f[8], "n_inst")?,
            n_nets: pu(f[9], "n_nets")?,
            n_prim: pu(f[10], "n_prim")?,
            avg_fanout: pf(f[11], "avg_fanout")?,
            n_seq: pu(f[12], "n_seq")?,
            failing_endpoints: pu(f[13], "failing_endpoints")?,
            wns_ns: pf(f[14], "wns_ns")?,
            tns_ns: pf(f[15], "tns_ns")?,
            drc_proxy: pu(f[16], "drc_proxy")?,
            wirelength_um: pf(f[17], "wirelength_um")?,
            area_um2: pf(f[18], "area_um2")?,
            achieved_util: pf(f[19], "achieved_util")?,
            total_power_mw: pf(f[20], "total_power_mw")?,
            fmax_ghz: pf(f[21], "fmax_ghz")?,
            edp_mw_ns2: pf(f[22], "edp_mw_ns2")?,
            eiv_p997_v: pf(f[23], "eiv_p997_v")?,
            valid: f[24] == "true",
            error: if f[25] == "-" { None } else { Some(f[25].to_string()) },
        })
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    pub(crate) fn sample_record() -> RunRecord {
        RunRecord {
            design: "gen2k".into(),
            lib: "lib2".into(),
            pdn: PdnKind::Bs,
            tap_pitch_cpp: Some(48),
            tap_scheme: Some(TapScheme::Staggered),
            util: 0.8,
            clkp_ns: 0.2,
            seed: 1,
            n_inst: 2000,
            n_nets: 4200,
            n_prim: 64,
            avg_fanout: 1.3,
            n_seq: 200,
            failing_endpoints: 3,
            wns_ns: -0.01,
            tns_ns: -0.05,
            drc_proxy: 12,
            wirelength_um: 31800.5,
            area_um2: 420.0,
            achieved_util: 0.79,
            total_power_mw: 4.2,
            fmax_ghz: 4.76,
            edp_mw_ns2: 0.185,
            eiv_p997_v: 0.67,
            valid: true,
            error: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::sample_record;
    use super::*;

    #[test]
    fn csv_round_trip_is_bit_identical() {
        let r = sample_record();
        let row = r.to_csv_row();
        let r2 = RunRecord::from_csv_row(&row).unwrap();
        assert_eq!(row, r2.to_csv_row());
        assert_eq!(r.key(), r2.key());
    }

    #[test]
    fn error_rows_sanitize_commas() {
        let mut r = sample_record();
        r.error = Some("bad, very bad".into());
        let row = r.to_csv_row();
        let r2 = RunRecord::from_csv_row(&row).unwrap();
        assert_eq!(r2.error.as_deref(), Some("bad; very bad"));
    }
}
