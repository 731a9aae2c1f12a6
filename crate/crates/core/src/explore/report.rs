//! Tradeoff report emission: per-tradeoff CSVs of valid rows with Pareto
//! markings, per-PDN improvement deltas against the plain frontside PDN at
//! each configuration's second-largest x value, and the swap-threshold rank
//! table.

use std::fs;
use std::path::Path;

use crate::explore::RunRecord;
use crate::pdnet::PdnKind;
use crate::Result;

/// The four tradeoffs. `x` is the axis both PDNs are matched on for deltas;
/// Pareto marking uses (x better-direction, y better-direction).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tradeoff {
    PerfPower,
    PerfArea,
    EdpArea,
    IrArea,
}

impl Tradeoff {
    pub const ALL: [Tradeoff; 4] =
        [Tradeoff::PerfPower, Tradeoff::PerfArea, Tradeoff::EdpArea, Tradeoff::IrArea];

    pub fn file_name(self) -> &'static str {
        match self {
            Tradeoff::PerfPower => "perf_power.csv",
            Tradeoff::PerfArea => "perf_area.csv",
            Tradeoff::EdpArea => "edp_area.csv",
            Tradeoff::IrArea => "ir_area.csv",
        }
    }

    fn axes(self, r: &RunRecord) -> (f64, f64) {
        match self {
            Tradeoff::PerfPower => (r.fmax_ghz, r.total_power_mw),
            Tradeoff::PerfArea => (r.fmax_ghz, r.area_um2),
            Tradeoff::EdpArea => (r.edp_mw_ns2, r.area_um2),
            Tradeoff::IrArea => (r.eiv_p997_v, r.area_um2),
        }
    }

    /// true when larger is better on that axis.
    fn directions(self) -> (bool, bool) {
        match self {
            Tradeoff::PerfPower => (true, false),
            Tradeoff::PerfArea => (true, false),
            Tradeoff::EdpArea => (false, false),
            Tradeoff::IrArea => (true, false),
        }
    }

    fn header(self) -> &'static str {
        match self {
            Tradeoff::PerfPower => "design,lib,pdn,tap_pitch,tap_scheme,util,clkp_ns,fmax_ghz,total_power_mw,pareto",
            Tradeoff::PerfArea => "design,lib,pdn,tap_pitch,tap_scheme,util,clkp_ns,fmax_ghz,area_um2,pareto",
            Tradeoff::EdpArea => "design,lib,pdn,tap_pitch,tap_scheme,util,clkp_ns,edp_mw_ns2,area_um2,pareto",
            Tradeoff::IrArea => "design,lib,pdn,tap_pitch,tap_scheme,util,clkp_ns,eiv_p997_v,area_um2,pareto",
        }
    }
}

/// Marks the non-dominated valid rows for a tradeoff. A row is dominated
/// when another valid row is at least as good on both axes and strictly
/// better on one.
pub fn pareto_front(rows: &[&RunRecord], t: Tradeoff) -> Vec<bool> {
    let (x_up, y_up) = t.directions();
    let better = |a: f64, b: f64, up: bool| if up { a > b } else { a < b };
    let no_worse = |a: f64, b: f64, up: bool| if up { a >= b } else { a <= b };
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| t.axes(r)).collect();
    (0..pts.len())
        .map(|i| {
            !pts.iter().enumerate().any(|(j, &(xj, yj))| {
                j != i
                    && no_worse(xj, pts[i].0, x_up)
                    && no_worse(yj, pts[i].1, y_up)
                    && (better(xj, pts[i].0, x_up) || better(yj, pts[i].1, y_up))
            })
        })
        .collect()
}

fn tradeoff_csv(rows: &[&RunRecord], t: Tradeoff) -> String {
    let marks = pareto_front(rows, t);
    let mut out = String::from(t.header());
    out.push('\n');
    for (r, &mark) in rows.iter().zip(&marks) {
        let (x, y) = t.axes(r);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:.6},{:.6},{}\n",
            r.design,
            r.lib,
            r.pdn.id(),
            r.tap_pitch_cpp.map_or(String::from("-"), |p| p.to_string()),
            r.tap_scheme.map_or(String::from("-"), |s| s.id().to_string()),
            r.util,
            r.clkp_ns,
            x,
            y,
            mark
        ));
    }
    out
}

/// The comparison point for improvement deltas: the row at the PDN's
/// second-largest x value (largest when only one row exists).
fn reference_row<'a>(rows: &[&'a RunRecord], t: Tradeoff) -> Option<&'a RunRecord> {
    let mut sorted: Vec<&RunRecord> = rows.to_vec();
    let (x_up, _) = t.directions();
    sorted.sort_by(|a, b| {
        let (xa, _) = t.axes(a);
        let (xb, _) = t.axes(b);
        if x_up {
            xb.partial_cmp(&xa).unwrap()
        } else {
            xa.partial_cmp(&xb).unwrap()
        }
    });
    sorted.get(1).or_else(|| sorted.first()).copied()
}

/// Per-PDN deltas versus the frontside baseline, per design and library.
/// Emits `deltas.csv` rows `design,lib,tradeoff,pdn,x_ref,y,y_fs,delta_pct`.
pub fn improvement_deltas(rows: &[RunRecord]) -> String {
    let mut out = String::from("design,lib,tradeoff,pdn,x_ref,y,y_fs,delta_pct\n");
    let valid: Vec<&RunRecord> = rows.iter().filter(|r| r.has_outputs() && r.valid).collect();
    let mut keys: Vec<(String, String)> =
        valid.iter().map(|r| (r.design.clone(), r.lib.clone())).collect();
    keys.sort();
    keys.dedup();
    for (design, lib) in keys {
        for t in Tradeoff::ALL {
            let of_pdn = |k: PdnKind| -> Vec<&RunRecord> {
                valid
                    .iter()
                    .copied()
                    .filter(|r| r.design == design && r.lib == lib && r.pdn == k)
                    .collect()
            };
            let fs_rows = of_pdn(PdnKind::Fs);
            let Some(fs_ref) = reference_row(&fs_rows, t) else { continue };
            let (_, y_fs) = t.axes(fs_ref);
            for kind in [PdnKind::Fb, PdnKind::Bs, PdnKind::Bb] {
                let rows_k = of_pdn(kind);
                let Some(r) = reference_row(&rows_k, t) else { continue };
                let (x, y) = t.axes(r);
                let delta = if y_fs != 0.0 { (y - y_fs) / y_fs * 100.0 } else { 0.0 };
                out.push_str(&format!(
                    "{design},{lib},{},{},{:.6},{:.6},{:.6},{:.2}\n",
                    t.file_name().trim_end_matches(".csv"),
                    kind.id(),
                    x,
                    y,
                    y_fs,
                    delta
                ));
            }
        }
    }
    out
}

/// Ascending rank table for swap-threshold results. Entries without a
/// failure (exceeds-max sentinels) sort last.
pub fn kth_rank_csv(entries: &[(String, Option<f64>)]) -> String {
    let mut sorted: Vec<&(String, Option<f64>)> = entries.iter().collect();
    sorted.sort_by(|a, b| match (a.1, b.1) {
        (Some(x), Some(y)) => x.partial_cmp(&y).unwrap().then(a.0.cmp(&b.0)),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.0.cmp(&b.0),
    });
    let mut out = String::from("rank,label,kth\n");
    for (i, (label, k)) in sorted.iter().enumerate() {
        let kv = k.map_or(String::from(">max"), |v| format!("{v}"));
        out.push_str(&format!("{},{label},{kv}\n", i + 1));
    }
    out
}

/// Writes the four tradeoff CSVs and the delta table into `out_dir`.
pub fn emit_reports(rows: &[RunRecord], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let valid: Vec<&RunRecord> = rows.iter().filter(|r| r.has_outputs() && r.valid).collect();
    for t in Tradeoff::ALL {
        fs::write(out_dir.join(t.file_name()), tradeoff_csv(&valid, t))?;
    }
    fs::write(out_dir.join("deltas.csv"), improvement_deltas(rows))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::record::tests_support::sample_record;
    use crate::pdnet::TapScheme;

    fn row(pdn: PdnKind, fmax: f64, power: f64, area: f64) -> RunRecord {
        let mut r = sample_record();
        r.pdn = pdn;
        if !pdn.needs_taps() {
            r.tap_pitch_cpp = None;
            r.tap_scheme = None;
        } else {
            r.tap_pitch_cpp = Some(48);
            r.tap_scheme = Some(TapScheme::Column);
        }
        r.fmax_ghz = fmax;
        r.total_power_mw = power;
        r.area_um2 = area;
        r.valid = true;
        r
    }

    #[test]
    fn pareto_never_marks_dominated_rows() {
        let rows = vec![
            row(PdnKind::Fs, 5.0, 4.0, 100.0),
            row(PdnKind::Fs, 4.0, 3.0, 100.0),
            row(PdnKind::Fs, 5.0, 3.0, 100.0), // dominates both
            row(PdnKind::Fs, 3.0, 5.0, 100.0), // dominated
        ];
        let refs: Vec<&RunRecord> = rows.iter().collect();
        let marks = pareto_front(&refs, Tradeoff::PerfPower);
        assert_eq!(marks, vec![false, false, true, false]);
        // O(n^2) audit: no marked row dominated by any other row.
        for (i, &m) in marks.iter().enumerate() {
            if !m {
                continue;
            }
            for (j, r) in refs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let (xi, yi) = Tradeoff::PerfPower.axes(refs[i]);
                let (xj, yj) = Tradeoff::PerfPower.axes(r);
                assert!(!(xj >= xi && yj <= yi && (xj > xi || yj < yi)));
            }
        }
    }

    #[test]
    fn single_row_is_its_own_front() {
        let rows = vec![row(PdnKind::Fs, 5.0, 4.0, 100.0)];
        let refs: Vec<&RunRecord> = rows.iter().collect();
        assert_eq!(pareto_front(&refs, Tradeoff::PerfArea), vec![true]);
    }

    #[test]
    fn deltas_use_second_largest_x() {
        // Two fs rows (fmax 5, 4) and two bs rows (fmax 5, 4): the deltas
        // compare at the second-largest fmax of each, i.e. both at 4.
        let rows = vec![
            row(PdnKind::Fs, 5.0, 4.0, 100.0),
            row(PdnKind::Fs, 4.0, 3.0, 100.0),
            row(PdnKind::Bs, 5.0, 3.8, 100.0),
            row(PdnKind::Bs, 4.0, 2.7, 100.0),
        ];
        let csv = improvement_deltas(&rows);
        let line = csv
            .lines()
            .find(|l| l.contains("perf_power") && l.contains(",bs,"))
            .unwrap();
        // y = 2.7 vs y_fs = 3.0 -> -10%
        assert!(line.contains("-10.00"), "{line}");
    }

    #[test]
    fn kth_rank_sorts_ascending_with_sentinels_last() {
        let entries = vec![
            ("B".to_string(), Some(9.0)),
            ("A".to_string(), Some(6.0)),
            ("C".to_string(), None),
        ];
        let csv = kth_rank_csv(&entries);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[1], "1,A,6");
        assert_eq!(lines[2], "2,B,9");
        assert_eq!(lines[3], "3,C,>max");
    }
}
