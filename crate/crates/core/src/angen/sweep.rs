//! Candidate grids: per-parameter (lo, hi, step) ranges, the shared
//! cross-product routine, and the bound filters that drop parameter values
//! the generator cannot honor (0 < B_avg <= 1, 0 < S_ratio <= 1,
//! 1 < D_avg < 2.6, 3 < T_avg).

use crate::netcore::TopoParams;
use crate::{Error, Result};

const EPS: f64 = 1e-9;

/// Per-parameter inclusive grids, one (lo, hi, step) triple per dimension
/// in the order (n_inst, n_prim, d_avg, b_avg, t_avg, s_ratio).
#[derive(Debug, Clone)]
pub struct ParamRanges {
    pub ranges: [(f64, f64, f64); 6],
}

impl ParamRanges {
    pub fn new(ranges: [(f64, f64, f64); 6]) -> Result<Self> {
        for (i, &(lo, hi, step)) in ranges.iter().enumerate() {
            if lo > hi {
                return Err(Error::Config(format!("range {i}: lo {lo} > hi {hi}")));
            }
            if !(step > 0.0) {
                return Err(Error::Config(format!("range {i}: step must be > 0")));
            }
        }
        Ok(Self { ranges })
    }

    /// Symmetric ranges `target[i] ± delta[i]` with the given steps. The
    /// default testing deltas/steps are (500,100) (5,1) (0.2,0.02) (0.2,0.02)
    /// (10,2) (0.2,0.02).
    pub fn around(target: &TopoParams, delta: [f64; 6], step: [f64; 6]) -> Self {
        let t = [
            target.n_inst as f64,
            target.n_prim as f64,
            target.d_avg,
            target.b_avg.unwrap_or(0.5),
            target.t_avg,
            target.s_ratio,
        ];
        let mut ranges = [(0.0, 0.0, 1.0); 6];
        for i in 0..6 {
            ranges[i] = (t[i] - delta[i], t[i] + delta[i], step[i]);
        }
        Self { ranges }
    }

    /// The default testing neighborhood around a target.
    pub fn default_around(target: &TopoParams) -> Self {
        Self::around(
            target,
            [500.0, 5.0, 0.2, 0.2, 10.0, 0.2],
            [100.0, 1.0, 0.02, 0.02, 2.0, 0.02],
        )
    }

    pub fn grids(&self) -> [Vec<f64>; 6] {
        let mut out: [Vec<f64>; 6] = Default::default();
        for (i, &(lo, hi, step)) in self.ranges.iter().enumerate() {
            let count = ((hi - lo) / step + EPS).floor() as usize + 1;
            out[i] = (0..count).map(|j| lo + j as f64 * step).collect();
        }
        out
    }
}

/// Full cross-product of per-dimension value lists, in lexicographic order
/// (first dimension outermost).
pub fn cross_product(grids: &[Vec<f64>; 6]) -> Vec<[f64; 6]> {
    let total: usize = grids.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    for &a in &grids[0] {
        for &b in &grids[1] {
            for &c in &grids[2] {
                for &d in &grids[3] {
                    for &e in &grids[4] {
                        for &f in &grids[5] {
                            out.push([a, b, c, d, e, f]);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Generator validity bounds on input parameters. n_inst and n_prim just
/// need to be positive integers.
pub fn passes_filters(p: &[f64; 6]) -> bool {
    let [n_inst, n_prim, d, b, t, s] = *p;
    n_inst >= 1.0
        && n_prim >= 1.0
        && b > 0.0
        && b <= 1.0 + EPS
        && s > 0.0
        && s <= 1.0 + EPS
        && d > 1.0 + EPS
        && d < 2.6 - EPS
        && t > 3.0 + EPS
}

/// Cross-product of the grids around `target`, filtered to the generator
/// validity bounds, in deterministic lexicographic order.
pub fn sweep_candidates(target: &TopoParams, ranges: &ParamRanges) -> Result<Vec<TopoParams>> {
    let _ = target; // ranges already encode the neighborhood
    let grids = ranges.grids();
    let out: Vec<TopoParams> = cross_product(&grids)
        .into_iter()
        .filter(passes_filters)
        .map(|mut a| {
            a[0] = a[0].round();
            a[1] = a[1].round();
            TopoParams::from_array(a)
        })
        .collect();
    if out.is_empty() {
        return Err(Error::Infeasible("empty candidate set after filtering".into()));
    }
    Ok(out)
}

/// The fixed training grid: explicit per-parameter value lists whose
/// cross-product has 4 x 6 x 5 x 6 x 6 x 5 = 21600 combinations.
pub fn training_grid() -> [Vec<f64>; 6] {
    [
        vec![10000.0, 20000.0, 40000.0, 80000.0],
        vec![100.0, 200.0, 500.0, 1000.0, 2000.0, 4000.0],
        vec![1.8, 2.0, 2.2, 2.4, 2.6],
        vec![0.70, 0.75, 0.80, 0.85, 0.90, 0.95],
        vec![6.0, 8.0, 10.0, 12.0, 14.0, 16.0],
        vec![0.2, 0.4, 0.6, 0.8, 1.0],
    ]
}
