//! Artificial netlist generation toward a topological-parameter target,
//! the multiplicative similarity score, candidate sweeping with bound
//! filters, and surrogate-model parameter tuning.

mod features;
mod generator;
mod score;
mod surrogate;
mod sweep;

pub use features::{feature_vector, FEATURE_NAMES};
pub use generator::generate_netlist;
pub use score::score;
pub use surrogate::{fit_surrogate, Surrogate, SurrogateKind};
pub use sweep::{cross_product, sweep_candidates, training_grid, ParamRanges};

use crate::netcore::TopoParams;
use crate::Result;

/// Picks the candidate with the lowest predicted score against `target`.
/// Every surviving candidate from [`sweep_candidates`] is evaluated through
/// the surrogate; ties break to the lexicographically smallest candidate.
pub fn tune(
    target: &TopoParams,
    model: &Surrogate,
    ranges: &ParamRanges,
) -> Result<(TopoParams, f64)> {
    let ranked = tune_ranked(target, model, ranges)?;
    Ok(ranked[0])
}

/// Like [`tune`] but returns all candidates with their predicted scores,
/// sorted ascending by score (ties lexicographic on the candidate tuple).
pub fn tune_ranked(
    target: &TopoParams,
    model: &Surrogate,
    ranges: &ParamRanges,
) -> Result<Vec<(TopoParams, f64)>> {
    let cands = sweep_candidates(target, ranges)?;
    let t = target.as_array()?;
    let mut scored: Vec<([f64; 6], f64)> = crate::par::map_slice(&cands, |c| {
        let arr = c.as_array().expect("sweep candidates are complete");
        let pred = model.predict(&arr);
        let s = score::score_arrays(&t, &pred).unwrap_or(f64::INFINITY);
        (arr, s)
    });
    scored.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .unwrap()
            .then_with(|| a.0.partial_cmp(&b.0).unwrap())
    });
    Ok(scored
        .into_iter()
        .map(|(arr, s)| (TopoParams::from_array(arr), s))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::TopoParams;

    fn identity_model() -> Surrogate {
        // out = in exactly; knn with k=1 memorizes the map.
        let pts: Vec<([f64; 6], [f64; 6])> = (0..40)
            .map(|i| {
                let v = [
                    1000.0 + i as f64 * 13.0,
                    10.0 + i as f64,
                    2.0 + (i % 5) as f64 * 0.1,
                    0.2 + (i % 7) as f64 * 0.1,
                    4.0 + (i % 9) as f64,
                    0.1 + (i % 8) as f64 * 0.1,
                ];
                (v, v)
            })
            .collect();
        fit_surrogate(&pts, SurrogateKind::Knn, 1).unwrap()
    }

    #[test]
    fn tune_matches_brute_force_with_identity_surrogate() {
        let target = TopoParams::new(1000, 20, 2.2, 0.8, 6.0, 0.2);
        let ranges = ParamRanges::around(
            &target,
            [200.0, 2.0, 0.2, 0.1, 2.0, 0.1],
            [100.0, 1.0, 0.1, 0.05, 1.0, 0.05],
        );
        let model = identity_model();
        let (best, best_score) = tune(&target, &model, &ranges).unwrap();

        // Brute force over the same candidate set with the same model.
        let t = target.as_array().unwrap();
        let mut exp_best: Option<([f64; 6], f64)> = None;
        for c in sweep_candidates(&target, &ranges).unwrap() {
            let arr = c.as_array().unwrap();
            let s = score::score_arrays(&t, &model.predict(&arr)).unwrap();
            let better = match &exp_best {
                None => true,
                Some((barr, bs)) => s < *bs || (s == *bs && arr < *barr),
            };
            if better {
                exp_best = Some((arr, s));
            }
        }
        let (earr, es) = exp_best.unwrap();
        assert_eq!(best.as_array().unwrap(), earr);
        assert!((best_score - es).abs() < 1e-12);
    }

    #[test]
    fn singleton_range_returns_that_candidate() {
        let target = TopoParams::new(500, 10, 2.2, 0.5, 5.0, 0.3);
        let ranges = ParamRanges::around(&target, [0.0; 6], [1.0, 1.0, 0.1, 0.1, 1.0, 0.1]);
        let model = identity_model();
        let (best, _) = tune(&target, &model, &ranges).unwrap();
        assert_eq!(best.as_array().unwrap(), target.as_array().unwrap());
    }

    #[test]
    fn equal_scores_break_lexicographically() {
        // A single-point k=1 surrogate predicts the same output everywhere,
        // so all candidates tie exactly and the lexicographically smallest
        // must win.
        let pts = vec![(
            [150.0, 5.0, 2.0, 0.5, 4.0, 0.2],
            [120.0, 5.0, 2.0, 0.5, 4.0, 0.2],
        )];
        let model = fit_surrogate(&pts, SurrogateKind::Knn, 1).unwrap();
        let target = TopoParams::new(100, 5, 2.0, 0.5, 4.0, 0.2);
        let ranges = ParamRanges::around(
            &target,
            [100.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [100.0, 1.0, 0.1, 0.1, 1.0, 0.1],
        );
        let cands = sweep_candidates(&target, &ranges).unwrap();
        assert!(cands.len() > 1);
        let (best, _) = tune(&target, &model, &ranges).unwrap();
        let smallest = cands
            .iter()
            .map(|c| c.as_array().unwrap())
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .unwrap();
        assert_eq!(best.as_array().unwrap(), smallest);
    }
}
