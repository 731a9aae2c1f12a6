//! Similarity score between two topological parameter sets: the product over
//! the six parameters of max(target/out, out/target). 1.0 means identical;
//! larger means greater discrepancy.

use crate::netcore::TopoParams;
use crate::{Error, Result};

pub(crate) fn score_arrays(target: &[f64; 6], out: &[f64; 6]) -> Result<f64> {
    let mut s = 1.0;
    for (&t, &o) in target.iter().zip(out) {
        if !(t > 0.0) || !(o > 0.0) || !t.is_finite() || !o.is_finite() {
            return Err(Error::Infeasible(format!(
                "score requires positive finite parameters, got {t} vs {o}"
            )));
        }
        s *= (t / o).max(o / t);
    }
    Ok(s)
}

/// Score of `out` against `target`. Errors on any nonpositive parameter.
pub fn score(target: &TopoParams, out: &TopoParams) -> Result<f64> {
    score_arrays(&target.as_array()?, &out.as_array()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tp(a: [f64; 6]) -> TopoParams {
        TopoParams::from_array(a)
    }

    #[test]
    fn identity_scores_one() {
        let p = tp([100.0, 10.0, 3.0, 0.5, 8.0, 0.1]);
        assert_eq!(score(&p, &p).unwrap(), 1.0);
    }

    #[test]
    fn published_fixture_rows() {
        // Target rows vs the plain artificial rows.
        let aes = tp([12318.0, 394.0, 3.28, 0.55, 7.98, 0.04]);
        let aes_s = tp([10371.0, 394.0, 3.28, 0.79, 5.19, 0.13]);
        assert!((score(&aes, &aes_s).unwrap() - 8.53).abs() < 0.01);

        // Target rows vs the tuned artificial rows.
        let aes_t = tp([10200.0, 394.0, 3.26, 0.72, 8.01, 0.11]);
        assert!((score(&aes, &aes_t).unwrap() - 4.39).abs() < 0.01);
    }

    #[test]
    fn nonpositive_rejected() {
        let p = tp([100.0, 10.0, 3.0, 0.5, 8.0, 0.1]);
        let mut bad = p;
        bad.s_ratio = 0.0;
        assert!(score(&p, &bad).is_err());
        let unplaced = TopoParams { b_avg: None, ..p };
        assert!(score(&p, &unplaced).is_err());
    }

    #[test]
    fn symmetry_and_lower_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = tp([
                rng.gen_range(100.0..100000.0),
                rng.gen_range(1.0..5000.0),
                rng.gen_range(1.5..4.0),
                rng.gen_range(0.05..1.0),
                rng.gen_range(1.0..20.0),
                rng.gen_range(0.01..1.0),
            ]);
            let b = tp([
                rng.gen_range(100.0..100000.0),
                rng.gen_range(1.0..5000.0),
                rng.gen_range(1.5..4.0),
                rng.gen_range(0.05..1.0),
                rng.gen_range(1.0..20.0),
                rng.gen_range(0.01..1.0),
            ]);
            let ab = score(&a, &b).unwrap();
            let ba = score(&b, &a).unwrap();
            assert!((ab - ba).abs() < 1e-9 * ab);
            assert!(ab >= 1.0);
        }
    }

    #[test]
    fn multiplicative_over_independent_dimensions() {
        let a = tp([100.0, 10.0, 2.0, 0.5, 5.0, 0.2]);
        // Perturb one dimension at a time; full score is the product.
        let b1 = tp([150.0, 10.0, 2.0, 0.5, 5.0, 0.2]);
        let b2 = tp([100.0, 10.0, 2.0, 0.5, 10.0, 0.2]);
        let both = tp([150.0, 10.0, 2.0, 0.5, 10.0, 0.2]);
        let s1 = score(&a, &b1).unwrap();
        let s2 = score(&a, &b2).unwrap();
        let s12 = score(&a, &both).unwrap();
        assert!((s12 - s1 * s2).abs() < 1e-12 * s12);
    }
}
