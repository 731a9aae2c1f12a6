//! Surrogate models mapping generator input parameters to measured output
//! parameters: inverse-distance-weighted k-nearest-neighbor and per-dimension
//! linear least squares, both over z-normalized inputs. Zero-variance input
//! dimensions pass through unscaled.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateKind {
    Knn,
    Linear,
}

#[derive(Debug, Clone)]
pub struct Surrogate {
    kind: SurrogateKind,
    k: usize,
    mean: [f64; 6],
    scale: [f64; 6],
    /// Normalized training inputs paired with raw outputs (knn path).
    train: Vec<([f64; 6], [f64; 6])>,
    /// Per output dimension: 6 coefficients on normalized inputs + intercept.
    coeffs: Vec<[f64; 7]>,
}

impl Surrogate {
    pub fn kind(&self) -> SurrogateKind {
        self.kind
    }

    fn normalize(&self, x: &[f64; 6]) -> [f64; 6] {
        let mut z = [0.0; 6];
        for i in 0..6 {
            z[i] = (x[i] - self.mean[i]) / self.scale[i];
        }
        z
    }

    /// Predicts the six output parameters for one input point.
    pub fn predict(&self, x: &[f64; 6]) -> [f64; 6] {
        let z = self.normalize(x);
        match self.kind {
            SurrogateKind::Knn => {
                let mut dist: Vec<(f64, usize)> = self
                    .train
                    .iter()
                    .enumerate()
                    .map(|(i, (zi, _))| {
                        let d2: f64 = zi.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
                        (d2.sqrt(), i)
                    })
                    .collect();
                dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                let k = self.k.min(dist.len());
                if k == 1 {
                    return self.train[dist[0].1].1;
                }
                let mut num = [0.0; 6];
                let mut den = 0.0;
                for &(d, i) in &dist[..k] {
                    let w = 1.0 / (d + 1e-12);
                    den += w;
                    for j in 0..6 {
                        num[j] += w * self.train[i].1[j];
                    }
                }
                let mut out = [0.0; 6];
                for j in 0..6 {
                    out[j] = num[j] / den;
                }
                out
            }
            SurrogateKind::Linear => {
                let mut out = [0.0; 6];
                for (j, c) in self.coeffs.iter().enumerate() {
                    let mut v = c[6];
                    for i in 0..6 {
                        v += c[i] * z[i];
                    }
                    out[j] = v;
                }
                out
            }
        }
    }
}

/// Solves A x = b by Gaussian elimination with partial pivoting. A is n x n
/// row-major. Small systems only (normal equations are 7 x 7 here).
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[piv][col].abs() < 1e-12 {
            return Err(Error::Infeasible("singular normal equations".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut v = b[col];
        for k in col + 1..n {
            v -= a[col][k] * x[k];
        }
        x[col] = v / a[col][col];
    }
    Ok(x)
}

/// Fits a surrogate on (input, output) parameter pairs. `k` applies to the
/// knn kind; the linear kind needs at least 7 points for the 6-coefficient
/// plus intercept fit.
pub fn fit_surrogate(
    data: &[([f64; 6], [f64; 6])],
    kind: SurrogateKind,
    k: usize,
) -> Result<Surrogate> {
    match kind {
        SurrogateKind::Knn => {
            if k == 0 {
                return Err(Error::Config("knn needs k >= 1".into()));
            }
            if data.len() < k {
                return Err(Error::Config(format!(
                    "knn needs at least k={k} training points, got {}",
                    data.len()
                )));
            }
        }
        SurrogateKind::Linear => {
            if data.len() < 7 {
                return Err(Error::Config(format!(
                    "linear fit needs at least 7 points, got {}",
                    data.len()
                )));
            }
        }
    }

    let n = data.len() as f64;
    let mut mean = [0.0; 6];
    for (x, _) in data {
        for i in 0..6 {
            mean[i] += x[i];
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut scale = [0.0; 6];
    for (x, _) in data {
        for i in 0..6 {
            scale[i] += (x[i] - mean[i]).powi(2);
        }
    }
    for s in &mut scale {
        *s = (*s / n).sqrt();
        // Degenerate dimension: pass through unscaled.
        if *s < 1e-12 {
            *s = 1.0;
        }
    }

    let norm = |x: &[f64; 6]| {
        let mut z = [0.0; 6];
        for i in 0..6 {
            z[i] = (x[i] - mean[i]) / scale[i];
        }
        z
    };

    let train: Vec<([f64; 6], [f64; 6])> = data.iter().map(|(x, y)| (norm(x), *y)).collect();

    let mut coeffs = Vec::new();
    if kind == SurrogateKind::Linear {
        // Normal equations on [z, 1] per output dimension.
        for j in 0..6 {
            let mut ata = vec![vec![0.0; 7]; 7];
            let mut atb = vec![0.0; 7];
            for (z, y) in &train {
                let row: [f64; 7] = [z[0], z[1], z[2], z[3], z[4], z[5], 1.0];
                for r in 0..7 {
                    for c in 0..7 {
                        ata[r][c] += row[r] * row[c];
                    }
                    atb[r] += row[r] * y[j];
                }
            }
            let x = solve_dense(&mut ata, &mut atb)?;
            let mut arr = [0.0; 7];
            arr.copy_from_slice(&x);
            coeffs.push(arr);
        }
    }

    Ok(Surrogate { kind, k, mean, scale, train, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng) -> [f64; 6] {
        [
            rng.gen_range(1000.0..50000.0),
            rng.gen_range(10.0..2000.0),
            rng.gen_range(1.5..2.6),
            rng.gen_range(0.1..1.0),
            rng.gen_range(4.0..16.0),
            rng.gen_range(0.05..1.0),
        ]
    }

    #[test]
    fn knn_k1_memorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data: Vec<_> = (0..30).map(|_| {
            let x = random_point(&mut rng);
            (x, x)
        }).collect();
        let model = fit_surrogate(&data, SurrogateKind::Knn, 1).unwrap();
        for (x, y) in &data {
            let p = model.predict(x);
            for i in 0..6 {
                assert!((p[i] - y[i]).abs() < 1e-9 * y[i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn linear_recovers_doubling_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let data: Vec<_> = (0..100)
            .map(|_| {
                let x = random_point(&mut rng);
                let mut y = x;
                for v in &mut y {
                    *v *= 2.0;
                }
                (x, y)
            })
            .collect();
        let model = fit_surrogate(&data, SurrogateKind::Linear, 0).unwrap();
        for _ in 0..50 {
            let x = random_point(&mut rng);
            let p = model.predict(&x);
            for i in 0..6 {
                assert!(
                    (p[i] - 2.0 * x[i]).abs() < 1e-6 * (2.0 * x[i]).abs(),
                    "dim {i}: {} vs {}",
                    p[i],
                    2.0 * x[i]
                );
            }
        }
    }

    #[test]
    fn degenerate_dimension_passes_through() {
        // Constant n_prim across training data must not poison the fit.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data: Vec<_> = (0..40)
            .map(|_| {
                let mut x = random_point(&mut rng);
                x[1] = 394.0;
                (x, x)
            })
            .collect();
        let model = fit_surrogate(&data, SurrogateKind::Knn, 3).unwrap();
        let mut q = random_point(&mut rng);
        q[1] = 394.0;
        let p = model.predict(&q);
        assert!(p.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn too_little_data_rejected() {
        let data = vec![([1.0; 6], [1.0; 6]); 3];
        assert!(fit_surrogate(&data, SurrogateKind::Knn, 5).is_err());
        assert!(fit_surrogate(&data, SurrogateKind::Linear, 0).is_err());
    }
}
