//! Small dense linear algebra kernel: enough for normalized-Laplacian
//! spectra, Katz similarity, truncated SVD and PCA at the problem sizes
//! this crate works with (a few hundred vertices). Everything is `f64`,
//! row-major, and deterministic.

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in ascending order with matching eigenvector
/// columns (`A V = V diag(λ)`, `VᵀV = I`).
pub fn symmetric_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    assert_eq!(a.rows, a.cols, "matrix must be square");
    let n = a.rows;
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    let fro = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * fro;

    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp - s * (akq + tau * akp);
                        a[(p, k)] = a[(k, p)];
                        a[(k, q)] = akq + s * (akp - tau * akq);
                        a[(q, k)] = a[(k, q)];
                    }
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp - s * (vkq + tau * vkp);
                    v[(k, q)] = vkq + s * (vkp - tau * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    order.sort_by(|&i, &j| eig[i].partial_cmp(&eig[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    (values, vectors)
}

/// Solve `A X = B` with partial-pivot LU; `None` when `A` is singular to
/// working precision.
pub fn lu_solve(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows, a.cols, "matrix must be square");
    assert_eq!(a.rows, b.rows, "dimension mismatch");
    let n = a.rows;
    let mut lu = a.clone();
    let mut x = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        let mut piv = col;
        let mut best = lu[(col, col)].abs();
        for r in (col + 1)..n {
            let cand = lu[(r, col)].abs();
            if cand > best {
                best = cand;
                piv = r;
            }
        }
        if best < 1e-300 {
            return None;
        }
        if piv != col {
            for j in 0..n {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
            perm.swap(col, piv);
            for j in 0..x.cols {
                let tmp = x[(col, j)];
                x[(col, j)] = x[(piv, j)];
                x[(piv, j)] = tmp;
            }
        }
        let d = lu[(col, col)];
        for r in (col + 1)..n {
            let f = lu[(r, col)] / d;
            lu[(r, col)] = f;
            if f != 0.0 {
                for j in (col + 1)..n {
                    lu[(r, j)] -= f * lu[(col, j)];
                }
                for j in 0..x.cols {
                    x[(r, j)] -= f * x[(col, j)];
                }
            }
        }
    }

    // Back substitution (forward part was folded into elimination).
    for col in (0..n).rev() {
        let d = lu[(col, col)];
        for j in 0..x.cols {
            let mut s = x[(col, j)];
            for k in (col + 1)..n {
                s -= lu[(col, k)] * x[(k, j)];
            }
            x[(col, j)] = s / d;
        }
    }
    Some(x)
}

/// Thin SVD, `A = U diag(σ) Vᵀ` with `σ` descending and `min(m, n)`
/// triplets. Computed from the eigendecomposition of the smaller Gram
/// matrix; left (or right) vectors for singular values below
/// `1e-12 · σmax` are set to zero instead of being completed to an
/// orthonormal basis — callers here only ever use σ-weighted columns,
/// where those directions contribute nothing.
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

pub fn thin_svd(a: &Matrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    let r = m.min(n);
    if n <= m {
        let gram = a.transpose().matmul(a); // n×n
        let (vals, vecs) = symmetric_eigen(&gram);
        // Ascending -> descending.
        let sigma: Vec<f64> = (0..r)
            .map(|i| vals[n - 1 - i].max(0.0).sqrt())
            .collect();
        let v = Matrix::from_fn(n, r, |i, j| vecs[(i, n - 1 - j)]);
        let smax = sigma.first().copied().unwrap_or(0.0);
        let av = a.matmul(&v);
        let u = Matrix::from_fn(m, r, |i, j| {
            if sigma[j] > 1e-12 * smax && sigma[j] > 0.0 {
                av[(i, j)] / sigma[j]
            } else {
                0.0
            }
        });
        Svd { u, sigma, v }
    } else {
        let t = thin_svd(&a.transpose());
        Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
    }

    fn random_symmetric(n: usize, seed: u64) -> Matrix {
        let m = random_matrix(n, n, seed);
        Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    #[test]
    fn eigen_reconstructs_and_orders() {
        for seed in 0..5 {
            let a = random_symmetric(24, seed);
            let (vals, vecs) = symmetric_eigen(&a);
            assert!(vals.windows(2).all(|w| w[0] <= w[1]), "ascending order");
            // A V = V diag(vals)
            let av = a.matmul(&vecs);
            let vl = Matrix::from_fn(24, 24, |i, j| vecs[(i, j)] * vals[j]);
            assert!(av.sub(&vl).frobenius_norm() < 1e-10 * a.frobenius_norm().max(1.0));
            // Orthonormal columns.
            let vtv = vecs.transpose().matmul(&vecs);
            assert!(vtv.sub(&Matrix::identity(24)).frobenius_norm() < 1e-10);
            // Trace preserved.
            let tr: f64 = (0..24).map(|i| a[(i, i)]).sum();
            let sum: f64 = vals.iter().sum();
            assert!((tr - sum).abs() < 1e-9);
        }
    }

    #[test]
    fn eigen_handles_known_2x2() {
        let a = Matrix::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 });
        let (vals, _) = symmetric_eigen(&a);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lu_solves_well_conditioned_systems() {
        for seed in 0..5 {
            let n = 17;
            let mut a = random_matrix(n, n, seed);
            for i in 0..n {
                a[(i, i)] += n as f64; // diagonally dominant
            }
            let x = random_matrix(n, 3, seed + 100);
            let b = a.matmul(&x);
            let got = lu_solve(&a, &b).unwrap();
            assert!(got.sub(&x).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn lu_detects_singularity() {
        let a = Matrix::from_fn(3, 3, |i, _| i as f64); // rank 1
        assert!(lu_solve(&a, &Matrix::identity(3)).is_none());
    }

    #[test]
    fn svd_reconstructs_and_truncates_optimally() {
        for &(m, n, seed) in &[(10usize, 7usize, 0u64), (7, 10, 1), (12, 12, 2)] {
            let a = random_matrix(m, n, seed);
            let svd = thin_svd(&a);
            let r = m.min(n);
            assert!(svd.sigma.windows(2).all(|w| w[0] >= w[1]), "descending σ");
            // Full reconstruction.
            let usv = Matrix::from_fn(m, n, |i, j| {
                (0..r)
                    .map(|k| svd.u[(i, k)] * svd.sigma[k] * svd.v[(j, k)])
                    .sum()
            });
            assert!(usv.sub(&a).frobenius_norm() < 1e-9 * a.frobenius_norm());
            // Rank-k truncation error matches the tail of the spectrum
            // (the optimal value for any rank-k approximation).
            for k in [1, 3] {
                let trunc = Matrix::from_fn(m, n, |i, j| {
                    (0..k)
                        .map(|t| svd.u[(i, t)] * svd.sigma[t] * svd.v[(j, t)])
                        .sum()
                });
                let err = trunc.sub(&a).frobenius_norm();
                let tail: f64 = svd.sigma[k..].iter().map(|s| s * s).sum::<f64>().sqrt();
                assert!(
                    (err - tail).abs() < 1e-8 * a.frobenius_norm().max(1.0),
                    "m={m} n={n} k={k}: {err} vs {tail}"
                );
            }
            // Kept singular vectors satisfy the shifting identities.
            for k in 0..r {
                if svd.sigma[k] < 1e-9 {
                    continue;
                }
                let av: Vec<f64> = (0..m)
                    .map(|i| (0..n).map(|j| a[(i, j)] * svd.v[(j, k)]).sum::<f64>())
                    .collect();
                let res: f64 = av
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (x - svd.sigma[k] * svd.u[(i, k)]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(res < 1e-9 * a.frobenius_norm().max(1.0));
            }
        }
    }
}
