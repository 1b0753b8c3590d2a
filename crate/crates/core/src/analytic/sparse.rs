use rayon::prelude::*;

use crate::linalg::{Mat, C64};

/// Row count above which matrix-vector products run in parallel.
const PAR_ROWS: usize = 4096;

/// Compressed sparse rows with sorted, duplicate-free column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<C64>,
}

impl CsrMatrix {
    /// Duplicate entries are summed; explicit zeros are kept so that the
    /// sparsity pattern does not depend on parameter values.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        mut triplets: Vec<(usize, usize, C64)>,
    ) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0; nrows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(
                r < nrows && c < ncols,
                "entry ({r}, {c}) outside {nrows} × {ncols}"
            );
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                indptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            indptr[r + 1] += indptr[r];
        }
        CsrMatrix {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix::from_triplets(n, n, (0..n).map(|i| (i, i, C64::new(1.0, 0.0))).collect())
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn max_row_nnz(&self) -> usize {
        self.indptr
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    /// Lower and upper bandwidths.
    pub fn bandwidth(&self) -> (usize, usize) {
        let (mut lo, mut hi) = (0, 0);
        for r in 0..self.nrows {
            for (c, _) in self.row(r) {
                if c < r {
                    lo = lo.max(r - c);
                } else {
                    hi = hi.max(c - r);
                }
            }
        }
        (lo, hi)
    }

    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        let row = |r: usize| -> C64 {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.values[k] * x[self.indices[k]];
            }
            acc
        };
        if self.nrows >= PAR_ROWS {
            y.par_iter_mut()
                .enumerate()
                .for_each(|(r, out)| *out = row(r));
        } else {
            y.iter_mut().enumerate().for_each(|(r, out)| *out = row(r));
        }
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    /// Exact conjugate transpose: every stored value is conjugated, none is
    /// recomputed.
    pub fn adjoint(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.ncols {
            counts[c + 1] += counts[c];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0; self.nnz()];
        let mut values = vec![C64::new(0.0, 0.0); self.nnz()];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                let slot = next[c];
                indices[slot] = r;
                values[slot] = v.conj();
                next[c] += 1;
            }
        }
        CsrMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            indptr,
            indices,
            values,
        }
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.nrows, self.ncols);
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                m[(r, c)] += v;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_complex_gaussian;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sparse(rng: &mut ChaCha8Rng, n: usize, m: usize, nnz: usize) -> CsrMatrix {
        let t = (0..nnz)
            .map(|_| {
                let (r, c) = (rng.random_range(0..n), rng.random_range(0..m));
                (
                    r,
                    c,
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                )
            })
            .collect();
        CsrMatrix::from_triplets(n, m, t)
    }

    #[test]
    fn duplicates_are_summed() {
        let one = C64::new(1.0, 0.0);
        let m = CsrMatrix::from_triplets(2, 2, vec![(1, 0, one), (0, 1, one), (1, 0, one * 2.0)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.to_dense()[(1, 0)], one * 3.0);
        assert_eq!(m.bandwidth(), (1, 1));
    }

    #[test]
    fn matvec_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_sparse(&mut rng, 30, 20, 120);
        let x = random_complex_gaussian(20, 1, &mut rng);
        let y = a.matvec(x.as_slice());
        let dense = a.to_dense() * &x;
        for (u, v) in y.iter().zip(dense.iter()) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn adjoint_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = random_sparse(&mut rng, 25, 40, 200);
        let ad = a.adjoint();
        assert_eq!(ad.to_dense(), a.to_dense().adjoint());
        assert_eq!(ad.adjoint(), a);
    }

    #[test]
    fn identity_is_identity() {
        let id = CsrMatrix::identity(5);
        let x: Vec<C64> = (0..5).map(|i| C64::new(i as f64, -1.0)).collect();
        assert_eq!(id.matvec(&x), x);
    }
}
