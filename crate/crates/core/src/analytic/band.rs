use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::linalg::C64;

/// LU factorization with partial pivoting of a square banded matrix.
///
/// Row `i` stores columns `i − kl ..= i + ku + kl`; the extra `kl`
/// superdiagonals hold fill from row interchanges.
#[derive(Clone, Debug)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    rows: Vec<C64>,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        if a.nrows != a.ncols {
            return Err(Error::Dimension(format!(
                "band LU of a {} × {} matrix",
                a.nrows, a.ncols
            )));
        }
        let n = a.nrows;
        let (kl, ku) = a.bandwidth();
        let width = 2 * kl + ku + 1;
        let mut lu = BandLu {
            n,
            kl,
            ku,
            width,
            rows: vec![C64::new(0.0, 0.0); n * width],
            pivots: vec![0; n],
        };
        for r in 0..n {
            for (c, v) in a.row(r) {
                *lu.at(r, c) = v;
            }
        }
        let scale = a.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let p = (k..=last)
                .max_by(|&i, &j| lu.get(i, k).norm().total_cmp(&lu.get(j, k).norm()))
                .unwrap();
            lu.pivots[k] = p;
            let hi = (k + ku + kl).min(n - 1);
            if p != k {
                for j in k..=hi {
                    let (x, y) = (lu.get(k, j), lu.get(p, j));
                    *lu.at(k, j) = y;
                    *lu.at(p, j) = x;
                }
            }
            let pivot = lu.get(k, k);
            if pivot.norm() <= f64::EPSILON * scale * 1e-3 {
                return Err(Error::Singular {
                    min_singular_value: pivot.norm(),
                });
            }
            for i in k + 1..=last {
                let l = lu.get(i, k) / pivot;
                *lu.at(i, k) = l;
                if l != C64::new(0.0, 0.0) {
                    for j in k + 1..=hi {
                        let u = lu.get(k, j);
                        *lu.at(i, j) -= l * u;
                    }
                }
            }
        }
        Ok(lu)
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.width + (j + self.kl - i)
    }

    fn get(&self, i: usize, j: usize) -> C64 {
        self.rows[self.slot(i, j)]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut C64 {
        let s = self.slot(i, j);
        &mut self.rows[s]
    }

    /// Solves `A x = b` in place.
    pub fn solve(&self, b: &mut [C64]) {
        let n = self.n;
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                b[i] -= self.get(i, k) * bk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for j in k + 1..=(k + self.ku + self.kl).min(n - 1) {
                acc -= self.get(k, j) * b[j];
            }
            b[k] = acc / self.get(k, k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_band(rng: &mut ChaCha8Rng, n: usize, kl: usize, ku: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for r in 0..n {
            for c in r.saturating_sub(kl)..=(r + ku).min(n - 1) {
                t.push((
                    r,
                    c,
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                ));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn solves_random_banded_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (n, kl, ku) in [(1, 0, 0), (7, 1, 1), (40, 3, 2), (60, 0, 4), (50, 5, 0)] {
            let a = random_band(&mut rng, n, kl, ku);
            let x: Vec<C64> = (0..n)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let b = a.matvec(&x);
            let mut y = b.clone();
            BandLu::factor(&a).unwrap().solve(&mut y);
            // Random triangular bands can be badly conditioned; the backward
            // error is what partial pivoting controls.
            let res = a
                .matvec(&y)
                .iter()
                .zip(&b)
                .map(|(u, v)| (u - v).norm())
                .fold(0.0, f64::max);
            assert!(res < 1e-10, "n={n} kl={kl} ku={ku}: residual {res:.2e}");
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        // [[0, 1], [1, 0]] needs a row interchange.
        let one = C64::new(1.0, 0.0);
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 1, one), (1, 0, one)]);
        let mut b = vec![C64::new(2.0, 0.0), C64::new(3.0, 0.0)];
        BandLu::factor(&a).unwrap().solve(&mut b);
        assert_eq!(b, vec![C64::new(3.0, 0.0), C64::new(2.0, 0.0)]);
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = CsrMatrix::from_triplets(
            3,
            3,
            vec![(0, 0, C64::new(1.0, 0.0)), (1, 1, C64::new(0.0, 0.0))],
        );
        assert!(matches!(BandLu::factor(&a), Err(Error::Singular { .. })));
    }
}
