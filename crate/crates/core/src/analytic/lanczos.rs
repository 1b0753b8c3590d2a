use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{eigh, Mat, C64};

/// Which end of the spectrum a Hermitian eigensolve targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Smallest,
    Largest,
}

#[derive(Clone, Debug)]
pub struct EigenRequest {
    pub nev: usize,
    /// Krylov basis size; at least `nev + 2`.
    pub ncv: usize,
    pub which: Which,
    /// A Ritz pair is accepted when its residual is at most
    /// `tol · max(|θ|, floor · ‖A‖)`.
    pub tol: f64,
    pub floor: f64,
    pub max_matvecs: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Ritz values, ordered from the targeted end.
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
    /// Residual estimates `‖A y − θ y‖` of the returned pairs.
    pub residuals: Vec<f64>,
    pub matvecs: usize,
    pub restarts: usize,
    /// Largest Ritz magnitude seen, an estimate of `‖A‖`.
    pub norm_estimate: f64,
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthogonalizes `w` against `locked` and `basis` twice (classical
/// Gram-Schmidt with reorthogonalization) and returns the accumulated
/// coefficients along `basis`.
fn orthogonalize(locked: &[Vec<C64>], basis: &[Vec<C64>], w: &mut [C64]) -> Vec<C64> {
    let mut coeffs = vec![C64::new(0.0, 0.0); basis.len()];
    for _ in 0..2 {
        for v in locked {
            let c = dot(v, w);
            w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
        }
        for (k, v) in basis.iter().enumerate() {
            let c = dot(v, w);
            coeffs[k] += c;
            w.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
        }
    }
    coeffs
}

fn random_unit(
    n: usize,
    locked: &[Vec<C64>],
    basis: &[Vec<C64>],
    rng: &mut ChaCha8Rng,
) -> Vec<C64> {
    loop {
        let mut v: Vec<C64> = (0..n)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        orthogonalize(locked, basis, &mut v);
        let nv = norm(&v);
        if nv > 1e-8 {
            v.iter_mut().for_each(|x| *x /= nv);
            return v;
        }
    }
}

/// Extreme eigenpairs of a Hermitian operator by thick-restart Lanczos with
/// full reorthogonalization. `apply(x, y)` must write `A x` into `y`.
///
/// Single-vector Krylov spaces can converge before every copy of a
/// degenerate eigenvalue has appeared, so each converged set is followed by
/// probe runs restricted to its orthogonal complement. A probe value beyond
/// the current set replaces its weakest member; the first probe that does
/// not improve the set ends the search.
pub fn hermitian_eigs(
    n: usize,
    apply: &dyn Fn(&[C64], &mut [C64]),
    req: &EigenRequest,
) -> Result<EigenResult> {
    let mut best = thick_restart(n, apply, req, &[], req.seed)?;
    let mut matvecs = best.matvecs;
    let mut restarts = best.restarts;
    let better = |a: f64, b: f64| match req.which {
        Which::Smallest => a < b,
        Which::Largest => a > b,
    };
    let mut round = 1;
    while best.vectors.len() < n {
        let probe_req = EigenRequest {
            nev: 1,
            max_matvecs: req.max_matvecs.saturating_sub(matvecs),
            ..req.clone()
        };
        let probe = thick_restart(
            n,
            apply,
            &probe_req,
            &best.vectors,
            req.seed.wrapping_add(round),
        )?;
        matvecs += probe.matvecs;
        restarts += probe.restarts;
        best.norm_estimate = best.norm_estimate.max(probe.norm_estimate);
        let worst = *best.values.last().unwrap();
        let margin = req.tol * best.norm_estimate.max(f64::MIN_POSITIVE);
        let candidate = probe.values[0];
        let improves = match req.which {
            Which::Smallest => candidate < worst - margin,
            Which::Largest => candidate > worst + margin,
        };
        if !improves {
            break;
        }
        let pos = best
            .values
            .iter()
            .position(|&v| better(candidate, v))
            .unwrap();
        best.values.insert(pos, candidate);
        best.vectors
            .insert(pos, probe.vectors.into_iter().next().unwrap());
        best.residuals.insert(pos, probe.residuals[0]);
        best.values.pop();
        best.vectors.pop();
        best.residuals.pop();
        round += 1;
    }
    best.matvecs = matvecs;
    best.restarts = restarts;
    Ok(best)
}

fn thick_restart(
    n: usize,
    apply: &dyn Fn(&[C64], &mut [C64]),
    req: &EigenRequest,
    locked: &[Vec<C64>],
    seed: u64,
) -> Result<EigenResult> {
    let free = n - locked.len();
    let nev = req.nev.min(free);
    let ncv = req.ncv.max(nev + 2).min(free);
    if nev == 0 {
        return Err(Error::Dimension("no eigenvalues requested".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<C64>> = vec![random_unit(n, locked, &[], &mut rng)];
    let mut h = Mat::zeros(ncv, ncv);
    let mut matvecs = 0;
    let mut restarts = 0;
    let mut norm_estimate = 0.0_f64;
    let mut w = vec![C64::new(0.0, 0.0); n];
    loop {
        // Extend the basis to `ncv` vectors; column j of H is V* A v_j.
        let mut beta = 0.0;
        for j in basis.len() - 1..ncv {
            apply(&basis[j], &mut w);
            matvecs += 1;
            let coeffs = orthogonalize(locked, &basis, &mut w);
            for (i, c) in coeffs.iter().enumerate() {
                h[(i, j)] = *c;
                h[(j, i)] = c.conj();
            }
            h[(j, j)] = C64::new(coeffs[j].re, 0.0);
            beta = norm(&w);
            let next = if beta > 1e-14 * norm_estimate.max(h[(j, j)].norm()).max(1e-300) {
                w.iter().map(|x| x / beta).collect()
            } else if basis.len() < free {
                // Invariant subspace found; continue in a fresh direction.
                beta = 0.0;
                random_unit(n, locked, &basis, &mut rng)
            } else {
                beta = 0.0;
                vec![C64::new(0.0, 0.0); n]
            };
            basis.push(next);
        }
        let (theta, y) = eigh(&h);
        norm_estimate = norm_estimate.max(theta.iter().map(|t| t.abs()).fold(0.0, f64::max));
        let order: Vec<usize> = match req.which {
            Which::Smallest => (0..ncv).collect(),
            Which::Largest => (0..ncv).rev().collect(),
        };
        let residual = |i: usize| beta * y[(ncv - 1, i)].norm();
        let accepted =
            |i: usize| residual(i) <= req.tol * theta[i].abs().max(req.floor * norm_estimate);
        let converged = order[..nev].iter().all(|&i| accepted(i));
        if converged || matvecs >= req.max_matvecs || ncv == free {
            let vectors: Vec<Vec<C64>> = order[..nev]
                .iter()
                .map(|&i| {
                    let mut v = vec![C64::new(0.0, 0.0); n];
                    for k in 0..ncv {
                        let c = y[(k, i)];
                        v.iter_mut().zip(&basis[k]).for_each(|(x, b)| *x += c * b);
                    }
                    v
                })
                .collect();
            let residuals: Vec<f64> = order[..nev].iter().map(|&i| residual(i)).collect();
            if !converged && ncv < free {
                let worst = residuals.iter().cloned().fold(0.0, f64::max);
                return Err(Error::Convergence {
                    matvecs,
                    residual: worst,
                });
            }
            return Ok(EigenResult {
                values: order[..nev].iter().map(|&i| theta[i]).collect(),
                vectors,
                residuals,
                matvecs,
                restarts,
                norm_estimate,
            });
        }
        // Thick restart: keep the wanted end plus half the rest, then the
        // residual direction. H becomes diag(θ) bordered by β·y_last.
        let keep = (nev + (ncv - nev) / 2).min(ncv - 1);
        let kept: Vec<usize> = order[..keep].to_vec();
        let residual_vec = basis.pop().unwrap();
        let mut new_basis: Vec<Vec<C64>> = Vec::with_capacity(ncv + 1);
        for &i in &kept {
            let mut v = vec![C64::new(0.0, 0.0); n];
            for k in 0..ncv {
                let c = y[(k, i)];
                v.iter_mut().zip(&basis[k]).for_each(|(x, b)| *x += c * b);
            }
            new_basis.push(v);
        }
        new_basis.push(residual_vec);
        h.fill(C64::new(0.0, 0.0));
        for (a, &i) in kept.iter().enumerate() {
            h[(a, a)] = C64::new(theta[i], 0.0);
            let border = y[(ncv - 1, i)] * beta;
            h[(keep, a)] = border;
            h[(a, keep)] = border.conj();
        }
        basis = new_basis;
        restarts += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_spectrum, random_unitary};

    fn dense_apply(m: &Mat) -> impl Fn(&[C64], &mut [C64]) + '_ {
        move |x, y| {
            for (r, out) in y.iter_mut().enumerate() {
                *out = (0..m.ncols()).map(|c| m[(r, c)] * x[c]).sum();
            }
        }
    }

    fn request(nev: usize, ncv: usize, which: Which) -> EigenRequest {
        EigenRequest {
            nev,
            ncv,
            which,
            tol: 1e-10,
            floor: 1e-12,
            max_matvecs: 20_000,
            seed: 3,
        }
    }

    #[test]
    fn recovers_known_spectrum_with_restarts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 120;
        let spectrum: Vec<f64> = (0..n)
            .map(|i| 0.01 + i as f64 * 0.5 + if i < 3 { 0.0 } else { 1.0 })
            .collect();
        let q = random_unitary(n, &mut rng);
        let a = from_spectrum(&q, &spectrum);
        let r = hermitian_eigs(n, &dense_apply(&a), &request(3, 12, Which::Smallest)).unwrap();
        assert!(r.restarts > 0);
        for (k, v) in r.values.iter().enumerate() {
            assert!(
                (v - spectrum[k]).abs() < 1e-8,
                "{k}: {v} vs {}",
                spectrum[k]
            );
        }
        let top = hermitian_eigs(n, &dense_apply(&a), &request(2, 10, Which::Largest)).unwrap();
        assert!((top.values[0] - spectrum[n - 1]).abs() < 1e-8);
        assert!((top.values[1] - spectrum[n - 2]).abs() < 1e-8);
    }

    #[test]
    fn vectors_are_eigenvectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 40;
        let spectrum: Vec<f64> = (0..n).map(|i| (i as f64).powi(2)).collect();
        let a = from_spectrum(&random_unitary(n, &mut rng), &spectrum);
        let r = hermitian_eigs(n, &dense_apply(&a), &request(2, 16, Which::Smallest)).unwrap();
        for (v, t) in r.vectors.iter().zip(&r.values) {
            let mut av = vec![C64::new(0.0, 0.0); n];
            dense_apply(&a)(v, &mut av);
            let res: f64 = av
                .iter()
                .zip(v)
                .map(|(x, y)| (x - y * t).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-8);
            assert!((norm(v) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_copies_are_all_found() {
        // A Krylov space of one start vector meets each eigenspace in a
        // single direction; the probes must recover the other copies.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 80;
        let mut spectrum: Vec<f64> = vec![0.01, 1.0, 1.0, 1.0];
        spectrum.extend((4..n).map(|i| 1.5 + i as f64 * 0.1));
        let a = from_spectrum(&random_unitary(n, &mut rng), &spectrum);
        let r = hermitian_eigs(n, &dense_apply(&a), &request(4, 12, Which::Smallest)).unwrap();
        for (v, e) in r.values.iter().zip(&spectrum) {
            assert!((v - e).abs() < 1e-8, "{:?}", r.values);
        }
        let gram: f64 = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| {
                (dot(&r.vectors[i], &r.vectors[j]) - if i == j { 1.0 } else { 0.0 }).norm()
            })
            .fold(0.0, f64::max);
        assert!(gram < 1e-10);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = from_spectrum(
            &random_unitary(30, &mut rng),
            &(0..30).map(|i| i as f64).collect::<Vec<_>>(),
        );
        let r1 = hermitian_eigs(30, &dense_apply(&a), &request(2, 8, Which::Smallest)).unwrap();
        let r2 = hermitian_eigs(30, &dense_apply(&a), &request(2, 8, Which::Smallest)).unwrap();
        assert_eq!(r1.values, r2.values);
        assert_eq!(r1.matvecs, r2.matvecs);
    }

    #[test]
    fn small_operators_solve_exactly() {
        let a = Mat::identity(3, 3);
        let r = hermitian_eigs(3, &dense_apply(&a), &request(3, 8, Which::Smallest)).unwrap();
        assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 200;
        let a = from_spectrum(
            &random_unitary(n, &mut rng),
            &(0..n).map(|i| 1.0 + i as f64 * 1e-3).collect::<Vec<_>>(),
        );
        let mut req = request(4, 8, Which::Smallest);
        req.max_matvecs = 20;
        assert!(matches!(
            hermitian_eigs(n, &dense_apply(&a), &req),
            Err(Error::Convergence { .. })
        ));
    }
}
