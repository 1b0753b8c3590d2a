use std::collections::BTreeMap;

use serde::Serialize;

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::linalg::{c, C64, I, ZERO};
use crate::symbolic::models::hedgehog_direction;

/// Fewest grid points accepted for the 1D model.
pub const MIN_POINTS_1D: usize = 64;
/// Fewest grid points per axis accepted for the 3D model.
pub const MIN_POINTS_3D: usize = 12;
/// Smallest `λ·R` at which the hedgehog zero mode has decayed before the wall.
pub const MIN_DECAY_MARGIN: f64 = 6.0;
/// Tolerance on `φ(±L)` against its far-field value before a warning.
pub const SATURATION_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Dimension {
    One,
    Three,
}

impl Dimension {
    pub fn axes(self) -> usize {
        match self {
            Dimension::One => 1,
            Dimension::Three => 3,
        }
    }
}

/// Uniform Dirichlet grid on `[−extent, extent]^d`: the `N` interior points
/// of each axis sit at `x_j = −extent + (j + 1)h` with `h = 2·extent/(N + 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct GridSpec {
    pub dimension: Dimension,
    pub extent: f64,
    pub points: usize,
    pub spinor_rank: usize,
}

impl GridSpec {
    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / (self.points as f64 + 1.0)
    }

    pub fn axis(&self, j: usize) -> f64 {
        -self.extent + (j as f64 + 1.0) * self.spacing()
    }

    pub fn sites(&self) -> usize {
        self.points.pow(self.dimension.axes() as u32)
    }

    pub fn unknowns(&self) -> usize {
        self.sites() * self.spinor_rank
    }

    /// Coordinates of a site; the 3D site index is `(ix·N + iy)·N + iz`.
    pub fn coordinates(&self, site: usize) -> Vec<f64> {
        let n = self.points;
        match self.dimension {
            Dimension::One => vec![self.axis(site)],
            Dimension::Three => vec![
                self.axis(site / (n * n)),
                self.axis((site / n) % n),
                self.axis(site % n),
            ],
        }
    }

    /// Whether a site lies in the ball of radius `extent/2`, the region in
    /// which genuine zero modes must concentrate.
    pub fn is_interior(&self, site: usize) -> bool {
        let r2: f64 = self.coordinates(site).iter().map(|x| x * x).sum();
        r2.sqrt() < 0.5 * self.extent
    }
}

/// Finite-rank realization of `P = D + iΦ` with Dirichlet walls.
#[derive(Clone, Debug)]
pub struct DiscretizedOperator {
    pub name: String,
    pub grid: GridSpec,
    pub matrix: CsrMatrix,
    /// Conjugate transpose of `matrix`, never discretized independently.
    pub adjoint: CsrMatrix,
    pub params: BTreeMap<String, f64>,
    /// Coefficient `r` of the Wilson term `i(r h/2)(−Δ_h)`.
    pub wilson: f64,
    /// Smallest `|eig Φ|` on the outermost shell of the grid.
    pub boundary_gap: f64,
}

impl DiscretizedOperator {
    fn new(
        name: String,
        grid: GridSpec,
        matrix: CsrMatrix,
        params: BTreeMap<String, f64>,
        wilson: f64,
        boundary_gap: f64,
    ) -> Self {
        let adjoint = matrix.adjoint();
        DiscretizedOperator {
            name,
            grid,
            matrix,
            adjoint,
            params,
            wilson,
            boundary_gap,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows
    }

    /// Site of a component index.
    pub fn site_of(&self, component: usize) -> usize {
        component / self.grid.spinor_rank
    }
}

/// Default Wilson coefficient: the doubler mass `2r/h` stays above both
/// `λ` and the continuum cutoff.
pub fn default_wilson(lambda: f64, h: f64) -> f64 {
    1.0_f64.max(lambda * h)
}

/// `P = −i d/dt + iφ(t)` on `[−L, L]`.
pub fn assemble_kink_1d(
    profile: &dyn Fn(f64) -> f64,
    extent: f64,
    points: usize,
) -> Result<DiscretizedOperator> {
    let lambda = profile(extent).abs().max(profile(-extent).abs());
    let h = 2.0 * extent / (points as f64 + 1.0);
    assemble_kink_1d_with(profile, extent, points, default_wilson(lambda, h))
}

/// As [`assemble_kink_1d`] with an explicit Wilson coefficient; `r = 0`
/// gives naive central differences, whose doubler carries the opposite
/// chirality.
pub fn assemble_kink_1d_with(
    profile: &dyn Fn(f64) -> f64,
    extent: f64,
    points: usize,
    wilson: f64,
) -> Result<DiscretizedOperator> {
    if points < MIN_POINTS_1D {
        return Err(Error::Discretization(format!(
            "kink grid needs N ≥ {MIN_POINTS_1D}, got {points}"
        )));
    }
    if !(extent > 0.0) || !(wilson >= 0.0) {
        return Err(Error::Discretization(format!(
            "invalid extent {extent} or Wilson coefficient {wilson}"
        )));
    }
    let (left, right) = (profile(-extent), profile(extent));
    if left.abs() < 0.5 || right.abs() < 0.5 {
        return Err(Error::Discretization(format!(
            "potential not saturated at the walls: φ(−L) = {left:.3e}, φ(L) = {right:.3e}, need |φ| ≥ 1/2"
        )));
    }
    for (end, far) in [
        (left, profile(-2.0 * extent)),
        (right, profile(2.0 * extent)),
    ] {
        if (end - far).abs() > SATURATION_TOL {
            log::warn!("potential still varying at the wall: φ = {end:.6}, far field {far:.6}");
        }
    }
    let grid = GridSpec {
        dimension: Dimension::One,
        extent,
        points,
        spinor_rank: 1,
    };
    let h = grid.spacing();
    let mut t = Vec::with_capacity(3 * points);
    for j in 0..points {
        t.push((j, j, I * (wilson / h + profile(grid.axis(j)))));
        if j + 1 < points {
            t.push((
                j,
                j + 1,
                c(0.0, -1.0 / (2.0 * h)) - I * (wilson / (2.0 * h)),
            ));
        }
        if j > 0 {
            t.push((j, j - 1, c(0.0, 1.0 / (2.0 * h)) - I * (wilson / (2.0 * h))));
        }
    }
    let matrix = CsrMatrix::from_triplets(points, points, t);
    let params = BTreeMap::from([
        ("extent".to_string(), extent),
        ("points".to_string(), points as f64),
        ("phi_left".to_string(), left),
        ("phi_right".to_string(), right),
        ("wilson".to_string(), wilson),
    ]);
    let name = format!("kink1d(L={extent}, N={points})");
    Ok(DiscretizedOperator::new(
        name,
        grid,
        matrix,
        params,
        wilson,
        left.abs().min(right.abs()),
    ))
}

/// `Φ_k(x)` as a 2 × 2 block on the twist factor: `λ f(|x|) n̂_k(x̂)·τ`, or
/// `λ·Id` for charge 0.
fn hedgehog_potential(
    charge: i32,
    profile: &dyn Fn(f64) -> f64,
    lambda: f64,
    x: &[f64],
) -> [[C64; 2]; 2] {
    if charge == 0 {
        return [[c(lambda, 0.0), ZERO], [ZERO, c(lambda, 0.0)]];
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if r == 0.0 {
        return [[ZERO; 2]; 2];
    }
    let b: Vec<f64> = x.iter().map(|v| v / r).collect();
    let n = hedgehog_direction(charge, &b);
    let s = lambda * profile(r);
    [
        [c(s * n[2], 0.0), c(s * n[0], -s * n[1])],
        [c(s * n[0], s * n[1]), c(-s * n[2], 0.0)],
    ]
}

/// `P = σ·(−i∇) ⊗ Id₂ + i Id₂ ⊗ Φ_k` on the `N³` box of radius `R`, with
/// `f` the unit radial profile (`f(0) = 0`, `f → 1`).
pub fn assemble_hedgehog_3d(
    charge: i32,
    profile: &dyn Fn(f64) -> f64,
    extent: f64,
    points: usize,
    lambda: f64,
) -> Result<DiscretizedOperator> {
    let h = 2.0 * extent / (points as f64 + 1.0);
    assemble_hedgehog_3d_with(
        charge,
        profile,
        extent,
        points,
        lambda,
        default_wilson(lambda, h),
    )
}

pub fn assemble_hedgehog_3d_with(
    charge: i32,
    profile: &dyn Fn(f64) -> f64,
    extent: f64,
    points: usize,
    lambda: f64,
    wilson: f64,
) -> Result<DiscretizedOperator> {
    if points < MIN_POINTS_3D {
        return Err(Error::Discretization(format!(
            "hedgehog grid needs N ≥ {MIN_POINTS_3D} per axis, got {points}"
        )));
    }
    if !(lambda > 0.0) || lambda * extent < MIN_DECAY_MARGIN {
        return Err(Error::Discretization(format!(
            "decay margin λ·R = {:.3} below {MIN_DECAY_MARGIN}; zero modes would reach the walls",
            lambda * extent
        )));
    }
    if charge != 0 && profile(0.0).abs() > 1e-12 {
        return Err(Error::Discretization(format!(
            "radial profile must vanish at the origin, f(0) = {}",
            profile(0.0)
        )));
    }
    if !(wilson >= 0.0) {
        return Err(Error::Discretization(format!(
            "invalid Wilson coefficient {wilson}"
        )));
    }
    let grid = GridSpec {
        dimension: Dimension::Three,
        extent,
        points,
        spinor_rank: 4,
    };
    let n = points;
    let h = grid.spacing();
    let sites = grid.sites();
    // σ_j as (row → (col, value)) on the spin factor.
    let sigma: [[(usize, C64); 2]; 3] = [
        [(1, c(1.0, 0.0)), (0, c(1.0, 0.0))],
        [(1, c(0.0, -1.0)), (0, c(0.0, 1.0))],
        [(0, c(1.0, 0.0)), (1, c(-1.0, 0.0))],
    ];
    let strides = [n * n, n, 1];
    let mut t = Vec::with_capacity(sites * 4 * 15);
    for site in 0..sites {
        let idx = [site / (n * n), (site / n) % n, site % n];
        let x = grid.coordinates(site);
        let phi = hedgehog_potential(charge, profile, lambda, &x);
        for spin in 0..2 {
            for tw in 0..2 {
                let row = site * 4 + spin * 2 + tw;
                t.push((row, row, I * (3.0 * wilson / h)));
                for tw2 in 0..2 {
                    t.push((row, site * 4 + spin * 2 + tw2, I * phi[tw][tw2]));
                }
                for axis in 0..3 {
                    let (spin2, s) = sigma[axis][spin];
                    for (step, forward) in [(1_isize, true), (-1, false)] {
                        let j = idx[axis] as isize + step;
                        if j < 0 || j >= n as isize {
                            continue;
                        }
                        let nb = (site as isize + step * strides[axis] as isize) as usize;
                        // −i ∂_j by central differences on σ_j ⊗ Id₂.
                        let d = if forward {
                            c(0.0, -1.0 / (2.0 * h))
                        } else {
                            c(0.0, 1.0 / (2.0 * h))
                        };
                        t.push((row, nb * 4 + spin2 * 2 + tw, s * d));
                        t.push((row, nb * 4 + spin * 2 + tw, -I * (wilson / (2.0 * h))));
                    }
                }
            }
        }
    }
    let dim = sites * 4;
    let matrix = CsrMatrix::from_triplets(dim, dim, t);
    let boundary_gap = if charge == 0 {
        lambda
    } else {
        lambda * profile(extent - h).abs()
    };
    let params = BTreeMap::from([
        ("charge".to_string(), charge as f64),
        ("extent".to_string(), extent),
        ("lambda".to_string(), lambda),
        ("points".to_string(), points as f64),
        ("wilson".to_string(), wilson),
    ]);
    let name = format!("hedgehog3d(k={charge}, R={extent}, N={points}, lambda={lambda})");
    Ok(DiscretizedOperator::new(
        name,
        grid,
        matrix,
        params,
        wilson,
        boundary_gap,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, pauli, Mat};

    fn tanh(t: f64) -> f64 {
        t.tanh()
    }

    #[test]
    fn adjoint_is_bit_exact_conjugate_transpose() {
        let op = assemble_kink_1d(&tanh, 10.0, 100).unwrap();
        assert_eq!(op.adjoint.to_dense(), op.matrix.to_dense().adjoint());
        let hh = assemble_hedgehog_3d(1, &tanh, 12.0, 12, 1.0).unwrap();
        assert_eq!(hh.adjoint.adjoint(), hh.matrix);
        assert_eq!(hh.dim(), 12 * 12 * 12 * 4);
    }

    #[test]
    fn sparsity_respects_block_bound() {
        let op = assemble_kink_1d(&tanh, 10.0, 100).unwrap();
        assert!(op.matrix.max_row_nnz() <= 3);
        let hh = assemble_hedgehog_3d(2, &tanh, 12.0, 12, 1.0).unwrap();
        // (2·3 + 1) blocks of width 4.
        assert!(hh.matrix.max_row_nnz() <= 7 * 4);
    }

    #[test]
    fn derivative_part_is_hermitian() {
        // With Φ = 0 and r = 0 the operator is −i times an antisymmetric real matrix.
        let op = assemble_kink_1d_with(&|_| 1.0, 10.0, 80, 0.0).unwrap();
        let d = op.matrix.to_dense() - Mat::identity(80, 80) * I;
        assert_eq!(d.adjoint(), d);
    }

    #[test]
    fn kink_symbol_matches_plane_waves() {
        // Away from the walls P e^{iξx} = (sin(ξh)/h + i(φ + r(1 − cos ξh)/h)) e^{iξx}.
        let phi = |t: f64| 0.7 + 0.1 * t.sin();
        let op = assemble_kink_1d_with(&phi, 8.0, 200, 1.3).unwrap();
        let h = op.grid.spacing();
        for xi in [0.0, 0.4, 2.0, std::f64::consts::PI / h] {
            let u: Vec<C64> = (0..200)
                .map(|j| C64::from_polar(1.0, xi * op.grid.axis(j)))
                .collect();
            let pu = op.matrix.matvec(&u);
            for j in 1..199 {
                let x = op.grid.axis(j);
                let symbol = c(
                    (xi * h).sin() / h,
                    phi(x) + 1.3 * (1.0 - (xi * h).cos()) / h,
                );
                assert!((pu[j] - symbol * u[j]).norm() < 1e-10, "ξ={xi} j={j}");
            }
        }
    }

    #[test]
    fn hedgehog_symbol_matches_plane_waves() {
        let n = 12;
        let op = assemble_hedgehog_3d_with(1, &tanh, 6.0, n, 1.5, 0.8).unwrap();
        let h = op.grid.spacing();
        let xi = [0.3, -1.1, 2.2];
        let v = [c(0.3, 0.1), c(-0.5, 0.2), c(0.0, 0.7), c(0.4, -0.4)];
        let mut u = vec![ZERO; op.dim()];
        for site in 0..op.grid.sites() {
            let x = op.grid.coordinates(site);
            let phase = C64::from_polar(1.0, xi.iter().zip(&x).map(|(a, b)| a * b).sum());
            for a in 0..4 {
                u[site * 4 + a] = phase * v[a];
            }
        }
        let pu = op.matrix.matvec(&u);
        let [sx, sy, sz] = pauli();
        let id2 = Mat::identity(2, 2);
        let xi_d: Vec<f64> = xi.iter().map(|k| (k * h).sin() / h).collect();
        let wilson: f64 = xi.iter().map(|k| 0.8 * (1.0 - (k * h).cos()) / h).sum();
        let dirac = kron(&sx, &id2) * c(xi_d[0], 0.0)
            + kron(&sy, &id2) * c(xi_d[1], 0.0)
            + kron(&sz, &id2) * c(xi_d[2], 0.0);
        let vv = nalgebra::DVector::from_column_slice(&v);
        let mut checked = 0;
        for site in 0..op.grid.sites() {
            let idx = [site / (n * n), (site / n) % n, site % n];
            if idx.iter().any(|&i| i == 0 || i == n - 1) {
                continue;
            }
            let x = op.grid.coordinates(site);
            let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            let b: Vec<f64> = x.iter().map(|a| a / r).collect();
            let phi = kron(&id2, &crate::linalg::pauli_dot(hedgehog_direction(1, &b)))
                * c(1.5 * r.tanh(), 0.0);
            let symbol = &dirac + (phi + Mat::identity(4, 4) * c(wilson, 0.0)) * I;
            let expect = symbol * &vv * u[site * 4] / v[0];
            for a in 0..4 {
                assert!((pu[site * 4 + a] - expect[a]).norm() < 1e-10);
            }
            checked += 1;
        }
        assert_eq!(checked, 10 * 10 * 10);
    }

    #[test]
    fn preconditions_are_enforced() {
        assert!(matches!(
            assemble_kink_1d(&tanh, 20.0, 2),
            Err(Error::Discretization(_))
        ));
        assert!(matches!(
            assemble_kink_1d(&|t: f64| 0.1 * t.tanh(), 20.0, 100),
            Err(Error::Discretization(_))
        ));
        assert!(matches!(
            assemble_hedgehog_3d(1, &tanh, 5.0, 16, 1.0),
            Err(Error::Discretization(_))
        ));
        assert!(matches!(
            assemble_hedgehog_3d(1, &tanh, 12.0, 10, 1.0),
            Err(Error::Discretization(_))
        ));
        assert!(matches!(
            assemble_hedgehog_3d(1, &|r: f64| r.cos(), 12.0, 12, 1.0),
            Err(Error::Discretization(_))
        ));
    }

    #[test]
    fn grid_geometry() {
        let g = GridSpec {
            dimension: Dimension::Three,
            extent: 12.0,
            points: 16,
            spinor_rank: 4,
        };
        assert!((g.spacing() - 24.0 / 17.0).abs() < 1e-15);
        assert_eq!(g.coordinates(0), vec![g.axis(0); 3]);
        assert!((g.axis(0) + g.axis(15)).abs() < 1e-12);
        assert!(!g.is_interior(0));
        assert!(g.is_interior((8 * 16 + 8) * 16 + 8));
    }
}
