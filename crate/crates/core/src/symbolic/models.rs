//! Built-in symbol models.
//!
//! Each model supplies `σ(D)` and `Φ` pointwise. Dirac-type models also
//! supply their Clifford generators `cl(e_j)`, normalized so that
//! `σ(D)(ξ) = i·cl(ξ)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::SymbolModel;
use crate::linalg::{
    c, eigh, from_spectrum, identity, kron, pauli, pauli_dot, random_hermitian, random_unitary,
    Mat, I, ONE,
};

/// Dirac-type models expose their Clifford action over `∂X`.
pub trait DiracModel: SymbolModel {
    /// `cl(e_j)` for `j < ambient_dim` at the boundary point `b̂`.
    fn clifford_generators(&self, b: &[f64]) -> Vec<Mat>;
}

fn scalar(z: crate::linalg::C64) -> Mat {
    Mat::from_element(1, 1, z)
}

/// `P = −i d/dt + iφ(t)` with `φ(−∞) = left`, `φ(+∞) = right`.
#[derive(Clone, Debug)]
pub struct Kink1d {
    pub left: f64,
    pub right: f64,
}

impl Kink1d {
    pub fn kink() -> Self {
        Kink1d {
            left: -1.0,
            right: 1.0,
        }
    }
    pub fn anti_kink() -> Self {
        Kink1d {
            left: 1.0,
            right: -1.0,
        }
    }
    pub fn trivial() -> Self {
        Kink1d {
            left: 1.0,
            right: 1.0,
        }
    }
}

impl SymbolModel for Kink1d {
    fn name(&self) -> String {
        format!("kink1d({}, {})", self.left, self.right)
    }
    fn rank(&self) -> usize {
        1
    }
    fn ambient_dim(&self) -> usize {
        1
    }
    fn principal(&self, _x: &[f64], omega: &[f64]) -> Mat {
        scalar(c(omega[0], 0.0))
    }
    fn principal_at_infinity(&self, _b: &[f64], omega: &[f64]) -> Mat {
        scalar(c(omega[0], 0.0))
    }
    fn potential(&self, b: &[f64]) -> Mat {
        scalar(c(if b[0] < 0.0 { self.left } else { self.right }, 0.0))
    }
}

impl DiracModel for Kink1d {
    fn clifford_generators(&self, _b: &[f64]) -> Vec<Mat> {
        vec![scalar(-I)]
    }
}

/// Unit vector `(sin ϑ cos kφ, sin ϑ sin kφ, cos ϑ)` for `b̂` at polar angles `(ϑ, φ)`.
pub fn hedgehog_direction(charge: i32, b: &[f64]) -> [f64; 3] {
    let z = b[2].clamp(-1.0, 1.0);
    let theta = z.acos();
    let phi = b[1].atan2(b[0]);
    let k = charge as f64;
    [
        theta.sin() * (k * phi).cos(),
        theta.sin() * (k * phi).sin(),
        z,
    ]
}

/// `σ·ξ ⊗ 1 + i·1 ⊗ λ n̂_k·τ` on `ℝ³`; charge 0 means `Φ = λ·Id`.
#[derive(Clone, Debug)]
pub struct Hedgehog {
    pub charge: i32,
    pub lambda: f64,
}

impl SymbolModel for Hedgehog {
    fn name(&self) -> String {
        format!("hedgehog(k={}, lambda={})", self.charge, self.lambda)
    }
    fn rank(&self) -> usize {
        4
    }
    fn ambient_dim(&self) -> usize {
        3
    }
    fn principal(&self, _x: &[f64], omega: &[f64]) -> Mat {
        kron(&pauli_dot([omega[0], omega[1], omega[2]]), &identity(2))
    }
    fn principal_at_infinity(&self, _b: &[f64], omega: &[f64]) -> Mat {
        self.principal(&[], omega)
    }
    fn potential(&self, b: &[f64]) -> Mat {
        if self.charge == 0 {
            return identity(4) * c(self.lambda, 0.0);
        }
        kron(&identity(2), &pauli_dot(hedgehog_direction(self.charge, b))) * c(self.lambda, 0.0)
    }
}

impl DiracModel for Hedgehog {
    fn clifford_generators(&self, _b: &[f64]) -> Vec<Mat> {
        pauli()
            .iter()
            .map(|s| kron(s, &identity(2)) * (-I))
            .collect()
    }
}

/// `σ·ξ + i x̂·σ` with both acting on the same spinor factor. The potential
/// does not commute with the symbol, so the data is not of Callias type.
#[derive(Clone, Debug)]
pub struct SameFactorHedgehog;

impl SymbolModel for SameFactorHedgehog {
    fn name(&self) -> String {
        "same-factor-hedgehog".into()
    }
    fn rank(&self) -> usize {
        2
    }
    fn ambient_dim(&self) -> usize {
        3
    }
    fn principal(&self, _x: &[f64], omega: &[f64]) -> Mat {
        pauli_dot([omega[0], omega[1], omega[2]])
    }
    fn principal_at_infinity(&self, _b: &[f64], omega: &[f64]) -> Mat {
        self.principal(&[], omega)
    }
    fn potential(&self, b: &[f64]) -> Mat {
        pauli_dot([b[0], b[1], b[2]])
    }
}

/// Seeded random compatible data on the line. At each end the symbol and
/// the potential share a random eigenframe `Q_±`; the symbol's eigenvalue
/// signs agree between the ends so the interior stays elliptic, and the
/// frame is carried across by `Q(t) = Q_− exp(i t H)`, `t = (1 + tanh x)/2`.
#[derive(Clone, Debug)]
pub struct RandomCompatible1d {
    pub rank: usize,
    pub seed: u64,
    q_minus: Mat,
    h_eigvals: Vec<f64>,
    h_frame: Mat,
    symbol_eigs: [Vec<f64>; 2],
    potential_eigs: [Vec<f64>; 2],
}

impl RandomCompatible1d {
    pub fn new(rank: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q_minus = random_unitary(rank, &mut rng);
        let (h_eigvals, h_frame) = eigh(&random_hermitian(rank, &mut rng));
        let signs: Vec<f64> = (0..rank)
            .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
            .collect();
        let mag = |rng: &mut ChaCha8Rng| rng.random_range(0.5..2.0);
        let symbol_eigs = [
            signs.iter().map(|s| s * mag(&mut rng)).collect(),
            signs.iter().map(|s| s * mag(&mut rng)).collect(),
        ];
        let mut pot = || -> Vec<f64> {
            (0..rank)
                .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 } * rng.random_range(0.5..2.0))
                .collect()
        };
        let potential_eigs = [pot(), pot()];
        RandomCompatible1d {
            rank,
            seed,
            q_minus,
            h_eigvals,
            h_frame,
            symbol_eigs,
            potential_eigs,
        }
    }

    fn frame(&self, t: f64) -> Mat {
        let phases: Vec<crate::linalg::C64> = self
            .h_eigvals
            .iter()
            .map(|&l| (I * (t * l)).exp())
            .collect();
        let d = Mat::from_diagonal(&nalgebra::DVector::from_vec(phases));
        &self.q_minus * (&self.h_frame * d * self.h_frame.adjoint())
    }

    fn end(&self, b: f64) -> usize {
        usize::from(b >= 0.0)
    }
}

impl SymbolModel for RandomCompatible1d {
    fn name(&self) -> String {
        format!("random-compatible(rank={}, seed={})", self.rank, self.seed)
    }
    fn rank(&self) -> usize {
        self.rank
    }
    fn ambient_dim(&self) -> usize {
        1
    }
    fn principal(&self, x: &[f64], omega: &[f64]) -> Mat {
        let t = 0.5 * (1.0 + x[0].tanh());
        let eigs: Vec<f64> = (0..self.rank)
            .map(|j| omega[0] * ((1.0 - t) * self.symbol_eigs[0][j] + t * self.symbol_eigs[1][j]))
            .collect();
        from_spectrum(&self.frame(t), &eigs)
    }
    fn principal_at_infinity(&self, b: &[f64], omega: &[f64]) -> Mat {
        let e = self.end(b[0]);
        let eigs: Vec<f64> = self.symbol_eigs[e].iter().map(|v| omega[0] * v).collect();
        from_spectrum(&self.frame(e as f64), &eigs)
    }
    fn potential(&self, b: &[f64]) -> Mat {
        let e = self.end(b[0]);
        from_spectrum(&self.frame(e as f64), &self.potential_eigs[e])
    }
}

/// Tabulated 1D data: symbol slopes `S_∓` and potentials `Φ_∓` at the two
/// ends, so `σ_sc(D)(∓1, ξ) = ξ·S_∓`. The interior symbol switches from
/// `S_−` to `S_+` at the origin; the sampled data never straddles it.
#[derive(Clone, Debug, PartialEq)]
pub struct Tabulated1d {
    pub name: String,
    pub slopes: [Mat; 2],
    pub potentials: [Mat; 2],
}

impl SymbolModel for Tabulated1d {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn rank(&self) -> usize {
        self.slopes[0].nrows()
    }
    fn ambient_dim(&self) -> usize {
        1
    }
    fn principal(&self, x: &[f64], omega: &[f64]) -> Mat {
        &self.slopes[usize::from(x[0] >= 0.0)] * c(omega[0], 0.0)
    }
    fn principal_at_infinity(&self, b: &[f64], omega: &[f64]) -> Mat {
        &self.slopes[usize::from(b[0] >= 0.0)] * c(omega[0], 0.0)
    }
    fn potential(&self, b: &[f64]) -> Mat {
        self.potentials[usize::from(b[0] >= 0.0)].clone()
    }
}

/// Unit vector of `(sin kθ, sin α, 1 + cos kθ + cos α)`; the map `T² → S²`
/// has degree `±k`.
pub fn lattice_direction(k: i32, theta: f64, alpha: f64) -> [f64; 3] {
    let kt = k as f64 * theta;
    let d = [kt.sin(), alpha.sin(), 1.0 + kt.cos() + alpha.cos()];
    let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    [d[0] / r, d[1] / r, d[2] / r]
}

/// Rank-4 synthetic data over the 2D corner `S¹ × S¹`:
/// `σ(D) = n̂·σ ⊕ conj(n̂·σ)` with `n̂` from [`lattice_direction`] and
/// `Φ = diag(1, 1, −1, −1)`. The four joint eigenbundles are lines with
/// Chern numbers `(c, c, −c, −c)` on `(V⁺₊, V⁻₋, V⁺₋, V⁻₊)`. The symbol is
/// extended radially constant into the interior.
#[derive(Clone, Debug)]
pub struct SyntheticCorner2d {
    pub winding: i32,
}

impl SyntheticCorner2d {
    fn block(&self, b: &[f64], omega: &[f64]) -> Mat {
        let theta = b[1].atan2(b[0]);
        let alpha = omega[1].atan2(omega[0]);
        let a = pauli_dot(lattice_direction(self.winding, theta, alpha));
        let mut out = Mat::zeros(4, 4);
        out.view_mut((0, 0), (2, 2)).copy_from(&a);
        out.view_mut((2, 2), (2, 2)).copy_from(&a.map(|z| z.conj()));
        out
    }
}

impl SymbolModel for SyntheticCorner2d {
    fn name(&self) -> String {
        format!("synthetic-corner(k={})", self.winding)
    }
    fn rank(&self) -> usize {
        4
    }
    fn ambient_dim(&self) -> usize {
        2
    }
    fn principal(&self, x: &[f64], omega: &[f64]) -> Mat {
        self.block(x, omega)
    }
    fn principal_at_infinity(&self, b: &[f64], omega: &[f64]) -> Mat {
        self.block(b, omega)
    }
    fn potential(&self, _b: &[f64]) -> Mat {
        Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, -ONE, -ONE]))
    }
}

/// Dirac-type synthetic data over `∂X = S¹` on `ℂ² ⊗ ℂ²`:
/// `cl(ν) = −iσ_z`, `cl(τ) = −i(cos kθ σ_x + sin kθ σ_y)` for the inward
/// conormal `ν` and tangent `τ`, and `Φ = 1 ⊗ σ_z`. The boundary Clifford
/// action then winds `k` times along each seam `ξ̂ = ±τ`. With `trivial`
/// set, `Φ = Id` instead.
#[derive(Clone, Debug)]
pub struct SyntheticDiracCircle {
    pub winding: i32,
    pub trivial: bool,
}

impl SyntheticDiracCircle {
    fn generators_at(&self, theta: f64) -> Vec<Mat> {
        let [sx, sy, sz] = pauli();
        let kt = self.winding as f64 * theta;
        let cl_nu = kron(&sz, &identity(2)) * (-I);
        let cl_tau = kron(
            &(sx * c(kt.cos(), 0.0) + sy * c(kt.sin(), 0.0)),
            &identity(2),
        ) * (-I);
        // ν = −(cos θ, sin θ), τ = (−sin θ, cos θ); cl is linear.
        let (ct, st) = (theta.cos(), theta.sin());
        vec![
            &cl_nu * c(-ct, 0.0) + &cl_tau * c(-st, 0.0),
            &cl_nu * c(-st, 0.0) + &cl_tau * c(ct, 0.0),
        ]
    }

    fn symbol(&self, theta: f64, omega: &[f64]) -> Mat {
        let g = self.generators_at(theta);
        (&g[0] * c(omega[0], 0.0) + &g[1] * c(omega[1], 0.0)) * I
    }
}

impl SymbolModel for SyntheticDiracCircle {
    fn name(&self) -> String {
        format!(
            "synthetic-dirac-circle(k={}{})",
            self.winding,
            if self.trivial { ", Φ=Id" } else { "" }
        )
    }
    fn rank(&self) -> usize {
        4
    }
    fn ambient_dim(&self) -> usize {
        2
    }
    fn principal(&self, x: &[f64], omega: &[f64]) -> Mat {
        self.symbol(x[1].atan2(x[0]), omega)
    }
    fn principal_at_infinity(&self, b: &[f64], omega: &[f64]) -> Mat {
        self.symbol(b[1].atan2(b[0]), omega)
    }
    fn potential(&self, _b: &[f64]) -> Mat {
        if self.trivial {
            identity(4)
        } else {
            kron(&identity(2), &pauli()[2])
        }
    }
}

impl DiracModel for SyntheticDiracCircle {
    fn clifford_generators(&self, b: &[f64]) -> Vec<Mat> {
        self.generators_at(b[1].atan2(b[0]))
    }
}
