//! Dense complex helpers shared by the symbolic and topological layers.

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type Mat = DMatrix<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrices `(σx, σy, σz)`.
pub fn pauli() -> [Mat; 3] {
    [
        Mat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Mat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        Mat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// `Σ v_j σ_j` for a real 3-vector.
pub fn pauli_dot(v: [f64; 3]) -> Mat {
    let [sx, sy, sz] = pauli();
    sx * c(v[0], 0.0) + sy * c(v[1], 0.0) + sz * c(v[2], 0.0)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn scale(m: &Mat, s: f64) -> Mat {
    m * c(s, 0.0)
}

/// Frobenius norm of `M − M*`.
pub fn hermitian_defect(m: &Mat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Largest singular value.
pub fn spectral_norm(m: &Mat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

pub fn min_singular_value(m: &Mat) -> f64 {
    if m.is_empty() {
        return f64::INFINITY;
    }
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].norm();
    }
    m.singular_values().min()
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues ascending.
/// The input is symmetrized first so roundoff asymmetry cannot leak in.
pub fn eigh(m: &Mat) -> (Vec<f64>, Mat) {
    let n = m.nrows();
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = Mat::zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        vectors.set_column(j, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Columns of `v` selected by `keep`, as an `n × r` frame.
pub fn select_columns(v: &Mat, keep: impl Fn(usize) -> bool) -> Mat {
    let cols: Vec<usize> = (0..v.ncols()).filter(|&j| keep(j)).collect();
    let mut out = Mat::zeros(v.nrows(), cols.len());
    for (k, &j) in cols.iter().enumerate() {
        out.set_column(k, &v.column(j));
    }
    out
}

/// Unitarization `U(C) = C (√(C*C))⁻¹`, the polar unitary factor of `C`.
///
/// Hermitian input takes the spectral route so the output is exactly
/// Hermitian: `U(C) = Q sign(Λ) Q*`.
pub fn unitarize(m: &Mat, tol: f64) -> Result<Mat> {
    let min_sv = min_singular_value(m);
    if !(min_sv > tol) {
        return Err(Error::Singular {
            min_singular_value: min_sv,
        });
    }
    let scale_ref = spectral_norm(m).max(1.0);
    if hermitian_defect(m) <= 1e-12 * scale_ref {
        let (vals, q) = eigh(m);
        let mut out = Mat::zeros(m.nrows(), m.ncols());
        for (j, &l) in vals.iter().enumerate() {
            let col = q.column(j);
            out += (col * col.adjoint()) * c(l.signum(), 0.0);
        }
        return Ok((&out + out.adjoint()) * c(0.5, 0.0));
    }
    let svd = m.clone().svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    Ok(u * vt)
}

/// `(√(C*C))⁻¹` for invertible `C`.
pub fn inverse_modulus(m: &Mat, tol: f64) -> Result<Mat> {
    let svd = m.clone().svd(false, true);
    let smin = svd.singular_values.min();
    if !(smin > tol) {
        return Err(Error::Singular {
            min_singular_value: smin,
        });
    }
    let vt = svd.v_t.expect("requested");
    let mut inv = Mat::zeros(m.ncols(), m.ncols());
    for (k, &s) in svd.singular_values.iter().enumerate() {
        let row = vt.row(k);
        inv += (row.adjoint() * row) * c(1.0 / s, 0.0);
    }
    Ok(inv)
}

/// The straight-line path `C_t = C(t (√(C*C))⁻¹ + (1−t) Id)` sampled at
/// `n` equispaced `t ∈ [0, 1]`; `C_0 = C` and `C_1 = U(C)`.
pub fn unitarization_path(m: &Mat, n: usize, tol: f64) -> Result<Vec<Mat>> {
    let inv = inverse_modulus(m, tol)?;
    let id = identity(m.ncols());
    let last = n.max(2) - 1;
    Ok((0..=last)
        .map(|k| {
            let t = k as f64 / last as f64;
            if k == 0 {
                m.clone()
            } else {
                m * (&inv * c(t, 0.0) + &id * c(1.0 - t, 0.0))
            }
        })
        .collect())
}

pub fn random_complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// Haar-distributed unitary via QR with the phase of `R`'s diagonal removed.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let z = random_complex_gaussian(n, n, rng);
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        let col = q.column(j) * phase;
        q.set_column(j, &col);
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let z = random_complex_gaussian(n, n, rng);
    (&z + z.adjoint()) * c(0.5, 0.0)
}

/// `Q diag(values) Q*`.
pub fn from_spectrum(q: &Mat, values: &[f64]) -> Mat {
    let d = Mat::from_diagonal(&nalgebra::DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| c(v, 0.0)),
    ));
    q * d * q.adjoint()
}

/// Largest principal angle (radians) between the column spans of two
/// orthonormal frames of equal rank.
pub fn subspace_angle(a: &Mat, b: &Mat) -> f64 {
    if a.ncols() != b.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    // sin θ from the component of `b` outside span(a); acos of the overlap
    // singular values loses half the digits near θ = 0.
    let residual = b - a * (a.adjoint() * b);
    spectral_norm(&residual).min(1.0).asin()
}

/// `‖F* F − Id‖_F`.
pub fn orthonormality_defect(f: &Mat) -> f64 {
    (f.adjoint() * f - identity(f.ncols())).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitarize_hermitian_is_sign() {
        let m = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(3.0, 0.0),
            c(-2.0, 0.0),
        ]));
        let u = unitarize(&m, 1e-12).unwrap();
        assert_eq!(u[(0, 0)], ONE);
        assert_eq!(u[(1, 1)], -ONE);
        assert_eq!(u[(0, 1)], ZERO);
        let u2 = unitarize(&(identity(3) * c(2.0, 0.0)), 1e-12).unwrap();
        assert!((u2 - identity(3)).norm() < 1e-15);
    }

    #[test]
    fn unitarize_random_and_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_complex_gaussian(4, 4, &mut rng);
        let u = unitarize(&m, 1e-12).unwrap();
        assert!((u.adjoint() * &u - identity(4)).norm() < 1e-12);
        let path = unitarization_path(&m, 50, 1e-12).unwrap();
        assert_eq!(path[0], m);
        assert!((&path[49] - &u).norm() < 1e-12);
        // Independent check: on the singular basis each path sample scales
        // the singular values to (1−t)σ + t, never below min(σ_min, 1).
        let smin = min_singular_value(&m);
        for p in &path {
            assert!(min_singular_value(p) >= smin.min(1.0) * (1.0 - 1e-10));
        }
    }

    #[test]
    fn unitarize_rejects_singular() {
        let m = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ZERO]));
        match unitarize(&m, 1e-10) {
            Err(Error::Singular { min_singular_value }) => assert!(min_singular_value < 1e-10),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = random_unitary(6, &mut rng);
        assert!(orthonormality_defect(&q) < 1e-12);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn unitarize_fixes_hermitian_unitaries(
            signs in proptest::collection::vec(proptest::bool::ANY, 2..=8),
            seed in 0u64..1_000_000,
        ) {
            // Hermitian and unitary means Q diag(±1) Q*.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = random_unitary(signs.len(), &mut rng);
            let spectrum: Vec<f64> = signs.iter().map(|&s| if s { 1.0 } else { -1.0 }).collect();
            let u = from_spectrum(&q, &spectrum);
            let out = unitarize(&u, 1e-12).unwrap();
            proptest::prop_assert!((&out - &u).norm() < 1e-12);
        }
    }
}
