use rayon::prelude::*;
use serde::Serialize;

use super::field::{CalliasSymbolData, HermitianField};
use crate::error::{Error, Result};
use crate::linalg::{eigh, min_singular_value, spectral_norm, Mat, I};

/// Corner agreement required between the two faces of the symbol data.
pub const CORNER_MISMATCH_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionVerdicts {
    pub hermitian: bool,
    pub invertible_potential: bool,
    pub commuting: bool,
    pub interior_elliptic: bool,
    pub fully_elliptic: bool,
    pub asymptotically_compatible: bool,
}

impl ConditionVerdicts {
    pub fn all(&self) -> bool {
        self.hermitian
            && self.invertible_potential
            && self.commuting
            && self.interior_elliptic
            && self.fully_elliptic
            && self.asymptotically_compatible
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatibilityReport {
    pub tol: f64,
    pub hermitian_defect: f64,
    pub min_potential_eigen: f64,
    pub max_commutator_norm: f64,
    /// Sample `(radial index, base, fiber)` where the commutator peaks.
    pub max_commutator_at: (usize, usize, usize),
    pub interior_ellipticity: f64,
    pub full_ellipticity_margin: f64,
    pub corner_mismatch: f64,
    pub verdicts: ConditionVerdicts,
    pub passed: bool,
}

/// Hermitian at `∂X`, invertible at `∂X`, commuting with the renormalized
/// scattering symbol over the whole compactified fiber, plus interior and
/// full ellipticity and agreement of the two faces at the corner.
pub fn validate_compatibility(data: &CalliasSymbolData, tol: f64) -> Result<CompatibilityReport> {
    let g = &data.grid;
    let n = data.rank();
    let per_face = g.n_radial() * g.n_corner();
    if data.interior_symbol.len() != per_face
        || data.boundary_symbol.len() != per_face
        || data.potential.len() != g.n_base()
    {
        return Err(Error::Structural(format!(
            "fields sampled on mismatched grids: interior {}, boundary {}, potential {} (expected {per_face}, {per_face}, {})",
            data.interior_symbol.len(),
            data.boundary_symbol.len(),
            data.potential.len(),
            g.n_base()
        )));
    }
    if data.interior_symbol.rank != n || data.boundary_symbol.rank != n {
        return Err(Error::Structural(
            "symbol and potential ranks differ".into(),
        ));
    }
    let hermitian_defect = [
        &data.interior_symbol,
        &data.boundary_symbol,
        &data.potential,
    ]
    .iter()
    .map(|f| f.max_hermitian_defect())
    .fold(0.0, f64::max);
    let min_potential_eigen = data
        .potential
        .samples
        .iter()
        .map(|p| {
            eigh(p)
                .0
                .iter()
                .map(|l| l.abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min);
    let (nb, nf) = (g.n_base(), g.n_fiber());
    let (max_commutator_norm, max_commutator_at) = (0..per_face)
        .into_par_iter()
        .map(|i| {
            let (k, b, f) = (i / (nb * nf), (i / nf) % nb, i % nf);
            let s = &data.boundary_symbol.samples[i];
            let phi = &data.potential.samples[b];
            (spectral_norm(&(s * phi - phi * s)), (k, b, f))
        })
        .reduce(
            || (0.0, (0, 0, 0)),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let interior_ellipticity = data
        .interior_symbol
        .samples
        .par_iter()
        .map(min_singular_value)
        .reduce(|| f64::INFINITY, f64::min);
    let full_ellipticity_margin = check_full_ellipticity(data);
    let corner_mismatch = data.corner_mismatch();
    let verdicts = ConditionVerdicts {
        hermitian: hermitian_defect <= tol,
        invertible_potential: min_potential_eigen > tol,
        commuting: max_commutator_norm <= tol,
        interior_elliptic: interior_ellipticity > tol,
        fully_elliptic: full_ellipticity_margin > tol,
        asymptotically_compatible: corner_mismatch <= CORNER_MISMATCH_TOL,
    };
    Ok(CompatibilityReport {
        tol,
        hermitian_defect,
        min_potential_eigen,
        max_commutator_norm,
        max_commutator_at,
        interior_ellipticity,
        full_ellipticity_margin,
        corner_mismatch,
        passed: verdicts.all(),
        verdicts,
    })
}

/// Smallest singular value of the renormalized total symbol of `P` over
/// both faces of the boundary of the total space.
pub fn check_full_ellipticity(data: &CalliasSymbolData) -> f64 {
    let g = &data.grid;
    let (nb, nf) = (g.n_base(), g.n_fiber());
    (0..g.n_samples())
        .into_par_iter()
        .map(|i| {
            let (l, b, f) = (i / (nb * nf), (i / nf) % nb, i % nf);
            min_singular_value(&data.total_symbol(l, b, f))
        })
        .reduce(|| f64::INFINITY, f64::min)
}

/// Joint eigenvalues `(λ, μ)` of a commuting Hermitian pair: `A` is
/// diagonalized and `B` is diagonalized inside each eigenspace of `A`.
pub fn joint_eigenvalues(a: &Mat, b: &Mat) -> Vec<(f64, f64)> {
    let (la, qa) = eigh(a);
    let scale = spectral_norm(a).max(1.0);
    let mut out = Vec::with_capacity(la.len());
    let mut start = 0;
    while start < la.len() {
        let mut end = start + 1;
        while end < la.len() && la[end] - la[end - 1] <= 1e-9 * scale {
            end += 1;
        }
        let q = qa.columns(start, end - start).into_owned();
        let (mu, _) = eigh(&(q.adjoint() * b * &q));
        let lambda = la[start..end].iter().sum::<f64>() / (end - start) as f64;
        out.extend(mu.into_iter().map(|m| (lambda, m)));
        start = end;
    }
    out
}

/// `min √(λ² + μ²)` over joint eigenpairs, minimized over points; equals the
/// smallest singular value of `A + iB` for commuting Hermitian `A`, `B`.
pub fn commuting_invertibility_bound(a: &HermitianField, b: &HermitianField) -> Result<f64> {
    if a.len() != b.len() || a.rank != b.rank {
        return Err(Error::Structural("fields differ in length or rank".into()));
    }
    let mut bound = f64::INFINITY;
    for (i, (am, bm)) in a.samples.iter().zip(&b.samples).enumerate() {
        let comm = spectral_norm(&(am * bm - bm * am));
        let scale = (spectral_norm(am) * spectral_norm(bm)).max(1.0);
        if comm > 1e-10 * scale {
            return Err(Error::Compatibility(format!(
                "pair {i} does not commute (‖[A,B]‖ = {comm:.3e})"
            )));
        }
        for (l, m) in joint_eigenvalues(am, bm) {
            bound = bound.min(l.hypot(m));
        }
    }
    Ok(bound)
}

/// `A + iB` pointwise.
pub fn complexify(a: &Mat, b: &Mat) -> Mat {
    a + b * I
}
