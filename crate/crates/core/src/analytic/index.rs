use std::io::Write;

use serde::Serialize;

use super::band::BandLu;
use super::lanczos::{hermitian_eigs, EigenRequest, Which};
use super::operator::DiscretizedOperator;
use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eigh, Mat, C64, ZERO};

/// Most singular values a single solve may request.
pub const MAX_SINGULAR_VALUES: usize = 16;
/// Matrix applications allowed per requested value.
pub const MATVECS_PER_VALUE: usize = 10_000;
/// Interior weight at or above which a near-zero mode is genuine.
pub const INTERIOR_WEIGHT_MIN: f64 = 0.99;
/// Interior weight below which a near-zero mode is a wall artifact.
pub const WALL_WEIGHT_MAX: f64 = 0.5;
/// Largest combined band width factored directly for shift-invert.
const BAND_LIMIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Kernel side: the normal operator is `P*P`.
    P,
    /// Cokernel side: the normal operator is `PP*`.
    PDagger,
}

impl Side {
    pub fn label(self) -> &'static str {
        match self {
            Side::P => "P",
            Side::PDagger => "P†",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolverParams {
    pub k: usize,
    pub gap_ratio_min: f64,
    /// Defaults to `10⁻³ · boundary_gap` when absent.
    pub abs_tol: Option<f64>,
    /// Ritz residual tolerance relative to `‖A‖` for the iterated operator `A`.
    pub eig_tol: f64,
    pub ncv: usize,
    pub seed: u64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            k: 6,
            gap_ratio_min: 50.0,
            abs_tol: None,
            eig_tol: 1e-10,
            ncv: 40,
            seed: 7,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum SolverMethod {
    /// Largest eigenvalues of `(P*P)⁻¹` through banded LU factors of `P` and `P*`.
    ShiftInvert,
    /// Smallest eigenvalues of the normal operator itself.
    NormalLanczos,
}

/// The `k` smallest singular values on one side with their right (side `P`)
/// or left (side `P†`) singular vectors.
#[derive(Clone, Debug, Serialize)]
pub struct SideSpectrum {
    pub side: Side,
    pub method: SolverMethod,
    /// Ascending; each is `‖P v‖` or `‖P* v‖` of its unit vector.
    pub values: Vec<f64>,
    /// Ritz residuals relative to `‖A‖` of the iterated operator `A`.
    pub residuals: Vec<f64>,
    pub matvecs: usize,
    pub restarts: usize,
    #[serde(skip)]
    pub vectors: Vec<Vec<C64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SideCount {
    /// Values below the zero-mode cut.
    pub near_zero: usize,
    /// Eigenvalues of the interior-weight form on the near-zero subspace.
    pub interior_weights: Vec<f64>,
    pub interior: usize,
    pub wall: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub operator: String,
    pub dim: usize,
    pub abs_tol: f64,
    pub gap_ratio_min: f64,
    pub p: SideSpectrum,
    pub p_dagger: SideSpectrum,
    pub zero_cut: usize,
    /// `σ_z / σ_{z−1}` at the cut; absent when nothing is near zero.
    pub gap_ratio: Option<f64>,
    pub p_count: SideCount,
    pub p_dagger_count: SideCount,
    pub dim_ker_p: usize,
    pub dim_ker_p_dagger: usize,
}

impl SpectralReport {
    pub fn index(&self) -> i64 {
        self.dim_ker_p as i64 - self.dim_ker_p_dagger as i64
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn side_matrices(op: &DiscretizedOperator, side: Side) -> (&CsrMatrix, &CsrMatrix) {
    // (M, M*) with the normal operator M*M.
    match side {
        Side::P => (&op.matrix, &op.adjoint),
        Side::PDagger => (&op.adjoint, &op.matrix),
    }
}

/// Smallest singular values with vectors and solver diagnostics.
pub fn singular_spectrum(
    op: &DiscretizedOperator,
    side: Side,
    params: &SolverParams,
) -> Result<SideSpectrum> {
    let n = op.dim();
    let k = params.k;
    if k == 0 || k > MAX_SINGULAR_VALUES || k > n {
        return Err(Error::Validation(format!(
            "requested {k} singular values; need 1 ≤ k ≤ min({MAX_SINGULAR_VALUES}, {n})"
        )));
    }
    let (m, m_adj) = side_matrices(op, side);
    let (lo, hi) = m.bandwidth();
    let req = EigenRequest {
        nev: k,
        ncv: params.ncv.max(2 * k + 8),
        which: Which::Smallest,
        tol: params.eig_tol,
        floor: 1.0,
        max_matvecs: MATVECS_PER_VALUE * k,
        seed: params.seed,
    };
    let (method, eig) = if lo + hi <= BAND_LIMIT {
        let lu = BandLu::factor(m)?;
        let lu_adj = BandLu::factor(m_adj)?;
        // (M*M)⁻¹ x = M⁻¹ M⁻* x.
        let apply = |x: &[C64], y: &mut [C64]| {
            y.copy_from_slice(x);
            lu_adj.solve(y);
            lu.solve(y);
        };
        let req = EigenRequest {
            which: Which::Largest,
            floor: 0.0,
            ..req
        };
        (SolverMethod::ShiftInvert, hermitian_eigs(n, &apply, &req)?)
    } else {
        let mut scratch = vec![ZERO; n];
        let scratch = std::sync::Mutex::new(&mut scratch);
        let apply = |x: &[C64], y: &mut [C64]| {
            let mut s = scratch.lock().unwrap();
            m.matvec_into(x, &mut s);
            m_adj.matvec_into(&s, y);
        };
        (
            SolverMethod::NormalLanczos,
            hermitian_eigs(n, &apply, &req)?,
        )
    };
    let scale = eig.norm_estimate.max(f64::MIN_POSITIVE);
    let mut pairs: Vec<(f64, f64, Vec<C64>)> = eig
        .vectors
        .into_iter()
        .zip(&eig.residuals)
        .map(|(v, r)| {
            let v_norm = norm(&v);
            let v: Vec<C64> = v.iter().map(|x| x / v_norm).collect();
            (norm(&m.matvec(&v)), r / scale, v)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(SideSpectrum {
        side,
        method,
        values: pairs.iter().map(|p| p.0).collect(),
        residuals: pairs.iter().map(|p| p.1).collect(),
        matvecs: eig.matvecs,
        restarts: eig.restarts,
        vectors: pairs.into_iter().map(|p| p.2).collect(),
    })
}

/// The `k` smallest singular values of `P` or `P†`, ascending.
pub fn smallest_singular_values(
    op: &DiscretizedOperator,
    k: usize,
    side: Side,
) -> Result<Vec<f64>> {
    let params = SolverParams {
        k,
        ..SolverParams::default()
    };
    Ok(singular_spectrum(op, side, &params)?.values)
}

/// Number of values below the spectral gap: the largest `z` with
/// `s[z−1] < abs_tol` and `s[z] / max(s[z−1], ε) ≥ gap_ratio_min`.
pub fn count_zero_modes(singvals: &[f64], gap_ratio_min: f64, abs_tol: f64) -> Result<usize> {
    if singvals.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Validation(
            "singular values must be sorted ascending".into(),
        ));
    }
    match singvals.first() {
        None => return Err(Error::IndeterminateCount("no singular values".into())),
        Some(&s0) if s0 >= abs_tol => return Ok(0),
        _ => {}
    }
    (1..singvals.len())
        .rev()
        .find(|&z| {
            singvals[z - 1] < abs_tol
                && singvals[z] / singvals[z - 1].max(f64::EPSILON) >= gap_ratio_min
        })
        .ok_or_else(|| {
            Error::IndeterminateCount(format!(
                "no gap of ratio {gap_ratio_min} above a value below {abs_tol:.3e} in {singvals:?}"
            ))
        })
}

/// Splits the near-zero subspace into interior and wall-localized parts by
/// the eigenvalues of `⟨v_i, χ v_j⟩`, with `χ` the interior indicator.
fn classify(op: &DiscretizedOperator, vectors: &[Vec<C64>]) -> Result<SideCount> {
    let z = vectors.len();
    let interior: Vec<bool> = (0..op.grid.sites())
        .map(|s| op.grid.is_interior(s))
        .collect();
    let mut gram = Mat::zeros(z, z);
    for i in 0..z {
        for j in 0..z {
            gram[(i, j)] = vectors[i]
                .iter()
                .zip(&vectors[j])
                .enumerate()
                .filter(|(a, _)| interior[op.site_of(*a)])
                .map(|(_, (x, y))| x.conj() * y)
                .sum();
        }
    }
    let (weights, _) = if z == 0 {
        (vec![], Mat::zeros(0, 0))
    } else {
        eigh(&gram)
    };
    let count = SideCount {
        near_zero: z,
        interior: weights
            .iter()
            .filter(|&&w| w >= INTERIOR_WEIGHT_MIN)
            .count(),
        wall: weights.iter().filter(|&&w| w < WALL_WEIGHT_MAX).count(),
        interior_weights: weights,
    };
    if count.interior + count.wall != z {
        return Err(Error::IndeterminateCount(format!(
            "near-zero modes neither interior nor wall-localized: weights {:.4?}",
            count.interior_weights
        )));
    }
    Ok(count)
}

/// `dim ker P − dim ker P†` with full diagnostics.
///
/// A square truncation has the same singular values as its adjoint, so
/// truncation artifacts at the walls pair every genuine mode with a partner
/// on the other side. Only near-zero modes concentrated inside radius
/// `extent/2` are counted.
pub fn analytic_index(
    op: &DiscretizedOperator,
    params: &SolverParams,
) -> Result<(i64, SpectralReport)> {
    let abs_tol = params.abs_tol.unwrap_or(1e-3 * op.boundary_gap);
    let p = singular_spectrum(op, Side::P, params)?;
    let p_dagger = singular_spectrum(op, Side::PDagger, params)?;
    let z = count_zero_modes(&p.values, params.gap_ratio_min, abs_tol)?;
    let z_dagger = count_zero_modes(&p_dagger.values, params.gap_ratio_min, abs_tol)?;
    if z != z_dagger {
        return Err(Error::IndeterminateCount(format!(
            "near-zero counts differ between P ({z}) and P† ({z_dagger})"
        )));
    }
    let gap_ratio = (z > 0).then(|| p.values[z] / p.values[z - 1].max(f64::EPSILON));
    let p_count = classify(op, &p.vectors[..z])?;
    let p_dagger_count = classify(op, &p_dagger.vectors[..z])?;
    let report = SpectralReport {
        operator: op.name.clone(),
        dim: op.dim(),
        abs_tol,
        gap_ratio_min: params.gap_ratio_min,
        zero_cut: z,
        gap_ratio,
        dim_ker_p: p_count.interior,
        dim_ker_p_dagger: p_dagger_count.interior,
        p_count,
        p_dagger_count,
        p,
        p_dagger,
    };
    Ok((report.index(), report))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub resolution: usize,
    /// Absent when the count was indeterminate at this resolution.
    pub index: Option<i64>,
    pub gap_ratio: Option<f64>,
    pub note: Option<String>,
}

/// Runs `analytic_index` at each resolution and requires every determinate
/// index to agree.
pub fn convergence_sweep(
    build: &dyn Fn(usize) -> Result<DiscretizedOperator>,
    resolutions: &[usize],
    params: &SolverParams,
) -> Result<Vec<SweepPoint>> {
    if resolutions.len() < 2 {
        return Err(Error::Validation(
            "a convergence sweep needs at least two resolutions".into(),
        ));
    }
    let mut points = Vec::with_capacity(resolutions.len());
    for &resolution in resolutions {
        let op = build(resolution)?;
        let point = match analytic_index(&op, params) {
            Ok((index, report)) => SweepPoint {
                resolution,
                index: Some(index),
                gap_ratio: report.gap_ratio,
                note: None,
            },
            Err(Error::IndeterminateCount(msg)) => SweepPoint {
                resolution,
                index: None,
                gap_ratio: None,
                note: Some(msg),
            },
            Err(e) => return Err(e),
        };
        log::info!(
            "sweep N={resolution}: index {:?}, gap ratio {:?}",
            point.index,
            point.gap_ratio
        );
        points.push(point);
    }
    let determinate: Vec<(usize, i64)> = points
        .iter()
        .filter_map(|p| p.index.map(|i| (p.resolution, i)))
        .collect();
    if let Some(&(_, first)) = determinate.first() {
        if let Some(&(res, other)) = determinate.iter().find(|(_, i)| *i != first) {
            return Err(Error::Instability(format!(
                "index {other} at N={res} differs from {first} at N={}",
                determinate[0].0
            )));
        }
    }
    let ratios: Vec<f64> = points.iter().filter_map(|p| p.gap_ratio).collect();
    if ratios.windows(2).any(|w| w[1] < w[0]) {
        log::warn!("gap ratio decreases with resolution: {ratios:?}");
    }
    Ok(points)
}

/// Writes the near-zero vectors of both sides as CSV: one row per site and
/// spinor component with coordinates and the complex amplitude.
pub fn write_zero_modes_csv(
    op: &DiscretizedOperator,
    report: &SpectralReport,
    out: impl Write,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::io("zeromode.csv", std::io::Error::other(e));
    w.write_record([
        "side",
        "mode",
        "sigma",
        "site",
        "x",
        "y",
        "z",
        "component",
        "re",
        "im",
    ])
    .map_err(io)?;
    for spectrum in [&report.p, &report.p_dagger] {
        for (mode, v) in spectrum.vectors.iter().take(report.zero_cut).enumerate() {
            for (a, amp) in v.iter().enumerate() {
                let site = op.site_of(a);
                let mut x = op.grid.coordinates(site);
                x.resize(3, 0.0);
                w.write_record([
                    spectrum.side.label().to_string(),
                    mode.to_string(),
                    format!("{:.12e}", spectrum.values[mode]),
                    site.to_string(),
                    format!("{:.9}", x[0]),
                    format!("{:.9}", x[1]),
                    format!("{:.9}", x[2]),
                    (a % op.grid.spinor_rank).to_string(),
                    format!("{:.12e}", amp.re),
                    format!("{:.12e}", amp.im),
                ])
                .map_err(io)?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("zeromode.csv", e))
}
