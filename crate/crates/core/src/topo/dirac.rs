use std::sync::Arc;

use serde::Serialize;

use super::chern::{fhs_chern_number, BundleFrameField};
use super::winding::det_winding;
use crate::error::{Error, Result};
use crate::geometry::{direction3, product_grid, ManifoldGrid};
use crate::linalg::{c, eigh, identity, select_columns, subspace_angle, unitarize, Mat, I};
use crate::symbolic::models::DiracModel;
use crate::symbolic::{joint_frames, Block, HermitianField};

/// Sign of the boundary Dirac index relative to `c₁(F₊)/2` over `∂X = S²`,
/// calibrated on the charge-1 hedgehog (analytic index `+1`, `c₁(F₊) = 2`).
pub const S_DIRAC: i64 = 1;

/// Tolerance for the Clifford relations and the grading eigenvalues.
pub const CLIFFORD_TOL: f64 = 1e-10;

/// Clifford action over `∂X` split by the grading `i·cl(ν)`, with `ν` the
/// inward unit conormal.
#[derive(Clone, Debug)]
pub struct CliffordBoundaryData {
    pub grid: Arc<ManifoldGrid>,
    pub ambient_dim: usize,
    /// `cl(e_j)` per point.
    pub generators: Vec<Vec<Mat>>,
    pub conormals: Vec<Vec<f64>>,
    pub cl_nu: Vec<Mat>,
    /// Tangential action `cl₀(e_j) = cl(e_j − ⟨e_j, ν⟩ν)`; odd for the grading.
    pub cl0: Vec<Vec<Mat>>,
    /// `+1` eigenframe of `i·cl(ν)`.
    pub v0: Vec<Mat>,
    /// `−1` eigenframe of `i·cl(ν)`.
    pub v1: Vec<Mat>,
}

impl CliffordBoundaryData {
    pub fn grading(&self, p: usize) -> Mat {
        &self.cl_nu[p] * I
    }

    pub fn cl_vector(&self, p: usize, v: &[f64]) -> Mat {
        combine(&self.generators[p], v)
    }

    pub fn cl0_vector(&self, p: usize, v: &[f64]) -> Mat {
        combine(&self.cl0[p], v)
    }

    pub fn ranks(&self, p: usize) -> (usize, usize) {
        (self.v0[p].ncols(), self.v1[p].ncols())
    }
}

fn combine(gens: &[Mat], v: &[f64]) -> Mat {
    let n = gens[0].nrows();
    gens.iter()
        .zip(v)
        .fold(Mat::zeros(n, n), |acc, (g, &x)| acc + g * c(x, 0.0))
}

fn check_unit_generator(g: &Mat, what: &str) -> Result<()> {
    let n = g.nrows();
    let skew = (g + g.adjoint()).norm();
    let square = (g * g + identity(n)).norm();
    if skew > CLIFFORD_TOL || square > CLIFFORD_TOL {
        return Err(Error::CliffordStructure(format!(
            "{what}: ‖c + c*‖ = {skew:.2e}, ‖c² + 1‖ = {square:.2e}"
        )));
    }
    Ok(())
}

/// Validates the Clifford relations pointwise and splits each fiber into
/// the `±1` eigenspaces of `i·cl(ν)`.
pub fn clifford_boundary_split(
    grid: Arc<ManifoldGrid>,
    generators: Vec<Vec<Mat>>,
    conormals: Vec<Vec<f64>>,
) -> Result<CliffordBoundaryData> {
    if generators.len() != grid.len() || conormals.len() != grid.len() {
        return Err(Error::Structural(format!(
            "{} generator sets and {} conormals on a grid of {} points",
            generators.len(),
            conormals.len(),
            grid.len()
        )));
    }
    let ambient_dim = generators.first().map_or(0, |g| g.len());
    let (mut cl_nu, mut cl0, mut v0, mut v1) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (p, (gens, nu)) in generators.iter().zip(&conormals).enumerate() {
        if gens.len() != ambient_dim || nu.len() != ambient_dim || gens.is_empty() {
            return Err(Error::Structural(format!(
                "point {p}: {} generators, conormal of length {}",
                gens.len(),
                nu.len()
            )));
        }
        for (j, g) in gens.iter().enumerate() {
            check_unit_generator(g, &format!("cl(e_{j}) at point {p}"))?;
            for (k, h) in gens.iter().enumerate().skip(j + 1) {
                let anti = (g * h + h * g).norm();
                if anti > CLIFFORD_TOL {
                    return Err(Error::CliffordStructure(format!(
                        "cl(e_{j}), cl(e_{k}) at point {p} anticommute only to {anti:.2e}"
                    )));
                }
            }
        }
        let cn = combine(gens, nu);
        check_unit_generator(&cn, &format!("cl(ν) at point {p}"))?;
        let grading = &cn * I;
        let (vals, vecs) = eigh(&grading);
        if let Some(v) = vals.iter().find(|v| (v.abs() - 1.0).abs() > CLIFFORD_TOL) {
            return Err(Error::CliffordStructure(format!(
                "i·cl(ν) at point {p} has eigenvalue {v:.6}"
            )));
        }
        let f0 = select_columns(&vecs, |j| vals[j] > 0.0);
        let f1 = select_columns(&vecs, |j| vals[j] < 0.0);
        let tangential: Vec<Mat> = gens
            .iter()
            .zip(nu)
            .map(|(g, &x)| g - &cn * c(x, 0.0))
            .collect();
        for (j, t) in tangential.iter().enumerate() {
            let even = (f0.adjoint() * t * &f0).norm() + (f1.adjoint() * t * &f1).norm();
            if even > 1e-8 {
                return Err(Error::CliffordStructure(format!(
                    "cl₀(e_{j}) at point {p} is not odd (even part {even:.2e})"
                )));
            }
        }
        cl_nu.push(cn);
        cl0.push(tangential);
        v0.push(f0);
        v1.push(f1);
    }
    for &[a, b] in &grid.edges {
        if v0[a].ncols() != v0[b].ncols() {
            return Err(Error::Discontinuity { a, b });
        }
    }
    Ok(CliffordBoundaryData {
        grid,
        ambient_dim,
        generators,
        conormals,
        cl_nu,
        cl0,
        v0,
        v1,
    })
}

/// Clifford data of a Dirac-type model over `grid`, with `ν = −b̂`.
pub fn clifford_from_model(
    model: &dyn DiracModel,
    grid: Arc<ManifoldGrid>,
) -> Result<CliffordBoundaryData> {
    let d = model.ambient_dim();
    let mut gens = Vec::with_capacity(grid.len());
    let mut nus = Vec::with_capacity(grid.len());
    for p in &grid.points {
        let b = &direction3(p)[..d];
        let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        nus.push(b.iter().map(|x| -x / norm).collect());
        gens.push(model.clifford_generators(&p.coords));
    }
    clifford_boundary_split(grid, gens, nus)
}

/// Positive and negative spectral frames of an invertible Hermitian field.
pub fn potential_split(
    grid: Arc<ManifoldGrid>,
    phi: &HermitianField,
    tol: f64,
) -> Result<(BundleFrameField, BundleFrameField)> {
    if phi.len() != grid.len() {
        return Err(Error::Structural(format!(
            "{} potential samples on a grid of {} points",
            phi.len(),
            grid.len()
        )));
    }
    let mut plus = Vec::with_capacity(phi.len());
    let mut minus = Vec::with_capacity(phi.len());
    for (p, m) in phi.samples.iter().enumerate() {
        let (vals, vecs) = eigh(m);
        if let Some(v) = vals.iter().find(|v| v.abs() <= tol) {
            return Err(Error::Invertibility(format!(
                "Φ at point {p} has eigenvalue {v:.3e}"
            )));
        }
        plus.push(select_columns(&vecs, |j| vals[j] > 0.0));
        minus.push(select_columns(&vecs, |j| vals[j] < 0.0));
    }
    Ok((
        BundleFrameField::new(grid.clone(), plus)?,
        BundleFrameField::new(grid, minus)?,
    ))
}

/// `dirac_topo_index` of a Dirac-type model sampled over `grid`.
pub fn model_dirac_index(
    model: &dyn DiracModel,
    grid: Arc<ManifoldGrid>,
    tol: f64,
) -> Result<DiracIndex> {
    let cliff = clifford_from_model(model, grid.clone())?;
    let phi = HermitianField::new(
        model.rank(),
        grid.points
            .iter()
            .map(|p| model.potential(&p.coords))
            .collect(),
    )?;
    let (f_plus, _) = potential_split(grid, &phi, tol)?;
    dirac_topo_index(&f_plus, &cliff)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiracIndex {
    pub index: i64,
    /// Unrounded topological datum: the signed graded trace over `S⁰`, or
    /// `c₁(F₊)` over `S²`.
    pub chern_raw: f64,
    /// Rank of the ambient spinor factor dividing `c₁(F₊)`; 1 over `S⁰`.
    pub spinor_rank: usize,
    /// Degree-2 part of `Â(∂X)`; it vanishes on the supported boundaries.
    pub todd_correction: f64,
}

/// Index of the boundary Dirac operator `V⁰₊ → V¹₊`.
///
/// Over `∂X = S⁰` it is `−Σ_b ε(b)·tr(F₊* i·cl(e₁) F₊)`, which for the
/// inward conormal equals `Σ_b (dim V⁰₊ − dim V¹₊)`. Over `∂X = S²` the
/// spinor factor restricts to a trivial rank-2 bundle, so
/// `F₊ = S ⊗ W₊` has `c₁(F₊) = 2·c₁(W₊)` and the index is
/// `S_DIRAC · c₁(F₊)/2`.
pub fn dirac_topo_index(
    f_plus: &BundleFrameField,
    cliff: &CliffordBoundaryData,
) -> Result<DiracIndex> {
    let g = &f_plus.grid;
    if g.len() != cliff.grid.len() {
        return Err(Error::Structural(format!(
            "F₊ on {} points, Clifford data on {}",
            g.len(),
            cliff.grid.len()
        )));
    }
    match g.dim {
        0 => {
            let raw: f64 = (0..g.len())
                .map(|p| {
                    let e1 = &cliff.generators[p][0] * I;
                    let f = &f_plus.frames[p];
                    -(g.points[p].sign as f64) * (f.adjoint() * e1 * f).trace().re
                })
                .sum();
            Ok(DiracIndex {
                index: raw.round() as i64,
                chern_raw: raw,
                spinor_rank: 1,
                todd_correction: 0.0,
            })
        }
        2 => {
            let ch = fhs_chern_number(f_plus)?;
            if ch.integer % 2 != 0 {
                return Err(Error::Structural(format!(
                    "c₁(F₊) = {} is odd; F₊ is not spinor ⊗ twist",
                    ch.integer
                )));
            }
            Ok(DiracIndex {
                index: S_DIRAC * ch.integer / 2,
                chern_raw: ch.raw,
                spinor_rank: 2,
                todd_correction: 0.0,
            })
        }
        d => Err(Error::Dimension(format!(
            "boundary Dirac index on a {d}-dimensional boundary"
        ))),
    }
}

/// Parallel transport of frames around a closed loop, with the holonomy
/// spread evenly so that the result closes up smoothly.
pub fn parallel_transport_loop(frames: &[Mat]) -> Result<Vec<Mat>> {
    let n = frames.len();
    if n < 2 {
        return Err(Error::Refinement {
            index: 0,
            jump: 0.0,
        });
    }
    let mut out: Vec<Mat> = Vec::with_capacity(n);
    out.push(frames[0].clone());
    for i in 1..n {
        let link = frames[i].adjoint() * &out[i - 1];
        out.push(&frames[i] * unitarize(&link, 1e-3)?);
    }
    let hol = unitarize(&(frames[0].adjoint() * &out[n - 1]), 1e-3)?;
    let (phases, basis) = unitary_log(&hol);
    for (i, f) in out.iter_mut().enumerate() {
        let t = i as f64 / n as f64;
        let d = Mat::from_diagonal(&nalgebra::DVector::from_iterator(
            phases.len(),
            phases.iter().map(|ph| (I * (-ph * t)).exp()),
        ));
        *f = &*f * (&basis * d * basis.adjoint());
    }
    Ok(out)
}

/// Eigenphases in `(−π, π]` and eigenbasis of a unitary matrix; its Schur
/// form is diagonal because unitaries are normal.
fn unitary_log(u: &Mat) -> (Vec<f64>, Mat) {
    let (q, t) = u.clone().schur().unpack();
    ((0..u.ncols()).map(|j| t[(j, j)].arg()).collect(), q)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClutchingReport {
    pub base_dim: usize,
    /// Largest angle between `V⁺₊` at `ξ̂ = ν` and `V⁰₊`.
    pub max_inward_angle: f64,
    /// Largest angle between `V⁺₊` at `ξ̂ = −ν` and `V¹₊`.
    pub max_outward_angle: f64,
    /// `(rank V⁰₊, rank V¹₊)` per connected component of `∂X`.
    pub rank_profile: Vec<[usize; 2]>,
    /// Windings of `det(V¹₊* i·cl₀(±τ) V⁰₊)` along `∂X = S¹`.
    pub seam_windings: Option<[i64; 2]>,
    /// `c₁(V⁺₊)` over the corner `S¹ × S¹`.
    pub corner_chern: Option<i64>,
    pub chern_v0_plus: Option<i64>,
    pub chern_v1_plus: Option<i64>,
    pub chern_f_plus: Option<i64>,
    /// Both sides of the integer identity: over `S¹`,
    /// `c₁(V⁺₊) = w(+τ) − w(−τ) + c₁(V¹₊)` with `c₁(V¹₊) = 0`; over `S²`,
    /// `c₁(V⁰₊) + c₁(V¹₊) = c₁(F₊)`.
    pub identity: Option<[i64; 2]>,
    pub passed: bool,
}

fn plus_plus(a: &Mat, phi: &Mat, tol: f64) -> Result<(Mat, Mat)> {
    let f = joint_frames(a, phi, tol)?;
    Ok((
        f[Block::PlusPlus.index()].clone(),
        f[Block::MinusPlus.index()].clone(),
    ))
}

/// Cyclic point order of a circle grid, following its directed edges.
fn loop_order(grid: &ManifoldGrid) -> Result<Vec<usize>> {
    let mut next = vec![usize::MAX; grid.len()];
    for &[a, b] in &grid.edges {
        next[a] = b;
    }
    let mut order = vec![0];
    while order.len() < grid.len() {
        let n = next[*order.last().unwrap()];
        if n == usize::MAX || n == 0 {
            return Err(Error::Structural(
                "base grid is not a single directed loop".into(),
            ));
        }
        order.push(n);
    }
    Ok(order)
}

/// Checks that `V⁺₊` restricted to the inward and outward conormal
/// sections is `V⁰₊` and `V¹₊`, and that the clutching datum `i·cl₀`
/// accounts for the Chern data of `V⁺₊`.
pub fn verify_clutching_decomposition(
    model: &dyn DiracModel,
    cliff: &CliffordBoundaryData,
    fiber: Option<&ManifoldGrid>,
    tol: f64,
) -> Result<ClutchingReport> {
    let base = &cliff.grid;
    let n = base.len();
    let mut phis = Vec::with_capacity(n);
    let (mut f0, mut f1) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut max_in, mut max_out) = (0.0_f64, 0.0_f64);
    for p in 0..n {
        let b = &base.points[p].coords;
        let phi = unitarize(&model.potential(b), 1e-10)?;
        let (v0p, v1p) = plus_plus(&cliff.grading(p), &phi, 1e-8)?;
        let nu = &cliff.conormals[p];
        let minus_nu: Vec<f64> = nu.iter().map(|x| -x).collect();
        for (dir, reference, worst) in [(nu, &v0p, &mut max_in), (&minus_nu, &v1p, &mut max_out)] {
            let a = unitarize(&model.principal_at_infinity(b, dir), 1e-10)?;
            let (vpp, _) = plus_plus(&a, &phi, 1e-8)?;
            if vpp.ncols() != reference.ncols() {
                return Err(Error::Decomposition(format!(
                    "point {p}: rank V⁺₊ = {} but the graded piece has rank {}",
                    vpp.ncols(),
                    reference.ncols()
                )));
            }
            let angle = if vpp.ncols() == 0 {
                0.0
            } else {
                subspace_angle(&vpp, reference)
            };
            if angle > tol {
                return Err(Error::Decomposition(format!(
                    "point {p}: subspace angle {angle:.3e} exceeds {tol:.1e}"
                )));
            }
            *worst = worst.max(angle);
        }
        phis.push(phi);
        f0.push(v0p);
        f1.push(v1p);
    }
    let labels = base.components();
    let mut seen = Vec::new();
    let mut rank_profile = Vec::new();
    for (p, &l) in labels.iter().enumerate() {
        if !seen.contains(&l) {
            seen.push(l);
            rank_profile.push([f0[p].ncols(), f1[p].ncols()]);
        }
    }
    let mut report = ClutchingReport {
        base_dim: base.dim,
        max_inward_angle: max_in,
        max_outward_angle: max_out,
        rank_profile,
        seam_windings: None,
        corner_chern: None,
        chern_v0_plus: None,
        chern_v1_plus: None,
        chern_f_plus: None,
        identity: None,
        passed: true,
    };
    match base.dim {
        1 => {
            let fiber = fiber.ok_or_else(|| {
                Error::Structural("clutching over S¹ needs a fiber circle grid".into())
            })?;
            let order = loop_order(base)?;
            let t0 =
                parallel_transport_loop(&order.iter().map(|&p| f0[p].clone()).collect::<Vec<_>>())?;
            let t1 =
                parallel_transport_loop(&order.iter().map(|&p| f1[p].clone()).collect::<Vec<_>>())?;
            let mut seams = [Vec::with_capacity(n), Vec::with_capacity(n)];
            for (i, &p) in order.iter().enumerate() {
                let (prev, next) = (order[(i + n - 1) % n], order[(i + 1) % n]);
                let nu = &cliff.conormals[p];
                let mut tau: Vec<f64> = (0..cliff.ambient_dim)
                    .map(|j| base.points[next].coords[j] - base.points[prev].coords[j])
                    .collect();
                let along: f64 = tau.iter().zip(nu).map(|(t, v)| t * v).sum();
                tau.iter_mut().zip(nu).for_each(|(t, v)| *t -= along * v);
                let norm = tau.iter().map(|t| t * t).sum::<f64>().sqrt();
                for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
                    let dir: Vec<f64> = tau.iter().map(|t| sign * t / norm).collect();
                    seams[k].push(t1[i].adjoint() * cliff.cl0_vector(p, &dir) * I * &t0[i]);
                }
            }
            let w = [det_winding(&seams[0])?, det_winding(&seams[1])?];
            let corner = Arc::new(product_grid(base, fiber));
            let mut frames = Vec::with_capacity(corner.len());
            for (b, phi) in phis.iter().enumerate() {
                for f in 0..fiber.len() {
                    let omega = &direction3(&fiber.points[f])[..cliff.ambient_dim];
                    let a = unitarize(
                        &model.principal_at_infinity(&base.points[b].coords, omega),
                        1e-10,
                    )?;
                    frames.push(plus_plus(&a, phi, 1e-8)?.0);
                }
            }
            let ch = fhs_chern_number(&BundleFrameField::new(corner, frames)?)?;
            report.seam_windings = Some(w);
            report.corner_chern = Some(ch.integer);
            report.identity = Some([ch.integer, w[0] - w[1]]);
            report.passed = ch.integer == w[0] - w[1];
        }
        2 => {
            let c0 = fhs_chern_number(&BundleFrameField::new(base.clone(), f0.clone())?)?.integer;
            let c1 = fhs_chern_number(&BundleFrameField::new(base.clone(), f1.clone())?)?.integer;
            let fp: Vec<Mat> = f0
                .iter()
                .zip(&f1)
                .map(|(a, b)| stack_columns(a, b))
                .collect();
            let cf = fhs_chern_number(&BundleFrameField::new(base.clone(), fp)?)?.integer;
            report.chern_v0_plus = Some(c0);
            report.chern_v1_plus = Some(c1);
            report.chern_f_plus = Some(cf);
            report.identity = Some([c0 + c1, cf]);
            report.passed = c0 + c1 == cf;
        }
        _ => {}
    }
    Ok(report)
}

fn stack_columns(a: &Mat, b: &Mat) -> Mat {
    let mut m = Mat::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}
