use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use super::scenario::{Scenario, ScenarioKind};
use crate::analytic::{
    analytic_index, assemble_hedgehog_3d, assemble_kink_1d, convergence_sweep, DiscretizedOperator,
    SolverParams, SpectralReport, SweepPoint,
};
use crate::error::{Error, Result};
use crate::geometry::{
    build_circle_grid, build_interval_boundary, build_sphere_grid, ManifoldGrid,
};
use crate::symbolic::models::{
    DiracModel, Hedgehog, Kink1d, SyntheticCorner2d, SyntheticDiracCircle,
};
use crate::symbolic::{
    build_corner_trivialization, build_reduction_homotopy, corner_fields, joint_split,
    validate_compatibility, verify_invertible_path, Block, CalliasSymbolData, CompatibilityReport,
    HermitianField, JointSplitting, MatrixPath, SymbolGrid, SymbolModel,
};
use crate::topo::{
    clifford_from_model, corner_index_0d_block, corner_index_2d_block, corner_index_product,
    dirac_topo_index, fhs_chern_number, potential_split, verify_clutching_decomposition,
    winding_number, ChernNumber, ClutchingReport, DiracIndex,
};

/// Pipeline stages in execution order, with their process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Parse,
    Validation,
    Compatibility,
    Ellipticity,
    Homotopy,
    Winding,
    Topology,
    Clutching,
    Analytic,
    Io,
}

impl Stage {
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Parse => 2,
            Stage::Validation => 3,
            Stage::Compatibility => 10,
            Stage::Ellipticity => 11,
            Stage::Homotopy => 12,
            Stage::Winding => 13,
            Stage::Topology => 14,
            Stage::Clutching => 15,
            Stage::Analytic => 16,
            Stage::Io => 17,
        }
    }

    /// Stage a setup error belongs to when no pipeline ran.
    pub fn of_setup_error(e: &Error) -> Stage {
        match e {
            Error::Parse { .. } => Stage::Parse,
            Error::Io { .. } => Stage::Io,
            _ => Stage::Validation,
        }
    }
}

/// Process exit code of a `MISMATCH` verdict.
pub const MISMATCH_EXIT: i32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "MATCH")]
    Match,
    #[serde(rename = "MISMATCH")]
    Mismatch,
    #[serde(rename = "TOPO-ONLY")]
    TopoOnly,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::Mismatch => "MISMATCH",
            Verdict::TopoOnly => "TOPO-ONLY",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub message: String,
}

/// Smallest singular values along the reduction path and the five-stage
/// corner trivialization.
#[derive(Clone, Debug, Serialize)]
pub struct HomotopyCertificate {
    pub reduction_samples: usize,
    pub reduction_min_singular_value: f64,
    pub corner_samples: usize,
    pub corner_min_singular_value: f64,
    pub min_singular_value: f64,
}

/// Winding of `σ′` restricted to one joint eigenbundle, over the collar
/// loop at every corner point. Absent blocks wind zero times: the
/// determinant of the empty restriction is identically one.
#[derive(Clone, Debug, Serialize)]
pub struct WindingEntry {
    pub block: &'static str,
    pub max_rank: usize,
    /// Corner points where the block is nonzero.
    pub points: usize,
    pub winding: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopologicalIndex {
    pub method: &'static str,
    pub index: i64,
    /// Unrounded Chern datum behind `index`, when there is one.
    pub chern_raw: Option<f64>,
    /// Corner formula evaluated on `V⁺₊, V⁻₋, V⁺₋, V⁻₊`.
    pub block_indices: [i64; 4],
    /// The four block values agree up to the signs `(+, +, −, −)`.
    pub relations_hold: bool,
    pub dirac: Option<DiracIndex>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyticResult {
    pub index: i64,
    pub spectral: SpectralReport,
}

/// Per-plaquette curvature of one frame field, for plotting.
#[derive(Clone, Debug)]
pub struct CurvatureTable {
    pub field: String,
    /// `(plaquette, u, v, curvature)` with `(u, v)` the polar and azimuthal
    /// angles on a sphere or the two angles on a torus.
    pub rows: Vec<(usize, f64, f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub scenario: Scenario,
    pub compatibility: Option<CompatibilityReport>,
    pub full_ellipticity_margin: Option<f64>,
    pub homotopy: Option<HomotopyCertificate>,
    pub winding_table: Option<Vec<WindingEntry>>,
    pub topological: Option<TopologicalIndex>,
    pub clutching: Option<ClutchingReport>,
    pub analytic: Option<AnalyticResult>,
    pub topological_index: Option<i64>,
    pub analytic_index: Option<i64>,
    /// Absent when a stage failed.
    pub verdict: Option<Verdict>,
    pub failure: Option<StageFailure>,
    #[serde(skip)]
    pub curvature: Vec<CurvatureTable>,
    #[serde(skip)]
    pub operator: Option<DiscretizedOperator>,
}

impl IndexReport {
    fn new(scenario: Scenario) -> Self {
        IndexReport {
            scenario,
            compatibility: None,
            full_ellipticity_margin: None,
            homotopy: None,
            winding_table: None,
            topological: None,
            clutching: None,
            analytic: None,
            topological_index: None,
            analytic_index: None,
            verdict: None,
            failure: None,
            curvature: Vec::new(),
            operator: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match (&self.failure, self.verdict) {
            (Some(f), _) => f.stage.exit_code(),
            (None, Some(Verdict::Mismatch)) => MISMATCH_EXIT,
            _ => 0,
        }
    }
}

/// Symbol model of a scenario, with its Dirac structure when it has one.
enum Model {
    Dirac(Box<dyn DiracModel>),
    Plain(Box<dyn SymbolModel>),
}

impl Model {
    fn symbol(&self) -> &dyn SymbolModel {
        match self {
            Model::Dirac(m) => m.as_ref(),
            Model::Plain(m) => m.as_ref(),
        }
    }
}

fn model_of(s: &Scenario) -> Model {
    let p = &s.potential;
    match s.kind {
        ScenarioKind::Kink | ScenarioKind::ScalarTrivial if !s.is_three_dimensional() => {
            let (left, right) = s.far_field();
            Model::Dirac(Box::new(Kink1d { left, right }))
        }
        ScenarioKind::Hedgehog | ScenarioKind::ScalarTrivial => {
            let charge = if s.kind == ScenarioKind::Hedgehog {
                p.charge
            } else {
                0
            };
            Model::Dirac(Box::new(Hedgehog {
                charge,
                lambda: p.lambda,
            }))
        }
        ScenarioKind::SyntheticCorner => {
            Model::Plain(Box::new(SyntheticCorner2d { winding: p.charge }))
        }
        ScenarioKind::Kink => unreachable!("1D kinds handled above"),
        ScenarioKind::CustomSymbolFile => Model::Plain(Box::new(
            s.custom_symbol
                .clone()
                .expect("validated scenarios carry their symbol data"),
        )),
    }
}

fn symbol_grid(s: &Scenario) -> Result<SymbolGrid> {
    let n = s.corner_resolution();
    let (base, fiber) = match s.symbol_dim() {
        1 => (build_interval_boundary(), build_interval_boundary()),
        2 => (build_circle_grid(n)?, build_circle_grid(n)?),
        _ => (build_sphere_grid(n)?, build_sphere_grid(n)?),
    };
    SymbolGrid::new(s.symbol_dim(), base, fiber, s.radial_levels())
}

/// Finite-difference operator of an analytic scenario at `points` per axis.
pub fn build_operator(s: &Scenario, points: usize) -> Result<DiscretizedOperator> {
    let p = &s.potential;
    let (lambda, width) = (p.lambda, p.width);
    match s.kind {
        ScenarioKind::Kink => {
            let o = p.orientation as f64;
            assemble_kink_1d(&|t| o * lambda * (t / width).tanh(), s.extent(), points)
        }
        ScenarioKind::ScalarTrivial if !s.is_three_dimensional() => {
            assemble_kink_1d(&|_| lambda, s.extent(), points)
        }
        ScenarioKind::Hedgehog | ScenarioKind::ScalarTrivial => {
            let charge = if s.kind == ScenarioKind::Hedgehog {
                p.charge
            } else {
                0
            };
            assemble_hedgehog_3d(charge, &|r| (r / width).tanh(), s.extent(), points, lambda)
        }
        kind => Err(Error::Validation(format!(
            "{}: no analytic pipeline for {kind:?}",
            s.name
        ))),
    }
}

pub fn solver_params(s: &Scenario) -> SolverParams {
    SolverParams {
        k: s.solver.k,
        gap_ratio_min: s.solver.gap_ratio_min,
        abs_tol: s.solver.abs_tol,
        eig_tol: s.solver.eig_tol,
        ncv: s.solver.ncv,
        seed: s.seed,
    }
}

fn curvature_table(field: &str, grid: &ManifoldGrid, ch: &ChernNumber) -> CurvatureTable {
    let rows = grid
        .plaquettes
        .iter()
        .zip(&ch.curvature)
        .enumerate()
        .map(|(i, (q, &f))| {
            let dim = grid.points[q.vertices[0]].coords.len();
            let mut centroid = vec![0.0; dim];
            for &v in &q.vertices {
                for (c, x) in centroid.iter_mut().zip(&grid.points[v].coords) {
                    *c += x / 4.0;
                }
            }
            let (u, v) = match centroid.as_slice() {
                [x, y, z] => ((z / (x * x + y * y + z * z).sqrt()).acos(), y.atan2(*x)),
                [a, b, c, d] => (b.atan2(*a), d.atan2(*c)),
                _ => (f64::NAN, f64::NAN),
            };
            (i, u, v, f)
        })
        .collect();
    CurvatureTable {
        field: field.to_string(),
        rows,
    }
}

pub fn homotopy_certificate(
    data: &CalliasSymbolData,
    samples: usize,
) -> Result<HomotopyCertificate> {
    let reduction = build_reduction_homotopy(data, samples)?;
    let corner = build_corner_trivialization(data, None)?;
    let r = verify_invertible_path(&reduction);
    let c = verify_invertible_path(&corner);
    let cert = HomotopyCertificate {
        reduction_samples: reduction.n_t(),
        reduction_min_singular_value: r,
        corner_samples: corner.n_t(),
        corner_min_singular_value: c,
        min_singular_value: r.min(c),
    };
    if !(cert.min_singular_value > 0.0) {
        return Err(Error::Singular {
            min_singular_value: cert.min_singular_value,
        });
    }
    Ok(cert)
}

/// Windings of the four block loops of `σ′`, required to be the same at
/// every corner point where the block is present.
pub fn winding_table(data: &CalliasSymbolData) -> Result<Vec<WindingEntry>> {
    let ct = build_corner_trivialization(data, None)?;
    let g = &data.grid;
    let mut table: Vec<WindingEntry> = Block::ALL
        .iter()
        .map(|b| WindingEntry {
            block: b.label(),
            max_rank: 0,
            points: 0,
            winding: 0,
        })
        .collect();
    let (a, b) = corner_fields(data)?;
    let split = joint_split(Arc::new(g.corner_grid()), &a, &b, 1e-8)?;
    for bi in 0..g.n_base() {
        for fi in 0..g.n_fiber() {
            let loops = ct.block_loops(bi, fi)?;
            let ranks = split.ranks_at(bi * g.n_fiber() + fi);
            for (k, lp) in loops.iter().enumerate() {
                if lp.is_empty() {
                    continue;
                }
                let w = winding_number(lp)?;
                let e = &mut table[k];
                if e.points > 0 && e.winding != w {
                    return Err(Error::Structural(format!(
                        "block {} winds {} times at corner point ({bi}, {fi}) but {} times elsewhere",
                        e.block, w, e.winding
                    )));
                }
                e.winding = w;
                e.points += 1;
                e.max_rank = e.max_rank.max(ranks[k]);
            }
        }
    }
    Ok(table)
}

fn relations_hold(blocks: &[i64; 4]) -> bool {
    Block::ALL
        .iter()
        .all(|b| b.relation_sign() * blocks[b.index()] == blocks[0])
}

fn block_values(mut f: impl FnMut(Block) -> Result<i64>) -> Result<[i64; 4]> {
    let mut out = [0; 4];
    for b in Block::ALL {
        out[b.index()] = f(b)?;
    }
    Ok(out)
}

fn f_plus_index(
    model: &dyn DiracModel,
    grid: Arc<ManifoldGrid>,
    tol: f64,
) -> Result<(DiracIndex, Option<ChernNumber>)> {
    let cliff = clifford_from_model(model, grid.clone())?;
    let phi = HermitianField::new(
        model.rank(),
        grid.points
            .iter()
            .map(|p| model.potential(&p.coords))
            .collect(),
    )?;
    let (f_plus, _) = potential_split(grid.clone(), &phi, tol)?;
    let ch = if grid.dim == 2 {
        Some(fhs_chern_number(&f_plus)?)
    } else {
        None
    };
    Ok((dirac_topo_index(&f_plus, &cliff)?, ch))
}

fn topological_index(
    s: &Scenario,
    model: &Model,
    data: &CalliasSymbolData,
    split: &JointSplitting,
    curvature: &mut Vec<CurvatureTable>,
) -> Result<TopologicalIndex> {
    let g = &data.grid;
    let tol = s.tolerances.potential;
    let result = match s.symbol_dim() {
        1 => {
            let blocks = block_values(|b| corner_index_0d_block(split, b))?;
            let dirac = match model {
                Model::Dirac(m) => {
                    Some(f_plus_index(m.as_ref(), Arc::new(build_interval_boundary()), tol)?.0)
                }
                Model::Plain(_) => None,
            };
            TopologicalIndex {
                method: "0D corner formula",
                index: blocks[0],
                chern_raw: None,
                block_indices: blocks,
                relations_hold: relations_hold(&blocks),
                dirac,
            }
        }
        2 => {
            let mut pp = None;
            let blocks = block_values(|b| {
                let (i, ch) = corner_index_2d_block(split, b)?;
                if b == Block::PlusPlus {
                    pp = Some(ch);
                }
                Ok(i)
            })?;
            let ch = pp.expect("V⁺₊ evaluated");
            curvature.push(curvature_table("V++", &split.grid, &ch));
            TopologicalIndex {
                method: "corner Chern number",
                index: blocks[0],
                chern_raw: Some(ch.raw),
                block_indices: blocks,
                relations_hold: relations_hold(&blocks),
                dirac: None,
            }
        }
        _ => {
            let Model::Dirac(m) = model else {
                unreachable!("3D scenarios are Dirac-type")
            };
            let sphere = Arc::new(build_sphere_grid(s.geometry.boundary_resolution)?);
            let (dirac, ch) = f_plus_index(m.as_ref(), sphere.clone(), tol)?;
            let ch = ch.expect("sphere boundary");
            curvature.push(curvature_table("F+", &sphere, &ch));
            let blocks = block_values(|b| corner_index_product(split, &g.base, &g.fiber, b))?;
            if blocks[0] != dirac.index {
                return Err(Error::Structural(format!(
                    "product corner formula gives {} but the boundary Dirac index is {}",
                    blocks[0], dirac.index
                )));
            }
            TopologicalIndex {
                method: "boundary Dirac index",
                index: dirac.index,
                chern_raw: Some(dirac.chern_raw),
                block_indices: blocks,
                relations_hold: relations_hold(&blocks),
                dirac: Some(dirac),
            }
        }
    };
    if let Some(d) = &result.dirac {
        if d.index != result.index {
            return Err(Error::Structural(format!(
                "corner formula gives {} but the boundary Dirac index is {}",
                result.index, d.index
            )));
        }
    }
    if !result.relations_hold {
        return Err(Error::Structural(format!(
            "block indices {:?} violate the eigenbundle sign relations",
            result.block_indices
        )));
    }
    Ok(result)
}

fn clutching(s: &Scenario, model: &Model) -> Result<Option<ClutchingReport>> {
    let tol = s.tolerances.clutching;
    let report = match (s.symbol_dim(), model) {
        (1, Model::Dirac(m)) => verify_clutching_decomposition(
            m.as_ref(),
            &clifford_from_model(m.as_ref(), Arc::new(build_interval_boundary()))?,
            None,
            tol,
        )?,
        (3, Model::Dirac(m)) => {
            let sphere = Arc::new(build_sphere_grid(s.geometry.boundary_resolution)?);
            verify_clutching_decomposition(
                m.as_ref(),
                &clifford_from_model(m.as_ref(), sphere)?,
                None,
                tol,
            )?
        }
        (2, _) => {
            // The corner data carries no Clifford module; the companion
            // Dirac-type circle data with the same winding is checked instead.
            let companion = SyntheticDiracCircle {
                winding: s.potential.charge,
                trivial: false,
            };
            let n = s.corner_resolution();
            let base = Arc::new(build_circle_grid(n)?);
            let fiber = build_circle_grid(n)?;
            verify_clutching_decomposition(
                &companion,
                &clifford_from_model(&companion, base)?,
                Some(&fiber),
                tol,
            )?
        }
        _ => return Ok(None),
    };
    if !report.passed {
        return Err(Error::Decomposition(format!(
            "angles {:.3e}/{:.3e}, identity {:?}",
            report.max_inward_angle, report.max_outward_angle, report.identity
        )));
    }
    Ok(Some(report))
}

struct Pipeline {
    report: IndexReport,
}

impl Pipeline {
    /// Runs one stage, recording its failure with attribution.
    fn stage<T>(
        &mut self,
        stage: Stage,
        f: impl FnOnce(&mut IndexReport) -> Result<T>,
    ) -> Option<T> {
        if self.report.failure.is_some() {
            return None;
        }
        let t0 = Instant::now();
        let out = f(&mut self.report);
        log::info!(
            "{}: stage {stage:?} took {:.2} s",
            self.report.scenario.name,
            t0.elapsed().as_secs_f64()
        );
        match out {
            Ok(v) => Some(v),
            Err(e) => {
                log::error!("{}: stage {stage:?} failed: {e}", self.report.scenario.name);
                self.report.failure = Some(StageFailure {
                    stage,
                    message: e.to_string(),
                });
                None
            }
        }
    }
}

/// Runs compatibility, full ellipticity, homotopy certificates, winding
/// table, topological index, clutching and (when defined) the analytic
/// index, then compares the two indices.
pub fn run_scenario(scenario: &Scenario) -> IndexReport {
    let mut pl = Pipeline {
        report: IndexReport::new(scenario.clone()),
    };
    let s = scenario;
    if pl.stage(Stage::Validation, |_| s.validate()).is_none() {
        return pl.report;
    }
    let model = model_of(s);
    let data = pl.stage(Stage::Compatibility, |r| {
        let data = CalliasSymbolData::sample(model.symbol(), Arc::new(symbol_grid(s)?))?;
        let compat = validate_compatibility(&data, s.tolerances.compatibility)?;
        let v = compat.verdicts;
        let passed =
            v.hermitian && v.invertible_potential && v.commuting && v.asymptotically_compatible;
        r.full_ellipticity_margin = Some(compat.full_ellipticity_margin);
        r.compatibility = Some(compat.clone());
        if !passed {
            return Err(Error::Compatibility(format!("{v:?}")));
        }
        Ok(data)
    });
    pl.stage(Stage::Ellipticity, |r| {
        let c = r.compatibility.as_ref().expect("compatibility ran");
        if c.verdicts.interior_elliptic && c.verdicts.fully_elliptic {
            Ok(())
        } else {
            Err(Error::Invertibility(format!(
                "full ellipticity margin {:.3e}, interior {:.3e}",
                c.full_ellipticity_margin, c.interior_ellipticity
            )))
        }
    });
    let Some(data) = data else { return pl.report };
    pl.stage(Stage::Homotopy, |r| {
        r.homotopy = Some(homotopy_certificate(&data, s.geometry.homotopy_samples)?);
        Ok(())
    });
    pl.stage(Stage::Winding, |r| {
        r.winding_table = Some(winding_table(&data)?);
        Ok(())
    });
    pl.stage(Stage::Topology, |r| {
        let (a, b) = corner_fields(&data)?;
        let split = joint_split(
            Arc::new(data.grid.corner_grid()),
            &a,
            &b,
            s.tolerances.split,
        )?;
        let t = topological_index(s, &model, &data, &split, &mut r.curvature)?;
        r.topological_index = Some(t.index);
        r.topological = Some(t);
        Ok(())
    });
    pl.stage(Stage::Clutching, |r| {
        r.clutching = clutching(s, &model)?;
        Ok(())
    });
    if s.kind.has_analytic() && s.solver.analytic {
        pl.stage(Stage::Analytic, |r| {
            let op = build_operator(s, s.points())?;
            let (index, spectral) = analytic_index(&op, &solver_params(s))?;
            r.analytic_index = Some(index);
            r.analytic = Some(AnalyticResult { index, spectral });
            r.operator = Some(op);
            Ok(())
        });
    }
    let r = &mut pl.report;
    if r.failure.is_none() {
        r.verdict = Some(match (r.topological_index, r.analytic_index) {
            (Some(t), Some(a)) if t == a => Verdict::Match,
            (Some(_), Some(_)) => Verdict::Mismatch,
            _ => Verdict::TopoOnly,
        });
    }
    pl.report
}

/// `convergence_sweep` of an analytic scenario over grid resolutions.
pub fn sweep_scenario(s: &Scenario, resolutions: &[usize]) -> Result<Vec<SweepPoint>> {
    s.validate()?;
    if !s.kind.has_analytic() {
        return Err(Error::Validation(format!(
            "{}: {:?} has no analytic pipeline to sweep",
            s.name, s.kind
        )));
    }
    convergence_sweep(&|n| build_operator(s, n), resolutions, &solver_params(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::scenario::builtin;

    #[test]
    fn kink_default_matches() {
        let r = run_scenario(&builtin("kink-default").unwrap());
        assert!(r.failure.is_none(), "{:?}", r.failure);
        assert_eq!(
            (r.topological_index, r.analytic_index),
            (Some(-1), Some(-1))
        );
        assert_eq!(r.verdict, Some(Verdict::Match));
        assert_eq!(r.exit_code(), 0);
        let w: Vec<i64> = r.winding_table.unwrap().iter().map(|e| e.winding).collect();
        assert_eq!(w, vec![-1, 0, 0, 0]);
        assert!(r.homotopy.unwrap().min_singular_value > 0.0);
    }

    #[test]
    fn synthetic_corner_is_topo_only() {
        let r = run_scenario(&builtin("synthetic-corner-k1").unwrap());
        assert!(r.failure.is_none(), "{:?}", r.failure);
        assert_eq!(r.verdict, Some(Verdict::TopoOnly));
        let t = r.topological.unwrap();
        assert!((t.chern_raw.unwrap() - t.chern_raw.unwrap().round()).abs() < 1e-6);
        assert!(r.clutching.unwrap().passed);
        assert_eq!(r.curvature.len(), 1);
    }

    #[test]
    fn stage_errors_are_attributed() {
        let mut s = builtin("kink-default").unwrap();
        s.geometry.points = Some(2);
        let r = run_scenario(&s);
        let f = r.failure.as_ref().unwrap();
        assert_eq!(f.stage, Stage::Validation);
        assert_eq!(r.exit_code(), Stage::Validation.exit_code());
        assert!(r.verdict.is_none());
        let mut s = builtin("kink-default").unwrap();
        s.geometry.radial_levels = 3;
        assert_eq!(run_scenario(&s).failure.unwrap().stage, Stage::Validation);
    }

    #[test]
    fn exit_codes_are_distinct() {
        let stages = [
            Stage::Parse,
            Stage::Validation,
            Stage::Compatibility,
            Stage::Ellipticity,
            Stage::Homotopy,
            Stage::Winding,
            Stage::Topology,
            Stage::Clutching,
            Stage::Analytic,
            Stage::Io,
        ];
        let mut codes: Vec<i32> = stages.iter().map(|s| s.exit_code()).collect();
        codes.push(MISMATCH_EXIT);
        codes.push(0);
        let n = codes.len();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), n);
    }
}
