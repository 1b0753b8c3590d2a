use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ManifoldGrid;
use crate::linalg::{orthonormality_defect, Mat};

/// Link determinants below this modulus make a plaquette's phase unreliable.
pub const LINK_MODULUS_MIN: f64 = 1e-3;

/// An orthonormal frame of a subbundle at every grid point.
#[derive(Clone, Debug)]
pub struct BundleFrameField {
    pub grid: Arc<ManifoldGrid>,
    pub rank: usize,
    pub frames: Vec<Mat>,
}

impl BundleFrameField {
    /// Ranks may differ between connected components but not along an edge;
    /// `rank` is the largest.
    pub fn new(grid: Arc<ManifoldGrid>, frames: Vec<Mat>) -> Result<Self> {
        if frames.len() != grid.len() {
            return Err(Error::Structural(format!(
                "{} frames on a grid of {} points",
                frames.len(),
                grid.len()
            )));
        }
        for (p, f) in frames.iter().enumerate() {
            let d = orthonormality_defect(f);
            if d > 1e-10 {
                return Err(Error::Structural(format!(
                    "frame at point {p} not orthonormal (defect {d:.3e})"
                )));
            }
        }
        for &[a, b] in &grid.edges {
            if frames[a].ncols() != frames[b].ncols() {
                return Err(Error::Discontinuity { a, b });
            }
        }
        let rank = frames.iter().map(|f| f.ncols()).max().unwrap_or(0);
        Ok(BundleFrameField { grid, rank, frames })
    }

    /// Pointwise direct sum: frames stacked block-diagonally.
    pub fn direct_sum(&self, other: &BundleFrameField) -> Result<Self> {
        let frames = self
            .frames
            .iter()
            .zip(&other.frames)
            .map(|(a, b)| {
                let mut m = Mat::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
                m.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
                m.view_mut((a.nrows(), a.ncols()), (b.nrows(), b.ncols()))
                    .copy_from(b);
                m
            })
            .collect();
        BundleFrameField::new(self.grid.clone(), frames)
    }

    /// Pointwise tensor product of frames.
    pub fn tensor(&self, other: &BundleFrameField) -> Result<Self> {
        let frames = self
            .frames
            .iter()
            .zip(&other.frames)
            .map(|(a, b)| a.kronecker(b))
            .collect();
        BundleFrameField::new(self.grid.clone(), frames)
    }

    /// Same frames over a reoriented copy of the grid.
    pub fn on_grid(&self, grid: Arc<ManifoldGrid>) -> Result<Self> {
        BundleFrameField::new(grid, self.frames.clone())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChernNumber {
    pub integer: i64,
    pub raw: f64,
    /// Field strength `arg Π U` per plaquette, in grid order.
    pub curvature: Vec<f64>,
}

/// First Chern number by the plaquette link-variable method: with
/// `U_pq = det(F_p* F_q)/|det(F_p* F_q)|`, each plaquette contributes
/// `arg(U₀₁ U₁₂ U₂₃ U₃₀)` and the total is divided by `2π`.
pub fn fhs_chern_number(field: &BundleFrameField) -> Result<ChernNumber> {
    let g = &field.grid;
    if g.dim != 2 || g.plaquettes.is_empty() {
        return Err(Error::Dimension(format!(
            "Chern number needs a 2D plaquette grid, got dim {}",
            g.dim
        )));
    }
    let mut curvature = Vec::with_capacity(g.plaquettes.len());
    for (i, q) in g.plaquettes.iter().enumerate() {
        let mut prod = num_complex::Complex64::new(1.0, 0.0);
        for k in 0..4 {
            let (a, b) = (q.vertices[k], q.vertices[(k + 1) % 4]);
            let link = (field.frames[a].adjoint() * &field.frames[b]).determinant();
            let modulus = link.norm();
            if modulus < LINK_MODULUS_MIN {
                return Err(Error::FrameDegeneracy {
                    plaquette: i,
                    modulus,
                });
            }
            prod *= link / modulus;
        }
        curvature.push(prod.arg());
    }
    let raw = curvature.iter().sum::<f64>() / (2.0 * PI);
    Ok(ChernNumber {
        integer: raw.round() as i64,
        raw,
        curvature,
    })
}
