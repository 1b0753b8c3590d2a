use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{direction3, product_grid, ManifoldGrid};
use crate::linalg::{c, hermitian_defect, spectral_norm, Mat, I};

/// One `n × n` Hermitian matrix per sample point.
#[derive(Clone, Debug)]
pub struct HermitianField {
    pub rank: usize,
    pub samples: Vec<Mat>,
}

impl HermitianField {
    /// Rejects samples of the wrong shape or with `‖M − M*‖ > 10⁻¹²‖M‖`.
    pub fn new(rank: usize, samples: Vec<Mat>) -> Result<Self> {
        for (i, m) in samples.iter().enumerate() {
            if m.nrows() != rank || m.ncols() != rank {
                return Err(Error::Structural(format!(
                    "sample {i} is {}x{}, expected rank {rank}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let defect = hermitian_defect(m);
            if defect > 1e-12 * spectral_norm(m).max(f64::MIN_POSITIVE) {
                return Err(Error::Compatibility(format!(
                    "sample {i} not Hermitian (defect {defect:.3e})"
                )));
            }
        }
        Ok(HermitianField { rank, samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        self.samples
            .iter()
            .map(hermitian_defect)
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    /// The cosphere face over the interior, parametrized by `ρ ∈ [0, 1]`
    /// with position `x = ρ/(1−ρ) · b̂`.
    Interior,
    /// The compactified fiber face over `∂X`, parametrized by
    /// `s = |ξ|/(1+|ξ|) ∈ [0, 1]`.
    Boundary,
}

/// Sampling of the boundary of the compactified cotangent space: base
/// directions × unit covectors × a radial coordinate on each face.
///
/// Samples are stored level-major: level `ℓ < R` is the interior face at
/// `ρ = radial[ℓ]`, level `ℓ ≥ R` the boundary face at
/// `s = radial[2R − 1 − ℓ]`, so the collar coordinate increases with `ℓ`
/// from `−1` (interior origin) through `0` (corner, twice) to `1`
/// (zero section).
#[derive(Clone, Debug)]
pub struct SymbolGrid {
    pub ambient_dim: usize,
    pub base: Arc<ManifoldGrid>,
    pub fiber: Arc<ManifoldGrid>,
    pub radial: Vec<f64>,
}

impl SymbolGrid {
    pub fn new(
        ambient_dim: usize,
        base: ManifoldGrid,
        fiber: ManifoldGrid,
        n_radial: usize,
    ) -> Result<Self> {
        if n_radial < 2 {
            return Err(Error::DegenerateGrid(format!(
                "n_radial must be >= 2, got {n_radial}"
            )));
        }
        if base.dim + 1 != ambient_dim || fiber.dim + 1 != ambient_dim {
            return Err(Error::Dimension(format!(
                "base dim {} and fiber dim {} do not bound an ambient dimension {ambient_dim}",
                base.dim, fiber.dim
            )));
        }
        Ok(SymbolGrid {
            ambient_dim,
            base: Arc::new(base),
            fiber: Arc::new(fiber),
            radial: crate::geometry::uniform_unit_grid(n_radial),
        })
    }

    pub fn n_base(&self) -> usize {
        self.base.len()
    }

    pub fn n_fiber(&self) -> usize {
        self.fiber.len()
    }

    pub fn n_radial(&self) -> usize {
        self.radial.len()
    }

    pub fn n_corner(&self) -> usize {
        self.n_base() * self.n_fiber()
    }

    pub fn n_levels(&self) -> usize {
        2 * self.n_radial()
    }

    pub fn n_samples(&self) -> usize {
        self.n_levels() * self.n_corner()
    }

    /// Face and radial index of a level.
    pub fn level(&self, l: usize) -> (Face, usize) {
        let r = self.n_radial();
        if l < r {
            (Face::Interior, l)
        } else {
            (Face::Boundary, 2 * r - 1 - l)
        }
    }

    /// Collar coordinate `c ∈ [−1, 1]` of a level.
    pub fn collar(&self, l: usize) -> f64 {
        match self.level(l) {
            (Face::Interior, k) => self.radial[k] - 1.0,
            (Face::Boundary, k) => 1.0 - self.radial[k],
        }
    }

    pub fn base_dir(&self, b: usize) -> Vec<f64> {
        direction3(&self.base.points[b])[..self.ambient_dim].to_vec()
    }

    pub fn fiber_dir(&self, f: usize) -> Vec<f64> {
        direction3(&self.fiber.points[f])[..self.ambient_dim].to_vec()
    }

    /// Corner points `b · |fiber| + f` with product adjacency.
    pub fn corner_grid(&self) -> ManifoldGrid {
        product_grid(&self.base, &self.fiber)
    }
}

/// `⟨ξ⟩^{−m}` at `|ξ| = s/(1−s)`; zero on the cosphere face `s = 1`.
pub fn inverse_weight(s: f64, m: f64) -> f64 {
    if s >= 1.0 {
        return 0.0;
    }
    let (a, b) = (1.0 - s, s);
    (a * a / (a * a + b * b)).powf(0.5 * m)
}

/// `|ξ|^m ⟨ξ⟩^{−m}` at `|ξ| = s/(1−s)`; one on the cosphere face.
pub fn homogeneous_weight(s: f64, m: f64) -> f64 {
    if s >= 1.0 {
        return 1.0;
    }
    let (a, b) = (1.0 - s, s);
    (b * b / (a * a + b * b)).powf(0.5 * m)
}

/// A differential operator `D` of order `m` with potential `Φ`, presented
/// through its symbols. The scattering symbol at infinity is
/// `σ_sc(D)(b, ξ) = |ξ|^m · principal_at_infinity(b, ξ/|ξ|) + lower_at_infinity(b)`.
pub trait SymbolModel: Send + Sync {
    fn name(&self) -> String;
    fn rank(&self) -> usize;
    fn ambient_dim(&self) -> usize;
    fn order(&self) -> f64 {
        1.0
    }
    /// Principal symbol at an interior point `x` and unit covector `ω`.
    fn principal(&self, x: &[f64], omega: &[f64]) -> Mat;
    /// Limit of the principal symbol along the ray towards `b̂`.
    fn principal_at_infinity(&self, b: &[f64], omega: &[f64]) -> Mat;
    fn lower_at_infinity(&self, _b: &[f64]) -> Mat {
        Mat::zeros(self.rank(), self.rank())
    }
    /// `Φ` at the boundary point `b̂`.
    fn potential(&self, b: &[f64]) -> Mat;
}

/// The full symbol package of `P = D + iΦ` sampled on a [`SymbolGrid`].
#[derive(Clone)]
pub struct CalliasSymbolData {
    pub name: String,
    pub order: f64,
    pub grid: Arc<SymbolGrid>,
    /// `σ(D)` on the interior face, index `(k · |base| + b) · |fiber| + f`
    /// at `ρ = radial[k]`.
    pub interior_symbol: HermitianField,
    /// `σ_sc(D) ⟨ξ⟩^{−m}` on the boundary face, same layout at `s = radial[k]`.
    pub boundary_symbol: HermitianField,
    /// `Φ` per base point.
    pub potential: HermitianField,
}

impl CalliasSymbolData {
    pub fn sample(model: &dyn SymbolModel, grid: Arc<SymbolGrid>) -> Result<Self> {
        if model.ambient_dim() != grid.ambient_dim {
            return Err(Error::Structural(format!(
                "model '{}' lives in dimension {}, grid in {}",
                model.name(),
                model.ambient_dim(),
                grid.ambient_dim
            )));
        }
        let (n, m) = (model.rank(), model.order());
        let (nb, nf) = (grid.n_base(), grid.n_fiber());
        let mut interior = Vec::with_capacity(grid.n_radial() * nb * nf);
        let mut boundary = Vec::with_capacity(grid.n_radial() * nb * nf);
        let at_inf: Vec<Vec<Mat>> = (0..nb)
            .map(|b| {
                (0..nf)
                    .map(|f| model.principal_at_infinity(&grid.base_dir(b), &grid.fiber_dir(f)))
                    .collect()
            })
            .collect();
        let lower: Vec<Mat> = (0..nb)
            .map(|b| model.lower_at_infinity(&grid.base_dir(b)))
            .collect();
        for &r in &grid.radial {
            for b in 0..nb {
                let bd = grid.base_dir(b);
                for f in 0..nf {
                    if r >= 1.0 {
                        interior.push(at_inf[b][f].clone());
                    } else {
                        let x: Vec<f64> = bd.iter().map(|v| v * r / (1.0 - r)).collect();
                        interior.push(model.principal(&x, &grid.fiber_dir(f)));
                    }
                }
            }
        }
        for &s in &grid.radial {
            let (hw, iw) = (homogeneous_weight(s, m), inverse_weight(s, m));
            for b in 0..nb {
                for f in 0..nf {
                    let mut sym = &at_inf[b][f] * c(hw, 0.0);
                    if iw > 0.0 {
                        sym += &lower[b] * c(iw, 0.0);
                    }
                    boundary.push(sym);
                }
            }
        }
        let potential = (0..nb)
            .map(|b| model.potential(&grid.base_dir(b)))
            .collect();
        Ok(CalliasSymbolData {
            name: model.name(),
            order: m,
            interior_symbol: HermitianField::new(n, interior)?,
            boundary_symbol: HermitianField::new(n, boundary)?,
            potential: HermitianField::new(n, potential)?,
            grid,
        })
    }

    pub fn rank(&self) -> usize {
        self.potential.rank
    }

    /// Index into the per-face fields.
    pub fn face_index(&self, k: usize, b: usize, f: usize) -> usize {
        (k * self.grid.n_base() + b) * self.grid.n_fiber() + f
    }

    /// `⟨ξ⟩^{−m}` at radial index `k` of the boundary face.
    pub fn potential_weight(&self, k: usize) -> f64 {
        inverse_weight(self.grid.radial[k], self.order)
    }

    /// Renormalized total symbol of `P` at a sample `(level, b, f)`:
    /// `σ(D)` on the interior face, `σ_sc(D)⟨ξ⟩^{−m} + i⟨ξ⟩^{−m}Φ` on the
    /// boundary face. The potential term drops out at the corner.
    pub fn total_symbol(&self, level: usize, b: usize, f: usize) -> Mat {
        match self.grid.level(level) {
            (Face::Interior, k) => self.interior_symbol.samples[self.face_index(k, b, f)].clone(),
            (Face::Boundary, k) => {
                let w = self.potential_weight(k);
                let d = &self.boundary_symbol.samples[self.face_index(k, b, f)];
                if w == 0.0 {
                    d.clone()
                } else {
                    d + &self.potential.samples[b] * (I * w)
                }
            }
        }
    }

    /// The `D` part alone at a sample.
    pub fn d_symbol(&self, level: usize, b: usize, f: usize) -> &Mat {
        match self.grid.level(level) {
            (Face::Interior, k) => &self.interior_symbol.samples[self.face_index(k, b, f)],
            (Face::Boundary, k) => &self.boundary_symbol.samples[self.face_index(k, b, f)],
        }
    }

    /// Largest disagreement between the two faces at the corner.
    pub fn corner_mismatch(&self) -> f64 {
        let last = self.grid.n_radial() - 1;
        let mut worst: f64 = 0.0;
        for b in 0..self.grid.n_base() {
            for f in 0..self.grid.n_fiber() {
                let i = self.face_index(last, b, f);
                worst = worst.max(
                    (&self.interior_symbol.samples[i] - &self.boundary_symbol.samples[i]).norm(),
                );
            }
        }
        worst
    }
}
