use std::sync::Arc;

use super::chern::{fhs_chern_number, BundleFrameField, ChernNumber};
use crate::error::{Error, Result};
use crate::geometry::ManifoldGrid;
use crate::symbolic::{Block, JointSplitting};

/// Sign of the 2D corner integral relative to the product orientation of
/// base × fiber. It repeats the fiber-sphere sign `η = −1` of the 0D count,
/// where the kink pins it; no analytic 2D scenario can calibrate it further
/// because Dirac-type data over `∂X = S¹` always have index 0.
pub const S_CORNER: i64 = -1;

/// Sign of the product formula `c₁(fiber slice)·c₁(base slice)` on
/// `S² × S²`, calibrated on the charge-1 hedgehog whose analytic index is
/// `+1`.
pub const S_PRODUCT: i64 = 1;

/// Signed rank count over a 0-dimensional corner for one block:
/// `Σ ε(b)·η(ω)·rank`, with the product point sign `ε(b)·sign(ω)` and
/// `η(ω) = −sign(ω)` so that `η(+∞) = −1`.
pub fn corner_index_0d_block(split: &JointSplitting, block: Block) -> Result<i64> {
    if split.grid.dim != 0 {
        return Err(Error::Dimension(format!(
            "0D corner formula on a {}-dimensional corner",
            split.grid.dim
        )));
    }
    Ok(split
        .grid
        .points
        .iter()
        .zip(split.block_frames(block))
        .map(|(p, f)| -(p.sign as i64) * f.ncols() as i64)
        .sum())
}

pub fn corner_index_0d(split: &JointSplitting) -> Result<i64> {
    corner_index_0d_block(split, Block::PlusPlus)
}

pub fn block_frame_field(split: &JointSplitting, block: Block) -> Result<BundleFrameField> {
    BundleFrameField::new(split.grid.clone(), split.block_frames(block).to_vec())
}

/// `S_CORNER · c₁` of one block over a 2-dimensional corner.
pub fn corner_index_2d_block(split: &JointSplitting, block: Block) -> Result<(i64, ChernNumber)> {
    if split.grid.dim != 2 {
        return Err(Error::Dimension(format!(
            "2D corner formula on a {}-dimensional corner",
            split.grid.dim
        )));
    }
    let ch = fhs_chern_number(&block_frame_field(split, block)?)?;
    Ok((S_CORNER * ch.integer, ch))
}

pub fn corner_index_2d(split: &JointSplitting) -> Result<i64> {
    corner_index_2d_block(split, Block::PlusPlus).map(|(i, _)| i)
}

/// Chern numbers of a constant-rank block over the fiber slice
/// `{b₀} × fiber` and the base slice `base × {f₀}`, with `b₀ = f₀ = 0`. For
/// an exterior product `E ⊠ F` these are `rk E · c₁(F)` and `rk F · c₁(E)`.
pub fn slice_chern_numbers(
    split: &JointSplitting,
    base: &Arc<ManifoldGrid>,
    fiber: &Arc<ManifoldGrid>,
    block: Block,
) -> Result<(ChernNumber, ChernNumber)> {
    let (nb, nf) = (base.len(), fiber.len());
    if split.grid.len() != nb * nf {
        return Err(Error::Structural(format!(
            "{} corner points for a {nb} × {nf} product",
            split.grid.len()
        )));
    }
    if base.dim != 2 || fiber.dim != 2 {
        return Err(Error::Dimension(format!(
            "product formula needs 2D base and fiber, got {} and {}",
            base.dim, fiber.dim
        )));
    }
    let frames = split.block_frames(block);
    let rank = frames.first().map_or(0, |f| f.ncols());
    if let Some(p) = frames.iter().position(|f| f.ncols() != rank) {
        return Err(Error::Structural(format!(
            "product formula needs a constant rank, rank {} at point {p} and {rank} at point 0",
            frames[p].ncols()
        )));
    }
    let fiber_slice =
        BundleFrameField::new(fiber.clone(), (0..nf).map(|f| frames[f].clone()).collect())?;
    let base_slice = BundleFrameField::new(
        base.clone(),
        (0..nb).map(|b| frames[b * nf].clone()).collect(),
    )?;
    Ok((
        fhs_chern_number(&fiber_slice)?,
        fhs_chern_number(&base_slice)?,
    ))
}

/// `S_PRODUCT · c₁(fiber slice) · c₁(base slice) / rank` for one block,
/// which is `S_PRODUCT · c₁(E) · c₁(F)` when the block is `E ⊠ F`.
pub fn corner_index_product(
    split: &JointSplitting,
    base: &Arc<ManifoldGrid>,
    fiber: &Arc<ManifoldGrid>,
    block: Block,
) -> Result<i64> {
    let (cf, cb) = slice_chern_numbers(split, base, fiber, block)?;
    let rank = split.block_frames(block)[0].ncols() as i64;
    if rank == 0 {
        return Ok(0);
    }
    let product = cf.integer * cb.integer;
    if product % rank != 0 {
        return Err(Error::Structural(format!(
            "slice Chern numbers {} and {} are not those of an exterior product of rank {rank}",
            cf.integer, cb.integer
        )));
    }
    Ok(S_PRODUCT * product / rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    use crate::geometry::{build_circle_grid, build_interval_boundary, build_sphere_grid};
    use crate::linalg::{eigh, identity, Mat, C64};
    use crate::symbolic::models::{lattice_direction, Hedgehog, Kink1d, SyntheticCorner2d};
    use crate::symbolic::{corner_fields, joint_split, CalliasSymbolData, SymbolGrid, SymbolModel};

    fn split_of(
        model: &dyn SymbolModel,
        base: ManifoldGrid,
        fiber: ManifoldGrid,
    ) -> (JointSplitting, Arc<SymbolGrid>) {
        let grid = Arc::new(SymbolGrid::new(model.ambient_dim(), base, fiber, 3).unwrap());
        let data = CalliasSymbolData::sample(model, grid.clone()).unwrap();
        let (a, b) = corner_fields(&data).unwrap();
        (
            joint_split(Arc::new(grid.corner_grid()), &a, &b, 1e-8).unwrap(),
            grid,
        )
    }

    fn kink_split(model: &Kink1d) -> JointSplitting {
        split_of(model, build_interval_boundary(), build_interval_boundary()).0
    }

    #[test]
    fn kink_counts() {
        // Closed-form oracle: for −i d/dt + iφ the kernel e^{∫φ} and the
        // cokernel e^{−∫φ}; exactly one of them decays when φ changes sign.
        assert_eq!(corner_index_0d(&kink_split(&Kink1d::kink())).unwrap(), -1);
        assert_eq!(
            corner_index_0d(&kink_split(&Kink1d::anti_kink())).unwrap(),
            1
        );
        assert_eq!(corner_index_0d(&kink_split(&Kink1d::trivial())).unwrap(), 0);
    }

    #[test]
    fn kink_block_relations() {
        for model in [Kink1d::kink(), Kink1d::anti_kink(), Kink1d::trivial()] {
            let s = kink_split(&model);
            let base = corner_index_0d(&s).unwrap();
            for blk in Block::ALL {
                assert_eq!(
                    corner_index_0d_block(&s, blk).unwrap(),
                    blk.relation_sign() * base,
                    "{}",
                    blk.label()
                );
            }
        }
    }

    #[test]
    fn reversed_base_negates_0d() {
        let model = Kink1d::kink();
        let s = split_of(
            &model,
            build_interval_boundary().reversed(),
            build_interval_boundary(),
        )
        .0;
        assert_eq!(corner_index_0d(&s).unwrap(), 1);
    }

    /// Berry phase of the `+1` eigenline of `n̂·σ` around the fiber circle
    /// at base angle `θ`, from the product of consecutive overlaps.
    fn wilson_phase(k: i32, theta: f64, n_fiber: usize) -> f64 {
        let line = |alpha: f64| {
            let n = lattice_direction(k, theta, alpha);
            let (vals, vecs) = eigh(&crate::linalg::pauli_dot(n));
            vecs.column(if vals[1] > 0.0 { 1 } else { 0 }).into_owned()
        };
        let states: Vec<_> = (0..n_fiber)
            .map(|j| line(2.0 * PI * j as f64 / n_fiber as f64))
            .collect();
        let mut prod = C64::new(1.0, 0.0);
        for j in 0..n_fiber {
            prod *= states[j].dotc(&states[(j + 1) % n_fiber]);
        }
        prod.arg()
    }

    /// Chern number as the winding of the fiber Wilson loop along the base.
    fn wilson_chern(k: i32, n_base: usize, n_fiber: usize) -> i64 {
        let w: Vec<f64> = (0..=n_base)
            .map(|i| wilson_phase(k, 2.0 * PI * i as f64 / n_base as f64, n_fiber))
            .collect();
        let total: f64 = w
            .windows(2)
            .map(|p| {
                let d = p[1] - p[0];
                d - 2.0 * PI * (d / (2.0 * PI)).round()
            })
            .sum();
        (total / (2.0 * PI)).round() as i64
    }

    #[test]
    fn synthetic_corner_matches_wilson_loop() {
        for k in -2..=2 {
            let (s, _) = split_of(
                &SyntheticCorner2d { winding: k },
                build_circle_grid(48).unwrap(),
                build_circle_grid(48).unwrap(),
            );
            let (idx, ch) = corner_index_2d_block(&s, Block::PlusPlus).unwrap();
            assert!((ch.raw - ch.integer as f64).abs() < 0.05);
            let oracle = wilson_chern(k, 48, 48);
            assert_eq!(ch.integer, oracle, "k = {k}");
            assert_eq!(idx.abs(), k.abs() as i64);
            for blk in Block::ALL {
                let (bi, _) = corner_index_2d_block(&s, blk).unwrap();
                assert_eq!(bi, blk.relation_sign() * idx, "k = {k}, {}", blk.label());
            }
        }
    }

    #[test]
    fn trivial_summand_adds_nothing() {
        let (mut s, _) = split_of(
            &SyntheticCorner2d { winding: 2 },
            build_circle_grid(32).unwrap(),
            build_circle_grid(32).unwrap(),
        );
        let before = corner_index_2d(&s).unwrap();
        let trivial = identity(2);
        let frames = &mut s.frames[Block::PlusPlus.index()];
        for f in frames.iter_mut() {
            let mut m = Mat::zeros(f.nrows() + 2, f.ncols() + 2);
            m.view_mut((0, 0), (f.nrows(), f.ncols())).copy_from(f);
            m.view_mut((f.nrows(), f.ncols()), (2, 2))
                .copy_from(&trivial);
            *f = m;
        }
        assert_eq!(corner_index_2d(&s).unwrap(), before);
    }

    #[test]
    fn constant_bundle_has_zero_index() {
        let (s, _) = split_of(
            &SyntheticCorner2d { winding: 0 },
            build_circle_grid(16).unwrap(),
            build_circle_grid(16).unwrap(),
        );
        assert_eq!(corner_index_2d(&s).unwrap(), 0);
    }

    #[test]
    fn reversed_base_negates_2d() {
        let fwd = split_of(
            &SyntheticCorner2d { winding: 1 },
            build_circle_grid(32).unwrap(),
            build_circle_grid(32).unwrap(),
        )
        .0;
        let rev = split_of(
            &SyntheticCorner2d { winding: 1 },
            build_circle_grid(32).unwrap().reversed(),
            build_circle_grid(32).unwrap(),
        )
        .0;
        assert_eq!(
            corner_index_2d(&rev).unwrap(),
            -corner_index_2d(&fwd).unwrap()
        );
    }

    #[test]
    fn dimension_errors() {
        let s = kink_split(&Kink1d::kink());
        assert!(matches!(corner_index_2d(&s), Err(Error::Dimension(_))));
        let (t, _) = split_of(
            &SyntheticCorner2d { winding: 1 },
            build_circle_grid(8).unwrap(),
            build_circle_grid(8).unwrap(),
        );
        assert!(matches!(corner_index_0d(&t), Err(Error::Dimension(_))));
    }

    #[test]
    fn hedgehog_product_formula() {
        for (k, expected) in [(1, 1), (-1, -1), (2, 2)] {
            let model = Hedgehog {
                charge: k,
                lambda: 1.0,
            };
            let (s, grid) = split_of(
                &model,
                build_sphere_grid(8).unwrap(),
                build_sphere_grid(8).unwrap(),
            );
            let idx = corner_index_product(&s, &grid.base, &grid.fiber, Block::PlusPlus).unwrap();
            assert_eq!(idx, expected, "charge {k}");
            for blk in Block::ALL {
                let v = corner_index_product(&s, &grid.base, &grid.fiber, blk).unwrap();
                assert_eq!(v, blk.relation_sign() * idx, "charge {k}, {}", blk.label());
            }
        }
    }

    #[test]
    fn scalar_potential_product_has_rank_two_blocks() {
        // Φ = λ·Id: V⁺₊ = L₊ ⊗ ℂ² with L₊ the positive spin line over the
        // fiber and a trivial factor over the base. The fiber slice carries
        // 2·c₁(L₊) = ±2 and the base slice nothing.
        let (s, grid) = split_of(
            &Hedgehog {
                charge: 0,
                lambda: 1.0,
            },
            build_sphere_grid(6).unwrap(),
            build_sphere_grid(6).unwrap(),
        );
        let (cf, cb) = slice_chern_numbers(&s, &grid.base, &grid.fiber, Block::PlusPlus).unwrap();
        assert_eq!(cf.integer.abs(), 2);
        assert_eq!(cb.integer, 0);
        // Φ has no negative eigenvalues, so V⁻₋ and V⁺₋ are the zero bundle.
        assert_eq!(s.block_frames(Block::MinusMinus)[0].ncols(), 0);
        for blk in Block::ALL {
            assert_eq!(
                corner_index_product(&s, &grid.base, &grid.fiber, blk).unwrap(),
                0
            );
        }
    }
}
