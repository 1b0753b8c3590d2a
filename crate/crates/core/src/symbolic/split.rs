use std::sync::Arc;

use serde::Serialize;

use super::field::{CalliasSymbolData, HermitianField};
use crate::error::{Error, Result};
use crate::geometry::ManifoldGrid;
use crate::linalg::{c, eigh, select_columns, spectral_norm, unitarize, Mat};

/// Tie-breaking weight in the simultaneous diagonalization `A + εB`.
pub const TIE_BREAK_EPS: f64 = 1e-3;

/// A joint eigenbundle, labelled by the signs of `(A, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Block {
    PlusPlus,
    MinusMinus,
    PlusMinus,
    MinusPlus,
}

impl Block {
    pub const ALL: [Block; 4] = [
        Block::PlusPlus,
        Block::MinusMinus,
        Block::PlusMinus,
        Block::MinusPlus,
    ];

    pub fn signs(self) -> (f64, f64) {
        match self {
            Block::PlusPlus => (1.0, 1.0),
            Block::MinusMinus => (-1.0, -1.0),
            Block::PlusMinus => (1.0, -1.0),
            Block::MinusPlus => (-1.0, 1.0),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// `+1` where the block's class agrees with `V⁺₊`, `−1` where it is
    /// its negative.
    pub fn relation_sign(self) -> i64 {
        match self {
            Block::PlusPlus | Block::MinusMinus => 1,
            Block::PlusMinus | Block::MinusPlus => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Block::PlusPlus => "V++",
            Block::MinusMinus => "V--",
            Block::PlusMinus => "V+-",
            Block::MinusPlus => "V-+",
        }
    }

    fn from_signs(a: f64, b: f64) -> Block {
        match (a > 0.0, b > 0.0) {
            (true, true) => Block::PlusPlus,
            (false, false) => Block::MinusMinus,
            (true, false) => Block::PlusMinus,
            (false, true) => Block::MinusPlus,
        }
    }
}

/// Orthonormal frames for `V⁺₊ ⊕ V⁻₋ ⊕ V⁺₋ ⊕ V⁻₊` at every corner point.
#[derive(Clone, Debug)]
pub struct JointSplitting {
    pub grid: Arc<ManifoldGrid>,
    pub rank: usize,
    /// `frames[block][point]` is `n × r` with `r` the block rank there.
    pub frames: [Vec<Mat>; 4],
}

impl JointSplitting {
    pub fn block_frames(&self, block: Block) -> &[Mat] {
        &self.frames[block.index()]
    }

    /// `(r⁺₊, r⁻₋, r⁺₋, r⁻₊)` at a point.
    pub fn ranks_at(&self, p: usize) -> [usize; 4] {
        [0, 1, 2, 3].map(|k| self.frames[k][p].ncols())
    }

    /// Rank profile at the first point of each connected component.
    pub fn rank_profile(&self) -> Vec<[usize; 4]> {
        let labels = self.grid.components();
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for (p, &l) in labels.iter().enumerate() {
            if !seen.contains(&l) {
                seen.push(l);
                out.push(self.ranks_at(p));
            }
        }
        out
    }
}

/// Frames of the four joint eigenspaces of one commuting pair of
/// Hermitian involutions, indexed by [`Block::index`].
pub fn joint_frames(a: &Mat, b: &Mat, tol: f64) -> Result<[Mat; 4]> {
    let n = a.nrows();
    let comm = spectral_norm(&(a * b - b * a));
    if comm > tol {
        return Err(Error::Compatibility(format!(
            "‖[A, B]‖ = {comm:.3e} exceeds {tol:.1e}"
        )));
    }
    for (name, m) in [("A", a), ("B", b)] {
        let (vals, _) = eigh(m);
        if let Some(v) = vals.iter().find(|v| (v.abs() - 1.0).abs() > 1e-8) {
            return Err(Error::Degeneracy(format!(
                "{name} has eigenvalue {v:.6} away from ±1"
            )));
        }
    }
    let (_, v) = eigh(&(a + b * c(TIE_BREAK_EPS, 0.0)));
    let labels: Vec<Block> = (0..n)
        .map(|j| {
            let col = v.column(j);
            let ra = (col.adjoint() * a * col)[(0, 0)].re;
            let rb = (col.adjoint() * b * col)[(0, 0)].re;
            Block::from_signs(ra, rb)
        })
        .collect();
    Ok(Block::ALL.map(|blk| select_columns(&v, |j| labels[j] == blk)))
}

/// Splits a corner into the joint eigenbundles of unitarized `A` and `B`.
/// Ranks must be constant on each connected component of `grid`.
pub fn joint_split(
    grid: Arc<ManifoldGrid>,
    a: &HermitianField,
    b: &HermitianField,
    tol: f64,
) -> Result<JointSplitting> {
    if a.len() != grid.len() || b.len() != grid.len() || a.rank != b.rank {
        return Err(Error::Structural(format!(
            "fields of length {}/{} on a grid of {} points",
            a.len(),
            b.len(),
            grid.len()
        )));
    }
    let mut frames: [Vec<Mat>; 4] = Default::default();
    for (am, bm) in a.samples.iter().zip(&b.samples) {
        let f = joint_frames(am, bm, tol)?;
        for (k, m) in f.into_iter().enumerate() {
            frames[k].push(m);
        }
    }
    let split = JointSplitting {
        grid,
        rank: a.rank,
        frames,
    };
    for &[p, q] in &split.grid.edges {
        if split.ranks_at(p) != split.ranks_at(q) {
            return Err(Error::Discontinuity { a: p, b: q });
        }
    }
    Ok(split)
}

/// Unitarized `A = U(σ(D))` and `B = U(Φ)` over the corner points
/// `b · |fiber| + f`.
pub fn corner_fields(data: &CalliasSymbolData) -> Result<(HermitianField, HermitianField)> {
    let g = &data.grid;
    let last = g.n_radial() - 1;
    let tol = 1e-10;
    let b_unit: Vec<Mat> = data
        .potential
        .samples
        .iter()
        .map(|p| unitarize(p, tol))
        .collect::<Result<_>>()?;
    let mut a = Vec::with_capacity(g.n_corner());
    let mut b = Vec::with_capacity(g.n_corner());
    for bi in 0..g.n_base() {
        for f in 0..g.n_fiber() {
            a.push(unitarize(
                &data.interior_symbol.samples[data.face_index(last, bi, f)],
                tol,
            )?);
            b.push(b_unit[bi].clone());
        }
    }
    Ok((
        HermitianField::new(data.rank(), a)?,
        HermitianField::new(data.rank(), b)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        build_interval_boundary, build_sphere_grid, product_grid, GridKind, GridPoint,
    };
    use crate::linalg::{
        from_spectrum, identity, kron, orthonormality_defect, pauli_dot, random_unitary, ONE,
    };
    use nalgebra::DVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn points(n: usize) -> Arc<ManifoldGrid> {
        Arc::new(ManifoldGrid {
            dim: 0,
            kind: GridKind::Interval,
            points: (0..n)
                .map(|_| GridPoint {
                    coords: vec![0.0],
                    weight: 1.0,
                    sign: 1,
                })
                .collect(),
            edges: vec![],
            plaquettes: vec![],
            orientation: 1,
            chart_offset: 0,
        })
    }

    fn check_invariants(s: &JointSplitting, a: &HermitianField, b: &HermitianField) {
        for p in 0..s.grid.len() {
            let all: Vec<Mat> = Block::ALL
                .iter()
                .map(|&blk| s.frames[blk.index()][p].clone())
                .collect();
            let cols: usize = all.iter().map(|m| m.ncols()).sum();
            assert_eq!(cols, s.rank);
            let mut stacked = Mat::zeros(s.rank, s.rank);
            let mut k = 0;
            for (blk, f) in Block::ALL.iter().zip(&all) {
                let (sa, sb) = blk.signs();
                assert!((&a.samples[p] * f - f * c(sa, 0.0)).norm() < 1e-10);
                assert!((&b.samples[p] * f - f * c(sb, 0.0)).norm() < 1e-10);
                // Projecting A and B onto the frame gives ±1 blocks.
                assert!(
                    (f.adjoint() * &a.samples[p] * f - identity(f.ncols()) * c(sa, 0.0)).norm()
                        < 1e-10
                );
                for j in 0..f.ncols() {
                    stacked.set_column(k, &f.column(j));
                    k += 1;
                }
            }
            assert!(orthonormality_defect(&stacked) < 1e-10);
        }
    }

    #[test]
    fn diagonal_example() {
        let a = HermitianField::new(
            2,
            vec![Mat::from_diagonal(&DVector::from_vec(vec![ONE, -ONE]))],
        )
        .unwrap();
        let b = HermitianField::new(2, vec![identity(2)]).unwrap();
        let s = joint_split(points(1), &a, &b, 1e-10).unwrap();
        assert_eq!(s.ranks_at(0), [1, 0, 0, 1]);
        check_invariants(&s, &a, &b);
    }

    #[test]
    fn tensor_product_example() {
        let base = build_sphere_grid(4).unwrap();
        let fiber = build_sphere_grid(4).unwrap();
        let grid = Arc::new(product_grid(&base, &fiber));
        let (mut av, mut bv) = (vec![], vec![]);
        for pb in &base.points {
            for pf in &fiber.points {
                let d = |p: &GridPoint| [p.coords[0], p.coords[1], p.coords[2]];
                av.push(kron(&pauli_dot(d(pf)), &identity(2)));
                bv.push(kron(&identity(2), &pauli_dot(d(pb))));
            }
        }
        let a = HermitianField::new(4, av).unwrap();
        let b = HermitianField::new(4, bv).unwrap();
        let s = joint_split(grid, &a, &b, 1e-10).unwrap();
        assert_eq!(s.rank_profile(), vec![[1, 1, 1, 1]]);
        check_invariants(&s, &a, &b);
    }

    #[test]
    fn random_shared_frame_example() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = random_unitary(4, &mut rng);
        let a = HermitianField::new(4, vec![from_spectrum(&q, &[1.0, 1.0, -1.0, -1.0])]).unwrap();
        let b = HermitianField::new(4, vec![from_spectrum(&q, &[1.0, -1.0, 1.0, -1.0])]).unwrap();
        let s = joint_split(points(1), &a, &b, 1e-10).unwrap();
        assert_eq!(s.ranks_at(0), [1, 1, 1, 1]);
        check_invariants(&s, &a, &b);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]
        #[test]
        fn random_commuting_involutions_split_cleanly(
            signs in proptest::collection::vec((proptest::bool::ANY, proptest::bool::ANY), 2..=8),
            seed in 0u64..1_000_000,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = random_unitary(signs.len(), &mut rng);
            let pm = |s: bool| if s { 1.0 } else { -1.0 };
            let sa: Vec<f64> = signs.iter().map(|&(x, _)| pm(x)).collect();
            let sb: Vec<f64> = signs.iter().map(|&(_, y)| pm(y)).collect();
            let a = HermitianField::new(signs.len(), vec![from_spectrum(&q, &sa)]).unwrap();
            let b = HermitianField::new(signs.len(), vec![from_spectrum(&q, &sb)]).unwrap();
            let s = joint_split(points(1), &a, &b, 1e-10).unwrap();
            let mut expected = [0; 4];
            for blk in Block::ALL {
                let (x, y) = blk.signs();
                expected[blk.index()] = sa.iter().zip(&sb).filter(|&(&p, &q)| p == x && q == y).count();
            }
            proptest::prop_assert_eq!(s.ranks_at(0), expected);
            check_invariants(&s, &a, &b);
        }
    }

    #[test]
    fn errors() {
        let sz = HermitianField::new(2, vec![pauli_dot([0.0, 0.0, 1.0])]).unwrap();
        let sx = HermitianField::new(2, vec![pauli_dot([1.0, 0.0, 0.0])]).unwrap();
        assert!(matches!(
            joint_split(points(1), &sz, &sx, 1e-8),
            Err(Error::Compatibility(_))
        ));
        let half = HermitianField::new(2, vec![identity(2) * c(0.5, 0.0)]).unwrap();
        assert!(matches!(
            joint_split(points(1), &half, &sz, 1e-8),
            Err(Error::Degeneracy(_))
        ));
        // Rank jump across an edge of S⁰ × S⁰ fibers joined artificially.
        let mut g = product_grid(&build_interval_boundary(), &build_interval_boundary());
        g.edges.push([0, 1]);
        let a = HermitianField::new(
            2,
            vec![sz.samples[0].clone(), identity(2), identity(2), identity(2)],
        )
        .unwrap();
        let b = HermitianField::new(2, vec![identity(2); 4]).unwrap();
        assert!(matches!(
            joint_split(Arc::new(g), &a, &b, 1e-8),
            Err(Error::Discontinuity { a: 0, b: 1 })
        ));
    }
}
