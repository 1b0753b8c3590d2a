//! Executable versions of the two reductions of the full symbol: the cutoff
//! homotopy to `χA + i(1−χ)B`, and the five-stage homotopy to a symbol that
//! is the identity up to sign away from a collar of the corner.

use rayon::prelude::*;
use serde::Serialize;

use super::field::{CalliasSymbolData, Face};
use super::split::{joint_frames, Block};
use crate::error::{Error, Result};
use crate::linalg::{c, eigh, identity, min_singular_value, unitarize, Mat, C64, I};

/// A matrix-valued path `t ↦ σ_t(p)` evaluated lazily on a sample grid.
pub trait MatrixPath: Sync {
    fn n_t(&self) -> usize;
    fn n_points(&self) -> usize;
    fn eval(&self, t: usize, p: usize) -> Mat;
}

/// A fully materialized path, `samples[t][p]`.
#[derive(Clone, Debug)]
pub struct SampledPath {
    pub samples: Vec<Vec<Mat>>,
}

impl MatrixPath for SampledPath {
    fn n_t(&self) -> usize {
        self.samples.len()
    }
    fn n_points(&self) -> usize {
        self.samples.first().map_or(0, Vec::len)
    }
    fn eval(&self, t: usize, p: usize) -> Mat {
        self.samples[t][p].clone()
    }
}

/// Global minimum of the smallest singular value over all path samples.
pub fn verify_invertible_path(path: &dyn MatrixPath) -> f64 {
    let (nt, np) = (path.n_t(), path.n_points());
    (0..nt * np)
        .into_par_iter()
        .map(|i| min_singular_value(&path.eval(i / np, i % np)))
        .reduce(|| f64::INFINITY, f64::min)
}

/// Cubic smoothstep, clamped to `[0, 1]`.
pub fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        u * u * (3.0 - 2.0 * u)
    }
}

/// A smooth rise from 0 to 1 across `[lo, hi]` in the collar coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Transition {
    pub lo: f64,
    pub hi: f64,
}

impl Transition {
    pub fn rise(&self, x: f64) -> f64 {
        smoothstep((x - self.lo) / (self.hi - self.lo))
    }
}

/// Margins of the two factors along the boundary face, as functions of the
/// collar coordinate `c = 1 − s` (corner at 0, zero section at 1).
#[derive(Clone, Debug, Serialize)]
pub struct CollarProfile {
    /// `c` per boundary radial index `k`.
    pub collar: Vec<f64>,
    /// `min σ_min(σ_sc(D)⟨ξ⟩^{−m})` over the corner points at each level.
    pub d_margin: Vec<f64>,
    /// `⟨ξ⟩^{−m} · min |eig Φ|` at each level.
    pub phi_margin: Vec<f64>,
    pub interior_margin: f64,
    /// Start of the potential region (`1 − χ > 0` above it).
    pub c_a: f64,
    /// End of the region where `D` dominates (`χ > 0` below it).
    pub c_b: f64,
}

impl CollarProfile {
    /// Regions where each factor's margin is at least half its maximum,
    /// grown from the corner (for `D`) and from the zero section (for `Φ`).
    pub fn from_data(data: &CalliasSymbolData, tol: f64) -> Result<Self> {
        let g = &data.grid;
        let r = g.n_radial();
        let (nb, nf) = (g.n_base(), g.n_fiber());
        let collar: Vec<f64> = g.radial.iter().map(|s| 1.0 - s).collect();
        let d_margin: Vec<f64> = (0..r)
            .map(|k| {
                (0..nb * nf)
                    .into_par_iter()
                    .map(|i| {
                        min_singular_value(
                            &data.boundary_symbol.samples[data.face_index(k, i / nf, i % nf)],
                        )
                    })
                    .reduce(|| f64::INFINITY, f64::min)
            })
            .collect();
        let min_phi = data
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
        if !(min_phi > tol) {
            return Err(Error::Coverage(format!(
                "potential not invertible on the boundary (min |eig Φ| = {min_phi:.3e})"
            )));
        }
        let phi_margin: Vec<f64> = (0..r).map(|k| data.potential_weight(k) * min_phi).collect();
        let interior_margin = data
            .interior_symbol
            .samples
            .par_iter()
            .map(min_singular_value)
            .reduce(|| f64::INFINITY, f64::min);
        if !(interior_margin > tol) {
            return Err(Error::Coverage(format!(
                "interior symbol not elliptic (margin {interior_margin:.3e})"
            )));
        }
        let d_max = d_margin.iter().copied().fold(0.0, f64::max);
        let phi_max = phi_margin.iter().copied().fold(0.0, f64::max);
        // D-region: contiguous run from the corner (k = r−1) towards s = 0.
        let mut c_b = collar[r - 1];
        for k in (0..r).rev() {
            if d_margin[k] >= 0.5 * d_max && d_margin[k] > tol {
                c_b = collar[k];
            } else {
                break;
            }
        }
        let mut c_a = collar[0];
        for k in 0..r {
            if phi_margin[k] >= 0.5 * phi_max && phi_margin[k] > tol {
                c_a = collar[k];
            } else {
                break;
            }
        }
        if c_a >= c_b {
            return Err(Error::Coverage(format!(
                "invertibility regions of D (c <= {c_b:.3}) and Φ (c >= {c_a:.3}) do not overlap"
            )));
        }
        Ok(CollarProfile {
            collar,
            d_margin,
            phi_margin,
            interior_margin,
            c_a,
            c_b,
        })
    }

    /// The cutoff `χ`: one on the interior face and near the corner, zero
    /// near the zero section.
    pub fn chi(&self, c: f64) -> f64 {
        1.0 - Transition {
            lo: self.c_a,
            hi: self.c_b,
        }
        .rise(c)
    }
}

/// Unitarized endpoint data shared by both homotopies.
struct Endpoints<'a> {
    data: &'a CalliasSymbolData,
    chi: Vec<f64>,
    /// `A = U(σ(D))` per sample where `χ > 0`.
    a: Vec<Option<Mat>>,
    /// `B = U(Φ)` per base point.
    b: Vec<Mat>,
}

impl<'a> Endpoints<'a> {
    fn new(data: &'a CalliasSymbolData, profile: &CollarProfile) -> Result<Self> {
        let g = &data.grid;
        let (nb, nf) = (g.n_base(), g.n_fiber());
        let chi: Vec<f64> = (0..g.n_levels())
            .map(|l| profile.chi(g.collar(l)))
            .collect();
        let a = (0..g.n_samples())
            .into_par_iter()
            .map(|i| {
                let (l, b, f) = (i / (nb * nf), (i / nf) % nb, i % nf);
                if chi[l] > 0.0 {
                    unitarize(data.d_symbol(l, b, f), 1e-12).map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let b = data
            .potential
            .samples
            .iter()
            .map(|p| unitarize(p, 1e-12))
            .collect::<Result<_>>()?;
        Ok(Endpoints { data, chi, a, b })
    }

    fn split(&self, p: usize) -> (usize, usize, usize) {
        let (nb, nf) = (self.data.grid.n_base(), self.data.grid.n_fiber());
        (p / (nb * nf), (p / nf) % nb, p % nf)
    }

    /// `χA + i(1−χ)B`; terms with a vanishing coefficient are omitted.
    fn reduced(&self, p: usize) -> Mat {
        let (l, b, _) = self.split(p);
        let chi = self.chi[l];
        let n = self.data.rank();
        let mut out = Mat::zeros(n, n);
        if chi > 0.0 {
            out += self.a[p].as_ref().expect("A exists where chi > 0") * c(chi, 0.0);
        }
        if chi < 1.0 {
            out += &self.b[b] * (I * (1.0 - chi));
        }
        out
    }
}

/// `σ_t = (1−t)·τ_tot(P) + t·(χA + i(1−χ)B)` over every sample of the
/// boundary of the total space.
pub struct ReductionHomotopy<'a> {
    pub profile: CollarProfile,
    n_t: usize,
    ends: Endpoints<'a>,
}

impl ReductionHomotopy<'_> {
    pub fn start(&self, p: usize) -> Mat {
        let (l, b, f) = self.ends.split(p);
        self.ends.data.total_symbol(l, b, f)
    }

    pub fn end(&self, p: usize) -> Mat {
        self.ends.reduced(p)
    }

    pub fn chi_profile(&self) -> &[f64] {
        &self.ends.chi
    }
}

impl MatrixPath for ReductionHomotopy<'_> {
    fn n_t(&self) -> usize {
        self.n_t
    }
    fn n_points(&self) -> usize {
        self.ends.data.grid.n_samples()
    }
    fn eval(&self, t: usize, p: usize) -> Mat {
        if t == 0 {
            return self.start(p);
        }
        if t + 1 == self.n_t {
            return self.end(p);
        }
        let s = t as f64 / (self.n_t - 1) as f64;
        self.start(p) * c(1.0 - s, 0.0) + self.end(p) * c(s, 0.0)
    }
}

pub fn build_reduction_homotopy(
    data: &CalliasSymbolData,
    n_t: usize,
) -> Result<ReductionHomotopy<'_>> {
    if n_t < 2 {
        return Err(Error::DegenerateGrid(format!(
            "path needs n_t >= 2, got {n_t}"
        )));
    }
    let profile = CollarProfile::from_data(data, 1e-10)?;
    let ends = Endpoints::new(data, &profile)?;
    Ok(ReductionHomotopy { profile, n_t, ends })
}

/// Partition of unity `ρ₀..ρ₄` in the collar coordinate, built from four
/// transitions ordered from the zero section towards the corner:
/// `ρ₀ = S₀₁`, `ρᵢ = (1 − S_{i−1,i}) S_{i,i+1}`, `ρ₄ = 1 − S₃₄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Partition {
    pub t01: Transition,
    pub t12: Transition,
    pub t23: Transition,
    pub t34: Transition,
}

impl Partition {
    /// `ρ₀ → ρ₁` in the middle third of `[c_b, 1]`; the other transitions
    /// at `c_b·[5/7, 6/7]`, `c_b·[3/7, 4/7]`, `c_b·[1/7, 2/7]`.
    pub fn standard(profile: &CollarProfile) -> Self {
        let cb = profile.c_b;
        let p = |k: f64| cb * k / 7.0;
        Partition {
            t01: Transition {
                lo: cb + (1.0 - cb) / 3.0,
                hi: cb + 2.0 * (1.0 - cb) / 3.0,
            },
            t12: Transition {
                lo: p(5.0),
                hi: p(6.0),
            },
            t23: Transition {
                lo: p(3.0),
                hi: p(4.0),
            },
            t34: Transition {
                lo: p(1.0),
                hi: p(2.0),
            },
        }
    }

    pub fn rho(&self, c: f64) -> [f64; 5] {
        let (s01, s12, s23, s34) = (
            self.t01.rise(c),
            self.t12.rise(c),
            self.t23.rise(c),
            self.t34.rise(c),
        );
        [
            s01,
            (1.0 - s01) * s12,
            (1.0 - s12) * s23,
            (1.0 - s23) * s34,
            1.0 - s34,
        ]
    }

    /// Support conditions: adjacent-only overlaps, `ρ₀` away from `supp χ`,
    /// `ρ₁..ρ₃` inside the open collar, `ρ₂` where `A` is defined, and
    /// `ρ₁` covering the gap between `supp χ` and `supp ρ₀`.
    pub fn validate(&self, profile: &CollarProfile) -> Result<()> {
        let ts = [
            ("t01", self.t01),
            ("t12", self.t12),
            ("t23", self.t23),
            ("t34", self.t34),
        ];
        for (name, t) in ts {
            if !(t.lo < t.hi) {
                return Err(Error::Partition(format!(
                    "{name} is empty: [{}, {}]",
                    t.lo, t.hi
                )));
            }
        }
        let checks = [
            (self.t34.lo > 0.0, "rho_3 must vanish at the corner"),
            (self.t34.hi <= self.t23.lo, "supp rho_4 meets supp rho_2"),
            (self.t23.hi <= self.t12.lo, "supp rho_3 meets supp rho_1"),
            (self.t12.hi <= self.t01.lo, "supp rho_2 meets supp rho_0"),
            (self.t01.hi < 1.0, "rho_1 must vanish at the zero section"),
            (self.t01.lo >= profile.c_b, "supp rho_0 meets supp chi"),
            (
                self.t12.hi <= profile.c_b,
                "rho_2 extends past the region where D is invertible",
            ),
            (
                self.t12.lo < profile.c_b,
                "rho_1 does not cover the gap between chi and rho_0",
            ),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(Error::Partition(msg.into()));
            }
        }
        Ok(())
    }
}

/// Number of path samples per stage of the five-stage homotopy.
pub const STAGE_SAMPLES: usize = 8;

/// The five-stage homotopy from `χA + i(1−χ)B` to
/// `σ′ = −ρ₀ + ρ₁iB + ρ₂A − ρ₃i − ρ₄`, and its restriction to the collar.
pub struct CornerTrivialization<'a> {
    pub partition: Partition,
    pub profile: CollarProfile,
    ends: Endpoints<'a>,
    rho: Vec<[f64; 5]>,
    per_stage: usize,
}

impl CornerTrivialization<'_> {
    fn terms(&self, p: usize) -> (&[f64; 5], f64, Option<&Mat>, &Mat) {
        let (l, b, _) = self.ends.split(p);
        (
            &self.rho[l],
            self.ends.chi[l],
            self.ends.a[p].as_ref(),
            &self.ends.b[b],
        )
    }

    /// `σ_t` for `t ∈ [0, 5]` at sample `p`.
    pub fn sigma(&self, t: f64, p: usize) -> Mat {
        if t == 0.0 {
            return self.ends.reduced(p);
        }
        let n = self.ends.data.rank();
        let id = identity(n);
        let (r, chi, a, b) = self.terms(p);
        let mut out = Mat::zeros(n, n);
        let mut add = |m: &Mat, z: C64| {
            if z != C64::new(0.0, 0.0) {
                out += m * z;
            }
        };
        let a_or = |coef: f64| -> &Mat {
            if coef != 0.0 {
                a.expect("A exists on the support of its coefficient")
            } else {
                b
            }
        };
        let re = |x: f64| c(x, 0.0);
        if t <= 1.0 {
            add(&id, re(-t * r[0]));
            add(b, I * (1.0 - chi));
            add(a_or(chi), re(chi));
        } else if t <= 2.0 {
            add(&id, re(-r[0]));
            add(b, I * ((2.0 - t) * (1.0 - chi) + (t - 1.0) * r[1]));
            add(a_or(chi), re(chi));
        } else if t <= 3.0 {
            add(&id, re(-r[0]) - I * ((t - 2.0) * (r[3] + r[4])));
            add(b, I * r[1]);
            add(a_or(chi), re(chi));
        } else if t <= 4.0 {
            add(&id, re(-r[0]) - I * (r[3] + r[4]));
            add(b, I * r[1]);
            let coef = (4.0 - t) * chi + (t - 3.0) * r[2];
            add(a_or(coef), re(coef));
        } else {
            add(
                &id,
                re(-r[0]) - I * r[3] - r[4] * (I * (5.0 - t) + re(t - 4.0)),
            );
            add(b, I * r[1]);
            add(a_or(r[2]), re(r[2]));
        }
        out
    }

    /// The endpoint `σ′` at sample `p`.
    pub fn sigma_prime(&self, p: usize) -> Mat {
        self.sigma(5.0, p)
    }

    /// `σ′` along the collar at corner point `(b, f)`, ordered from the
    /// zero section (`ρ₀ = 1`) to the corner (`ρ₄ = 1`).
    pub fn collar_loop(&self, b: usize, f: usize) -> Vec<Mat> {
        let g = &self.ends.data.grid;
        let r = g.n_radial();
        (r..2 * r)
            .rev()
            .map(|l| self.sigma_prime((l * g.n_base() + b) * g.n_fiber() + f))
            .collect()
    }

    /// Scalar loops of `σ′` on the four joint eigenbundles at corner point
    /// `(b, f)`, indexed by [`Block::index`]. Blocks of rank zero give an
    /// empty loop.
    pub fn block_loops(&self, b: usize, f: usize) -> Result<[Vec<C64>; 4]> {
        let g = &self.ends.data.grid;
        let r = g.n_radial();
        let corner_sample = ((r - 1) * g.n_base() + b) * g.n_fiber() + f;
        let a_corner = self.ends.a[corner_sample]
            .as_ref()
            .expect("chi = 1 at the corner");
        let reference = joint_frames(a_corner, &self.ends.b[b], 1e-8)?;
        let mut loops: [Vec<C64>; 4] = Default::default();
        for l in (r..2 * r).rev() {
            let p = (l * g.n_base() + b) * g.n_fiber() + f;
            let sigma = self.sigma_prime(p);
            let frames = match self.ends.a[p].as_ref() {
                Some(a) if self.rho[l][2] > 0.0 => joint_frames(a, &self.ends.b[b], 1e-8)?,
                // σ′ is scalar plus a multiple of B here; any B-eigenframe
                // with the right label projects correctly.
                _ => reference.clone(),
            };
            for blk in Block::ALL {
                let fr = &frames[blk.index()];
                let k = fr.ncols();
                if k > 0 {
                    let tr = (fr.adjoint() * &sigma * fr).trace();
                    loops[blk.index()].push(tr / c(k as f64, 0.0));
                }
            }
        }
        Ok(loops)
    }
}

impl MatrixPath for CornerTrivialization<'_> {
    fn n_t(&self) -> usize {
        5 * self.per_stage + 1
    }
    fn n_points(&self) -> usize {
        self.ends.data.grid.n_samples()
    }
    fn eval(&self, t: usize, p: usize) -> Mat {
        self.sigma(t as f64 / self.per_stage as f64, p)
    }
}

pub fn build_corner_trivialization(
    data: &CalliasSymbolData,
    partition: Option<Partition>,
) -> Result<CornerTrivialization<'_>> {
    let profile = CollarProfile::from_data(data, 1e-10)?;
    let partition = partition.unwrap_or_else(|| Partition::standard(&profile));
    partition.validate(&profile)?;
    let ends = Endpoints::new(data, &profile)?;
    let g = &data.grid;
    let rho: Vec<[f64; 5]> = (0..g.n_levels())
        .map(|l| match g.level(l) {
            (Face::Interior, _) => [0.0, 0.0, 0.0, 0.0, 1.0],
            (Face::Boundary, _) => partition.rho(g.collar(l)),
        })
        .collect();
    Ok(CornerTrivialization {
        partition,
        profile,
        ends,
        rho,
        per_stage: STAGE_SAMPLES,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::geometry::{build_interval_boundary, build_sphere_grid};
    use crate::linalg::{random_complex_gaussian, unitarization_path};
    use crate::symbolic::field::SymbolGrid;
    use crate::symbolic::models::{Hedgehog, Kink1d, RandomCompatible1d};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn line(model: &dyn crate::symbolic::SymbolModel) -> CalliasSymbolData {
        let g =
            SymbolGrid::new(1, build_interval_boundary(), build_interval_boundary(), 33).unwrap();
        CalliasSymbolData::sample(model, Arc::new(g)).unwrap()
    }

    #[test]
    fn path_verifier_examples() {
        let id = SampledPath {
            samples: vec![vec![identity(2)]; 3],
        };
        assert_eq!(verify_invertible_path(&id), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let m = random_complex_gaussian(4, 4, &mut rng);
        let up = unitarization_path(&m, 50, 1e-12).unwrap();
        let path = SampledPath {
            samples: up.into_iter().map(|x| vec![x]).collect(),
        };
        assert!(verify_invertible_path(&path) > 0.0);
        let crossing = SampledPath {
            samples: (0..11)
                .map(|k| vec![identity(1) * c(k as f64 / 10.0 - 0.5, 0.0)])
                .collect(),
        };
        assert!(verify_invertible_path(&crossing) < 1e-15);
    }

    #[test]
    fn smoothstep_partition_sums_to_one() {
        let data = line(&Kink1d::kink());
        let prof = CollarProfile::from_data(&data, 1e-10).unwrap();
        let part = Partition::standard(&prof);
        part.validate(&prof).unwrap();
        for k in 0..=200 {
            let x = k as f64 / 200.0;
            let r = part.rho(x);
            assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            for i in 0..5 {
                for j in i + 2..5 {
                    assert!(r[i] * r[j] == 0.0, "rho_{i} and rho_{j} overlap at {x}");
                }
            }
            if r[0] > 0.0 {
                assert_eq!(prof.chi(x), 0.0);
            }
        }
        assert_eq!(part.rho(0.0)[4], 1.0);
        assert_eq!(part.rho(1.0)[0], 1.0);
    }

    #[test]
    fn kink_collar_layout() {
        // |ξ|/⟨ξ⟩ = s/√((1−s)²+s²) reaches 1/2 at s = (√3−1)/2, and the
        // potential weight (1−s)/√((1−s)²+s²) at s = (3−√3)/2.
        let data = line(&Kink1d::kink());
        let prof = CollarProfile::from_data(&data, 1e-10).unwrap();
        let d_edge = 1.0 - (3f64.sqrt() - 1.0) / 2.0;
        let phi_edge = 1.0 - (3.0 - 3f64.sqrt()) / 2.0;
        assert!(prof.c_b <= d_edge && d_edge - prof.c_b < 1.0 / 32.0);
        assert!(prof.c_a >= phi_edge && prof.c_a - phi_edge < 1.0 / 32.0);
    }

    #[test]
    fn reduction_path_kink() {
        let data = line(&Kink1d::kink());
        let h = build_reduction_homotopy(&data, 16).unwrap();
        assert!(verify_invertible_path(&h) > 0.1);
        for p in 0..h.n_points() {
            assert_eq!(h.eval(0, p), h.start(p));
            assert_eq!(h.eval(15, p), h.end(p));
        }
    }

    #[test]
    fn reduction_path_hedgehog() {
        let g = SymbolGrid::new(
            3,
            build_sphere_grid(4).unwrap(),
            build_sphere_grid(4).unwrap(),
            9,
        )
        .unwrap();
        let data = CalliasSymbolData::sample(
            &Hedgehog {
                charge: 1,
                lambda: 1.0,
            },
            Arc::new(g),
        )
        .unwrap();
        let h = build_reduction_homotopy(&data, 16).unwrap();
        assert!(verify_invertible_path(&h) > 0.1);
    }

    #[test]
    fn coverage_error_for_singular_potential() {
        let data = line(&Kink1d {
            left: 0.0,
            right: 1.0,
        });
        assert!(matches!(
            build_reduction_homotopy(&data, 4),
            Err(Error::Coverage(_))
        ));
    }

    #[test]
    fn corner_path_kink_and_endpoints() {
        let data = line(&Kink1d::kink());
        let h = build_reduction_homotopy(&data, 4).unwrap();
        let ct = build_corner_trivialization(&data, None).unwrap();
        assert!(verify_invertible_path(&ct) > 0.05);
        for p in 0..ct.n_points() {
            assert_eq!(ct.eval(0, p), h.end(p));
        }
    }

    #[test]
    fn kink_block_loop_visits_four_phases() {
        // On the corner point with V⁺₊ ≠ 0 the loop hits −1, i, 1, −i, −1.
        let data = line(&Kink1d::kink());
        let ct = build_corner_trivialization(&data, None).unwrap();
        let mut found = false;
        for b in 0..2 {
            for f in 0..2 {
                let loops = ct.block_loops(b, f).unwrap();
                let lp = &loops[Block::PlusPlus.index()];
                if lp.is_empty() {
                    continue;
                }
                found = true;
                let targets = [c(-1.0, 0.0), I, c(1.0, 0.0), -I, c(-1.0, 0.0)];
                let mut next = 0;
                for z in lp {
                    if next < targets.len() && (z - targets[next]).norm() < 1e-12 {
                        next += 1;
                    }
                }
                assert_eq!(next, 5, "{lp:?}");
            }
        }
        assert!(found);
    }

    #[test]
    fn bad_partition_rejected() {
        let data = line(&Kink1d::kink());
        let prof = CollarProfile::from_data(&data, 1e-10).unwrap();
        let mut part = Partition::standard(&prof);
        part.t12 = Transition {
            lo: part.t23.lo,
            hi: part.t12.hi,
        };
        assert!(matches!(
            build_corner_trivialization(&data, Some(part)),
            Err(Error::Partition(_))
        ));
        let mut part = Partition::standard(&prof);
        part.t01 = Transition {
            lo: prof.c_b * 0.9,
            hi: part.t01.hi,
        };
        assert!(matches!(
            build_corner_trivialization(&data, Some(part)),
            Err(Error::Partition(_))
        ));
    }

    #[test]
    fn random_data_paths_invertible() {
        for seed in 0..5 {
            let data = line(&RandomCompatible1d::new(2 + seed as usize, seed));
            let h = build_reduction_homotopy(&data, 8).unwrap();
            assert!(verify_invertible_path(&h) > 0.0);
            let ct = build_corner_trivialization(&data, None).unwrap();
            assert!(verify_invertible_path(&ct) > 0.0);
        }
    }
}
