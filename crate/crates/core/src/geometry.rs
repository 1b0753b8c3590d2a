//! Boundary manifolds, fiber spheres and corner grids.
//!
//! Grids are immutable after construction. Downstream fields are sampled on
//! grid points by index, so point order is part of the contract.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint {
    /// Coordinates in the embedding chart. Circles and spheres sit in ℝ² and
    /// ℝ³; product grids concatenate base and fiber coordinates.
    pub coords: Vec<f64>,
    pub weight: f64,
    /// Orientation sign for dim-0 grids, `+1` otherwise.
    pub sign: i8,
}

/// A quadrilateral cell given by a vertex cycle; the cycle order carries the
/// orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Plaquette {
    pub vertices: [usize; 4],
    pub area: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridKind {
    Interval,
    Circle,
    Sphere,
    /// Circle × circle, chart `(cos θ, sin θ, cos ω, sin ω)`.
    Torus,
    /// Sphere × S⁰ (or S⁰ × sphere): disjoint copies of the sphere.
    SphereCopies,
    Product,
}

#[derive(Clone, Debug)]
pub struct ManifoldGrid {
    pub dim: usize,
    pub kind: GridKind,
    pub points: Vec<GridPoint>,
    /// Directed edges; for dim-1 grids their direction is the orientation.
    pub edges: Vec<[usize; 2]>,
    pub plaquettes: Vec<Plaquette>,
    /// `+1` as built, `−1` after [`ManifoldGrid::reversed`].
    pub orientation: i8,
    /// Offset of the 2D chart inside product coordinates.
    pub chart_offset: usize,
}

impl ManifoldGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.weight).sum()
    }

    /// Integrates a pointwise function against the quadrature weights.
    pub fn integrate(&self, f: impl Fn(&GridPoint) -> f64) -> f64 {
        self.points.iter().map(|p| p.weight * f(p)).sum()
    }

    /// Same grid with the opposite orientation: dim-0 signs flip, edges and
    /// plaquette cycles are traversed backwards.
    pub fn reversed(&self) -> ManifoldGrid {
        let mut g = self.clone();
        g.orientation = -g.orientation;
        if g.dim == 0 {
            for p in &mut g.points {
                p.sign = -p.sign;
            }
        }
        for e in &mut g.edges {
            e.swap(0, 1);
        }
        for q in &mut g.plaquettes {
            let [a, b, c, d] = q.vertices;
            q.vertices = [a, d, c, b];
        }
        g
    }

    /// Signed area of a plaquette recomputed from coordinates: positive when
    /// the vertex cycle runs counterclockwise seen from outside the sphere,
    /// or counterclockwise in the (base angle, fiber angle) chart of a torus.
    pub fn geometric_signed_area(&self, idx: usize) -> f64 {
        let q = &self.plaquettes[idx];
        let p = |k: usize| &self.points[q.vertices[k]].coords;
        match self.kind {
            GridKind::Sphere | GridKind::SphereCopies => {
                // The sphere chart is the 3-block of the coordinates.
                let off = self.chart_offset;
                let v = |k: usize| [p(k)[off], p(k)[off + 1], p(k)[off + 2]];
                spherical_triangle_signed_area(v(0), v(1), v(2))
                    + spherical_triangle_signed_area(v(0), v(2), v(3))
            }
            GridKind::Torus => {
                // Torus chart: (cos θ, sin θ, cos ω, sin ω).
                let ang = |k: usize| (p(k)[1].atan2(p(k)[0]), p(k)[3].atan2(p(k)[2]));
                let (t0, w0) = ang(0);
                let mut pts = [(0.0, 0.0); 4];
                for (k, slot) in pts.iter_mut().enumerate() {
                    let (t, w) = ang(k);
                    *slot = (wrap(t - t0), wrap(w - w0));
                }
                let mut s = 0.0;
                for k in 0..4 {
                    let (x1, y1) = pts[k];
                    let (x2, y2) = pts[(k + 1) % 4];
                    s += x1 * y2 - x2 * y1;
                }
                0.5 * s
            }
            _ => 0.0,
        }
    }

    /// Connected component label per point (dim-0 points are isolated).
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &[a, b] in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut labels = HashMap::new();
        (0..n)
            .map(|i| {
                let r = find(&mut parent, i);
                let next = labels.len();
                *labels.entry(r).or_insert(next)
            })
            .collect()
    }
}

fn wrap(a: f64) -> f64 {
    let mut x = a % (2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    } else if x <= -PI {
        x += 2.0 * PI;
    }
    x
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Signed area of the geodesic triangle on the unit sphere
/// (Van Oosterom–Strackee): positive for a counterclockwise cycle seen from
/// outside.
pub fn spherical_triangle_signed_area(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let num = dot(a, cross(b, c));
    let den = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
    2.0 * num.atan2(den)
}

/// `∂X = S⁰ = {−1, +1}` for the radially compactified line.
pub fn build_interval_boundary() -> ManifoldGrid {
    let pt = |x: f64, s: i8| GridPoint {
        coords: vec![x],
        weight: 1.0,
        sign: s,
    };
    ManifoldGrid {
        dim: 0,
        kind: GridKind::Interval,
        points: vec![pt(-1.0, -1), pt(1.0, 1)],
        edges: Vec::new(),
        plaquettes: Vec::new(),
        orientation: 1,
        chart_offset: 0,
    }
}

/// `n` equispaced points on the unit circle, counterclockwise.
pub fn build_circle_grid(n: usize) -> Result<ManifoldGrid> {
    if n < 3 {
        return Err(Error::DegenerateGrid(format!(
            "circle needs n >= 3, got {n}"
        )));
    }
    let w = 2.0 * PI / n as f64;
    let points = (0..n)
        .map(|i| {
            let t = w * i as f64;
            GridPoint {
                coords: vec![t.cos(), t.sin()],
                weight: w,
                sign: 1,
            }
        })
        .collect();
    let edges = (0..n).map(|i| [i, (i + 1) % n]).collect();
    Ok(ManifoldGrid {
        dim: 1,
        kind: GridKind::Circle,
        points,
        edges,
        plaquettes: Vec::new(),
        orientation: 1,
        chart_offset: 0,
    })
}

/// Equiangular cubed sphere with `n` points per face edge. Vertices on face
/// seams are shared, so the mesh is closed: `6(n−1)²` plaquettes and
/// `6(n−1)² + 2` points. Each vertex carries a quarter of the exact
/// spherical area of every adjacent cell.
pub fn build_sphere_grid(n: usize) -> Result<ManifoldGrid> {
    if n < 4 {
        return Err(Error::DegenerateGrid(format!(
            "sphere needs n >= 4, got {n}"
        )));
    }
    let m = (n - 1) as i64;
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut coords: Vec<[f64; 3]> = Vec::new();
    let mut vertex = |ijk: [i64; 3]| -> usize {
        *index.entry(ijk).or_insert_with(|| {
            let t = |i: i64| (FRAC_PI_4 * (2.0 * i as f64 / m as f64 - 1.0)).tan();
            let v = [t(ijk[0]), t(ijk[1]), t(ijk[2])];
            let r = dot(v, v).sqrt();
            coords.push([v[0] / r, v[1] / r, v[2] / r]);
            coords.len() - 1
        })
    };
    let mut cells: Vec<[usize; 4]> = Vec::new();
    for axis in 0..3 {
        for side in [0, m] {
            let (u_ax, v_ax) = ((axis + 1) % 3, (axis + 2) % 3);
            for u in 0..m {
                for v in 0..m {
                    let at = |du: i64, dv: i64| {
                        let mut ijk = [0i64; 3];
                        ijk[axis] = side;
                        ijk[u_ax] = u + du;
                        ijk[v_ax] = v + dv;
                        ijk
                    };
                    let mut q = [
                        vertex(at(0, 0)),
                        vertex(at(1, 0)),
                        vertex(at(1, 1)),
                        vertex(at(0, 1)),
                    ];
                    // (u_ax, v_ax, axis) is a right-handed cycle, so the loop
                    // is outward on the +side face and inward on the −side.
                    if side == 0 {
                        q = [q[0], q[3], q[2], q[1]];
                    }
                    cells.push(q);
                }
            }
        }
    }
    let mut weights = vec![0.0; coords.len()];
    let plaquettes: Vec<Plaquette> = cells
        .into_iter()
        .map(|q| {
            let v = |k: usize| coords[q[k]];
            let area = spherical_triangle_signed_area(v(0), v(1), v(2))
                + spherical_triangle_signed_area(v(0), v(2), v(3));
            for &k in &q {
                weights[k] += 0.25 * area;
            }
            Plaquette { vertices: q, area }
        })
        .collect();
    let edges = edges_from_plaquettes(&plaquettes);
    let points = coords
        .into_iter()
        .zip(weights)
        .map(|(c, w)| GridPoint {
            coords: c.to_vec(),
            weight: w,
            sign: 1,
        })
        .collect();
    Ok(ManifoldGrid {
        dim: 2,
        kind: GridKind::Sphere,
        points,
        edges,
        plaquettes,
        orientation: 1,
        chart_offset: 0,
    })
}

fn edges_from_plaquettes(plaquettes: &[Plaquette]) -> Vec<[usize; 2]> {
    let mut seen = HashMap::new();
    let mut edges = Vec::new();
    for q in plaquettes {
        for k in 0..4 {
            let (a, b) = (q.vertices[k], q.vertices[(k + 1) % 4]);
            if seen.insert((a.min(b), a.max(b)), ()).is_none() {
                edges.push([a, b]);
            }
        }
    }
    edges
}

/// The corner `∂X × fiber sphere` together with the radial samples of the
/// compactified fiber, `s = |ξ|/(1+|ξ|)`.
#[derive(Clone, Debug)]
pub struct CornerGrid {
    pub base: Arc<ManifoldGrid>,
    pub fiber: Arc<ManifoldGrid>,
    /// Product point `b · |fiber| + f` pairs base point `b` with fiber point `f`.
    pub product: Arc<ManifoldGrid>,
    /// Uniform on `[0, 1]`, both ends included exactly.
    pub s_grid: Vec<f64>,
}

impl CornerGrid {
    pub fn point(&self, b: usize, f: usize) -> usize {
        b * self.fiber.len() + f
    }

    pub fn split(&self, p: usize) -> (usize, usize) {
        (p / self.fiber.len(), p % self.fiber.len())
    }
}

/// Uniform radial grid on `[0, 1]` with exact endpoints.
pub fn uniform_unit_grid(n: usize) -> Vec<f64> {
    let last = n - 1;
    (0..n)
        .map(|k| {
            if k == last {
                1.0
            } else {
                k as f64 / last as f64
            }
        })
        .collect()
}

pub fn build_corner_grid(
    base: &ManifoldGrid,
    fiber: &ManifoldGrid,
    n_radial: usize,
) -> Result<CornerGrid> {
    if base.dim + fiber.dim > 2 {
        return Err(Error::Dimension(format!(
            "corner of dimension {} (base {} + fiber {}) exceeds 2",
            base.dim + fiber.dim,
            base.dim,
            fiber.dim
        )));
    }
    if n_radial < 2 {
        return Err(Error::DegenerateGrid(format!(
            "n_radial must be >= 2, got {n_radial}"
        )));
    }
    let product = product_grid(base, fiber);
    Ok(CornerGrid {
        base: Arc::new(base.clone()),
        fiber: Arc::new(fiber.clone()),
        product: Arc::new(product),
        s_grid: uniform_unit_grid(n_radial),
    })
}

/// Cartesian product with point `b · |fiber| + f`. Plaquettes are produced
/// when the product is 2-dimensional; higher products carry edges only.
pub fn product_grid(base: &ManifoldGrid, fiber: &ManifoldGrid) -> ManifoldGrid {
    let nf = fiber.len();
    let id = |b: usize, f: usize| b * nf + f;
    let points = base
        .points
        .iter()
        .flat_map(|pb| {
            fiber.points.iter().map(move |pf| GridPoint {
                coords: pb.coords.iter().chain(pf.coords.iter()).copied().collect(),
                weight: pb.weight * pf.weight,
                sign: pb.sign * pf.sign,
            })
        })
        .collect();
    let mut edges = Vec::new();
    for &[a, b] in &base.edges {
        for f in 0..nf {
            edges.push([id(a, f), id(b, f)]);
        }
    }
    for b in 0..base.len() {
        for &[f, g] in &fiber.edges {
            edges.push([id(b, f), id(b, g)]);
        }
    }
    let mut plaquettes = Vec::new();
    if base.dim == 1 && fiber.dim == 1 {
        for &[b0, b1] in &base.edges {
            let wb = 0.5 * (base.points[b0].weight + base.points[b1].weight);
            for &[f0, f1] in &fiber.edges {
                let wf = 0.5 * (fiber.points[f0].weight + fiber.points[f1].weight);
                plaquettes.push(Plaquette {
                    vertices: [id(b0, f0), id(b1, f0), id(b1, f1), id(b0, f1)],
                    area: wb * wf,
                });
            }
        }
    } else if base.dim + fiber.dim == 2 && (base.dim == 2 || fiber.dim == 2) {
        let (two, zero, base_is_two) = if base.dim == 2 {
            (base, fiber, true)
        } else {
            (fiber, base, false)
        };
        for z in 0..zero.len() {
            for q in &two.plaquettes {
                let vertices = q
                    .vertices
                    .map(|v| if base_is_two { id(v, z) } else { id(z, v) });
                plaquettes.push(Plaquette {
                    vertices,
                    area: q.area * zero.points[z].weight,
                });
            }
        }
    }
    let (kind, chart_offset) = match (base.kind, fiber.kind) {
        (GridKind::Circle, GridKind::Circle) => (GridKind::Torus, 0),
        (GridKind::Sphere, _) => (GridKind::SphereCopies, 0),
        (_, GridKind::Sphere) => (GridKind::SphereCopies, base.points[0].coords.len()),
        _ => (GridKind::Product, 0),
    };
    ManifoldGrid {
        dim: base.dim + fiber.dim,
        kind,
        chart_offset,
        points,
        edges,
        plaquettes,
        orientation: base.orientation * fiber.orientation,
    }
}

/// Unit directions of a grid's points, padded to ℝ³ (S⁰ ↦ ±e₁, S¹ ↦ plane).
pub fn direction3(p: &GridPoint) -> [f64; 3] {
    let mut v = [0.0; 3];
    for (k, x) in p.coords.iter().take(3).enumerate() {
        v[k] = *x;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_boundary() {
        let g = build_interval_boundary();
        assert_eq!(g.dim, 0);
        assert_eq!(g.len(), 2);
        assert_eq!(
            g.points.iter().map(|p| p.sign).collect::<Vec<_>>(),
            vec![-1, 1]
        );
        assert_eq!(g.total_weight(), 2.0);
    }

    #[test]
    fn circle_weights() {
        let g = build_circle_grid(4).unwrap();
        assert!(g.points.iter().all(|p| p.weight == PI / 2.0));
        let g = build_circle_grid(64).unwrap();
        assert!((g.total_weight() - 2.0 * PI).abs() < 1e-12);
        assert!(matches!(
            build_circle_grid(2),
            Err(Error::DegenerateGrid(_))
        ));
    }

    #[test]
    fn sphere_counts_and_area() {
        let g = build_sphere_grid(16).unwrap();
        assert_eq!(g.plaquettes.len(), 6 * 15 * 15);
        assert_eq!(g.len(), 6 * 15 * 15 + 2);
        assert!((g.total_weight() - 4.0 * PI).abs() < 1e-3);
        assert!(matches!(
            build_sphere_grid(3),
            Err(Error::DegenerateGrid(_))
        ));
    }

    #[test]
    fn sphere_orientation_consistent() {
        let g = build_sphere_grid(24).unwrap();
        let signed: f64 = (0..g.plaquettes.len())
            .map(|i| g.geometric_signed_area(i))
            .sum();
        let total: f64 = g.plaquettes.iter().map(|q| q.area).sum();
        assert!((signed - total).abs() < 1e-10, "{signed} vs {total}");
        assert!((total - 4.0 * PI).abs() < 1e-10);
        assert!(g
            .plaquettes
            .iter()
            .enumerate()
            .all(|(i, _)| g.geometric_signed_area(i) > 0.0));
        let r = g.reversed();
        let signed_r: f64 = (0..r.plaquettes.len())
            .map(|i| r.geometric_signed_area(i))
            .sum();
        assert!((signed_r + total).abs() < 1e-10);
    }

    #[test]
    fn sphere_quadrature_converges() {
        // The constant is exact by construction and ∫z² is exact by cube
        // symmetry, so the lumping error is probed with ∫z⁴ dA = 4π/5.
        let errs: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&n| {
                let g = build_sphere_grid(n).unwrap();
                assert!((g.total_weight() - 4.0 * PI).abs() < 1e-12);
                (g.integrate(|p| p.coords[2].powi(4)) - 4.0 * PI / 5.0).abs()
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
        assert!(errs[2] < 1e-2);
    }

    fn assert_closed(g: &ManifoldGrid) {
        let mut uses: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for q in &g.plaquettes {
            for k in 0..4 {
                let (a, b) = (q.vertices[k], q.vertices[(k + 1) % 4]);
                uses.entry((a.min(b), a.max(b))).or_default().push((a, b));
            }
        }
        for (e, dirs) in uses {
            assert_eq!(dirs.len(), 2, "edge {e:?}");
            assert_eq!(
                dirs[0],
                (dirs[1].1, dirs[1].0),
                "edge {e:?} not oppositely oriented"
            );
        }
    }

    #[test]
    fn plaquette_closure() {
        assert_closed(&build_sphere_grid(6).unwrap());
        let c = build_circle_grid(8).unwrap();
        assert_closed(&build_corner_grid(&c, &c, 4).unwrap().product);
    }

    #[test]
    fn corner_grids() {
        let s0 = build_interval_boundary();
        let cg = build_corner_grid(&s0, &s0, 8).unwrap();
        assert_eq!(cg.product.len(), 4);
        assert_eq!(cg.s_grid.first(), Some(&0.0));
        assert_eq!(cg.s_grid.last(), Some(&1.0));
        let c = build_circle_grid(64).unwrap();
        let t = build_corner_grid(&c, &c, 8).unwrap();
        assert_eq!(t.product.len(), 64 * 64);
        assert_eq!(t.product.plaquettes.len(), 64 * 64);
        let torus_area: f64 = (0..t.product.plaquettes.len())
            .map(|i| t.product.geometric_signed_area(i))
            .sum();
        assert!((torus_area - 4.0 * PI * PI).abs() < 1e-9);
        let s2 = build_sphere_grid(16).unwrap();
        let d = build_corner_grid(&s2, &s0, 8).unwrap();
        assert_eq!(d.product.len(), 2 * s2.len());
        assert_eq!(d.product.plaquettes.len(), 2 * s2.plaquettes.len());
        assert!(matches!(
            build_corner_grid(&s2, &c, 8),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            build_corner_grid(&s0, &s0, 1),
            Err(Error::DegenerateGrid(_))
        ));
    }

    #[test]
    fn components() {
        assert_eq!(
            build_sphere_grid(5).unwrap().components().iter().max(),
            Some(&0)
        );
        let s0 = build_interval_boundary();
        let s2 = build_sphere_grid(5).unwrap();
        let d = build_corner_grid(&s2, &s0, 2).unwrap();
        assert_eq!(d.product.components().iter().max(), Some(&1));
        assert_eq!(s0.components(), vec![0, 1]);
    }
}
