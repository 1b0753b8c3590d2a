use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::{MAX_SINGULAR_VALUES, MIN_DECAY_MARGIN, MIN_POINTS_1D, MIN_POINTS_3D};
use crate::error::{Error, Result};
use crate::linalg::{c, Mat};
use crate::symbolic::models::Tabulated1d;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// `P = −i d/dt + iφ(t)` with `φ = orientation · λ · tanh(t / width)`.
    Kink,
    /// `σ·(−i∇) ⊗ 1 + i 1 ⊗ λ tanh(|x| / width) n̂_k·τ` on `ℝ³`.
    Hedgehog,
    /// A positive constant potential `Φ = λ` in one or three dimensions.
    ScalarTrivial,
    /// Rank-4 data over the 2D corner `S¹ × S¹` with lattice winding `k`.
    SyntheticCorner,
    /// Tabulated 1D end data read from a separate TOML file.
    CustomSymbolFile,
}

impl ScenarioKind {
    pub fn has_analytic(self) -> bool {
        matches!(
            self,
            ScenarioKind::Kink | ScenarioKind::Hedgehog | ScenarioKind::ScalarTrivial
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Geometry {
    /// Spatial dimension of a scalar-trivial scenario: 1 or 3.
    pub dimension: usize,
    /// Half-width `L` of the 1D interval or radius `R` of the 3D box.
    pub extent: Option<f64>,
    /// Points per axis of the finite-difference grid.
    pub points: Option<usize>,
    /// Sphere edge points of the grid carrying the Dirac index of a 3D scenario.
    pub boundary_resolution: usize,
    /// Circle points or sphere edge points of the base and fiber grids
    /// carrying the symbol data.
    pub corner_resolution: usize,
    /// Radial samples per face of the compactified cotangent boundary; 0
    /// picks 33 for 1D scenarios and 17 otherwise.
    pub radial_levels: usize,
    /// Samples along the cutoff homotopy.
    pub homotopy_samples: usize,
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            dimension: 1,
            extent: None,
            points: None,
            boundary_resolution: 24,
            corner_resolution: 0,
            radial_levels: 0,
            homotopy_samples: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Potential {
    pub charge: i32,
    pub lambda: f64,
    pub width: f64,
    /// `+1` for the kink, `−1` for the anti-kink.
    pub orientation: i32,
}

impl Default for Potential {
    fn default() -> Self {
        Potential {
            charge: 1,
            lambda: 1.0,
            width: 1.0,
            orientation: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Solver {
    pub analytic: bool,
    pub k: usize,
    pub gap_ratio_min: f64,
    pub abs_tol: Option<f64>,
    pub eig_tol: f64,
    pub ncv: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            analytic: true,
            k: 6,
            gap_ratio_min: 50.0,
            abs_tol: None,
            eig_tol: 1e-10,
            ncv: 40,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Commutator and Hermitian-defect tolerance of the compatibility check.
    pub compatibility: f64,
    /// Eigenvalue tie tolerance of the joint splitting.
    pub split: f64,
    /// Subspace-angle tolerance of the clutching check.
    pub clutching: f64,
    /// Smallest accepted `|eig Φ|` on `∂X`.
    pub potential: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            compatibility: 1e-8,
            split: 1e-8,
            clutching: 1e-8,
            potential: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub kind: ScenarioKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub geometry: Geometry,
    #[serde(default)]
    pub potential: Potential,
    #[serde(default)]
    pub solver: Solver,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Tabulated symbol data of a custom-symbol-file scenario, relative to
    /// the scenario file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_file: Option<PathBuf>,
    #[serde(skip)]
    pub custom_symbol: Option<Tabulated1d>,
}

fn default_seed() -> u64 {
    7
}

impl Scenario {
    fn new(name: &str, kind: ScenarioKind) -> Self {
        Scenario {
            name: name.to_string(),
            kind,
            seed: default_seed(),
            geometry: Geometry::default(),
            potential: Potential::default(),
            solver: Solver::default(),
            tolerances: Tolerances::default(),
            symbol_file: None,
            custom_symbol: None,
        }
    }

    pub fn is_three_dimensional(&self) -> bool {
        match self.kind {
            ScenarioKind::Hedgehog => true,
            ScenarioKind::ScalarTrivial => self.geometry.dimension == 3,
            _ => false,
        }
    }

    pub fn extent(&self) -> f64 {
        self.geometry
            .extent
            .unwrap_or(if self.is_three_dimensional() {
                12.0
            } else {
                20.0
            })
    }

    pub fn points(&self) -> usize {
        self.geometry
            .points
            .unwrap_or(if self.is_three_dimensional() {
                16
            } else {
                2000
            })
    }

    /// Base and fiber resolution of the symbol grids: circle points for a
    /// 2D corner, sphere edge points for a 3D scenario.
    pub fn corner_resolution(&self) -> usize {
        match self.geometry.corner_resolution {
            0 if self.kind == ScenarioKind::SyntheticCorner => 24,
            0 => 4,
            n => n,
        }
    }

    pub fn radial_levels(&self) -> usize {
        match self.geometry.radial_levels {
            0 if self.symbol_dim() == 1 => 33,
            0 => 17,
            n => n,
        }
    }

    /// Ambient dimension of the symbol data.
    pub fn symbol_dim(&self) -> usize {
        match self.kind {
            ScenarioKind::SyntheticCorner => 2,
            _ if self.is_three_dimensional() => 3,
            _ => 1,
        }
    }

    /// Far-field values `φ(−∞), φ(+∞)` of a 1D scenario.
    pub fn far_field(&self) -> (f64, f64) {
        let l = self.potential.lambda;
        match self.kind {
            ScenarioKind::Kink => {
                let o = self.potential.orientation as f64;
                (-o * l, o * l)
            }
            _ => (l, l),
        }
    }

    /// Checks every precondition of the stages this scenario feeds.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Validation(format!("{}: {m}", self.name)));
        let p = &self.potential;
        if !(p.lambda.is_finite() && p.lambda > 0.0) || !(p.width.is_finite() && p.width > 0.0) {
            return fail(format!(
                "need λ > 0 and width > 0, got λ = {}, width = {}",
                p.lambda, p.width
            ));
        }
        if self.radial_levels() < 4 || self.geometry.homotopy_samples < 2 {
            return fail("need radial_levels ≥ 4 and homotopy_samples ≥ 2".into());
        }
        let s = &self.solver;
        if s.k == 0 || s.k > MAX_SINGULAR_VALUES {
            return fail(format!(
                "smallest_singular_values needs 1 ≤ k ≤ {MAX_SINGULAR_VALUES}, got {}",
                s.k
            ));
        }
        if !(s.gap_ratio_min > 1.0) || s.abs_tol.is_some_and(|t| !(t > 0.0)) || !(s.eig_tol > 0.0) {
            return fail("need gap_ratio_min > 1, abs_tol > 0 and eig_tol > 0".into());
        }
        match self.kind {
            ScenarioKind::Kink | ScenarioKind::ScalarTrivial if !self.is_three_dimensional() => {
                if self.kind == ScenarioKind::ScalarTrivial && self.geometry.dimension != 1 {
                    return fail(format!(
                        "scalar-trivial dimension must be 1 or 3, got {}",
                        self.geometry.dimension
                    ));
                }
                if self.kind == ScenarioKind::Kink && p.orientation.abs() != 1 {
                    return fail(format!(
                        "kink orientation must be ±1, got {}",
                        p.orientation
                    ));
                }
                let n = self.points();
                if n < MIN_POINTS_1D {
                    return fail(format!(
                        "assemble_kink_1d requires N ≥ {MIN_POINTS_1D}, got N = {n}"
                    ));
                }
                let edge = p.lambda
                    * if self.kind == ScenarioKind::Kink {
                        (self.extent() / p.width).tanh()
                    } else {
                        1.0
                    };
                if edge < 0.5 {
                    return fail(format!(
                        "assemble_kink_1d requires |φ(±L)| ≥ 1/2, got {edge:.3e}"
                    ));
                }
            }
            ScenarioKind::Hedgehog | ScenarioKind::ScalarTrivial => {
                let n = self.points();
                if n < MIN_POINTS_3D {
                    return fail(format!(
                        "assemble_hedgehog_3d requires N ≥ {MIN_POINTS_3D} per axis, got N = {n}"
                    ));
                }
                if p.lambda * self.extent() < MIN_DECAY_MARGIN {
                    return fail(format!(
                        "assemble_hedgehog_3d requires λ·R ≥ {MIN_DECAY_MARGIN}, got {:.3}",
                        p.lambda * self.extent()
                    ));
                }
                if self.geometry.boundary_resolution < 4 || self.corner_resolution() < 3 {
                    return fail(
                        "sphere grids need boundary_resolution ≥ 4 and corner_resolution ≥ 3"
                            .into(),
                    );
                }
            }
            ScenarioKind::SyntheticCorner => {
                if self.corner_resolution() < 8 {
                    return fail(format!(
                        "synthetic corner needs corner_resolution ≥ 8, got {}",
                        self.corner_resolution()
                    ));
                }
            }
            ScenarioKind::CustomSymbolFile => {
                if self.custom_symbol.is_none() {
                    return fail("custom-symbol-file scenario without loaded symbol data".into());
                }
            }
            ScenarioKind::Kink => unreachable!("1D kinds handled above"),
        }
        Ok(())
    }

    /// Applies `key=value` pairs separated by commas to the solver and
    /// tolerance tables.
    pub fn apply_overrides(&mut self, spec: &str) -> Result<()> {
        for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Validation(format!("override '{pair}' is not key=value")))?;
            let num = || {
                value.trim().parse::<f64>().map_err(|_| {
                    Error::Validation(format!("override {key}: '{value}' is not a number"))
                })
            };
            match key.trim() {
                "compatibility" => self.tolerances.compatibility = num()?,
                "split" => self.tolerances.split = num()?,
                "clutching" => self.tolerances.clutching = num()?,
                "potential" => self.tolerances.potential = num()?,
                "gap_ratio_min" => self.solver.gap_ratio_min = num()?,
                "abs_tol" => self.solver.abs_tol = Some(num()?),
                "eig_tol" => self.solver.eig_tol = num()?,
                other => {
                    return Err(Error::Validation(format!(
                        "unknown tolerance override '{other}'"
                    )))
                }
            }
        }
        self.validate()
    }
}

/// Names of the shipped scenarios.
pub fn builtin_names() -> Vec<&'static str> {
    vec![
        "kink-default",
        "anti-kink",
        "scalar-trivial-1d",
        "scalar-trivial-3d",
        "hedgehog-k0",
        "hedgehog-k1",
        "hedgehog-k2",
        "synthetic-corner-k-2",
        "synthetic-corner-k-1",
        "synthetic-corner-k0",
        "synthetic-corner-k1",
        "synthetic-corner-k2",
    ]
}

pub fn builtin(name: &str) -> Option<Scenario> {
    let mut s = match name {
        "kink-default" => Scenario::new(name, ScenarioKind::Kink),
        "anti-kink" => {
            let mut s = Scenario::new(name, ScenarioKind::Kink);
            s.potential.orientation = -1;
            s
        }
        "scalar-trivial-1d" => Scenario::new(name, ScenarioKind::ScalarTrivial),
        "scalar-trivial-3d" => {
            let mut s = Scenario::new(name, ScenarioKind::ScalarTrivial);
            s.geometry.dimension = 3;
            s
        }
        _ => {
            let (kind, rest) = match name.strip_prefix("hedgehog-k") {
                Some(r) => (ScenarioKind::Hedgehog, r),
                None => (
                    ScenarioKind::SyntheticCorner,
                    name.strip_prefix("synthetic-corner-k")?,
                ),
            };
            let k: i32 = rest.parse().ok()?;
            let allowed = match kind {
                ScenarioKind::Hedgehog => (0..=2).contains(&k),
                _ => (-2..=2).contains(&k),
            };
            if !allowed {
                return None;
            }
            let mut s = Scenario::new(name, kind);
            s.potential.charge = k;
            s
        }
    };
    s.name = name.to_string();
    Some(s)
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn parse_error(text: &str, e: toml::de::Error) -> Error {
    let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
    Error::Parse {
        line,
        column,
        message: e.message().to_string(),
    }
}

/// Parses and validates a scenario. `base_dir` resolves a relative
/// `symbol_file`.
pub fn parse_scenario(text: &str, base_dir: Option<&Path>) -> Result<Scenario> {
    let mut s: Scenario = toml::from_str(text).map_err(|e| parse_error(text, e))?;
    if s.kind == ScenarioKind::CustomSymbolFile {
        let rel = s.symbol_file.clone().ok_or_else(|| {
            Error::Validation(format!("{}: custom-symbol-file needs symbol_file", s.name))
        })?;
        let path = base_dir.map_or(rel.clone(), |d| d.join(&rel));
        s.custom_symbol = Some(load_symbol_file(&s.name, &path)?);
    } else if s.symbol_file.is_some() {
        return Err(Error::Validation(format!(
            "{}: symbol_file is only valid for custom-symbol-file",
            s.name
        )));
    }
    s.validate()?;
    Ok(s)
}

/// Resolves a built-in name or reads a scenario file.
pub fn load_scenario(name_or_path: &str) -> Result<Scenario> {
    if let Some(s) = builtin(name_or_path) {
        return Ok(s);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(Error::Validation(format!(
            "'{name_or_path}' is neither a built-in scenario ({}) nor a file",
            builtin_names().join(", ")
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario(&text, path.parent())
}

const SYMBOL_ENDS: [(&str, &str); 4] = [
    ("left", "slope"),
    ("left", "potential"),
    ("right", "slope"),
    ("right", "potential"),
];

fn tabulated(name: &str, rank: usize, mats: Vec<Mat>) -> Tabulated1d {
    let mut it = mats.into_iter();
    let mut next = || it.next().unwrap_or_else(|| Mat::zeros(rank, rank));
    let (sl, pl, sr, pr) = (next(), next(), next(), next());
    Tabulated1d {
        name: name.to_string(),
        slopes: [sl, sr],
        potentials: [pl, pr],
    }
}

fn matrix_from_pairs(rank: usize, values: &[f64]) -> Mat {
    Mat::from_fn(rank, rank, |i, j| {
        let k = 2 * (i * rank + j);
        c(values[k], values[k + 1])
    })
}

/// Tabulated end data as CSV: one record `end,part,rank,re,im,...` per
/// matrix with the entries row-major, for `end ∈ {left, right}` and
/// `part ∈ {slope, potential}`. Lines starting with `#` are comments.
pub fn parse_symbol_csv(name: &str, text: &str) -> Result<Tabulated1d> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut slots: [Option<Mat>; 4] = Default::default();
    let mut rank = None;
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(row + 1, |p| p.line() as usize),
            column: 1,
            message: e.to_string(),
        })?;
        let line = record.position().map_or(row + 1, |p| p.line() as usize);
        let bad = |column: usize, message: String| Error::Parse {
            line,
            column,
            message,
        };
        let slot = SYMBOL_ENDS
            .iter()
            .position(|&(e, p)| record.get(0) == Some(e) && record.get(1) == Some(p))
            .ok_or_else(|| bad(1, format!("expected end,part in {SYMBOL_ENDS:?}")))?;
        let r: usize = record
            .get(2)
            .and_then(|v| v.parse().ok())
            .filter(|&r| r > 0)
            .ok_or_else(|| bad(3, "rank must be a positive integer".into()))?;
        if *rank.get_or_insert(r) != r {
            return Err(bad(
                3,
                format!("rank {r} differs from earlier rank {}", rank.unwrap()),
            ));
        }
        let values = record
            .iter()
            .skip(3)
            .enumerate()
            .map(|(k, v)| {
                v.parse::<f64>()
                    .map_err(|_| bad(k + 4, format!("'{v}' is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != 2 * r * r {
            return Err(bad(
                4,
                format!("rank {r} needs {} values, got {}", 2 * r * r, values.len()),
            ));
        }
        if slots[slot].replace(matrix_from_pairs(r, &values)).is_some() {
            return Err(bad(
                1,
                format!(
                    "duplicate {} {} record",
                    SYMBOL_ENDS[slot].0, SYMBOL_ENDS[slot].1
                ),
            ));
        }
    }
    if let Some(k) = slots.iter().position(Option::is_none) {
        return Err(Error::Validation(format!(
            "symbol table lacks the {} {} record",
            SYMBOL_ENDS[k].0, SYMBOL_ENDS[k].1
        )));
    }
    let rank = rank.unwrap_or(0);
    Ok(tabulated(name, rank, slots.into_iter().flatten().collect()))
}

/// Tabulated end data as little-endian binary: the rank as `u64`, then the
/// left slope, left potential, right slope and right potential, each as
/// row-major `(re, im)` pairs of `f64`.
pub fn parse_symbol_binary(name: &str, bytes: &[u8]) -> Result<Tabulated1d> {
    let head: [u8; 8] = bytes
        .get(..8)
        .and_then(|b| b.try_into().ok())
        .ok_or_else(|| Error::Validation("binary symbol table shorter than its header".into()))?;
    let rank = u64::from_le_bytes(head) as usize;
    let expected = 8 + 4 * 2 * rank * rank * 8;
    if rank == 0 || bytes.len() != expected {
        return Err(Error::Validation(format!(
            "binary symbol table of rank {rank} must be {expected} bytes, got {}",
            bytes.len()
        )));
    }
    let values: Vec<f64> = bytes[8..]
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("chunks of 8")))
        .collect();
    let mats = values
        .chunks_exact(2 * rank * rank)
        .map(|v| matrix_from_pairs(rank, v))
        .collect();
    Ok(tabulated(name, rank, mats))
}

/// Writes the binary layout read by [`parse_symbol_binary`].
pub fn encode_symbol_binary(t: &Tabulated1d) -> Vec<u8> {
    let rank = t.slopes[0].nrows();
    let mut out = (rank as u64).to_le_bytes().to_vec();
    for m in [
        &t.slopes[0],
        &t.potentials[0],
        &t.slopes[1],
        &t.potentials[1],
    ] {
        for i in 0..rank {
            for j in 0..rank {
                out.extend_from_slice(&m[(i, j)].re.to_le_bytes());
                out.extend_from_slice(&m[(i, j)].im.to_le_bytes());
            }
        }
    }
    out
}

fn load_symbol_file(name: &str, path: &Path) -> Result<Tabulated1d> {
    if path.extension().is_some_and(|e| e == "bin") {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        parse_symbol_binary(name, &bytes)
    } else {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse_symbol_csv(name, &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kink_default_is_shipped() {
        let s = builtin("kink-default").unwrap();
        assert_eq!(s.kind, ScenarioKind::Kink);
        assert_eq!((s.extent(), s.points()), (20.0, 2000));
        assert_eq!(s.far_field(), (-1.0, 1.0));
        assert_eq!(builtin("anti-kink").unwrap().far_field(), (1.0, -1.0));
        for name in builtin_names() {
            builtin(name).unwrap().validate().unwrap();
        }
        assert!(builtin("hedgehog-k3").is_none());
        assert!(builtin("synthetic-corner-k-3").is_none());
    }

    #[test]
    fn small_grid_fails_validation() {
        let text = "name = \"tiny\"\nkind = \"kink\"\n[geometry]\npoints = 2\n";
        match parse_scenario(text, None) {
            Err(Error::Validation(m)) => {
                assert!(m.contains("assemble_kink_1d") && m.contains("N = 2"), "{m}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_a_parse_error() {
        let text = "name = \"x\"\nkind = \"kink\"\n[geometry]\nmetricc = 3\n";
        match parse_scenario(text, None) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => {
                assert_eq!((line, column), (4, 1));
                assert!(message.contains("metricc"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn full_config_round_trips() {
        let s = builtin("hedgehog-k2").unwrap();
        let text = toml::to_string(&s).unwrap();
        assert_eq!(parse_scenario(&text, None).unwrap(), s);
    }

    #[test]
    fn overrides_apply_and_validate() {
        let mut s = builtin("kink-default").unwrap();
        s.apply_overrides("gap_ratio_min=100, abs_tol=1e-5,clutching=1e-9")
            .unwrap();
        assert_eq!(s.solver.gap_ratio_min, 100.0);
        assert_eq!(s.solver.abs_tol, Some(1e-5));
        assert_eq!(s.tolerances.clutching, 1e-9);
        assert!(s.apply_overrides("bogus=1").is_err());
        assert!(s.apply_overrides("gap_ratio_min=0.5").is_err());
    }

    #[test]
    fn custom_symbol_file_loads() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("sym.csv"),
            "# end,part,rank,re,im\nleft,slope,1,1,0\nleft,potential,1,-1,0\nright,slope,1,1,0\nright,potential,1,1,0\n",
        )
        .unwrap();
        let text = "name = \"custom\"\nkind = \"custom-symbol-file\"\nsymbol_file = \"sym.csv\"\n";
        let s = parse_scenario(text, Some(dir.path())).unwrap();
        let t = s.custom_symbol.unwrap();
        assert_eq!(t.potentials[0][(0, 0)], c(-1.0, 0.0));
        std::fs::write(dir.path().join("sym.bin"), encode_symbol_binary(&t)).unwrap();
        let bin = parse_scenario(&text.replace("sym.csv", "sym.bin"), Some(dir.path())).unwrap();
        let tb = bin.custom_symbol.unwrap();
        assert_eq!(
            (tb.slopes.clone(), tb.potentials.clone()),
            (t.slopes, t.potentials)
        );
        let missing = parse_scenario(&text.replace("sym.csv", "nope.csv"), Some(dir.path()));
        assert!(matches!(missing, Err(Error::Io { .. })));
    }

    #[test]
    fn symbol_csv_errors_carry_positions() {
        let short = "left,slope,2,1,0\n";
        assert!(matches!(
            parse_symbol_csv("x", short),
            Err(Error::Parse {
                line: 1,
                column: 4,
                ..
            })
        ));
        let partial = "left,slope,1,1,0\nleft,potential,1,x,0\n";
        assert!(matches!(
            parse_symbol_csv("x", partial),
            Err(Error::Parse {
                line: 2,
                column: 4,
                ..
            })
        ));
        assert!(matches!(
            parse_symbol_csv("x", "left,slope,1,1,0\n"),
            Err(Error::Validation(_))
        ));
    }
}
