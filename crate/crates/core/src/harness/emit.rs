use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::run::IndexReport;
use crate::analytic::write_zero_modes_csv;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Validation(format!(
                "unknown format '{other}' (json, csv, text)"
            ))),
        }
    }
}

/// Pretty JSON with fields in declaration order.
pub fn report_json(r: &IndexReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports contain only serializable data");
    s.push('\n');
    s
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn report_text(r: &IndexReport) -> String {
    let mut t = String::new();
    let s = &r.scenario;
    let _ = writeln!(t, "scenario {} ({:?}, seed {})", s.name, s.kind, s.seed);
    if let Some(c) = &r.compatibility {
        let _ = writeln!(
            t,
            "  compatibility: commutator {:.2e}, min |eig Φ| {:.3}, corner mismatch {:.2e}",
            c.max_commutator_norm, c.min_potential_eigen, c.corner_mismatch
        );
    }
    if let Some(m) = r.full_ellipticity_margin {
        let _ = writeln!(t, "  full ellipticity margin: {m:.4}");
    }
    if let Some(h) = &r.homotopy {
        let _ = writeln!(
            t,
            "  homotopy: min singular value {:.4} (reduction {:.4}, corner {:.4})",
            h.min_singular_value, h.reduction_min_singular_value, h.corner_min_singular_value
        );
    }
    if let Some(w) = &r.winding_table {
        let cells: Vec<String> = w
            .iter()
            .map(|e| format!("{} {}", e.block, e.winding))
            .collect();
        let _ = writeln!(t, "  windings: {}", cells.join(", "));
    }
    if let Some(x) = &r.topological {
        let _ = writeln!(
            t,
            "  topological index {} via {} (raw {}), blocks {:?}",
            x.index,
            x.method,
            opt(x.chern_raw.map(|c| format!("{c:.6}"))),
            x.block_indices
        );
    }
    if let Some(c) = &r.clutching {
        let _ = writeln!(
            t,
            "  clutching: angles {:.2e}/{:.2e}, identity {:?}",
            c.max_inward_angle, c.max_outward_angle, c.identity
        );
    }
    if let Some(a) = &r.analytic {
        let sp = &a.spectral;
        let _ = writeln!(
            t,
            "  analytic index {} = {} - {} on {} (gap ratio {})",
            a.index,
            sp.dim_ker_p,
            sp.dim_ker_p_dagger,
            sp.operator,
            opt(sp.gap_ratio.map(|g| format!("{g:.1}")))
        );
        for side in [&sp.p, &sp.p_dagger] {
            let vals: Vec<String> = side.values.iter().map(|v| format!("{v:.3e}")).collect();
            let _ = writeln!(t, "    σ({}) = [{}]", side.side.label(), vals.join(", "));
        }
    }
    if let Some(f) = &r.failure {
        let _ = writeln!(t, "  FAILED at {:?}: {}", f.stage, f.message);
    }
    let _ = writeln!(t, "verdict: {}", r.verdict.map_or("ERROR", |v| v.label()));
    t
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::io(path, std::io::Error::other(e))
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn summary_rows(r: &IndexReport) -> Vec<Vec<String>> {
    let mut rows = vec![
        ("scenario", r.scenario.name.clone()),
        ("kind", format!("{:?}", r.scenario.kind)),
        ("seed", r.scenario.seed.to_string()),
        ("full_ellipticity_margin", opt(r.full_ellipticity_margin)),
        (
            "homotopy_min_singular_value",
            opt(r.homotopy.as_ref().map(|h| h.min_singular_value)),
        ),
        ("topological_index", opt(r.topological_index)),
        (
            "chern_raw",
            opt(r.topological.as_ref().and_then(|t| t.chern_raw)),
        ),
        ("analytic_index", opt(r.analytic_index)),
        (
            "gap_ratio",
            opt(r.analytic.as_ref().and_then(|a| a.spectral.gap_ratio)),
        ),
        (
            "verdict",
            r.verdict.map_or("ERROR", |v| v.label()).to_string(),
        ),
        (
            "failed_stage",
            opt(r.failure.as_ref().map(|f| format!("{:?}", f.stage))),
        ),
    ];
    if let Some(w) = &r.winding_table {
        for e in w {
            rows.push(("winding", format!("{} {}", e.block, e.winding)));
        }
    }
    rows.into_iter()
        .map(|(k, v)| vec![k.to_string(), v])
        .collect()
}

/// Writes `report.json`, the CSV bundle (`summary.csv`, `curvature.csv`,
/// `spectrum.csv`, plus `zeromode.csv` when near-zero modes exist) or
/// `report.txt` into `out_dir`, returning the written paths.
pub fn emit_report(r: &IndexReport, format: Format, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let path = |name: &str| out_dir.join(name);
    let mut written = Vec::new();
    match format {
        Format::Json => {
            let p = path("report.json");
            write_file(&p, &report_json(r))?;
            written.push(p);
        }
        Format::Text => {
            let p = path("report.txt");
            write_file(&p, &report_text(r))?;
            written.push(p);
        }
        Format::Csv => {
            let p = path("summary.csv");
            write_csv(&p, &["key", "value"], summary_rows(r))?;
            written.push(p);

            let p = path("curvature.csv");
            let rows = r
                .curvature
                .iter()
                .flat_map(|t| {
                    t.rows.iter().map(|&(i, u, v, f)| {
                        vec![
                            t.field.clone(),
                            i.to_string(),
                            u.to_string(),
                            v.to_string(),
                            f.to_string(),
                        ]
                    })
                })
                .collect();
            write_csv(&p, &["field", "plaquette", "u", "v", "curvature"], rows)?;
            written.push(p);

            let p = path("spectrum.csv");
            let rows = r
                .analytic
                .iter()
                .flat_map(|a| [&a.spectral.p, &a.spectral.p_dagger])
                .flat_map(|side| {
                    side.values
                        .iter()
                        .zip(&side.residuals)
                        .enumerate()
                        .map(|(k, (s, res))| {
                            vec![
                                side.side.label().to_string(),
                                k.to_string(),
                                s.to_string(),
                                res.to_string(),
                            ]
                        })
                })
                .collect();
            write_csv(&p, &["side", "mode", "sigma", "residual"], rows)?;
            written.push(p);

            if let (Some(op), Some(a)) = (&r.operator, &r.analytic) {
                if a.spectral.zero_cut > 0 {
                    let p = path("zeromode.csv");
                    write_zero_modes_csv(op, &a.spectral, create(&p)?)?;
                    written.push(p);
                }
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::run::run_scenario;
    use crate::harness::scenario::builtin;

    #[test]
    fn json_is_byte_identical_and_carries_the_index() {
        let s = builtin("anti-kink").unwrap();
        let a = report_json(&run_scenario(&s));
        let b = report_json(&run_scenario(&s));
        assert_eq!(a, b);
        assert!(a.contains("\"analytic_index\": 1"), "{a}");
        assert!(a.contains("\"verdict\": \"MATCH\""));
    }

    #[test]
    fn csv_bundle_has_three_files_without_zero_modes() {
        let dir = tempfile::tempdir().unwrap();
        let r = run_scenario(&builtin("synthetic-corner-k2").unwrap());
        let files = emit_report(&r, Format::Csv, dir.path()).unwrap();
        let names: Vec<_> = files
            .iter()
            .map(|p| p.file_name().unwrap().to_str().unwrap().to_string())
            .collect();
        assert_eq!(names, ["summary.csv", "curvature.csv", "spectrum.csv"]);
        let curvature = std::fs::read_to_string(&files[1]).unwrap();
        assert_eq!(curvature.lines().count(), 1 + 24 * 24);
    }

    #[test]
    fn io_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "").unwrap();
        let r = run_scenario(&builtin("synthetic-corner-k0").unwrap());
        match emit_report(&r, Format::Json, &blocker.join("sub")) {
            Err(Error::Io { path, .. }) => assert!(path.starts_with(&blocker)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn format_parses() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
