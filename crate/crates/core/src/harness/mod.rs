//! Scenario configuration, the end-to-end pipeline comparing the analytic and
//! topological indices, and report emission.

mod emit;
mod run;
mod scenario;

pub use emit::{emit_report, report_json, report_text, Format};
pub use run::{
    build_operator, homotopy_certificate, run_scenario, solver_params, sweep_scenario,
    winding_table, AnalyticResult, CurvatureTable, HomotopyCertificate, IndexReport, Stage,
    StageFailure, TopologicalIndex, Verdict, WindingEntry, MISMATCH_EXIT,
};
pub use scenario::{
    builtin, builtin_names, encode_symbol_binary, load_scenario, parse_scenario,
    parse_symbol_binary, parse_symbol_csv, Geometry, Potential, Scenario, ScenarioKind, Solver,
    Tolerances,
};
