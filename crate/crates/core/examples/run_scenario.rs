//! Full pipeline on a built-in scenario or scenario file, printing the text
//! report and the JSON key facts.
//!
//! Usage: `cargo run --release --example run_scenario -- [name-or-path]`

use callias::harness::{load_scenario, report_text, run_scenario};

fn main() -> callias::Result<()> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "kink-default".into());
    let report = run_scenario(&load_scenario(&name)?);
    print!("{}", report_text(&report));
    println!("exit code {}", report.exit_code());
    Ok(())
}
