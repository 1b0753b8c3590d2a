//! Invertibility certificates of the reduction and corner homotopies over
//! seeded random compatible symbol data.
//!
//! Usage: `cargo run --release --example homotopy_certificates -- [count]`

use std::sync::Arc;

use callias::geometry::build_interval_boundary;
use callias::harness::homotopy_certificate;
use callias::symbolic::models::RandomCompatible1d;
use callias::symbolic::{validate_compatibility, CalliasSymbolData, SymbolGrid};

fn main() -> callias::Result<()> {
    let count: u64 = std::env::args()
        .nth(1)
        .map_or(20, |a| a.parse().expect("integer count"));
    println!(
        "{:>4} {:>4} {:>10} {:>10} {:>10}",
        "seed", "rank", "commutator", "reduction", "corner"
    );
    for seed in 0..count {
        let rank = 2 + (seed % 7) as usize;
        let grid = SymbolGrid::new(1, build_interval_boundary(), build_interval_boundary(), 33)?;
        let data = CalliasSymbolData::sample(&RandomCompatible1d::new(rank, seed), Arc::new(grid))?;
        let compat = validate_compatibility(&data, 1e-8)?;
        let cert = homotopy_certificate(&data, 16)?;
        println!(
            "{seed:>4} {rank:>4} {:>10.2e} {:>10.4} {:>10.4}",
            compat.max_commutator_norm,
            cert.reduction_min_singular_value,
            cert.corner_min_singular_value
        );
    }
    Ok(())
}
