//! Windings of the corner trivialization restricted to the four joint
//! eigenbundles, for every built-in scenario.
//!
//! Usage: `cargo run --release --example winding_table`

use std::sync::Arc;

use callias::geometry::{build_circle_grid, build_interval_boundary, build_sphere_grid};
use callias::harness::winding_table;
use callias::symbolic::models::{Hedgehog, Kink1d, SyntheticCorner2d};
use callias::symbolic::{CalliasSymbolData, SymbolGrid, SymbolModel};

fn main() -> callias::Result<()> {
    let line = || SymbolGrid::new(1, build_interval_boundary(), build_interval_boundary(), 33);
    let cases: Vec<(Box<dyn SymbolModel>, SymbolGrid)> = vec![
        (Box::new(Kink1d::kink()), line()?),
        (Box::new(Kink1d::anti_kink()), line()?),
        (Box::new(Kink1d::trivial()), line()?),
        (
            Box::new(Hedgehog {
                charge: 1,
                lambda: 1.0,
            }),
            SymbolGrid::new(3, build_sphere_grid(4)?, build_sphere_grid(4)?, 17)?,
        ),
        (
            Box::new(SyntheticCorner2d { winding: 2 }),
            SymbolGrid::new(2, build_circle_grid(24)?, build_circle_grid(24)?, 17)?,
        ),
    ];
    for (model, grid) in cases {
        let data = CalliasSymbolData::sample(model.as_ref(), Arc::new(grid))?;
        let cells: Vec<String> = winding_table(&data)?
            .iter()
            .map(|e| {
                format!(
                    "{} {:+} (rank ≤ {}, {} pts)",
                    e.block, e.winding, e.max_rank, e.points
                )
            })
            .collect();
        println!("{:<28} {}", model.name(), cells.join(" | "));
    }
    Ok(())
}
