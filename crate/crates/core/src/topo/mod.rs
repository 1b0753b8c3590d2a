//! Topological side: winding numbers, lattice Chern numbers, the corner
//! formula for 0- and 2-dimensional corners, the product formula, and the
//! Dirac reduction to the potential's positive eigenbundle over `∂X`.

mod chern;
mod corner;
mod dirac;
mod winding;

pub use chern::{fhs_chern_number, BundleFrameField, ChernNumber};
pub use corner::{
    block_frame_field, corner_index_0d, corner_index_0d_block, corner_index_2d,
    corner_index_2d_block, corner_index_product, slice_chern_numbers, S_CORNER, S_PRODUCT,
};
pub use dirac::{
    clifford_boundary_split, clifford_from_model, dirac_topo_index, model_dirac_index,
    parallel_transport_loop, potential_split, verify_clutching_decomposition, CliffordBoundaryData,
    ClutchingReport, DiracIndex, S_DIRAC,
};
pub use winding::{det_winding, winding_number};
