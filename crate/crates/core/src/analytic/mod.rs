//! Analytic side: finite-difference discretizations of `P = D + iΦ`, a
//! sparse eigensolver for the normal operators, and zero-mode counting with
//! a certified spectral gap.

mod band;
mod index;
mod lanczos;
mod operator;
mod sparse;

pub use band::BandLu;
pub use index::{
    analytic_index, convergence_sweep, count_zero_modes, singular_spectrum,
    smallest_singular_values, write_zero_modes_csv, Side, SideCount, SideSpectrum, SolverMethod,
    SolverParams, SpectralReport, SweepPoint, INTERIOR_WEIGHT_MIN, MATVECS_PER_VALUE,
    MAX_SINGULAR_VALUES, WALL_WEIGHT_MAX,
};
pub use lanczos::{hermitian_eigs, EigenRequest, EigenResult, Which};
pub use operator::{
    assemble_hedgehog_3d, assemble_hedgehog_3d_with, assemble_kink_1d, assemble_kink_1d_with,
    default_wilson, Dimension, DiscretizedOperator, GridSpec, MIN_DECAY_MARGIN, MIN_POINTS_1D,
    MIN_POINTS_3D, SATURATION_TOL,
};
pub use sparse::CsrMatrix;
