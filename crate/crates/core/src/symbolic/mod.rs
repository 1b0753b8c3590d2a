//! Symbol fields, the compatibility validator, joint eigenbundles and the
//! homotopies that reduce the full symbol to corner data.

mod compat;
mod field;
mod homotopy;
pub mod models;
mod split;

pub use compat::{
    check_full_ellipticity, commuting_invertibility_bound, complexify, joint_eigenvalues,
    validate_compatibility, CompatibilityReport, ConditionVerdicts,
};
pub use field::{CalliasSymbolData, Face, HermitianField, SymbolGrid, SymbolModel};
pub use homotopy::{
    build_corner_trivialization, build_reduction_homotopy, smoothstep, verify_invertible_path,
    CollarProfile, CornerTrivialization, MatrixPath, Partition, ReductionHomotopy, SampledPath,
    Transition,
};
pub use split::{corner_fields, joint_frames, joint_split, Block, JointSplitting};
