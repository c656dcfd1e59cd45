//! Labeled parametrized plane tropical curves: degrees, evaluation maps,
//! multiplicities and the pushforwards of codimension-one cycles.

mod curve;
mod degree;
pub mod orbits;
mod pushforward;
mod regions;

pub use curve::{vertex_mult, EvaluationMatrix, Item, ParamType};
pub use degree::{Degree, Vec2};
pub use pushforward::{
    check_image_balancing, contracted_psi_sum, overlapping_cells, pushforward_codim1, special_position,
    special_position_cells, ImageBalance, ImageCell, Version,
};
pub use regions::{analyze_regions, mult_closed, Classification, Region, RegionDecomposition};
