//! Discrete warped-product metrics on the 3-ball and their curvature.

mod curvature;
mod grid;
mod metric;
mod presets;

pub(crate) use curvature::integrate;
pub use curvature::{
    arclength_derivative, curvature, rescale, second_fundamental_form, volume, BoundaryState,
    CurvatureField,
};
pub use grid::{RadialGrid, MIN_CELLS};
pub use metric::{Ghosts, WarpedMetric};
pub use presets::{make_preset, Preset};
