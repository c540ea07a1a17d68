//! Phase-space grids, fields, Wigner functions, derivatives and quadrature.

mod derivative;
mod field;
mod grid;
mod quadrature;
pub mod special;
mod wigner;

pub use derivative::{fd4_axis, gradient, mixed_derivative, DerivativeMethod};
pub(crate) use derivative::mixed_derivative_auto;
pub use field::{Field, Profile, RadialProfile};
pub use grid::{PhaseGrid, HALF_CELL};
pub use quadrature::{integrate, l2_norm, l2_norm_where};
pub use special::laguerre;
pub use wigner::{fcs_wigner, fock_wigner, WignerWeights};
