//! Phase-space toolkit for f-deformed oscillators: deformation functions, Wigner
//! functions on grids, Moyal and f-star products, and star-genvalue diagnostics.

pub mod cli;
pub mod deformation;
pub mod error;
pub mod expr;
pub mod fit;
pub mod genvalue;
pub mod io;
mod lexer;
pub mod phasespace;
pub mod starproduct;
pub mod verify;

pub use deformation::Deformation;
pub use error::{Error, Result};
pub use phasespace::{Field, PhaseGrid};
pub use starproduct::{PolySymbol, StarOrder};
