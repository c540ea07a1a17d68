//! Moyal and f-deformed star products.

mod fstar;
mod moyal;
mod symbol;

pub use fstar::{amplitude_field, fstar_apply, poisson_bracket, star_commutator, StarOrder};
pub use moyal::{moyal_apply, moyal_exact};
pub use symbol::{parse_symbol, Monomial, PolySymbol};
