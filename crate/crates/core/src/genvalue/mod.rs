//! Star-genvalue residuals, ladder-commutator correspondence and associativity scaling.

mod assoc;
mod commutator;
mod report;
mod residual;

pub use assoc::{associativity_defect, associator, AssociativityStudy, DEFECT_FLOOR};
pub use commutator::{closed_form_commutator, commutator_report, linear_deformation_sweep, CommutatorReport, DeformationSweep};
pub use report::{grid_json, num17, ResidualReport, Witness};
pub use residual::{
    bracket_term, build_hamiltonian, genvalue_residual, hamiltonian_star_wigner, oscillator_symbol, HamiltonianField,
    DEFAULT_R_CUT,
};
