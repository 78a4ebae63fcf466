//! Phase-space analysis of finite superpositions of Fock states.
//!
//! Wigner and Q functions in closed finite-sum form, the Wigner negative
//! volume, amplitude-decay and phase-damping evolution, and optical
//! tomograms. Generalized binomial and reciprocal binomial states are
//! built in; any other superposition can be supplied coefficient by
//! coefficient. An independent displaced-number-state series evaluator is
//! included for cross-checking the closed forms.

pub mod cli;
pub mod decoherence;
pub mod error;
pub mod nonclassicality;
pub mod oracle;
pub mod phasespace;
pub mod quadrature;
pub mod specfun;
pub mod states;
pub mod tomogram;

pub use decoherence::{
    dephased_wigner_inf, kt_to_beta, wigner_decayed, wigner_origin_decayed, y_coeff, AmplitudeChannel,
};
pub use error::{Error, Result};
pub use nonclassicality::{
    negative_volume, negative_volume_decayed, q_zero_scan, sweep_delta, QuadratureSpec, StateFamily,
    SweepAxis, SweepResult,
};
pub use phasespace::{
    q_function, q_grid, wigner, wigner_grid, wigner_origin, x_coeff, GridSpec, PhasePoint, ScalarField,
};
pub use states::{make_custom, make_fock, make_gbs, make_rbs, FockSuperposition, GbsParams, RbsParams};
pub use tomogram::{optical_tomogram, tomogram_grid, TomogramPoint};
