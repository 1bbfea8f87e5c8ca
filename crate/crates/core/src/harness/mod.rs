//! Measurement of every security claim: indistinguishability distance,
//! cipher bounds, explicit adversaries, the equivalence constructions, the
//! key-length lower bound, and experiment reports.

pub mod adversary;
pub mod equivalence;
pub mod indist;
pub mod keylen;
pub mod lower_bound;
pub mod report;

pub use adversary::{
    gl_reduction, helstrom_adversary, helstrom_on_cipher, measurement_tables, projective_pair,
    simulate_discrimination, strong_vs_regular, synthetic_gl_table, GlResult, GlTable, Helstrom,
    StrongRegular,
};
pub use equivalence::{random_ensemble, rho_hat, rho_hat_applicable, tau_tilde, InterpretationEnsemble};
pub use indist::{
    as_bound_check, floor_entropy, indist_distance, key_set_bias, xu_bound_check, xu_threshold_met,
    BoundCheck, RennerChain,
};
pub use keylen::{default_t_grid, key_length_csv, key_length_row, key_length_table, KeyLengthRow};
pub use lower_bound::{
    lower_bound_experiment, lower_bound_on, random_ccq_state, random_pauli_subset, LowerBoundResult,
};
pub use report::{emit_report, ExperimentReport, Status};
