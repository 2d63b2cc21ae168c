//! Correlation Bell inequalities generated by ROCN matrices (real, orthogonal
//! rows, normalized columns): classical and quantum bounds, the rank-based
//! self-testing criterion, Jordan-Wigner reference strategies and their twins,
//! and Hadamard excess.

pub mod bounds;
pub mod clifford;
pub mod error;
pub mod hadamard;
pub mod numerics;
pub mod rocn;
pub mod selftest;

pub use bounds::{
    best_bound_range, classical_bound, epping_bound, nontriviality_check, quantum_bound,
    BoundsReport, SearchOptions,
};
pub use clifford::{
    bell_value, commutant_dimension, conjugation_equivalence_check, correlation_matrix,
    jw_generators, max_entangled_state, reference_strategy, twin_strategy, verify_saturation,
    SaturationReport, Strategy,
};
pub use error::{Error, Result};
pub use hadamard::{
    is_hadamard, load_hadamard, optimized_excess, paley_i, remove_row_conjecture, save_hadamard,
    sylvester, ExcessReport, HadamardMatrix,
};
pub use rocn::{
    from_truncated_hadamard, parse_matrix_text, synthesize_from_row_norms, validate_rocn,
    RocnMatrix, ValidationReport,
};
pub use selftest::{build_m, counterexample_family, selftest_verdict, SelfTestReport, Verdict};
