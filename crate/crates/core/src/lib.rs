//! Exact evaluation of Hofstadter-type nested recurrences, the family of
//! eventually quasipolynomial solutions of the Q-recurrence, and detection
//! of quasipolynomial structure in computed sequences.
//!
//! - [`arith`]: exact binomials, finite differences, interpolation
//! - [`recurrence`]: the evaluation engine and [`SequenceBuffer`]
//! - [`quasipoly`]: `p_{d,k}`, the period-`3d` solutions, Golomb's solution
//! - [`detect`]: period and per-class polynomial discovery
//! - [`harness`]: end-to-end verification campaigns

pub mod arith;
pub mod detect;
pub mod harness;
pub mod quasipoly;
pub mod recurrence;

pub use arith::{binom_poly, finite_difference, poly_eval, poly_from_samples, Polynomial};
pub use detect::{detect, DetectParams, Detection, QuasipolyFit};
pub use harness::{q_wellposed_scan, verify_golomb, verify_theorem, VerificationReport};
pub use quasipoly::{
    check_lemma1, check_lemma2, closed_form_buffer, golomb_term, initial_condition, p_eval,
    theorem_term, QuasipolySolution, WeightSequence,
};
pub use recurrence::{compute, extend, NestedRecurrence, SequenceBuffer, UnderflowPolicy};
