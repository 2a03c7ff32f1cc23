//! Exact derangement numbers and a verifier for the sum rule
//! `Σ_{n=0..p} n·D(n) = ⌊(p+1)!/e⌋`.
//!
//! Floors and nearest integers of irrational quantities such as `n!/e` are
//! decided with rational enclosures of e, never with floating point. The
//! only floating-point code is the quadrature cross-check.

pub mod derangement;
pub mod elaurent;
pub mod error;
pub mod exact;
pub mod interval;
pub mod perm;
pub mod quadrature;
pub mod verify;

pub use derangement::{
    a_closed_form, a_floor_formula, a_recurrence, d_floor_formula, d_nearest_formula,
    d_pair_recurrence, d_signed_recurrence, d_sum, derangements, sum_rule_lhs, sum_rule_rhs,
    DerangementTable, Method,
};
pub use elaurent::{el_eval, el_floor, el_nearest, el_sign, ELaurent};
pub use error::{Error, Result};
pub use exact::{binomial, factorial, Integer, Rational};
pub use interval::{e_enclosure, e_inv_enclosure, Interval};
pub use perm::{
    brute_derangement_count, brute_sum_rule, fixed_point_count, heap_permutations, Permutation,
};
pub use quadrature::{integrate_exp_monomial, integrate_tail, QuadResult};
pub use verify::{Identity, Profile, VerificationReport};
