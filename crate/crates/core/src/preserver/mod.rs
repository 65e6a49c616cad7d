//! Linear preservers of sign regularity on `m x n` matrix space.
//!
//! A map is decided structurally: it must be a signed monomial map whose
//! support bijection acts on rows and columns separately (up to transpose)
//! with rank-one scalars `l_ij = f_i e_j`. Outside the canonical set a
//! witness matrix is produced and verified by classification.
//!
//! The basis of matrix space is row-major. The ordered basis
//! `(E_11, ..., E_nn; E_12, ..., E_mn)` (diagonal first, then the
//! off-diagonal positions row by row) differs from it only by a fixed
//! permutation; monomiality and every decision here are invariant under it.

mod classes;
mod factor;
mod map;
mod monomial;
mod support2x2;
mod witness;

pub use classes::{equal_preserver_classes_check, ClassesReport};
pub use factor::{
    decide, factor_preserver, validate_query, CanonicalFactorization, Mode, Outcome,
    PreserverVerdict, Regime, RejectReason, Special2x2,
};
pub use map::MatrixSpaceMap;
pub use monomial::{monomial_analysis, MonomialFailure, SupportMap};
pub use support2x2::{support_case, support_cases, word_for, Generator2x2, SupportCase};
pub use witness::{
    find_witness, scale_constants, verify_witness, Witness, WitnessDirection, MAX_SCALE_EXPONENT,
};
