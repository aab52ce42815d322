//! Enveloping algebras of right Lie modules, the Guin-Oudom extension of
//! O-Lie operators, the `#` product on maps `U(g) -> U(a)` and the
//! factorization identities built on them.
//!
//! Every identity is checked exhaustively on the PBW basis of `U(g)` up to a
//! degree cap `D`; the maps involved never raise PBW length, so this is exact.

mod envelope;
mod lie;
mod maps;
mod verify;

use thiserror::Error;

pub use envelope::{Envelope, Monomial, UElem, UTensor, MAX_BASIS};
pub use lie::{
    end_operad_module, EndOperadModule, LieAlgebra, LieMap, LieModule, SparseVec,
    END_OPERAD_MAX_DIM,
};
pub use maps::{CoalgMap, Codomain, HopfModule, OHopfOperator};
pub use verify::{
    classical_sts, end_operad_instance, hopf_suite, inverse_commutation, partition_formula,
    verify_instance, verify_ybe, HopfInstance,
};

/// Which Lie algebra of a module a witness refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Source,
    Target,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error("Jacobi identity fails in the {side:?} algebra on basis triple {witness:?}")]
    JacobiViolation { side: Side, witness: [usize; 3] },
    #[error("derivation law fails on basis triple {witness:?}")]
    DerivationViolation { witness: [usize; 3] },
    #[error("module law fails on basis triple {witness:?}")]
    ModuleViolation { witness: [usize; 3] },
    #[error("not an O-Lie operator: basis pair {witness:?}")]
    NotOLieOperator { witness: [usize; 2] },
    #[error("operators are not matching: basis pair {witness:?}")]
    NotMatching { witness: [usize; 2] },
    #[error("Hopf axiom `{axiom}` fails at {basis}")]
    HopfAxiomFailed { axiom: &'static str, basis: String },
    #[error("map is not an epsilon co-cocycle at {0}")]
    NotEpsCocycle(String),
    #[error("map is not a coalgebra morphism at {0}")]
    NotCoalgebraMorphism(String),
    #[error("O-Hopf relation fails on ({0}, {1})")]
    NotOHopf(String, String),
    #[error("antipode check fails at degree {0}")]
    AntipodeCheckFailed(usize),
    #[error("element of degree {0} exceeds the tabulated degree {1}")]
    DegreeOverflow(usize, usize),
    #[error("maps have different codomains or envelopes")]
    CodomainMismatch,
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, HopfError>;
