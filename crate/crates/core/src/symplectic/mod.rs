//! GSp_{2g} and Sp_{2g} over Z/mZ, and the Lie algebra sp_{2g}(Z/mZ).

mod codec;
mod congruence;
mod group;
mod lie;
mod matrix;

use thiserror::Error;

pub use codec::MatrixCodec;
pub use congruence::{group_commutator_congruence, kernel_param, CongruenceCheck};
pub use group::{
    expected_det, group_order, multiplier, omega, random_sp_element, sp_generators,
    sp_order_prime_power, standard_form, GroupKind, SympMatrix,
};
pub use lie::{
    commutator_span, lie_basis, lie_dimension, CommutatorSpan, EchelonSpan, SpLieElement,
};
pub use matrix::{IntMatrix, Matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("matrix is not a symplectic similitude")]
    NotSymplectic,
    #[error("matrix is not in sp_2g (needs MᵀΩ + ΩM = 0)")]
    NotInLieAlgebra,
    #[error("{target} does not divide {modulus}")]
    NotADivisor { modulus: u64, target: u64 },
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("modulus mismatch")]
    ModulusMismatch,
    #[error("symplectic matrices need even positive size, got {0}")]
    OddDimension(usize),
    #[error("unsupported modulus {0}")]
    UnsupportedModulus(u64),
    #[error("unsupported genus {0}")]
    UnsupportedGenus(usize),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("{0}")]
    InvalidInput(String),
}
