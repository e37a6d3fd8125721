//! Exact modular arithmetic, polynomials over prime fields and CRT.

mod fp;
mod intpoly;
mod residue;

use num_bigint::BigUint;
use thiserror::Error;

pub use fp::{
    add_mod, distinct_degree_factorization, equal_degree_split, factor, factor_degrees, inv_mod,
    is_irreducible, is_prime, legendre, mul_mod, pow_mod, primes_up_to, reduce_bigint, reduce_i64,
    smallest_irreducible, squarefree_decomposition, sub_mod, Factorization, FpPoly,
};
pub use intpoly::{bareiss_determinant, discriminant, resultant, IntPoly};
pub use residue::{crt_combine, ResidueValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModArithError {
    #[error("moduli {left} and {right} are not coprime")]
    NonCoprimeModuli { left: BigUint, right: BigUint },
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("operands live in different residue rings")]
    ModulusMismatch,
    #[error("target modulus does not divide the source modulus")]
    NotADivisor,
}
