//! Computational tools for monodromy and Galois images of hyperelliptic
//! Jacobians.
//!
//! * [`modarith`]: residues, CRT, polynomials over F_p (factorization,
//!   irreducibility) and over Z.
//! * [`symplectic`]: GSp/Sp matrices over Z/mZ, group orders, the Lie
//!   algebra sp_2g and its commutator span, and the first-order commutator
//!   congruence.
//! * [`grouplab`]: closure enumeration of finite matrix groups, product
//!   closure tests, lifting and perfectness checks.
//! * [`curves`]: hyperelliptic curves, point counts over F_{p^r} and Weil
//!   polynomials.
//! * [`galois`]: quartic Galois groups over Q, the exceptional-prime norm,
//!   and cycle-type witness primes.
//! * [`certify`]: the explicit genus-2 surjectivity bound and conditional
//!   certificates.
//! * [`sieve`]: the large-sieve sum, Frobenius sampling over F_p and
//!   witnessed-maximal density scans.
//!
//! Every randomized routine takes an explicit seed and gives the same answer
//! with or without the rayon pool.

pub mod certify;
pub mod curves;
pub mod galois;
pub mod grouplab;
pub mod modarith;
pub mod numeric;
pub mod sieve;
pub mod symplectic;
