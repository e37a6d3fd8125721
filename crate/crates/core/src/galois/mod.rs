//! Galois groups of quartics, the Weil-quartic D4 test, the norm of
//! `y² − xz` over root triples, and cycle-type witness primes.

mod norm;
mod quartic;
mod witness;

use thiserror::Error;

use crate::curves::WeilPolynomial;

pub use norm::{ExceptionalNorm, FACTOR_BUDGET};
pub use quartic::{quartic_galois_group, QuarticGaloisLabel, QuarticGroup};
pub use witness::{
    cycle_type_witnesses, intpoly, is_reciprocal, splitting_patterns, splitting_patterns_raw,
    squarefree_factor_pattern, CycleTypeWitness, ModulusWitnesses,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("expected a quartic, got degree {0}")]
    NotQuartic(usize),
    #[error("polynomial is not reciprocal")]
    NotReciprocal,
    #[error("no prime up to {bound} realizes the pattern {pattern:?}")]
    WitnessNotFound { pattern: Vec<usize>, bound: u64 },
    #[error("rounding window stayed above 1/4 at the maximum working precision")]
    PrecisionFailure,
    #[error("Galois group is {0}, not D4")]
    NotD4(QuarticGroup),
    #[error("{0}")]
    InvalidInput(String),
}

/// Classifies a genus-2 Weil polynomial. The group is always a subgroup of D4
/// for a genuine Weil quartic, so the label lies in {D4, C4, V4}.
pub fn weil_galois_is_d4(w: &WeilPolynomial) -> Result<(bool, QuarticGaloisLabel), GaloisError> {
    if w.genus() != 2 {
        return Err(GaloisError::NotQuartic(2 * w.genus()));
    }
    let label = quartic_galois_group(&w.to_intpoly())?;
    Ok((label.group == QuarticGroup::D4, label))
}

/// `∏ (y² − xz)` over the 24 ordered triples `(x, y, z)` of distinct roots
/// of a D4 Weil quartic, with its prime divisors below [`FACTOR_BUDGET`].
pub fn exceptional_prime_norm(w: &WeilPolynomial) -> Result<ExceptionalNorm, GaloisError> {
    let (is_d4, label) = weil_galois_is_d4(w)?;
    if !is_d4 {
        return Err(GaloisError::NotD4(label.group));
    }
    let (value, precision_bits) = norm::certified_triple_norm(&w.to_intpoly())?;
    let (prime_divisors, cofactor) = norm::small_prime_divisors(&value);
    Ok(ExceptionalNorm {
        value,
        prime_divisors,
        cofactor,
        precision_bits,
    })
}
