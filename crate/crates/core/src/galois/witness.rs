use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GaloisError;
use crate::modarith::{crt_combine, factor_degrees, primes_up_to, FpPoly, IntPoly, ResidueValue};

/// A prime at which a polynomial factors with a prescribed degree pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleTypeWitness {
    /// factor degrees, nonincreasing
    pub pattern: Vec<usize>,
    pub prime: u64,
    pub factor_degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusWitnesses {
    pub witnesses: Vec<CycleTypeWitness>,
    /// product of the distinct witness primes
    pub modulus: BigUint,
    /// the pattern list before deduplication, for reporting
    pub requested_patterns: Vec<Vec<usize>>,
}

fn pattern(parts: &[usize], total: usize) -> Vec<usize> {
    let mut p: Vec<usize> = parts.to_vec();
    let used: usize = parts.iter().sum();
    p.extend(std::iter::repeat(1).take(total - used));
    p.sort_unstable_by(|a, b| b.cmp(a));
    p
}

/// The four partitions `2+1+…+1`, `4+1+…+1`, `(2g−2)+1+1`, `2g` of `2g`,
/// in that order. Some coincide for small `g`.
pub fn splitting_patterns_raw(g: usize) -> Result<Vec<Vec<usize>>, GaloisError> {
    if g < 2 {
        return Err(GaloisError::InvalidInput(format!("cycle-type patterns need g ≥ 2, got {g}")));
    }
    let n = 2 * g;
    Ok(vec![pattern(&[2], n), pattern(&[4], n), pattern(&[n - 2], n), vec![n]])
}

/// [`splitting_patterns_raw`] with repeats removed, first occurrence kept.
/// At `g = 2` this is `[[2, 1, 1], [4]]`.
pub fn splitting_patterns(g: usize) -> Result<Vec<Vec<usize>>, GaloisError> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for p in splitting_patterns_raw(g)? {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// `P(T) = T^{deg P} P(1/T)`: palindromic coefficients.
pub fn is_reciprocal(p: &IntPoly) -> bool {
    let c = p.coeffs();
    c.iter().eq(c.iter().rev())
}

/// Factor degrees of `P mod ℓ` when the reduction keeps its degree and is
/// squarefree, so that the degrees are a cycle type of Frobenius.
pub fn squarefree_factor_pattern(p: &IntPoly, ell: u64) -> Option<Vec<usize>> {
    let f = FpPoly::from_bigints(ell, p.coeffs()).ok()?;
    if f.degree() != p.degree() || !f.is_squarefree() {
        return None;
    }
    factor_degrees(&f).ok()
}

/// For each deduplicated pattern, the least prime `ℓ ∈ (C, bound]` with
/// `P mod ℓ` squarefree of that factorization type. The modulus is the CRT
/// modulus of the distinct witness primes.
pub fn cycle_type_witnesses(p: &IntPoly, c: u64, bound: u64) -> Result<ModulusWitnesses, GaloisError> {
    let deg = p.degree().unwrap_or(0);
    if deg % 2 == 1 || deg < 4 || !is_reciprocal(p) {
        return Err(GaloisError::NotReciprocal);
    }
    if bound < c {
        return Err(GaloisError::InvalidInput(format!("bound {bound} is below C = {c}")));
    }
    let g = deg / 2;
    let requested = splitting_patterns_raw(g)?;
    let primes: Vec<u64> = primes_up_to(bound).into_iter().filter(|&l| l > c).collect();
    let mut witnesses = Vec::new();
    for pat in splitting_patterns(g)? {
        let hit = primes
            .par_iter()
            .find_first(|&&ell| squarefree_factor_pattern(p, ell).as_deref() == Some(&pat[..]));
        match hit {
            Some(&ell) => witnesses.push(CycleTypeWitness {
                factor_degrees: squarefree_factor_pattern(p, ell).expect("found above"),
                pattern: pat,
                prime: ell,
            }),
            None => return Err(GaloisError::WitnessNotFound { pattern: pat, bound }),
        }
    }
    let mut distinct: Vec<u64> = witnesses.iter().map(|w| w.prime).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let residues: Vec<ResidueValue> = distinct
        .iter()
        .map(|&l| ResidueValue::from_u64(0, l).expect("positive modulus"))
        .collect();
    let modulus = crt_combine(&residues).expect("distinct primes are coprime").modulus().clone();
    Ok(ModulusWitnesses {
        witnesses,
        modulus,
        requested_patterns: requested,
    })
}

/// Convenience for callers holding `i64` coefficients.
pub fn intpoly(coeffs: &[i64]) -> IntPoly {
    IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}
