use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FamilySpec, SieveError};
use crate::curves::{good_reduction_check, weil_polynomial, HyperellipticCurve};
use crate::galois::{squarefree_factor_pattern, weil_galois_is_d4};
use crate::modarith::is_prime;

/// Conjugacy-invariant condition on Frobenius tested per sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplePredicate {
    /// the Frobenius quartic is irreducible with Galois group D4
    D4,
    /// `f_v mod ell` is squarefree with exactly these factor degrees
    Pattern { ell: u64, degrees: Vec<usize> },
    Always,
    Never,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub p: u64,
    pub samples: usize,
    pub hits: usize,
    pub fraction: f64,
    /// draws rejected because the reduction mod p was singular
    pub resampled: usize,
    pub seed: u64,
}

/// Fraction of members of the family over F_p satisfying the predicate.
///
/// Free coefficients are drawn uniformly from F_p; draws whose model is
/// singular mod p are redrawn. Draws come from one seeded stream, so the
/// result depends only on the inputs and not on scheduling.
pub fn equidistribution_sample(
    family: &FamilySpec,
    p: u64,
    predicate: &SamplePredicate,
    samples: usize,
    seed: u64,
) -> Result<SampleReport, SieveError> {
    if !is_prime(p) || p == 2 {
        return Err(SieveError::InvalidParams(format!("p must be an odd prime, got {p}")));
    }
    if samples == 0 {
        return Err(SieveError::InvalidParams("samples must be at least 1".into()));
    }
    if family.genus() > 2 {
        return Err(SieveError::InvalidFamily("genus above 2".into()));
    }
    if let Some(lc) = family.slots()[family.degree()] {
        if lc.rem_euclid(p as i64) == 0 {
            return Err(SieveError::InvalidFamily(format!("leading coefficient vanishes mod {p}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut curves = Vec::with_capacity(samples);
    let mut resampled = 0;
    let max_draws = samples.saturating_mul(1000).max(10_000);
    let mut draws = 0;
    while curves.len() < samples {
        draws += 1;
        if draws > max_draws {
            return Err(SieveError::InvalidFamily(format!("no smooth member mod {p} found")));
        }
        let values: Vec<i64> = (0..family.free_count()).map(|_| rng.gen_range(0..p as i64)).collect();
        let coeffs: Vec<i64> = family
            .instantiate(&values)
            .into_iter()
            .map(|c| c.rem_euclid(p as i64))
            .collect();
        match HyperellipticCurve::new(coeffs) {
            Ok(c) if c.degree() == family.degree() && good_reduction_check(&c, p) => curves.push(c),
            _ => resampled += 1,
        }
    }
    let hits = curves
        .par_iter()
        .map(|c| {
            if matches!(predicate, SamplePredicate::Always) {
                return true;
            }
            if matches!(predicate, SamplePredicate::Never) {
                return false;
            }
            let w = weil_polynomial(c, p).expect("smooth mod p by construction");
            match predicate {
                SamplePredicate::D4 => matches!(weil_galois_is_d4(&w), Ok((true, _))),
                SamplePredicate::Pattern { ell, degrees } => {
                    squarefree_factor_pattern(&w.to_intpoly(), *ell).as_deref() == Some(&degrees[..])
                }
                SamplePredicate::Always | SamplePredicate::Never => unreachable!(),
            }
        })
        .filter(|&h| h)
        .count();
    Ok(SampleReport {
        p,
        samples,
        hits,
        fraction: hits as f64 / samples as f64,
        resampled,
        seed,
    })
}
