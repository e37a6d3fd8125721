//! Large-sieve arithmetic, Monte-Carlo Frobenius statistics over F_p, and an
//! empirical density scan over coefficient boxes.

mod density;
mod family;
mod sample;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modarith::{is_prime, primes_up_to};

pub use density::{density_scan, DensityReport, DensityScanConfig, EllCounts, MemberRow, MemberStatus, WITNESS_POLICY};
pub use family::FamilySpec;
pub use sample::{equidistribution_sample, SamplePredicate, SampleReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SieveError {
    #[error("the family has no smooth member of height ≤ {0}")]
    EmptyFamily(f64),
    #[error("invalid sieve parameters: {0}")]
    InvalidParams(String),
    #[error("invalid family template: {0}")]
    InvalidFamily(String),
}

/// Parameters of the large sieve over Q.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SieveParams {
    pub b: f64,
    pub q: f64,
    pub r: u32,
    pub degree: u32,
    /// `ω_p` for the primes where it is nonzero
    pub omega: BTreeMap<u64, f64>,
}

impl SieveParams {
    pub fn new(b: f64, q: f64, r: u32, omega: BTreeMap<u64, f64>) -> Result<Self, SieveError> {
        let params = Self {
            b,
            q,
            r,
            degree: 1,
            omega,
        };
        params.validate()?;
        Ok(params)
    }

    /// `ω_p = value` for every prime `p ≤ up_to`.
    pub fn uniform_omega(value: f64, up_to: u64) -> BTreeMap<u64, f64> {
        primes_up_to(up_to).into_iter().map(|p| (p, value)).collect()
    }

    pub fn validate(&self) -> Result<(), SieveError> {
        if !(self.b >= 1.0) {
            return Err(SieveError::InvalidParams(format!("B must be ≥ 1, got {}", self.b)));
        }
        if !(self.q > 0.0) || !self.q.is_finite() {
            return Err(SieveError::InvalidParams(format!("Q must be positive, got {}", self.q)));
        }
        if self.r == 0 || self.degree == 0 {
            return Err(SieveError::InvalidParams("r and degree must be positive".into()));
        }
        for (&p, &w) in &self.omega {
            if !is_prime(p) {
                return Err(SieveError::InvalidParams(format!("ω is keyed by primes, got {p}")));
            }
            if !(0.0..1.0).contains(&w) {
                return Err(SieveError::InvalidParams(format!("ω_{p} = {w} is outside [0, 1)")));
            }
        }
        Ok(())
    }
}

/// `L(Q) = Σ_{a ≤ Q squarefree} ∏_{p | a} ω_p / (1 − ω_p)`, including `a = 1`.
pub fn large_sieve_l(params: &SieveParams) -> f64 {
    let limit = params.q.floor().max(0.0) as u64;
    if limit == 0 {
        return 0.0;
    }
    let weights: Vec<(u64, f64)> = params
        .omega
        .iter()
        .filter(|&(&p, &w)| p <= limit && w > 0.0)
        .map(|(&p, &w)| (p, w / (1.0 - w)))
        .collect();
    // depth-first over products of increasing primes
    fn walk(weights: &[(u64, f64)], start: usize, a: u64, term: f64, limit: u64) -> f64 {
        let mut total = term;
        for i in start..weights.len() {
            let (p, w) = weights[i];
            match a.checked_mul(p) {
                Some(next) if next <= limit => total += walk(weights, i + 1, next, term * w, limit),
                _ => break,
            }
        }
        total
    }
    walk(&weights, 0, 1, 1.0, limit)
}

/// `(B^{degree·r} + Q^{2r}) / L(Q)`, the bound without its absolute constant.
pub fn sieve_bound(params: &SieveParams) -> Result<f64, SieveError> {
    params.validate()?;
    let l = large_sieve_l(params);
    if !(l > 0.0) {
        return Err(SieveError::InvalidParams("L(Q) must be positive".into()));
    }
    let e = (params.degree * params.r) as i32;
    Ok((params.b.powi(e) + params.q.powi(2 * params.r as i32)) / l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(q: f64, omega: BTreeMap<u64, f64>) -> SieveParams {
        SieveParams::new(10.0, q, 1, omega).unwrap()
    }

    /// Sum over a = 1..Q directly, testing squarefreeness by trial division.
    fn brute_l(q: u64, omega: &BTreeMap<u64, f64>) -> f64 {
        let mut total = 0.0;
        'a: for a in 1..=q {
            let mut rest = a;
            let mut term = 1.0;
            let mut d = 2;
            while rest > 1 {
                if rest % d == 0 {
                    rest /= d;
                    if rest % d == 0 {
                        continue 'a;
                    }
                    let w = omega.get(&d).copied().unwrap_or(0.0);
                    term *= w / (1.0 - w);
                }
                d += 1;
            }
            total += term;
        }
        total
    }

    #[test]
    fn examples() {
        assert_eq!(large_sieve_l(&params(50.0, BTreeMap::new())), 1.0);
        let half = params(30.0, SieveParams::uniform_omega(0.5, 30));
        assert_eq!(large_sieve_l(&half), 19.0);
        let two = params(2.0, BTreeMap::from([(2, 1.0 / 3.0)]));
        assert!((large_sieve_l(&two) - 1.5).abs() < 1e-15);
        let one = SieveParams::new(1.0, 1.0, 1, BTreeMap::new()).unwrap();
        assert_eq!(sieve_bound(&one).unwrap(), 2.0);
        let b = sieve_bound(&half).unwrap();
        assert!((b - 910.0 / 19.0).abs() < 1e-12);
        assert!((b - 47.89).abs() < 0.01);
    }

    #[test]
    fn doubling_q_scales_the_q_term() {
        let omega = SieveParams::uniform_omega(0.25, 7);
        let a = SieveParams::new(1.0, 8.0, 2, omega.clone()).unwrap();
        let b = SieveParams::new(1.0, 16.0, 2, omega).unwrap();
        let (la, lb) = (large_sieve_l(&a), large_sieve_l(&b));
        let qa = sieve_bound(&a).unwrap() * la - 1.0;
        let qb = sieve_bound(&b).unwrap() * lb - 1.0;
        assert!((qb / qa - 16.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_params() {
        assert!(SieveParams::new(0.5, 1.0, 1, BTreeMap::new()).is_err());
        assert!(SieveParams::new(1.0, 1.0, 1, BTreeMap::from([(4, 0.1)])).is_err());
        assert!(SieveParams::new(1.0, 1.0, 1, BTreeMap::from([(5, 1.0)])).is_err());
    }

    #[test]
    fn brute_force_agreement_up_to_100() {
        let omegas = [
            SieveParams::uniform_omega(0.5, 100),
            primes_up_to(100).into_iter().map(|p| (p, 1.0 / p as f64)).collect(),
            primes_up_to(100).into_iter().map(|p| (p, ((p % 7) as f64) / 8.0)).collect(),
        ];
        for omega in &omegas {
            for q in 1..=100u64 {
                let fast = large_sieve_l(&params(q as f64, omega.clone()));
                let slow = brute_l(q, omega);
                assert!((fast - slow).abs() <= 1e-12 * slow.max(1.0), "q={q}");
            }
        }
        // with dyadic weights the sums are exact in floating point
        for q in 1..=100u64 {
            let omega = SieveParams::uniform_omega(0.5, 100);
            assert_eq!(large_sieve_l(&params(q as f64, omega.clone())), brute_l(q, &omega));
        }
    }

    proptest! {
        #[test]
        fn monotone(q in 1u64..200, w in 0.0f64..0.9, bump in 0.0f64..0.09) {
            let base = SieveParams::uniform_omega(w, 200);
            let l = large_sieve_l(&params(q as f64, base.clone()));
            prop_assert!(l >= 1.0);
            prop_assert!(large_sieve_l(&params(q as f64 + 1.0, base.clone())) >= l);
            let bigger = SieveParams::uniform_omega(w + bump, 200);
            prop_assert!(large_sieve_l(&params(q as f64, bigger)) >= l - 1e-12);
        }
    }
}
