//! Explicit surjectivity certificates for Jacobians of genus-2 curves over Q,
//! plus the naive projective height and an affine-in-log height proxy.
//!
//! The bound `b(d, g, h) = ((14g)^{64g²} · d · max(h, log d, 1)²)^{α(g)}` with
//! `α(g) = 2¹⁰g³` is astronomically large, so everything here lives in natural
//! log space and `b` itself is never formed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{good_reduction_check, weil_polynomial, CurveError, HyperellipticCurve};
use crate::galois::{exceptional_prime_norm, weil_galois_is_d4, QuarticGroup};
use crate::modarith::primes_up_to;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("no D4 prime of good reduction up to {0}")]
    NoD4PrimeFound(u64),
    #[error("certificates need a genus-2 curve, got genus {0}")]
    NotGenus2(usize),
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// `α(g) = 2¹⁰ g³`.
pub fn alpha(g: u64) -> u64 {
    1024 * g * g * g
}

/// `ln b(d, g, h) = α(g)·(64g²·ln(14g) + ln d + 2·ln max(h, ln d, 1))`.
pub fn log_b(d: u64, g: u64, h: f64) -> f64 {
    let d = d.max(1) as f64;
    let g_f = g as f64;
    let clamp = h.max(d.ln()).max(1.0);
    alpha(g) as f64 * (64.0 * g_f * g_f * (14.0 * g_f).ln() + d.ln() + 2.0 * clamp.ln())
}

/// Height of a point of projective space over Q: clear denominators, divide
/// by the gcd, take the largest absolute coordinate.
pub fn height_naive(point: &[BigRational]) -> Result<BigInt, CertifyError> {
    if point.iter().all(Zero::is_zero) {
        return Err(CertifyError::ZeroPoint);
    }
    let lcm = point.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = point.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Ok(ints.iter().map(|x| (x / &gcd).abs()).max().expect("nonempty"))
}

/// [`height_naive`] for integer coordinates.
pub fn height_naive_int(point: &[i64]) -> Result<BigInt, CertifyError> {
    let q: Vec<BigRational> = point.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    height_naive(&q)
}

/// `c₀·ln(Ht) + d₀`, the stand-in upper bound for the Faltings height.
pub fn faltings_proxy(ht: f64, c0: f64, d0: f64) -> Result<f64, CertifyError> {
    if !(ht >= 1.0) || !(c0 >= 0.0) {
        return Err(CertifyError::InvalidInput(format!("need Ht ≥ 1 and c0 ≥ 0, got Ht={ht}, c0={c0}")));
    }
    Ok(c0 * ht.ln() + d0)
}

/// Where the height bound in a certificate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightProvenance {
    Supplied,
    FaltingsProxy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateAssumptions {
    /// `End(A) = Z` over an algebraic closure is asserted, not verified.
    pub endomorphisms_are_z: bool,
    pub height_bound: f64,
    pub height_provenance: HeightProvenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurjectivityCertificate {
    pub curve: Vec<i64>,
    pub witness_prime: u64,
    pub q_v: u64,
    pub galois_label: QuarticGroup,
    /// `f_v` lowest degree first
    pub weil_polynomial: Vec<i128>,
    /// `d = 2·[K:Q]` with `K = Q`
    pub d: u64,
    pub ln_b: f64,
    pub ln_threshold: f64,
    pub assumptions: CertificateAssumptions,
    /// primes dividing the norm of `y² − xz` at the witness prime (trial division budget)
    pub exceptional_primes: Vec<u64>,
    pub statement: String,
}

/// `max(ln_b / 4, 8·ln(2q))`.
pub fn ln_threshold(ln_b: f64, q_v: u64) -> f64 {
    (ln_b / 4.0).max(8.0 * (2.0 * q_v as f64).ln())
}

/// Scans good primes `v ≤ limit` for the least one whose Frobenius quartic has
/// group D4, and emits the conditional certificate at that prime.
pub fn certify_surface(
    curve: &HyperellipticCurve,
    h_bound: f64,
    provenance: HeightProvenance,
    prime_search_limit: u64,
) -> Result<SurjectivityCertificate, CertifyError> {
    if curve.genus() != 2 {
        return Err(CertifyError::NotGenus2(curve.genus()));
    }
    if !(h_bound > 0.0) {
        return Err(CertifyError::InvalidInput(format!("height bound must be positive, got {h_bound}")));
    }
    let primes: Vec<u64> = primes_up_to(prime_search_limit)
        .into_iter()
        .filter(|&p| good_reduction_check(curve, p))
        .collect();
    let hit = primes
        .par_iter()
        .map(|&p| -> Result<Option<_>, CertifyError> {
            let w = weil_polynomial(curve, p)?;
            Ok(match weil_galois_is_d4(&w) {
                Ok((true, label)) => Some((p, w, label)),
                _ => None,
            })
        })
        .find_first(|r| !matches!(r, Ok(None)));
    let (v, w, label) = match hit {
        Some(r) => r?.expect("filtered to hits"),
        None => return Err(CertifyError::NoD4PrimeFound(prime_search_limit)),
    };
    let d = 2;
    let ln_b = log_b(d, 4, 2.0 * h_bound);
    let threshold = ln_threshold(ln_b, v);
    let exceptional_primes = exceptional_prime_norm(&w).map(|n| n.prime_divisors).unwrap_or_default();
    let statement = format!(
        "assuming End(A) = Z, the l-adic representation of Jac(C) surjects onto GSp4(Z_l) \
         for every prime l with ln l > {threshold}"
    );
    Ok(SurjectivityCertificate {
        curve: curve.coeffs().to_vec(),
        witness_prime: v,
        q_v: v,
        galois_label: label.group,
        weil_polynomial: w.coeffs().to_vec(),
        d,
        ln_b,
        ln_threshold: threshold,
        assumptions: CertificateAssumptions {
            endomorphisms_are_z: true,
            height_bound: h_bound,
            height_provenance: provenance,
        },
        exceptional_primes,
        statement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(1), 1024);
        assert_eq!(alpha(2), 8192);
        assert_eq!(alpha(4), 65536);
    }

    #[test]
    fn log_b_examples() {
        let expected = 2_097_152.0 * 28f64.ln();
        assert!(rel(log_b(1, 2, 1.0), expected) < 1e-9);
        assert!((log_b(1, 2, 1.0) - 6.9882e6).abs() < 1e2);
        assert_eq!(log_b(1, 2, 0.3), log_b(1, 2, 1.0));
        // closed form on a grid, written out independently
        for d in [1u64, 2, 4] {
            for g in [1u64, 2, 4] {
                for h in [0.5, 1.0, 10.0] {
                    let (df, gf) = (d as f64, g as f64);
                    let m = [h, df.ln(), 1.0].into_iter().fold(f64::MIN, f64::max);
                    let direct = 1024.0 * gf.powi(3) * (gf * gf * 64.0 * (14.0 * gf).ln() + df.ln() + 2.0 * m.ln());
                    assert!(rel(log_b(d, g, h), direct) < 1e-9);
                }
            }
        }
        assert!(log_b(2, 2, 5.0) >= log_b(1, 2, 5.0));
        assert!(log_b(2, 2, 6.0) >= log_b(2, 2, 5.0));
    }

    #[test]
    fn threshold_terms() {
        assert_eq!(6f64.powi(8), 1_679_616.0);
        assert!((ln_threshold(0.0, 3) - 8.0 * 6f64.ln()).abs() < 1e-12);
        let ln_b = log_b(2, 4, 2.0);
        assert!(ln_b > 1e6);
        assert!(ln_b / 4.0 > 8.0 * (2.0 * 1e6f64).ln());
        assert_eq!(ln_threshold(ln_b, 1_000_003), ln_b / 4.0);
    }

    #[test]
    fn heights() {
        assert_eq!(height_naive_int(&[3, 4]).unwrap(), BigInt::from(4));
        assert_eq!(height_naive_int(&[0, 1]).unwrap(), BigInt::from(1));
        assert_eq!(height_naive_int(&[6, 4]).unwrap(), BigInt::from(3));
        assert_eq!(height_naive_int(&[0, 0]), Err(CertifyError::ZeroPoint));
        let half = BigRational::new(1.into(), 2.into());
        let third = BigRational::new((-1).into(), 3.into());
        // (1/2 : −1/3) = (3 : −2)
        assert_eq!(height_naive(&[half, third]).unwrap(), BigInt::from(3));
    }

    #[test]
    fn proxy() {
        assert!((faltings_proxy(std::f64::consts::E, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(faltings_proxy(1.0, 7.0, 2.5).unwrap(), 2.5);
        assert!(faltings_proxy(10.0, 1.0, 0.0).unwrap() < faltings_proxy(11.0, 1.0, 0.0).unwrap());
        assert!(faltings_proxy(0.5, 1.0, 0.0).is_err());
    }

    #[test]
    fn certificate_error_paths() {
        let elliptic = HyperellipticCurve::new(vec![1, 0, 0, 1]).unwrap();
        assert_eq!(
            certify_surface(&elliptic, 1.0, HeightProvenance::Supplied, 100),
            Err(CertifyError::NotGenus2(1))
        );
        let c = HyperellipticCurve::new(vec![1, -1, 0, 0, 0, 1]).unwrap();
        assert_eq!(
            certify_surface(&c, 1.0, HeightProvenance::Supplied, 2),
            Err(CertifyError::NoD4PrimeFound(2))
        );
    }

    #[test]
    fn certificate_is_deterministic_and_consistent() {
        let c = HyperellipticCurve::new(vec![1, -1, 0, 0, 0, 1]).unwrap();
        let a = certify_surface(&c, 1.0, HeightProvenance::Supplied, 200).unwrap();
        let b = certify_surface(&c, 1.0, HeightProvenance::Supplied, 200).unwrap();
        assert_eq!(a, b);
        assert!(good_reduction_check(&c, a.witness_prime));
        assert_eq!(a.galois_label, QuarticGroup::D4);
        assert!(a.ln_threshold >= a.ln_b / 4.0);
        assert!(a.ln_threshold >= 8.0 * (2.0 * a.q_v as f64).ln());
        assert_eq!(a.ln_b, log_b(2, 4, 2.0));
    }
}
