use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FamilySpec, SieveError};
use crate::curves::{good_reduction_check, weil_polynomial, HyperellipticCurve, WeilPolynomial};
use crate::galois::{splitting_patterns, squarefree_factor_pattern};
use crate::modarith::{is_prime, primes_up_to};

/// Identifier of the rule deciding "witnessed-maximal", recorded in reports.
pub const WITNESS_POLICY: &str = "irreducible-plus-second-pattern/v1";
const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityScanConfig {
    pub b: f64,
    pub ells: Vec<u64>,
    pub p_max: u64,
    pub seed: u64,
    /// largest number of members scanned; bigger boxes are subsampled
    pub member_budget: usize,
    pub parallel: bool,
}

impl DensityScanConfig {
    pub fn new(b: f64, ells: Vec<u64>, p_max: u64, seed: u64) -> Self {
        Self {
            b,
            ells,
            p_max,
            seed,
            member_budget: 50_000,
            parallel: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberStatus {
    Witnessed,
    Unknown,
}

/// One (member, ℓ) outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberRow {
    pub free: Vec<i64>,
    pub ell: u64,
    pub status: MemberStatus,
    /// least prime where `f_v mod ℓ` is irreducible
    pub irreducible_prime: Option<u64>,
    /// least prime where `f_v mod ℓ` is squarefree of the second pattern
    pub pattern_prime: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllCounts {
    pub ell: u64,
    pub scanned: usize,
    pub witnessed: usize,
    pub unknown: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub schema_version: u32,
    pub family: String,
    pub b: f64,
    pub ells: Vec<u64>,
    pub p_max: u64,
    pub seed: u64,
    pub witness_policy: String,
    /// number of integer points in the box `[−B, B]^k`
    pub box_size: u128,
    pub sampled: bool,
    pub skipped_singular: usize,
    pub counts: Vec<EllCounts>,
    pub members: Vec<MemberRow>,
}

impl DensityReport {
    pub fn fraction(&self, ell: u64) -> Option<f64> {
        self.counts.iter().find(|c| c.ell == ell).map(|c| c.fraction)
    }
}

/// Row-major indices into the box, all of them or a seeded uniform sample
/// without replacement (Floyd's algorithm), in increasing order.
fn member_indices(total: u128, budget: usize, seed: u64) -> (Vec<u128>, bool) {
    if total <= budget as u128 {
        return ((0..total).collect(), false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = BTreeSet::new();
    for j in total - budget as u128..total {
        let t = rng.gen_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    (chosen.into_iter().collect(), true)
}

fn decode(mut idx: u128, k: usize, bound: i64) -> Vec<i64> {
    let side = (2 * bound + 1) as u128;
    let mut out = vec![0i64; k];
    for slot in out.iter_mut().rev() {
        *slot = (idx % side) as i64 - bound;
        idx /= side;
    }
    out
}

struct MemberScan<'a> {
    curve: &'a HyperellipticCurve,
    primes: &'a [u64],
    cache: HashMap<u64, Option<WeilPolynomial>>,
}

impl MemberScan<'_> {
    fn weil(&mut self, p: u64) -> Option<&WeilPolynomial> {
        let curve = self.curve;
        self.cache
            .entry(p)
            .or_insert_with(|| good_reduction_check(curve, p).then(|| weil_polynomial(curve, p).ok()).flatten())
            .as_ref()
    }

    fn row(&mut self, free: &[i64], ell: u64, full: &[usize], second: &[usize]) -> MemberRow {
        let mut irreducible_prime = None;
        let mut pattern_prime = None;
        let primes = self.primes;
        for &p in primes {
            if p == ell {
                continue;
            }
            let Some(w) = self.weil(p) else { continue };
            let pat = squarefree_factor_pattern(&w.to_intpoly(), ell);
            if irreducible_prime.is_none() && pat.as_deref() == Some(full) {
                irreducible_prime = Some(p);
            }
            if pattern_prime.is_none() && pat.as_deref() == Some(second) {
                pattern_prime = Some(p);
            }
            if irreducible_prime.is_some() && pattern_prime.is_some() {
                break;
            }
        }
        let status = if irreducible_prime.is_some() && pattern_prime.is_some() {
            MemberStatus::Witnessed
        } else {
            MemberStatus::Unknown
        };
        MemberRow {
            free: free.to_vec(),
            ell,
            status,
            irreducible_prime,
            pattern_prime,
        }
    }
}

/// Scans members `u` with `‖u‖ ≤ B` and marks each (u, ℓ) as witnessed when
/// some good `p ≤ P_max`, `p ≠ ℓ`, has `f_v mod ℓ` irreducible and some other
/// such prime has `f_v mod ℓ` squarefree with the second splitting pattern.
/// Everything else is "unknown", never "non-maximal".
///
/// The height of a member is that of the projective point `(1 : u)`, which
/// is `max(1, maxᵢ |uᵢ|)`, so the members are the box `[−⌊B⌋, ⌊B⌋]^k`.
pub fn density_scan(family: &FamilySpec, config: &DensityScanConfig) -> Result<DensityReport, SieveError> {
    if family.genus() != 2 {
        return Err(SieveError::InvalidFamily(format!(
            "density scans support genus 2 only, got genus {}",
            family.genus()
        )));
    }
    if config.ells.is_empty() || config.ells.iter().any(|&l| !is_prime(l) || l == 2) {
        return Err(SieveError::InvalidParams("ℓ-set must be nonempty odd primes".into()));
    }
    if config.member_budget == 0 {
        return Err(SieveError::InvalidParams("member budget must be positive".into()));
    }
    if !(config.b >= 0.0) {
        return Err(SieveError::EmptyFamily(config.b));
    }
    let patterns = splitting_patterns(family.genus()).expect("genus 2");
    let full = patterns.last().expect("nonempty").clone();
    let second = patterns.iter().find(|p| **p != full).expect("two patterns").clone();

    let bound = config.b.floor() as i64;
    let k = family.free_count();
    let total = ((2 * bound + 1) as u128)
        .checked_pow(k as u32)
        .ok_or_else(|| SieveError::InvalidParams("coefficient box too large".into()))?;
    let (indices, sampled) = member_indices(total, config.member_budget, config.seed);
    let primes: Vec<u64> = primes_up_to(config.p_max).into_iter().filter(|&p| p > 2).collect();

    let scan = |idx: &u128| -> Option<Vec<MemberRow>> {
        let free = decode(*idx, k, bound);
        let curve = HyperellipticCurve::new(family.instantiate(&free)).ok()?;
        let mut m = MemberScan {
            curve: &curve,
            primes: &primes,
            cache: HashMap::new(),
        };
        Some(config.ells.iter().map(|&ell| m.row(&free, ell, &full, &second)).collect())
    };
    let results: Vec<Option<Vec<MemberRow>>> = if config.parallel {
        indices.par_iter().map(scan).collect()
    } else {
        indices.iter().map(scan).collect()
    };

    let skipped_singular = results.iter().filter(|r| r.is_none()).count();
    let members: Vec<MemberRow> = results.into_iter().flatten().flatten().collect();
    if members.is_empty() {
        return Err(SieveError::EmptyFamily(config.b));
    }
    let counts = config
        .ells
        .iter()
        .map(|&ell| {
            let rows = members.iter().filter(|r| r.ell == ell);
            let (scanned, witnessed) = rows.fold((0, 0), |(s, w), r| {
                (s + 1, w + usize::from(r.status == MemberStatus::Witnessed))
            });
            EllCounts {
                ell,
                scanned,
                witnessed,
                unknown: scanned - witnessed,
                fraction: witnessed as f64 / scanned as f64,
            }
        })
        .collect();
    Ok(DensityReport {
        schema_version: SCHEMA_VERSION,
        family: family.to_template(),
        b: config.b,
        ells: config.ells.clone(),
        p_max: config.p_max,
        seed: config.seed,
        witness_policy: WITNESS_POLICY.to_string(),
        box_size: total,
        sampled,
        skipped_singular,
        counts,
        members,
    })
}
