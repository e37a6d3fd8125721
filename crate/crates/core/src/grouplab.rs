//! Finite-truncation experiments: subgroup closure, products of groups
//! with surjective projections, lifting from Sp(Z/ℓ) to Sp(Z/ℓ^k), and perfectness.

use std::hash::Hash;

use indexmap::IndexSet;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::symplectic::{
    group_order, random_sp_element, sp_generators, sp_order_prime_power, GroupKind, Matrix,
    MatrixCodec, SympMatrix, SymplecticError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupLabError {
    #[error("closure exceeded the element budget of {cap} (stopped at {partial} elements)")]
    CapExceeded { cap: usize, partial: usize },
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureOptions {
    pub cap: usize,
    /// Shard each frontier across the rayon pool. The result is the same
    /// either way; insertion into the element set stays sequential.
    pub parallel: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            cap: 2_000_000,
            parallel: true,
        }
    }
}

impl ClosureOptions {
    pub fn with_cap(cap: usize) -> Self {
        Self {
            cap,
            ..Self::default()
        }
    }
}

/// A finite group given by its enumerated elements; index 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroupHandle<T: Hash + Eq> {
    elements: IndexSet<T>,
}

impl<T: Hash + Eq + Clone> FiniteGroupHandle<T> {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> &T {
        &self.elements[0]
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elements.contains(x)
    }

    pub fn elements(&self) -> impl Iterator<Item = &T> {
        self.elements.iter()
    }

    pub fn element(&self, i: usize) -> &T {
        &self.elements[i]
    }
}

/// Breadth-first closure of `generators` under `multiply`.
///
/// Right-multiplying by generators from the identity reaches the generated
/// monoid, which is the generated group because everything is finite.
pub fn closure<T, F>(
    generators: &[T],
    identity: T,
    multiply: F,
    opts: ClosureOptions,
) -> Result<FiniteGroupHandle<T>, GroupLabError>
where
    T: Clone + Hash + Eq + Send + Sync,
    F: Fn(&T, &T) -> T + Sync,
{
    let cap = opts.cap.max(1);
    let mut elements = IndexSet::new();
    elements.insert(identity);
    let mut start = 0;
    while start < elements.len() {
        let end = elements.len();
        let frontier: Vec<&T> = (start..end).map(|i| &elements[i]).collect();
        let products: Vec<T> = if opts.parallel && frontier.len() * generators.len() > 4096 {
            frontier
                .par_iter()
                .flat_map_iter(|x| generators.iter().map(|g| multiply(x, g)))
                .collect()
        } else {
            frontier
                .iter()
                .flat_map(|x| generators.iter().map(|g| multiply(x, g)))
                .collect()
        };
        for p in products {
            if elements.insert(p) && elements.len() > cap {
                return Err(GroupLabError::CapExceeded {
                    cap,
                    partial: elements.len(),
                });
            }
        }
        start = end;
    }
    Ok(FiniteGroupHandle { elements })
}

/// Closure of symplectic matrices, all over the same modulus, via packed codes.
pub fn matrix_closure(
    codec: &MatrixCodec,
    generators: &[Matrix],
    opts: ClosureOptions,
) -> Result<FiniteGroupHandle<u128>, GroupLabError> {
    let codes: Vec<u128> = generators.iter().map(|m| codec.encode(m)).collect();
    closure(&codes, codec.identity(), |a, b| codec.mul(*a, *b), opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub projection_orders: (usize, usize),
    pub projections_surjective: (bool, bool),
    pub closure_order: usize,
    pub full_product_order: usize,
    pub closure_is_full_product: bool,
}

/// Closure of pairs in `G₁ × G₂`, compared against the declared factor orders.
#[allow(clippy::too_many_arguments)]
pub fn product_closure_test<A, B, FA, FB>(
    generators: &[(A, B)],
    identity: (A, B),
    mul_a: FA,
    mul_b: FB,
    order_a: usize,
    order_b: usize,
    opts: ClosureOptions,
) -> Result<ProductReport, GroupLabError>
where
    A: Clone + Hash + Eq + Send + Sync,
    B: Clone + Hash + Eq + Send + Sync,
    FA: Fn(&A, &A) -> A + Sync,
    FB: Fn(&B, &B) -> B + Sync,
{
    let gens_a: Vec<A> = generators.iter().map(|(a, _)| a.clone()).collect();
    let gens_b: Vec<B> = generators.iter().map(|(_, b)| b.clone()).collect();
    let proj_a = closure(&gens_a, identity.0.clone(), &mul_a, opts)?.order();
    let proj_b = closure(&gens_b, identity.1.clone(), &mul_b, opts)?.order();
    let full = closure(
        generators,
        identity,
        |x: &(A, B), y: &(A, B)| (mul_a(&x.0, &y.0), mul_b(&x.1, &y.1)),
        opts,
    )?
    .order();
    Ok(ProductReport {
        projection_orders: (proj_a, proj_b),
        projections_surjective: (proj_a == order_a, proj_b == order_b),
        closure_order: full,
        full_product_order: order_a * order_b,
        closure_is_full_product: full == order_a * order_b,
    })
}

/// Simple quotients recorded for the factor groups used in the product
/// experiments. These are cited facts, not computed: SL₂(F₂) ≅ S₃ has only
/// Z/2; SL₂(F₃) only Z/3; SL₂(F_ℓ) for ℓ ≥ 5 only PSL₂(F_ℓ), whose orders
/// differ for different ℓ.
pub fn simple_quotient_catalogue(ell: u64) -> &'static [&'static str] {
    match ell {
        2 => &["Z/2"],
        3 => &["Z/3"],
        5 => &["PSL2(F5)"],
        7 => &["PSL2(F7)"],
        11 => &["PSL2(F11)"],
        13 => &["PSL2(F13)"],
        _ => &[],
    }
}

/// Product experiment for `SL₂(F_a) × SL₂(F_b)`, generated by the diagonal
/// images of the two unipotent generators of SL₂(Z).
pub fn sl2_product_case(
    a: u64,
    b: u64,
    opts: ClosureOptions,
) -> Result<ProductReport, GroupLabError> {
    let ca = MatrixCodec::new(2, a)?;
    let cb = MatrixCodec::new(2, b)?;
    let gens: Vec<(u128, u128)> = sp_generators(1, a)
        .iter()
        .zip(sp_generators(1, b).iter())
        .map(|(x, y)| (ca.encode(x.matrix()), cb.encode(y.matrix())))
        .collect();
    let order = |ell: u64| -> Result<usize, GroupLabError> {
        Ok(group_order(1, ell, GroupKind::Sp)?
            .to_usize()
            .expect("small order"))
    };
    product_closure_test(
        &gens,
        (ca.identity(), cb.identity()),
        |x, y| ca.mul(*x, *y),
        |x, y| cb.mul(*x, *y),
        order(a)?,
        order(b)?,
        opts,
    )
}

/// The diagonal copy of Z/2 inside Z/2 × Z/2: both projections are onto
/// but the closure has order 2, since the factors share the quotient Z/2.
pub fn diagonal_z2_case(opts: ClosureOptions) -> Result<ProductReport, GroupLabError> {
    product_closure_test(
        &[(1u8, 1u8)],
        (0, 0),
        |x, y| (x + y) % 2,
        |x, y| (x + y) % 2,
        2,
        2,
        opts,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftingWitness {
    pub trial: usize,
    pub generators: Vec<Vec<u64>>,
    pub closure_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftingReport {
    pub g: usize,
    pub ell: u64,
    pub k: u32,
    pub trials: usize,
    /// Draws discarded because their mod-ℓ image was not all of Sp(F_ℓ).
    pub resampled: usize,
    pub expected_order: usize,
    pub counterexample: Option<LiftingWitness>,
}

impl LiftingReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub const LIFTING_ORDER_LIMIT: usize = 10_000_000;
const LIFTING_GENERATORS: usize = 2;

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// For each trial, draws random elements of Sp_{2g}(Z/ℓ^k) whose reductions
/// generate Sp_{2g}(F_ℓ) and checks that they generate Sp_{2g}(Z/ℓ^k).
///
/// Refuses g = 1 with ℓ ∈ {2, 3}: lifting genuinely fails there.
pub fn lifting_check(
    g: usize,
    ell: u64,
    k: u32,
    trials: usize,
    seed: u64,
    opts: ClosureOptions,
) -> Result<LiftingReport, GroupLabError> {
    if g == 0 || (g == 1 && ell < 5) {
        return Err(GroupLabError::UnsupportedSize(format!(
            "lifting is not claimed for g={g}, ell={ell}"
        )));
    }
    let expected = sp_order_prime_power(g, ell, k)?
        .to_usize()
        .filter(|&o| o <= LIFTING_ORDER_LIMIT)
        .ok_or_else(|| {
            GroupLabError::UnsupportedSize(format!("|Sp_{}(Z/{ell}^{k})| exceeds 10^7", 2 * g))
        })?;
    let base_order = group_order(g, ell, GroupKind::Sp)?
        .to_usize()
        .expect("fits");
    let modulus = ell.pow(k);
    let fine = MatrixCodec::new(2 * g, modulus)?;
    let coarse = MatrixCodec::new(2 * g, ell)?;
    let inner = ClosureOptions {
        cap: expected.max(base_order),
        parallel: false,
    };

    let run_trial = |trial: usize| -> Result<(usize, Option<LiftingWitness>), GroupLabError> {
        let mut rng = trial_rng(seed, trial);
        let mut resampled = 0;
        loop {
            let gens: Vec<SympMatrix> = (0..LIFTING_GENERATORS)
                .map(|_| random_sp_element(g, ell, k, &mut rng))
                .collect();
            let codes: Vec<u128> = gens.iter().map(|s| fine.encode(s.matrix())).collect();
            let reduced: Vec<u128> = codes.iter().map(|&c| fine.reduce_to(c, &coarse)).collect();
            let mod_ell = closure(
                &reduced,
                coarse.identity(),
                |a, b| coarse.mul(*a, *b),
                inner,
            )?;
            if mod_ell.order() != base_order {
                resampled += 1;
                continue;
            }
            let full = closure(&codes, fine.identity(), |a, b| fine.mul(*a, *b), inner)?;
            let witness = (full.order() != expected).then(|| LiftingWitness {
                trial,
                generators: gens.iter().map(|s| s.matrix().entries().to_vec()).collect(),
                closure_order: full.order(),
            });
            return Ok((resampled, witness));
        }
    };
    let outcomes: Vec<_> = if opts.parallel {
        (0..trials).into_par_iter().map(run_trial).collect()
    } else {
        (0..trials).map(run_trial).collect()
    };

    let mut resampled = 0;
    let mut counterexample = None;
    for out in outcomes {
        let (r, w) = out?;
        resampled += r;
        if counterexample.is_none() {
            counterexample = w;
        }
    }
    Ok(LiftingReport {
        g,
        ell,
        k,
        trials,
        resampled,
        expected_order: expected,
        counterexample,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectnessReport {
    pub g: usize,
    pub ell: u64,
    pub group_order: usize,
    pub commutator_subgroup_order: usize,
    pub perfect: bool,
    /// All pairs were used (otherwise sampled pairs plus normal closure).
    pub exhaustive: bool,
}

const EXHAUSTIVE_PAIR_LIMIT: usize = 1_000_000;
const SAMPLED_PAIRS: usize = 64;

/// Whether Sp_{2g}(F_ℓ) equals its commutator subgroup.
///
/// Small groups use every commutator `[x, y]`; larger ones use seeded
/// sampled pairs and then the normal closure under the group generators.
/// Either way the computed subgroup lies inside `[G, G]`, so a `true`
/// verdict is always sound.
pub fn perfectness_check(
    g: usize,
    ell: u64,
    seed: u64,
    opts: ClosureOptions,
) -> Result<PerfectnessReport, GroupLabError> {
    let codec = MatrixCodec::new(2 * g, ell)?;
    let gens: Vec<Matrix> = sp_generators(g, ell)
        .into_iter()
        .map(SympMatrix::into_matrix)
        .collect();
    let group = matrix_closure(&codec, &gens, opts)?;
    let order = group.order();
    let inverse = |c: u128| -> u128 {
        let s = SympMatrix::new(codec.decode(c)).expect("group element");
        codec.encode(s.inverse().matrix())
    };
    let commutator = |x: u128, y: u128| -> u128 {
        let xy = codec.mul(x, y);
        codec.mul(codec.mul(xy, inverse(x)), inverse(y))
    };
    let exhaustive = order * order <= EXHAUSTIVE_PAIR_LIMIT;
    let mut comm_gens: Vec<u128> = if exhaustive {
        let mut set = IndexSet::new();
        for x in group.elements() {
            for y in group.elements() {
                set.insert(commutator(*x, *y));
            }
        }
        set.into_iter().collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_PAIRS)
            .map(|_| {
                let x = *group.element(rng.gen_range(0..order));
                let y = *group.element(rng.gen_range(0..order));
                commutator(x, y)
            })
            .collect()
    };
    let mut sub = closure(&comm_gens, codec.identity(), |a, b| codec.mul(*a, *b), opts)?;
    if !exhaustive {
        let group_gens: Vec<u128> = gens.iter().map(|m| codec.encode(m)).collect();
        loop {
            let mut added = false;
            for &h in comm_gens.clone().iter() {
                for &x in &group_gens {
                    let conj = codec.mul(codec.mul(inverse(x), h), x);
                    if !sub.contains(&conj) {
                        comm_gens.push(conj);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
            sub = closure(&comm_gens, codec.identity(), |a, b| codec.mul(*a, *b), opts)?;
        }
    }
    Ok(PerfectnessReport {
        g,
        ell,
        group_order: order,
        commutator_subgroup_order: sub.order(),
        perfect: sub.order() == order,
        exhaustive,
    })
}
