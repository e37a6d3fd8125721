//! Fixed inputs shared by the benchmarks in `benches/`.

use monodromy_core::curves::HyperellipticCurve;
use monodromy_core::modarith::FpPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random genus-2 curves with coefficients in `[-20, 20]`.
pub fn genus2_curves(n: usize, seed: u64) -> Vec<HyperellipticCurve> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| HyperellipticCurve::random(2, 20, &mut rng)).collect()
}

/// Seeded random monic polynomials of the given degree over F_p.
pub fn monic_polys(p: u64, degree: usize, n: usize, seed: u64) -> Vec<FpPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut c: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..p)).collect();
            c.push(1);
            FpPoly::new(p, c).expect("prime modulus")
        })
        .collect()
}
