use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Matrix, SymplecticError};
use crate::modarith::{is_prime, mul_mod, pow_mod};

/// The block matrix `[[0, id_g], [-id_g, 0]]` over Z.
pub fn standard_form(g: usize) -> Vec<Vec<i64>> {
    let n = 2 * g;
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..g {
        rows[i][g + i] = 1;
        rows[g + i][i] = -1;
    }
    rows
}

/// Ω_{2g} reduced mod m.
pub fn omega(g: usize, modulus: u64) -> Matrix {
    Matrix::from_rows(modulus, &standard_form(g)).expect("square by construction")
}

/// A matrix in GSp_{2g}(Z/mZ) together with its multiplier.
///
/// Construction goes through [`SympMatrix::new`], which checks
/// `SᵀΩS = mult·Ω` with `mult` a unit, so every value of this type is a
/// genuine symplectic similitude.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SympMatrix {
    matrix: Matrix,
    g: usize,
    multiplier: u64,
}

impl SympMatrix {
    pub fn new(matrix: Matrix) -> Result<Self, SymplecticError> {
        let n = matrix.dim();
        if n == 0 || n % 2 == 1 {
            return Err(SymplecticError::OddDimension(n));
        }
        let g = n / 2;
        let m = matrix.modulus();
        let om = omega(g, m);
        let form = matrix.transpose().mul(&om).mul(&matrix);
        // Ω has a 1 at (0, g); read the candidate multiplier there
        let mult = form.get(0, g);
        let is_unit = m == 1 || mult.gcd(&m) == 1;
        if form != om.scale(mult) || !is_unit {
            return Err(SymplecticError::NotSymplectic);
        }
        Ok(Self {
            matrix,
            g,
            multiplier: mult,
        })
    }

    pub fn identity(g: usize, modulus: u64) -> Self {
        Self {
            matrix: Matrix::identity(2 * g, modulus),
            g,
            multiplier: 1 % modulus,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn modulus(&self) -> u64 {
        self.matrix.modulus()
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn is_sp(&self) -> bool {
        self.multiplier == 1 % self.modulus()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.mul(&other.matrix),
            g: self.g,
            multiplier: mul_mod(self.multiplier, other.multiplier, self.modulus()),
        }
    }

    /// `S⁻¹ = mult⁻¹ · Ω⁻¹ Sᵀ Ω` with `Ω⁻¹ = −Ω`.
    pub fn inverse(&self) -> Self {
        let m = self.modulus();
        let om = omega(self.g, m);
        let inv_mult = crate::modarith::inv_mod(self.multiplier, m).unwrap_or(0);
        let matrix = om
            .neg()
            .mul(&self.matrix.transpose())
            .mul(&om)
            .scale(inv_mult);
        Self {
            matrix,
            g: self.g,
            multiplier: inv_mult,
        }
    }

    pub fn det(&self) -> u64 {
        self.matrix.det()
    }

    /// Reduction along GSp(Z/mZ) → GSp(Z/m'Z).
    pub fn reduce_mod(&self, target: u64) -> Result<Self, SymplecticError> {
        let matrix = self.matrix.reduce(target)?;
        Ok(Self {
            matrix,
            g: self.g,
            multiplier: self.multiplier % target,
        })
    }
}

/// The multiplier of `S`, or `NotSymplectic` when `S ∉ GSp`.
pub fn multiplier(s: &Matrix) -> Result<u64, SymplecticError> {
    SympMatrix::new(s.clone()).map(|x| x.multiplier())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    Sp,
    GSp,
}

/// `|Sp_{2g}(F_ℓ)| = ℓ^{g²} ∏_{i=1..g} (ℓ^{2i} − 1)`, times `ℓ − 1` for GSp.
pub fn group_order(g: usize, ell: u64, which: GroupKind) -> Result<BigUint, SymplecticError> {
    if g == 0 {
        return Err(SymplecticError::UnsupportedGenus(g));
    }
    if !is_prime(ell) {
        return Err(SymplecticError::NotPrime(ell));
    }
    let l = BigUint::from(ell);
    let mut order = l.pow((g * g) as u32);
    for i in 1..=g {
        order *= l.pow(2 * i as u32) - BigUint::one();
    }
    if which == GroupKind::GSp {
        order *= ell - 1;
    }
    Ok(order)
}

/// `|Sp_{2g}(Z/ℓ^kZ)| = |Sp_{2g}(F_ℓ)| · ℓ^{(k−1)·g(2g+1)}`.
pub fn sp_order_prime_power(g: usize, ell: u64, k: u32) -> Result<BigUint, SymplecticError> {
    if k == 0 {
        return Ok(BigUint::one());
    }
    let base = group_order(g, ell, GroupKind::Sp)?;
    Ok(base * BigUint::from(ell).pow((k - 1) * (g * (2 * g + 1)) as u32))
}

/// Elementary symmetric g×g matrices: `E_ii` and `E_ij + E_ji` (i < j).
pub(crate) fn symmetric_basis(g: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..g {
        for j in i..g {
            let mut s = vec![0i64; g * g];
            s[i * g + j] = 1;
            s[j * g + i] = 1;
            out.push(s);
        }
    }
    out
}

/// Generators of Sp_{2g}(Z/mZ): the unipotents `[[I, S], [0, I]]` and
/// `[[I, 0], [S, I]]` for elementary symmetric `S`. They generate
/// Sp_{2g}(Z), which surjects onto every Sp_{2g}(Z/mZ).
pub fn sp_generators(g: usize, modulus: u64) -> Vec<SympMatrix> {
    let n = 2 * g;
    let mut out = Vec::new();
    for s in symmetric_basis(g) {
        for lower in [false, true] {
            let mut m = Matrix::identity(n, modulus);
            for i in 0..g {
                for j in 0..g {
                    let v = s[i * g + j];
                    if v != 0 {
                        if lower {
                            m.set(g + i, j, v as u64);
                        } else {
                            m.set(i, g + j, v as u64);
                        }
                    }
                }
            }
            out.push(SympMatrix::new(m).expect("unipotent generators are symplectic"));
        }
    }
    out
}

/// Uniform random element of Sp_{2g}(Z/ℓ^kZ): rejection sampling mod ℓ,
/// then uniform random lifts through each layer ℓ^j → ℓ^{j+1}, rejecting
/// lifts that leave the group. Every fibre of the reduction map has the
/// same size, so the result is uniform.
pub fn random_sp_element<R: Rng>(g: usize, ell: u64, k: u32, rng: &mut R) -> SympMatrix {
    let n = 2 * g;
    let mut modulus = ell;
    let base = loop {
        let data: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..ell)).collect();
        if let Ok(s) = SympMatrix::new(Matrix::from_raw(n, ell, data)) {
            if s.is_sp() {
                break s;
            }
        }
    };
    let mut current = base.into_matrix();
    for _ in 1..k {
        let next_mod = modulus * ell;
        let lifted = current.lift_to(next_mod);
        current = loop {
            let data: Vec<u64> = (0..n * n)
                .map(|_| rng.gen_range(0..ell) * modulus)
                .collect();
            let cand = lifted.add(&Matrix::from_raw(n, next_mod, data));
            if let Ok(s) = SympMatrix::new(cand) {
                if s.is_sp() {
                    break s.into_matrix();
                }
            }
        };
        modulus = next_mod;
    }
    SympMatrix::new(current).expect("sampled element is symplectic")
}

/// `λ^g` mod m, the expected determinant of an element with multiplier λ.
pub fn expected_det(multiplier: u64, g: usize, modulus: u64) -> u64 {
    pow_mod(multiplier, g as u64, modulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every 2g×2g matrix over F_ℓ, kept when it preserves Ω.
    fn brute_force_sp_count(g: usize, ell: u64) -> u64 {
        let n = 2 * g;
        let total = ell.pow((n * n) as u32);
        let om = omega(g, ell);
        let mut count = 0;
        let mut data = vec![0u64; n * n];
        for mut idx in 0..total {
            for d in data.iter_mut() {
                *d = idx % ell;
                idx /= ell;
            }
            let m = Matrix::from_raw(n, ell, data.clone());
            if m.transpose().mul(&om).mul(&m) == om {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn standard_form_shapes() {
        assert_eq!(standard_form(1), vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(
            standard_form(2),
            vec![
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![-1, 0, 0, 0],
                vec![0, -1, 0, 0]
            ]
        );
        let om = omega(1, 101);
        assert_eq!(om.mul(&om), Matrix::identity(2, 101).neg());
    }

    #[test]
    fn multiplier_examples() {
        for g in 1..=3 {
            assert_eq!(multiplier(&Matrix::identity(2 * g, 7)).unwrap(), 1);
            assert_eq!(multiplier(&Matrix::identity(2 * g, 7).scale(3)).unwrap(), 2);
            assert_eq!(multiplier(&omega(g, 7)).unwrap(), 1);
        }
        let bad = Matrix::from_rows(5, &[vec![1, 1], vec![0, 0]]).unwrap();
        assert_eq!(multiplier(&bad), Err(SymplecticError::NotSymplectic));
        // similitude with multiplier 2 in GSp_2(F_5): diag(1, 2)
        let d = Matrix::from_rows(5, &[vec![1, 0], vec![0, 2]]).unwrap();
        assert_eq!(multiplier(&d).unwrap(), 2);
    }

    #[test]
    fn orders_match_enumeration() {
        assert_eq!(brute_force_sp_count(1, 2), 6);
        assert_eq!(brute_force_sp_count(1, 3), 24);
        assert_eq!(
            group_order(1, 2, GroupKind::Sp).unwrap(),
            BigUint::from(6u32)
        );
        assert_eq!(
            group_order(1, 3, GroupKind::Sp).unwrap(),
            BigUint::from(24u32)
        );
        assert_eq!(
            group_order(1, 5, GroupKind::Sp).unwrap(),
            BigUint::from(120u32)
        );
        assert_eq!(
            group_order(2, 2, GroupKind::Sp).unwrap(),
            BigUint::from(720u32)
        );
        assert_eq!(
            group_order(1, 5, GroupKind::GSp).unwrap(),
            BigUint::from(480u32)
        );
        assert!(group_order(1, 4, GroupKind::Sp).is_err());
    }

    #[test]
    fn reductions_compose() {
        let id = SympMatrix::identity(2, 12);
        assert_eq!(id.reduce_mod(3).unwrap(), SympMatrix::identity(2, 3));
        let s = SympMatrix::new(Matrix::from_rows(12, &[vec![5, 7], vec![2, 5]]).unwrap()).unwrap();
        let two_step = s.reduce_mod(6).unwrap().reduce_mod(3).unwrap();
        assert_eq!(two_step, s.reduce_mod(3).unwrap());
        assert!(matches!(
            s.reduce_mod(5),
            Err(SymplecticError::NotADivisor { .. })
        ));
        let mod4 =
            SympMatrix::new(Matrix::from_rows(4, &[vec![3, 1], vec![2, 1]]).unwrap()).unwrap();
        let mod2 = mod4.reduce_mod(2).unwrap();
        assert_eq!(mod2.multiplier(), mod4.multiplier() % 2);
        assert_eq!(SympMatrix::new(mod2.matrix().clone()).unwrap(), mod2);
    }

    #[test]
    fn inverse_is_two_sided() {
        let gens = sp_generators(2, 9);
        let x = gens
            .iter()
            .fold(SympMatrix::identity(2, 9), |acc, s| acc.mul(s));
        assert!(x.mul(&x.inverse()).matrix().is_identity());
        assert!(x.inverse().mul(&x).matrix().is_identity());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn multiplier_is_a_homomorphism_and_det_is_its_power(
                seed in any::<u64>(), g in 1usize..=2, ell in prop::sample::select(vec![3u64, 5, 7]),
                lam1 in 1u64..7, lam2 in 1u64..7,
            ) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let lam1 = 1 + lam1 % (ell - 1);
                let lam2 = 1 + lam2 % (ell - 1);
                // diag(I, λI) has multiplier λ
                let sim = |lam: u64| {
                    let mut m = Matrix::identity(2 * g, ell);
                    for i in g..2 * g { m.set(i, i, lam); }
                    SympMatrix::new(m).unwrap()
                };
                let s = random_sp_element(g, ell, 1, &mut rng).mul(&sim(lam1));
                let t = sim(lam2).mul(&random_sp_element(g, ell, 1, &mut rng));
                let st = SympMatrix::new(s.matrix().mul(t.matrix())).unwrap();
                prop_assert_eq!(st.multiplier(), mul_mod(s.multiplier(), t.multiplier(), ell));
                for x in [&s, &t, &st] {
                    prop_assert_eq!(x.det(), expected_det(x.multiplier(), g, ell));
                }
            }
        }
    }
}
