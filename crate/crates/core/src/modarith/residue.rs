use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ModArithError;

/// An element of Z/mZ with an arbitrary-precision representative in `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueValue {
    value: BigUint,
    modulus: BigUint,
}

impl ResidueValue {
    pub fn new(
        value: impl Into<BigInt>,
        modulus: impl Into<BigUint>,
    ) -> Result<Self, ModArithError> {
        let modulus = modulus.into();
        if modulus.is_zero() {
            return Err(ModArithError::ZeroModulus);
        }
        let m = BigInt::from(modulus.clone());
        let v = value.into().mod_floor(&m);
        Ok(Self {
            value: v.magnitude().clone(),
            modulus,
        })
    }

    pub fn from_u64(value: u64, modulus: u64) -> Result<Self, ModArithError> {
        Self::new(BigInt::from(value), BigUint::from(modulus))
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    fn check_same(&self, other: &Self) -> Result<(), ModArithError> {
        if self.modulus != other.modulus {
            return Err(ModArithError::ModulusMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ModArithError> {
        self.check_same(other)?;
        Ok(Self {
            value: (&self.value + &other.value) % &self.modulus,
            modulus: self.modulus.clone(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ModArithError> {
        self.check_same(other)?;
        Ok(Self {
            value: (&self.value + &self.modulus - &other.value) % &self.modulus,
            modulus: self.modulus.clone(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ModArithError> {
        self.check_same(other)?;
        Ok(Self {
            value: (&self.value * &other.value) % &self.modulus,
            modulus: self.modulus.clone(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            value: (&self.modulus - &self.value) % &self.modulus,
            modulus: self.modulus.clone(),
        }
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        Self {
            value: self.value.modpow(exp, &self.modulus),
            modulus: self.modulus.clone(),
        }
    }

    /// Multiplicative inverse, if the representative is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let m = BigInt::from(self.modulus.clone());
        let ext = BigInt::from(self.value.clone()).extended_gcd(&m);
        if !ext.gcd.is_one() {
            return None;
        }
        Self::new(ext.x, self.modulus.clone()).ok()
    }

    pub fn is_unit(&self) -> bool {
        self.value.gcd(&self.modulus).is_one()
    }

    /// Reduction along Z/mZ -> Z/m'Z.
    pub fn reduce(&self, target: &BigUint) -> Result<Self, ModArithError> {
        if target.is_zero() || !(&self.modulus % target).is_zero() {
            return Err(ModArithError::NotADivisor);
        }
        Ok(Self {
            value: &self.value % target,
            modulus: target.clone(),
        })
    }
}

impl fmt::Display for ResidueValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// Combines residues with pairwise coprime moduli into the unique residue
/// modulo the product. An empty input yields `0 mod 1`.
pub fn crt_combine(residues: &[ResidueValue]) -> Result<ResidueValue, ModArithError> {
    for (i, a) in residues.iter().enumerate() {
        for b in &residues[i + 1..] {
            if !a.modulus.gcd(&b.modulus).is_one() {
                return Err(ModArithError::NonCoprimeModuli {
                    left: a.modulus.clone(),
                    right: b.modulus.clone(),
                });
            }
        }
    }
    let mut acc_value = BigInt::zero();
    let mut acc_mod = BigInt::one();
    for r in residues {
        let m = BigInt::from(r.modulus.clone());
        let v = BigInt::from(r.value.clone());
        // acc_value + acc_mod * t ≡ v (mod m)
        let ext = acc_mod.extended_gcd(&m);
        debug_assert!(ext.gcd.is_one());
        let t = ((&v - &acc_value) * ext.x).mod_floor(&m);
        acc_value += &acc_mod * t;
        acc_mod *= &m;
        acc_value = acc_value.mod_floor(&acc_mod);
    }
    debug_assert!(!acc_value.is_negative());
    ResidueValue::new(acc_value, acc_mod.magnitude().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: u64, m: u64) -> ResidueValue {
        ResidueValue::from_u64(v, m).unwrap()
    }

    #[test]
    fn crt_small_cases() {
        assert_eq!(crt_combine(&[r(2, 3), r(3, 5)]).unwrap(), r(8, 15));
        assert_eq!(crt_combine(&[r(0, 2), r(0, 3)]).unwrap(), r(0, 6));
        assert_eq!(
            crt_combine(&[r(1, 4), r(1, 9), r(1, 25)]).unwrap(),
            r(1, 900)
        );
        assert_eq!(crt_combine(&[]).unwrap(), r(0, 1));
    }

    #[test]
    fn crt_rejects_shared_factor() {
        let err = crt_combine(&[r(1, 6), r(2, 9)]).unwrap_err();
        assert!(matches!(err, ModArithError::NonCoprimeModuli { .. }));
    }

    #[test]
    fn negative_values_normalize() {
        let x = ResidueValue::new(-1, 7u32).unwrap();
        assert_eq!(x.value(), &BigUint::from(6u32));
        assert_eq!(x.inverse().unwrap(), r(6, 7));
        assert!(r(3, 9).inverse().is_none());
    }

    #[test]
    fn reduce_requires_divisor() {
        assert_eq!(r(11, 12).reduce(&BigUint::from(3u32)).unwrap(), r(2, 3));
        assert!(matches!(
            r(11, 12).reduce(&BigUint::from(5u32)),
            Err(ModArithError::NotADivisor)
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const MODULI: [u64; 8] = [2, 3, 5, 7, 11, 13, 49, 64];

        proptest! {
            #[test]
            fn reduction_recovers_each_input(picks in prop::sample::subsequence(MODULI.to_vec(), 1..5), seeds in prop::collection::vec(any::<u64>(), 5)) {
                // drop moduli that share a factor with an earlier pick
                let mut moduli: Vec<u64> = Vec::new();
                for m in picks {
                    if moduli.iter().all(|&n| num_integer::gcd(n, m) == 1) {
                        moduli.push(m);
                    }
                }
                let inputs: Vec<ResidueValue> = moduli.iter().zip(&seeds).map(|(&m, &s)| r(s % m, m)).collect();
                let out = crt_combine(&inputs).unwrap();
                let product: u64 = moduli.iter().product();
                prop_assert_eq!(out.modulus(), &BigUint::from(product));
                for x in &inputs {
                    prop_assert_eq!(&out.reduce(x.modulus()).unwrap(), x);
                }
            }
        }
    }
}
