use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use super::SymplecticError;
use crate::modarith::{
    add_mod, bareiss_determinant, inv_mod, mul_mod, reduce_bigint, reduce_i64, sub_mod,
};

/// Dense square matrix over Z/mZ, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix(mod {})[", self.modulus)?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(n: usize, modulus: u64) -> Self {
        assert!(modulus >= 1);
        Self {
            n,
            modulus,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zeros(n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    /// From row-major signed entries, reduced into `[0, modulus)`.
    pub fn from_i64(n: usize, modulus: u64, entries: &[i64]) -> Result<Self, SymplecticError> {
        if entries.len() != n * n {
            return Err(SymplecticError::DimensionMismatch);
        }
        Ok(Self {
            n,
            modulus,
            data: entries.iter().map(|&e| reduce_i64(e, modulus)).collect(),
        })
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<i64>]) -> Result<Self, SymplecticError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(SymplecticError::DimensionMismatch);
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::from_i64(n, modulus, &flat)
    }

    pub(crate) fn from_raw(n: usize, modulus: u64, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        debug_assert!(data.iter().all(|&x| x < modulus));
        Self { n, modulus, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SymplecticError> {
        if self.n != other.n {
            return Err(SymplecticError::DimensionMismatch);
        }
        if self.modulus != other.modulus {
            return Err(SymplecticError::ModulusMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("compatible matrices");
        let n = self.n;
        let m = self.modulus as u128;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc += self.data[i * n + k] as u128 * other.data[k * n + j] as u128;
                    if acc >= 1 << 120 {
                        acc %= m;
                    }
                }
                out[i * n + j] = (acc % m) as u64;
            }
        }
        Self::from_raw(n, self.modulus, out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("compatible matrices");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| add_mod(a, b, self.modulus))
            .collect();
        Self::from_raw(self.n, self.modulus, data)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_compatible(other).expect("compatible matrices");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| sub_mod(a, b, self.modulus))
            .collect();
        Self::from_raw(self.n, self.modulus, data)
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.modulus;
        let data = self
            .data
            .iter()
            .map(|&a| mul_mod(a, c, self.modulus))
            .collect();
        Self::from_raw(self.n, self.modulus, data)
    }

    pub fn neg(&self) -> Self {
        Self::zeros(self.n, self.modulus).sub(self)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.data[i * n + j];
            }
        }
        Self::from_raw(n, self.modulus, out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.modulus)
    }

    /// Entrywise reduction to Z/m'Z for a divisor m' of the modulus.
    pub fn reduce(&self, target: u64) -> Result<Self, SymplecticError> {
        if target == 0 || self.modulus % target != 0 {
            return Err(SymplecticError::NotADivisor {
                modulus: self.modulus,
                target,
            });
        }
        let data = self.data.iter().map(|&x| x % target).collect();
        Ok(Self::from_raw(self.n, target, data))
    }

    /// Reinterprets the entries (as integers in `[0, m)`) modulo a new modulus.
    pub fn lift_to(&self, modulus: u64) -> Self {
        let data = self.data.iter().map(|&x| x % modulus).collect();
        Self::from_raw(self.n, modulus, data)
    }

    pub fn det(&self) -> u64 {
        let rows = (0..self.n)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        reduce_bigint(&bareiss_determinant(rows), self.modulus)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::identity(self.n, self.modulus);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse over Z/ℓ^eZ where the modulus is a power of the prime `ell`:
    /// Gauss–Jordan over F_ℓ followed by Newton lifting `X ← X(2 − AX)`.
    pub fn inverse_prime_power(&self, ell: u64) -> Result<Self, SymplecticError> {
        let mut e = 0u32;
        let mut q = self.modulus;
        while q > 1 {
            if q % ell != 0 {
                return Err(SymplecticError::InvalidInput(format!(
                    "modulus {} is not a power of {ell}",
                    self.modulus
                )));
            }
            q /= ell;
            e += 1;
        }
        if e == 0 {
            return Ok(self.clone());
        }
        let base = self.reduce(ell)?;
        let mut x = base.inverse_mod_prime()?.lift_to(self.modulus);
        let two = Self::identity(self.n, self.modulus).scale(2);
        let mut precision = 1u32;
        while precision < e {
            x = x.mul(&two.sub(&self.mul(&x)));
            precision *= 2;
        }
        debug_assert!(self.mul(&x).is_identity());
        Ok(x)
    }

    fn inverse_mod_prime(&self) -> Result<Self, SymplecticError> {
        let n = self.n;
        let p = self.modulus;
        let mut a: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r][col] != 0)
                .ok_or(SymplecticError::NotInvertible)?;
            a.swap(col, pivot);
            let inv = inv_mod(a[col][col], p).ok_or(SymplecticError::NotInvertible)?;
            for v in a[col].iter_mut() {
                *v = mul_mod(*v, inv, p);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for c in 0..2 * n {
                        let t = mul_mod(f, a[col][c], p);
                        a[r][c] = sub_mod(a[r][c], t, p);
                    }
                }
            }
        }
        let data = a.into_iter().flat_map(|row| row[n..].to_vec()).collect();
        Ok(Self::from_raw(n, p, data))
    }

    /// gcd(det, modulus) = 1.
    pub fn is_invertible(&self) -> bool {
        self.det().gcd(&self.modulus) == 1
    }
}

/// Square integer matrix (row-major), used where inputs live over Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub n: usize,
    pub entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self, SymplecticError> {
        if entries.len() != n * n {
            return Err(SymplecticError::DimensionMismatch);
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, SymplecticError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(SymplecticError::DimensionMismatch);
        }
        Ok(Self {
            n,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn reduce(&self, modulus: u64) -> Matrix {
        Matrix::from_i64(self.n, modulus, &self.entries).expect("consistent dimension")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_over_prime_powers() {
        let a = Matrix::from_rows(27, &[vec![1, 3], vec![6, 1]]).unwrap();
        let inv = a.inverse_prime_power(3).unwrap();
        assert!(a.mul(&inv).is_identity());
        let singular = Matrix::from_rows(9, &[vec![3, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            singular.inverse_prime_power(3),
            Err(SymplecticError::NotInvertible)
        );
    }

    #[test]
    fn determinant_reduces() {
        let a = Matrix::from_rows(7, &[vec![2, 5], vec![3, 4]]).unwrap();
        assert_eq!(a.det(), (8i64 - 15).rem_euclid(7) as u64);
    }
}
