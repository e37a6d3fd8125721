use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_i128(coeffs: &[i128]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn leading(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Content-free version with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        let g = self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return self.clone();
        }
        let sign = if self.leading().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        Self::new(self.0.iter().map(|c| c / &g * &sign).collect())
    }

    /// `f / gcd(f, f')`, made primitive: same roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = rational_gcd(&to_rational(self), &to_rational(&self.derivative()));
        if g.len() <= 1 {
            return self.primitive();
        }
        let (q, r) = rational_div_rem(&to_rational(self), &g);
        debug_assert!(r.iter().all(Zero::is_zero));
        from_rational(&q).primitive()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

type RatPoly = Vec<BigRational>;

fn to_rational(f: &IntPoly) -> RatPoly {
    f.0.iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn from_rational(f: &RatPoly) -> IntPoly {
    let den = f.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    IntPoly::new(f.iter().map(|c| (c * &den).to_integer()).collect())
}

fn trim_rat(f: &mut RatPoly) {
    while f.last().map_or(false, Zero::is_zero) {
        f.pop();
    }
}

fn rational_div_rem(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    let mut rem = a.clone();
    trim_rat(&mut rem);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    let lead = b[db].clone();
    for i in (db..rem.len()).rev() {
        let c = &rem[i] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i - db + j] -= &c * bj;
        }
        quot[i - db] = c;
    }
    rem.truncate(db);
    trim_rat(&mut rem);
    trim_rat(&mut quot);
    (quot, rem)
}

fn rational_gcd(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim_rat(&mut x);
    trim_rat(&mut y);
    while !y.is_empty() {
        let (_, r) = rational_div_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of two nonzero integer polynomials via the Sylvester matrix.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return BigInt::zero();
    };
    if da == 0 && db == 0 {
        return BigInt::one();
    }
    let n = da + db;
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for i in 0..db {
        for (j, c) in a.0.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.0.iter().rev().enumerate() {
            rows[db + i][i + j] = c.clone();
        }
    }
    bareiss_determinant(rows)
}

/// Discriminant `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> BigInt {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return BigInt::zero();
    }
    if n == 1 {
        return BigInt::one();
    }
    let res = resultant(f, &f.derivative());
    let d = res / f.leading();
    if (n * (n - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        // x^5 + 1: 5^5
        assert_eq!(
            discriminant(&IntPoly::from_i64(&[1, 0, 0, 0, 0, 1])),
            BigInt::from(3125)
        );
        // x^2 + b x + c: b^2 - 4c
        assert_eq!(
            discriminant(&IntPoly::from_i64(&[3, 5, 1])),
            BigInt::from(13)
        );
        // cubic x^3 - x: 4
        assert_eq!(
            discriminant(&IntPoly::from_i64(&[0, -1, 0, 1])),
            BigInt::from(4)
        );
        // 2x^2 + 3x + 1: 9 - 8
        assert_eq!(
            discriminant(&IntPoly::from_i64(&[1, 3, 2])),
            BigInt::from(1)
        );
        assert!(discriminant(&IntPoly::from_i64(&[1, 2, 1])).is_zero());
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 2, x - 3) = (3^2 - 2) up to sign conventions for monic inputs
        let a = IntPoly::from_i64(&[-2, 0, 1]);
        let b = IntPoly::from_i64(&[-3, 1]);
        assert_eq!(resultant(&a, &b), BigInt::from(7));
    }

    #[test]
    fn squarefree_part_strips_repeats() {
        // (x^2 + 3)^2 (x - 1)
        let base = IntPoly::from_i64(&[3, 0, 1]);
        let f = base.mul(&base).mul(&IntPoly::from_i64(&[-1, 1]));
        assert_eq!(f.squarefree_part(), base.mul(&IntPoly::from_i64(&[-1, 1])));
    }
}
