//! Word-sized modular arithmetic and polynomials over prime fields.
//!
//! Moduli are `u64`; products go through `u128`, so every operation is
//! exact for any modulus below 2^64.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ModArithError;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        (a as u128 + m as u128 - b as u128) as u64
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo any `m > 1`, when `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128 % m as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Reduces a (possibly negative) integer into `[0, m)`.
#[inline]
pub fn reduce_i64(v: i64, m: u64) -> u64 {
    (v as i128).rem_euclid(m as i128) as u64
}

pub fn reduce_bigint(v: &BigInt, m: u64) -> u64 {
    v.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits u64")
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Legendre symbol (a | p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Univariate polynomial over F_p, coefficients lowest degree first.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[F_{}]{:?}", self.p, self.coeffs)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FpPoly {
    /// Builds a polynomial over F_p, checking that `p` is prime.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self, ModArithError> {
        if !is_prime(p) {
            return Err(ModArithError::NotPrime(p));
        }
        Ok(Self::new_unchecked(p, coeffs))
    }

    /// Builds a polynomial without the primality check. Callers guarantee `p` prime.
    pub fn new_unchecked(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut f = Self { p, coeffs };
        f.trim();
        f
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Result<Self, ModArithError> {
        Self::new(p, coeffs.iter().map(|&c| reduce_i64(c, p)).collect())
    }

    pub fn from_bigints(p: u64, coeffs: &[BigInt]) -> Result<Self, ModArithError> {
        Self::new(p, coeffs.iter().map(|c| reduce_bigint(c, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self {
            p,
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new_unchecked(p, vec![c])
    }

    /// The monomial `x`.
    pub fn x(p: u64) -> Self {
        Self::new_unchecked(p, vec![0, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x, self.p), c, self.p))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), self.p).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new_unchecked(
            self.p,
            self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                add_mod(a, b, self.p)
            })
            .collect();
        Self::new_unchecked(self.p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                sub_mod(a, b, self.p)
            })
            .collect();
        Self::new_unchecked(self.p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new_unchecked(self.p, acc.into_iter().map(|c| c as u64).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv_lead = inv_mod(divisor.leading(), p).expect("unit leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], inv_lead, p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = sub_mod(rem[k], mul_mod(c, d, p), p);
            }
        }
        rem.truncate(dd);
        (Self::new_unchecked(p, quot), Self::new_unchecked(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        Self::new_unchecked(self.p, coeffs)
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(modulus);
        let base = self.rem(modulus);
        for i in (0..exp.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if exp.bit(i) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    pub fn pow_mod_u64(&self, exp: u64, modulus: &Self) -> Self {
        self.pow_mod(&BigUint::from(exp), modulus)
    }

    /// For `f(x) = g(x^p)` returns `g` (the p-th root, since a^p = a in F_p).
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        Self::new_unchecked(self.p, coeffs)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }
}

/// Yun-style squarefree decomposition over F_p: monic parts with their
/// multiplicities, whose product (with multiplicity) is `monic(f)`.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.modulus();
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = f.derivative();
    let mut c = f.gcd(&df);
    let mut w = f.div_rem(&c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p as usize));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree: `(g_d, d)` where `g_d` is the product of all degree-`d` factors.
pub fn distinct_degree_factorization(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.modulus();
    let x = FpPoly::x(p);
    let mut rest = f.monic();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut d = 0;
    while rest.degree().unwrap_or(0) > 0 {
        d += 1;
        if rest.degree().unwrap() < 2 * d {
            let deg = rest.degree().unwrap();
            out.push((rest, deg));
            break;
        }
        h = h.pow_mod_u64(p, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct degree-`d`
/// irreducibles. The random search is seeded, so results are reproducible.
pub fn equal_degree_split(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![f.monic()];
    }
    let p = f.modulus();
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = FpPoly::new_unchecked(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            a.pow_mod(&exp, f).sub(&FpPoly::one(p))
        };
        let g = f.gcd(&b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let other = f.div_rem(&g).0;
            let mut out = equal_degree_split(&g, d, rng);
            out.extend(equal_degree_split(&other, d, rng));
            return out;
        }
    }
}

/// Complete factorization over F_p: the leading coefficient and monic
/// irreducible factors with multiplicities, sorted by (degree, coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(FpPoly, usize)>,
}

const EDF_SEED: u64 = 0x6d6f_6e6f_6472_6f6d;

pub fn factor(f: &FpPoly) -> Result<Factorization, ModArithError> {
    if f.is_zero() {
        return Err(ModArithError::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (block, d) in distinct_degree_factorization(&part) {
            for irr in equal_degree_split(&block, d, &mut rng) {
                factors.push((irr, mult));
            }
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().cmp(b.coeffs()))
    });
    Ok(Factorization {
        unit: f.leading(),
        factors,
    })
}

/// Degrees of the irreducible factors of `f`, with multiplicity, in
/// nonincreasing order (partition notation: `[2, 1, 1]` is 2+1+1).
pub fn factor_degrees(f: &FpPoly) -> Result<Vec<usize>, ModArithError> {
    if f.is_zero() {
        return Err(ModArithError::ZeroPolynomial);
    }
    let mut degrees = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        for (block, d) in distinct_degree_factorization(&part) {
            let count = block.degree().unwrap() / d;
            degrees.extend(std::iter::repeat(d).take(count * mult));
        }
    }
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    Ok(degrees)
}

pub fn is_irreducible(f: &FpPoly) -> Result<bool, ModArithError> {
    match f.degree() {
        None | Some(0) => Err(ModArithError::ConstantPolynomial),
        Some(n) => Ok(factor_degrees(f)? == [n]),
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `r`
/// over F_p (coefficients compared from the constant term upward).
pub fn smallest_irreducible(p: u64, r: usize) -> FpPoly {
    assert!(r >= 1);
    let total = (p as u128).pow(r as u32);
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(r + 1);
        let mut t = idx;
        for _ in 0..r {
            coeffs.push((t % p as u128) as u64);
            t /= p as u128;
        }
        coeffs.push(1);
        let f = FpPoly::new_unchecked(p, coeffs);
        if is_irreducible(&f).unwrap_or(false) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_i64(p, c).unwrap()
    }

    /// All monic polynomials of degree `d` over F_p.
    fn monics(p: u64, d: usize) -> Vec<FpPoly> {
        let total = p.pow(d as u32);
        (0..total)
            .map(|mut idx| {
                let mut c = Vec::new();
                for _ in 0..d {
                    c.push(idx % p);
                    idx /= p;
                }
                c.push(1);
                FpPoly::new_unchecked(p, c)
            })
            .collect()
    }

    /// Brute-force factor degrees by trial division with all monics of degree <= deg/2.
    fn brute_degrees(f: &FpPoly) -> Vec<usize> {
        let p = f.modulus();
        let mut rest = f.monic();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.degree().unwrap() > 0 {
            if 2 * d > rest.degree().unwrap() {
                out.push(rest.degree().unwrap());
                break;
            }
            let mut found = false;
            for m in monics(p, d) {
                let (q, r) = rest.div_rem(&m);
                if r.is_zero() {
                    out.push(d);
                    rest = q;
                    found = true;
                    break;
                }
            }
            if !found {
                d += 1;
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    #[test]
    fn factor_degree_examples() {
        assert_eq!(brute_degrees(&poly(2, &[1, 0, 0, 0, 1])), vec![1, 1, 1, 1]);
        assert_eq!(
            factor_degrees(&poly(2, &[1, 0, 0, 0, 1])).unwrap(),
            vec![1, 1, 1, 1]
        );
        assert_eq!(brute_degrees(&poly(3, &[1, 0, 0, 0, 1])), vec![2, 2]);
        assert_eq!(
            factor_degrees(&poly(3, &[1, 0, 0, 0, 1])).unwrap(),
            vec![2, 2]
        );
        assert_eq!(factor_degrees(&poly(5, &[0, 1])).unwrap(), vec![1]);
        assert!(matches!(
            factor_degrees(&FpPoly::zero(5)),
            Err(ModArithError::ZeroPolynomial)
        ));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&poly(3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(3, &[-1, 0, 1])).unwrap());
        assert_eq!(brute_degrees(&poly(5, &[1, 0, 0, 0, 1])), vec![2, 2]);
        assert!(!is_irreducible(&poly(5, &[1, 0, 0, 0, 1])).unwrap());
        assert!(matches!(
            is_irreducible(&poly(5, &[3])),
            Err(ModArithError::ConstantPolynomial)
        ));
    }

    #[test]
    fn squarefree_handles_pth_powers() {
        // (x + 1)^3 (x^2 + 1) over F_3: x^3 + 1 is a cube
        let f = poly(3, &[1, 1])
            .mul(&poly(3, &[1, 1]))
            .mul(&poly(3, &[1, 1]))
            .mul(&poly(3, &[1, 0, 1]));
        let parts = squarefree_decomposition(&f);
        assert!(parts.contains(&(poly(3, &[1, 0, 1]), 1)));
        assert!(parts.contains(&(poly(3, &[1, 1]), 3)));
        assert_eq!(factor_degrees(&f).unwrap(), vec![2, 1, 1, 1]);
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(2, 2), poly(2, &[1, 1, 1]));
        assert_eq!(smallest_irreducible(3, 2), poly(3, &[1, 0, 1]));
        assert_eq!(smallest_irreducible(5, 1), poly(5, &[0, 1]));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..100).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, primes_up_to(99));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(4, 8), None);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 31, 97];

        fn arb_poly() -> impl Strategy<Value = FpPoly> {
            (0..PRIMES.len(), 1usize..=8).prop_flat_map(|(pi, deg)| {
                let p = PRIMES[pi];
                (prop::collection::vec(0..p, deg), 1..p).prop_map(move |(mut c, lead)| {
                    c.push(lead);
                    FpPoly::new_unchecked(p, c)
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn degrees_sum_and_match_brute_force(f in arb_poly()) {
                let degs = factor_degrees(&f).unwrap();
                prop_assert_eq!(degs.iter().sum::<usize>(), f.degree().unwrap());
                if f.modulus() <= 13 || f.degree().unwrap() <= 5 {
                    prop_assert_eq!(&degs, &brute_degrees(&f));
                }
            }

            #[test]
            fn factorization_reproduces_input(f in arb_poly()) {
                let fact = factor(&f).unwrap();
                let mut prod = FpPoly::constant(f.modulus(), fact.unit);
                for (g, m) in &fact.factors {
                    prop_assert!(is_irreducible(g).unwrap());
                    for _ in 0..*m {
                        prod = prod.mul(g);
                    }
                }
                prop_assert_eq!(prod, f);
            }
        }
    }
}
