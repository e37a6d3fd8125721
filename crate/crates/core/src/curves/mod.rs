//! Hyperelliptic curves `y² = f(x)` over Q, point counts over finite fields
//! and the characteristic polynomial of Frobenius.
//!
//! The Frobenius polynomial is recovered from the zeta function. With
//! `N_k = #C(F_{p^k})` and `s_k = p^k + 1 − N_k` the power sums of the
//! Frobenius eigenvalues, Newton's identities give the elementary symmetric
//! functions `e_k`, and
//!
//! ```text
//! f_v(x) = Σ_{k=0}^{2g} (−1)^k e_k x^{2g−k},   e_{2g−k} = p^{g−k} e_k.
//! ```
//!
//! So only `N_1, …, N_g` are counted; the remaining coefficients follow from
//! the functional equation.

mod field;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modarith::{discriminant, is_prime, reduce_bigint, IntPoly};
use crate::numeric::complex_roots;
use field::ExtensionField;

/// Largest field size accepted by [`count_points`].
pub const MAX_FIELD_SIZE: u64 = 10_000_000;
/// Largest extension degree accepted by [`count_points`].
pub const MAX_EXTENSION_DEGREE: u32 = 3;
/// Genus handled by [`weil_polynomial`] unless a larger cap is requested.
pub const DEFAULT_GENUS_CAP: usize = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("bad reduction at p = {0}")]
    BadReduction(u64),
    #[error("field of size {p}^{r} is too large")]
    FieldTooLarge { p: u64, r: u32 },
    #[error("y² = f(x) needs deg f ≥ 3, got degree {0}")]
    DegreeTooSmall(usize),
    #[error("f has a repeated root (zero discriminant)")]
    Singular,
    #[error("genus {genus} exceeds the cap {cap}")]
    GenusTooLarge { genus: usize, cap: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse curve: {0}")]
    Parse(String),
}

/// The affine model `y² = f(x)` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperellipticCurve {
    coeffs: Vec<i64>,
    #[serde(skip)]
    disc: BigInt,
}

impl HyperellipticCurve {
    /// `coeffs[i]` is the coefficient of `xⁱ`. Trailing zeros are dropped.
    pub fn new(coeffs: Vec<i64>) -> Result<Self, CurveError> {
        let mut coeffs = coeffs;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let deg = coeffs.len().saturating_sub(1);
        if coeffs.is_empty() || deg < 3 {
            return Err(CurveError::DegreeTooSmall(deg));
        }
        let disc = discriminant(&IntPoly::from_i64(&coeffs));
        if disc.is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(Self { coeffs, disc })
    }

    /// A curve with `deg f = 2g+1` and coefficients drawn from `[−bound, bound]`,
    /// redrawn until the model is smooth.
    pub fn random<R: Rng>(genus: usize, bound: i64, rng: &mut R) -> Self {
        loop {
            let mut coeffs: Vec<i64> = (0..=2 * genus + 1).map(|_| rng.gen_range(-bound..=bound)).collect();
            if coeffs[2 * genus + 1] == 0 {
                coeffs[2 * genus + 1] = 1;
            }
            if let Ok(c) = Self::new(coeffs) {
                return c;
            }
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn genus(&self) -> usize {
        (self.degree() - 1) / 2
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().expect("nonempty")
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    pub fn poly(&self) -> IntPoly {
        IntPoly::from_i64(&self.coeffs)
    }

    /// Space-separated coefficients `a₀ … a_d`, the curve file format.
    pub fn to_line(&self) -> String {
        self.coeffs.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
    }
}

impl std::str::FromStr for HyperellipticCurve {
    type Err = CurveError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let body = line.split('#').next().unwrap_or("");
        let coeffs = body
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|e| CurveError::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(coeffs)
    }
}

/// Parses a curve file: one curve per line, `#` starts a comment, blank lines skipped.
pub fn parse_curve_file(text: &str) -> Result<Vec<HyperellipticCurve>, CurveError> {
    text.lines()
        .filter(|l| !l.split('#').next().unwrap_or("").trim().is_empty())
        .map(str::parse)
        .collect()
}

/// True iff `p` is prime and `p ∤ 2·disc(f)·lc(f)`.
pub fn good_reduction_check(curve: &HyperellipticCurve, p: u64) -> bool {
    if !is_prime(p) || p == 2 {
        return false;
    }
    let lc = BigInt::from(curve.leading());
    reduce_bigint(&curve.disc, p) != 0 && reduce_bigint(&lc, p) != 0
}

fn check_field(curve: &HyperellipticCurve, p: u64, r: u32) -> Result<(), CurveError> {
    if !is_prime(p) {
        return Err(CurveError::NotPrime(p));
    }
    if !good_reduction_check(curve, p) {
        return Err(CurveError::BadReduction(p));
    }
    let too_large = r == 0
        || r > MAX_EXTENSION_DEGREE
        || p.checked_pow(r).map_or(true, |q| q > MAX_FIELD_SIZE);
    if too_large {
        return Err(CurveError::FieldTooLarge { p, r });
    }
    Ok(())
}

/// Number of points on the smooth projective model over F_{p^r}.
///
/// The affine part is `Σ_x (1 + χ(f(x)))`. At infinity there is one point
/// when `deg f` is odd, and for even degree two or none according to
/// whether `lc(f)` is a square in F_{p^r}.
pub fn count_points(curve: &HyperellipticCurve, p: u64, r: u32) -> Result<u64, CurveError> {
    check_field(curve, p, r)?;
    let field = ExtensionField::new(p, r as usize);
    let squares = field.square_table();
    let coeffs: Vec<_> = curve
        .coeffs
        .iter()
        .map(|&c| field.constant(crate::modarith::reduce_i64(c, p)))
        .collect();
    let mut affine = 0u64;
    for idx in 0..field.size() {
        let x = field.from_index(idx);
        let mut v = field.constant(0);
        for c in coeffs.iter().rev() {
            v = field.add(&field.mul(&v, &x), c);
        }
        let vi = field.index(&v);
        affine += if vi == 0 {
            1
        } else if squares[vi as usize] {
            2
        } else {
            0
        };
    }
    let at_infinity = if curve.degree() % 2 == 1 {
        1
    } else {
        let lc = field.constant(crate::modarith::reduce_i64(curve.leading(), p));
        if squares[field.index(&lc) as usize] {
            2
        } else {
            0
        }
    };
    Ok(affine + at_infinity)
}

/// The characteristic polynomial of Frobenius, monic of degree `2g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeilPolynomial {
    /// lowest degree first; `coeffs[2g] = 1`
    coeffs: Vec<i128>,
    q: u64,
    g: usize,
}

impl WeilPolynomial {
    /// Builds from explicit coefficients (lowest first), checking shape only.
    pub fn from_coeffs(coeffs: Vec<i128>, q: u64) -> Option<Self> {
        let len = coeffs.len();
        if len < 3 || len % 2 == 0 || coeffs[len - 1] != 1 {
            return None;
        }
        Some(Self {
            g: (len - 1) / 2,
            coeffs,
            q,
        })
    }

    /// Genus 2 shorthand: `x⁴ + a x³ + b x² + q a x + q²`.
    pub fn genus2(a: i128, b: i128, q: u64) -> Self {
        let q = q as i128;
        Self {
            coeffs: vec![q * q, q * a, b, a, 1],
            q: q as u64,
            g: 2,
        }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn to_intpoly(&self) -> IntPoly {
        IntPoly::from_i128(&self.coeffs)
    }

    /// `x^{2g} f(q/x) = q^g f(x)`, i.e. `c_i = q^{g−i} c_{2g−i}` for `i ≤ g`.
    pub fn functional_equation_holds(&self) -> bool {
        let q = self.q as i128;
        (0..=self.g).all(|i| self.coeffs[i] == q.pow((self.g - i) as u32) * self.coeffs[2 * self.g - i])
    }

    pub fn constant_is_q_to_g(&self) -> bool {
        self.coeffs[0] == (self.q as i128).pow(self.g as u32)
    }

    /// Largest `| |α| − √q |` over the complex roots α.
    pub fn root_modulus_deviation(&self) -> f64 {
        let sqf = self.to_intpoly().squarefree_part();
        let sq = (self.q as f64).sqrt();
        complex_roots(&sqf.to_f64())
            .iter()
            .map(|z| (z.norm() - sq).abs())
            .fold(0.0, f64::max)
    }

    /// Elementary symmetric functions `e_0 … e_{2g}` of the roots.
    fn elementary(&self) -> Vec<i128> {
        let n = 2 * self.g;
        (0..=n)
            .map(|k| {
                let c = self.coeffs[n - k];
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    /// Power sums `s_1 … s_r` of the roots.
    pub fn power_sums(&self, r: usize) -> Vec<i128> {
        let e = self.elementary();
        let mut s = vec![0i128; r + 1];
        for k in 1..=r {
            let mut acc = 0i128;
            for i in 1..k {
                let ei = e.get(i).copied().unwrap_or(0);
                let term = ei * s[k - i];
                acc += if i % 2 == 1 { term } else { -term };
            }
            let ek = e.get(k).copied().unwrap_or(0);
            let term = k as i128 * ek;
            acc += if k % 2 == 1 { term } else { -term };
            s[k] = acc;
        }
        s.remove(0);
        s
    }

    /// `#C(F_{q^r}) = q^r + 1 − s_r` predicted from the roots.
    pub fn predicted_count(&self, r: u32) -> i128 {
        let s = self.power_sums(r as usize);
        (self.q as i128).pow(r) + 1 - s[r as usize - 1]
    }

    /// Reduction mod `p`, lowest first.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        self.coeffs.iter().map(|&c| c.rem_euclid(p as i128) as u64).collect()
    }
}

/// `f_v(x)` for the curve at `p`, from `N_1, …, N_g`. Genus above 2 is refused.
pub fn weil_polynomial(curve: &HyperellipticCurve, p: u64) -> Result<WeilPolynomial, CurveError> {
    weil_polynomial_capped(curve, p, DEFAULT_GENUS_CAP)
}

/// As [`weil_polynomial`] with an explicit genus cap (at most 3).
pub fn weil_polynomial_capped(
    curve: &HyperellipticCurve,
    p: u64,
    genus_cap: usize,
) -> Result<WeilPolynomial, CurveError> {
    let g = curve.genus();
    let cap = genus_cap.min(3);
    if g > cap {
        return Err(CurveError::GenusTooLarge { genus: g, cap });
    }
    let q = p as i128;
    let mut s = Vec::with_capacity(g);
    for k in 1..=g as u32 {
        let n = count_points(curve, p, k)? as i128;
        s.push(q.pow(k) + 1 - n);
    }
    // k e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} s_i
    let mut e = vec![0i128; 2 * g + 1];
    e[0] = 1;
    for k in 1..=g {
        let mut acc = 0i128;
        for i in 1..=k {
            let term = e[k - i] * s[i - 1];
            acc += if i % 2 == 1 { term } else { -term };
        }
        debug_assert_eq!(acc % k as i128, 0);
        e[k] = acc / k as i128;
    }
    for k in 0..g {
        e[2 * g - k] = q.pow((g - k) as u32) * e[k];
    }
    let n = 2 * g;
    let coeffs = (0..=n)
        .map(|i| {
            let k = n - i;
            if k % 2 == 0 {
                e[k]
            } else {
                -e[k]
            }
        })
        .collect();
    Ok(WeilPolynomial { coeffs, q: p, g })
}

/// Whether `N_1` satisfies the Weil bound `|N_1 − (p+1)| ≤ 2g√p`.
pub fn within_weil_bound(n1: u64, p: u64, g: usize) -> bool {
    let dev = (n1 as f64 - (p as f64 + 1.0)).abs();
    dev <= 2.0 * g as f64 * (p as f64).sqrt() + 1e-9
}
