//! `N = ∏ (y² − x z)` over ordered triples of distinct roots of a quartic.
//!
//! Roots are refined by Newton's method in dyadic fixed point, the product is
//! formed exactly on those dyadic approximations, and an a posteriori bound
//! on the distance to the true product decides whether rounding is safe.
//!
//! Error model. For an approximation `z` of a root of a degree-`n` polynomial
//! `f`, some root lies within `n·|f(z)/f'(z)|`. When the resulting disks are
//! pairwise disjoint each holds exactly one root. With `r` the largest
//! radius and `R` a bound on all root moduli, each factor moves by at most
//! `δ = 4Rr`, and the product by at most `δ · Σ_k ∏_{j≠k} (|ãⱼ| + δ)`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::GaloisError;
use crate::modarith::{primes_up_to, IntPoly};
use crate::numeric::complex_roots;

const START_BITS: u64 = 192;
const MAX_BITS: u64 = 8192;
/// Trial division limit used when listing prime divisors of the norm.
pub const FACTOR_BUDGET: u64 = 100_000;

/// The norm together with its small prime divisors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalNorm {
    pub value: BigInt,
    /// prime divisors up to the factoring budget, ascending
    pub prime_divisors: Vec<u64>,
    /// the part of `|value|` left after removing those primes (1 when fully factored)
    pub cofactor: BigInt,
    /// working precision (bits after the binary point) that certified the rounding
    pub precision_bits: u64,
}

#[derive(Clone, Debug)]
struct Cx {
    re: BigInt,
    im: BigInt,
}

impl Cx {
    fn zero() -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn real(re: BigInt) -> Self {
        Self { re, im: BigInt::zero() }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    /// exact product (scales add)
    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn shr(&self, bits: u64) -> Self {
        Self {
            re: &self.re >> bits,
            im: &self.im >> bits,
        }
    }

    fn norm_sqr(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `log₂ |self|`, `−∞` for zero.
    fn log2_abs(&self) -> f64 {
        log2_big(&self.norm_sqr()) / 2.0
    }
}

/// `log₂ x` for `x ≥ 0`, accurate to about 1e-15 relative.
fn log2_big(x: &BigInt) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(60);
    let top = (x.abs() >> shift).to_f64().expect("60-bit value");
    top.log2() + shift as f64
}

fn from_f64(x: f64, bits: u64) -> BigInt {
    let m = BigInt::from_f64(x * 2f64.powi(60)).unwrap_or_default();
    if bits >= 60 {
        m << (bits - 60)
    } else {
        m >> (60 - bits)
    }
}

/// Horner evaluation of `f` and `f'` at `z`, both at scale `2^bits` (truncating).
fn eval_scaled(coeffs: &[BigInt], z: &Cx, bits: u64) -> (Cx, Cx) {
    let mut v = Cx::zero();
    let mut d = Cx::zero();
    for c in coeffs.iter().rev() {
        d = d.mul(z).shr(bits).add(&v);
        v = v.mul(z).shr(bits).add(&Cx::real(c << bits));
    }
    (v, d)
}

/// `f(z)` and `f'(z)` exactly, as integers over the denominators `2^{n·bits}`
/// and `2^{(n−1)·bits}`.
fn eval_exact(coeffs: &[BigInt], z: &Cx, bits: u64) -> (Cx, Cx) {
    let n = coeffs.len() - 1;
    let mut v = Cx::zero();
    let mut pw = Cx::real(BigInt::one());
    let mut powers = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        powers.push(pw.clone());
        pw = pw.mul(z);
    }
    for (k, c) in coeffs.iter().enumerate() {
        let t = powers[k].mul(&Cx::real(c << (bits * (n - k) as u64)));
        v = v.add(&t);
    }
    let mut d = Cx::zero();
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        let ck = c * BigInt::from(k);
        let t = powers[k - 1].mul(&Cx::real(ck << (bits * (n - k) as u64)));
        d = d.add(&t);
    }
    (v, d)
}

fn newton(coeffs: &[BigInt], z0: Cx, bits: u64) -> Cx {
    let mut z = z0;
    for _ in 0..200 {
        let (v, d) = eval_scaled(coeffs, &z, bits);
        let den = d.norm_sqr();
        if den.is_zero() {
            break;
        }
        // v/d = v·conj(d)/|d|², rescaled to 2^bits
        let num_re = &v.re * &d.re + &v.im * &d.im;
        let num_im = &v.im * &d.re - &v.re * &d.im;
        let step = Cx {
            re: (num_re << bits).div_floor(&den),
            im: (num_im << bits).div_floor(&den),
        };
        z = z.sub(&step);
        let size = step.re.abs().max(step.im.abs());
        if size.bits() <= 2 {
            break;
        }
    }
    z
}

struct Attempt {
    value: BigInt,
    log2_error: f64,
}

fn attempt(coeffs: &[BigInt], seeds: &[num_complex::Complex64], bits: u64) -> Option<Attempt> {
    let n = coeffs.len() - 1;
    let roots: Vec<Cx> = seeds
        .iter()
        .map(|s| {
            newton(
                coeffs,
                Cx {
                    re: from_f64(s.re, bits),
                    im: from_f64(s.im, bits),
                },
                bits,
            )
        })
        .collect();

    // certified radii, as log₂
    let mut log2_r = f64::NEG_INFINITY;
    for z in &roots {
        let (v, d) = eval_exact(coeffs, z, bits);
        if v.re.is_zero() && v.im.is_zero() {
            continue;
        }
        let ld = d.log2_abs() - 1e-9;
        if !ld.is_finite() {
            return None;
        }
        let lr = (n as f64).log2() + v.log2_abs() - ld - bits as f64 + 1e-9;
        log2_r = log2_r.max(lr);
    }
    let r = log2_r.exp2();
    for i in 0..n {
        for j in i + 1..n {
            let gap = roots[i].sub(&roots[j]).log2_abs() - bits as f64;
            if gap.exp2() <= 2.0 * r * (1.0 + 1e-9) {
                return None;
            }
        }
    }
    let big_r = roots
        .iter()
        .map(|z| (z.log2_abs() - bits as f64).exp2())
        .fold(0.0, f64::max)
        * (1.0 + 1e-9)
        + r;

    // exact product over the dyadic approximations, scale 2^{48·bits}
    let mut factors = Vec::with_capacity(24);
    for y in 0..n {
        for x in 0..n {
            for z in 0..n {
                if x == y || y == z || x == z {
                    continue;
                }
                factors.push(roots[y].mul(&roots[y]).sub(&roots[x].mul(&roots[z])));
            }
        }
    }
    let mut product = Cx::real(BigInt::one());
    for f in &factors {
        product = product.mul(f);
    }
    let scale = 2 * bits * factors.len() as u64;

    let log2_delta = 2.0 + big_r.log2() + log2_r;
    let delta = log2_delta.exp2();
    let mags: Vec<f64> = factors
        .iter()
        .map(|f| (f.log2_abs() - 2.0 * bits as f64).exp2() * (1.0 + 1e-9) + delta)
        .collect();
    let mut spread = 0.0;
    for k in 0..mags.len() {
        spread += mags
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, m)| *m)
            .product::<f64>();
    }
    let log2_error = if log2_r == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        log2_delta + (spread * (1.0 + 1e-6)).log2()
    };
    if !(log2_error < -2.0) {
        return None;
    }
    let one = BigInt::one() << scale;
    let half = BigInt::one() << (scale - 1);
    let value = (&product.re + &half).div_floor(&one);
    // the exact value is real, so the imaginary part must sit inside the error window
    let im = log2_big(&product.im.abs()) - scale as f64;
    if im > log2_error.max(-2.0) {
        return None;
    }
    Some(Attempt { value, log2_error })
}

/// Certified value of `∏_{(x,y,z)} (y² − xz)` over ordered triples of distinct
/// roots of the monic quartic `f`, doubling precision until the rounding
/// window is below 1/4.
pub(crate) fn certified_triple_norm(f: &IntPoly) -> Result<(BigInt, u64), GaloisError> {
    let coeffs = f.coeffs();
    if coeffs.len() != 5 || !coeffs[4].is_one() {
        return Err(GaloisError::NotQuartic(f.degree().unwrap_or(0)));
    }
    let seeds = complex_roots(&f.to_f64());
    let mut bits = START_BITS;
    while bits <= MAX_BITS {
        if let Some(a) = attempt(coeffs, &seeds, bits) {
            debug_assert!(a.log2_error < -2.0);
            return Ok((a.value, bits));
        }
        bits *= 2;
    }
    Err(GaloisError::PrecisionFailure)
}

/// Prime divisors of `|n|` below the factoring budget and the remaining cofactor.
pub(crate) fn small_prime_divisors(n: &BigInt) -> (Vec<u64>, BigInt) {
    let mut rest = n.abs();
    let mut primes = Vec::new();
    if rest.is_zero() {
        return (primes, rest);
    }
    for p in primes_up_to(FACTOR_BUDGET) {
        let bp = BigInt::from(p);
        if (&bp * &bp) > rest {
            break;
        }
        if rest.is_multiple_of(&bp) {
            primes.push(p);
            while rest.is_multiple_of(&bp) {
                rest /= &bp;
            }
        }
    }
    // a cofactor below budget² with no divisor up to the budget is prime
    let budget = BigInt::from(FACTOR_BUDGET);
    if rest > BigInt::one() && rest < &budget * &budget {
        if let Some(p) = rest.to_u64() {
            primes.push(p);
            primes.sort_unstable();
            rest = BigInt::one();
        }
    }
    debug_assert!(rest.sign() != Sign::Minus);
    (primes, rest)
}
