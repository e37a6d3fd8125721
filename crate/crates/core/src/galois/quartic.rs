use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::GaloisError;
use crate::modarith::{discriminant, IntPoly};
use crate::numeric::complex_roots;

/// The transitive subgroups of S4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuarticGroup {
    S4,
    A4,
    D4,
    C4,
    V4,
}

impl QuarticGroup {
    pub fn order(self) -> usize {
        match self {
            Self::S4 => 24,
            Self::A4 => 12,
            Self::D4 => 8,
            Self::C4 | Self::V4 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::S4 => "S4",
            Self::A4 => "A4",
            Self::D4 => "D4",
            Self::C4 => "C4",
            Self::V4 => "V4",
        }
    }
}

impl std::fmt::Display for QuarticGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Galois group of an irreducible quartic with the data that decided it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarticGaloisLabel {
    pub group: QuarticGroup,
    /// rational roots of the resolvent cubic of the monic model, ascending
    pub resolvent_roots: Vec<BigInt>,
    pub discriminant: BigInt,
    pub discriminant_is_square: bool,
}

pub(crate) fn is_square(x: &BigInt) -> bool {
    if x.is_negative() {
        return false;
    }
    let s = x.sqrt();
    &s * &s == *x
}

/// Integer roots of an integer polynomial with nonzero leading coefficient.
///
/// Divisors of the constant term are enumerated exactly when it is small;
/// otherwise numeric approximations propose candidates that are then
/// verified by exact evaluation.
pub(crate) fn integer_roots(f: &IntPoly) -> Vec<BigInt> {
    let mut roots = Vec::new();
    let mut coeffs = f.coeffs().to_vec();
    while coeffs.len() > 1 && coeffs[0].is_zero() {
        coeffs.remove(0);
        if roots.is_empty() {
            roots.push(BigInt::zero());
        }
    }
    let g = IntPoly::new(coeffs);
    if g.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let c0 = g.coeffs()[0].abs();
    let mut candidates: Vec<BigInt> = Vec::new();
    if let Some(c) = c0.to_u64().filter(|&c| c <= 1_000_000) {
        for d in 1..=c {
            if c % d == 0 {
                candidates.push(BigInt::from(d));
                candidates.push(-BigInt::from(d));
            }
        }
    } else {
        for z in complex_roots(&g.to_f64()) {
            if z.im.abs() > 1.0 + 1e-6 * z.norm() {
                continue;
            }
            let base = BigInt::from(z.re.round() as i128);
            for off in -1..=1 {
                candidates.push(&base + off);
            }
        }
    }
    for c in candidates {
        if !c.is_zero() && g.eval(&c).is_zero() && !roots.contains(&c) {
            roots.push(c);
        }
    }
    roots.sort();
    roots
}

/// `e³ f(x/e)` for `f` of degree 4 with leading coefficient `e`: a monic
/// integer quartic with the same splitting field.
pub(crate) fn monic_model(f: &IntPoly) -> Result<[BigInt; 4], GaloisError> {
    if f.degree() != Some(4) {
        return Err(GaloisError::NotQuartic(f.degree().unwrap_or(0)));
    }
    let c = f.coeffs();
    let e = &c[4];
    let mut scale = BigInt::one();
    let mut out: [BigInt; 4] = Default::default();
    for i in (0..4).rev() {
        out[i] = &c[i] * &scale;
        scale *= e;
    }
    Ok(out)
}

fn quadratic_roots(a: &BigInt, b: &BigInt) -> Option<[BigInt; 2]> {
    // z² − a z + b
    let d = a * a - 4 * b;
    if !is_square(&d) {
        return None;
    }
    let s = d.sqrt();
    let (p, m) = (a + &s, a - &s);
    if p.is_odd() {
        return None;
    }
    Some([p / 2, m / 2])
}

/// Whether the monic quartic `x⁴ + a x³ + b x² + c x + d` factors into two
/// integer quadratics. Any such factorization pairs the roots, so `v + t` is a
/// rational root of the resolvent cubic.
fn has_quadratic_factor(m: &[BigInt; 4], resolvent_roots: &[BigInt]) -> bool {
    let [d, c, b, a] = m;
    for r in resolvent_roots {
        let Some([v, t]) = quadratic_roots(r, d) else { continue };
        let Some([u, s]) = quadratic_roots(a, &(b - r)) else { continue };
        let ok = |u: &BigInt, s: &BigInt| u * &t + s * &v == *c;
        if ok(&u, &s) || ok(&s, &u) {
            return true;
        }
    }
    false
}

/// Resolvent cubic `y³ − b y² + (ac − 4d) y − (a²d − 4bd + c²)` whose roots are
/// `x₁x₂ + x₃x₄` and its conjugates.
pub(crate) fn resolvent_cubic(m: &[BigInt; 4]) -> IntPoly {
    let [d, c, b, a] = m;
    let four = BigInt::from(4);
    IntPoly::new(vec![
        -(a * a * d - &four * b * d + c * c),
        a * c - &four * d,
        -b.clone(),
        BigInt::one(),
    ])
}

/// A quadratic with discriminant `disc_q` splits over Q(√Δ).
fn splits_over(disc_q: &BigInt, delta: &BigInt) -> bool {
    disc_q.is_zero() || is_square(disc_q) || is_square(&(disc_q * delta))
}

/// Classifies the Galois group of an irreducible integer quartic.
///
/// With `R` the resolvent cubic and `Δ` the discriminant:
/// `R` irreducible gives S4 or A4 by squareness of `Δ`; `R` split gives V4;
/// one rational root `r` gives C4 when both `x² − r x + d` and
/// `x² + a x + (b − r)` split over Q(√Δ), and D4 otherwise.
pub fn quartic_galois_group(f: &IntPoly) -> Result<QuarticGaloisLabel, GaloisError> {
    let m = monic_model(f)?;
    let [d, c, b, a] = &m;
    let monic = IntPoly::new(vec![d.clone(), c.clone(), b.clone(), a.clone(), BigInt::one()]);
    let resolvent = resolvent_cubic(&m);
    let roots = integer_roots(&resolvent);
    if !integer_roots(&monic).is_empty() || has_quadratic_factor(&m, &roots) {
        return Err(GaloisError::Reducible);
    }
    let delta = discriminant(&monic);
    let square = is_square(&delta);
    let group = match roots.len() {
        0 if square => QuarticGroup::A4,
        0 => QuarticGroup::S4,
        1 => {
            let r = &roots[0];
            let q1 = r * r - 4 * d;
            let q2 = a * a - 4 * (b - r);
            if splits_over(&q1, &delta) && splits_over(&q2, &delta) {
                QuarticGroup::C4
            } else {
                QuarticGroup::D4
            }
        }
        _ => QuarticGroup::V4,
    };
    Ok(QuarticGaloisLabel {
        group,
        resolvent_roots: roots,
        discriminant: delta,
        discriminant_is_square: square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(c: &[i64]) -> Result<QuarticGroup, GaloisError> {
        quartic_galois_group(&IntPoly::from_i64(c)).map(|l| l.group)
    }

    #[test]
    fn classic_examples() {
        assert_eq!(label(&[-2, 0, 0, 0, 1]), Ok(QuarticGroup::D4));
        assert_eq!(label(&[1, 0, 0, 0, 1]), Ok(QuarticGroup::V4));
        assert_eq!(label(&[1, 1, 0, 0, 1]), Ok(QuarticGroup::S4));
        assert_eq!(label(&[1, 1, 1, 1, 1]), Ok(QuarticGroup::C4));
        assert_eq!(label(&[12, 8, 0, 0, 1]), Ok(QuarticGroup::A4));
    }

    #[test]
    fn reducible_inputs() {
        // (x² + 1)(x² + 2)
        assert_eq!(label(&[2, 0, 3, 0, 1]), Err(GaloisError::Reducible));
        // (x − 3)(x³ + x + 1)
        assert_eq!(label(&[-3, -2, 1, -3, 1]), Err(GaloisError::Reducible));
        // (x² + x + 1)(x² − x + 3), odd middle terms
        assert_eq!(label(&[3, 2, 3, 0, 1]), Err(GaloisError::Reducible));
        // (2x² + 1)(x² + 3)
        assert_eq!(label(&[3, 0, 7, 0, 2]), Err(GaloisError::Reducible));
        assert_eq!(label(&[1, 0, 1]), Err(GaloisError::NotQuartic(2)));
    }

    #[test]
    fn integer_root_search() {
        // (x − 7)(x + 1000003)(x² + 5): constant too large for divisor enumeration
        let f = IntPoly::from_i64(&[1_000_003, 1])
            .mul(&IntPoly::from_i64(&[-7, 1]))
            .mul(&IntPoly::from_i64(&[5, 0, 1]));
        assert_eq!(integer_roots(&f), vec![BigInt::from(-1_000_003), BigInt::from(7)]);
        assert_eq!(integer_roots(&IntPoly::from_i64(&[0, 0, -4, 1])), vec![BigInt::from(0), BigInt::from(4)]);
        assert!(integer_roots(&IntPoly::from_i64(&[2, 0, 1])).is_empty());
    }
}
