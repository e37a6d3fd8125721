use super::{IntMatrix, Matrix, SpLieElement, SympMatrix, SymplecticError};
use crate::modarith::is_prime;

/// Outcome of comparing the group commutator of `id + ℓⁿU` and `id + ℓᵐV`
/// against `id + ℓ^{n+m}(VU − UV)` modulo `ℓ^{2n+m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceCheck {
    pub holds: bool,
    /// `ℓ^{2n+m}`
    pub modulus: u64,
    /// `(id+ℓⁿU)⁻¹ (id+ℓᵐV) (id+ℓⁿU) (id+ℓᵐV)⁻¹` reduced mod `ℓ^{2n+m}`
    pub commutator: Matrix,
    /// `id + ℓ^{n+m}(VU − UV)` reduced mod `ℓ^{2n+m}`
    pub predicted: Matrix,
}

fn checked_pow(ell: u64, e: u32) -> Result<u64, SymplecticError> {
    ell.checked_pow(e)
        .filter(|&q| q < (1u64 << 62))
        .ok_or_else(|| {
            SymplecticError::InvalidInput(format!("{ell}^{e} exceeds the word-size modulus range"))
        })
}

/// Exact check of the first-order commutator formula for `n ≤ m`.
///
/// The products are formed modulo `ℓ^{max(2n+m, n+m+k)}` and then reduced,
/// so `k` only deepens the working precision.
pub fn group_commutator_congruence(
    ell: u64,
    n: u32,
    m: u32,
    u: &IntMatrix,
    v: &IntMatrix,
    k: u32,
) -> Result<CongruenceCheck, SymplecticError> {
    if !is_prime(ell) {
        return Err(SymplecticError::NotPrime(ell));
    }
    if n == 0 || n > m {
        return Err(SymplecticError::InvalidInput(format!(
            "need 1 <= n <= m, got n={n}, m={m}"
        )));
    }
    if u.n != v.n {
        return Err(SymplecticError::DimensionMismatch);
    }
    let target = checked_pow(ell, 2 * n + m)?;
    let work = checked_pow(ell, (2 * n + m).max(n + m + k))?;
    let dim = u.n;
    let id = Matrix::identity(dim, work);
    let uw = u.reduce(work);
    let vw = v.reduce(work);
    let x = id.add(&uw.scale(ell.pow(n)));
    let y = id.add(&vw.scale(ell.pow(m)));
    let x_inv = x.inverse_prime_power(ell)?;
    let y_inv = y.inverse_prime_power(ell)?;
    let commutator = x_inv.mul(&y).mul(&x).mul(&y_inv).reduce(target)?;
    let bracket = vw.mul(&uw).sub(&uw.mul(&vw));
    let predicted = id.add(&bracket.scale(ell.pow(n + m))).reduce(target)?;
    Ok(CongruenceCheck {
        holds: commutator == predicted,
        modulus: target,
        commutator,
        predicted,
    })
}

/// `M ↦ id + ℓᵏ·M̃` from sp_{2g}(Z/ℓZ) into `ker(Sp(Z/ℓ^{k+1}) → Sp(Z/ℓ^k))`,
/// where `M̃` lifts the entries of `M` to `[0, ℓ)`.
pub fn kernel_param(k: u32, ell: u64, lie: &SpLieElement) -> Result<SympMatrix, SymplecticError> {
    if !is_prime(ell) || lie.modulus() != ell {
        return Err(SymplecticError::UnsupportedModulus(lie.modulus()));
    }
    if k == 0 {
        return Err(SymplecticError::InvalidInput(
            "kernel level k must be at least 1".into(),
        ));
    }
    let modulus = checked_pow(ell, k + 1)?;
    let dim = lie.matrix().dim();
    let lifted = lie.matrix().lift_to(modulus);
    let s = Matrix::identity(dim, modulus).add(&lifted.scale(ell.pow(k)));
    let out = SympMatrix::new(s)?;
    debug_assert!(out.is_sp());
    Ok(out)
}
