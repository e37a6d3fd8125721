use super::group::{omega, symmetric_basis};
use super::{Matrix, SymplecticError};
use crate::modarith::{inv_mod, is_prime, mul_mod, sub_mod};

/// Element of sp_{2g}(Z/mZ): `[[A, B], [C, −Aᵀ]]` with `B`, `C` symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpLieElement {
    g: usize,
    matrix: Matrix,
}

impl SpLieElement {
    /// Assembles the block matrix; `a`, `b`, `c` are row-major g×g.
    pub fn from_blocks(
        g: usize,
        modulus: u64,
        a: &[i64],
        b: &[i64],
        c: &[i64],
    ) -> Result<Self, SymplecticError> {
        if a.len() != g * g || b.len() != g * g || c.len() != g * g {
            return Err(SymplecticError::DimensionMismatch);
        }
        let n = 2 * g;
        let mut entries = vec![0i64; n * n];
        for i in 0..g {
            for j in 0..g {
                entries[i * n + j] = a[i * g + j];
                entries[i * n + g + j] = b[i * g + j];
                entries[(g + i) * n + j] = c[i * g + j];
                entries[(g + i) * n + g + j] = -a[j * g + i];
            }
        }
        let matrix = Matrix::from_i64(n, modulus, &entries)?;
        Self::from_matrix(matrix)
    }

    /// Accepts `M` when `MᵀΩ + ΩM = 0`, which is equivalent to the block form
    /// with symmetric off-diagonal blocks.
    pub fn from_matrix(matrix: Matrix) -> Result<Self, SymplecticError> {
        let n = matrix.dim();
        if n == 0 || n % 2 == 1 {
            return Err(SymplecticError::OddDimension(n));
        }
        let g = n / 2;
        let om = omega(g, matrix.modulus());
        if !matrix.transpose().mul(&om).add(&om.mul(&matrix)).is_zero() {
            return Err(SymplecticError::NotInLieAlgebra);
        }
        Ok(Self { g, matrix })
    }

    pub fn zero(g: usize, modulus: u64) -> Self {
        Self {
            g,
            matrix: Matrix::zeros(2 * g, modulus),
        }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn modulus(&self) -> u64 {
        self.matrix.modulus()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn block_a(&self) -> Vec<u64> {
        self.block(0, 0)
    }

    pub fn block_b(&self) -> Vec<u64> {
        self.block(0, self.g)
    }

    pub fn block_c(&self) -> Vec<u64> {
        self.block(self.g, 0)
    }

    fn block(&self, r0: usize, c0: usize) -> Vec<u64> {
        let g = self.g;
        (0..g)
            .flat_map(|i| (0..g).map(move |j| (i, j)))
            .map(|(i, j)| self.matrix.get(r0 + i, c0 + j))
            .collect()
    }

    pub fn is_block_diagonal(&self) -> bool {
        self.block_b()
            .iter()
            .chain(self.block_c().iter())
            .all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            g: self.g,
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        Self {
            g: self.g,
            matrix: self.matrix.scale(c),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            g: self.g,
            matrix: self.matrix.neg(),
        }
    }

    /// `[M, N] = MN − NM`; the output is re-validated against the sp invariant.
    pub fn bracket(&self, other: &Self) -> Result<Self, SymplecticError> {
        if self.g != other.g {
            return Err(SymplecticError::DimensionMismatch);
        }
        if self.modulus() != other.modulus() {
            return Err(SymplecticError::ModulusMismatch);
        }
        let m = self
            .matrix
            .mul(&other.matrix)
            .sub(&other.matrix.mul(&self.matrix));
        Self::from_matrix(m)
    }

    /// Coordinates: A row-major, then the upper triangles of B and C.
    pub fn coordinates(&self) -> Vec<u64> {
        let g = self.g;
        let mut out = self.block_a();
        for (r0, c0) in [(0, g), (g, 0)] {
            for i in 0..g {
                for j in i..g {
                    out.push(self.matrix.get(r0 + i, c0 + j));
                }
            }
        }
        out
    }

    pub fn from_coordinates(
        g: usize,
        modulus: u64,
        coords: &[u64],
    ) -> Result<Self, SymplecticError> {
        if coords.len() != lie_dimension(g) {
            return Err(SymplecticError::DimensionMismatch);
        }
        let a: Vec<i64> = coords[..g * g].iter().map(|&x| x as i64).collect();
        let mut b = vec![0i64; g * g];
        let mut c = vec![0i64; g * g];
        let mut idx = g * g;
        for block in [&mut b, &mut c] {
            for i in 0..g {
                for j in i..g {
                    block[i * g + j] = coords[idx] as i64;
                    block[j * g + i] = coords[idx] as i64;
                    idx += 1;
                }
            }
        }
        Self::from_blocks(g, modulus, &a, &b, &c)
    }
}

/// `dim sp_{2g} = g(2g + 1)`.
pub fn lie_dimension(g: usize) -> usize {
    g * (2 * g + 1)
}

/// Standard basis of sp_{2g}: elementary `A` blocks, then symmetric
/// elementary `B` blocks, then symmetric elementary `C` blocks.
pub fn lie_basis(g: usize, modulus: u64) -> Vec<SpLieElement> {
    let zero = vec![0i64; g * g];
    let mut out = Vec::with_capacity(lie_dimension(g));
    for i in 0..g * g {
        let mut a = zero.clone();
        a[i] = 1;
        out.push(SpLieElement::from_blocks(g, modulus, &a, &zero, &zero).expect("basis element"));
    }
    for s in symmetric_basis(g) {
        out.push(SpLieElement::from_blocks(g, modulus, &zero, &s, &zero).expect("basis element"));
    }
    for s in symmetric_basis(g) {
        out.push(SpLieElement::from_blocks(g, modulus, &zero, &zero, &s).expect("basis element"));
    }
    out
}

/// A submodule of (Z/ℓ^kZ)^N in echelon form with the Howell property:
/// membership is decided by a single reduction pass.
#[derive(Clone, Debug)]
pub struct EchelonSpan {
    ell: u64,
    k: u32,
    modulus: u64,
    /// (pivot column, pivot valuation, row); the pivot entry equals ℓ^valuation.
    rows: Vec<(usize, u32, Vec<u64>)>,
}

fn valuation(x: u64, ell: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut v = 0;
    let mut y = x;
    while y % ell == 0 {
        y /= ell;
        v += 1;
    }
    v
}

impl EchelonSpan {
    pub fn new(ell: u64, k: u32, generators: Vec<Vec<u64>>) -> Self {
        let modulus = ell.pow(k);
        let width = generators.first().map_or(0, Vec::len);
        let mut pending: Vec<Vec<u64>> = generators;
        let mut rows = Vec::new();
        for col in 0..width {
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| valuation(r[col], ell, k))
                .map(|(i, _)| i);
            let Some(idx) = best else { continue };
            let mut pivot = pending.swap_remove(idx);
            let v = valuation(pivot[col], ell, k);
            let unit = pivot[col] / ell.pow(v);
            let unit_inv = inv_mod(unit, modulus).expect("unit part is invertible");
            for x in pivot.iter_mut() {
                *x = mul_mod(*x, unit_inv, modulus);
            }
            let pv = ell.pow(v);
            for r in pending.iter_mut() {
                if r[col] != 0 {
                    let f = r[col] / pv;
                    for (x, &p) in r.iter_mut().zip(&pivot) {
                        *x = sub_mod(*x, mul_mod(f, p, modulus), modulus);
                    }
                }
            }
            if v > 0 {
                // ℓ^{k−v} · pivot kills the pivot entry but may survive elsewhere
                let ann: Vec<u64> = pivot
                    .iter()
                    .map(|&x| mul_mod(x, ell.pow(k - v), modulus))
                    .collect();
                if ann.iter().any(|&x| x != 0) {
                    pending.push(ann);
                }
            }
            pending.retain(|r| r.iter().any(|&x| x != 0));
            rows.push((col, v, pivot));
        }
        Self {
            ell,
            k,
            modulus,
            rows,
        }
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w: Vec<u64> = v.iter().map(|&x| x % self.modulus).collect();
        for (col, val, row) in &self.rows {
            let pv = self.ell.pow(*val);
            if w[*col] % pv != 0 {
                return false;
            }
            let f = w[*col] / pv;
            for (x, &r) in w.iter_mut().zip(row) {
                *x = sub_mod(*x, mul_mod(f, r, self.modulus), self.modulus);
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// `log_ℓ` of the number of elements of the span.
    pub fn log_size(&self) -> u32 {
        self.rows.iter().map(|(_, v, _)| self.k - v).sum()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.rows.iter().map(|(_, _, r)| r.as_slice())
    }
}

/// The span `[sp_{2g}, sp_{2g}]` over Z/mZ for m prime ≥ 3 or m = 4.
#[derive(Clone, Debug)]
pub struct CommutatorSpan {
    pub g: usize,
    pub modulus: u64,
    /// `log_ℓ |span|`; for prime moduli this is the F_ℓ-dimension.
    pub length: u32,
    /// `g(2g + 1)`, the length of all of sp_{2g}.
    pub full_length: usize,
    pub basis: Vec<SpLieElement>,
    span: EchelonSpan,
}

impl CommutatorSpan {
    pub fn contains(&self, x: &SpLieElement) -> bool {
        self.span.contains(&x.coordinates())
    }

    pub fn is_full(&self) -> bool {
        self.modulus != 4 && self.length as usize == self.full_length
    }

    /// Whether every element of `2·sp_{2g}(Z/2Z)` lies in the span (m = 4 only).
    pub fn contains_twice_mod2_algebra(&self) -> bool {
        if self.modulus != 4 {
            return false;
        }
        // 2·sp(Z/2) is the F_2-span of 2·(basis); the span is a group
        lie_basis(self.g, 4)
            .iter()
            .all(|b| self.contains(&b.scale(2)))
    }
}

pub fn commutator_span(g: usize, modulus: u64) -> Result<CommutatorSpan, SymplecticError> {
    if g == 0 || g > 3 {
        return Err(SymplecticError::UnsupportedGenus(g));
    }
    let (ell, k) = match modulus {
        4 => (2, 2),
        m if m >= 3 && is_prime(m) => (m, 1),
        m => return Err(SymplecticError::UnsupportedModulus(m)),
    };
    let basis = lie_basis(g, modulus);
    let mut brackets = Vec::new();
    for (i, x) in basis.iter().enumerate() {
        for y in &basis[i + 1..] {
            brackets.push(x.bracket(y)?.coordinates());
        }
    }
    let span = EchelonSpan::new(ell, k, brackets);
    let echelon_basis = span
        .rows()
        .map(|r| SpLieElement::from_coordinates(g, modulus, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CommutatorSpan {
        g,
        modulus,
        length: span.log_size(),
        full_length: lie_dimension(g),
        basis: echelon_basis,
        span,
    })
}
