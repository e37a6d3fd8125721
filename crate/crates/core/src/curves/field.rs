use crate::modarith::{add_mod, mul_mod, smallest_irreducible, sub_mod};

pub(crate) const MAX_DEGREE: usize = 4;

/// F_{p^r} as F_p[t]/(m(t)) with `m` the smallest monic irreducible of
/// degree `r`. Elements are indexed by `Σ cᵢ pⁱ` over their coefficients.
#[derive(Clone, Debug)]
pub(crate) struct ExtensionField {
    p: u64,
    r: usize,
    /// `m(t) = t^r + Σ_{i<r} lowᵢ tⁱ`; reducing uses `t^r = −Σ lowᵢ tⁱ`.
    low: [u64; MAX_DEGREE],
}

pub(crate) type Elem = [u64; MAX_DEGREE];

impl ExtensionField {
    pub fn new(p: u64, r: usize) -> Self {
        assert!((1..=MAX_DEGREE).contains(&r));
        let mut low = [0u64; MAX_DEGREE];
        if r > 1 {
            let m = smallest_irreducible(p, r);
            for (i, &c) in m.coeffs().iter().take(r).enumerate() {
                low[i] = c;
            }
        }
        Self { p, r, low }
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.r as u32)
    }

    pub fn from_index(&self, mut idx: u64) -> Elem {
        let mut e = [0u64; MAX_DEGREE];
        for slot in e.iter_mut().take(self.r) {
            *slot = idx % self.p;
            idx /= self.p;
        }
        e
    }

    pub fn index(&self, e: &Elem) -> u64 {
        e[..self.r].iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn constant(&self, c: u64) -> Elem {
        let mut e = [0u64; MAX_DEGREE];
        e[0] = c % self.p;
        e
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = [0u64; MAX_DEGREE];
        for i in 0..self.r {
            out[i] = add_mod(a[i], b[i], self.p);
        }
        out
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.p;
        let r = self.r;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] = add_mod(prod[i + j], mul_mod(a[i], b[j], p), p);
            }
        }
        for d in (r..2 * r - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..r {
                prod[d - r + i] = sub_mod(prod[d - r + i], mul_mod(c, self.low[i], p), p);
            }
        }
        let mut out = [0u64; MAX_DEGREE];
        out[..r].copy_from_slice(&prod[..r]);
        out
    }

    /// `is_square[i]` tells whether the element with index `i` is a square (0 included).
    pub fn square_table(&self) -> Vec<bool> {
        let q = self.size();
        let mut table = vec![false; q as usize];
        for idx in 0..q {
            let e = self.from_index(idx);
            table[self.index(&self.mul(&e, &e)) as usize] = true;
        }
        table
    }
}
