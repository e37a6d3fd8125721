use super::{Matrix, SymplecticError};

const MAX_ENTRIES: usize = 36;

/// Packs small matrices over Z/mZ into a `u128` so that large groups can be
/// enumerated with cheap hashing. Requires `n² · ⌈log₂ m⌉ ≤ 128` and `n ≤ 6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixCodec {
    n: usize,
    modulus: u64,
    bits: u32,
}

impl MatrixCodec {
    pub fn new(n: usize, modulus: u64) -> Result<Self, SymplecticError> {
        let bits = 64 - (modulus.max(2) - 1).leading_zeros();
        if n * n > MAX_ENTRIES || (n * n) as u32 * bits > 128 {
            return Err(SymplecticError::InvalidInput(format!(
                "{n}x{n} matrices mod {modulus} do not fit in 128 bits"
            )));
        }
        Ok(Self { n, modulus, bits })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn encode(&self, m: &Matrix) -> u128 {
        debug_assert_eq!(m.dim(), self.n);
        debug_assert_eq!(m.modulus(), self.modulus);
        self.pack(m.entries())
    }

    fn pack(&self, entries: &[u64]) -> u128 {
        entries
            .iter()
            .rev()
            .fold(0u128, |acc, &e| (acc << self.bits) | e as u128)
    }

    fn unpack(&self, code: u128, out: &mut [u64; MAX_ENTRIES]) {
        let mask = (1u128 << self.bits) - 1;
        let mut c = code;
        for slot in out.iter_mut().take(self.n * self.n) {
            *slot = (c & mask) as u64;
            c >>= self.bits;
        }
    }

    pub fn decode(&self, code: u128) -> Matrix {
        let mut buf = [0u64; MAX_ENTRIES];
        self.unpack(code, &mut buf);
        Matrix::from_raw(self.n, self.modulus, buf[..self.n * self.n].to_vec())
    }

    pub fn identity(&self) -> u128 {
        self.encode(&Matrix::identity(self.n, self.modulus))
    }

    /// Product of two encoded matrices.
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let n = self.n;
        let mut x = [0u64; MAX_ENTRIES];
        let mut y = [0u64; MAX_ENTRIES];
        let mut z = [0u64; MAX_ENTRIES];
        self.unpack(a, &mut x);
        self.unpack(b, &mut y);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u128;
                for k in 0..n {
                    acc += x[i * n + k] as u128 * y[k * n + j] as u128;
                }
                z[i * n + j] = (acc % self.modulus as u128) as u64;
            }
        }
        self.pack(&z[..n * n])
    }

    /// Entrywise reduction of a code to a coarser codec (its modulus must divide ours).
    pub fn reduce_to(&self, code: u128, target: &MatrixCodec) -> u128 {
        debug_assert_eq!(self.modulus % target.modulus, 0);
        let mut buf = [0u64; MAX_ENTRIES];
        self.unpack(code, &mut buf);
        for e in buf.iter_mut().take(self.n * self.n) {
            *e %= target.modulus;
        }
        target.pack(&buf[..self.n * self.n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_product() {
        let codec = MatrixCodec::new(4, 4).unwrap();
        let a = Matrix::from_i64(4, 4, &(0..16).map(|i| i % 4).collect::<Vec<_>>()).unwrap();
        let b =
            Matrix::from_i64(4, 4, &(0..16).map(|i| (3 * i + 1) % 4).collect::<Vec<_>>()).unwrap();
        assert_eq!(codec.decode(codec.encode(&a)), a);
        assert_eq!(
            codec.decode(codec.mul(codec.encode(&a), codec.encode(&b))),
            a.mul(&b)
        );
        let coarse = MatrixCodec::new(4, 2).unwrap();
        assert_eq!(
            coarse.decode(codec.reduce_to(codec.encode(&a), &coarse)),
            a.reduce(2).unwrap()
        );
    }

    #[test]
    fn rejects_oversized() {
        assert!(MatrixCodec::new(6, 3).is_ok());
        assert!(MatrixCodec::new(6, 25).is_err());
    }
}
