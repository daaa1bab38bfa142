use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Arithmetic modulo a word-sized prime `p < 2^32`, so products fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `2^31 − 1`.
    pub const DEFAULT_PRIME: u64 = 2_147_483_647;
    /// Largest prime below `2^32`, used for cross-checks.
    pub const SECOND_PRIME: u64 = 4_294_967_291;
    /// Tie-breaker when the first two primes disagree.
    pub const THIRD_PRIME: u64 = 1_000_000_007;

    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 {
            return Err(domain(format!("prime {p} does not fit in 32 bits")));
        }
        if !is_prime(p) {
            return Err(domain(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse by Fermat; `a` must be nonzero.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    /// Rank of a dense matrix by row echelon reduction. Entries must already
    /// be reduced modulo `p`. The matrix is consumed.
    pub fn rank(&self, mut rows: Vec<Vec<u64>>) -> usize {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for col in 0..ncols {
            if rank == rows.len() {
                break;
            }
            let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, piv);
            let inv = self.inv(rows[rank][col]);
            for x in rows[rank][col..].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let (top, rest) = rows.split_at_mut(rank + 1);
            let pivot_row = &top[rank];
            for row in rest.iter_mut() {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = self.sub(*x, self.mul(f, y));
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField {
            p: Self::DEFAULT_PRIME,
        }
    }
}

impl TryFrom<u64> for PrimeField {
    type Error = crate::Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}
