//! Virtual dimension of a system after removing lines through pairs of its
//! points, read off the Hilbert polynomial of a monomial scheme.
//!
//! With the points placed at coordinate points, a fat point at `e_i` is
//! `(x_j : j ≠ i)^m` and a line through `e_i, e_j` with multiplicity `α` is
//! `(x_k : k ∉ {i, j})^α`. Their intersection is a monomial ideal, so its
//! Hilbert function counts the monomials that escape every component.

use num_bigint::BigInt;

use crate::combinatorics::binom;
use crate::error::{domain, unsupported, Result};
use crate::systems::LinearSystem;

struct MonomialScheme {
    n: usize,
    fat: Vec<u32>,
    lines: Vec<((usize, usize), u32)>,
}

impl MonomialScheme {
    fn contains(&self, a: &[u32], total: u32) -> bool {
        self.fat.iter().enumerate().all(|(i, &m)| total - a[i] >= m)
            && self
                .lines
                .iter()
                .all(|&((i, j), alpha)| total - a[i] - a[j] >= alpha)
    }

    /// Number of degree-`deg` monomials outside the ideal.
    fn hilbert_function(&self, deg: u32) -> u64 {
        let mut a = vec![0u32; self.n + 1];
        let mut count = 0;
        self.walk(&mut a, 0, deg, deg, &mut count);
        count
    }

    fn walk(&self, a: &mut [u32], k: usize, left: u32, deg: u32, count: &mut u64) {
        if k == self.n {
            a[k] = left;
            if !self.contains(a, deg) {
                *count += 1;
            }
            return;
        }
        for v in 0..=left {
            a[k] = v;
            self.walk(a, k + 1, left - v, deg, count);
        }
    }
}

/// `ν` of `L − Σ α_k ℓ_k` for lines `ℓ_k` through pairs of the (at most
/// `n+1`) points of `sys`, as `binom(d+n, n) − 1 − HP(d)`.
///
/// The Hilbert function is evaluated past the regularity bound
/// `Σ m_i + Σ α_k + 2`, checked to be linear there, and extrapolated back to
/// `d`. Repeated lines have their multiplicities added.
pub fn line_configuration_nu(
    sys: &LinearSystem,
    lines: &[((usize, usize), u32)],
) -> Result<BigInt> {
    let Some(d) = sys.degree() else {
        return Err(unsupported("line configurations are only handled on P^n"));
    };
    let n = sys.space().factors()[0] as usize;
    let fat = sys.point_multiplicities();
    if fat.len() > n + 1 {
        return Err(unsupported(format!(
            "line configurations need at most n+1 = {} points",
            n + 1
        )));
    }
    let mut merged: Vec<((usize, usize), u32)> = Vec::new();
    for &((i, j), alpha) in lines {
        if i == j || i >= fat.len() || j >= fat.len() {
            return Err(domain(format!("bad point pair ({i}, {j})")));
        }
        let key = (i.min(j), i.max(j));
        match merged.iter_mut().find(|(k, _)| *k == key) {
            Some((_, a)) => *a += alpha,
            None => merged.push((key, alpha)),
        }
    }
    let bound = fat.iter().sum::<u32>() + merged.iter().map(|l| l.1).sum::<u32>() + 2;
    let scheme = MonomialScheme {
        n,
        fat,
        lines: merged,
    };
    let d0 = d.max(bound);
    let hf: Vec<i64> = (0..4)
        .map(|k| scheme.hilbert_function(d0 + k) as i64)
        .collect();
    let slope = hf[1] - hf[0];
    if hf.windows(2).any(|w| w[1] - w[0] != slope) {
        return Err(unsupported(
            "Hilbert function not yet polynomial at the bound",
        ));
    }
    // lines give a linear Hilbert polynomial, points a constant one
    let hp_d = hf[0] - (d0 - d) as i64 * slope;
    Ok(binom(d as i64 + n as i64, n as i64)? - 1 - hp_d)
}
