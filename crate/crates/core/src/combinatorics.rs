//! Exact integer combinatorics: binomials, rising factorials and the
//! inequality family that decides whether a hypersurface (or a divisor on a
//! product of projective spaces) can be a 2-special effect variety.
//!
//! Every value is an arbitrary-precision [`BigInt`]; parameters are plain
//! machine integers because they only ever index degrees and dimensions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// `binom(a, b)`. Zero when `b < 0` or `b > a`; negative tops are rejected.
pub fn binom(a: i64, b: i64) -> Result<BigInt> {
    if a < 0 {
        return Err(domain(format!("binom({a}, {b}): negative top")));
    }
    Ok(binom_unchecked(a as u64, b))
}

pub(crate) fn binom_unchecked(a: u64, b: i64) -> BigInt {
    if b < 0 || b as u64 > a {
        return BigInt::zero();
    }
    let b = (b as u64).min(a - b as u64);
    // u128 fast path; every intermediate r·(a−i) is exact before the division.
    let mut r: u128 = 1;
    for i in 0..b {
        match r.checked_mul((a - i) as u128) {
            Some(p) => r = p / (i as u128 + 1),
            None => return binom_big(a, b),
        }
    }
    BigInt::from(r)
}

fn binom_big(a: u64, b: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..b {
        r *= a - i;
        r /= i + 1;
    }
    r
}

/// Rising product `(r)_(z) = (r+1)(r+2)…(r+z)`; 1 for `z = 0`, 0 for `z < 0`.
pub fn rising(r: i64, z: i64) -> Result<BigInt> {
    if r < 0 {
        return Err(domain(format!("rising({r}, {z}): negative base")));
    }
    if z < 0 {
        return Ok(BigInt::zero());
    }
    Ok((1..=z).fold(BigInt::one(), |acc, i| acc * (r + i)))
}

fn check_hyp(name: &str, d: i64, e: i64, n: i64) -> Result<()> {
    if e < 1 || d < 2 * e || n < 2 {
        return Err(domain(format!(
            "{name}({d}, {e}, {n}) requires d >= 2e >= 2 and n >= 2"
        )));
    }
    Ok(())
}

/// Hypersurface function `φ(d,e,n)`; negative exactly when a degree-`e`
/// hypersurface through `h` general points can be a 2-special effect variety
/// of `L_{n,d}(2^h)` for some `h`.
///
/// `binom(d+n,n) − binom(d−2e+n,n) − (n+1)·binom(e+n,n) + n + 1`
pub fn phi_hyp(d: i64, e: i64, n: i64) -> Result<BigInt> {
    check_hyp("phi_hyp", d, e, n)?;
    Ok(binom(d + n, n)? - binom(d - 2 * e + n, n)? - binom(e + n, n)? * (n + 1) + (n + 1))
}

/// The `α = 1` analogue of [`phi_hyp`]:
/// `binom(d+n,n) − binom(d−e+n,n) − n·binom(e+n,n) + n`.
///
/// Exposed for general `e` (the derivation does not depend on `e = 2`).
pub fn psi_hyp_alpha1(d: i64, e: i64, n: i64) -> Result<BigInt> {
    check_hyp("psi_hyp_alpha1", d, e, n)?;
    Ok(binom(d + n, n)? - binom(d - e + n, n)? - binom(e + n, n)? * n + n)
}

/// `A(e) = (n+e)_(e) / (e)_(e) − (n+1)`, as an exact rational.
pub fn a_ratio(e: i64, n: i64) -> Result<BigRational> {
    if e < 1 || n < 1 {
        return Err(domain(format!("a_ratio({e}, {n}) requires e, n >= 1")));
    }
    let q = BigRational::new(rising(n + e, e)?, rising(e, e)?);
    Ok(q - BigRational::from_integer(BigInt::from(n + 1)))
}

/// Product-space function for a divisor of multidegree `e` and a system of
/// multidegree `d` on `P^{n_1} × … × P^{n_t}`:
///
/// `Π binom(d_i+n_i,n_i) − Π binom(d_i−2e_i+n_i,n_i) − (Π binom(e_i+n_i,n_i) − 1)(Σ n_i + 1)`
pub fn phi_product(d: &[i64], e: &[i64], n: &[i64]) -> Result<BigInt> {
    let t = d.len();
    if t < 2 || e.len() != t || n.len() != t {
        return Err(domain(format!(
            "phi_product: need equal lengths >= 2, got {}/{}/{}",
            d.len(),
            e.len(),
            n.len()
        )));
    }
    for i in 0..t {
        if e[i] < 0 || d[i] < 2 * e[i] || n[i] < 1 {
            return Err(domain(format!(
                "phi_product: factor {i} violates d >= 2e >= 0, n >= 1 (d={}, e={}, n={})",
                d[i], e[i], n[i]
            )));
        }
    }
    let mut full = BigInt::one();
    let mut residual = BigInt::one();
    let mut divisor = BigInt::one();
    for i in 0..t {
        full *= binom(d[i] + n[i], n[i])?;
        residual *= binom(d[i] - 2 * e[i] + n[i], n[i])?;
        divisor *= binom(e[i] + n[i], n[i])?;
    }
    let dims: i64 = n.iter().sum();
    Ok(full - residual - (divisor - 1) * (dims + 1))
}

/// `η(e, n) = φ(2e, e, n)`, the minimal-degree slice of [`phi_product`].
pub fn eta_product(e: &[i64], n: &[i64]) -> Result<BigInt> {
    if e.iter().any(|&x| x < 1) {
        return Err(domain("eta_product requires every e_i >= 1"));
    }
    let d: Vec<i64> = e.iter().map(|x| 2 * x).collect();
    phi_product(&d, e, n)
}
