//! Bounded re-derivation of the classification lists: which hypersurfaces,
//! linear spaces, rational curves and product divisors are 2-special effect
//! varieties for systems of double points.
//!
//! Every scan except [`verify_cgg`] is pure arithmetic; records are sorted
//! so the output does not depend on the order the grid is walked in.

mod cgg;
mod tables;

pub use cgg::{verify_cgg, CggBounds, CggReport};
pub use tables::{
    floor_flags, product_families, render_records, FamilyRow, FamilyTable, TableFormat,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{binom, phi_hyp, phi_product};
use crate::effect_varieties::{p3_rational_curve_chi, rnc_double_residual_nu};
use crate::error::{domain, unsupported, Result};
use crate::systems::Space;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRecord {
    pub space: Space,
    pub multidegree: Vec<u32>,
    pub variety: String,
    pub h_min: u32,
    pub h_max: u32,
    pub accepted: bool,
    pub witness: BTreeMap<String, String>,
}

impl ScanRecord {
    fn key(&self) -> (Vec<u32>, Vec<u32>, String, u32) {
        (
            self.space.factors().to_vec(),
            self.multidegree.clone(),
            self.variety.clone(),
            self.h_min,
        )
    }

    pub fn h_label(&self) -> String {
        if self.h_min == self.h_max {
            self.h_min.to_string()
        } else {
            format!("{}..{}", self.h_min, self.h_max)
        }
    }
}

fn sort_records(mut v: Vec<ScanRecord>) -> Vec<ScanRecord> {
    v.sort_by_key(ScanRecord::key);
    v
}

fn tuple(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn to_u32(v: &BigInt) -> u32 {
    v.to_u32().unwrap_or(u32::MAX)
}

/// `h` strictly above `bound / k`: the least such integer.
fn strict_floor_plus_one(bound: &BigInt, k: i64) -> BigInt {
    bound.div_floor(&BigInt::from(k)) + 1
}

/// Hypersurfaces of degree `e` through `h ≥ n` double points of
/// `L_{n,d}(2^h)` satisfying the special inequality and `d ≥ 2e`, for
/// `2 ≤ n ≤ n_max`, `1 ≤ e ≤ e_max`, `d ≤ d_max`.
pub fn scan_hypersurfaces(n_max: u32, e_max: u32, d_max: u32) -> Result<Vec<ScanRecord>> {
    let cells: Vec<(u32, u32, u32)> = (2..=n_max)
        .flat_map(|n| (1..=e_max).flat_map(move |e| (2 * e..=d_max).map(move |d| (n, e, d))))
        .collect();
    let found: Vec<Option<ScanRecord>> = cells
        .par_iter()
        .map(|&(n, e, d)| {
            let (ni, ei, di) = (n as i64, e as i64, d as i64);
            let b = binom(di + ni, ni)? - binom(di - 2 * ei + ni, ni)?;
            let lo = strict_floor_plus_one(&b, ni + 1).max(BigInt::from(n));
            let hi = binom(ei + ni, ni)? - 1;
            if lo > hi {
                return Ok(None);
            }
            let mut witness = BTreeMap::new();
            witness.insert("phi".into(), phi_hyp(di, ei, ni)?.to_string());
            witness.insert("lower".into(), format!("{b}/{}", n + 1));
            Ok(Some(ScanRecord {
                space: Space::projective(n)?,
                multidegree: vec![d],
                variety: e.to_string(),
                h_min: to_u32(&lo),
                h_max: to_u32(&hi),
                accepted: true,
                witness,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(sort_records(found.into_iter().flatten().collect()))
}

/// Lower end of the `s`-range for `Y = P^s` in `L_{n,2}(2^h)`, as printed:
/// `⌊√(1 − 12n − 4n² + 8hn + 8h)/2 − 1/2⌋` above the threshold, else 1.
pub fn rho_linear(n: u32, h: u32) -> Result<u32> {
    if h < 2 || h > n {
        return Err(domain(format!("need 2 <= h <= n, got n={n}, h={h}")));
    }
    let (n, h) = (n as i64, h as i64);
    if 2 * (n + 1) * h <= n * n + 3 * n {
        return Ok(1);
    }
    let r = 1 - 12 * n - 4 * n * n + 8 * h * n + 8 * h;
    if r < 0 {
        return Ok(1);
    }
    // ⌊(√r − 1)/2⌋ only depends on ⌊√r⌋
    Ok((r.sqrt() - 1).div_euclid(2).max(1) as u32)
}

/// The least `s ≥ 1` with `n² + 3n + s² + s − 2h(n+1) ≥ 0`, i.e. the
/// smallest `P^s` whose double residual in `L_{n,2}(2^h)` is nonempty.
pub fn rho_exact(n: u32, h: u32) -> Result<u32> {
    if h < 2 || h > n {
        return Err(domain(format!("need 2 <= h <= n, got n={n}, h={h}")));
    }
    let (n, h) = (n as i64, h as i64);
    let ok = |s: i64| n * n + 3 * n + s * s + s - 2 * h * (n + 1) >= 0;
    let s = (1..h)
        .find(|&s| ok(s))
        .expect("s = h - 1 always satisfies the bound");
    Ok(s as u32)
}

/// The double rational normal curve through the first `min(h, n+3)` points
/// of `L_{n,d}(2^h)`, for `2 ≤ n ≤ n_max`, `3 ≤ d ≤ d_max`. One record per
/// `(n, d)` with `h = n + 3`; the witness also records whether every other
/// `h` up to `2n + 6` fails.
pub fn scan_rnc(d_max: u32, n_max: u32) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for d in 3..=d_max {
            let ni = n as i64;
            let base = rnc_double_residual_nu(d, n)?;
            // gain over ν(L) and ν(L − 2C) as functions of h
            let eval = |h: i64| -> (BigInt, BigInt) {
                let on = h.min(ni + 3);
                let gain = BigInt::from(on * (ni + 1)) - BigInt::from((d as i64 - 1) * ni * ni + 2);
                let nu = &base - BigInt::from((h - on) * (ni + 1));
                (gain, nu)
            };
            let sev = |h: i64| {
                let (g, nu) = eval(h);
                g.is_positive() && !nu.is_negative()
            };
            let h = ni + 3;
            let (gain, nu) = eval(h);
            let others_fail = (1..=2 * ni + 6).filter(|&k| k != h).all(|k| !sev(k));
            let mut witness = BTreeMap::new();
            witness.insert("gain".into(), gain.to_string());
            witness.insert("nu".into(), nu.to_string());
            witness.insert("other_h_fail".into(), others_fail.to_string());
            out.push(ScanRecord {
                space: Space::projective(n)?,
                multidegree: vec![d],
                variety: "rnc".into(),
                h_min: h as u32,
                h_max: h as u32,
                accepted: sev(h),
                witness,
            });
        }
    }
    Ok(sort_records(out))
}

/// Triples `(d, e, h)` for a smooth rational curve of degree `e` in `P^3`
/// doubled in `L_{3,d}(2^h)` satisfying `2e ≥ h`, `χ − 1 ≥ 0` and the
/// special inequality `4h > 3de − 4e + 5`.
///
/// Every triple passing these three conditions is returned; `accepted` also
/// requires `d ≥ 2` and that the curve can pass through `h` general points.
pub fn scan_rational_curves_p3(d_max: u32, e_max: u32) -> Result<Vec<ScanRecord>> {
    let mut out = Vec::new();
    for d in 1..=d_max {
        for e in 1..=e_max {
            let chi = p3_rational_curve_chi(d, e)?;
            for h in 1..=2 * e {
                let (di, ei, hi) = (d as i64, e as i64, h as i64);
                if chi < BigInt::from(1) || 4 * hi <= 3 * di * ei - 4 * ei + 5 {
                    continue;
                }
                let general = h as usize <= crate::effect_varieties::p3_curve_point_bound(e);
                let mut witness = BTreeMap::new();
                witness.insert("chi".into(), chi.to_string());
                witness.insert("general_position".into(), general.to_string());
                out.push(ScanRecord {
                    space: Space::projective(3)?,
                    multidegree: vec![d],
                    variety: format!("rational e={e}"),
                    h_min: h,
                    h_max: h,
                    accepted: d >= 2 && general,
                    witness,
                });
            }
        }
    }
    Ok(sort_records(out))
}

fn nondecreasing(t: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    if t == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in lo..=hi {
        for mut rest in nondecreasing(t - 1, first, hi) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn all_tuples(lo: &[u32], hi: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &l in lo {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u32>| {
                (l..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Divisors of multidegree `e` through the `h` double points of
/// `L_d(2^h)` on `P^{n_1} × … × P^{n_t}` with `n` nondecreasing.
///
/// For `t = 2` one `e_i` may vanish and `d_i ≥ 1`; for `t ≥ 3` every
/// `e_i ≥ 1`. In all cases `d_i ≥ 2e_i`, and `h` must satisfy
/// `Π binom(e_i+n_i, n_i) − 1 ≥ h > B/(Σn_i + 1)` with
/// `B = Π binom(d_i+n_i, n_i) − Π binom(d_i−2e_i+n_i, n_i)`.
pub fn scan_product_divisors(
    t: u32,
    n_max: u32,
    e_max: u32,
    d_max: u32,
) -> Result<Vec<ScanRecord>> {
    if !(2..=4).contains(&t) {
        return Err(unsupported(format!("products of {t} factors")));
    }
    let t = t as usize;
    let e_lo = if t == 2 { 0 } else { 1 };
    let spaces = nondecreasing(t, 1, n_max);
    let es: Vec<Vec<u32>> = all_tuples(&vec![e_lo; t], e_max)
        .into_iter()
        .filter(|e| e.iter().any(|&x| x > 0))
        .collect();
    let cells: Vec<(Vec<u32>, Vec<u32>)> = spaces
        .iter()
        .flat_map(|n| es.iter().map(move |e| (n.clone(), e.clone())))
        .collect();
    let found: Vec<Vec<ScanRecord>> = cells
        .par_iter()
        .map(|(n, e)| {
            let d_lo: Vec<u32> = e.iter().map(|&x| (2 * x).max(1)).collect();
            let mut recs = Vec::new();
            for d in all_tuples(&d_lo, d_max) {
                if let Some(r) = product_record(n, &d, e)? {
                    recs.push(r);
                }
            }
            Ok(recs)
        })
        .collect::<Result<_>>()?;
    Ok(sort_records(found.into_iter().flatten().collect()))
}

fn product_record(n: &[u32], d: &[u32], e: &[u32]) -> Result<Option<ScanRecord>> {
    let mut full = BigInt::from(1);
    let mut residual = BigInt::from(1);
    let mut divisor = BigInt::from(1);
    for i in 0..n.len() {
        let (ni, di, ei) = (n[i] as i64, d[i] as i64, e[i] as i64);
        full *= binom(di + ni, ni)?;
        residual *= binom(di - 2 * ei + ni, ni)?;
        divisor *= binom(ei + ni, ni)?;
    }
    let k = n.iter().map(|&x| x as i64).sum::<i64>() + 1;
    let b = full - residual;
    let lo = strict_floor_plus_one(&b, k);
    let hi = divisor - 1;
    if lo > hi {
        return Ok(None);
    }
    let as_i64 = |v: &[u32]| v.iter().map(|&x| x as i64).collect::<Vec<_>>();
    let mut witness = BTreeMap::new();
    witness.insert(
        "phi".into(),
        phi_product(&as_i64(d), &as_i64(e), &as_i64(n))?.to_string(),
    );
    witness.insert("lower".into(), format!("{b}/{k}"));
    Ok(Some(ScanRecord {
        space: Space::new(n.to_vec())?,
        multidegree: d.to_vec(),
        variety: tuple(e),
        h_min: to_u32(&lo),
        h_max: to_u32(&hi),
        accepted: true,
        witness,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[ScanRecord]) -> Vec<(Vec<u32>, Vec<u32>, String, u32, u32)> {
        v.iter()
            .filter(|r| r.accepted)
            .map(|r| {
                (
                    r.space.factors().to_vec(),
                    r.multidegree.clone(),
                    r.variety.clone(),
                    r.h_min,
                    r.h_max,
                )
            })
            .collect()
    }

    #[test]
    fn hypersurface_list() {
        let got = rows(&scan_hypersurfaces(7, 4, 9).unwrap());
        let mut want: Vec<_> = (2..=7u32)
            .map(|n| (vec![n], vec![2], "1".to_string(), n, n))
            .collect();
        want.push((vec![2], vec![4], "2".into(), 5, 5));
        want.push((vec![3], vec![4], "2".into(), 9, 9));
        want.push((vec![4], vec![4], "2".into(), 14, 14));
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn rho_values() {
        assert_eq!(rho_linear(4, 4).unwrap(), 3);
        assert_eq!(rho_exact(4, 4).unwrap(), 3);
        assert_eq!(rho_linear(5, 4).unwrap(), 2);
        assert_eq!(rho_exact(5, 4).unwrap(), 3);
        assert_eq!(rho_linear(6, 2).unwrap(), 1);
        assert!(rho_linear(3, 4).is_err());
    }

    #[test]
    fn rnc_list() {
        let recs = scan_rnc(7, 7).unwrap();
        let acc: Vec<(u32, u32)> = recs
            .iter()
            .filter(|r| r.accepted)
            .map(|r| (r.space.dim(), r.multidegree[0]))
            .collect();
        assert_eq!(acc, vec![(2, 4), (4, 3)]);
        assert!(recs.iter().all(|r| r.witness["other_h_fail"] == "true"));
        let r33 = recs
            .iter()
            .find(|r| r.space.dim() == 3 && r.multidegree == [3])
            .unwrap();
        assert_eq!(r33.witness["nu"], "-1");
    }

    #[test]
    fn rational_curve_list() {
        let recs = scan_rational_curves_p3(6, 6).unwrap();
        let acc: Vec<(u32, String, u32)> = recs
            .iter()
            .filter(|r| r.accepted)
            .map(|r| (r.multidegree[0], r.variety.clone(), r.h_min))
            .collect();
        assert_eq!(
            acc,
            vec![(2, "rational e=1".into(), 2), (2, "rational e=2".into(), 3)]
        );
        assert!(recs.iter().all(|r| r.multidegree[0] <= 3));
    }

    #[test]
    fn triple_products() {
        let got = rows(&scan_product_divisors(3, 5, 3, 7).unwrap());
        let want: Vec<_> = [(1u32, 7u32), (2, 11), (3, 15)]
            .into_iter()
            .map(|(g, h)| (vec![1, 1, g], vec![2, 2, 2], "(1,1,1)".to_string(), h, h))
            .collect();
        assert_eq!(got, want);
        assert!(scan_product_divisors(4, 3, 2, 5).unwrap().is_empty());
        assert!(scan_product_divisors(5, 1, 1, 1).is_err());
    }

    #[test]
    fn strict_lower_bound_on_p1_p2() {
        let recs = scan_product_divisors(2, 2, 2, 4).unwrap();
        let r = recs
            .iter()
            .find(|r| r.space.factors() == [1, 2] && r.multidegree == [4, 2])
            .unwrap();
        assert_eq!((r.h_min, r.h_max), (8, 8));
    }
}
