//! Candidate special effect varieties and the virtual dimension of the
//! system left after removing them with some multiplicity.
//!
//! Every variety class has its own residual rule:
//!
//! * divisors: subtract `α·e` from the multidegree and `α·c_j` from the
//!   multiplicity of every point the divisor passes through;
//! * linear subspaces and lines: count the conditions of `α·P^s` plus the
//!   excess of points of higher multiplicity on it;
//! * rational normal curves (`α = 2`) and rational curves in `P^3`
//!   (`α = 2`, via the Euler characteristic on the blow-up along the curve).

mod classify;
mod h1;
mod hilbert;

pub use classify::{
    classify_alpha_sev, classify_configuration, AlphaNu, Check, ConfigStep, SevReport, StepReport,
};
pub use h1::{curve_restriction_cohomology, h1_sev_check, H1Report};
pub use hilbert::line_configuration_nu;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binom;
use crate::error::{domain, unsupported, Result};
use crate::systems::{point_conditions, virtual_dim, FatPointGroup, LinearSystem, Space};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EffectVariety {
    /// A divisor of multidegree `multidegree` through every point of the
    /// listed groups, with multiplicity `c` at those points.
    Hypersurface {
        multidegree: Vec<u32>,
        point_mults: Vec<(usize, u32)>,
    },
    /// A `P^s` containing the first `through_first` points of `P^n`.
    LinearSubspace { s: u32, through_first: usize },
    /// The degree-`n` rational normal curve through the first `min(h, n+3)`
    /// points.
    RationalNormalCurve,
    /// A smooth rational curve of degree `e` in `P^3` through as many of the
    /// first points as general position allows.
    RationalCurveP3 { e: u32 },
    /// The line through two of the points.
    Line { through_pair: (usize, usize) },
}

impl EffectVariety {
    /// A divisor through every point of `sys` with multiplicity 1.
    pub fn through_all(sys: &LinearSystem, multidegree: Vec<u32>) -> Self {
        EffectVariety::Hypersurface {
            multidegree,
            point_mults: (0..sys.groups().len()).map(|g| (g, 1)).collect(),
        }
    }

    pub fn is_divisor(&self) -> bool {
        matches!(self, EffectVariety::Hypersurface { .. })
    }

    /// Indices of the system points the variety passes through.
    pub fn points_on(&self, sys: &LinearSystem) -> Vec<usize> {
        let h = sys.point_count();
        match self {
            EffectVariety::Hypersurface { point_mults, .. } => {
                let groups = sys.point_groups();
                (0..h)
                    .filter(|&i| point_mults.iter().any(|&(g, _)| g == groups[i]))
                    .collect()
            }
            EffectVariety::LinearSubspace { through_first, .. } => (0..*through_first).collect(),
            EffectVariety::RationalNormalCurve => {
                let n = sys.space().factors()[0] as usize;
                (0..h.min(n + 3)).collect()
            }
            EffectVariety::RationalCurveP3 { e } => (0..h.min(p3_curve_point_bound(*e))).collect(),
            EffectVariety::Line {
                through_pair: (i, j),
            } => vec![*i, *j],
        }
    }

    /// Rejects varieties that make no sense for `sys`.
    pub fn validate(&self, sys: &LinearSystem) -> Result<()> {
        let h = sys.point_count();
        let space = sys.space();
        let projective_n = || -> Result<u32> {
            if space.is_projective() {
                Ok(space.factors()[0])
            } else {
                Err(unsupported("this variety class is only defined on P^n"))
            }
        };
        match self {
            EffectVariety::Hypersurface {
                multidegree,
                point_mults,
            } => {
                if multidegree.len() != space.num_factors() {
                    return Err(domain("divisor multidegree does not match the space"));
                }
                if multidegree.iter().all(|&e| e == 0) {
                    return Err(domain("divisor multidegree must have a positive entry"));
                }
                for (k, &(g, c)) in point_mults.iter().enumerate() {
                    if g >= sys.groups().len() {
                        return Err(domain(format!("no point group {g}")));
                    }
                    if c == 0 {
                        return Err(domain("point multiplicities on Y must be >= 1"));
                    }
                    if point_mults[..k].iter().any(|&(g2, _)| g2 == g) {
                        return Err(domain(format!("group {g} listed twice")));
                    }
                }
            }
            EffectVariety::LinearSubspace { s, through_first } => {
                let n = projective_n()?;
                if *s == 0 || *s >= n {
                    return Err(domain(format!("subspace dimension {s} outside 1..{n}")));
                }
                if *through_first > h.min(*s as usize + 1) {
                    return Err(domain(format!(
                        "a P^{s} contains at most {} general points of the system",
                        h.min(*s as usize + 1)
                    )));
                }
            }
            EffectVariety::RationalNormalCurve => {
                if projective_n()? < 2 {
                    return Err(domain("rational normal curves need n >= 2"));
                }
            }
            EffectVariety::RationalCurveP3 { e } => {
                if projective_n()? != 3 {
                    return Err(domain("rational curves of this class live in P^3"));
                }
                if *e == 0 {
                    return Err(domain("curve degree must be >= 1"));
                }
            }
            EffectVariety::Line {
                through_pair: (i, j),
            } => {
                if projective_n()? < 2 {
                    return Err(domain("lines need n >= 2"));
                }
                if i == j || *i >= h || *j >= h {
                    return Err(domain(format!("bad point pair ({i}, {j}) for {h} points")));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for EffectVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffectVariety::Hypersurface {
                multidegree,
                point_mults,
            } => {
                let e: Vec<String> = multidegree.iter().map(u32::to_string).collect();
                let c: Vec<String> = point_mults
                    .iter()
                    .map(|(g, c)| format!("g{g}:{c}"))
                    .collect();
                write!(f, "divisor ({}) through [{}]", e.join(","), c.join(","))
            }
            EffectVariety::LinearSubspace { s, through_first } => {
                write!(f, "P^{s} through {through_first} points")
            }
            EffectVariety::RationalNormalCurve => f.write_str("rational normal curve"),
            EffectVariety::RationalCurveP3 { e } => {
                write!(f, "rational curve of degree {e} in P^3")
            }
            EffectVariety::Line {
                through_pair: (i, j),
            } => write!(f, "line P{i}P{j}"),
        }
    }
}

/// Points a smooth rational curve of degree `e` in `P^3` can pass through in
/// general position: a line meets 2, a conic is planar so 3, and otherwise
/// the parameter count `4e ≥ 2h`.
pub(crate) fn p3_curve_point_bound(e: u32) -> usize {
    match e {
        1 => 2,
        2 => 3,
        _ => 2 * e as usize,
    }
}

/// `L − αY` for a divisor `Y`: multidegree `d − α·e`, multiplicities
/// `max(m_j − α·c_j, 0)`.
pub fn residual_divisor(sys: &LinearSystem, y: &EffectVariety, alpha: u32) -> Result<LinearSystem> {
    let EffectVariety::Hypersurface {
        multidegree,
        point_mults,
    } = y
    else {
        return Err(domain("residual_divisor needs a hypersurface"));
    };
    y.validate(sys)?;
    if alpha == 0 {
        return Err(domain("alpha must be >= 1"));
    }
    let mut degree = Vec::with_capacity(multidegree.len());
    for (&d, &e) in sys.multidegree().iter().zip(multidegree) {
        degree.push(
            d.checked_sub(alpha * e)
                .ok_or_else(|| domain(format!("alpha*e = {} exceeds degree {d}", alpha * e)))?,
        );
    }
    let points = sys
        .groups()
        .iter()
        .enumerate()
        .map(|(g, grp)| {
            let c = point_mults
                .iter()
                .find(|&&(gg, _)| gg == g)
                .map_or(0, |&(_, c)| c);
            FatPointGroup::new(grp.multiplicity.saturating_sub(alpha * c), grp.count)
        })
        .collect();
    LinearSystem::new(sys.space().clone(), degree, points)
}

/// Conditions a point of multiplicity `m` on `α·P^s ⊂ P^n` imposes beyond
/// those of the subspace: `Σ_{k=α}^{m−1} binom(k+n−s−1, n−s−1)·binom(m−1−k+s, s)`.
fn subspace_excess(m: u32, alpha: u32, n: u32, s: u32) -> Result<BigInt> {
    let (n, s) = (n as i64, s as i64);
    let mut acc = BigInt::zero();
    for k in alpha as i64..m as i64 {
        acc += binom(k + n - s - 1, n - s - 1)? * binom(m as i64 - 1 - k + s, s)?;
    }
    Ok(acc)
}

/// Conditions imposed on degree-`d` forms by vanishing to order `alpha`
/// along a `P^s ⊂ P^n`.
fn subspace_conditions(d: u32, alpha: u32, n: u32, s: u32) -> Result<BigInt> {
    let (d, n, s) = (d as i64, n as i64, s as i64);
    let mut acc = BigInt::zero();
    for i in 0..(alpha as i64).min(d + 1) {
        acc += binom(d + s - i, s)? * binom(n - s - 1 + i, i)?;
    }
    Ok(acc)
}

pub(crate) fn linear_residual_on(
    sys: &LinearSystem,
    s: u32,
    alpha: u32,
    on: &[usize],
) -> Result<BigInt> {
    let Some(d) = sys.degree() else {
        return Err(unsupported(
            "linear-space residuals are only defined on P^n",
        ));
    };
    let n = sys.space().factors()[0];
    if s == 0 || s >= n || alpha == 0 {
        return Err(domain(format!(
            "need 1 <= s < n and alpha >= 1 (s={s}, n={n})"
        )));
    }
    let mut nu = binom(d as i64 + n as i64, n as i64)? - 1 - subspace_conditions(d, alpha, n, s)?;
    for (i, &m) in sys.point_multiplicities().iter().enumerate() {
        if on.contains(&i) {
            nu -= subspace_excess(m, alpha, n, s)?;
        } else {
            nu -= point_conditions(m, sys.space())?;
        }
    }
    Ok(nu)
}

/// Virtual dimension of `L − α·P^s` where the first `through_first` points
/// lie on the subspace and the others impose their full conditions.
pub fn linear_space_residual_nu(
    sys: &LinearSystem,
    s: u32,
    alpha: u32,
    through_first: usize,
) -> Result<BigInt> {
    if through_first > sys.point_count() {
        return Err(domain("more points on the subspace than in the system"));
    }
    let on: Vec<usize> = (0..through_first).collect();
    linear_residual_on(sys, s, alpha, &on)
}

/// `ν(|dH − 2C_n|) = binom(d+n, n) − 1 − ((d−1)n² + 2)` for `d ≥ 3`.
pub fn rnc_double_residual_nu(d: u32, n: u32) -> Result<BigInt> {
    if d < 3 {
        return Err(unsupported(format!(
            "the double rational normal curve rule needs d >= 3 (got {d})"
        )));
    }
    if n < 2 {
        return Err(domain("rational normal curves need n >= 2"));
    }
    let (d, n) = (d as i64, n as i64);
    Ok(binom(d + n, n)? - 1 - ((d - 1) * n * n + 2))
}

/// `χ(O(dH̃ − 2R))` on the blow-up of `P^3` along a smooth rational curve of
/// degree `e`: `binom(d+3, 3) − 3de + 4e − 5`.
pub fn p3_rational_curve_chi(d: u32, e: u32) -> Result<BigInt> {
    if d == 0 || e == 0 {
        return Err(domain("need d, e >= 1"));
    }
    let (d, e) = (d as i64, e as i64);
    Ok(binom(d + 3, 3)? - 3 * d * e + 4 * e - 5)
}

/// Degrees `d` for which `P^s ⊂ P^3` through `s+1` points of multiplicity
/// `m` satisfies the special inequality with `α = m`, as a closed interval
/// (`None` when empty).
///
/// For a line the condition is `m ≤ d < (4m−1)/3`; for a plane it is
/// `m ≤ d < m/2 − 2 + √(33m² + 108m + 84)/6`, evaluated with an exact
/// integer square root.
pub fn homogeneous_linear_sev_range(n: u32, s: u32, m: u32) -> Result<Option<(u32, u32)>> {
    if m == 0 {
        return Err(domain("m must be >= 1"));
    }
    let hi: i64 = match (n, s) {
        (3, 1) => (4 * m as i64 - 2).div_euclid(3),
        (3, 2) => {
            let m = m as i64;
            let r = 33 * m * m + 108 * m + 84;
            let root = r.sqrt();
            let num = 3 * m - 12 + root;
            if root * root == r {
                // strict bound at an integer point
                num.div_euclid(6) - i64::from(num.rem_euclid(6) == 0)
            } else {
                num.div_euclid(6)
            }
        }
        _ => {
            return Err(unsupported(format!(
                "homogeneous range only for P^1 or P^2 in P^3, not P^{s} in P^{n}"
            )))
        }
    };
    Ok((hi >= m as i64).then_some((m, hi as u32)))
}

/// Virtual dimension of `L − αY`; `None` when the class has no rule for
/// this `α`.
pub fn residual_nu(sys: &LinearSystem, y: &EffectVariety, alpha: u32) -> Result<Option<BigInt>> {
    y.validate(sys)?;
    match y {
        EffectVariety::Hypersurface { .. } => {
            Ok(Some(virtual_dim(&residual_divisor(sys, y, alpha)?)?))
        }
        EffectVariety::LinearSubspace { s, through_first } => Ok(Some(linear_space_residual_nu(
            sys,
            *s,
            alpha,
            *through_first,
        )?)),
        EffectVariety::Line {
            through_pair: (i, j),
        } => Ok(Some(linear_residual_on(sys, 1, alpha, &[*i, *j])?)),
        EffectVariety::RationalNormalCurve => {
            if alpha != 2 {
                return Ok(None);
            }
            let d = sys.degree().expect("validated");
            let n = sys.space().factors()[0];
            if !sys.point_multiplicities().iter().all(|&m| m == 2) {
                return Err(unsupported(
                    "the rational normal curve rule needs double points",
                ));
            }
            let off = sys.point_count() - y.points_on(sys).len();
            Ok(Some(
                rnc_double_residual_nu(d, n)? - BigInt::from(off) * (n + 1),
            ))
        }
        EffectVariety::RationalCurveP3 { e } => {
            if alpha != 2 {
                return Ok(None);
            }
            let d = sys.degree().expect("validated");
            if !sys.point_multiplicities().iter().all(|&m| m == 2) {
                return Err(unsupported("the rational curve rule needs double points"));
            }
            let off = sys.point_count() - y.points_on(sys).len();
            Ok(Some(
                p3_rational_curve_chi(d, *e)? - 1 - BigInt::from(off) * 4,
            ))
        }
    }
}

/// Virtual dimension of the divisor's own system `|Y|` through its points.
pub(crate) fn divisor_existence_nu(sys: &LinearSystem, y: &EffectVariety) -> Result<BigInt> {
    let EffectVariety::Hypersurface {
        multidegree,
        point_mults,
    } = y
    else {
        return Err(domain("not a divisor"));
    };
    let points = point_mults
        .iter()
        .map(|&(g, c)| FatPointGroup::new(c, sys.groups()[g].count))
        .collect();
    let space: Space = sys.space().clone();
    virtual_dim(&LinearSystem::new(space, multidegree.clone(), points)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn sys(n: u32, d: u32, groups: &[(u32, u32)]) -> LinearSystem {
        LinearSystem::projective(n, d, groups).unwrap()
    }

    #[test]
    fn residual_divisors() {
        let lu = sys(3, 9, &[(6, 1), (4, 8)]);
        let q = EffectVariety::through_all(&lu, vec![2]);
        assert_eq!(
            residual_divisor(&lu, &q, 1).unwrap(),
            sys(3, 7, &[(5, 1), (3, 8)])
        );
        let ex = sys(3, 6, &[(4, 3)]);
        let plane = EffectVariety::through_all(&ex, vec![1]);
        assert_eq!(
            residual_divisor(&ex, &plane, 2).unwrap(),
            sys(3, 4, &[(2, 3)])
        );
        let ah = sys(4, 2, &[(2, 3)]);
        let hyper = EffectVariety::through_all(&ah, vec![1]);
        assert_eq!(
            residual_divisor(&ah, &hyper, 2).unwrap(),
            sys(4, 0, &[(0, 3)])
        );
        assert!(residual_divisor(&ah, &hyper, 3).is_err());
    }

    #[test]
    fn linear_space_values() {
        assert_eq!(
            linear_space_residual_nu(&sys(3, 4, &[]), 1, 2, 0).unwrap(),
            bi(21)
        );
        assert_eq!(
            linear_space_residual_nu(&sys(3, 2, &[]), 1, 2, 0).unwrap(),
            bi(2)
        );
        // |2H − 2·P^{h−1}| with all h points on it: ν ≥ 0 for 2 ≤ h ≤ n
        for n in 2..=8u32 {
            for h in 2..=n {
                let nu =
                    linear_space_residual_nu(&sys(n, 2, &[(2, h)]), h - 1, 2, h as usize).unwrap();
                assert!(nu >= bi(0), "n={n} h={h}");
            }
        }
    }

    #[test]
    fn hyperplane_rule_matches_divisor_rule() {
        // For s = n−1 the subspace is a hyperplane; both rules must agree.
        for n in 2..=4u32 {
            for d in 1..=6u32 {
                for alpha in 1..=d {
                    for m in 1..=5u32 {
                        let s = sys(n, d, &[(m, n), (2, 1)]);
                        let on = (0..n as usize).collect::<Vec<_>>();
                        let lin = linear_residual_on(&s, n - 1, alpha, &on).unwrap();
                        let y = EffectVariety::Hypersurface {
                            multidegree: vec![1],
                            point_mults: vec![(0, 1)],
                        };
                        let div = virtual_dim(&residual_divisor(&s, &y, alpha).unwrap()).unwrap();
                        assert_eq!(lin, div, "n={n} d={d} alpha={alpha} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn rnc_values() {
        assert_eq!(rnc_double_residual_nu(3, 3).unwrap(), bi(-1));
        assert_eq!(rnc_double_residual_nu(4, 2).unwrap(), bi(0));
        assert_eq!(rnc_double_residual_nu(3, 4).unwrap(), bi(0));
        assert!(matches!(
            rnc_double_residual_nu(2, 3),
            Err(crate::Error::Unsupported(_))
        ));
    }

    #[test]
    fn rnc_formula_against_independent_evaluation() {
        let c = |a: i64, b: i64| -> i64 { (0..b).fold(1i64, |acc, i| acc * (a - i) / (i + 1)) };
        for d in 3..=12i64 {
            for n in 2..=8i64 {
                let expect = c(d + n, n) - 1 - ((d - 1) * n * n + 2);
                assert_eq!(
                    rnc_double_residual_nu(d as u32, n as u32).unwrap(),
                    bi(expect)
                );
            }
        }
    }

    #[test]
    fn chi_values() {
        assert_eq!(p3_rational_curve_chi(2, 1).unwrap(), bi(3));
        assert_eq!(p3_rational_curve_chi(2, 2).unwrap(), bi(1));
        assert_eq!(p3_rational_curve_chi(3, 1).unwrap(), bi(10));
    }

    #[test]
    fn chi_of_a_line_is_one_more_than_the_linear_rule() {
        for d in 1..=10u32 {
            let chi = p3_rational_curve_chi(d, 1).unwrap();
            let nu = linear_space_residual_nu(&sys(3, d, &[]), 1, 2, 0).unwrap();
            assert_eq!(chi - 1, nu, "d={d}");
        }
    }

    #[test]
    fn homogeneous_ranges() {
        assert_eq!(homogeneous_linear_sev_range(3, 1, 4).unwrap(), Some((4, 4)));
        assert_eq!(homogeneous_linear_sev_range(3, 1, 3).unwrap(), Some((3, 3)));
        assert_eq!(homogeneous_linear_sev_range(3, 1, 1).unwrap(), None);
        assert!(homogeneous_linear_sev_range(4, 1, 3).is_err());
        assert!(homogeneous_linear_sev_range(3, 2, 2).unwrap().is_some());
    }

    #[test]
    fn homogeneous_ranges_match_the_special_inequality() {
        // α = m, s+1 points on Y: the gain over ν(L) must be positive exactly
        // on the interval.
        for (s, pts) in [(1u32, 2u32), (2, 3)] {
            for m in 1..=12u32 {
                let range = homogeneous_linear_sev_range(3, s, m).unwrap();
                for d in m..=3 * m + 4 {
                    let l = sys(3, d, &[(m, pts)]);
                    let gain = linear_space_residual_nu(&l, s, m, pts as usize).unwrap()
                        - virtual_dim(&l).unwrap();
                    let inside = range.is_some_and(|(lo, hi)| lo <= d && d <= hi);
                    assert_eq!(gain > bi(0), inside, "s={s} m={m} d={d}");
                }
            }
        }
    }
}
