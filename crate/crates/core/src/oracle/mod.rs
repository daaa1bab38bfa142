//! Actual dimensions of linear systems by exact rank computation over a
//! prime field at random points.
//!
//! Specialising the points can only raise `h⁰`, so the smallest `h⁰` seen
//! over independent trials is the generic value with overwhelming
//! probability. Every result records the prime and seed that produced it.

mod field;
mod rows;
mod sampling;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use field::PrimeField;
pub use rows::{fat_point_rows, line_multiplicity_rows, subspace_rows, Columns};
pub use sampling::{sample_points, Point, PointConstraint};

use crate::error::{domain, unsupported, Result};
use crate::systems::{expected_dim, LinearSystem, Space};

/// Matrices larger than this many columns are refused.
const MAX_COLUMNS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub prime: PrimeField,
    pub trials: u32,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            prime: PrimeField::default(),
            trials: 3,
            seed: 0x5eed,
        }
    }
}

impl OracleConfig {
    pub fn new(prime: u64, trials: u32, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(domain("trials must be >= 1"));
        }
        Ok(OracleConfig {
            prime: PrimeField::new(prime)?,
            trials,
            seed,
        })
    }

    pub fn with_prime(&self, prime: u64) -> Result<Self> {
        OracleConfig::new(prime, self.trials, self.seed)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        OracleConfig { seed, ..*self }
    }
}

/// Extra base locus: the linear span of some system points (plus `extra`
/// further general points) with multiplicity `alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceScheme {
    /// Indices into the expanded point list of the system.
    pub through: Vec<usize>,
    pub extra: u32,
    pub alpha: u32,
}

impl SubspaceScheme {
    pub fn line(i: usize, j: usize, alpha: u32) -> Self {
        SubspaceScheme {
            through: vec![i, j],
            extra: 0,
            alpha,
        }
    }

    /// Dimension of the span.
    pub fn dim(&self) -> usize {
        self.through.len() + self.extra as usize - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub h0: i64,
    /// `conditions − rank`; only defined for pure fat-point systems.
    pub h1: Option<i64>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub expected_dim: i64,
    pub special: bool,
    #[serde(rename = "trials")]
    pub trials_used: u32,
    pub prime: u64,
    pub seed: u64,
}

impl OracleResult {
    /// Actual projective dimension `h⁰ − 1`.
    pub fn dim(&self) -> i64 {
        self.h0 - 1
    }
}

fn check_system(sys: &LinearSystem, cfg: &OracleConfig) -> Result<usize> {
    if !sys.space().is_projective() && sys.max_multiplicity() > 2 {
        return Err(unsupported(format!(
            "multiplicity {} on a product space",
            sys.max_multiplicity()
        )));
    }
    let max_d = sys.multidegree().iter().copied().max().unwrap_or(0) as u64;
    if cfg.prime.p() <= max_d {
        return Err(domain(format!(
            "prime {} must exceed the degree {max_d}",
            cfg.prime.p()
        )));
    }
    let cols = crate::systems::monomial_count(sys.space(), sys.multidegree())?;
    match cols.to_usize() {
        Some(c) if c <= MAX_COLUMNS => Ok(c),
        _ => Err(unsupported(format!(
            "{cols} monomials exceed the oracle limit of {MAX_COLUMNS}"
        ))),
    }
}

fn trial_rank(
    sys: &LinearSystem,
    cols: &Columns,
    schemes: &[SubspaceScheme],
    cfg: &OracleConfig,
    trial: u32,
) -> Result<(usize, usize)> {
    let f = &cfg.prime;
    let h = sys.point_count();
    let extra: usize = schemes.iter().map(|s| s.extra as usize).sum();
    let mut rng = sampling::trial_rng(cfg.seed, trial);
    let pts = sampling::sample_with(sys.space(), h + extra, f, &mut rng, PointConstraint::None)?;
    let mut rows = Vec::new();
    for (pt, m) in pts.iter().zip(sys.point_multiplicities()) {
        rows.extend(fat_point_rows(cols, pt, m, f)?);
    }
    let mut next_extra = h;
    for s in schemes {
        let mut span: Vec<Vec<u64>> = Vec::new();
        for &i in &s.through {
            let pt = pts
                .get(i)
                .filter(|_| i < h)
                .ok_or_else(|| domain(format!("scheme refers to point {i} of {h}")))?;
            span.push(pt.coords[0].clone());
        }
        for _ in 0..s.extra {
            span.push(pts[next_extra].coords[0].clone());
            next_extra += 1;
        }
        rows.extend(subspace_rows(cols, &span, s.alpha, f)?);
    }
    let nrows = rows.len();
    Ok((f.rank(rows), nrows))
}

/// Generic `h⁰` of `sys` with the extra subspace schemes imposed.
pub fn h0_oracle(
    sys: &LinearSystem,
    cfg: &OracleConfig,
    schemes: &[SubspaceScheme],
) -> Result<OracleResult> {
    let ncols = check_system(sys, cfg)?;
    if !schemes.is_empty() && !sys.space().is_projective() {
        return Err(unsupported("subspace schemes on a product space"));
    }
    if schemes
        .iter()
        .any(|s| s.through.len() + s.extra as usize == 0)
    {
        return Err(domain(
            "a subspace scheme needs at least one spanning point",
        ));
    }
    let cols = Columns::new(sys.space(), sys.multidegree());
    debug_assert_eq!(cols.len(), ncols);
    let results: Vec<(usize, usize)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| trial_rank(sys, &cols, schemes, cfg, t))
        .collect::<Result<_>>()?;
    let rank = results.iter().map(|r| r.0).max().unwrap_or(0);
    let nrows = results.first().map_or(0, |r| r.1);
    let h0 = (ncols - rank) as i64;
    let expected = expected_dim(sys)?
        .to_i64()
        .ok_or_else(|| unsupported("expected dimension out of range"))?;
    let h1 = schemes.is_empty().then(|| nrows as i64 - rank as i64);
    Ok(OracleResult {
        h0,
        h1,
        rank,
        rows: nrows,
        cols: ncols,
        expected_dim: expected,
        special: h0 - 1 > expected,
        trials_used: cfg.trials,
        prime: cfg.prime.p(),
        seed: cfg.seed,
    })
}

/// `h¹ = conditions − rank` of a fat-point system.
pub fn h1_oracle(sys: &LinearSystem, cfg: &OracleConfig) -> Result<i64> {
    let r = h0_oracle(sys, cfg, &[])?;
    Ok(r.h1.expect("pure fat-point systems have h1"))
}

/// Whether the actual dimension exceeds the expected one.
pub fn is_special_oracle(sys: &LinearSystem, cfg: &OracleConfig) -> Result<OracleResult> {
    h0_oracle(sys, cfg, &[])
}

/// The same computation under two primes and two seeds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub runs: Vec<OracleResult>,
    pub agreed: bool,
    pub h0: i64,
}

/// Runs `cfg` and a second configuration with a different prime and seed.
/// On disagreement a third prime decides, and the minimum `h⁰` is kept.
pub fn cross_check(
    sys: &LinearSystem,
    cfg: &OracleConfig,
    schemes: &[SubspaceScheme],
) -> Result<CrossCheck> {
    let alt_prime = if cfg.prime.p() == PrimeField::SECOND_PRIME {
        PrimeField::DEFAULT_PRIME
    } else {
        PrimeField::SECOND_PRIME
    };
    let alt = cfg
        .with_prime(alt_prime)?
        .with_seed(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let a = h0_oracle(sys, cfg, schemes)?;
    let b = h0_oracle(sys, &alt, schemes)?;
    if a.h0 == b.h0 {
        let h0 = a.h0;
        return Ok(CrossCheck {
            runs: vec![a, b],
            agreed: true,
            h0,
        });
    }
    let third = cfg
        .with_prime(PrimeField::THIRD_PRIME)?
        .with_seed(cfg.seed.rotate_left(17));
    let c = h0_oracle(sys, &third, schemes)?;
    let h0 = a.h0.min(b.h0).min(c.h0);
    Ok(CrossCheck {
        runs: vec![a, b, c],
        agreed: false,
        h0,
    })
}

/// The system cut out on a linear subspace `P^s` spanned by the first
/// `points_on` points: same degree, those points with their multiplicities.
pub fn restrict_to_subspace(sys: &LinearSystem, s: u32, points_on: usize) -> Result<LinearSystem> {
    let Some(d) = sys.degree() else {
        return Err(domain("restriction to a subspace needs P^n"));
    };
    let n = sys.space().factors()[0];
    if s == 0 || s > n {
        return Err(domain(format!("subspace dimension {s} outside 1..={n}")));
    }
    if s == n {
        return Ok(sys.clone());
    }
    if points_on > sys.point_count() {
        return Err(domain(format!(
            "{points_on} points requested but the system has {}",
            sys.point_count()
        )));
    }
    let mults = &sys.point_multiplicities()[..points_on];
    LinearSystem::new(
        Space::projective(s)?,
        vec![d],
        crate::systems::group_runs(mults),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    fn sys(n: u32, d: u32, groups: &[(u32, u32)]) -> LinearSystem {
        LinearSystem::projective(n, d, groups).unwrap()
    }

    #[test]
    fn ah_members() {
        let r = h0_oracle(&sys(4, 3, &[(2, 7)]), &cfg(), &[]).unwrap();
        assert_eq!((r.h0, r.h1, r.special), (1, Some(1), true));
        let r = is_special_oracle(&sys(2, 4, &[(2, 5)]), &cfg()).unwrap();
        assert!(r.special);
        let r = is_special_oracle(&sys(2, 5, &[(2, 6)]), &cfg()).unwrap();
        assert!(!r.special);
    }

    #[test]
    fn h1_values() {
        assert_eq!(h1_oracle(&sys(3, 2, &[(2, 3)]), &cfg()).unwrap(), 3);
        assert_eq!(h1_oracle(&sys(3, 4, &[(2, 9)]), &cfg()).unwrap(), 2);
        assert_eq!(h1_oracle(&sys(3, 4, &[(2, 8)]), &cfg()).unwrap(), 0);
    }

    #[test]
    fn tetrahedron_system() {
        let r = is_special_oracle(&sys(3, 4, &[(3, 4)]), &cfg()).unwrap();
        assert_eq!(r.h0, 1);
        assert!(r.special);
    }

    #[test]
    fn deterministic() {
        let s = sys(3, 6, &[(4, 3)]);
        assert_eq!(
            h0_oracle(&s, &cfg(), &[]).unwrap(),
            h0_oracle(&s, &cfg(), &[]).unwrap()
        );
    }

    #[test]
    fn triple_double_lines_are_in_the_base_locus() {
        let s = sys(3, 6, &[(4, 3)]);
        let lines = [
            SubspaceScheme::line(0, 1, 2),
            SubspaceScheme::line(0, 2, 2),
            SubspaceScheme::line(1, 2, 2),
        ];
        let r = h0_oracle(&s, &cfg(), &lines).unwrap();
        assert_eq!(r.h0, 27);
        assert_eq!(r.h1, None);
    }

    #[test]
    fn restriction() {
        let r = restrict_to_subspace(&sys(5, 2, &[(2, 3)]), 2, 3).unwrap();
        assert_eq!(r, sys(2, 2, &[(2, 3)]));
        let s = sys(3, 6, &[(4, 3)]);
        assert_eq!(
            restrict_to_subspace(&s, 2, 3).unwrap(),
            sys(2, 6, &[(4, 3)])
        );
        assert_eq!(restrict_to_subspace(&s, 3, 3).unwrap(), s);
        assert!(restrict_to_subspace(&s, 0, 3).is_err());
        assert!(restrict_to_subspace(&s, 4, 3).is_err());
    }

    #[test]
    fn products() {
        let s = LinearSystem::double_points(&[1, 1], &[2, 2], 3).unwrap();
        let r = is_special_oracle(&s, &cfg()).unwrap();
        assert_eq!((r.h0, r.special), (1, true));
        let s = LinearSystem::double_points(&[1, 1, 1], &[2, 2, 2], 7).unwrap();
        assert_eq!(is_special_oracle(&s, &cfg()).unwrap().h0, 1);
        let bad = LinearSystem::new(
            Space::new(vec![1, 1]).unwrap(),
            vec![4, 4],
            vec![crate::systems::FatPointGroup::new(3, 1)],
        )
        .unwrap();
        assert!(matches!(
            is_special_oracle(&bad, &cfg()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn two_primes_agree() {
        let c = cross_check(&sys(3, 9, &[(6, 1), (4, 8)]), &cfg(), &[]).unwrap();
        assert!(c.agreed);
        assert_eq!(c.h0, 5);
    }

    #[test]
    fn small_prime_is_rejected_for_high_degree() {
        let c = OracleConfig::new(5, 1, 0).unwrap();
        assert!(h0_oracle(&sys(2, 6, &[]), &c, &[]).is_err());
    }
}
