//! Linear systems of divisors with fat base points on `P^n` and on products
//! `P^{n_1} × … × P^{n_t}`, together with their naive condition counts.
//!
//! Points are anonymous: a system only records how many general points carry
//! each multiplicity. Coordinates are the oracle's business.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binom_unchecked;
use crate::error::{domain, unsupported, Error, Result};

/// A product of projective spaces, given by the factor dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Space {
    factors: Vec<u32>,
}

impl Space {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if factors.is_empty() {
            return Err(domain("a space needs at least one factor"));
        }
        if factors.contains(&0) {
            return Err(domain("every factor must have dimension >= 1"));
        }
        Ok(Space { factors })
    }

    /// `P^n`.
    pub fn projective(n: u32) -> Result<Self> {
        Space::new(vec![n])
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn is_projective(&self) -> bool {
        self.factors.len() == 1
    }

    /// Total dimension `Σ n_i`.
    pub fn dim(&self) -> u32 {
        self.factors.iter().sum()
    }
}

impl TryFrom<Vec<u32>> for Space {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Space::new(v)
    }
}

impl From<Space> for Vec<u32> {
    fn from(s: Space) -> Vec<u32> {
        s.factors
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|n| format!("P{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

/// `count` general points of multiplicity `multiplicity`.
///
/// Multiplicity 0 is accepted by [`LinearSystem::new`] so that residual
/// systems keep their group indices; it is rejected in user-supplied specs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FatPointGroup {
    #[serde(rename = "mult")]
    pub multiplicity: u32,
    pub count: u32,
}

impl FatPointGroup {
    pub fn new(multiplicity: u32, count: u32) -> Self {
        FatPointGroup {
            multiplicity,
            count,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    space: Space,
    degree: Vec<u32>,
    #[serde(default)]
    points: Vec<FatPointGroup>,
}

/// Divisors of a given multidegree with prescribed multiplicities at general
/// points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct LinearSystem {
    space: Space,
    #[serde(rename = "degree")]
    multidegree: Vec<u32>,
    points: Vec<FatPointGroup>,
}

impl TryFrom<RawSystem> for LinearSystem {
    type Error = Error;
    fn try_from(raw: RawSystem) -> Result<Self> {
        if let Some(g) = raw.points.iter().find(|g| g.multiplicity == 0) {
            return Err(Error::Spec(format!(
                "point group with count {} has multiplicity 0",
                g.count
            )));
        }
        LinearSystem::new(raw.space, raw.degree, raw.points)
    }
}

impl LinearSystem {
    pub fn new(space: Space, multidegree: Vec<u32>, points: Vec<FatPointGroup>) -> Result<Self> {
        if multidegree.len() != space.num_factors() {
            return Err(domain(format!(
                "multidegree has {} entries but the space has {} factors",
                multidegree.len(),
                space.num_factors()
            )));
        }
        if points.iter().any(|g| g.count == 0) {
            return Err(domain("point groups must have count >= 1"));
        }
        Ok(LinearSystem {
            space,
            multidegree,
            points,
        })
    }

    /// `L_{n,d}(groups)` on `P^n`, groups given as `(multiplicity, count)`.
    pub fn projective(n: u32, d: u32, groups: &[(u32, u32)]) -> Result<Self> {
        LinearSystem::new(
            Space::projective(n)?,
            vec![d],
            groups
                .iter()
                .map(|&(m, c)| FatPointGroup::new(m, c))
                .collect(),
        )
    }

    /// Multidegree `degree` on `P^{factors}` with `h` double points.
    pub fn double_points(factors: &[u32], degree: &[u32], h: u32) -> Result<Self> {
        let points = if h == 0 {
            vec![]
        } else {
            vec![FatPointGroup::new(2, h)]
        };
        LinearSystem::new(Space::new(factors.to_vec())?, degree.to_vec(), points)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("system serializes")
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn multidegree(&self) -> &[u32] {
        &self.multidegree
    }

    pub fn groups(&self) -> &[FatPointGroup] {
        &self.points
    }

    /// Degree on `P^n`; `None` on products.
    pub fn degree(&self) -> Option<u32> {
        self.space.is_projective().then(|| self.multidegree[0])
    }

    /// Total number of points `h`.
    pub fn point_count(&self) -> usize {
        self.points.iter().map(|g| g.count as usize).sum()
    }

    /// Multiplicity of every point, groups expanded in order.
    pub fn point_multiplicities(&self) -> Vec<u32> {
        self.points
            .iter()
            .flat_map(|g| std::iter::repeat_n(g.multiplicity, g.count as usize))
            .collect()
    }

    /// Group index of every point, groups expanded in order.
    pub fn point_groups(&self) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .flat_map(|(i, g)| std::iter::repeat_n(i, g.count as usize))
            .collect()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.points
            .iter()
            .map(|g| g.multiplicity)
            .max()
            .unwrap_or(0)
    }

    /// True when every point has multiplicity `m` (and there is at least one).
    pub fn is_homogeneous(&self, m: u32) -> bool {
        !self.points.is_empty() && self.points.iter().all(|g| g.multiplicity == m)
    }

    pub fn with_multidegree(&self, multidegree: Vec<u32>) -> Result<Self> {
        LinearSystem::new(self.space.clone(), multidegree, self.points.clone())
    }

    pub fn with_points(&self, points: Vec<FatPointGroup>) -> Result<Self> {
        LinearSystem::new(self.space.clone(), self.multidegree.clone(), points)
    }

    /// Rebuild the point list from per-point multiplicities, merging runs of
    /// equal multiplicity into groups.
    pub fn with_point_multiplicities(&self, mults: &[u32]) -> Result<Self> {
        self.with_points(group_runs(mults))
    }
}

pub(crate) fn group_runs(mults: &[u32]) -> Vec<FatPointGroup> {
    let mut out: Vec<FatPointGroup> = Vec::new();
    for &m in mults {
        match out.last_mut() {
            Some(g) if g.multiplicity == m => g.count += 1,
            _ => out.push(FatPointGroup::new(m, 1)),
        }
    }
    out
}

impl fmt::Display for LinearSystem {
    /// Shorthand form, e.g. `P3:d=9:6,4x8`; parses back with [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let deg: Vec<String> = self.multidegree.iter().map(u32::to_string).collect();
        write!(f, "{}:d={}", self.space, deg.join(","))?;
        if !self.points.is_empty() {
            let pts: Vec<String> = self
                .points
                .iter()
                .map(|g| {
                    if g.count == 1 {
                        g.multiplicity.to_string()
                    } else {
                        format!("{}x{}", g.multiplicity, g.count)
                    }
                })
                .collect();
            write!(f, ":{}", pts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for LinearSystem {
    type Err = Error;

    /// Parses `P<n>[xP<n>…]:d=<d>[,<d>…][:<m>[x<count>][,…]]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Spec(format!("{msg} in shorthand {s:?}"));
        let mut parts = s.trim().split(':');
        let space_part = parts.next().ok_or_else(|| bad("missing space"))?;
        let factors = space_part
            .split('x')
            .map(|f| {
                f.trim()
                    .strip_prefix('P')
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| bad("bad space factor"))
            })
            .collect::<Result<Vec<u32>>>()?;
        let degree_part = parts
            .next()
            .and_then(|p| p.trim().strip_prefix("d="))
            .ok_or_else(|| bad("missing d="))?;
        let degree = degree_part
            .split(',')
            .map(|d| d.trim().parse::<u32>().map_err(|_| bad("bad degree")))
            .collect::<Result<Vec<u32>>>()?;
        let mut points = Vec::new();
        if let Some(pts) = parts.next() {
            for item in pts.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                let (m, c) = match item.split_once('x') {
                    Some((m, c)) => (m, c),
                    None => (item, "1"),
                };
                let m = m.parse::<u32>().map_err(|_| bad("bad multiplicity"))?;
                let c = c.parse::<u32>().map_err(|_| bad("bad count"))?;
                if m == 0 {
                    return Err(bad("multiplicity 0"));
                }
                points.push(FatPointGroup::new(m, c));
            }
        }
        if parts.next().is_some() {
            return Err(bad("trailing fields"));
        }
        let space = Space::new(factors).map_err(|e| Error::Spec(e.to_string()))?;
        LinearSystem::new(space, degree, points).map_err(|e| Error::Spec(e.to_string()))
    }
}

/// `Π binom(d_i + n_i, n_i)`: the number of multihomogeneous monomials.
pub fn monomial_count(space: &Space, multidegree: &[u32]) -> Result<BigInt> {
    if multidegree.len() != space.num_factors() {
        return Err(domain("multidegree length does not match the space"));
    }
    Ok(space
        .factors()
        .iter()
        .zip(multidegree)
        .fold(BigInt::one(), |acc, (&n, &d)| {
            acc * binom_unchecked((d + n) as u64, n as i64)
        }))
}

/// Linear conditions imposed by one point of multiplicity `m`.
///
/// On `P^n` this is `binom(m+n−1, n)`. On products only `m ≤ 2` is defined:
/// a simple point imposes 1 condition, a double point `Σ n_i + 1`.
pub fn point_conditions(m: u32, space: &Space) -> Result<BigInt> {
    if m == 0 {
        return Ok(BigInt::zero());
    }
    if space.is_projective() {
        let n = space.factors()[0];
        return Ok(binom_unchecked((m + n - 1) as u64, n as i64));
    }
    match m {
        1 => Ok(BigInt::one()),
        2 => Ok(BigInt::from(space.dim() + 1)),
        _ => Err(unsupported(format!(
            "multiplicity {m} on a product space (only 1 and 2 are defined)"
        ))),
    }
}

fn conditions(sys: &LinearSystem) -> Result<BigInt> {
    sys.groups().iter().try_fold(BigInt::zero(), |acc, g| {
        Ok(acc + point_conditions(g.multiplicity, sys.space())? * g.count)
    })
}

/// `ν = monomials − 1 − Σ conditions`.
pub fn virtual_dim(sys: &LinearSystem) -> Result<BigInt> {
    Ok(monomial_count(sys.space(), sys.multidegree())? - 1 - conditions(sys)?)
}

/// `ε = max(ν, −1)`.
pub fn expected_dim(sys: &LinearSystem) -> Result<BigInt> {
    Ok(virtual_dim(sys)?.max(BigInt::from(-1)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimReport {
    #[serde(serialize_with = "crate::json::bigint")]
    pub monomials: BigInt,
    #[serde(serialize_with = "crate::json::bigint")]
    pub conditions: BigInt,
    #[serde(serialize_with = "crate::json::bigint")]
    pub virtual_dim: BigInt,
    #[serde(serialize_with = "crate::json::bigint")]
    pub expected_dim: BigInt,
}

pub fn dim_report(sys: &LinearSystem) -> Result<DimReport> {
    let monomials = monomial_count(sys.space(), sys.multidegree())?;
    let conditions = conditions(sys)?;
    let virtual_dim: BigInt = &monomials - 1 - &conditions;
    let expected_dim = virtual_dim.clone().max(BigInt::from(-1));
    Ok(DimReport {
        monomials,
        conditions,
        virtual_dim,
        expected_dim,
    })
}
