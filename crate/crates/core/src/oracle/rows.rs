//! Rows of the interpolation matrix. Columns are multihomogeneous monomials;
//! a row is a linear functional on their coefficients.

use std::collections::HashMap;

use super::field::PrimeField;
use super::sampling::Point;
use crate::error::{domain, unsupported, Result};
use crate::systems::Space;

/// Monomial basis of a multidegree, exponents flattened across factors.
#[derive(Debug, Clone)]
pub struct Columns {
    pub factors: Vec<u32>,
    pub monomials: Vec<Vec<u32>>,
    max_degree: u32,
}

impl Columns {
    pub fn new(space: &Space, multidegree: &[u32]) -> Self {
        let mut monomials: Vec<Vec<u32>> = vec![vec![]];
        for (&n, &d) in space.factors().iter().zip(multidegree) {
            let block = exponent_vectors(n as usize + 1, d);
            monomials = monomials
                .iter()
                .flat_map(|pre| {
                    block.iter().map(move |b| {
                        let mut v = pre.clone();
                        v.extend_from_slice(b);
                        v
                    })
                })
                .collect();
        }
        Columns {
            factors: space.factors().to_vec(),
            monomials,
            max_degree: multidegree.iter().copied().max().unwrap_or(0),
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// All exponent vectors of length `len` summing to `d`, lexicographically
/// descending in the first coordinate.
pub(crate) fn exponent_vectors(len: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(len: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if len == 1 {
            cur.push(d);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=d).rev() {
            cur.push(a);
            go(len - 1, d - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len > 0 {
        go(len, d, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

/// Falling factorials `ff[a][b] = a(a−1)…(a−b+1)` mod p for `a, b ≤ d`.
fn falling_table(d: u32, f: &PrimeField) -> Vec<Vec<u64>> {
    let d = d as usize;
    let mut t = vec![vec![0u64; d + 1]; d + 1];
    for (a, row) in t.iter_mut().enumerate() {
        row[0] = 1;
        for b in 1..=a {
            row[b] = f.mul(row[b - 1], (a - b + 1) as u64);
        }
    }
    t
}

fn powers(x: u64, d: u32, f: &PrimeField) -> Vec<u64> {
    let mut out = Vec::with_capacity(d as usize + 1);
    let mut acc = 1 % f.p();
    for _ in 0..=d {
        out.push(acc);
        acc = f.mul(acc, x);
    }
    out
}

/// Vanishing to order `m` at `point`: one row per derivative multi-index of
/// total order `≤ m−1` in the affine chart of each factor.
///
/// On `P^n` that is `binom(m+n−1, n)` rows; on a product with `m = 2` it is
/// the value row plus one row per affine direction.
pub fn fat_point_rows(
    cols: &Columns,
    point: &Point,
    m: u32,
    f: &PrimeField,
) -> Result<Vec<Vec<u64>>> {
    if m == 0 {
        return Ok(vec![]);
    }
    if cols.factors.len() > 1 && m > 2 {
        return Err(unsupported(format!("multiplicity {m} on a product space")));
    }
    let d = cols.max_degree;
    let ff = falling_table(d, f);
    let flat: Vec<u64> = point.coords.iter().flatten().copied().collect();
    let mut affine = Vec::new();
    let mut offset = 0;
    for (v, c) in point.coords.iter().zip(point.charts()) {
        affine.extend((0..v.len()).filter(|&j| j != c).map(|j| offset + j));
        offset += v.len();
    }
    let pw: Vec<Vec<u64>> = flat.iter().map(|&x| powers(x, d, f)).collect();

    let mut rows = Vec::new();
    for order in 0..m {
        for beta in exponent_vectors(affine.len(), order) {
            let row = cols
                .monomials
                .iter()
                .map(|a| {
                    let mut v = 1u64;
                    for (k, &j) in affine.iter().enumerate() {
                        let (aj, bj) = (a[j], beta[k]);
                        if bj > aj {
                            return 0;
                        }
                        v = f.mul(
                            v,
                            f.mul(ff[aj as usize][bj as usize], pw[j][(aj - bj) as usize]),
                        );
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Homogeneous polynomials in `v` variables, indexed by degree.
struct MonoIndex {
    by_degree: Vec<Vec<Vec<u32>>>,
    /// `shift[D][i][l]`: index in degree `D+1` of monomial `i` times `λ_l`.
    shift: Vec<Vec<Vec<usize>>>,
}

impl MonoIndex {
    fn new(v: usize, max_d: u32) -> Self {
        let by_degree: Vec<Vec<Vec<u32>>> = (0..=max_d).map(|d| exponent_vectors(v, d)).collect();
        let lookup: Vec<HashMap<&Vec<u32>, usize>> = by_degree
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        let shift = (0..max_d as usize)
            .map(|d| {
                by_degree[d]
                    .iter()
                    .map(|m| {
                        (0..v)
                            .map(|l| {
                                let mut up = m.clone();
                                up[l] += 1;
                                lookup[d + 1][&up]
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        MonoIndex { by_degree, shift }
    }
}

/// Vanishing to order `alpha` along the linear span of `spanning` in `P^n`.
///
/// For every homogeneous partial derivative of order `k ≤ alpha−1`, the
/// derivative is restricted to the parametrized span `Σ λ_l Q_l` and each
/// coefficient of the resulting form in `λ` gives one row. Rows may be
/// linearly dependent.
pub fn subspace_rows(
    cols: &Columns,
    spanning: &[Vec<u64>],
    alpha: u32,
    f: &PrimeField,
) -> Result<Vec<Vec<u64>>> {
    if cols.factors.len() != 1 {
        return Err(unsupported("subspace conditions on a product space"));
    }
    let n1 = cols.factors[0] as usize + 1;
    if spanning.is_empty() || spanning.iter().any(|q| q.len() != n1) {
        return Err(domain("spanning points must be coordinate vectors of P^n"));
    }
    let d = cols.max_degree;
    let v = spanning.len();
    let ff = falling_table(d, f);
    let index = MonoIndex::new(v, d);
    // ℓ_i(λ) = Σ_l Q_{l,i} λ_l
    let linear: Vec<Vec<u64>> = (0..n1)
        .map(|i| spanning.iter().map(|q| q[i] % f.p()).collect())
        .collect();

    let mut rows = Vec::new();
    for k in 0..alpha.min(d + 1) {
        let deg = (d - k) as usize;
        let nrows = index.by_degree[deg].len();
        let gammas = exponent_vectors(n1, k);
        for gamma in &gammas {
            let mut block = vec![vec![0u64; cols.len()]; nrows];
            for (c, a) in cols.monomials.iter().enumerate() {
                if a.iter().zip(gamma).any(|(x, g)| g > x) {
                    continue;
                }
                let mut coef = 1u64;
                for (x, g) in a.iter().zip(gamma) {
                    coef = f.mul(coef, ff[*x as usize][*g as usize]);
                }
                // Π ℓ_i^{a_i − γ_i}, built one linear factor at a time.
                let mut poly = vec![1u64];
                let mut cur = 0usize;
                for (i, (x, g)) in a.iter().zip(gamma).enumerate() {
                    for _ in 0..(x - g) {
                        let mut next = vec![0u64; index.by_degree[cur + 1].len()];
                        for (t, &pc) in poly.iter().enumerate() {
                            if pc == 0 {
                                continue;
                            }
                            for (l, &lc) in linear[i].iter().enumerate() {
                                let j = index.shift[cur][t][l];
                                next[j] = f.add(next[j], f.mul(pc, lc));
                            }
                        }
                        poly = next;
                        cur += 1;
                    }
                }
                for (r, &pc) in poly.iter().enumerate() {
                    block[r][c] = f.mul(pc, coef);
                }
            }
            rows.extend(block);
        }
    }
    Ok(rows)
}

/// Vanishing to order `alpha` along the line through `p` and `q`.
pub fn line_multiplicity_rows(
    cols: &Columns,
    p: &[u64],
    q: &[u64],
    alpha: u32,
    f: &PrimeField,
) -> Result<Vec<Vec<u64>>> {
    if f.rank(vec![p.to_vec(), q.to_vec()]) < 2 {
        return Err(domain("a line needs two distinct points"));
    }
    subspace_rows(cols, &[p.to_vec(), q.to_vec()], alpha, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::sampling::{sample_points, PointConstraint};

    fn p(n: u32) -> Space {
        Space::projective(n).unwrap()
    }

    #[test]
    fn column_counts() {
        assert_eq!(Columns::new(&p(3), &[9]).len(), 220);
        let s = Space::new(vec![1, 1, 1]).unwrap();
        assert_eq!(Columns::new(&s, &[2, 1, 1]).len(), 12);
        assert_eq!(exponent_vectors(3, 2).len(), 6);
    }

    #[test]
    fn fat_row_counts() {
        let f = PrimeField::default();
        let pt = &sample_points(&p(3), 1, &f, 1, 0, PointConstraint::None).unwrap()[0];
        let cols = Columns::new(&p(3), &[4]);
        assert_eq!(fat_point_rows(&cols, pt, 1, &f).unwrap().len(), 1);
        assert_eq!(fat_point_rows(&cols, pt, 2, &f).unwrap().len(), 4);
        assert_eq!(fat_point_rows(&cols, pt, 4, &f).unwrap().len(), 20);
        let cube = Space::new(vec![1, 1, 1]).unwrap();
        let pt = &sample_points(&cube, 1, &f, 1, 0, PointConstraint::None).unwrap()[0];
        let cols = Columns::new(&cube, &[2, 2, 2]);
        assert_eq!(fat_point_rows(&cols, pt, 2, &f).unwrap().len(), 4);
        assert!(fat_point_rows(&cols, pt, 3, &f).is_err());
    }

    #[test]
    fn value_row_is_evaluation() {
        let f = PrimeField::new(101).unwrap();
        let pt = Point::new(vec![vec![2, 3, 1]], &f).unwrap();
        let cols = Columns::new(&p(2), &[2]);
        let row = &fat_point_rows(&cols, &pt, 1, &f).unwrap()[0];
        for (a, &v) in cols.monomials.iter().zip(row) {
            let expect = f.pow(2, a[0] as u64) * f.pow(3, a[1] as u64) % 101;
            assert_eq!(v, expect);
        }
    }

    #[test]
    fn planes_through_a_line() {
        let f = PrimeField::default();
        let pts = sample_points(&p(3), 2, &f, 5, 0, PointConstraint::None).unwrap();
        let cols = Columns::new(&p(3), &[1]);
        let rows =
            line_multiplicity_rows(&cols, &pts[0].coords[0], &pts[1].coords[0], 1, &f).unwrap();
        assert_eq!(cols.len() - f.rank(rows), 2);
    }

    #[test]
    fn quadrics_double_along_a_line() {
        let f = PrimeField::default();
        let pts = sample_points(&p(3), 2, &f, 6, 0, PointConstraint::None).unwrap();
        let cols = Columns::new(&p(3), &[2]);
        let rows =
            line_multiplicity_rows(&cols, &pts[0].coords[0], &pts[1].coords[0], 2, &f).unwrap();
        assert_eq!(f.rank(rows), 7);
    }

    #[test]
    fn coincident_points_do_not_span_a_line() {
        let f = PrimeField::default();
        let cols = Columns::new(&p(3), &[2]);
        assert!(line_multiplicity_rows(&cols, &[1, 2, 3, 1], &[2, 4, 6, 2], 1, &f).is_err());
    }
}
