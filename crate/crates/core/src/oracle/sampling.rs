use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::PrimeField;
use crate::error::{domain, Error, Result};
use crate::systems::Space;

/// A point of a product of projective spaces: one coordinate vector per
/// factor, each scaled so that its largest-index nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub coords: Vec<Vec<u64>>,
}

impl Point {
    /// Normalize every factor; fails if a factor vector is zero.
    pub fn new(coords: Vec<Vec<u64>>, f: &PrimeField) -> Result<Self> {
        let mut out = Vec::with_capacity(coords.len());
        for v in coords {
            let c = chart_of(&v).ok_or_else(|| domain("zero coordinate vector"))?;
            let inv = f.inv(v[c]);
            out.push(v.iter().map(|&x| f.mul(x % f.p(), inv)).collect());
        }
        Ok(Point { coords: out })
    }

    /// Chart index (largest-index nonzero coordinate) of every factor.
    pub fn charts(&self) -> Vec<usize> {
        self.coords
            .iter()
            .map(|v| chart_of(v).expect("normalized points are nonzero"))
            .collect()
    }
}

fn chart_of(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&x| x != 0)
}

/// Where sampled points are allowed to lie.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointConstraint {
    /// Uniformly random points.
    None,
    /// All points inside one random `s`-dimensional linear subspace of `P^n`.
    InSubspace(u32),
    /// The first `min(h, n+1)` points are the coordinate points of `P^n`;
    /// any further points are random.
    CoordinatePoints,
}

const MAX_RETRIES: u32 = 64;

/// The random stream for `(seed, trial)`.
pub(crate) fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub(crate) fn random_vector(len: usize, f: &PrimeField, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..len).map(|_| rng.random_range(0..f.p())).collect()
}

/// `h` points of `space`, deterministic in `(seed, trial)`.
///
/// A draw is rejected and repeated when a factor vector is zero or two
/// points coincide; after a bounded number of attempts this is a sampling
/// error.
pub fn sample_points(
    space: &Space,
    h: usize,
    f: &PrimeField,
    seed: u64,
    trial: u32,
    constraint: PointConstraint,
) -> Result<Vec<Point>> {
    let mut rng = trial_rng(seed, trial);
    sample_with(space, h, f, &mut rng, constraint)
}

pub(crate) fn sample_with(
    space: &Space,
    h: usize,
    f: &PrimeField,
    rng: &mut ChaCha8Rng,
    constraint: PointConstraint,
) -> Result<Vec<Point>> {
    if !matches!(constraint, PointConstraint::None) && !space.is_projective() {
        return Err(domain("point constraints need a single projective factor"));
    }
    let n = space.factors()[0] as usize;
    for _ in 0..MAX_RETRIES {
        let raw: Vec<Vec<Vec<u64>>> = match constraint {
            PointConstraint::None => (0..h)
                .map(|_| {
                    space
                        .factors()
                        .iter()
                        .map(|&ni| random_vector(ni as usize + 1, f, rng))
                        .collect()
                })
                .collect(),
            PointConstraint::InSubspace(s) => {
                if s as usize > n {
                    return Err(domain(format!("subspace dimension {s} exceeds {n}")));
                }
                let basis: Vec<Vec<u64>> = (0..=s).map(|_| random_vector(n + 1, f, rng)).collect();
                (0..h)
                    .map(|_| {
                        let lam = random_vector(s as usize + 1, f, rng);
                        let mut v = vec![0u64; n + 1];
                        for (l, q) in lam.iter().zip(&basis) {
                            for (x, &y) in v.iter_mut().zip(q) {
                                *x = f.add(*x, f.mul(*l, y));
                            }
                        }
                        vec![v]
                    })
                    .collect()
            }
            PointConstraint::CoordinatePoints => (0..h)
                .map(|i| {
                    if i <= n {
                        let mut v = vec![0u64; n + 1];
                        v[i] = 1;
                        vec![v]
                    } else {
                        vec![random_vector(n + 1, f, rng)]
                    }
                })
                .collect(),
        };
        let pts: Option<Vec<Point>> = raw.into_iter().map(|c| Point::new(c, f).ok()).collect();
        let Some(pts) = pts else { continue };
        let distinct = (0..pts.len()).all(|i| (0..i).all(|j| pts[i] != pts[j]));
        if distinct {
            return Ok(pts);
        }
    }
    Err(Error::Sampling(format!(
        "no admissible sample of {h} points after {MAX_RETRIES} attempts"
    )))
}
