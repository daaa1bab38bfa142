use std::collections::BTreeMap;

use serde::Serialize;

use super::{residual_divisor, EffectVariety};
use crate::error::{domain, unsupported, Result};
use crate::oracle::{h0_oracle, restrict_to_subspace, OracleConfig, SubspaceScheme};
use crate::systems::LinearSystem;

/// Cohomological speciality of `L` along `Y`: `(a)` `H⁰(L|_Y) = 0`,
/// `(b)` `H⁰(L − Y) ≠ 0`, `(c)` `H¹(L|_Y) ≠ 0`, all with `H²(L − Y) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H1Report {
    pub variety: String,
    pub cond_a: bool,
    pub cond_b: bool,
    pub cond_c: bool,
    pub h2_handled: bool,
    pub cohomologically_special: bool,
    pub values: BTreeMap<String, i64>,
    pub notes: Vec<String>,
}

/// `(h⁰, h¹)` of `O_{P^1}(d·e − Σ m_i)` on a smooth rational curve of degree
/// `e` through points of multiplicities `mults_on_curve`.
pub fn curve_restriction_cohomology(
    sys: &LinearSystem,
    e: u32,
    mults_on_curve: &[u32],
) -> Result<(i64, i64)> {
    let Some(d) = sys.degree() else {
        return Err(unsupported("curve restrictions are only handled on P^n"));
    };
    if e == 0 {
        return Err(domain("curve degree must be >= 1"));
    }
    let deg = d as i64 * e as i64 - mults_on_curve.iter().map(|&m| m as i64).sum::<i64>();
    Ok(((deg + 1).max(0), (-deg - 1).max(0)))
}

/// Checks conditions (a)–(c) for `Y` with the oracle supplying the
/// cohomology of `L` and `L − Y`.
pub fn h1_sev_check(sys: &LinearSystem, y: &EffectVariety, cfg: &OracleConfig) -> Result<H1Report> {
    y.validate(sys)?;
    let mut values = BTreeMap::new();
    let mut notes = Vec::new();
    let l = h0_oracle(sys, cfg, &[])?;
    let h1_l = l.h1.expect("fat-point system");
    values.insert("h0(L)".to_string(), l.h0);
    values.insert("h1(L)".to_string(), h1_l);

    let (cond_a, cond_b, h1_restricted, h2_handled) = match y {
        EffectVariety::Hypersurface { multidegree, .. } => {
            if multidegree.as_slice() == sys.multidegree() {
                return Err(domain("Y is linearly equivalent to L"));
            }
            let res = residual_divisor(sys, y, 1)?;
            let r = h0_oracle(&res, cfg, &[])?;
            let h1_r = r.h1.expect("fat-point system");
            values.insert("h0(L-Y)".to_string(), r.h0);
            values.insert("h1(L-Y)".to_string(), h1_r);
            let cond_b = r.h0 > 0;
            // 0 → H⁰(L−Y) → H⁰(L) → H⁰(L|Y) → H¹(L−Y)
            let (cond_a, h1_restricted) = if h1_r == 0 {
                let h0_y = l.h0 - r.h0;
                values.insert("h0(L|Y)".to_string(), h0_y);
                (h0_y == 0, (h0_y == 0).then_some(h1_l))
            } else {
                notes.push(format!(
                    "h1(L-Y) = {h1_r} > 0: vanishing of H0(L|Y) not established"
                ));
                (false, None)
            };
            if cond_b {
                notes.push("h2(L-Y) = 0 since L-Y is effective".to_string());
            }
            (cond_a, cond_b, h1_restricted, cond_b)
        }
        EffectVariety::LinearSubspace { s, through_first } => {
            let restricted = restrict_to_subspace(sys, *s, *through_first)?;
            let r = h0_oracle(&restricted, cfg, &[])?;
            values.insert("h0(L|Y)".to_string(), r.h0);
            let h1_y = r.h1.expect("fat-point system");
            let scheme = SubspaceScheme {
                through: (0..*through_first).collect(),
                extra: *s + 1 - *through_first as u32,
                alpha: 1,
            };
            let h0_res = h0_oracle(sys, cfg, &[scheme])?.h0;
            values.insert("h0(L-Y)".to_string(), h0_res);
            notes.push(surjectivity_note());
            (r.h0 == 0, h0_res > 0, Some(h1_y), true)
        }
        EffectVariety::RationalNormalCurve
        | EffectVariety::RationalCurveP3 { .. }
        | EffectVariety::Line { .. } => {
            let e = match y {
                EffectVariety::RationalNormalCurve => sys.space().factors()[0],
                EffectVariety::RationalCurveP3 { e } => *e,
                _ => 1,
            };
            let mults = sys.point_multiplicities();
            let on: Vec<u32> = y.points_on(sys).into_iter().map(|i| mults[i]).collect();
            let (h0_y, h1_y) = curve_restriction_cohomology(sys, e, &on)?;
            values.insert("h0(L|Y)".to_string(), h0_y);
            let cond_b = if let EffectVariety::Line {
                through_pair: (i, j),
            } = y
            {
                let h0_res = h0_oracle(sys, cfg, &[SubspaceScheme::line(*i, *j, 1)])?.h0;
                values.insert("h0(L-Y)".to_string(), h0_res);
                h0_res > 0
            } else {
                // with H⁰(L|Y) = 0 every section of L vanishes on Y
                h0_y == 0 && l.h0 > 0
            };
            notes.push(surjectivity_note());
            (h0_y == 0, cond_b, Some(h1_y), true)
        }
    };
    if let Some(h) = h1_restricted {
        values.insert("h1(L|Y)".to_string(), h);
    }
    let cond_c = h2_handled && h1_restricted.is_some_and(|h| h > 0);
    Ok(H1Report {
        variety: y.to_string(),
        cond_a,
        cond_b,
        cond_c,
        h2_handled,
        cohomologically_special: cond_a && cond_b && cond_c,
        values,
        notes,
    })
}

fn surjectivity_note() -> String {
    "h2(L-Y) = 0: H1(O_Y(d)) = 0 and H2(L) = 0 force H1(L|Y) onto H2(L-Y) to vanish".to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(n: u32, d: u32, groups: &[(u32, u32)]) -> LinearSystem {
        LinearSystem::projective(n, d, groups).unwrap()
    }

    #[test]
    fn quadric_for_nine_points() {
        let lu = sys(3, 9, &[(6, 1), (4, 8)]);
        let q = EffectVariety::through_all(&lu, vec![2]);
        let r = h1_sev_check(&lu, &q, &OracleConfig::default()).unwrap();
        assert!(r.cohomologically_special, "{r:#?}");
        assert_eq!(r.values["h1(L|Y)"], 1);
    }

    #[test]
    fn quadrics_for_quartics() {
        for (n, h, h1) in [(2, 5, 1), (3, 9, 2), (4, 14, 1)] {
            let l = sys(n, 4, &[(2, h)]);
            let q = EffectVariety::through_all(&l, vec![2]);
            let r = h1_sev_check(&l, &q, &OracleConfig::default()).unwrap();
            assert!(r.cohomologically_special, "n={n}");
            assert_eq!(r.values["h1(L|Y)"], h1, "n={n}");
        }
    }

    #[test]
    fn rational_normal_quartic() {
        let l = sys(4, 3, &[(2, 7)]);
        let r = h1_sev_check(
            &l,
            &EffectVariety::RationalNormalCurve,
            &OracleConfig::default(),
        )
        .unwrap();
        assert_eq!(r.values["h1(L|Y)"], 1);
        assert!(r.cohomologically_special);
    }

    #[test]
    fn subspace_through_double_points() {
        for n in 2..=5u32 {
            for h in 2..=n {
                let l = sys(n, 2, &[(2, h)]);
                let y = EffectVariety::LinearSubspace {
                    s: h - 1,
                    through_first: h as usize,
                };
                if h > n {
                    continue;
                }
                let r = h1_sev_check(&l, &y, &OracleConfig::default()).unwrap();
                assert!(r.cohomologically_special, "n={n} h={h}");
                assert_eq!(r.values["h1(L|Y)"], (h * (h - 1) / 2) as i64);
            }
        }
    }

    #[test]
    fn lines_of_the_triangle() {
        let l = sys(3, 6, &[(4, 3)]);
        let y = EffectVariety::Line {
            through_pair: (0, 1),
        };
        let r = h1_sev_check(&l, &y, &OracleConfig::default()).unwrap();
        assert!(r.cohomologically_special);
        assert_eq!(r.values["h1(L|Y)"], 1);
    }

    #[test]
    fn plane_of_the_triangle_is_not() {
        let l = sys(3, 6, &[(4, 3)]);
        let plane = EffectVariety::through_all(&l, vec![1]);
        let r = h1_sev_check(&l, &plane, &OracleConfig::default()).unwrap();
        assert!(!r.cond_a);
        let y = EffectVariety::LinearSubspace {
            s: 2,
            through_first: 3,
        };
        assert!(
            !h1_sev_check(&l, &y, &OracleConfig::default())
                .unwrap()
                .cond_a
        );
    }

    #[test]
    fn curve_cohomology() {
        let l = sys(3, 6, &[(4, 3)]);
        assert_eq!(
            curve_restriction_cohomology(&l, 1, &[4, 4]).unwrap(),
            (0, 1)
        );
        assert_eq!(curve_restriction_cohomology(&l, 1, &[4]).unwrap(), (3, 0));
        assert_eq!(
            curve_restriction_cohomology(&l, 2, &[4, 4, 4]).unwrap(),
            (1, 0)
        );
    }
}
