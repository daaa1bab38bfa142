use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::{sort_records, tuple, ScanRecord};
use crate::effect_varieties::{
    classify_alpha_sev, classify_configuration, ConfigStep, EffectVariety,
};
use crate::error::Result;
use crate::oracle::{h0_oracle, OracleConfig};
use crate::systems::{virtual_dim, LinearSystem};

/// Grid limits for double points on `P^1 × P^1` and `(P^1)^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CggBounds {
    pub a_max2: u32,
    pub h_max2: u32,
    pub a_max3: u32,
    pub h_max3: u32,
}

impl Default for CggBounds {
    fn default() -> Self {
        CggBounds {
            a_max2: 8,
            h_max2: 20,
            a_max3: 4,
            h_max3: 15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CggReport {
    pub bounds: CggBounds,
    pub systems_checked: usize,
    /// Every special system found, with its witness.
    pub records: Vec<ScanRecord>,
    /// Special systems outside the expected list.
    pub unexpected: Vec<String>,
    /// Expected special systems the oracle did not find special.
    pub missing: Vec<String>,
    /// Oracle calls with `h⁰ < ν + 1`.
    pub semicontinuity_violations: Vec<String>,
}

impl CggReport {
    pub fn matches(&self) -> bool {
        self.unexpected.is_empty()
            && self.missing.is_empty()
            && self.semicontinuity_violations.is_empty()
    }
}

/// Multidegrees (sorted decreasingly) and `h` of the special double-point
/// systems the comparison theorems predict inside the bounds.
fn expected(b: &CggBounds) -> Vec<(Vec<u32>, u32)> {
    let mut out: Vec<(Vec<u32>, u32)> = (1..)
        .map(|d| 2 * d)
        .take_while(|&a| a <= b.a_max2)
        .filter(|&a| a < b.h_max2)
        .map(|a| (vec![a, 2], a + 1))
        .collect();
    if b.a_max3 >= 2 && b.h_max3 >= 7 {
        out.push((vec![2, 2, 2], 7));
    }
    out.extend(
        (1..)
            .map(|al| 2 * al)
            .take_while(|&a| a <= b.a_max3)
            .filter(|&a| a < b.h_max3)
            .map(|a| (vec![a, 1, 1], a + 1)),
    );
    out.sort();
    out
}

fn decreasing(t: usize, hi: u32) -> Vec<Vec<u32>> {
    if t == 0 {
        return vec![vec![]];
    }
    (1..=hi)
        .flat_map(|a| {
            decreasing(t - 1, a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

fn label(a: &[u32], h: u32) -> String {
    format!("{} h={h}", tuple(a))
}

/// The special-effect witness for a predicted special system.
fn witness(
    sys: &LinearSystem,
    a: &[u32],
    w: &mut BTreeMap<String, String>,
    cfg: &OracleConfig,
) -> Result<()> {
    let cfg_steps = |y1: EffectVariety, y2: EffectVariety| {
        vec![
            ConfigStep {
                variety: y1,
                alpha: 1,
            },
            ConfigStep {
                variety: y2,
                alpha: 1,
            },
        ]
    };
    match a {
        [x, 2] => {
            let y = EffectVariety::through_all(sys, vec![x / 2, 1]);
            let r = classify_alpha_sev(sys, &y)?;
            w.insert("witness".into(), format!("{y}"));
            w.insert("witness_alpha".into(), format!("{:?}", r.alpha_max));
            w.insert("witness_is_sev".into(), r.is_sev.to_string());
        }
        [2, 2, 2] => {
            let y = EffectVariety::through_all(sys, vec![1, 1, 1]);
            let r = classify_alpha_sev(sys, &y)?;
            w.insert("witness".into(), format!("{y}"));
            w.insert("witness_alpha".into(), format!("{:?}", r.alpha_max));
            w.insert("witness_is_sev".into(), r.is_sev.to_string());
        }
        [x, 1, 1] => {
            let al = x / 2;
            let y1 = EffectVariety::through_all(sys, vec![al, 0, 1]);
            let y2 = EffectVariety::through_all(sys, vec![al, 1, 0]);
            let r1 = classify_alpha_sev(sys, &y1)?;
            w.insert("witness".into(), format!("{y1}"));
            w.insert("witness_alpha".into(), format!("{:?}", r1.alpha_max));
            w.insert("witness_is_sev".into(), r1.is_sev.to_string());
            if let Some(nu) = &r1.nu_residual {
                w.insert("nu_residual".into(), nu.to_string());
            }
            let conf = classify_configuration(sys, &cfg_steps(y1, y2), cfg)?;
            let steps: Vec<String> = conf
                .steps
                .iter()
                .map(|s| {
                    let after = s.nu_after.as_ref().map_or("?".into(), |v| v.to_string());
                    format!(
                        "{} -> {after} ({})",
                        s.nu_before,
                        if s.passed { "ok" } else { "fails" }
                    )
                })
                .collect();
            w.insert(
                "configuration".into(),
                format!("Y1+Y2: {}", steps.join("; ")),
            );
            w.insert("configuration_is_sev".into(), conf.is_sev.to_string());
        }
        _ => {}
    }
    Ok(())
}

/// Runs the oracle over double-point systems on `P^1 × P^1` and `(P^1)^3`
/// (multidegrees up to permutation) and compares the special ones with the
/// predicted list, attaching a special effect witness to each.
pub fn verify_cgg(bounds: CggBounds, cfg: &OracleConfig) -> Result<CggReport> {
    let mut cells: Vec<(Vec<u32>, u32)> = Vec::new();
    for a in decreasing(2, bounds.a_max2) {
        cells.extend((1..=bounds.h_max2).map(|h| (a.clone(), h)));
    }
    for a in decreasing(3, bounds.a_max3) {
        cells.extend((1..=bounds.h_max3).map(|h| (a.clone(), h)));
    }
    let results: Vec<(Vec<u32>, u32, i64, i64, bool)> = cells
        .par_iter()
        .map(|(a, h)| {
            let sys = LinearSystem::double_points(&vec![1; a.len()], a, *h)?;
            let r = h0_oracle(&sys, cfg, &[])?;
            let nu = virtual_dim(&sys)?.to_i64().expect("small");
            Ok((a.clone(), *h, r.h0, nu, r.special))
        })
        .collect::<Result<_>>()?;
    let want = expected(&bounds);
    let mut records = Vec::new();
    let mut unexpected = Vec::new();
    let mut violations = Vec::new();
    let mut found = Vec::new();
    for (a, h, h0, nu, special) in &results {
        if *h0 < nu + 1 {
            violations.push(format!("{}: h0 = {h0} < nu + 1 = {}", label(a, *h), nu + 1));
        }
        if !special {
            continue;
        }
        found.push((a.clone(), *h));
        let sys = LinearSystem::double_points(&vec![1; a.len()], a, *h)?;
        let mut w = BTreeMap::new();
        w.insert("h0".into(), h0.to_string());
        w.insert("nu".into(), nu.to_string());
        if want.contains(&(a.clone(), *h)) {
            witness(&sys, a, &mut w, cfg)?;
        } else {
            unexpected.push(label(a, *h));
        }
        records.push(ScanRecord {
            space: sys.space().clone(),
            multidegree: a.clone(),
            variety: w.get("witness").cloned().unwrap_or_default(),
            h_min: *h,
            h_max: *h,
            accepted: true,
            witness: w,
        });
    }
    let missing = want
        .iter()
        .filter(|x| !found.contains(x))
        .map(|(a, h)| label(a, *h))
        .collect();
    Ok(CggReport {
        bounds,
        systems_checked: results.len(),
        records: sort_records(records),
        unexpected,
        missing,
        semicontinuity_violations: violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid() {
        let b = CggBounds {
            a_max2: 4,
            h_max2: 10,
            a_max3: 2,
            h_max3: 8,
        };
        let r = verify_cgg(b, &OracleConfig::default()).unwrap();
        assert!(r.matches(), "{r:#?}");
        let w = &r
            .records
            .iter()
            .find(|x| x.multidegree == [2, 1, 1])
            .unwrap()
            .witness;
        assert_eq!(w["nu_residual"], "0");
        assert_eq!(w["witness_is_sev"], "true");
        assert_eq!(w["configuration_is_sev"], "false");
        let w = &r
            .records
            .iter()
            .find(|x| x.multidegree == [4, 2])
            .unwrap()
            .witness;
        assert_eq!(w["witness_is_sev"], "true");
        assert_eq!(w["h0"], "1");
    }
}
