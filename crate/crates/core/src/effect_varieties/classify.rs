use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{
    divisor_existence_nu, line_configuration_nu, linear_residual_on, p3_rational_curve_chi,
    residual_divisor, residual_nu, EffectVariety,
};
use crate::error::{domain, unsupported, Result};
use crate::json;
use crate::oracle::{h0_oracle, OracleConfig, SubspaceScheme};
use crate::systems::{virtual_dim, LinearSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

/// `ν(L − αY)`, or `None` when the class has no rule for this `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaNu {
    pub alpha: u32,
    #[serde(serialize_with = "json::opt_bigint")]
    pub nu: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigStep {
    pub variety: EffectVariety,
    pub alpha: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub variety: String,
    pub alpha: u32,
    pub alpha_max: Option<u32>,
    #[serde(serialize_with = "json::bigint")]
    pub nu_before: BigInt,
    #[serde(serialize_with = "json::opt_bigint")]
    pub nu_after: Option<BigInt>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SevReport {
    pub variety: String,
    pub holds_property: bool,
    pub is_sev: bool,
    pub alpha_max: Option<u32>,
    #[serde(serialize_with = "json::bigint")]
    pub nu_system: BigInt,
    #[serde(serialize_with = "json::opt_bigint")]
    pub nu_residual: Option<BigInt>,
    pub residuals: Vec<AlphaNu>,
    pub steps: Vec<StepReport>,
    pub checks: Vec<Check>,
}

/// Largest `α` worth scanning: a divisor cannot be removed more often than
/// the degree allows or than needed to clear its points; other varieties
/// are bounded by the largest point multiplicity.
fn alpha_bound(sys: &LinearSystem, y: &EffectVariety) -> u32 {
    match y {
        EffectVariety::Hypersurface {
            multidegree,
            point_mults,
        } => {
            let deg = sys
                .multidegree()
                .iter()
                .zip(multidegree)
                .filter(|(_, &e)| e > 0)
                .map(|(&d, &e)| d / e)
                .min()
                .unwrap_or(0);
            // groups whose points are no longer base points impose nothing
            let pts = point_mults
                .iter()
                .map(|&(g, c)| (sys.groups()[g].multiplicity, c))
                .filter(|&(m, _)| m > 0)
                .map(|(m, c)| m.div_ceil(c))
                .min()
                .unwrap_or(u32::MAX);
            deg.min(pts)
        }
        _ => sys.max_multiplicity(),
    }
}

struct Scan {
    nu_system: BigInt,
    residuals: Vec<AlphaNu>,
    alpha_max: Option<u32>,
    maximal: bool,
}

fn scan(sys: &LinearSystem, y: &EffectVariety) -> Result<Scan> {
    let nu_system = virtual_dim(sys)?;
    let residuals = (1..=alpha_bound(sys, y))
        .map(|alpha| {
            Ok(AlphaNu {
                alpha,
                nu: residual_nu(sys, y, alpha)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let alpha_max = residuals
        .iter()
        .filter(|r| r.nu.as_ref().is_some_and(|nu| *nu > nu_system))
        .map(|r| r.alpha)
        .max();
    let maximal = alpha_max.is_some_and(|a| {
        let top = residuals[a as usize - 1].nu.clone().expect("has a rule");
        residuals
            .iter()
            .filter(|r| r.alpha > a)
            .all(|r| r.nu.as_ref().is_none_or(|nu| *nu < top))
    });
    Ok(Scan {
        nu_system,
        residuals,
        alpha_max,
        maximal,
    })
}

/// Finds the largest `α` with `ν(L − αY) > ν(L)` and checks that every
/// larger `β` does strictly worse. `Y` is a special effect variety when in
/// addition the residual is nonempty and, for divisors, `Y` itself exists
/// through its points.
pub fn classify_alpha_sev(sys: &LinearSystem, y: &EffectVariety) -> Result<SevReport> {
    y.validate(sys)?;
    let sc = scan(sys, y)?;
    let mut checks = Vec::new();
    let mut exists = true;
    if y.is_divisor() {
        let nu_y = divisor_existence_nu(sys, y)?;
        exists = !nu_y.is_negative();
        checks.push(Check::new("existence", exists, format!("nu(|Y|) = {nu_y}")));
    }
    if let EffectVariety::RationalCurveP3 { e } = y {
        let chi = p3_rational_curve_chi(sys.degree().expect("validated"), *e)?;
        checks.push(Check::new(
            "euler characteristic",
            true,
            format!("chi = {chi}"),
        ));
        // for a line the multiple-linear-space count must give the same ν
        if *e == 1 {
            if let Some(by_chi) = residual_nu(sys, y, 2)? {
                let by_count = linear_residual_on(sys, 1, 2, &y.points_on(sys))?;
                checks.push(Check::new(
                    "linear-space count",
                    by_chi == by_count,
                    format!(
                        "nu(L - 2Y) = {by_chi} from chi, {by_count} from the linear-space count"
                    ),
                ));
            }
        }
    }
    let skipped: Vec<String> = sc
        .residuals
        .iter()
        .filter(|r| r.nu.is_none())
        .map(|r| r.alpha.to_string())
        .collect();
    if !skipped.is_empty() {
        checks.push(Check::new(
            "rules",
            true,
            format!("no residual rule for alpha in [{}]", skipped.join(", ")),
        ));
    }
    let nu_residual = sc
        .alpha_max
        .and_then(|a| sc.residuals[a as usize - 1].nu.clone());
    checks.push(Check::new(
        "special inequality",
        sc.alpha_max.is_some(),
        match (&sc.alpha_max, &nu_residual) {
            (Some(a), Some(nu)) => format!("alpha = {a}: {nu} > {}", sc.nu_system),
            _ => format!("no alpha beats nu(L) = {}", sc.nu_system),
        },
    ));
    checks.push(Check::new(
        "maximality",
        sc.maximal,
        "every larger alpha gives a strictly smaller residual",
    ));
    let holds = sc.alpha_max.is_some() && sc.maximal && exists;
    let nonneg = nu_residual.as_ref().is_some_and(|nu| !nu.is_negative());
    checks.push(Check::new(
        "nonempty residual",
        nonneg,
        "nu(L - alpha Y) >= 0",
    ));
    Ok(SevReport {
        variety: y.to_string(),
        holds_property: holds,
        is_sev: holds && nonneg,
        alpha_max: sc.alpha_max,
        nu_system: sc.nu_system,
        nu_residual,
        residuals: sc.residuals,
        steps: Vec::new(),
        checks,
    })
}

/// Classifies `α_1 Y_1 + … + α_r Y_r`.
///
/// Each `Y_j` must have the `α_j`-property for the system left after
/// removing the earlier ones, and the final residual must be nonempty.
/// Divisor configurations use an exact running residual. Line
/// configurations with the points at coordinate points use the Hilbert
/// polynomial of the monomial scheme; nonemptiness is then certified by the
/// oracle, which can only confirm it. Mixing the two is unsupported.
pub fn classify_configuration(
    sys: &LinearSystem,
    steps: &[ConfigStep],
    cfg: &OracleConfig,
) -> Result<SevReport> {
    if steps.is_empty() {
        return Err(domain("a configuration needs at least one variety"));
    }
    if steps.iter().any(|s| s.alpha == 0) {
        return Err(domain("configuration multiplicities must be >= 1"));
    }
    if steps.len() == 1 {
        let mut rep = classify_alpha_sev(sys, &steps[0].variety)?;
        let ok = rep.alpha_max == Some(steps[0].alpha);
        rep.checks.push(Check::new(
            "step alpha",
            ok,
            format!("given {}, maximal {:?}", steps[0].alpha, rep.alpha_max),
        ));
        rep.holds_property &= ok;
        rep.is_sev &= ok;
        return Ok(rep);
    }
    let describe = steps
        .iter()
        .map(|s| format!("{}*[{}]", s.alpha, s.variety))
        .collect::<Vec<_>>()
        .join(" + ");
    if steps.iter().all(|s| s.variety.is_divisor()) {
        divisor_configuration(sys, steps, describe)
    } else if steps
        .iter()
        .all(|s| matches!(s.variety, EffectVariety::Line { .. }))
    {
        line_configuration(sys, steps, cfg, describe)
    } else {
        Err(unsupported(
            "configurations must consist only of divisors or only of lines",
        ))
    }
}

fn divisor_configuration(
    sys: &LinearSystem,
    steps: &[ConfigStep],
    describe: String,
) -> Result<SevReport> {
    let mut running = sys.clone();
    let mut reports = Vec::new();
    let mut all = true;
    for step in steps {
        let rep = classify_alpha_sev(&running, &step.variety)?;
        let passed = rep.holds_property && rep.alpha_max == Some(step.alpha);
        all &= passed;
        let next = residual_divisor(&running, &step.variety, step.alpha)?;
        reports.push(StepReport {
            variety: step.variety.to_string(),
            alpha: step.alpha,
            alpha_max: rep.alpha_max,
            nu_before: rep.nu_system,
            nu_after: Some(virtual_dim(&next)?),
            passed,
        });
        running = next;
    }
    let nu = virtual_dim(&running)?;
    let nonneg = !nu.is_negative();
    let checks = vec![
        Check::new("every step has its property", all, ""),
        Check::new("nonempty residual", nonneg, format!("nu = {nu} (exact)")),
    ];
    Ok(SevReport {
        variety: describe,
        holds_property: all,
        is_sev: all && nonneg,
        alpha_max: None,
        nu_system: virtual_dim(sys)?,
        nu_residual: Some(nu),
        residuals: Vec::new(),
        steps: reports,
        checks,
    })
}

fn line_configuration(
    sys: &LinearSystem,
    steps: &[ConfigStep],
    cfg: &OracleConfig,
    describe: String,
) -> Result<SevReport> {
    let mut lines: Vec<((usize, usize), u32)> = Vec::new();
    let mut reports = Vec::new();
    let mut all = true;
    let bound = sys.max_multiplicity();
    for step in steps {
        step.variety.validate(sys)?;
        let EffectVariety::Line { through_pair } = step.variety else {
            unreachable!()
        };
        let before = line_configuration_nu(sys, &lines)?;
        let mut nus = Vec::new();
        for alpha in 1..=bound {
            let mut with = lines.clone();
            with.push((through_pair, alpha));
            nus.push(line_configuration_nu(sys, &with)?);
        }
        let alpha_max = (1..=bound).filter(|&a| nus[a as usize - 1] > before).max();
        let maximal =
            alpha_max.is_some_and(|a| nus[a as usize..].iter().all(|nu| *nu < nus[a as usize - 1]));
        let passed = maximal && alpha_max == Some(step.alpha);
        all &= passed;
        let after = if step.alpha <= bound {
            Some(nus[step.alpha as usize - 1].clone())
        } else {
            None
        };
        reports.push(StepReport {
            variety: step.variety.to_string(),
            alpha: step.alpha,
            alpha_max,
            nu_before: before,
            nu_after: after,
            passed,
        });
        lines.push((through_pair, step.alpha));
    }
    let nu = line_configuration_nu(sys, &lines)?;
    let schemes: Vec<SubspaceScheme> = lines
        .iter()
        .map(|&((i, j), a)| SubspaceScheme::line(i, j, a))
        .collect();
    let h0 = h0_oracle(sys, cfg, &schemes)?.h0;
    let nonempty = h0 >= 1;
    let checks = vec![
        Check::new("every step has its property", all, ""),
        Check::new(
            "nonempty residual",
            nonempty,
            format!("sufficient-only: oracle h0 = {h0}; Hilbert-polynomial nu = {nu}"),
        ),
    ];
    Ok(SevReport {
        variety: describe,
        holds_property: all,
        is_sev: all && nonempty,
        alpha_max: None,
        nu_system: virtual_dim(sys)?,
        nu_residual: Some(nu),
        residuals: Vec::new(),
        steps: reports,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn sys(n: u32, d: u32, groups: &[(u32, u32)]) -> LinearSystem {
        LinearSystem::projective(n, d, groups).unwrap()
    }

    #[test]
    fn quadric_through_nine_points() {
        let lu = sys(3, 9, &[(6, 1), (4, 8)]);
        let q = EffectVariety::through_all(&lu, vec![2]);
        let r = classify_alpha_sev(&lu, &q).unwrap();
        assert!(r.is_sev);
        assert_eq!(r.alpha_max, Some(1));
        assert_eq!(r.nu_system, BigInt::from(3));
    }

    #[test]
    fn plane_through_three_fat_points() {
        let ex = sys(3, 6, &[(4, 3)]);
        let plane = EffectVariety::through_all(&ex, vec![1]);
        let r = classify_alpha_sev(&ex, &plane).unwrap();
        let nus: Vec<BigInt> = r.residuals.iter().map(|x| x.nu.clone().unwrap()).collect();
        assert_eq!(nus, [25, 22, 16, 9].map(BigInt::from));
        assert_eq!(r.alpha_max, Some(1));
        assert!(r.is_sev);
    }

    #[test]
    fn conic_through_five_double_points() {
        let p2 = sys(2, 4, &[(2, 5)]);
        let conic = EffectVariety::through_all(&p2, vec![2]);
        let r = classify_alpha_sev(&p2, &conic).unwrap();
        assert_eq!(r.alpha_max, Some(2));
        assert!(r.is_sev);
    }

    #[test]
    fn rnc_needs_double_points_and_degree_three() {
        let ok = sys(4, 3, &[(2, 7)]);
        let r = classify_alpha_sev(&ok, &EffectVariety::RationalNormalCurve).unwrap();
        assert!(r.is_sev);
        assert_eq!(r.alpha_max, Some(2));
        assert!(r.residuals[0].nu.is_none());
        let low = sys(3, 2, &[(2, 6)]);
        assert!(classify_alpha_sev(&low, &EffectVariety::RationalNormalCurve).is_err());
    }

    #[test]
    fn single_step_configuration_matches() {
        let lu = sys(3, 9, &[(6, 1), (4, 8)]);
        let q = EffectVariety::through_all(&lu, vec![2]);
        let a = classify_alpha_sev(&lu, &q).unwrap();
        let step = ConfigStep {
            variety: q,
            alpha: 1,
        };
        let b = classify_configuration(&lu, &[step], &OracleConfig::default()).unwrap();
        assert_eq!(a.is_sev, b.is_sev);
        assert_eq!(a.alpha_max, b.alpha_max);
        assert_eq!(a.nu_residual, b.nu_residual);
    }

    #[test]
    fn line_in_p3_reports_both_counts() {
        let r = classify_alpha_sev(
            &sys(3, 2, &[(2, 2)]),
            &EffectVariety::RationalCurveP3 { e: 1 },
        )
        .unwrap();
        let c = r
            .checks
            .iter()
            .find(|c| c.name == "linear-space count")
            .unwrap();
        assert!(c.passed);
        assert_eq!(
            c.detail,
            "nu(L - 2Y) = 2 from chi, 2 from the linear-space count"
        );
    }

    #[test]
    fn three_double_lines() {
        let ex = sys(3, 6, &[(4, 3)]);
        let steps: Vec<ConfigStep> = [(0, 1), (0, 2), (1, 2)]
            .into_iter()
            .map(|p| ConfigStep {
                variety: EffectVariety::Line { through_pair: p },
                alpha: 2,
            })
            .collect();
        let r = classify_configuration(&ex, &steps, &OracleConfig::default()).unwrap();
        assert!(r.is_sev, "{r:#?}");
        assert_eq!(r.steps[0].nu_after, Some(BigInt::from(24)));
    }

    #[test]
    fn mixed_configurations_are_unsupported() {
        let ex = sys(3, 6, &[(4, 3)]);
        let steps = vec![
            ConfigStep {
                variety: EffectVariety::through_all(&ex, vec![1]),
                alpha: 1,
            },
            ConfigStep {
                variety: EffectVariety::Line {
                    through_pair: (0, 1),
                },
                alpha: 1,
            },
        ];
        assert!(matches!(
            classify_configuration(&ex, &steps, &OracleConfig::default()),
            Err(crate::Error::Unsupported(_))
        ));
        assert!(classify_configuration(&ex, &[], &OracleConfig::default()).is_err());
    }

    #[test]
    fn nu_residual_zero_is_sev() {
        let r = classify_alpha_sev(
            &sys(4, 2, &[(2, 4)]),
            &EffectVariety::LinearSubspace {
                s: 3,
                through_first: 4,
            },
        )
        .unwrap();
        assert!(r.is_sev);
        assert!(r.nu_residual.unwrap().is_zero());
    }
}
