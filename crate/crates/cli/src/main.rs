//! `sev`: dimension reports, special effect classification, the rank oracle,
//! classification scans and the verification suites from the command line.

mod render;

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use sev_core::effect_varieties::{
    classify_alpha_sev, classify_configuration, h1_sev_check, ConfigStep, EffectVariety,
};
use sev_core::oracle::{cross_check, h0_oracle};
use sev_core::search::{
    floor_flags, product_families, render_records, scan_hypersurfaces, scan_product_divisors,
    scan_rational_curves_p3, scan_rnc, ScanRecord, TableFormat,
};
use sev_core::suites::{run_ah, run_cgg, run_lemmas, run_paper_tables};
use sev_core::systems::dim_report;
use sev_core::{Error, LinearSystem, OracleConfig, PrimeField};

use render::Format;

#[derive(Parser)]
#[command(
    name = "sev",
    version,
    about = "Special linear systems with fat base points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for random point sampling.
    #[arg(long, global = true, env = "SEV_SEED", default_value_t = OracleConfig::default().seed)]
    seed: u64,

    /// Prime modulus of the rank oracle (below 2^32).
    #[arg(long, global = true, default_value_t = PrimeField::DEFAULT_PRIME)]
    prime: u64,

    /// Independent random trials per oracle call.
    #[arg(long, global = true, default_value_t = OracleConfig::default().trials)]
    trials: u32,
}

#[derive(Args, Clone)]
struct Input {
    /// JSON system spec; `-` reads stdin.
    #[arg(long, conflicts_with = "system", required_unless_present = "system")]
    spec: Option<String>,

    /// Shorthand such as `P3:d=9:6,4x8` or `P1xP1:d=2,2:2x3`.
    #[arg(long)]
    system: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VarietyKind {
    Hypersurface,
    Quadric,
    Plane,
    Linear,
    Rnc,
    RationalCurve,
    Line,
}

#[derive(Args, Clone)]
struct VarietyArgs {
    #[arg(long, value_enum)]
    variety: Option<VarietyKind>,

    /// Divisor multidegree (comma separated) or curve degree.
    #[arg(long, value_delimiter = ',')]
    e: Vec<u32>,

    /// Multiplicity of the divisor at each point.
    #[arg(long, default_value_t = 1)]
    c: u32,

    /// Dimension of the linear subspace.
    #[arg(long)]
    s: Option<u32>,

    /// Number of leading points on the subspace.
    #[arg(long)]
    through: Option<usize>,

    /// Point indices spanning the line, e.g. `0,1`.
    #[arg(long, value_delimiter = ',')]
    pair: Vec<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ScanKind {
    Hypersurfaces,
    Rnc,
    RationalCurves,
    Products,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Suite {
    Ah,
    PaperTables,
    Cgg,
    Lemmas,
}

#[derive(Subcommand)]
enum Command {
    /// Monomial count, conditions, virtual and expected dimension.
    Dim {
        #[command(flatten)]
        input: Input,
    },
    /// Decide whether a variety (or a configuration) is a special effect
    /// variety; exits 1 when it is not.
    Classify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        variety: VarietyArgs,
        /// JSON list of `{"variety": …, "alpha": …}` steps instead of a
        /// single variety.
        #[arg(long, conflicts_with = "variety")]
        steps: Option<String>,
    },
    /// Cohomological check of a variety; exits 1 when a condition fails.
    H1check {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        variety: VarietyArgs,
    },
    /// Exact h0/h1 by interpolation rank; exits 1 when the system is not
    /// special.
    Oracle {
        #[command(flatten)]
        input: Input,
        /// Repeat with a second prime and seed.
        #[arg(long)]
        cross_check: bool,
    },
    /// Classification scans over bounded grids.
    Scan {
        #[arg(value_enum)]
        kind: ScanKind,
        /// Number of factors for `products`.
        #[arg(long, default_value_t = 2)]
        t: u32,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        e_max: Option<u32>,
        #[arg(long)]
        d_max: Option<u32>,
        /// List every record instead of the family table.
        #[arg(long)]
        raw: bool,
    },
    /// Run a verification suite; exits 1 on any failed check.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

/// A verdict to print and the exit code it maps to.
struct Outcome {
    body: String,
    affirmative: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Spec(_) | Error::Domain(_) => 2,
        Error::Unsupported(_) => 3,
        Error::Sampling(_) => 4,
    }
}

fn read_system(input: &Input) -> Result<LinearSystem, Error> {
    if let Some(s) = &input.system {
        return s.parse();
    }
    let path = input.spec.as_deref().expect("clap requires one input");
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Spec(format!("stdin: {e}")))?;
        buf
    } else if path.trim_start().starts_with('{') {
        path.to_string()
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Spec(format!("{path}: {e}")))?
    };
    LinearSystem::from_json(&text)
}

fn variety(sys: &LinearSystem, v: &VarietyArgs) -> Result<EffectVariety, Error> {
    let kind = v
        .variety
        .ok_or_else(|| Error::Spec("--variety is required".into()))?;
    let spec = |m: &str| Error::Spec(m.to_string());
    let all_groups = |e: Vec<u32>| EffectVariety::Hypersurface {
        multidegree: e,
        point_mults: (0..sys.groups().len()).map(|g| (g, v.c)).collect(),
    };
    Ok(match kind {
        VarietyKind::Hypersurface => {
            if v.e.is_empty() {
                return Err(spec("--e is required for a hypersurface"));
            }
            all_groups(v.e.clone())
        }
        VarietyKind::Quadric => all_groups(vec![2]),
        VarietyKind::Plane => all_groups(vec![1]),
        VarietyKind::Linear => {
            let s =
                v.s.ok_or_else(|| spec("--s is required for a linear subspace"))?;
            let through = v
                .through
                .unwrap_or_else(|| sys.point_count().min(s as usize + 1));
            EffectVariety::LinearSubspace {
                s,
                through_first: through,
            }
        }
        VarietyKind::Rnc => EffectVariety::RationalNormalCurve,
        VarietyKind::RationalCurve => match v.e.as_slice() {
            [e] => EffectVariety::RationalCurveP3 { e: *e },
            _ => return Err(spec("--e takes the curve degree")),
        },
        VarietyKind::Line => match v.pair.as_slice() {
            [i, j] => EffectVariety::Line {
                through_pair: (*i, *j),
            },
            _ => return Err(spec("--pair takes two point indices")),
        },
    })
}

fn with_run_info<T: Serialize>(report: &T, cfg: &OracleConfig) -> Value {
    let mut v = serde_json::to_value(report).expect("serializable");
    if let Value::Object(map) = &mut v {
        map.insert("prime".into(), cfg.prime.p().into());
        map.insert("seed".into(), cfg.seed.into());
    }
    v
}

fn announce(cfg: &OracleConfig) {
    eprintln!("prime = {}, seed = {}", cfg.prime.p(), cfg.seed);
}

fn scan_body(records: &[ScanRecord], table: Option<String>, format: Format) -> String {
    match (format, table) {
        (Format::Json, _) => render::json(&records),
        (_, Some(t)) => t,
        (Format::Markdown, None) => render_records(records, TableFormat::Markdown),
        (_, None) => render_records(records, TableFormat::Csv),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let cfg = OracleConfig::new(cli.prime, cli.trials, cli.seed)?;
    let f = cli.format;
    match &cli.command {
        Command::Dim { input } => {
            let sys = read_system(input)?;
            Ok(Outcome {
                body: render::value(&serde_json::to_value(dim_report(&sys)?).unwrap(), f),
                affirmative: true,
            })
        }
        Command::Classify {
            input,
            variety: v,
            steps,
        } => {
            let sys = read_system(input)?;
            let report = if let Some(steps) = steps {
                let steps: Vec<ConfigStep> =
                    serde_json::from_str(steps).map_err(|e| Error::Spec(format!("steps: {e}")))?;
                announce(&cfg);
                classify_configuration(&sys, &steps, &cfg)?
            } else {
                classify_alpha_sev(&sys, &variety(&sys, v)?)?
            };
            let value = if steps.is_some() {
                with_run_info(&report, &cfg)
            } else {
                serde_json::to_value(&report).unwrap()
            };
            Ok(Outcome {
                body: render::value(&value, f),
                affirmative: report.is_sev,
            })
        }
        Command::H1check { input, variety: v } => {
            let sys = read_system(input)?;
            let y = variety(&sys, v)?;
            announce(&cfg);
            let report = h1_sev_check(&sys, &y, &cfg)?;
            Ok(Outcome {
                body: render::value(&with_run_info(&report, &cfg), f),
                affirmative: report.cohomologically_special,
            })
        }
        Command::Oracle {
            input,
            cross_check: cc,
        } => {
            let sys = read_system(input)?;
            announce(&cfg);
            if *cc {
                let r = cross_check(&sys, &cfg, &[])?;
                let special = r.runs[0].special;
                Ok(Outcome {
                    body: render::value(&serde_json::to_value(&r).unwrap(), f),
                    affirmative: special,
                })
            } else {
                let r = h0_oracle(&sys, &cfg, &[])?;
                Ok(Outcome {
                    body: render::value(&serde_json::to_value(&r).unwrap(), f),
                    affirmative: r.special,
                })
            }
        }
        Command::Scan {
            kind,
            t,
            n_max,
            e_max,
            d_max,
            raw,
        } => {
            let table_format = match f {
                Format::Csv => TableFormat::Csv,
                _ => TableFormat::Markdown,
            };
            let body = match kind {
                ScanKind::Hypersurfaces => {
                    let r = scan_hypersurfaces(
                        n_max.unwrap_or(6),
                        e_max.unwrap_or(3),
                        d_max.unwrap_or(7),
                    )?;
                    scan_body(&r, None, f)
                }
                ScanKind::Rnc => {
                    let r = scan_rnc(d_max.unwrap_or(7), n_max.unwrap_or(7))?;
                    scan_body(&r, None, f)
                }
                ScanKind::RationalCurves => {
                    let r = scan_rational_curves_p3(d_max.unwrap_or(6), e_max.unwrap_or(6))?;
                    scan_body(&r, None, f)
                }
                ScanKind::Products => {
                    let (n, e, d) = match t {
                        2 => (6, 4, 9),
                        3 => (5, 3, 7),
                        _ => (3, 2, 5),
                    };
                    let r = scan_product_divisors(
                        *t,
                        n_max.unwrap_or(n),
                        e_max.unwrap_or(e),
                        d_max.unwrap_or(d),
                    )?;
                    let table = (*t == 2 && !raw).then(|| {
                        let fam = product_families(&r);
                        let mut out = fam.render(table_format);
                        if f == Format::Markdown {
                            for flag in floor_flags(&fam) {
                                out.push_str(&format!("\n- {flag}"));
                            }
                            out.push('\n');
                        }
                        out
                    });
                    scan_body(&r, table, f)
                }
            };
            Ok(Outcome {
                body,
                affirmative: true,
            })
        }
        Command::Verify { suite } => {
            let report = match suite {
                Suite::Ah => {
                    announce(&cfg);
                    run_ah(&cfg)?
                }
                Suite::Cgg => {
                    announce(&cfg);
                    run_cgg(&cfg)?
                }
                Suite::PaperTables => run_paper_tables()?,
                Suite::Lemmas => run_lemmas()?,
            };
            Ok(Outcome {
                body: render::suite(&report, f),
                affirmative: report.passed(),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.body);
            if !out.body.ends_with('\n') {
                println!();
            }
            ExitCode::from(if out.affirmative { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
