use expochar::alternatives::{AlternativeFamily, FamilySpec};
use expochar::characterization::characterization_check;
use expochar::efficiency::{
    self, efficiency_table, sigma2_k_curve, slope_curve, table_families, EfficiencyReport,
};
use expochar::null::{
    run_test, CriticalRow, CriticalTable, NullCache, NullConfig, Sidedness, StatKind, TestConfig,
};
use expochar::power::{self, PowerConfig, RosterEntry};
use expochar::{data, Error, Result};

use crate::args::{
    CritvalsArgs, Curve, DemoArgs, EfficiencyArgs, Format, PowerArgs, Stat, TestArgs,
};
use crate::render;

/// Smallest calibration size accepted by `test`.
const MIN_TEST_REPS: usize = 100;

fn kinds(stat: Stat) -> Vec<StatKind> {
    match stat {
        Stat::I => vec![StatKind::I],
        Stat::K => vec![StatKind::K],
        Stat::Both => vec![StatKind::I, StatKind::K],
    }
}

fn check_alphas(alphas: &[f64]) -> Result<()> {
    match alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        Some(&a) => Err(Error::InvalidAlpha(a)),
        None if alphas.is_empty() => Err(Error::InvalidParameter(
            "no significance level given".into(),
        )),
        None => Ok(()),
    }
}

pub fn test(a: &TestArgs, format: Format) -> Result<String> {
    if a.calibration.reps < MIN_TEST_REPS {
        return Err(Error::InvalidParameter(format!(
            "--reps must be at least {MIN_TEST_REPS}, got {}",
            a.calibration.reps
        )));
    }
    check_alphas(&a.alpha)?;
    let sample = match &a.data {
        Some(path) => data::read_sample(path)?,
        None => data::aircraft(),
    };
    let config = TestConfig {
        reps: a.calibration.reps,
        seed: a.calibration.seed,
        convention: a.calibration.convention,
        sidedness: if a.two_sided {
            Sidedness::TwoSided
        } else {
            Sidedness::Upper
        },
        alphas: a.alpha.clone(),
    };
    let report = run_test(&sample, &config)?;
    Ok(match format {
        Format::Json => render::json(&report),
        Format::Csv => render::test_csv(&report, &kinds(a.stat)),
        Format::Md => render::test_md(&report, &kinds(a.stat)),
    })
}

pub fn critvals(a: &CritvalsArgs, format: Format) -> Result<String> {
    check_alphas(&a.alpha)?;
    let cache = a.cache.as_ref().map(NullCache::new);
    let mut tables = Vec::new();
    for kind in kinds(a.stat) {
        let mut rows = Vec::new();
        for &n in &a.sizes {
            let config = NullConfig::new(kind, n, a.calibration.reps, a.calibration.seed)
                .convention(a.calibration.convention);
            let dist = match &cache {
                Some(c) => c.load_or_simulate(&config)?,
                None => config.simulate()?,
            };
            for &alpha in &a.alpha {
                rows.push(CriticalRow {
                    kind,
                    convention: a.calibration.convention,
                    n,
                    reps: a.calibration.reps,
                    seed: a.calibration.seed,
                    alpha,
                    critical_value: dist.critical_value(alpha)?,
                });
            }
        }
        tables.push((kind, CriticalTable { rows }));
    }
    Ok(match format {
        Format::Json => {
            let all = CriticalTable {
                rows: tables.into_iter().flat_map(|(_, t)| t.rows).collect(),
            };
            render::json(&all)
        }
        Format::Csv => {
            let all = CriticalTable {
                rows: tables.into_iter().flat_map(|(_, t)| t.rows).collect(),
            };
            all.to_csv()
        }
        Format::Md => tables
            .iter()
            .map(|(kind, t)| format!("Critical values of {kind}\n\n{}", t.to_markdown()))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn spec_label(spec: &FamilySpec) -> String {
    match spec.theta {
        Some(t) if !spec.family.is_parameterless() => format!("{}:{t}", spec.family.name()),
        _ => spec.family.name(),
    }
}

fn roster_from(specs: &[FamilySpec]) -> Result<Vec<RosterEntry>> {
    if specs.is_empty() {
        return Ok(power::roster());
    }
    specs
        .iter()
        .map(|s| {
            let theta = s.theta.ok_or_else(|| {
                Error::InvalidFamilySpec(format!(
                    "{} needs a parameter, e.g. {}:1",
                    s.family.name(),
                    s.family.name()
                ))
            })?;
            Ok(RosterEntry::new(spec_label(s), s.family, theta))
        })
        .collect()
}

pub fn power(a: &PowerArgs, format: Format) -> Result<String> {
    check_alphas(&a.alpha)?;
    let entries = roster_from(&a.family)?;
    let wanted = kinds(a.stat);
    let mut cells = Vec::new();
    for &n in &a.n {
        for &alpha in &a.alpha {
            let config = PowerConfig::new(n, alpha, a.calibration.reps, a.calibration.seed)
                .convention(a.calibration.convention);
            for kind in &wanted {
                let crit = config.critical_value(*kind)?;
                for e in &entries {
                    cells.push(power::power_at(
                        &e.label, &e.family, e.theta, *kind, &config, crit,
                    )?);
                }
            }
        }
    }
    Ok(match format {
        Format::Json => render::json(&cells),
        Format::Csv => power::table_to_csv(&cells),
        Format::Md => {
            let mut out = String::new();
            for &n in &a.n {
                for &alpha in &a.alpha {
                    let block: Vec<_> = cells
                        .iter()
                        .filter(|c| c.n == n && c.alpha == alpha)
                        .cloned()
                        .collect();
                    out.push_str(&format!(
                        "Percentage of rejected samples, n = {n}, alpha = {alpha}, {} replications\n\n{}\n",
                        a.calibration.reps,
                        power::table_to_markdown(&block)
                    ));
                }
            }
            out
        }
    })
}

fn efficiency_families(specs: &[FamilySpec]) -> Vec<AlternativeFamily> {
    if specs.is_empty() {
        table_families()
    } else {
        specs.iter().map(|s| s.family).collect()
    }
}

pub fn efficiency(a: &EfficiencyArgs, format: Format) -> Result<String> {
    if let Some(curve) = a.curve {
        if !(a.step > 0.0 && a.max_t > 0.0) {
            return Err(Error::InvalidParameter(
                "--step and --max-t must be positive".into(),
            ));
        }
        return match curve {
            Curve::Sigma2 => Ok(render::curve(
                format,
                ("t", "sigma2_k"),
                &sigma2_k_curve(a.step, a.max_t),
            )),
            Curve::Slope => {
                let mut out = String::new();
                for fam in efficiency_families(&a.family) {
                    let pts = slope_curve(&fam, a.step, a.max_t)?;
                    let header = format!("slope_{}", fam.name());
                    out.push_str(&render::curve(format, ("t", &header), &pts));
                }
                Ok(out)
            }
        };
    }
    let families = efficiency_families(&a.family);
    let rows: Vec<EfficiencyReport> = efficiency_table(&families)?
        .into_iter()
        .filter(|r| kinds(a.stat).contains(&r.kind))
        .collect();
    Ok(match format {
        Format::Json => render::json(&rows),
        Format::Csv => efficiency::table_to_csv(&rows),
        Format::Md => efficiency::table_to_markdown(&rows),
    })
}

pub fn demo(a: &DemoArgs, format: Format) -> Result<String> {
    let specs = if a.family.is_empty() {
        vec!["exp".parse()?, "u".parse()?]
    } else {
        a.family.clone()
    };
    let reports = specs
        .iter()
        .map(|s| characterization_check(&s.family, s.theta.unwrap_or(0.0), a.quadruples, a.seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(match format {
        Format::Json => render::json(&reports),
        Format::Csv => render::demo_csv(&reports),
        Format::Md => render::demo_md(&reports),
    })
}
