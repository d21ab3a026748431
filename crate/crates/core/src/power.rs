//! Monte Carlo power of the two tests against a roster of alternatives.
//!
//! Each cell rejects when the statistic exceeds the upper-`alpha` critical
//! value of a null calibration at the same `n`. The calibration uses its own
//! seed derived from the master seed, so every family in a table is judged
//! against the same threshold.

use serde::{Deserialize, Serialize};

use crate::alternatives::AlternativeFamily;
use crate::error::{Error, Result};
use crate::null::{self, check_alpha, NullConfig, StatKind};
use crate::rng::{derive_seed, label_key};
use crate::sample::SortedSample;
use crate::vstat::Convention;

/// Replications of the null calibration behind each critical value.
pub const CALIBRATION_REPS: usize = 10_000;

/// One estimated rejection rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCell {
    /// Display label, e.g. `W(1.4)`.
    pub family: String,
    /// Parameter passed to the family.
    pub theta: f64,
    pub n: usize,
    pub alpha: f64,
    pub kind: StatKind,
    pub reps: usize,
    pub power: f64,
    /// Binomial standard error `sqrt(p (1 - p) / reps)`.
    pub se: f64,
    pub critical_value: f64,
    pub convention: Convention,
}

/// Settings shared by the cells of a power study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    pub n: usize,
    pub alpha: f64,
    pub reps: usize,
    pub seed: u64,
    pub convention: Convention,
    pub calibration_reps: usize,
}

impl PowerConfig {
    pub fn new(n: usize, alpha: f64, reps: usize, seed: u64) -> Self {
        Self {
            n,
            alpha,
            reps,
            seed,
            convention: Convention::Strict,
            calibration_reps: CALIBRATION_REPS,
        }
    }

    pub fn convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn calibration_reps(mut self, reps: usize) -> Self {
        self.calibration_reps = reps;
        self
    }

    fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.n == 0 {
            return Err(Error::ZeroCount {
                what: "sample size",
            });
        }
        if self.reps == 0 {
            return Err(Error::ZeroCount {
                what: "replications",
            });
        }
        Ok(())
    }

    /// Seed of the null calibration for `kind` at this `n`.
    pub fn calibration_seed(&self, kind: StatKind) -> u64 {
        derive_seed(
            self.seed,
            &[label_key("calibration"), kind_key(kind), self.n as u64],
        )
    }

    /// Seed of the cell for `label` and `kind`.
    pub fn cell_seed(&self, label: &str, kind: StatKind) -> u64 {
        derive_seed(
            self.seed,
            &[
                label_key(label),
                self.n as u64,
                self.alpha.to_bits(),
                kind_key(kind),
            ],
        )
    }

    /// Upper-`alpha` critical value of `kind` at this `n`.
    pub fn critical_value(&self, kind: StatKind) -> Result<f64> {
        self.validate()?;
        NullConfig::new(
            kind,
            self.n,
            self.calibration_reps,
            self.calibration_seed(kind),
        )
        .convention(self.convention)
        .simulate()?
        .critical_value(self.alpha)
    }
}

fn kind_key(kind: StatKind) -> u64 {
    match kind {
        StatKind::I => 1,
        StatKind::K => 2,
    }
}

/// Rejection rate of `kind` against `fam` at `theta`, calibrating on the fly.
pub fn power(
    label: &str,
    fam: &AlternativeFamily,
    theta: f64,
    kind: StatKind,
    config: &PowerConfig,
) -> Result<PowerCell> {
    let crit = config.critical_value(kind)?;
    power_at(label, fam, theta, kind, config, crit)
}

/// Rejection rate of `kind` against `fam` when rejecting above `crit`.
pub fn power_at(
    label: &str,
    fam: &AlternativeFamily,
    theta: f64,
    kind: StatKind,
    config: &PowerConfig,
    crit: f64,
) -> Result<PowerCell> {
    config.validate()?;
    fam.check_theta(theta)?;
    let (n, convention) = (config.n, config.convention);
    let hits = null::replicate(config.reps, config.cell_seed(label, kind), |rng| {
        let draws: Vec<f64> = (0..n).map(|_| fam.draw(theta, rng)).collect();
        let s = SortedSample::new(draws).expect("family draws are finite and nonnegative");
        f64::from(u8::from(kind.evaluate(&s, convention) > crit))
    });
    let p = hits.iter().sum::<f64>() / config.reps as f64;
    Ok(PowerCell {
        family: label.to_string(),
        theta,
        n,
        alpha: config.alpha,
        kind,
        reps: config.reps,
        power: p,
        se: (p * (1.0 - p) / config.reps as f64).sqrt(),
        critical_value: crit,
        convention,
    })
}

/// A labelled alternative of a power table.
#[derive(Debug, Clone, PartialEq)]
pub struct RosterEntry {
    pub label: String,
    pub family: AlternativeFamily,
    pub theta: f64,
}

impl RosterEntry {
    pub fn new(label: impl Into<String>, family: AlternativeFamily, theta: f64) -> Self {
        Self {
            label: label.into(),
            family,
            theta,
        }
    }
}

/// The twelve alternatives of the standard comparison. `W(k)` has shape `k`,
/// that is `theta = k - 1` in the registry's parameterization.
pub fn roster() -> Vec<RosterEntry> {
    use AlternativeFamily as A;
    vec![
        RosterEntry::new("W(1.4)", A::weibull(), 0.4),
        RosterEntry::new("Γ(2)", A::gamma(), 2.0),
        RosterEntry::new("LN(0.8)", A::log_normal(), 0.8),
        RosterEntry::new("HN", A::half_normal(), 0.0),
        RosterEntry::new("U", A::uniform(), 0.0),
        RosterEntry::new("CH(0.5)", A::chen(), 0.5),
        RosterEntry::new("CH(1.0)", A::chen(), 1.0),
        RosterEntry::new("CH(1.5)", A::chen(), 1.5),
        RosterEntry::new("LF(2)", A::linear_failure_rate(), 2.0),
        RosterEntry::new("LF(4)", A::linear_failure_rate(), 4.0),
        RosterEntry::new("EW(0.5)", A::exponentiated_exponential(), 0.5),
        RosterEntry::new("EW(1.5)", A::exponentiated_exponential(), 1.5),
    ]
}

/// Powers of both tests for every roster entry. Each critical value is
/// simulated once and shared by all entries.
pub fn power_table(entries: &[RosterEntry], config: &PowerConfig) -> Result<Vec<PowerCell>> {
    config.validate()?;
    if entries.is_empty() {
        return Ok(Vec::new());
    }
    let crit_i = config.critical_value(StatKind::I)?;
    let crit_k = config.critical_value(StatKind::K)?;
    let mut cells = Vec::with_capacity(2 * entries.len());
    for e in entries {
        cells.push(power_at(
            &e.label,
            &e.family,
            e.theta,
            StatKind::I,
            config,
            crit_i,
        )?);
        cells.push(power_at(
            &e.label,
            &e.family,
            e.theta,
            StatKind::K,
            config,
            crit_k,
        )?);
    }
    Ok(cells)
}

pub fn table_to_csv(cells: &[PowerCell]) -> String {
    let mut out = String::from("family,theta,n,alpha,kind,reps,power,se\n");
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.family, c.theta, c.n, c.alpha, c.kind, c.reps, c.power, c.se
        ));
    }
    out
}

/// Percentages of rejected samples, one row per alternative.
pub fn table_to_markdown(cells: &[PowerCell]) -> String {
    let mut labels: Vec<&str> = Vec::new();
    for c in cells {
        if !labels.contains(&c.family.as_str()) {
            labels.push(&c.family);
        }
    }
    let pct = |label: &str, kind: StatKind| {
        cells
            .iter()
            .find(|c| c.family == label && c.kind == kind)
            .map(|c| format!("{:.0}", 100.0 * c.power))
            .unwrap_or_else(|| "-".into())
    };
    let mut out = String::from("| Alternative | I | K |\n|---|---|---|\n");
    for l in labels {
        out.push_str(&format!(
            "| {l} | {} | {} |\n",
            pct(l, StatKind::I),
            pct(l, StatKind::K)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_roster_gives_empty_table() {
        let c = PowerConfig::new(20, 0.05, 100, 1);
        assert!(power_table(&[], &c).unwrap().is_empty());
    }

    #[test]
    fn cell_is_deterministic_and_se_consistent() {
        let c = PowerConfig::new(20, 0.05, 500, 7).calibration_reps(1000);
        let u = AlternativeFamily::uniform();
        let a = power("U", &u, 0.0, StatKind::K, &c).unwrap();
        let b = power("U", &u, 0.0, StatKind::K, &c).unwrap();
        assert_eq!(a, b);
        assert!((a.se - (a.power * (1.0 - a.power) / 500.0).sqrt()).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&a.power));
    }

    #[test]
    fn roster_is_valid() {
        let r = roster();
        assert_eq!(r.len(), 12);
        for e in &r {
            e.family.check_theta(e.theta).unwrap();
        }
    }

    #[test]
    fn rejects_bad_config() {
        let c = PowerConfig::new(20, 1.5, 100, 1);
        assert!(matches!(
            c.critical_value(StatKind::I),
            Err(Error::InvalidAlpha(_))
        ));
        let c = PowerConfig::new(0, 0.05, 100, 1);
        assert!(c.critical_value(StatKind::I).is_err());
    }

    #[test]
    fn emission() {
        let cell = PowerCell {
            family: "U".into(),
            theta: 0.0,
            n: 20,
            alpha: 0.05,
            kind: StatKind::K,
            reps: 100,
            power: 0.9,
            se: 0.03,
            critical_value: 0.4,
            convention: Convention::Strict,
        };
        assert_eq!(
            table_to_csv(std::slice::from_ref(&cell))
                .lines()
                .nth(1)
                .unwrap(),
            "U,0,20,0.05,K,100,0.9,0.03"
        );
        assert!(table_to_markdown(&[cell]).contains("| U | - | 90 |"));
    }
}
