//! Monte Carlo calibration of the null distributions of `I_n` and `K_n`.
//!
//! Both statistics are scale-free, so the null law at sample size `n` is
//! simulated from Exp(1) samples. Replication `r` draws from
//! [`stream_rng(seed, r)`](crate::rng::stream_rng); the result is therefore a
//! function of `(kind, convention, n, reps, seed)` alone, whatever the number
//! of worker threads.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng};
use crate::sample::SortedSample;
use crate::vstat::{self, Convention};

/// Asymptotic variance of `sqrt(n) I_n` under the null: `25 * 29/42000`.
pub const I_ASYMPTOTIC_VARIANCE: f64 = 29.0 / 1680.0;

/// Default cap on `n * reps` for a single simulation.
pub const DEFAULT_BUDGET: u64 = 500_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatKind {
    I,
    K,
}

impl StatKind {
    pub fn evaluate(self, s: &SortedSample, convention: Convention) -> f64 {
        match self {
            StatKind::I => vstat::statistic_i_with(s, convention),
            StatKind::K => vstat::statistic_k(s).0,
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StatKind::I => "I",
            StatKind::K => "K",
        })
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" => Ok(StatKind::I),
            "K" | "k" => Ok(StatKind::K),
            other => Err(Error::InvalidParameter(format!(
                "unknown statistic `{other}`"
            ))),
        }
    }
}

/// Rejection region of the I-test. `K_n` is always upper-tailed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    #[default]
    Upper,
    TwoSided,
}

/// Draws `reps` values of `f`, replication `r` using stream `(seed, r)`.
pub(crate) fn replicate<F>(reps: usize, seed: u64, f: F) -> Vec<f64>
where
    F: Fn(&mut StreamRng) -> f64 + Sync,
{
    (0..reps as u64)
        .into_par_iter()
        .map(|r| f(&mut stream_rng(seed, r)))
        .collect()
}

pub(crate) fn exp_sample(rng: &mut StreamRng, n: usize) -> SortedSample {
    let v: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    SortedSample::new(v).expect("exponential draws are finite and nonnegative")
}

/// Parameters of a null simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullConfig {
    pub kind: StatKind,
    pub convention: Convention,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub budget: u64,
}

impl NullConfig {
    pub fn new(kind: StatKind, n: usize, reps: usize, seed: u64) -> Self {
        Self {
            kind,
            convention: Convention::Strict,
            n,
            reps,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn validate(&self) -> Result<()> {
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
        let requested = self.n as u64 * self.reps as u64;
        if requested > self.budget {
            return Err(Error::BudgetExceeded {
                requested,
                budget: self.budget,
            });
        }
        Ok(())
    }

    pub fn simulate(&self) -> Result<NullDistribution> {
        self.validate()?;
        let (kind, convention, n) = (self.kind, self.convention, self.n);
        let mut values = replicate(self.reps, self.seed, |rng| {
            kind.evaluate(&exp_sample(rng, n), convention)
        });
        values.sort_unstable_by(f64::total_cmp);
        Ok(NullDistribution {
            kind,
            convention,
            n,
            reps: self.reps,
            seed: self.seed,
            values,
        })
    }
}

/// Simulates the null law of `kind` with strict indicators.
pub fn simulate_null(kind: StatKind, n: usize, reps: usize, seed: u64) -> Result<NullDistribution> {
    NullConfig::new(kind, n, reps, seed).simulate()
}

/// Empirical null law of a statistic at a fixed sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullDistribution {
    pub kind: StatKind,
    pub convention: Convention,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    values: Vec<f64>,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

/// `ceil(p * reps)` with a little slack so that e.g. `0.95 * 10000` lands on
/// 9500 rather than 9501.
fn order_index(p: f64, reps: usize) -> usize {
    let k = (p * reps as f64 - 1e-9).ceil();
    (k.max(1.0) as usize).min(reps)
}

impl NullDistribution {
    /// Builds a distribution from precomputed values (sorted here).
    pub fn from_values(
        kind: StatKind,
        convention: Convention,
        n: usize,
        seed: u64,
        mut values: Vec<f64>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroCount {
                what: "replications",
            });
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self {
            kind,
            convention,
            n,
            reps: values.len(),
            seed,
            values,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Upper-`alpha` critical value: the order statistic at 1-based index
    /// `ceil((1 - alpha) * reps)`.
    pub fn critical_value(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.values[order_index(1.0 - alpha, self.reps) - 1])
    }

    /// Lower-`alpha` critical value: the order statistic at 1-based index
    /// `ceil(alpha * reps)`.
    pub fn lower_critical_value(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(self.values[order_index(alpha, self.reps) - 1])
    }

    /// Add-one Monte Carlo p-value for the upper tail,
    /// `(1 + #{v >= observed}) / (reps + 1)`.
    pub fn p_value(&self, observed: f64) -> f64 {
        let at_least = self.reps - self.values.partition_point(|&v| v < observed);
        (1 + at_least) as f64 / (self.reps + 1) as f64
    }

    /// Add-one p-value for the lower tail.
    pub fn p_value_lower(&self, observed: f64) -> f64 {
        let at_most = self.values.partition_point(|&v| v <= observed);
        (1 + at_most) as f64 / (self.reps + 1) as f64
    }

    /// Twice the smaller tail p-value, capped at 1.
    pub fn p_value_two_sided(&self, observed: f64) -> f64 {
        (2.0 * self.p_value(observed).min(self.p_value_lower(observed))).min(1.0)
    }

    pub fn p_value_sided(&self, observed: f64, sidedness: Sidedness) -> f64 {
        match sidedness {
            Sidedness::Upper => self.p_value(observed),
            Sidedness::TwoSided => self.p_value_two_sided(observed),
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.reps as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (self.reps - 1).max(1) as f64
    }

    /// Raw-value cache format: a `#` metadata line, a `value` header, then
    /// one value per line in shortest round-trip decimal form.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# kind={} convention={} n={} reps={} seed={}\nvalue\n",
            self.kind, self.convention, self.n, self.reps, self.seed
        );
        for v in &self.values {
            out.push_str(&format!("{v}\n"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let meta = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| Error::Table("missing metadata line".into()))?;
        let mut kind = None;
        let mut convention = None;
        let mut n = None;
        let mut reps = None;
        let mut seed = None;
        for field in meta.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Table(format!("bad metadata field `{field}`")))?;
            let bad = |_| Error::Table(format!("bad value for {key}"));
            match key {
                "kind" => kind = Some(value.parse::<StatKind>()?),
                "convention" => convention = Some(value.parse::<Convention>()?),
                "n" => n = Some(value.parse::<usize>().map_err(bad)?),
                "reps" => reps = Some(value.parse::<usize>().map_err(bad)?),
                "seed" => seed = Some(value.parse::<u64>().map_err(bad)?),
                _ => return Err(Error::Table(format!("unknown metadata key `{key}`"))),
            }
        }
        if lines.next() != Some("value") {
            return Err(Error::Table("missing `value` header".into()));
        }
        let values = lines
            .enumerate()
            .map(|(i, l)| {
                l.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: i + 3,
                    token: l.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let missing = |k: &str| Error::Table(format!("metadata lacks {k}"));
        let d = Self::from_values(
            kind.ok_or_else(|| missing("kind"))?,
            convention.ok_or_else(|| missing("convention"))?,
            n.ok_or_else(|| missing("n"))?,
            seed.ok_or_else(|| missing("seed"))?,
            values,
        )?;
        if Some(d.reps) != reps {
            return Err(Error::Table("value count does not match reps".into()));
        }
        Ok(d)
    }
}

/// Upper-tail normal approximation `P(Z > sqrt(n) I / sqrt(29/1680))`.
///
/// Reference only: it ignores the O(1/n) offset of the V-statistic's null
/// mean, which is sizeable for small samples (and of opposite sign under
/// the two conventions).
pub fn asymptotic_p_i(i_value: f64, n: usize) -> f64 {
    let z = (n as f64).sqrt() * i_value / I_ASYMPTOTIC_VARIANCE.sqrt();
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// On-disk cache of raw null replications keyed by
/// `(kind, convention, n, reps, seed)`.
#[derive(Debug, Clone)]
pub struct NullCache {
    dir: PathBuf,
}

impl NullCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for(&self, c: &NullConfig) -> PathBuf {
        self.dir.join(format!(
            "null_{}_{}_n{}_r{}_s{}.csv",
            c.kind, c.convention, c.n, c.reps, c.seed
        ))
    }

    pub fn load_or_simulate(&self, config: &NullConfig) -> Result<NullDistribution> {
        let path = self.path_for(config);
        if path.exists() {
            let d = NullDistribution::from_csv(&std::fs::read_to_string(&path)?)?;
            if d.kind == config.kind
                && d.convention == config.convention
                && d.n == config.n
                && d.reps == config.reps
                && d.seed == config.seed
            {
                return Ok(d);
            }
        }
        let d = config.simulate()?;
        std::fs::create_dir_all(&self.dir)?;
        std::fs::write(&path, d.to_csv())?;
        Ok(d)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }
}

/// One row of a persisted critical-value table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalRow {
    pub kind: StatKind,
    pub convention: Convention,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub alpha: f64,
    pub critical_value: f64,
}

/// Critical values for several sample sizes and levels.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CriticalTable {
    pub rows: Vec<CriticalRow>,
}

fn kind_label(kind: StatKind, convention: Convention) -> String {
    match (kind, convention) {
        (StatKind::I, Convention::Weak) => "I-weak".into(),
        _ => kind.to_string(),
    }
}

fn parse_kind_label(s: &str) -> Result<(StatKind, Convention)> {
    match s {
        "I-weak" => Ok((StatKind::I, Convention::Weak)),
        other => Ok((other.parse()?, Convention::Strict)),
    }
}

impl CriticalTable {
    /// Simulates one null distribution per sample size and reads off every
    /// level from it.
    pub fn build(
        kind: StatKind,
        convention: Convention,
        sizes: &[usize],
        alphas: &[f64],
        reps: usize,
        seed: u64,
    ) -> Result<Self> {
        for &a in alphas {
            check_alpha(a)?;
        }
        let mut rows = Vec::new();
        for &n in sizes {
            let d = NullConfig::new(kind, n, reps, seed)
                .convention(convention)
                .simulate()?;
            for &alpha in alphas {
                rows.push(CriticalRow {
                    kind,
                    convention,
                    n,
                    reps,
                    seed,
                    alpha,
                    critical_value: d.critical_value(alpha)?,
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn get(&self, n: usize, alpha: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.n == n && (r.alpha - alpha).abs() < 1e-12)
            .map(|r| r.critical_value)
    }

    /// Columns `kind,n,reps,seed,alpha,critical_value`; the weak-convention
    /// I statistic is labelled `I-weak`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,n,reps,seed,alpha,critical_value\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                kind_label(r.kind, r.convention),
                r.n,
                r.reps,
                r.seed,
                r.alpha,
                r.critical_value
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some("kind,n,reps,seed,alpha,critical_value") => {}
            _ => return Err(Error::Table("unexpected header".into())),
        }
        let rows = lines
            .map(|line| {
                let f: Vec<&str> = line.split(',').collect();
                if f.len() != 6 {
                    return Err(Error::Table(format!("expected 6 fields in `{line}`")));
                }
                let bad = || Error::Table(format!("bad row `{line}`"));
                let (kind, convention) = parse_kind_label(f[0])?;
                Ok(CriticalRow {
                    kind,
                    convention,
                    n: f[1].parse().map_err(|_| bad())?,
                    reps: f[2].parse().map_err(|_| bad())?,
                    seed: f[3].parse().map_err(|_| bad())?,
                    alpha: f[4].parse().map_err(|_| bad())?,
                    critical_value: f[5].parse().map_err(|_| bad())?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    /// One row per sample size, one column per level, two decimals.
    pub fn to_markdown(&self) -> String {
        let mut alphas: Vec<f64> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();
        for r in &self.rows {
            if !alphas.iter().any(|a| (a - r.alpha).abs() < 1e-12) {
                alphas.push(r.alpha);
            }
            if !sizes.contains(&r.n) {
                sizes.push(r.n);
            }
        }
        let mut out = String::from("| n |");
        for a in &alphas {
            out.push_str(&format!(" α={a} |"));
        }
        out.push_str("\n|---|");
        out.push_str(&"---|".repeat(alphas.len()));
        out.push('\n');
        for n in sizes {
            out.push_str(&format!("| {n} |"));
            for &a in &alphas {
                match self.get(n, a) {
                    Some(v) => out.push_str(&format!(" {v:.2} |")),
                    None => out.push_str(" |"),
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Decision of both tests at one level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub alpha: f64,
    pub reject_i: bool,
    pub reject_k: bool,
}

/// Result of testing one sample for exponentiality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub n: usize,
    pub i_value: f64,
    pub k_value: f64,
    pub k_argmax: f64,
    pub p_i: f64,
    pub p_k: f64,
    /// Normal approximation for `I_n`; see [`asymptotic_p_i`].
    pub p_i_asymptotic: f64,
    pub reps: usize,
    pub seed: u64,
    pub convention: Convention,
    pub sidedness: Sidedness,
    pub decisions: Vec<Decision>,
}

/// Settings for [`run_test`].
#[derive(Debug, Clone, PartialEq)]
pub struct TestConfig {
    pub reps: usize,
    pub seed: u64,
    pub convention: Convention,
    pub sidedness: Sidedness,
    pub alphas: Vec<f64>,
}

impl Default for TestConfig {
    fn default() -> Self {
        Self {
            reps: 10_000,
            seed: crate::DEFAULT_SEED,
            convention: Convention::Strict,
            sidedness: Sidedness::Upper,
            alphas: vec![0.05],
        }
    }
}

/// Computes both statistics, calibrates them at the sample's size and
/// reports p-values and decisions. The two null laws share replication
/// streams, so one set of Exp(1) samples serves both.
pub fn run_test(sample: &SortedSample, config: &TestConfig) -> Result<TestReport> {
    for &a in &config.alphas {
        check_alpha(a)?;
    }
    let n = sample.len();
    let base =
        NullConfig::new(StatKind::I, n, config.reps, config.seed).convention(config.convention);
    base.validate()?;
    let pairs: Vec<(f64, f64)> = (0..config.reps as u64)
        .into_par_iter()
        .map(|r| {
            let s = exp_sample(&mut stream_rng(config.seed, r), n);
            (
                vstat::statistic_i_with(&s, config.convention),
                vstat::statistic_k(&s).0,
            )
        })
        .collect();
    let (null_i, null_k): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let null_i =
        NullDistribution::from_values(StatKind::I, config.convention, n, config.seed, null_i)?;
    let null_k =
        NullDistribution::from_values(StatKind::K, config.convention, n, config.seed, null_k)?;

    let stats = vstat::statistics(sample, config.convention);
    let p_i = null_i.p_value_sided(stats.i_value, config.sidedness);
    let p_k = null_k.p_value(stats.k_value);
    let p_i_asymptotic = match config.sidedness {
        Sidedness::Upper => asymptotic_p_i(stats.i_value, n),
        Sidedness::TwoSided => {
            let upper = asymptotic_p_i(stats.i_value, n);
            (2.0 * upper.min(1.0 - upper)).min(1.0)
        }
    };
    let decisions = config
        .alphas
        .iter()
        .map(|&alpha| Decision {
            alpha,
            reject_i: p_i < alpha,
            reject_k: p_k < alpha,
        })
        .collect();
    Ok(TestReport {
        n,
        i_value: stats.i_value,
        k_value: stats.k_value,
        k_argmax: stats.k_argmax,
        p_i,
        p_k,
        p_i_asymptotic,
        reps: config.reps,
        seed: config.seed,
        convention: config.convention,
        sidedness: config.sidedness,
        decisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(values: Vec<f64>) -> NullDistribution {
        NullDistribution::from_values(StatKind::K, Convention::Strict, 5, 0, values).unwrap()
    }

    #[test]
    fn quantile_convention() {
        let d = dist((1..=100).map(f64::from).collect());
        assert_eq!(d.critical_value(0.05).unwrap(), 95.0);
        assert_eq!(d.critical_value(0.1).unwrap(), 90.0);
        assert_eq!(d.critical_value(0.999).unwrap(), 1.0);
        assert_eq!(d.lower_critical_value(0.05).unwrap(), 5.0);
        assert_eq!(d.critical_value(0.0), Err(Error::InvalidAlpha(0.0)));
        assert_eq!(d.critical_value(1.0), Err(Error::InvalidAlpha(1.0)));
    }

    #[test]
    fn exact_products_do_not_bump_the_index() {
        let d = dist((1..=10_000).map(f64::from).collect());
        assert_eq!(d.critical_value(0.05).unwrap(), 9500.0);
        assert_eq!(d.critical_value(0.01).unwrap(), 9900.0);
    }

    #[test]
    fn degenerate_distribution() {
        let d = dist(vec![0.0; 50]);
        for a in [0.01, 0.05, 0.5] {
            assert_eq!(d.critical_value(a).unwrap(), 0.0);
        }
    }

    #[test]
    fn p_values() {
        let d = dist(vec![0.1, 0.2, 0.3, 0.4]);
        assert_eq!(d.p_value(-1.0), 1.0);
        assert_eq!(d.p_value(0.3), 3.0 / 5.0);
        assert_eq!(d.p_value(1.0), 1.0 / 5.0);
        assert_eq!(d.p_value_lower(0.1), 2.0 / 5.0);
        assert_eq!(d.p_value_two_sided(0.05), 2.0 / 5.0);
        assert_eq!(d.p_value_two_sided(0.25), 1.0);
    }

    #[test]
    fn single_point_i_is_zero() {
        let d = simulate_null(StatKind::I, 1, 100, 3).unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
        assert_eq!(d.reps, 100);
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            simulate_null(StatKind::K, 0, 10, 1),
            Err(Error::ZeroCount {
                what: "sample size"
            })
        );
        assert_eq!(
            simulate_null(StatKind::K, 10, 0, 1),
            Err(Error::ZeroCount {
                what: "replications"
            })
        );
        let e = NullConfig::new(StatKind::K, 100, 100, 1)
            .budget(5_000)
            .simulate();
        assert_eq!(
            e,
            Err(Error::BudgetExceeded {
                requested: 10_000,
                budget: 5_000
            })
        );
    }

    #[test]
    fn raw_csv_round_trip_is_exact() {
        let d = NullConfig::new(StatKind::I, 7, 50, 11)
            .convention(Convention::Weak)
            .simulate()
            .unwrap();
        let back = NullDistribution::from_csv(&d.to_csv()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn critical_table_csv() {
        let t = CriticalTable::build(
            StatKind::K,
            Convention::Strict,
            &[5, 8],
            &[0.1, 0.05],
            200,
            9,
        )
        .unwrap();
        assert_eq!(t.rows.len(), 4);
        let text = t.to_csv();
        assert!(text.starts_with("kind,n,reps,seed,alpha,critical_value\nK,5,200,9,0.1,"));
        assert_eq!(CriticalTable::from_csv(&text).unwrap(), t);
        assert!(t.to_markdown().contains("| 8 |"));
        assert!(CriticalTable::from_csv("a,b\n").is_err());
    }

    #[test]
    fn asymptotic_reference() {
        assert!((asymptotic_p_i(0.0, 37) - 0.5).abs() < 1e-15);
        let n = 50;
        let one_sd = I_ASYMPTOTIC_VARIANCE.sqrt() / (n as f64).sqrt();
        assert!((asymptotic_p_i(one_sd, n) - 0.158_655_253_931_457).abs() < 1e-9);
    }

    #[test]
    fn cache_reuses_files() {
        let dir = std::env::temp_dir().join(format!("expochar-cache-{}", std::process::id()));
        let cache = NullCache::new(&dir);
        let cfg = NullConfig::new(StatKind::K, 6, 40, 5);
        let a = cache.load_or_simulate(&cfg).unwrap();
        assert!(cache.path_for(&cfg).exists());
        let b = cache.load_or_simulate(&cfg).unwrap();
        assert_eq!(a, b);
        std::fs::remove_dir_all(&dir).ok();
    }
}
