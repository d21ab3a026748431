//! Exact evaluation of the V-empirical distribution functions `H_n`, `G_n`
//! and the statistics `I_n`, `K_n`.
//!
//! For a sample `X_1..X_n`,
//!
//! ```text
//! H_n(t) = n^-3 #{(j,k,l) : max(X_j, X_k, X_l) < t}
//! G_n(t) = n^-4 #{(i,j,k,l) : X_i + med(X_j, X_k, X_l) < t}
//! ```
//!
//! Both are computed from cumulative counts instead of tuple enumeration:
//! the maximum of a triple is below `t` iff all three members are, and the
//! number of ordered triples whose median is below `u` is
//! `n^3 * phi(q) = 3 c^2 n - 2 c^3` where `c` is the number of observations
//! below `u` and `phi(q) = 3q^2 - 2q^3`. The identity holds with ties, so all
//! counts are exact integers and the only rounding happens in the final
//! division.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::SortedSample;

/// Which inequality the indicators of `H_n` and `G_n` use.
///
/// `Strict` gives left-continuous e.d.f.s (`I{. < t}`), `Weak` gives
/// right-continuous ones (`I{. <= t}`). The choice matters for `I_n`, which
/// integrates against `dF_n` and so evaluates `H_n - G_n` exactly at the
/// sample points; `K_n` is the same under both since the step values of
/// `H_n - G_n` do not depend on which endpoint of each step is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[default]
    Strict,
    Weak,
}

impl Convention {
    #[inline]
    fn holds(self, lhs: f64, t: f64) -> bool {
        match self {
            Convention::Strict => lhs < t,
            Convention::Weak => lhs <= t,
        }
    }

    fn count(self, s: &SortedSample, t: f64) -> usize {
        match self {
            Convention::Strict => s.count_below(t),
            Convention::Weak => s.count_at_most(t),
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Convention::Strict => "strict",
            Convention::Weak => "weak",
        })
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Convention::Strict),
            "weak" => Ok(Convention::Weak),
            other => Err(Error::InvalidParameter(format!(
                "unknown convention `{other}` (expected strict or weak)"
            ))),
        }
    }
}

/// `n^3 * phi(c/n)`: the number of ordered triples whose median lies among
/// the `c` smallest observations.
#[inline]
fn median_count(c: usize, n: usize) -> i64 {
    let (c, n) = (c as i64, n as i64);
    3 * c * c * n - 2 * c * c * c
}

#[inline]
fn cube(c: usize) -> i64 {
    let c = c as i64;
    c * c * c
}

/// Fraction of observations strictly below `t`.
pub fn ecdf_strict(s: &SortedSample, t: f64) -> f64 {
    s.count_below(t) as f64 / s.len() as f64
}

/// `H_n(t)`, the V-empirical d.f. of the maximum of three observations.
pub fn h_fn(s: &SortedSample, t: f64) -> f64 {
    h_fn_with(s, t, Convention::Strict)
}

pub fn h_fn_with(s: &SortedSample, t: f64, convention: Convention) -> f64 {
    let n = s.len();
    cube(convention.count(s, t)) as f64 / cube(n) as f64
}

/// `G_n(t)`, the V-empirical d.f. of `X_i + med(X_j, X_k, X_l)`.
pub fn g_fn(s: &SortedSample, t: f64) -> f64 {
    g_fn_with(s, t, Convention::Strict)
}

pub fn g_fn_with(s: &SortedSample, t: f64, convention: Convention) -> f64 {
    let x = s.values();
    let n = x.len();
    let count: i64 = x
        .iter()
        .map(|&xi| {
            let c = x.partition_point(|&xj| convention.holds(xi + xj, t));
            median_count(c, n)
        })
        .sum();
    count as f64 / (cube(n) * n as i64) as f64
}

/// Number of ordered triples whose median is each sorted observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianWeights {
    pub weights: Vec<i64>,
    pub total: i64,
}

/// For distinct observations the weight of rank `r` (1-based) is
/// `6(r-1)(n-r) + 3n - 2`. The weights telescope from the cumulative counts
/// `3c^2 n - 2c^3`, so for tied observations each tie group receives exactly
/// the number of triples whose median equals the tied value; see
/// [`MedianWeights::group_totals`].
pub fn median_weights(s: &SortedSample) -> MedianWeights {
    let n = s.len();
    let weights = (0..n)
        .map(|r| median_count(r + 1, n) - median_count(r, n))
        .collect();
    MedianWeights {
        weights,
        total: cube(n),
    }
}

impl MedianWeights {
    /// `(value, number of ordered triples with that median)` for each
    /// distinct value, from the strict and weak cumulative counts.
    pub fn group_totals(&self, s: &SortedSample) -> Vec<(f64, i64)> {
        let x = s.values();
        let n = x.len();
        let mut out = Vec::new();
        let mut start = 0;
        while start < n {
            let v = x[start];
            let end = s.count_at_most(v);
            out.push((v, median_count(end, n) - median_count(start, n)));
            start = end;
        }
        out
    }
}

/// Values of both statistics for one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatisticPair {
    pub i_value: f64,
    pub k_value: f64,
    /// Left end of the step of `H_n - G_n` on which `K_n` is attained.
    pub k_argmax: f64,
}

pub fn statistics(s: &SortedSample, convention: Convention) -> StatisticPair {
    let (k_value, k_argmax) = statistic_k(s);
    StatisticPair {
        i_value: statistic_i_with(s, convention),
        k_value,
        k_argmax,
    }
}

/// Integral-type statistic `I_n = n^-1 sum_m (H_n(X_m) - G_n(X_m))` with
/// strict indicators.
pub fn statistic_i(s: &SortedSample) -> f64 {
    statistic_i_with(s, Convention::Strict)
}

/// `I_n` in O(n^2) time and O(1) extra space.
///
/// For a fixed evaluation point `t`, the number of `j` with `X_i + X_j < t`
/// is non-increasing in `i` on sorted data, so one pointer walked downward
/// serves the whole row.
pub fn statistic_i_with(s: &SortedSample, convention: Convention) -> f64 {
    let x = s.values();
    let n = x.len();
    let mut total: i128 = 0;
    for &t in x {
        let h = cube(convention.count(s, t)) * n as i64;
        let mut g: i64 = 0;
        let mut p = n;
        for &xi in x {
            while p > 0 && !convention.holds(xi + x[p - 1], t) {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            g += median_count(p, n);
        }
        total += (h - g) as i128;
    }
    let n4 = (cube(n) * n as i64) as f64;
    total as f64 / n4 / n as f64
}

/// Kolmogorov-type statistic `K_n = sup_t |H_n(t) - G_n(t)|` and the left
/// end of the step where it is attained (smallest such location).
///
/// `D = H_n - G_n` only jumps at the observations (where `H_n` and `G_n`
/// jump) and at the pairwise sums `X_i + X_r` (where `G_n` jumps, since the
/// median of a triple is always an observation). The sweep visits the
/// `n^2` sums in sorted order, merged with the observations, and evaluates
/// the right limit of `D` after each distinct location.
pub fn statistic_k(s: &SortedSample) -> (f64, f64) {
    let x = s.values();
    let n = x.len();
    let w = median_weights(s).weights;

    let mut events: Vec<(f64, i64)> = Vec::with_capacity(n * n);
    for &xi in x {
        for (&xr, &wr) in x.iter().zip(&w) {
            events.push((xi + xr, wr));
        }
    }
    events.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));

    let n = n as i64;
    let mut h_count = 0usize;
    let mut g_count: i64 = 0;
    let mut e = 0usize;
    let mut best: i64 = 0;
    let mut best_at = 0.0;
    while h_count < x.len() || e < events.len() {
        let loc = match (x.get(h_count), events.get(e)) {
            (Some(&a), Some(&(b, _))) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&(b, _))) => b,
            (None, None) => unreachable!(),
        };
        while h_count < x.len() && x[h_count] == loc {
            h_count += 1;
        }
        while e < events.len() && events[e].0 == loc {
            g_count += events[e].1;
            e += 1;
        }
        let d = (cube(h_count) * n - g_count).abs();
        if d > best {
            best = d;
            best_at = loc;
        }
    }
    (best as f64 / (n * n * n * n) as f64, best_at)
}

/// Largest sample accepted by the enumeration oracles.
pub const NAIVE_MAX_N: usize = 40;

fn naive_guard(s: &SortedSample) -> Result<()> {
    if s.len() > NAIVE_MAX_N {
        return Err(Error::SampleTooLarge {
            n: s.len(),
            max: NAIVE_MAX_N,
        });
    }
    Ok(())
}

/// Medians and maxima of every ordered triple, in enumeration order.
fn triples(x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut med = Vec::with_capacity(x.len().pow(3));
    let mut max = Vec::with_capacity(x.len().pow(3));
    for &a in x {
        for &b in x {
            for &c in x {
                let mut t = [a, b, c];
                t.sort_unstable_by(f64::total_cmp);
                med.push(t[1]);
                max.push(t[2]);
            }
        }
    }
    (med, max)
}

fn naive_difference(x: &[f64], med: &[f64], max: &[f64], t: f64, convention: Convention) -> f64 {
    let n = x.len() as f64;
    let h = max.iter().filter(|&&m| convention.holds(m, t)).count();
    let g: usize = x
        .iter()
        .map(|&xi| med.iter().filter(|&&m| convention.holds(xi + m, t)).count())
        .sum();
    h as f64 / n.powi(3) - g as f64 / n.powi(4)
}

/// `I_n` by literal enumeration of all ordered triples and quadruples.
/// Test oracle only; rejects `n > NAIVE_MAX_N`.
pub fn statistic_i_naive(s: &SortedSample, convention: Convention) -> Result<f64> {
    naive_guard(s)?;
    let x = s.values();
    let (med, max) = triples(x);
    let sum: f64 = x
        .iter()
        .map(|&t| naive_difference(x, &med, &max, t, convention))
        .sum();
    Ok(sum / x.len() as f64)
}

/// `K_n` by enumeration: the right limit of `H_n - G_n` at every candidate
/// jump location (0, the observations, and all pairwise sums), each
/// evaluated by enumerating all triples and quadruples. Test oracle only.
pub fn statistic_k_naive(s: &SortedSample) -> Result<f64> {
    naive_guard(s)?;
    let x = s.values();
    let (med, max) = triples(x);
    let mut candidates = vec![0.0];
    candidates.extend_from_slice(x);
    for &a in x {
        for &b in x {
            candidates.push(a + b);
        }
    }
    Ok(candidates
        .into_iter()
        .map(|t| naive_difference(x, &med, &max, t, Convention::Weak).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(v: &[f64]) -> SortedSample {
        SortedSample::from_slice(v).unwrap()
    }

    #[test]
    fn ecdf_examples() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert_eq!(ecdf_strict(&s, 2.5), 2.0 / 3.0);
        assert_eq!(ecdf_strict(&s, 1.0), 0.0);
        assert_eq!(ecdf_strict(&s, 10.0), 1.0);
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_fn(&sample(&[1.0, 2.0]), 2.0), 0.125);
        assert_eq!(h_fn(&sample(&[0.5, 3.0]), 0.0), 0.0);
        // 27 ordered triples of {1,2,3}; only (1,1,1) has max < 1.5
        assert_eq!(h_fn(&sample(&[1.0, 2.0, 3.0]), 1.5), 1.0 / 27.0);
    }

    #[test]
    fn g_examples() {
        let s = sample(&[1.0, 2.0]);
        assert_eq!(g_fn(&s, 2.0), 0.0);
        assert_eq!(g_fn(&s, 3.5), 0.75);
        assert_eq!(g_fn(&sample(&[0.0, 1.0]), 0.0), 0.0);
    }

    #[test]
    fn median_weight_examples() {
        assert_eq!(
            median_weights(&sample(&[1.0, 2.0, 3.0])).weights,
            vec![7, 13, 7]
        );
        assert_eq!(median_weights(&sample(&[1.0, 2.0])).weights, vec![4, 4]);
        assert_eq!(median_weights(&sample(&[5.0])).weights, vec![1]);
    }

    #[test]
    fn median_weights_match_distinct_rank_formula() {
        let n = 9usize;
        let s = SortedSample::new((0..n).map(|i| i as f64 + 0.5).collect()).unwrap();
        let w = median_weights(&s);
        for r in 1..=n {
            let expected = 6 * (r as i64 - 1) * (n - r) as i64 + 3 * n as i64 - 2;
            assert_eq!(w.weights[r - 1], expected);
        }
        assert_eq!(w.weights.iter().sum::<i64>(), w.total);
    }

    #[test]
    fn group_totals_count_tied_medians() {
        let s = sample(&[1.0, 2.0, 2.0, 3.0, 3.0, 3.0]);
        let x = s.values();
        let (med, _) = triples(x);
        let totals = median_weights(&s).group_totals(&s);
        assert_eq!(totals.len(), 3);
        for (v, w) in totals {
            let brute = med.iter().filter(|&&m| m == v).count() as i64;
            assert_eq!(w, brute, "value {v}");
        }
    }

    #[test]
    fn statistic_i_examples() {
        assert_eq!(statistic_i(&sample(&[4.2])), 0.0);
        assert_eq!(statistic_i(&sample(&[1.0, 2.0])), 1.0 / 16.0);
    }

    #[test]
    fn statistic_i_weak_two_points() {
        // D(1) = 1/8 - 0, D(2) = 1 - 1/4 with closed indicators
        assert_eq!(
            statistic_i_with(&sample(&[1.0, 2.0]), Convention::Weak),
            7.0 / 16.0
        );
    }

    #[test]
    fn statistic_k_examples() {
        assert_eq!(statistic_k(&sample(&[1.0])), (1.0, 1.0));
        assert_eq!(statistic_k(&sample(&[1.0, 2.0])), (0.75, 2.0));
    }

    #[test]
    fn all_zero_sample() {
        let s = sample(&[0.0, 0.0, 0.0]);
        assert_eq!(statistic_k(&s), (0.0, 0.0));
        assert_eq!(statistic_i(&s), 0.0);
    }

    #[test]
    fn naive_examples() {
        let s = sample(&[1.0, 2.0]);
        assert_eq!(
            statistic_i_naive(&s, Convention::Strict).unwrap(),
            1.0 / 16.0
        );
        assert_eq!(statistic_k_naive(&s).unwrap(), 0.75);
        let c = sample(&[3.7]);
        assert_eq!(statistic_i_naive(&c, Convention::Strict).unwrap(), 0.0);
        assert_eq!(statistic_k_naive(&c).unwrap(), 1.0);
    }

    #[test]
    fn naive_guard_rejects_large_samples() {
        let s = SortedSample::new((0..41).map(f64::from).collect()).unwrap();
        assert_eq!(
            statistic_k_naive(&s),
            Err(Error::SampleTooLarge { n: 41, max: 40 })
        );
        assert!(statistic_i_naive(&s, Convention::Strict).is_err());
    }

    #[test]
    fn convention_parses() {
        assert_eq!("weak".parse::<Convention>().unwrap(), Convention::Weak);
        assert!("loose".parse::<Convention>().is_err());
    }
}
