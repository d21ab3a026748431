//! Simulation check of the identity `X0 + med(X1, X2, X3) = max(X1, X2, X3)`
//! in distribution, which holds exactly when the `X`s are exponential.

use serde::{Deserialize, Serialize};

use crate::alternatives::AlternativeFamily;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub family: String,
    pub theta: f64,
    pub quadruples: usize,
    pub seed: u64,
    /// Two-sample Kolmogorov distance between the two sides.
    pub distance: f64,
}

/// Largest gap between the empirical d.f.s of two samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Kolmogorov distance between the laws of `X0 + med(X1, X2, X3)` and
/// `max(X1, X2, X3)` over `quadruples` draws from `fam` at `theta`.
pub fn characterization_check(
    fam: &AlternativeFamily,
    theta: f64,
    quadruples: usize,
    seed: u64,
) -> Result<CharacterizationReport> {
    if quadruples == 0 {
        return Err(Error::ZeroCount { what: "quadruples" });
    }
    fam.check_theta(theta)?;
    let mut rng = stream_rng(seed, 0);
    let mut left = Vec::with_capacity(quadruples);
    let mut right = Vec::with_capacity(quadruples);
    for _ in 0..quadruples {
        let x0 = fam.draw(theta, &mut rng);
        let mut t = [0.0; 3];
        for v in &mut t {
            *v = fam.draw(theta, &mut rng);
        }
        t.sort_unstable_by(f64::total_cmp);
        left.push(x0 + t[1]);
        right.push(t[2]);
    }
    Ok(CharacterizationReport {
        family: fam.name(),
        theta,
        quadruples,
        seed,
        distance: ks_two_sample(&left, &right),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_basics() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert_eq!(ks_two_sample(&[1.0, 3.0], &[2.0, 4.0]), 0.5);
    }

    #[test]
    fn exponential_holds_uniform_fails() {
        let e = characterization_check(&AlternativeFamily::exponential(), 0.0, 20_000, 5).unwrap();
        let u = characterization_check(&AlternativeFamily::uniform(), 0.0, 20_000, 5).unwrap();
        assert!(e.distance < 0.02, "{}", e.distance);
        assert!(u.distance > 0.05, "{}", u.distance);
    }
}
