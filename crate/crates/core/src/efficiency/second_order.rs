//! Second-order expansion for families whose first-order slope vanishes.

use serde::{Deserialize, Serialize};

use super::{b_integral, kl_exact, richardson, sup_a};
use crate::alternatives::AlternativeFamily;
use crate::error::Result;
use crate::null::StatKind;
use crate::optimize;
use crate::quadrature::Quadrature;

/// Coefficients of `theta^2` in the statistic limit and of `theta^4` in
/// `2K(theta)`, with the finite-`theta` samples they were extrapolated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondOrder {
    pub slope_coefficient: f64,
    pub kl_coefficient: f64,
    pub argmax_t: Option<f64>,
    /// `(theta, b(theta) / theta^2)`.
    pub slope_samples: Vec<(f64, f64)>,
    /// `(theta, 2K(theta) / theta^4)`.
    pub kl_samples: Vec<(f64, f64)>,
}

/// `(theta, value)` pairs along the extrapolation ladder.
pub type Samples = Vec<(f64, f64)>;

fn ladder(theta: f64) -> [f64; 3] {
    [theta, 2.0 * theta, 4.0 * theta]
}

fn extrapolate(samples: &[(f64, f64)]) -> f64 {
    richardson(samples[0].1, samples[1].1, samples[2].1)
}

/// `2K(theta) / theta^4` at `theta, 2 theta, 4 theta` and its limit.
pub fn kl_quartic(fam: &AlternativeFamily, theta: f64) -> Result<(f64, Samples)> {
    let samples = ladder(theta)
        .into_iter()
        .map(|t| Ok((t, 2.0 * kl_exact(fam, t)? / t.powi(4))))
        .collect::<Result<Vec<_>>>()?;
    Ok((extrapolate(&samples), samples))
}

/// `b_I(theta) / theta^2` at `theta, 2 theta, 4 theta` and its limit.
pub fn slope_i_quadratic(fam: &AlternativeFamily, theta: f64) -> Result<(f64, Samples)> {
    let q = Quadrature::adaptive().with_tolerance(0.0, 1e-11);
    let samples = ladder(theta)
        .into_iter()
        .map(|t| Ok((t, b_integral(fam, t, &q)? / (t * t))))
        .collect::<Result<Vec<_>>>()?;
    Ok((extrapolate(&samples), samples))
}

/// `sup_t |a(t, theta)| / theta^2` at `theta, 2 theta, 4 theta`, its limit,
/// and the maximizing level at the smallest `theta`.
pub fn slope_k_quadratic(fam: &AlternativeFamily, theta: f64) -> Result<(f64, f64, Samples)> {
    let q = Quadrature::adaptive().with_tolerance(0.0, 1e-11);
    let mut argmax = f64::NAN;
    let mut samples = Vec::with_capacity(3);
    for t in ladder(theta) {
        let (at, v) = sup_a(fam, t, &q)?;
        if argmax.is_nan() {
            argmax = at;
        }
        samples.push((t, v / (t * t)));
    }
    Ok((extrapolate(&samples), argmax, samples))
}

/// Both second-order coefficients for `kind`.
pub fn expand(fam: &AlternativeFamily, kind: StatKind, theta: f64) -> Result<SecondOrder> {
    let (kl_coefficient, kl_samples) = kl_quartic(fam, theta)?;
    let (slope_coefficient, argmax_t, slope_samples) = match kind {
        StatKind::I => {
            let (c, s) = slope_i_quadratic(fam, theta)?;
            (c, None, s)
        }
        StatKind::K => {
            let (c, t, s) = slope_k_quadratic(fam, theta)?;
            (c, Some(t), s)
        }
    };
    Ok(SecondOrder {
        slope_coefficient,
        kl_coefficient,
        argmax_t,
        slope_samples,
        kl_samples,
    })
}

/// Closed form of `b_I(theta)` for the `ee` family.
pub fn ee_slope_i(theta: f64) -> f64 {
    theta * theta * (168.0 + 356.0 * theta + 161.0 * theta * theta)
        / (2304.0 * (1.0 + theta).powi(4))
}

/// Coefficient of `theta^2` in [`ee_slope_i`].
pub const EE_SLOPE_I_COEFFICIENT: f64 = 7.0 / 96.0;

/// Coefficient of `theta^2` in `a(t, theta)` for the `ee` family.
pub fn ee_a2(t: f64) -> f64 {
    let e = |k: f64| (-k * t).exp();
    1.5 * (-e(3.0) + 8.0 * e(2.0) - 7.0 * e(1.0) - t * e(3.0) + 4.0 * t * e(2.0) + 3.0 * t * e(1.0))
}

/// Maximizer and maximum of `|ee_a2|`.
pub fn ee_sup_a2() -> (f64, f64) {
    optimize::grid_then_golden(|t| ee_a2(t).abs(), 0.0, 20.0, 0.05, 1e-10)
}
