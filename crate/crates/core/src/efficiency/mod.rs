//! Local Bahadur efficiency of the two tests.
//!
//! For a family `g(x, theta)` with perturbation `h = d/dtheta g(., 0)`, the
//! exact slope of a test is `c(theta) = 2 f(b(theta))`, where `b` is the
//! limit in probability of the statistic under the alternative and
//! `f(e) ~ L e^2` is its large-deviation function near zero. The minimal
//! Kullback-Leibler distance to the exponential family satisfies
//! `2K(theta) ~ C theta^2`. The local efficiency is `lim c / 2K`.
//!
//! When the first-order slope vanishes (as for the `ee` family) both `b`
//! and `2K` are expanded one order further: `b ~ b2 theta^2`,
//! `2K ~ kappa theta^4`, and the efficiency is `2 L b2^2 / kappa`. Those
//! coefficients come from Richardson extrapolation of the exact
//! finite-`theta` quantities.

pub mod projection;
pub mod second_order;

use std::cell::RefCell;

use serde::{Deserialize, Serialize};

pub use projection::*;

use crate::alternatives::{self, AlternativeFamily};
use crate::error::{Error, Result};
use crate::null::StatKind;
use crate::optimize;
use crate::quadrature::Quadrature;

/// Below this magnitude a slope or curvature counts as zero.
pub const DEGENERACY_EPS: f64 = 1e-8;

/// Grid used for the supremum over levels `t`.
pub const T_GRID_STEP: f64 = 0.05;
pub const T_GRID_MAX: f64 = 15.0;

fn require_h(fam: &AlternativeFamily) -> Result<()> {
    if fam.has_h() {
        Ok(())
    } else {
        Err(Error::Inapplicable(format!(
            "family {} has no perturbation function",
            fam.name()
        )))
    }
}

fn h_of(fam: &AlternativeFamily) -> impl Fn(f64) -> f64 + '_ {
    move |x| fam.h(x).unwrap_or(0.0)
}

/// Leading coefficient `L` of the large-deviation function.
pub fn ld_coefficient(kind: StatKind) -> f64 {
    match kind {
        StatKind::I => LD_COEFFICIENT_I,
        StatKind::K => ld_coefficient_k(),
    }
}

/// `5 int psi h`, the coefficient of `theta` in `b_I(theta)`.
pub fn slope_i(fam: &AlternativeFamily) -> Result<f64> {
    slope_i_with(fam, &Quadrature::adaptive())
}

pub fn slope_i_with(fam: &AlternativeFamily, q: &Quadrature) -> Result<f64> {
    require_h(fam)?;
    let h = h_of(fam);
    let mut bp = fam.singular_points();
    bp.push(1.0);
    Ok(5.0 * q.semi_infinite(|x| psi(x) * h(x), &bp)?)
}

/// `int xi(x, t) h(x) dx`; the derivative in `theta` at zero of `a(t, theta)`
/// is four times this.
pub fn xi_h_integral(fam: &AlternativeFamily, t: f64, q: &Quadrature) -> Result<f64> {
    require_h(fam)?;
    let h = h_of(fam);
    let mut bp = fam.singular_points();
    bp.push(t);
    q.semi_infinite(|x| xi(x, t) * h(x), &bp)
}

/// `4 sup_t |int xi(., t) h|` and the maximizing level `t1`.
pub fn slope_k(fam: &AlternativeFamily) -> Result<(f64, f64)> {
    slope_k_with(fam, &Quadrature::adaptive())
}

pub fn slope_k_with(fam: &AlternativeFamily, q: &Quadrature) -> Result<(f64, f64)> {
    let (t1, sup) = sup_abs_over_levels(|t| xi_h_integral(fam, t, q))?;
    Ok((4.0 * sup, t1))
}

/// Maximizes `|f(t)|` over the level grid, then refines by golden section.
/// Ties go to the smaller level.
fn sup_abs_over_levels<F: Fn(f64) -> Result<f64>>(f: F) -> Result<(f64, f64)> {
    let cells = (T_GRID_MAX / T_GRID_STEP).round() as usize;
    let mut best = (0.0, f(0.0)?.abs());
    for k in 1..=cells {
        let t = k as f64 * T_GRID_STEP;
        let v = f(t)?.abs();
        if v > best.1 {
            best = (t, v);
        }
    }
    let lo = (best.0 - T_GRID_STEP).max(0.0);
    let hi = (best.0 + T_GRID_STEP).min(T_GRID_MAX);
    // quadrature errors inside the refinement fall back to the grid value
    let (t, v) = optimize::golden_max(
        |t| f(t).map(f64::abs).unwrap_or(f64::NEG_INFINITY),
        lo,
        hi,
        1e-9,
    );
    Ok(if v >= best.1 { (t, v) } else { best })
}

/// `C = int h^2 e^x - (int x h)^2`, the coefficient of `theta^2` in `2K(theta)`.
pub fn kl_curvature(fam: &AlternativeFamily) -> Result<f64> {
    kl_curvature_with(fam, &Quadrature::adaptive())
}

pub fn kl_curvature_with(fam: &AlternativeFamily, q: &Quadrature) -> Result<f64> {
    require_h(fam)?;
    let bp = fam.singular_points();
    let r = |x: f64| fam.h_ratio(x).unwrap_or(0.0);
    let weight = |x: f64| (-x).exp();
    // h^2 e^x = e^-x r^2, which stays finite where h^2 and e^x would not
    let square = q.semi_infinite(
        |x| {
            let w = weight(x);
            if w == 0.0 {
                0.0
            } else {
                w * r(x) * r(x)
            }
        },
        &bp,
    )?;
    let first = q.semi_infinite(
        |x| {
            let w = weight(x);
            if w == 0.0 {
                0.0
            } else {
                x * w * r(x)
            }
        },
        &bp,
    )?;
    Ok(square - first * first)
}

/// `K(theta) = inf_lambda KL(g(., theta) || Exp(lambda))`. The infimum is at
/// `lambda = 1 / mean`; the divergence is integrated in the form
/// `int q ((1+d) ln(1+d) - d)` with `d = g/q - 1`, which keeps full relative
/// accuracy when `g` is close to `q`.
pub fn kl_exact(fam: &AlternativeFamily, theta: f64) -> Result<f64> {
    kl_exact_with(
        fam,
        theta,
        &Quadrature::adaptive().with_tolerance(1e-22, 1e-10),
    )
}

pub fn kl_exact_with(fam: &AlternativeFamily, theta: f64, q: &Quadrature) -> Result<f64> {
    fam.check_theta(theta)?;
    let bp = fam.singular_points();
    let mean = q.semi_infinite(|x| x * fam.density(x, theta), &bp)?;
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::Quadrature(format!(
            "non-finite mean for {}",
            fam.name()
        )));
    }
    let lambda = 1.0 / mean;
    let value = q.semi_infinite(
        |x| {
            let qx = lambda * (-lambda * x).exp();
            let g = fam.density(x, theta);
            if qx == 0.0 {
                return if g == 0.0 { 0.0 } else { f64::INFINITY };
            }
            let d = g / qx - 1.0;
            if d == -1.0 {
                return qx;
            }
            qx * ((1.0 + d) * d.ln_1p() - d)
        },
        &bp,
    );
    match value {
        Ok(v) if v.is_finite() => Ok(v.max(0.0)),
        Ok(_) => Err(Error::Quadrature(format!(
            "non-finite entropy integral for {}",
            fam.name()
        ))),
        Err(e) => Err(e),
    }
}

/// `a(t, theta) = H(t) - G(t)` for the alternative: `F(t)^3` minus the
/// probability that `X0 + med(X1, X2, X3) < t`.
pub fn a_integral(fam: &AlternativeFamily, t: f64, theta: f64, q: &Quadrature) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let phi = |p: f64| p * p * (3.0 - 2.0 * p);
    let f = fam.cdf(t, theta);
    let mut bp: Vec<f64> = fam
        .singular_points()
        .into_iter()
        .filter(|&b| b < t)
        .collect();
    bp.push(0.0);
    bp.push(t);
    bp.sort_by(f64::total_cmp);
    bp.dedup();
    let mut g = 0.0;
    for w in bp.windows(2) {
        g += q.finite(
            |x| fam.density(x, theta) * phi(fam.cdf(t - x, theta)),
            w[0],
            w[1],
        )?;
    }
    Ok(f * f * f - g)
}

/// `b_I(theta) = int (H - G) dF`, the limit of `I_n` under the alternative.
pub fn b_integral(fam: &AlternativeFamily, theta: f64, q: &Quadrature) -> Result<f64> {
    fam.check_theta(theta)?;
    let mut bp = fam.singular_points();
    bp.push(1.0);
    let err = RefCell::new(None);
    let v = q.semi_infinite(
        |t| {
            let g = fam.density(t, theta);
            if g == 0.0 {
                return 0.0;
            }
            match a_integral(fam, t, theta, q) {
                Ok(a) => a * g,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        &bp,
    );
    match err.into_inner() {
        Some(e) => Err(e),
        None => v,
    }
}

/// `sup_t |a(t, theta)|`, the limit of `K_n` under the alternative, and the
/// maximizing level.
pub fn sup_a(fam: &AlternativeFamily, theta: f64, q: &Quadrature) -> Result<(f64, f64)> {
    fam.check_theta(theta)?;
    sup_abs_over_levels(|t| a_integral(fam, t, theta, q))
}

/// Two-level Richardson extrapolation to `theta = 0` of a quantity with a
/// power-series expansion, sampled at `theta`, `2 theta`, `4 theta`.
pub fn richardson(f1: f64, f2: f64, f4: f64) -> f64 {
    let r1 = 2.0 * f1 - f2;
    let r2 = 2.0 * f2 - f4;
    (4.0 * r1 - r2) / 3.0
}

/// Efficiency of one test against one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub family: String,
    pub kind: StatKind,
    /// 1 when the slope is linear in `theta`, 2 when it starts at `theta^2`.
    pub order: u8,
    /// Coefficient of `theta^order` in the limit of the statistic.
    pub slope_coefficient: f64,
    /// Coefficient of `theta^(2 order)` in `2K(theta)`.
    pub kl_coefficient: f64,
    pub ld_coefficient: f64,
    pub efficiency: f64,
    /// Level at which the K-test supremum is attained.
    pub argmax_t: Option<f64>,
}

/// Smallest `theta` of the extrapolation ladder `theta, 2 theta, 4 theta`.
pub const SECOND_ORDER_THETA: f64 = 0.01;

pub fn efficiency(fam: &AlternativeFamily, kind: StatKind) -> Result<EfficiencyReport> {
    efficiency_with(fam, kind, &Quadrature::adaptive())
}

pub fn efficiency_with(
    fam: &AlternativeFamily,
    kind: StatKind,
    q: &Quadrature,
) -> Result<EfficiencyReport> {
    require_h(fam)?;
    let ld = ld_coefficient(kind);
    let curvature = kl_curvature_with(fam, q)?;
    let (slope, argmax_t) = match kind {
        StatKind::I => (slope_i_with(fam, q)?, None),
        StatKind::K => {
            let (s, t) = slope_k_with(fam, q)?;
            (s, Some(t))
        }
    };
    let report = |order, slope_coefficient: f64, kl_coefficient: f64, argmax_t| EfficiencyReport {
        family: fam.name(),
        kind,
        order,
        slope_coefficient,
        kl_coefficient,
        ld_coefficient: ld,
        efficiency: 2.0 * ld * slope_coefficient * slope_coefficient / kl_coefficient,
        argmax_t,
    };
    if curvature > DEGENERACY_EPS {
        return Ok(report(1, slope, curvature, argmax_t));
    }
    if slope.abs() > DEGENERACY_EPS {
        return Err(Error::Inapplicable(format!(
            "family {} has a nonzero slope but zero Kullback-Leibler curvature",
            fam.name()
        )));
    }
    let so = second_order::expand(fam, kind, SECOND_ORDER_THETA)?;
    if so.kl_coefficient <= DEGENERACY_EPS {
        return Err(Error::Inapplicable(format!(
            "family {} is degenerate to fourth order",
            fam.name()
        )));
    }
    Ok(report(
        2,
        so.slope_coefficient,
        so.kl_coefficient,
        so.argmax_t,
    ))
}

/// Locally optimal family for `kind`: `h(x) = e^-x (C p(x) + D (x - 1))`
/// with `p = psi` or `p = xi(., t0)`, `t0` the maximizer of `sigma2_k`.
pub fn locally_optimal_density(kind: StatKind, c: f64, d: f64) -> Result<AlternativeFamily> {
    let t0 = maximize_sigma2_k().0;
    alternatives::locally_optimal(kind, c, d, t0)
}

/// The five families of the efficiency tables.
pub fn table_families() -> Vec<AlternativeFamily> {
    vec![
        AlternativeFamily::weibull(),
        AlternativeFamily::makeham(),
        AlternativeFamily::emnw(3.0).expect("valid beta"),
        AlternativeFamily::ged(),
        AlternativeFamily::extended_exponential(),
    ]
}

/// Efficiencies of both tests for each family.
pub fn efficiency_table(families: &[AlternativeFamily]) -> Result<Vec<EfficiencyReport>> {
    let mut rows = Vec::with_capacity(2 * families.len());
    for fam in families {
        for kind in [StatKind::I, StatKind::K] {
            rows.push(efficiency(fam, kind)?);
        }
    }
    Ok(rows)
}

pub fn table_to_csv(rows: &[EfficiencyReport]) -> String {
    let mut out = String::from(
        "family,kind,order,slope_coefficient,kl_coefficient,ld_coefficient,efficiency,argmax_t\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.family,
            r.kind,
            r.order,
            r.slope_coefficient,
            r.kl_coefficient,
            r.ld_coefficient,
            r.efficiency,
            r.argmax_t.map(|t| t.to_string()).unwrap_or_default()
        ));
    }
    out
}

/// One row per family, one column per statistic.
pub fn table_to_markdown(rows: &[EfficiencyReport]) -> String {
    let mut families: Vec<&str> = Vec::new();
    for r in rows {
        if !families.contains(&r.family.as_str()) {
            families.push(&r.family);
        }
    }
    let cell = |fam: &str, kind: StatKind| {
        rows.iter()
            .find(|r| r.family == fam && r.kind == kind)
            .map(|r| format!("{:.3}", r.efficiency))
            .unwrap_or_else(|| "-".into())
    };
    let mut out = String::from("| Alternative | I | K |\n|---|---|---|\n");
    for f in families {
        out.push_str(&format!(
            "| {f} | {} | {} |\n",
            cell(f, StatKind::I),
            cell(f, StatKind::K)
        ));
    }
    out
}

/// `k * step`, rounded so grid points print cleanly.
fn grid_point(k: usize, step: f64) -> f64 {
    (k as f64 * step * 1e9).round() / 1e9
}

/// `(t, sigma2_k(t))` on a grid.
pub fn sigma2_k_curve(step: f64, max: f64) -> Vec<(f64, f64)> {
    let cells = (max / step).round() as usize;
    (0..=cells)
        .map(|k| {
            let t = grid_point(k, step);
            (t, sigma2_k(t))
        })
        .collect()
}

/// `(t, 4 int xi(., t) h)`, the derivative in `theta` of `a(t, theta)` at zero.
pub fn slope_curve(fam: &AlternativeFamily, step: f64, max: f64) -> Result<Vec<(f64, f64)>> {
    let q = Quadrature::adaptive();
    let cells = (max / step).round() as usize;
    (0..=cells)
        .map(|k| {
            let t = grid_point(k, step);
            Ok((t, 4.0 * xi_h_integral(fam, t, &q)?))
        })
        .collect()
}

pub fn curve_to_csv(header: (&str, &str), points: &[(f64, f64)]) -> String {
    let mut out = format!("{},{}\n", header.0, header.1);
    for (x, y) in points {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn weibull_first_order() {
        let w = AlternativeFamily::weibull();
        let s = slope_i(&w).unwrap();
        let exact = (3.0f64 / 2f64.powf(11.0 / 8.0)).ln();
        assert!(close(s, exact, 1e-10), "{s} vs {exact}");
        let c = kl_curvature(&w).unwrap();
        assert!(close(c, std::f64::consts::PI.powi(2) / 6.0, 1e-9), "{c}");
        let (sk, t1) = slope_k(&w).unwrap();
        assert!(
            close(sk, 0.34, 0.005) && close(t1, 1.761, 0.01),
            "{sk} {t1}"
        );
    }

    #[test]
    fn ld_coefficients_consistent() {
        assert!(close(LD_COEFFICIENT_I, 1.0 / (50.0 * SIGMA2_I), 1e-9));
        let (t0, s2) = maximize_sigma2_k();
        assert!(close(t0, 1.892, 0.005));
        assert!(close(ld_coefficient_k(), 1.0 / (32.0 * s2), 1e-12));
    }

    #[test]
    fn sigma2_k_matches_quadrature() {
        let q = Quadrature::adaptive();
        for t in [0.5, 1.0, 2.0, 4.0] {
            let v = q
                .semi_infinite(|s| xi(s, t).powi(2) * (-s).exp(), &[t])
                .unwrap();
            assert!(close(v, sigma2_k(t), 1e-12), "t={t}");
        }
    }

    #[test]
    fn psi_moments() {
        let q = Quadrature::adaptive();
        let m0 = q.semi_infinite(|s| psi(s) * (-s).exp(), &[]).unwrap();
        let m2 = q
            .semi_infinite(|s| psi(s).powi(2) * (-s).exp(), &[])
            .unwrap();
        assert!(m0.abs() < 1e-12);
        assert!(close(m2, SIGMA2_I, 1e-12));
    }

    #[test]
    fn xi_centered() {
        let q = Quadrature::adaptive();
        for t in [0.3, 1.0, 1.892, 5.0] {
            let m = q.semi_infinite(|s| xi(s, t) * (-s).exp(), &[t]).unwrap();
            assert!(m.abs() < 1e-12, "t={t}: {m}");
        }
    }

    #[test]
    fn kl_exact_vanishes_at_null() {
        for fam in table_families() {
            assert!(kl_exact(&fam, 0.0).unwrap().abs() < 1e-14, "{}", fam.name());
        }
    }

    #[test]
    fn kl_exact_matches_curvature() {
        let w = AlternativeFamily::weibull();
        // the correction to 2K / theta^2 is linear in theta: 1.528 at 0.05
        let f = |t: f64| 2.0 * kl_exact(&w, t).unwrap() / (t * t);
        assert!(close(f(0.05), 1.527_771_729_2, 1e-9));
        let lim = richardson(f(0.005), f(0.01), f(0.02));
        let c = kl_curvature(&w).unwrap();
        assert!(((lim - c) / c).abs() < 1e-4, "{lim} vs {c}");
    }

    #[test]
    fn first_order_slope_matches_population_limit() {
        // b(theta) / theta -> 5 int psi h
        let q = Quadrature::adaptive().with_tolerance(0.0, 1e-11);
        let m = AlternativeFamily::makeham();
        let th = 0.005;
        let f = |t: f64| b_integral(&m, t, &q).unwrap() / t;
        let lim = richardson(f(th), f(2.0 * th), f(4.0 * th));
        let s = slope_i(&m).unwrap();
        assert!(close(lim, s, 1e-6), "{lim} vs {s}");
    }

    #[test]
    fn a_derivative_matches_projection() {
        let q = Quadrature::adaptive().with_tolerance(0.0, 1e-12);
        let w = AlternativeFamily::weibull();
        let th = 1e-4;
        for t in [0.7, 1.761, 3.0] {
            let d = (a_integral(&w, t, th, &q).unwrap() - a_integral(&w, t, -th, &q).unwrap())
                / (2.0 * th);
            let p = 4.0 * xi_h_integral(&w, t, &q).unwrap();
            assert!(close(d, p, 1e-6), "t={t}: {d} vs {p}");
        }
    }

    #[test]
    fn table_values() {
        let expect = [
            ("weibull", 0.746, 0.258),
            ("makeham", 0.772, 0.370),
            ("emnw(3)", 0.916, 0.364),
            ("ged", 0.556, 0.298),
        ];
        for (fam, (name, ei, ek)) in table_families().iter().zip(expect) {
            assert_eq!(fam.name(), name);
            let i = efficiency(fam, StatKind::I).unwrap();
            let k = efficiency(fam, StatKind::K).unwrap();
            assert_eq!((i.order, k.order), (1, 1));
            assert!(close(i.efficiency, ei, 0.005), "{name} I {}", i.efficiency);
            assert!(close(k.efficiency, ek, 0.005), "{name} K {}", k.efficiency);
        }
    }

    #[test]
    fn double_oracle_quadrature() {
        let a = Quadrature::adaptive();
        let d = Quadrature::double_exponential();
        for fam in table_families() {
            let pairs = [
                (
                    slope_i_with(&fam, &a).unwrap(),
                    slope_i_with(&fam, &d).unwrap(),
                ),
                (
                    kl_curvature_with(&fam, &a).unwrap(),
                    kl_curvature_with(&fam, &d).unwrap(),
                ),
                (
                    xi_h_integral(&fam, 1.8, &a).unwrap(),
                    xi_h_integral(&fam, 1.8, &d).unwrap(),
                ),
            ];
            for (x, y) in pairs {
                assert!(
                    (x - y).abs() <= 1e-6 * x.abs().max(1e-3),
                    "{}: {x} vs {y}",
                    fam.name()
                );
            }
        }
    }

    #[test]
    fn integral_of_h_vanishes() {
        let q = Quadrature::adaptive();
        let mut fams = table_families();
        fams.push(locally_optimal_density(StatKind::I, 1.0, 2.0).unwrap());
        fams.push(locally_optimal_density(StatKind::K, 1.0, 0.3).unwrap());
        for fam in fams {
            let v = q
                .semi_infinite(|x| fam.h(x).unwrap(), &fam.singular_points())
                .unwrap();
            assert!(v.abs() < 1e-8, "{}: {v}", fam.name());
        }
    }

    #[test]
    fn locally_optimal_is_efficient() {
        for d in [-1.0, 0.0, 2.0] {
            let fi = locally_optimal_density(StatKind::I, 1.0, d).unwrap();
            let e = efficiency(&fi, StatKind::I).unwrap().efficiency;
            assert!(close(e, 1.0, 1e-6), "I, D={d}: {e}");
            let fk = locally_optimal_density(StatKind::K, 1.0, d).unwrap();
            let e = efficiency(&fk, StatKind::K).unwrap().efficiency;
            assert!(close(e, 1.0, 1e-6), "K, D={d}: {e}");
        }
    }

    #[test]
    fn locally_optimal_normalized() {
        let q = Quadrature::adaptive();
        let f = locally_optimal_density(StatKind::I, 1.0, 5.0).unwrap();
        let max = f.theta_range().max;
        for theta in [0.0, 0.5 * max, max] {
            let v = q.semi_infinite(|x| f.density(x, theta), &[]).unwrap();
            assert!(close(v, 1.0, 1e-9), "theta={theta}: {v}");
        }
    }

    #[test]
    fn cauchy_schwarz_bound() {
        for fam in table_families() {
            for kind in [StatKind::I, StatKind::K] {
                let e = efficiency(&fam, kind).unwrap().efficiency;
                assert!((0.0..=1.001).contains(&e), "{} {kind}: {e}", fam.name());
            }
        }
    }

    #[test]
    fn missing_h_is_inapplicable() {
        let g = AlternativeFamily::gamma();
        assert!(matches!(
            efficiency(&g, StatKind::I),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn report_emission() {
        let rows = vec![EfficiencyReport {
            family: "weibull".into(),
            kind: StatKind::I,
            order: 1,
            slope_coefficient: 0.1455,
            kl_coefficient: 1.6449,
            ld_coefficient: LD_COEFFICIENT_I,
            efficiency: 0.7459,
            argmax_t: None,
        }];
        let csv = table_to_csv(&rows);
        assert!(csv.lines().nth(1).unwrap().starts_with("weibull,I,1,"));
        assert!(table_to_markdown(&rows).contains("| weibull | 0.746 | - |"));
    }
}
