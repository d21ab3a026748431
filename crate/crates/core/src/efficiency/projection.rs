//! Closed forms of the null projections of the two kernels.

use crate::optimize;

/// Null variance of the projection `psi`.
pub const SIGMA2_I: f64 = 29.0 / 42000.0;

/// Leading coefficient of the large-deviation function of `I_n`,
/// `f_I(e) ~ 840/29 e^2`, equal to `1 / (2 * 25 * SIGMA2_I)`.
pub const LD_COEFFICIENT_I: f64 = 840.0 / 29.0;

/// Projection of the integral-type kernel on one argument under Exp(1).
pub fn psi(s: f64) -> f64 {
    -1.0 / 20.0 + 0.4 * (-3.0 * s).exp() - 0.9 * (-2.0 * s).exp() + 0.5 * (-s).exp()
}

/// `int_0^x psi(s) e^-s ds`.
pub fn psi_weighted_integral(x: f64) -> f64 {
    let m = |k: f64| -(-k * x).exp_m1();
    -m(1.0) / 20.0 + m(4.0) / 10.0 - 0.3 * m(3.0) + 0.25 * m(2.0)
}

/// Value of `xi(s, t)` for `s >= t`, where it does not depend on `s`.
fn xi_upper(t: f64) -> f64 {
    0.25 * (-3.0 * t).exp()
        * (-1.0 + 6.0 * t.exp() - 2.0 * (3.0 * t).exp() - (2.0 * t).exp() * (3.0 - 6.0 * t))
}

/// Projection of the Kolmogorov-type kernel at level `t` on one argument
/// under Exp(1). Jumps by `3/4 (1 - e^-t)^2` at `s = t`.
pub fn xi(s: f64, t: f64) -> f64 {
    if s < t {
        0.25 * (-(-3.0 * t).exp() - 2.0 * (3.0 * s - 3.0 * t).exp()
            + 6.0 * (-s - t).exp()
            + 3.0 * (-2.0 * t).exp()
            + 3.0 * (2.0 * s - 2.0 * t).exp()
            - (-t).exp() * (9.0 - 6.0 * s))
    } else {
        xi_upper(t)
    }
}

/// `int_0^x xi(s, t) e^-s ds`.
pub fn xi_weighted_integral(x: f64, t: f64) -> f64 {
    let lower = |x: f64| {
        let e = |a: f64| a.exp();
        0.25 * (-6.0 * x * e(-t - x) + 3.0 * e(-t - x) - 3.0 * e(-t - 2.0 * x)
            + 3.0 * e(x - 2.0 * t)
            - 3.0 * e(-2.0 * t - x)
            - e(2.0 * x - 3.0 * t)
            + e(-3.0 * t - x))
    };
    if x < t {
        lower(x)
    } else {
        lower(t) + xi_upper(t) * ((-t).exp() - (-x).exp())
    }
}

/// Null variance `int xi(s,t)^2 e^-s ds` of the projection at level `t`.
pub fn sigma2_k(t: f64) -> f64 {
    let e = |k: f64| (-k * t).exp();
    0.3 * e(1.0) - 33.0 / 16.0 * e(2.0)
        + 9.0 / 8.0 * e(3.0)
        + 2.25 * t * e(3.0)
        + 0.375 * e(4.0)
        + 0.375 * e(5.0)
        - 9.0 / 80.0 * e(6.0)
}

/// Maximizer and maximum of [`sigma2_k`] over `[0, 20]`.
pub fn maximize_sigma2_k() -> (f64, f64) {
    optimize::grid_then_golden(sigma2_k, 0.0, 20.0, 0.05, 1e-10)
}

/// Leading coefficient of the large-deviation function of `K_n`,
/// `1 / (32 sigma_K^2)` with `sigma_K^2 = sup_t sigma2_k(t)`.
pub fn ld_coefficient_k() -> f64 {
    1.0 / (32.0 * maximize_sigma2_k().1)
}
