//! Numerical integration on finite intervals and on `[0, inf)`.
//!
//! Two independent schemes are provided so that every integral used by the
//! efficiency computations can be cross-checked:
//!
//! * [`Scheme::Adaptive`]: globally adaptive Gauss-Kronrod (7/15 points)
//!   bisection. An infinite tail `[b, inf)` is mapped onto `[0, 1)` by
//!   `x = b + u / (1 - u)`.
//! * [`Scheme::DoubleExponential`]: a fixed-step double-exponential rule,
//!   tanh-sinh on finite pieces and exp-sinh (`x = b + exp(pi/2 sinh t)`) on
//!   the tail. Both cluster nodes at the endpoints, which handles the
//!   logarithmic endpoint singularities of some perturbation functions.
//!
//! Discontinuities must be passed as breakpoints.

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Adaptive,
    DoubleExponential,
}

/// Integration settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub scheme: Scheme,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Subinterval budget for the adaptive scheme.
    pub max_intervals: usize,
    /// Step of the double-exponential rule, in the `t` variable.
    pub de_step: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::adaptive()
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    tail_from: Option<f64>,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn checked(x: f64, y: f64) -> Result<f64> {
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Quadrature(format!(
            "integrand is not finite at x = {x}"
        )))
    }
}

/// One 15-point Kronrod evaluation on `[a, b]` of `g`, returning the
/// estimate and the |Kronrod - Gauss| error.
fn kronrod<G: Fn(f64) -> Result<f64>>(g: &G, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = g(c)?;
    let mut k = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = g(c - dx)? + g(c + dx)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Ok((k * h, ((k - gauss) * h).abs()))
}

impl Quadrature {
    pub fn adaptive() -> Self {
        Self {
            scheme: Scheme::Adaptive,
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_intervals: 4000,
            de_step: 1.0 / 64.0,
        }
    }

    pub fn double_exponential() -> Self {
        Self {
            scheme: Scheme::DoubleExponential,
            ..Self::adaptive()
        }
    }

    pub fn with_tolerance(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    /// `int_a^b f(x) dx` for finite `a <= b`.
    pub fn finite<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        self.pieces(&f, &split_points(a, b, &[]), None)
    }

    /// `int_0^inf f(x) dx` with `f` split at the given interior breakpoints.
    pub fn semi_infinite<F: Fn(f64) -> f64>(&self, f: F, breakpoints: &[f64]) -> Result<f64> {
        let mut points = vec![0.0];
        let mut bp: Vec<f64> = breakpoints.iter().copied().filter(|&b| b > 0.0).collect();
        bp.sort_unstable_by(f64::total_cmp);
        bp.dedup();
        points.extend(bp);
        let tail = *points.last().unwrap();
        self.pieces(&f, &points, Some(tail))
    }

    fn pieces<F: Fn(f64) -> f64>(&self, f: &F, points: &[f64], tail: Option<f64>) -> Result<f64> {
        match self.scheme {
            Scheme::Adaptive => self.adaptive_pieces(f, points, tail),
            Scheme::DoubleExponential => {
                let mut total = 0.0;
                for w in points.windows(2) {
                    total += self.tanh_sinh(f, w[0], w[1])?;
                }
                if let Some(b) = tail {
                    total += self.exp_sinh(f, b)?;
                }
                Ok(total)
            }
        }
    }

    fn adaptive_pieces<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        points: &[f64],
        tail: Option<f64>,
    ) -> Result<f64> {
        let eval = |piece_tail: Option<f64>, a: f64, b: f64| -> Result<(f64, f64)> {
            match piece_tail {
                None => kronrod(&|x| checked(x, f(x)), a, b),
                Some(b0) => kronrod(
                    &|u: f64| {
                        let v = 1.0 - u;
                        let x = b0 + u / v;
                        let y = f(x);
                        if y == 0.0 {
                            Ok(0.0)
                        } else {
                            checked(x, y / (v * v))
                        }
                    },
                    a,
                    b,
                ),
            }
        };
        let mut heap = BinaryHeap::new();
        let push =
            |tail_from: Option<f64>, a: f64, b: f64, heap: &mut BinaryHeap<Piece>| -> Result<()> {
                let (value, error) = eval(tail_from, a, b)?;
                heap.push(Piece {
                    a,
                    b,
                    value,
                    error,
                    tail_from,
                });
                Ok(())
            };
        for w in points.windows(2) {
            if w[1] > w[0] {
                push(None, w[0], w[1], &mut heap)?;
            }
        }
        if let Some(b0) = tail {
            push(Some(b0), 0.0, 1.0, &mut heap)?;
        }
        let mut value: f64 = heap.iter().map(|p| p.value).sum();
        let mut error: f64 = heap.iter().map(|p| p.error).sum();
        loop {
            if error <= self.abs_tol.max(self.rel_tol * value.abs()) {
                return Ok(heap.iter().map(|p| p.value).sum());
            }
            if heap.len() >= self.max_intervals {
                return Err(Error::Quadrature(format!(
                    "no convergence after {} subintervals (estimate {value:e}, error {error:e})",
                    heap.len()
                )));
            }
            let worst = heap.pop().expect("nonempty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // interval cannot be split further; accept what remains
                error -= worst.error;
                heap.push(Piece {
                    error: 0.0,
                    ..worst
                });
                continue;
            }
            let (lv, le) = eval(worst.tail_from, worst.a, mid)?;
            let (rv, re) = eval(worst.tail_from, mid, worst.b)?;
            value += lv + rv - worst.value;
            error += le + re - worst.error;
            heap.push(Piece {
                a: worst.a,
                b: mid,
                value: lv,
                error: le,
                tail_from: worst.tail_from,
            });
            heap.push(Piece {
                a: mid,
                b: worst.b,
                value: rv,
                error: re,
                tail_from: worst.tail_from,
            });
        }
    }

    fn tanh_sinh<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let half = 0.5 * (b - a);
        let h = self.de_step;
        let steps = (4.0 / h).ceil() as i64;
        let mut sum = 0.0;
        for k in -steps..=steps {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let cosh_u = u.cosh();
            // distance to the nearer endpoint, computed without cancellation
            let gap = half * 2.0 / ((2.0 * u.abs()).exp() + 1.0);
            let x = if u >= 0.0 { b - gap } else { a + gap };
            if x <= a || x >= b {
                continue;
            }
            let w = half * FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
            if w == 0.0 {
                continue;
            }
            sum += w * checked(x, f(x))?;
        }
        Ok(sum * h)
    }

    fn exp_sinh<F: Fn(f64) -> f64>(&self, f: &F, a: f64) -> Result<f64> {
        let h = self.de_step;
        let steps = (4.5 / h).ceil() as i64;
        let mut sum = 0.0;
        for k in -steps..=steps {
            let t = k as f64 * h;
            let e = (FRAC_PI_2 * t.sinh()).exp();
            let x = a + e;
            if x <= a || !x.is_finite() {
                continue;
            }
            let y = f(x);
            if y == 0.0 {
                continue;
            }
            sum += FRAC_PI_2 * t.cosh() * e * checked(x, y)?;
        }
        Ok(sum * h)
    }
}

fn split_points(a: f64, b: f64, interior: &[f64]) -> Vec<f64> {
    let mut p = vec![a];
    p.extend(interior.iter().copied().filter(|&x| x > a && x < b));
    p.push(b);
    p
}

/// `int_0^inf f` with the default adaptive scheme.
pub fn integrate<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64]) -> Result<f64> {
    Quadrature::adaptive().semi_infinite(f, breakpoints)
}
