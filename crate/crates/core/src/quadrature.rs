//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs_tol, rel_tol * |integral|)`. Error estimates follow
//! the QUADPACK `qk15` heuristic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self::new(1e-8)
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    splittable: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // Unsplittable segments sink to the bottom of the heap.
        self.splittable
            .cmp(&other.splittable)
            .then(self.error.total_cmp(&other.error))
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_sum);
    }
    let width_floor = 100.0 * f64::EPSILON * center.abs().max(f64::MIN_POSITIVE);
    Segment {
        a,
        b,
        value,
        error,
        splittable: half.abs() > width_floor,
    }
}

impl Integrator {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: 0.0,
            max_subdivisions: 2000,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        self.integrate_with_breaks(f, &[a, b])
    }

    /// Integrates over `points[0]..points[last]`, starting from a partition at
    /// the listed points. Use this to put kinks and peaks on segment boundaries.
    pub fn integrate_with_breaks<F: Fn(f64) -> f64>(&self, f: F, points: &[f64]) -> Result<Estimate> {
        assert!(points.len() >= 2, "need at least two integration limits");
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for pair in points.windows(2) {
            if pair[0] == pair[1] {
                continue;
            }
            heap.push(kronrod15(&f, pair[0], pair[1]));
            evaluations += 15;
        }
        if heap.is_empty() {
            return Ok(Estimate {
                value: 0.0,
                error: 0.0,
                evaluations: 0,
                subdivisions: 0,
            });
        }
        let mut subdivisions = 0;
        loop {
            let (value, error) = heap
                .iter()
                .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            let tolerance = self.abs_tol.max(self.rel_tol * value.abs());
            if !value.is_finite() || !error.is_finite() {
                return Err(Error::QuadratureNonConvergence {
                    error,
                    tolerance,
                    subdivisions,
                });
            }
            if error <= tolerance {
                return Ok(Estimate {
                    value,
                    error,
                    evaluations,
                    subdivisions,
                });
            }
            let worst = heap.pop().expect("heap is non-empty");
            if !worst.splittable || subdivisions >= self.max_subdivisions {
                return Err(Error::QuadratureNonConvergence {
                    error,
                    tolerance,
                    subdivisions,
                });
            }
            let mid = 0.5 * (worst.a + worst.b);
            heap.push(kronrod15(&f, worst.a, mid));
            heap.push(kronrod15(&f, mid, worst.b));
            evaluations += 30;
            subdivisions += 1;
        }
    }

    /// Integral over `[a, inf)` through the map `x = a + t/(1-t)`.
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(&self, f: F, a: f64) -> Result<Estimate> {
        let mapped = |t: f64| {
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        self.integrate(mapped, 0.0, 1.0)
    }
}

/// Composite trapezoid rule with `n` panels. Second order for smooth integrands.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n > 0);
    let h = (b - a) / n as f64;
    let interior: f64 = (1..n).map(|i| f(a + h * i as f64)).sum();
    h * (0.5 * (f(a) + f(b)) + interior)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials() {
        // A single K15 panel integrates degree 22 exactly.
        let seg = kronrod15(&|x: f64| x.powi(22) + 3.0 * x.powi(7), -1.0, 1.0);
        assert!((seg.value - 2.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_smooth_and_peaked() {
        let q = Integrator::new(1e-12);
        let e = q.integrate(|x: f64| x.sin(), 0.0, std::f64::consts::PI).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12);
        // Narrow Lorentzian far from the interval ends.
        let eps = 1e-4;
        let e = q
            .integrate(|x: f64| eps / (x * x + eps * eps), -1.0, 1.0)
            .unwrap();
        let want = 2.0 * (1.0 / eps).atan();
        assert!(((e.value - want) / want).abs() < 1e-11);
    }

    #[test]
    fn breakpoints_handle_kinks() {
        let q = Integrator::new(1e-12);
        let e = q
            .integrate_with_breaks(|x: f64| x.abs(), &[-1.0, 0.0, 2.0])
            .unwrap();
        assert!((e.value - 2.5).abs() < 1e-14);
        assert_eq!(e.subdivisions, 0);
    }

    #[test]
    fn semi_infinite() {
        let q = Integrator::new(1e-12);
        let e = q.integrate_to_infinity(|x: f64| (-x * x).exp(), 0.0).unwrap();
        let want = 0.5 * std::f64::consts::PI.sqrt();
        assert!(((e.value - want) / want).abs() < 1e-11);
    }

    #[test]
    fn reports_non_convergence() {
        let q = Integrator::new(1e-14).with_max_subdivisions(3);
        let r = q.integrate(|x: f64| x.abs().sqrt().recip(), -1.0, 1.0);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn empty_and_reversed_intervals() {
        let q = Integrator::default();
        assert_eq!(q.integrate(|x: f64| x, 1.0, 1.0).unwrap().value, 0.0);
        let e = q.integrate(|x: f64| x, 1.0, 0.0).unwrap();
        assert!((e.value + 0.5).abs() < 1e-15);
    }

    #[test]
    fn trapezoid_is_second_order() {
        let f = |x: f64| x.exp();
        let want = 1f64.exp() - 1.0;
        let e1 = (trapezoid(f, 0.0, 1.0, 50) - want).abs();
        let e2 = (trapezoid(f, 0.0, 1.0, 100) - want).abs();
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.05);
    }
}
