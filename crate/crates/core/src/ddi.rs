//! Dipole-dipole interaction between permanently polarized Rydberg atoms.
//!
//! The one-dimensional potential is reported either in SI (rad/s) or in
//! reduced units of `2C / (hbar (sqrt(2) w)^3)` as a function of
//! `zeta = z / (sqrt(2) w)`:
//!
//! ```text
//! Delta(zeta) = 2|zeta| - sqrt(pi) (1 + 2 zeta^2) erfcx(|zeta|)
//! ```

use std::f64::consts::PI;

use crate::constants::{BOHR_RADIUS, E_CHARGE, EPSILON0, HBAR};
use crate::error::{non_negative, positive, Error, Result};
use crate::quadrature::Integrator;
use crate::special::{erfcx, jacobi_denominators};
use serde::{Deserialize, Serialize};

const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub principal_n: i64,
    pub parabolic_q: i64,
    pub magnetic_m: i64,
}

impl QuantumNumbers {
    pub fn new(n: i64, q: i64, m: i64) -> Result<Self> {
        if n < 1 || q < 0 || q > n - 1 || m.abs() >= n {
            return Err(Error::InvalidQuantumNumbers { n, q, m });
        }
        Ok(Self {
            principal_n: n,
            parabolic_q: q,
            magnetic_m: m,
        })
    }
}

/// A DDI-active Rydberg level with a permanent dipole along the static field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RydbergState {
    pub quantum_numbers: Option<QuantumNumbers>,
    /// Permanent dipole moment (C m).
    pub dipole_moment: f64,
}

/// `(3/2) n q e a0`.
pub fn rydberg_dipole(n: i64, q: i64) -> Result<f64> {
    let qn = QuantumNumbers::new(n, q, 0)?;
    Ok(1.5 * (qn.principal_n * qn.parabolic_q) as f64 * E_CHARGE * BOHR_RADIUS)
}

impl RydbergState {
    pub fn from_quantum_numbers(n: i64, q: i64, m: i64) -> Result<Self> {
        let qn = QuantumNumbers::new(n, q, m)?;
        Ok(Self {
            quantum_numbers: Some(qn),
            dipole_moment: rydberg_dipole(n, q)?,
        })
    }

    /// A level specified only by its dipole moment (C m).
    pub fn with_dipole(dipole_moment: f64) -> Result<Self> {
        Ok(Self {
            quantum_numbers: None,
            dipole_moment: non_negative("dipole moment", dipole_moment)?,
        })
    }

    pub fn with_dipole_ea0(value: f64) -> Result<Self> {
        Self::with_dipole(crate::constants::dipole_from_ea0(value)?)
    }
}

/// Interaction coefficient `C = p1 p2 / (4 pi eps0)` (J m^3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdiCoupling {
    pub coefficient: f64,
    pub source_dipoles: (f64, f64),
}

impl DdiCoupling {
    pub fn between(a: &RydbergState, b: &RydbergState) -> Self {
        let (pa, pb) = (a.dipole_moment, b.dipole_moment);
        Self {
            coefficient: pa * pb / (4.0 * PI * EPSILON0),
            source_dipoles: (pa, pb),
        }
    }

    /// Coupling with a given coefficient and no recorded dipoles.
    pub fn from_coefficient(coefficient: f64) -> Result<Self> {
        Ok(Self {
            coefficient: non_negative("C coefficient", coefficient)?,
            source_dipoles: (f64::NAN, f64::NAN),
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coefficient: self.coefficient * factor,
            source_dipoles: self.source_dipoles,
        }
    }
}

/// Bare shift `(C/hbar)(1 - 3 cos^2 theta)/R^3`, theta measured
/// from the z axis (the dipole orientation).
pub fn potential_3d(coupling: &DdiCoupling, separation: [f64; 3]) -> Result<f64> {
    let r2: f64 = separation.iter().map(|x| x * x).sum();
    if r2 == 0.0 {
        return Err(Error::ZeroSeparation);
    }
    let cos2 = separation[2] * separation[2] / r2;
    Ok(coupling.coefficient / HBAR * (1.0 - 3.0 * cos2) / (r2 * r2.sqrt()))
}

/// Reduced 1D potential `2|zeta| - sqrt(pi)(1 + 2 zeta^2) erfcx(|zeta|)`.
///
/// For `|zeta| >= 1` the bracket is rewritten through the continued fraction
/// of erfcx as `-4 zeta / (D0 D1)`, which has no cancellation and stays
/// accurate to `|zeta| ~ 1e150`.
pub fn reduced_potential(zeta: f64) -> f64 {
    let x = zeta.abs();
    if x < 1.0 {
        2.0 * x - SQRT_PI * (1.0 + 2.0 * x * x) * erfcx(x)
    } else if x < 1e150 {
        let (d0, d1) = jacobi_denominators(x);
        -4.0 * x / (d0 * d1)
    } else {
        -1.0 / (x * x * x)
    }
}

/// Odd primitive of [`reduced_potential`]: `-sqrt(pi) zeta erfcx(|zeta|)`,
/// zero at the origin and tending to `-+1` as `zeta -> +-inf`.
pub fn reduced_potential_primitive(zeta: f64) -> f64 {
    -SQRT_PI * zeta * erfcx(zeta.abs())
}

/// Full width at half maximum of `|reduced_potential|`, found by bisection.
pub fn reduced_fwhm() -> f64 {
    let half = -0.5 * SQRT_PI;
    let (mut lo, mut hi) = (0.0_f64, 2.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reduced_potential(mid) < half {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + hi
}

/// Effective 1D potential for one coupling and effective Gaussian width `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential1D {
    pub coupling: DdiCoupling,
    pub effective_width: f64,
}

impl Potential1D {
    pub fn new(coupling: DdiCoupling, effective_width: f64) -> Result<Self> {
        Ok(Self {
            coupling,
            effective_width: positive("effective width w", effective_width)?,
        })
    }

    /// `sqrt(2) w`, the length unit of `zeta`.
    pub fn length_scale(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.effective_width
    }

    /// `2C / (hbar (sqrt(2) w)^3)` in rad/s.
    pub fn reduced_unit(&self) -> f64 {
        let s = self.length_scale();
        2.0 * self.coupling.coefficient / (HBAR * s * s * s)
    }

    pub fn zeta(&self, z: f64) -> f64 {
        z / self.length_scale()
    }

    /// Potential at longitudinal separation `z` (rad/s).
    pub fn eval(&self, z: f64) -> f64 {
        self.reduced_unit() * reduced_potential(self.zeta(z))
    }

    /// `int Delta(z) dz` over the whole line, `-2C/(hbar w^2)` (rad m/s).
    pub fn integral(&self) -> f64 {
        -2.0 * self.coupling.coefficient / (HBAR * self.effective_width * self.effective_width)
    }

    /// Closed-form `int_{z_a}^{z_b} Delta(z) dz` (rad m/s).
    pub fn integral_between(&self, z_a: f64, z_b: f64) -> f64 {
        let scale = self.reduced_unit() * self.length_scale();
        scale
            * (reduced_potential_primitive(self.zeta(z_b))
                - reduced_potential_primitive(self.zeta(z_a)))
    }

    /// FWHM of `|Delta(z)|` in metres.
    pub fn fwhm(&self) -> f64 {
        reduced_fwhm() * self.length_scale()
    }
}

/// Two-column `(zeta, Delta_reduced)` curve on an even grid.
pub fn potential_curve(zeta_min: f64, zeta_max: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 || !(zeta_max > zeta_min) {
        return Err(Error::InvalidParameter {
            name: "potential curve",
            reason: format!("need points >= 2 and zeta_max > zeta_min, got {points} on [{zeta_min}, {zeta_max}]"),
        });
    }
    let step = (zeta_max - zeta_min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let zeta = zeta_min + step * i as f64;
            (zeta, reduced_potential(zeta))
        })
        .collect())
}

/// FWHM of a sampled curve whose minimum is its peak magnitude, located by
/// linear interpolation of the half-minimum crossings.
pub fn curve_fwhm(curve: &[(f64, f64)]) -> Option<f64> {
    let (imin, &(_, vmin)) = curve
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
    let half = 0.5 * vmin;
    let cross = |i: usize, j: usize| {
        let (z0, v0) = curve[i];
        let (z1, v1) = curve[j];
        z0 + (half - v0) * (z1 - z0) / (v1 - v0)
    };
    let right = (imin..curve.len() - 1).find(|&i| curve[i + 1].1 > half)?;
    let left = (1..=imin).rev().find(|&i| curve[i - 1].1 > half)?;
    Some(cross(right, right + 1) - cross(left, left - 1))
}

/// Ground-truth transverse average of the 3D potential.
///
/// The double Gaussian average over both transverse positions reduces, by
/// Gaussian convolution, to one average over the relative transverse vector
/// with weight `exp(-s^2/(2w^2)) / (2 pi w^2)`. After the angular integral and
/// one integration by parts (the bare kernel has zero transverse flux) this is
///
/// ```text
/// Delta(z) = -(C / (hbar w^4)) int_0^inf s^3 exp(-s^2/(2w^2)) (s^2 + z^2)^(-3/2) ds
/// ```
///
/// which is regular at `z = 0`. The integral is evaluated adaptively.
pub fn transverse_average_oracle(coupling: &DdiCoupling, w: f64, z: f64, tol: f64) -> Result<f64> {
    if !(tol > 1e-12 && tol < 1e-2) {
        return Err(Error::InvalidParameter {
            name: "oracle tolerance",
            reason: format!("must lie in (1e-12, 1e-2), got {tol}"),
        });
    }
    let pot = Potential1D::new(*coupling, w)?;
    let zeta = pot.zeta(z).abs();
    let zeta2 = zeta * zeta;
    let integrand = |t: f64| {
        let t2 = t * t;
        let r2 = t2 + zeta2;
        if r2 == 0.0 {
            return 1.0;
        }
        t2 * t * (-t2).exp() / (r2 * r2.sqrt())
    };
    let mut breaks = vec![0.0];
    if zeta > 0.0 && zeta < 1.0 {
        breaks.push(zeta);
    }
    breaks.extend([1.0, 4.0, 30.0]);
    let est = Integrator::new(tol * 0.1).integrate_with_breaks(integrand, &breaks)?;
    Ok(-2.0 * est.value * pot.reduced_unit())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{dipole_from_ea0, EA0};
    use crate::quadrature::Integrator;

    fn sample_coupling() -> DdiCoupling {
        let s = RydbergState::with_dipole_ea0(315.0).unwrap();
        DdiCoupling::between(&s, &s)
    }

    #[test]
    fn dipole_from_quantum_numbers() {
        let s = RydbergState::from_quantum_numbers(15, 14, 0).unwrap();
        assert!((s.dipole_moment / EA0 - 315.0).abs() < 1e-10);
        assert_eq!(rydberg_dipole(15, 0).unwrap(), 0.0);
        assert!((rydberg_dipole(10, 4).unwrap() / EA0 - 60.0).abs() < 1e-12);
        assert!(rydberg_dipole(10, 10).is_err());
        assert!(rydberg_dipole(10, -1).is_err());
        assert!(RydbergState::from_quantum_numbers(5, 1, 5).is_err());
        assert!(RydbergState::from_quantum_numbers(0, 0, 0).is_err());
    }

    #[test]
    fn coupling_symmetric() {
        let a = RydbergState::with_dipole_ea0(50.0).unwrap();
        let b = RydbergState::with_dipole_ea0(450.0).unwrap();
        assert_eq!(
            DdiCoupling::between(&a, &b).coefficient,
            DdiCoupling::between(&b, &a).coefficient
        );
        let p = dipole_from_ea0(50.0).unwrap() * dipole_from_ea0(450.0).unwrap();
        let c = DdiCoupling::between(&a, &b).coefficient;
        assert!((c - p / (4.0 * PI * EPSILON0)).abs() <= 1e-15 * c);
    }

    #[test]
    fn potential_3d_angles() {
        let c = sample_coupling();
        let r = 2e-6;
        let unit = c.coefficient / (HBAR * r * r * r);
        let along = potential_3d(&c, [0.0, 0.0, r]).unwrap();
        assert!((along + 2.0 * unit).abs() < 1e-12 * unit);
        let across = potential_3d(&c, [r, 0.0, 0.0]).unwrap();
        assert!((across - unit).abs() < 1e-12 * unit);
        let magic = (1.0f64 / 3.0).sqrt().acos();
        let v = potential_3d(&c, [r * magic.sin(), 0.0, r * magic.cos()]).unwrap();
        assert!(v.abs() < 1e-12 * unit);
        assert_eq!(potential_3d(&c, [0.0; 3]), Err(Error::ZeroSeparation));
    }

    #[test]
    fn reduced_values() {
        assert!((reduced_potential(0.0) + SQRT_PI).abs() < 1e-15);
        // mpmath, 40 digits
        let table = [
            (0.3, -0.936_411_234_923_942_518_766_4),
            (0.65, -0.486_109_881_739_748_472_617_6),
            (1.0, -0.273_616_468_423_936_318_130_05),
            (2.0, -0.074_093_449_830_571_214_263_47),
            (5.0, -0.007_161_934_616_956_727_268_877_6),
            (10.0, -0.000_971_075_271_841_922_352_817_66),
        ];
        for (z, want) in table {
            let got = reduced_potential(z);
            assert!(((got - want) / want).abs() < 1e-13, "zeta={z}: {got} vs {want}");
        }
    }

    #[test]
    fn asymptotic_tail() {
        // Delta ~ -zeta^-3 (1 - 3 zeta^-2 + 45/4 zeta^-4 - ...)
        for z in [1e3, 1e4, 1e6] {
            let z2 = z * z;
            let series = -(1.0 - 3.0 / z2 + 11.25 / (z2 * z2)) / (z2 * z);
            let got = reduced_potential(z);
            assert!(got.is_finite());
            assert!(((got - series) / series).abs() < 1e-12, "zeta={z}");
        }
    }

    #[test]
    fn fwhm_near_figure_value() {
        let f = reduced_fwhm();
        assert!((f - 0.655_295_693_099_806_1).abs() < 1e-12);
    }

    #[test]
    fn primitive_differentiates_to_potential() {
        for z in [0.2, 0.9, 1.3, 4.0, 25.0] {
            let h = 1e-5;
            let d = (reduced_potential_primitive(z + h) - reduced_potential_primitive(z - h)) / (2.0 * h);
            assert!((d - reduced_potential(z)).abs() < 1e-8 * reduced_potential(z).abs().max(1e-3));
        }
        assert_eq!(reduced_potential_primitive(0.0), 0.0);
    }

    #[test]
    fn integral_scaling_and_quadrature() {
        let c = sample_coupling();
        let w = std::f64::consts::SQRT_2 * 1e-6;
        let p = Potential1D::new(c, w).unwrap();
        let p2 = Potential1D::new(c, 2.0 * w).unwrap();
        assert!((p.integral() / p2.integral() - 4.0).abs() < 1e-14);
        let zero = Potential1D::new(DdiCoupling::from_coefficient(0.0).unwrap(), w).unwrap();
        assert_eq!(zero.integral(), 0.0);

        // Quadrature over zeta in [-50, 50] matches the closed-form truncated value,
        // and the whole line matches -2C/(hbar w^2).
        let q = Integrator::new(1e-12);
        let s = p.length_scale();
        let num = q
            .integrate_with_breaks(|z| p.eval(z), &[-50.0 * s, 0.0, 50.0 * s])
            .unwrap()
            .value;
        let closed = p.integral_between(-50.0 * s, 50.0 * s);
        assert!(((num - closed) / closed).abs() < 1e-10);
        let half = q.integrate_to_infinity(|z: f64| reduced_potential(z), 0.0).unwrap().value;
        let full = 2.0 * half * p.reduced_unit() * s;
        assert!(((full - p.integral()) / p.integral()).abs() < 1e-9);
    }

    #[test]
    fn oracle_matches_closed_form() {
        let c = sample_coupling();
        let w = 1.3e-6;
        let p = Potential1D::new(c, w).unwrap();
        for zeta in [0.0, 0.01, 0.3, 1.0, 3.0, 10.0, 20.0] {
            let z = zeta * p.length_scale();
            let o = transverse_average_oracle(&c, w, z, 1e-10).unwrap();
            let a = p.eval(z);
            assert!(((o - a) / a).abs() < 1e-9, "zeta={zeta}: {o} vs {a}");
        }
        assert!(transverse_average_oracle(&c, w, 0.0, 0.5).is_err());
        assert!(transverse_average_oracle(&c, w, 0.0, 1e-13).is_err());
    }

    #[test]
    fn oracle_by_parts_matches_unintegrated_kernel() {
        // Reduced kernel before integration by parts:
        // int_0^inf t (t^2 - 2 zeta^2) exp(-t^2) / (t^2 + zeta^2)^(5/2) dt
        let q = Integrator::new(1e-12);
        for zeta in [0.5f64, 1.0, 2.0] {
            let z2 = zeta * zeta;
            let direct = q
                .integrate_with_breaks(
                    |t: f64| t * (t * t - 2.0 * z2) * (-t * t).exp() / (t * t + z2).powf(2.5),
                    &[0.0, zeta, 2.0 * zeta, 30.0],
                )
                .unwrap()
                .value;
            assert!((direct - reduced_potential(zeta)).abs() < 1e-10);
        }
    }

    #[test]
    fn curve_fwhm_from_samples() {
        let curve = potential_curve(-6.0, 6.0, 601).unwrap();
        let f = curve_fwhm(&curve).unwrap();
        assert!((f - reduced_fwhm()).abs() < 2e-3);
        assert!(potential_curve(1.0, 0.0, 10).is_err());
    }
}
