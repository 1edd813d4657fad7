//! Homodyne statistics for the photon-number measurement.
//!
//! The probe acquires `phi * n` from `n` signal photons; a reference field
//! matched to the unshifted probe gives `s(n) = 4 |alpha|^2 sin^2(phi n / 2)`
//! with shot-noise uncertainty `sqrt(2 s)`.

use std::f64::consts::PI;

use crate::error::{positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneOutcome {
    pub photon_n: u32,
    pub signal_s: f64,
    pub uncertainty_ds: f64,
    /// Whether `n` is resolved from `n - 1`; `None` for `n = 0`.
    pub distinguishable_from_previous: Option<bool>,
}

fn signal(alpha_sq: f64, phi: f64, n: u32) -> f64 {
    let s = (0.5 * phi * n as f64).sin();
    4.0 * alpha_sq * s * s
}

pub fn homodyne_signal(alpha_sq: f64, phi12: f64, n: u32) -> Result<HomodyneOutcome> {
    positive("alpha_sq", alpha_sq)?;
    let s = signal(alpha_sq, phi12, n);
    let distinguishable = (n > 0).then(|| gap_holds(alpha_sq, phi12, n));
    Ok(HomodyneOutcome {
        photon_n: n,
        signal_s: s,
        uncertainty_ds: (2.0 * s).sqrt(),
        distinguishable_from_previous: distinguishable,
    })
}

/// `s(n) - s(n-1) > (ds(n) + ds(n-1)) / 2`
fn gap_holds(alpha_sq: f64, phi: f64, n: u32) -> bool {
    let (hi, lo) = (signal(alpha_sq, phi, n), signal(alpha_sq, phi, n - 1));
    hi - lo > 0.5 * ((2.0 * hi).sqrt() + (2.0 * lo).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distinguishability {
    pub alpha_sq: f64,
    pub phi12: f64,
    pub n_max: u32,
    pub outcomes: Vec<HomodyneOutcome>,
    pub phase_wrap_ok: bool,
    pub feasible: bool,
}

impl Distinguishability {
    /// `n,s,ds,gap,half_uncertainty_sum,distinguishable` rows.
    pub fn to_table(&self) -> String {
        let fmt = crate::scenario::fmt_sig;
        let mut out = String::from("n,signal_s,uncertainty_ds,gap,required_gap,distinguishable,source\n");
        for (i, o) in self.outcomes.iter().enumerate() {
            let (gap, req, verdict) = match (i.checked_sub(1).map(|p| &self.outcomes[p]), o.distinguishable_from_previous) {
                (Some(prev), Some(d)) => (
                    fmt(o.signal_s - prev.signal_s),
                    fmt(0.5 * (o.uncertainty_ds + prev.uncertainty_ds)),
                    d.to_string(),
                ),
                _ => ("-".into(), "-".into(), "-".into()),
            };
            out.push_str(&format!(
                "{},{},{},{gap},{req},{verdict},qnd::distinguishability\n",
                o.photon_n,
                fmt(o.signal_s),
                fmt(o.uncertainty_ds)
            ));
        }
        out.push_str(&format!(
            "# phase_wrap phi12*n_max={} <= pi: {}; feasible: {}\n",
            fmt(self.phi12 * self.n_max as f64),
            self.phase_wrap_ok,
            self.feasible
        ));
        out
    }
}

/// Per-n verdicts for `0..=n_max`; feasible iff `phi n_max <= pi` and every gap holds.
pub fn distinguishability(alpha_sq: f64, phi12: f64, n_max: u32) -> Result<Distinguishability> {
    if n_max == 0 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            reason: "must be at least 1".into(),
        });
    }
    let outcomes = (0..=n_max)
        .map(|n| homodyne_signal(alpha_sq, phi12, n))
        .collect::<Result<Vec<_>>>()?;
    let phase_wrap_ok = phi12 * n_max as f64 <= PI;
    let gaps_ok = outcomes
        .iter()
        .all(|o| o.distinguishable_from_previous.unwrap_or(true));
    Ok(Distinguishability {
        alpha_sq,
        phi12,
        n_max,
        outcomes,
        phase_wrap_ok,
        feasible: phase_wrap_ok && gaps_ok,
    })
}

/// Smallest `|alpha|^2` that resolves every `n <= n_max`, to relative 1e-6.
///
/// The returned value is feasible (the upper end of the final bracket).
pub fn required_probe_strength(phi12: f64, n_max: u32) -> Result<f64> {
    positive("phi12", phi12)?;
    let product = phi12 * n_max as f64;
    if product > PI {
        return Err(Error::PhaseWrapInfeasible { product });
    }
    let feasible = |a: f64| distinguishability(a, phi12, n_max).map(|d| d.feasible);
    let mut hi = 1.0;
    while !feasible(hi)? {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::PhaseWrapInfeasible { product });
        }
    }
    let mut lo = hi * 0.5;
    while feasible(lo)? && lo > f64::MIN_POSITIVE {
        hi = lo;
        lo *= 0.5;
    }
    while (hi - lo) > 1e-7 * hi {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // gap inequality solved for |alpha|: A > 1 / (8 (a_n - a_{n-1})^2), a_n = sin(phi n / 2)
    fn closed_form_strength(phi: f64, n_max: u32) -> f64 {
        (1..=n_max)
            .map(|n| {
                let d = (0.5 * phi * n as f64).sin() - (0.5 * phi * (n - 1) as f64).sin();
                1.0 / (8.0 * d * d)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn signal_values() {
        let o = homodyne_signal(4.0, 0.7, 0).unwrap();
        assert_eq!((o.signal_s, o.uncertainty_ds), (0.0, 0.0));
        let o = homodyne_signal(4.0, 0.7, 1).unwrap();
        assert!((o.signal_s - 16.0 * 0.35f64.sin().powi(2)).abs() < 1e-14);
        assert!((o.signal_s - 1.88).abs() < 0.01 && (o.uncertainty_ds - 1.94).abs() < 0.01);
        let o = homodyne_signal(4.0, 0.7, 2).unwrap();
        assert!((o.signal_s - 6.64).abs() < 0.01 && (o.uncertainty_ds - 3.64).abs() < 0.01);
        assert!(homodyne_signal(0.0, 0.7, 1).is_err());
    }

    #[test]
    fn operating_point_is_feasible() {
        let d = distinguishability(4.0, 0.7, 2).unwrap();
        assert!(d.feasible);
        let s = |n: usize| d.outcomes[n].signal_s;
        let ds = |n: usize| d.outcomes[n].uncertainty_ds;
        assert!((s(1) - s(0) - 1.88).abs() < 0.01 && (0.5 * (ds(1) + ds(0)) - 0.97).abs() < 0.01);
        assert!((s(2) - s(1) - 4.76).abs() < 0.01 && (0.5 * (ds(2) + ds(1)) - 2.79).abs() < 0.01);
        assert!(d.to_table().contains("feasible: true"));
    }

    #[test]
    fn phase_wrap_and_asymptotics() {
        assert!(!distinguishability(4.0, PI, 2).unwrap().feasible);
        assert!(distinguishability(100.0, 0.7, 1).unwrap().feasible);
        assert!(distinguishability(4.0, 0.7, 0).is_err());
    }

    #[test]
    fn required_strength_matches_closed_form() {
        for &(phi, n) in &[(0.7, 2), (0.7, 4), (0.3, 5), (PI, 1), (1.0, 3)] {
            let a = required_probe_strength(phi, n).unwrap();
            let exact = closed_form_strength(phi, n);
            assert!((a - exact).abs() <= 1e-6 * exact, "{phi} {n}: {a} vs {exact}");
            assert!(distinguishability(a, phi, n).unwrap().feasible);
            assert!(!distinguishability(0.99 * a, phi, n).unwrap().feasible);
        }
        assert!(required_probe_strength(0.7, 2).unwrap() <= 4.0);
        let n = (PI / 0.7).floor() as u32 + 1;
        assert!(matches!(required_probe_strength(0.7, n), Err(Error::PhaseWrapInfeasible { .. })));
        assert!(matches!(
            required_probe_strength(PI / 2.0 * (1.0 + 1e-12), 2),
            Err(Error::PhaseWrapInfeasible { .. })
        ));
    }

    proptest! {
        #[test]
        fn periodic_in_n(k in 3u32..20, n in 0u32..40, a in 0.1f64..100.0) {
            let phi = 2.0 * PI / k as f64;
            let s0 = homodyne_signal(a, phi, n).unwrap().signal_s;
            let s1 = homodyne_signal(a, phi, n + k).unwrap().signal_s;
            prop_assert!((s0 - s1).abs() <= 1e-9 * (1.0 + s0));
        }

        #[test]
        fn increasing_below_wrap(phi in 0.01f64..PI, a in 0.1f64..100.0) {
            let top = (PI / phi).floor() as u32;
            for n in 1..=top {
                prop_assert!(homodyne_signal(a, phi, n).unwrap().signal_s > homodyne_signal(a, phi, n - 1).unwrap().signal_s);
            }
        }

        #[test]
        fn feasibility_monotone_in_strength(phi in 0.05f64..1.5, n_max in 1u32..3, a in 0.1f64..50.0, f in 1.0f64..10.0) {
            if distinguishability(a, phi, n_max).unwrap().feasible {
                prop_assert!(distinguishability(a * f, phi, n_max).unwrap().feasible);
            }
        }
    }
}
