//! Momentum-space characterization of the dimerized chain.
//!
//! The Bloch Hamiltonian of the two-site unit cell is
//! `h(k) = d_x τ_x + d_y τ_y` with
//!
//! ```text
//! d_x = J1 + J2 cos k,    d_y = J2 sin k,    k ∈ [−π, π]
//! ```
//!
//! The winding number counts how the unit vector `n = d/|d|` wraps the
//! origin over the Brillouin zone,
//!
//! ```text
//! ν = (1/2π) ∫ dk (n × ∂_k n) = 1 for J1 < J2, 0 for J1 > J2,
//! ```
//!
//! and the chiral displacement of a bulk excitation obeys
//!
//! ```text
//! P̄_d(t) = ν/2 − (1/4π) ∫ dk cos(2 d_t t) (n × ∂_k n),
//! d_t = sqrt(J1² + J2² + 2 J1 J2 cos k),
//! ```
//!
//! whose time average converges to ν/2, the dynamical winding probe.
//!
//! `n × ∂_k n` is evaluated from the analytic derivatives of `d(k)`:
//!
//! ```text
//! n × ∂_k n = (d_x ∂_k d_y − d_y ∂_k d_x)/|d|²
//!           = (J2² + J1 J2 cos k)/(J1² + J2² + 2 J1 J2 cos k).
//! ```
//!
//! All couplings are MHz; dynamical phases use the angular frequency
//! `2π d_t` with time in µs.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// The momentum-space coupling vector at one `k`.
#[derive(Debug, Clone, Copy)]
pub struct BlochVector {
    pub d_x_mhz: f64,
    pub d_y_mhz: f64,
    pub k: f64,
    /// Coupling scale J1 + J2, used to detect gap closure at roundoff level.
    scale_mhz: f64,
}

impl BlochVector {
    pub fn norm_mhz(&self) -> f64 {
        self.d_x_mhz.hypot(self.d_y_mhz)
    }

    /// Unit vector `(n_x, n_y)`; fails at gap closure (`|d| = 0`, possible
    /// only for J1 = J2 at k = ±π).
    pub fn unit(&self) -> Result<(f64, f64)> {
        let norm = self.norm_mhz();
        if norm <= 1e-12 * self.scale_mhz {
            return Err(Error::GapClosure(format!(
                "|d| = 0 at k = {}; winding undefined",
                self.k
            )));
        }
        Ok((self.d_x_mhz / norm, self.d_y_mhz / norm))
    }
}

/// Evaluate `d(k) = (J1 + J2 cos k, J2 sin k)`.
pub fn bloch_vector(j1_mhz: f64, j2_mhz: f64, k: f64) -> BlochVector {
    BlochVector {
        d_x_mhz: j1_mhz + j2_mhz * k.cos(),
        d_y_mhz: j2_mhz * k.sin(),
        k,
        scale_mhz: j1_mhz.abs() + j2_mhz.abs(),
    }
}

/// Outcome of the winding-number quadrature.
#[derive(Debug, Clone, Copy)]
pub struct WindingResult {
    /// The integral rounded to the nearest integer.
    pub nu: i64,
    /// Raw value of `(1/2π) ∮ n × ∂_k n dk`.
    pub raw_integral: f64,
    /// `|raw_integral − nu|`.
    pub residual: f64,
}

/// Base Brillouin-zone resolution; the integrand is smooth and periodic,
/// so the periodic trapezoid rule converges spectrally once features are
/// resolved.
const BASE_K_POINTS: usize = 4096;
const MAX_K_POINTS: usize = 1 << 22;
const QUAD_TOL: f64 = 1e-9;

fn check_gap(j1_mhz: f64, j2_mhz: f64) -> Result<()> {
    if !j1_mhz.is_finite() || !j2_mhz.is_finite() || j1_mhz < 0.0 || j2_mhz < 0.0 {
        return Err(Error::Config(format!(
            "couplings must be finite and non-negative, got ({j1_mhz}, {j2_mhz})"
        )));
    }
    if j1_mhz == j2_mhz {
        return Err(Error::GapClosure(format!(
            "J1 = J2 = {j1_mhz} MHz: bulk gap closed, winding undefined"
        )));
    }
    Ok(())
}

/// `n × ∂_k n` in closed form.
fn winding_integrand(j1: f64, j2: f64, k: f64) -> f64 {
    let c = k.cos();
    (j2 * j2 + j1 * j2 * c) / (j1 * j1 + j2 * j2 + 2.0 * j1 * j2 * c)
}

/// Periodic trapezoid rule over `[−π, π]` with grid doubling until the
/// result stabilizes.
fn adaptive_bz_average<F: Fn(f64) -> f64>(f: F) -> f64 {
    let mut n = BASE_K_POINTS;
    let mut prev = bz_average(&f, n);
    loop {
        n *= 2;
        let next = bz_average(&f, n);
        if (next - prev).abs() <= QUAD_TOL * next.abs().max(1.0) || n >= MAX_K_POINTS {
            return next;
        }
        prev = next;
    }
}

/// Mean of `f` over one Brillouin zone on `n` uniform points (equals the
/// periodic trapezoid rule divided by 2π).
fn bz_average<F: Fn(f64) -> f64>(f: &F, n: usize) -> f64 {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let sum: f64 = (0..n)
        .map(|i| f(-std::f64::consts::PI + i as f64 * h))
        .sum();
    sum / n as f64
}

/// Topological winding number by Brillouin-zone quadrature.
///
/// Fails at J1 = J2 where the gap closes; arbitrarily close dimerizations
/// are handled by grid refinement near k = π.
pub fn winding_number(j1_mhz: f64, j2_mhz: f64) -> Result<WindingResult> {
    check_gap(j1_mhz, j2_mhz)?;
    let raw = adaptive_bz_average(|k| winding_integrand(j1_mhz, j2_mhz, k));
    let nu = raw.round() as i64;
    Ok(WindingResult {
        nu,
        raw_integral: raw,
        residual: (raw - nu as f64).abs(),
    })
}

/// Analytic chiral displacement of a bulk excitation at time `t` (µs) on
/// the infinite chain.
///
/// At `t = 0` the oscillatory integral equals ν/2 exactly and the value
/// is 0; the long-time average tends to ν/2.
pub fn analytic_cd(j1_mhz: f64, j2_mhz: f64, t_us: f64) -> Result<f64> {
    check_gap(j1_mhz, j2_mhz)?;
    let nu = if j1_mhz < j2_mhz { 1.0 } else { 0.0 };
    let osc = adaptive_bz_average(|k| {
        let d_t = dispersion(j1_mhz, j2_mhz, k);
        (2.0 * 2.0 * std::f64::consts::PI * d_t * t_us).cos()
            * winding_integrand(j1_mhz, j2_mhz, k)
    });
    // (1/4π)∫ dk = (1/2) × BZ average
    Ok(nu / 2.0 - osc / 2.0)
}

/// Magnon dispersion `d_t(k)` in MHz.
fn dispersion(j1: f64, j2: f64, k: f64) -> f64 {
    (j1 * j1 + j2 * j2 + 2.0 * j1 * j2 * k.cos()).sqrt()
}

/// Winding estimate `2/T ∫₀ᵀ P̄_d(t) dt` from the analytic chiral
/// displacement, by trapezoid quadrature in time.
///
/// Converges to ν as `T → ∞` with O(1/T) oscillatory corrections.
pub fn winding_from_cd_average(j1_mhz: f64, j2_mhz: f64, t_total_us: f64) -> Result<f64> {
    check_gap(j1_mhz, j2_mhz)?;
    if !(t_total_us > 0.0) {
        return Err(Error::Input(format!(
            "averaging window must be positive, got {t_total_us} us"
        )));
    }
    let nu = if j1_mhz < j2_mhz { 1.0 } else { 0.0 };

    // One shared k-grid, fine enough for the fastest phase 4π d_max T.
    let d_max = j1_mhz + j2_mhz;
    let cycles = 2.0 * d_max * t_total_us;
    let n_k = ((32.0 * cycles) as usize)
        .next_power_of_two()
        .clamp(BASE_K_POINTS, MAX_K_POINTS);
    let h = 2.0 * std::f64::consts::PI / n_k as f64;
    let (weights, freqs): (Vec<f64>, Vec<f64>) = (0..n_k)
        .map(|i| {
            let k = -std::f64::consts::PI + i as f64 * h;
            (
                winding_integrand(j1_mhz, j2_mhz, k),
                dispersion(j1_mhz, j2_mhz, k),
            )
        })
        .unzip();

    // Time grid resolving the fastest oscillation.
    let dt = (1.0 / (32.0 * d_max)).min(2e-3);
    let n_t = (t_total_us / dt).ceil() as usize;
    let dt = t_total_us / n_t as f64;
    let cd_at = |t: f64| -> f64 {
        let osc: f64 = weights
            .iter()
            .zip(&freqs)
            .map(|(&w, &d)| (4.0 * std::f64::consts::PI * d * t).cos() * w)
            .sum::<f64>()
            / n_k as f64;
        nu / 2.0 - osc / 2.0
    };
    let interior: f64 = (1..n_t).into_par_iter().map(|i| cd_at(i as f64 * dt)).sum();
    let integral = dt * (cd_at(0.0) / 2.0 + interior + cd_at(t_total_us) / 2.0);
    Ok(2.0 * integral / t_total_us)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn bloch_vector_values() {
        let b = bloch_vector(1.0, 5.0, 0.0);
        assert!((b.d_x_mhz - 6.0).abs() < 1e-14 && b.d_y_mhz.abs() < 1e-14);
        let b = bloch_vector(1.0, 5.0, PI);
        assert!((b.d_x_mhz + 4.0).abs() < 1e-12 && b.d_y_mhz.abs() < 1e-12);
        let b = bloch_vector(1.0, 5.0, PI / 2.0);
        assert!((b.d_x_mhz - 1.0).abs() < 1e-12 && (b.d_y_mhz - 5.0).abs() < 1e-12);
    }

    #[test]
    fn bloch_unit_vector_and_closure() {
        let (nx, ny) = bloch_vector(1.0, 5.0, 0.7).unit().unwrap();
        assert!((nx * nx + ny * ny - 1.0).abs() < 1e-12);
        assert!(bloch_vector(3.0, 3.0, PI).unit().is_err());
    }

    #[test]
    fn winding_values() {
        let w = winding_number(5.0, 1.0).unwrap();
        assert_eq!(w.nu, 0);
        assert!(w.residual < 1e-6);
        let w = winding_number(1.0, 5.0).unwrap();
        assert_eq!(w.nu, 1);
        assert!(w.residual < 1e-6);
    }

    #[test]
    fn winding_near_gap_closure() {
        let w = winding_number(1.0, 1.001).unwrap();
        assert_eq!(w.nu, 1);
        assert!(w.residual < 1e-6, "residual {}", w.residual);
        assert!(winding_number(2.0, 2.0).is_err());
    }

    #[test]
    fn winding_quadrature_converged_at_default_resolution() {
        // doubling the grid moves the result by < 1e-8
        let a = bz_average(&|k| winding_integrand(1.0, 5.0, k), BASE_K_POINTS);
        let b = bz_average(&|k| winding_integrand(1.0, 5.0, k), 2 * BASE_K_POINTS);
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn winding_scale_invariance_and_duality() {
        for (j1, j2) in [(1.0, 5.0), (2.0, 3.0), (7.0, 2.0)] {
            let w = winding_number(j1, j2).unwrap();
            let ws = winding_number(10.0 * j1, 10.0 * j2).unwrap();
            assert_eq!(w.nu, ws.nu);
            let dual = winding_number(j2, j1).unwrap();
            assert_eq!(w.nu + dual.nu, 1);
        }
    }

    #[test]
    fn analytic_cd_zero_at_t0() {
        for (j1, j2) in [(1.0, 5.0), (5.0, 1.0), (2.0, 3.0)] {
            let v = analytic_cd(j1, j2, 0.0).unwrap();
            assert!(v.abs() < 1e-9, "cd(0) = {v} at ({j1}, {j2})");
        }
    }

    #[test]
    fn analytic_cd_bounded() {
        for i in 0..40 {
            let t = i as f64 * 0.05;
            let v = analytic_cd(1.0, 5.0, t).unwrap();
            assert!(v.abs() <= 1.0 + 1e-9, "|cd({t})| = {v}");
            let v = analytic_cd(5.0, 1.0, t).unwrap();
            assert!(v.abs() <= 0.5 + 1e-9, "trivial |cd({t})| = {v}");
        }
    }

    #[test]
    fn cd_average_converges_to_winding() {
        let v = winding_from_cd_average(1.0, 5.0, 20.0).unwrap();
        assert!((v - 1.0).abs() < 0.02, "estimate {v}");
        let v = winding_from_cd_average(5.0, 1.0, 20.0).unwrap();
        assert!(v.abs() < 0.02, "trivial estimate {v}");
    }

    #[test]
    fn cd_average_monotone_improvement() {
        for t in [5.0, 7.5, 10.0] {
            let a = (winding_from_cd_average(1.0, 5.0, t).unwrap() - 1.0).abs();
            let b = (winding_from_cd_average(1.0, 5.0, 2.0 * t).unwrap() - 1.0).abs();
            assert!(b <= a + 0.01, "T = {t}: {b} vs {a}");
        }
    }

    #[test]
    fn cd_average_rejects_bad_window() {
        assert!(winding_from_cd_average(1.0, 5.0, 0.0).is_err());
        assert!(winding_from_cd_average(1.0, 5.0, -2.0).is_err());
    }
}
