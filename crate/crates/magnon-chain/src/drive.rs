//! Parametric-modulation coupling engineering.
//!
//! Sinusoidally modulating a qubit frequency,
//!
//! ```text
//! ω(t) = ω_o + ε sin(2π μ t + φ),
//! ```
//!
//! dresses the static capacitive coupling `g` with Bessel sidebands. When
//! the modulation frequency bridges the operating-frequency difference of
//! a bond, the first sideband yields the effective coupling
//!
//! ```text
//! |J| = g · 𝒥₁(α_mod) · 𝒥₀(α_spec),    α = ε/μ,
//! ```
//!
//! with phase `φ + π/2` on intracell bonds and `−φ + π/2` on intercell
//! bonds. This module provides the Bessel evaluator, the forward map,
//! the inverse amplitude design (bisection on the monotone branch of
//! 𝒥₁), and a full time-dependent two-qubit integration that checks the
//! rotating-wave approximation behind the formula.

use serde::{Deserialize, Serialize};

use crate::dynamics::NoiseModel;
use crate::error::{Error, Result};

/// Argument of the maximum of 𝒥₁ (end of its monotone branch).
pub const J1_PEAK_ARG: f64 = 1.841_183_781_340_659;
/// 𝒥₁ at its maximum; caps the reachable coupling at `0.5819 g`.
pub const J1_PEAK: f64 = 0.581_865_224_257_582;
/// First zero of 𝒥₁; beyond it the sideband coupling inverts sign.
pub const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512;
/// First zero of 𝒥₀; beyond it the spectator factor inverts sign.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_773;

/// Largest |x| the evaluator accepts.
pub const BESSEL_MAX_ARG: f64 = 20.0;
/// Power series below this, normalized downward recurrence above.
const BESSEL_SERIES_CUTOFF: f64 = 8.0;

/// Bessel function of the first kind, orders 0 and 1, |x| ≤ 20,
/// accurate to 1e−12 absolute.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    if order > 1 {
        return Err(Error::Config(format!(
            "bessel_j supports orders 0 and 1, got {order}"
        )));
    }
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG {
        return Err(Error::BesselDomain(x.abs()));
    }
    let ax = x.abs();
    let value = if ax < BESSEL_SERIES_CUTOFF {
        bessel_series(order, ax)
    } else {
        bessel_recurrence(order, ax)
    };
    // J0 even, J1 odd
    Ok(if order == 1 && x < 0.0 { -value } else { value })
}

/// Ascending power series Σ (−1)^k / (k! (k+m)!) (x/2)^{2k+m}; the
/// cancellation floor stays below 1e−13 for |x| < 8.
fn bessel_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = if order == 0 { 1.0 } else { half };
    let mut sum = term;
    let q = half * half;
    for k in 1..=60_usize {
        term *= -q / (k as f64 * (k + order as usize) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-3) {
            break;
        }
    }
    sum
}

/// Miller's normalized downward recurrence, exact to machine precision on
/// the 8 ≤ x ≤ 20 window (start order 60 is far above the turning point).
fn bessel_recurrence(order: u32, x: f64) -> f64 {
    const START: usize = 60;
    let mut f_above = 0.0_f64; // f_{k+1}
    let mut f_here = 1e-30_f64; // f_k, seeded at k = START
    let mut j0 = 0.0;
    let mut j1 = 0.0;
    let mut norm = 0.0;
    for k in (1..=START).rev() {
        let f_below = (2.0 * k as f64 / x) * f_here - f_above;
        f_above = f_here;
        f_here = f_below; // now f_{k−1}
        if k - 1 == 1 {
            j1 = f_here;
        }
        if k - 1 == 0 {
            j0 = f_here;
        }
        if (k - 1) > 0 && (k - 1) % 2 == 0 {
            norm += 2.0 * f_here;
        }
    }
    norm += j0;
    if order == 0 {
        j0 / norm
    } else {
        j1 / norm
    }
}

/// One sinusoidal drive tone on a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tone {
    /// Modulation amplitude ε, MHz.
    pub eps_mhz: f64,
    /// Modulation frequency μ, MHz.
    pub mu_mhz: f64,
    /// Modulation phase φ, radians.
    pub phi_rad: f64,
}

impl Tone {
    /// Dimensionless modulation index α = ε/μ.
    pub fn alpha(&self) -> f64 {
        if self.eps_mhz == 0.0 {
            0.0
        } else {
            self.eps_mhz / self.mu_mhz
        }
    }
}

/// Frequency-modulation program of one qubit: mean operating frequency
/// plus any number of sinusoidal tones (none for a static qubit, two for
/// a middle qubit that bridges both of its bonds).
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec {
    omega_op_ghz: f64,
    tones: Vec<Tone>,
}

impl DriveSpec {
    pub fn with_tones(omega_op_ghz: f64, tones: Vec<Tone>) -> Result<Self> {
        for (i, t) in tones.iter().enumerate() {
            if t.eps_mhz < 0.0 {
                return Err(Error::Config(format!(
                    "tone {i}: modulation amplitude must be non-negative, got {}",
                    t.eps_mhz
                )));
            }
            if t.eps_mhz > 0.0 && !(t.mu_mhz > 0.0) {
                return Err(Error::Config(format!(
                    "tone {i}: modulation frequency must be positive when ε > 0, got {}",
                    t.mu_mhz
                )));
            }
        }
        Ok(DriveSpec {
            omega_op_ghz,
            tones,
        })
    }

    /// Unmodulated qubit parked at its operating frequency.
    pub fn static_qubit(omega_op_ghz: f64) -> Self {
        DriveSpec {
            omega_op_ghz,
            tones: Vec::new(),
        }
    }

    /// Single-tone modulation.
    pub fn modulated(omega_op_ghz: f64, eps_mhz: f64, mu_mhz: f64, phi_rad: f64) -> Result<Self> {
        Self::with_tones(
            omega_op_ghz,
            vec![Tone {
                eps_mhz,
                mu_mhz,
                phi_rad,
            }],
        )
    }

    pub fn omega_op_ghz(&self) -> f64 {
        self.omega_op_ghz
    }

    pub fn omega_op_mhz(&self) -> f64 {
        self.omega_op_ghz * 1000.0
    }

    pub fn tones(&self) -> &[Tone] {
        &self.tones
    }

    /// Instantaneous frequency ω(t) in MHz at time t (µs).
    pub fn frequency_mhz(&self, t_us: f64) -> f64 {
        let mut f = self.omega_op_mhz();
        for tone in &self.tones {
            f += tone.eps_mhz
                * (2.0 * std::f64::consts::PI * tone.mu_mhz * t_us + tone.phi_rad).sin();
        }
        f
    }

    /// Product of 𝒥₀ over all tones, the static spectral weight this
    /// qubit keeps while modulated.
    pub fn spectator_weight(&self) -> Result<f64> {
        let mut w = 1.0;
        for tone in &self.tones {
            w *= bessel_j(0, tone.alpha())?;
        }
        Ok(w)
    }
}

/// Whether a bond sits inside a unit cell (a_x–b_x) or between cells
/// (b_x–a_{x+1}); fixes the sign convention of the engineered phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BondKind {
    Intracell,
    Intercell,
}

/// Default tolerance on the resonance condition μ = |Δω_o|, MHz.
pub const DEFAULT_RESONANCE_TOL_MHZ: f64 = 0.5;

/// An engineered coupling produced by the first-sideband Bessel map.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveCoupling {
    pub magnitude_mhz: f64,
    pub phase_rad: f64,
    pub bond_kind: BondKind,
    /// Modulation frequency of the tone that met the resonance condition.
    pub resonant_mu_mhz: f64,
    /// Residual detuning of that tone, MHz.
    pub detuning_off_mhz: f64,
    /// Set when a modulation index sits past the first Bessel zero, where
    /// the sideband weight has inverted sign.
    pub past_first_zero: bool,
}

/// First-sideband effective coupling of one bond.
///
/// The modulated qubit must carry a tone whose μ matches the
/// operating-frequency difference of the pair within
/// [`DEFAULT_RESONANCE_TOL_MHZ`]; each tone is treated as an independent
/// resonance.
pub fn effective_coupling(
    g_mhz: f64,
    modulated: &DriveSpec,
    spectator: &DriveSpec,
    bond_kind: BondKind,
) -> Result<EffectiveCoupling> {
    effective_coupling_with_tol(
        g_mhz,
        modulated,
        spectator,
        bond_kind,
        DEFAULT_RESONANCE_TOL_MHZ,
    )
}

pub fn effective_coupling_with_tol(
    g_mhz: f64,
    modulated: &DriveSpec,
    spectator: &DriveSpec,
    bond_kind: BondKind,
    tol_mhz: f64,
) -> Result<EffectiveCoupling> {
    if !(g_mhz > 0.0) {
        return Err(Error::Config(format!(
            "static coupling must be positive, got {g_mhz}"
        )));
    }
    let detuning = (modulated.omega_op_mhz() - spectator.omega_op_mhz()).abs();
    let tone = resonant_tone(modulated, detuning, tol_mhz)?;

    let alpha = tone.alpha();
    let j1 = bessel_j(1, alpha)?;
    let spec_weight = spectator.spectator_weight()?;
    let signed = g_mhz * j1 * spec_weight;

    let base_phase = match bond_kind {
        BondKind::Intracell => tone.phi_rad + std::f64::consts::FRAC_PI_2,
        BondKind::Intercell => -tone.phi_rad + std::f64::consts::FRAC_PI_2,
    };
    let phase_rad = if signed < 0.0 {
        base_phase + std::f64::consts::PI
    } else {
        base_phase
    };

    let past_first_zero = alpha > J1_FIRST_ZERO
        || spectator.tones().iter().any(|t| t.alpha() > J0_FIRST_ZERO);

    Ok(EffectiveCoupling {
        magnitude_mhz: signed.abs(),
        phase_rad,
        bond_kind,
        resonant_mu_mhz: tone.mu_mhz,
        detuning_off_mhz: (tone.mu_mhz - detuning).abs(),
        past_first_zero,
    })
}

fn resonant_tone(drive: &DriveSpec, detuning_mhz: f64, tol_mhz: f64) -> Result<Tone> {
    let best = drive
        .tones()
        .iter()
        .min_by(|a, b| {
            (a.mu_mhz - detuning_mhz)
                .abs()
                .total_cmp(&(b.mu_mhz - detuning_mhz).abs())
        })
        .copied();
    match best {
        Some(t) if (t.mu_mhz - detuning_mhz).abs() <= tol_mhz => Ok(t),
        Some(t) => Err(Error::DetunedDrive {
            detuning_mhz,
            tol_mhz,
            closest_off_mhz: (t.mu_mhz - detuning_mhz).abs(),
        }),
        None => Err(Error::DetunedDrive {
            detuning_mhz,
            tol_mhz,
            closest_off_mhz: detuning_mhz,
        }),
    }
}

/// Invert the Bessel map: the modulation amplitude ε whose first sideband
/// gives `j_target_mhz` at modulation frequency `mu_mhz` next to a
/// spectator with index `spectator_alpha`.
///
/// Bisection on α over the monotone branch [0, 1.8412] of 𝒥₁, resolved to
/// 1e−9 relative.
pub fn solve_amplitude_for_coupling(
    g_mhz: f64,
    mu_mhz: f64,
    spectator_alpha: f64,
    j_target_mhz: f64,
) -> Result<f64> {
    if !(g_mhz > 0.0) || !(mu_mhz > 0.0) {
        return Err(Error::Config(format!(
            "need positive g and mu, got g = {g_mhz}, mu = {mu_mhz}"
        )));
    }
    if j_target_mhz < 0.0 {
        return Err(Error::Config(format!(
            "coupling target must be non-negative, got {j_target_mhz}"
        )));
    }
    if j_target_mhz == 0.0 {
        return Ok(0.0);
    }
    let factor = g_mhz * bessel_j(0, spectator_alpha)?;
    let max = factor * J1_PEAK;
    if factor <= 0.0 || j_target_mhz > max {
        return Err(Error::UnreachableCoupling {
            target_mhz: j_target_mhz,
            max_mhz: max.max(0.0),
        });
    }
    let mut lo = 0.0;
    let mut hi = J1_PEAK_ARG;
    while hi - lo > 1e-9 * J1_PEAK_ARG {
        let mid = 0.5 * (lo + hi);
        if factor * bessel_j(1, mid)? < j_target_mhz {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi) * mu_mhz)
}

/// Outcome of a rotating-wave-approximation check.
#[derive(Debug, Clone, Copy)]
pub struct RwaReport {
    /// |J| read off the full time-dependent two-qubit integration, MHz.
    pub extracted_mhz: f64,
    /// |J| from the first-sideband Bessel formula, MHz.
    pub predicted_mhz: f64,
    pub relative_error: f64,
}

/// Validate the Bessel formula against the full two-qubit dynamics.
///
/// Integrates `H(t)/2π = [[ω_a(t), g], [g, ω_b(t)]]` (single-excitation
/// basis, MHz) with fixed-step RK4, reads the effective |J| from the
/// first full population-transfer cycle (the envelope of the initially
/// empty qubit returns to its minimum at `t* = 1/(2|J|)`), and compares
/// with the prediction. Micromotion is removed by a double boxcar over
/// one modulation period before locating the extremum.
pub fn validate_rwa(
    g_mhz: f64,
    qubit_a: &DriveSpec,
    qubit_b: &DriveSpec,
    t_max_us: f64,
    dt_us: f64,
) -> Result<RwaReport> {
    if !(g_mhz > 0.0) {
        return Err(Error::Config(format!(
            "static coupling must be positive, got {g_mhz}"
        )));
    }
    if !(t_max_us > 0.0) || !(dt_us > 0.0) || dt_us >= t_max_us {
        return Err(Error::Config(format!(
            "need 0 < dt < t_max, got dt = {dt_us}, t_max = {t_max_us}"
        )));
    }

    let predicted_mhz = predict_coupling(g_mhz, qubit_a, qubit_b)?;

    // Full integration in the frame of the mean frequency; populations only
    // see the difference Δ(t) = ω_b − ω_a.
    let n_steps = (t_max_us / dt_us).round() as usize;
    let mut p2 = Vec::with_capacity(n_steps + 1);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut psi = [
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(0.0, 0.0),
    ];
    p2.push(0.0);
    let deriv = |t: f64, s: &[num_complex::Complex64; 2]| {
        let delta = qubit_b.frequency_mhz(t) - qubit_a.frequency_mhz(t);
        let minus_i = num_complex::Complex64::new(0.0, -two_pi);
        [
            minus_i * (-0.5 * delta * s[0] + g_mhz * s[1]),
            minus_i * (g_mhz * s[0] + 0.5 * delta * s[1]),
        ]
    };
    let mut t = 0.0;
    for _ in 0..n_steps {
        let k1 = deriv(t, &psi);
        let s2 = [
            psi[0] + k1[0] * (dt_us / 2.0),
            psi[1] + k1[1] * (dt_us / 2.0),
        ];
        let k2 = deriv(t + dt_us / 2.0, &s2);
        let s3 = [
            psi[0] + k2[0] * (dt_us / 2.0),
            psi[1] + k2[1] * (dt_us / 2.0),
        ];
        let k3 = deriv(t + dt_us / 2.0, &s3);
        let s4 = [psi[0] + k3[0] * dt_us, psi[1] + k3[1] * dt_us];
        let k4 = deriv(t + dt_us, &s4);
        psi[0] += (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (dt_us / 6.0);
        psi[1] += (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (dt_us / 6.0);
        t += dt_us;
        p2.push(psi[1].norm_sqr());
    }

    let extracted_mhz = extract_transfer_rate(&p2, dt_us, slowest_period_us(qubit_a, qubit_b))
        .ok_or(Error::InconclusiveWindow {
            window_us: t_max_us,
        })?;

    Ok(RwaReport {
        extracted_mhz,
        predicted_mhz,
        relative_error: (extracted_mhz - predicted_mhz).abs() / predicted_mhz,
    })
}

/// Bessel prediction for a drive pair: the resonant tone may sit on either
/// qubit; a fully static resonant pair falls back to the bare coupling.
fn predict_coupling(g_mhz: f64, qubit_a: &DriveSpec, qubit_b: &DriveSpec) -> Result<f64> {
    let detuning = (qubit_a.omega_op_mhz() - qubit_b.omega_op_mhz()).abs();
    if qubit_a.tones().is_empty() && qubit_b.tones().is_empty() {
        if detuning > DEFAULT_RESONANCE_TOL_MHZ {
            return Err(Error::DetunedDrive {
                detuning_mhz: detuning,
                tol_mhz: DEFAULT_RESONANCE_TOL_MHZ,
                closest_off_mhz: detuning,
            });
        }
        return Ok(g_mhz);
    }
    // try a as the modulated side, then b
    let from_a = resonant_tone(qubit_a, detuning, DEFAULT_RESONANCE_TOL_MHZ)
        .and_then(|t| Ok((bessel_j(1, t.alpha())?, qubit_b.spectator_weight()?)));
    let (j1, w) = match from_a {
        Ok(pair) => pair,
        Err(_) => {
            let t = resonant_tone(qubit_b, detuning, DEFAULT_RESONANCE_TOL_MHZ)?;
            (bessel_j(1, t.alpha())?, qubit_a.spectator_weight()?)
        }
    };
    Ok((g_mhz * j1 * w).abs())
}

fn slowest_period_us(a: &DriveSpec, b: &DriveSpec) -> Option<f64> {
    a.tones()
        .iter()
        .chain(b.tones())
        .filter(|t| t.eps_mhz > 0.0)
        .map(|t| 1.0 / t.mu_mhz)
        .max_by(f64::total_cmp)
}

/// Locate the first full transfer cycle in the population of the initially
/// empty qubit and return `1/(2 t*)`.
fn extract_transfer_rate(p2: &[f64], dt_us: f64, smooth_period_us: Option<f64>) -> Option<f64> {
    let window = smooth_period_us
        .map(|p| ((p / dt_us).round() as usize).max(1))
        .unwrap_or(1);
    let smoothed = if window > 1 {
        boxcar(&boxcar(p2, window), window)
    } else {
        p2.to_vec()
    };

    let peak = smoothed.iter().copied().fold(0.0_f64, f64::max);
    if peak <= 0.0 {
        return None;
    }
    let i_max = (1..smoothed.len().saturating_sub(1)).find(|&i| {
        smoothed[i] >= smoothed[i - 1]
            && smoothed[i] >= smoothed[i + 1]
            && smoothed[i] >= 0.8 * peak
    })?;
    // envelope minimum expected at twice the maximum time
    let lo = (3 * i_max) / 2;
    let hi = ((5 * i_max) / 2 + 1).min(smoothed.len() - 1);
    if lo + 2 >= smoothed.len() || lo >= hi {
        return None;
    }
    let i_min = (lo..hi).min_by(|&a, &b| smoothed[a].total_cmp(&smoothed[b]))?;

    // least-squares parabola around the minimum
    let half = window.max(3);
    let a = i_min.saturating_sub(half).max(1);
    let b = (i_min + half + 1).min(smoothed.len() - 1);
    let shift = lsq_parabola_vertex(&smoothed[a..b], i_min - a)?;
    let t_star = (a as f64 + shift) * dt_us;
    if t_star <= 0.0 {
        return None;
    }
    Some(1.0 / (2.0 * t_star))
}

fn boxcar(x: &[f64], window: usize) -> Vec<f64> {
    let n = x.len();
    let mut cumsum = Vec::with_capacity(n + 1);
    cumsum.push(0.0);
    for &v in x {
        cumsum.push(cumsum.last().unwrap() + v);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(window / 2);
            let hi = (i + window / 2 + 1).min(n);
            (cumsum[hi] - cumsum[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Vertex abscissa (in sample units, relative to the slice start) of the
/// least-squares parabola through the samples.
fn lsq_parabola_vertex(y: &[f64], center: usize) -> Option<f64> {
    if y.len() < 3 {
        return Some(center as f64);
    }
    // fit y = c0 + c1 u + c2 u², u = index − center
    let n = y.len() as f64;
    let (mut s1, mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0, 0.0);
    let (mut t0, mut t1, mut t2) = (0.0, 0.0, 0.0);
    for (i, &v) in y.iter().enumerate() {
        let u = i as f64 - center as f64;
        s1 += u;
        s2 += u * u;
        s3 += u * u * u;
        s4 += u * u * u * u;
        t0 += v;
        t1 += u * v;
        t2 += u * u * v;
    }
    let m = [[n, s1, s2], [s1, s2, s3], [s2, s3, s4]];
    let rhs = [t0, t1, t2];
    let det = |a: &[[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(&m);
    if d == 0.0 {
        return Some(center as f64);
    }
    let mut m1 = m;
    for r in 0..3 {
        m1[r][1] = rhs[r];
    }
    let c1 = det(&m1) / d;
    let mut m2 = m;
    for r in 0..3 {
        m2[r][2] = rhs[r];
    }
    let c2 = det(&m2) / d;
    if c2 == 0.0 {
        return Some(center as f64);
    }
    Some(center as f64 - c1 / (2.0 * c2))
}

// ─── hardware preset ────────────────────────────────────────────────────

/// One qubit's rows across the device tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitRecord {
    pub label: String,
    pub readout_frequency_ghz: f64,
    pub sweet_spot_frequency_ghz: f64,
    pub t1_us: f64,
    pub t2_star_us: f64,
    pub anharmonicity_mhz: f64,
    pub dispersive_shift_mhz: f64,
    pub readout_kappa_mhz: f64,
    pub operating_frequency_ghz: f64,
    pub modulation_center_ghz: f64,
}

/// Modulation amplitudes and frequencies of one qubit in one experiment
/// (two entries for a doubly-driven middle qubit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulationEntry {
    pub qubit: String,
    pub eps_mhz: Vec<f64>,
    pub mu_mhz: Vec<f64>,
}

/// Operating/center frequency overrides used by the trivial-winding
/// configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyOverride {
    pub qubit: String,
    pub operating_frequency_ghz: f64,
    pub modulation_center_ghz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrivialWindingTable {
    pub frequency_overrides: Vec<FrequencyOverride>,
    pub drives: Vec<ModulationEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulationTable {
    pub defect: Vec<ModulationEntry>,
    pub trivial_edge: Vec<ModulationEntry>,
    pub nontrivial_edge: Vec<ModulationEntry>,
    pub nontrivial_winding: Vec<ModulationEntry>,
    pub trivial_winding: TrivialWindingTable,
}

/// The five-qubit device preset: per-qubit parameters, static couplings,
/// and the published modulation programs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwarePreset {
    pub qubits: Vec<QubitRecord>,
    pub coupling_g_mhz: Vec<f64>,
    pub modulations: ModulationTable,
}

const DEVICE_TOML: &str = include_str!("../data/device.toml");

impl HardwarePreset {
    /// The preset bundled with the crate.
    pub fn builtin() -> &'static HardwarePreset {
        static CACHE: std::sync::OnceLock<HardwarePreset> = std::sync::OnceLock::new();
        CACHE.get_or_init(|| {
            HardwarePreset::from_toml_str(DEVICE_TOML).expect("bundled device.toml must parse")
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let preset: HardwarePreset =
            toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        preset.validate()?;
        Ok(preset)
    }

    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_toml_str(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.qubits.is_empty() {
            return Err(Error::Config("preset has no qubits".into()));
        }
        if self.coupling_g_mhz.len() != self.qubits.len() - 1 {
            return Err(Error::Config(format!(
                "{} coupling entries for {} qubits",
                self.coupling_g_mhz.len(),
                self.qubits.len()
            )));
        }
        Ok(())
    }

    pub fn qubit(&self, label: &str) -> Option<&QubitRecord> {
        self.qubits.iter().find(|q| q.label == label)
    }

    /// Sweet-spot noise model over the first `n_qubits` qubits.
    pub fn noise_model(&self, n_qubits: usize) -> Result<NoiseModel> {
        if n_qubits > self.qubits.len() {
            return Err(Error::NoiseModel(format!(
                "preset covers {} qubits, {n_qubits} requested",
                self.qubits.len()
            )));
        }
        NoiseModel::new(
            self.qubits[..n_qubits].iter().map(|q| q.t1_us).collect(),
            self.qubits[..n_qubits]
                .iter()
                .map(|q| q.t2_star_us)
                .collect(),
        )
    }
}
