//! Time evolution in the single-excitation sector, with and without
//! decoherence, and chiral-displacement trajectory extraction.
//!
//! Two evolution paths:
//!
//! - [`evolve_unitary`]: exact propagation of a pure state through the
//!   eigendecomposition of the (time-independent) Hamiltonian, phases
//!   `e^{−i 2π E t}` with E in MHz and t in µs.
//! - [`evolve_lindblad`]: fixed-step 4th-order integration of the master
//!   equation on the vacuum ⊕ single-excitation block,
//!
//!   ```text
//!   dρ/dt = −i 2π [H, ρ] + Σ_j (1/T1_j) D[|G⟩⟨j|] ρ + Σ_j 2 γ_φj D[|j⟩⟨j|] ρ
//!   ```
//!
//!   with `D[A]ρ = AρA† − ½{A†A, ρ}` and `γ_φ = 1/T2* − 1/(2 T1)`.
//!   Relaxation only removes excitations and dephasing is diagonal, so
//!   this `(n+1)²` block is invariant and no exponentially large objects
//!   are ever formed.
//!
//! The chiral displacement of a trajectory is the cell-weighted sublattice
//! imbalance `P_d(t) = Σ_x x (P_{a_x} − P_{b_x})`; twice its time average
//! estimates the winding number.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::{ChainSpec, Hamiltonian};

/// Normalized pure state of the single-excitation sector (one amplitude
/// per site).
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Excitation on one 1-based site, all other qubits in the ground state.
    pub fn site_excitation(n_qubits: usize, site: usize) -> Result<Self> {
        if site == 0 || site > n_qubits {
            return Err(Error::Bounds(format!(
                "site {site} outside chain of {n_qubits} qubits"
            )));
        }
        let mut amplitudes = DVector::zeros(n_qubits);
        amplitudes[site - 1] = C64::new(1.0, 0.0);
        Ok(PureState { amplitudes })
    }

    /// Wrap an amplitude vector; rejects vectors whose norm is off unity
    /// by more than 1e−8.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::Input(format!(
                "state norm {norm} differs from 1 by more than 1e-8"
            )));
        }
        Ok(PureState {
            amplitudes: DVector::from_vec(amplitudes),
        })
    }

    /// Build and normalize (for superpositions written with unnormalized
    /// coefficients).
    pub fn from_amplitudes_normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Input("zero state vector".into()));
        }
        Ok(PureState {
            amplitudes: DVector::from_iterator(
                amplitudes.len(),
                amplitudes.iter().map(|a| a / norm),
            ),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// |⟨self|other⟩|².
    pub fn overlap_sq(&self, other: &PureState) -> Result<f64> {
        if self.n_qubits() != other.n_qubits() {
            return Err(Error::Input("state dimensions differ".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes).norm_sqr())
    }
}

/// Per-qubit relaxation and Ramsey dephasing times in µs.
///
/// The derived pure-dephasing rate is `γ_φ = 1/T2* − 1/(2 T1)`, so
/// `T2* ≤ 2 T1` is required. Infinite times are allowed and give rate 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    t1_us: Vec<f64>,
    t2_star_us: Vec<f64>,
}

/// Sweet-spot coherence times of the five-qubit device preset
/// (a1, b1, a2, b2, a3).
pub const SWEET_SPOT_T1_US: [f64; 5] = [20.0, 17.0, 14.8, 17.9, 20.0];
pub const SWEET_SPOT_T2_STAR_US: [f64; 5] = [18.5, 16.0, 17.0, 15.0, 19.9];

impl NoiseModel {
    pub fn new(t1_us: Vec<f64>, t2_star_us: Vec<f64>) -> Result<Self> {
        if t1_us.len() != t2_star_us.len() {
            return Err(Error::NoiseModel(format!(
                "{} T1 values but {} T2* values",
                t1_us.len(),
                t2_star_us.len()
            )));
        }
        for (q, (&t1, &t2)) in t1_us.iter().zip(&t2_star_us).enumerate() {
            if !(t1 > 0.0) || !(t2 > 0.0) {
                return Err(Error::NoiseModel(format!(
                    "qubit {}: T1 and T2* must be positive, got T1 = {t1}, T2* = {t2}",
                    q + 1
                )));
            }
            if t2 > 2.0 * t1 {
                return Err(Error::NoiseModel(format!(
                    "qubit {}: T2* = {t2} exceeds 2 T1 = {}, pure-dephasing rate would be negative",
                    q + 1,
                    2.0 * t1
                )));
            }
        }
        Ok(NoiseModel { t1_us, t2_star_us })
    }

    /// No decoherence (all times infinite).
    pub fn none(n_qubits: usize) -> Self {
        NoiseModel {
            t1_us: vec![f64::INFINITY; n_qubits],
            t2_star_us: vec![f64::INFINITY; n_qubits],
        }
    }

    pub fn uniform(n_qubits: usize, t1_us: f64, t2_star_us: f64) -> Result<Self> {
        Self::new(vec![t1_us; n_qubits], vec![t2_star_us; n_qubits])
    }

    /// Sweet-spot preset for the first `n_qubits ≤ 5` qubits of the
    /// device tables.
    pub fn sweet_spot(n_qubits: usize) -> Result<Self> {
        if n_qubits > 5 {
            return Err(Error::NoiseModel(format!(
                "sweet-spot preset covers 5 qubits, {n_qubits} requested"
            )));
        }
        Self::new(
            SWEET_SPOT_T1_US[..n_qubits].to_vec(),
            SWEET_SPOT_T2_STAR_US[..n_qubits].to_vec(),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.t1_us.len()
    }

    pub fn t1_us(&self) -> &[f64] {
        &self.t1_us
    }

    pub fn t2_star_us(&self) -> &[f64] {
        &self.t2_star_us
    }

    /// 1/T1 per qubit (µs⁻¹).
    pub fn relaxation_rates(&self) -> Vec<f64> {
        self.t1_us.iter().map(|&t| if t.is_finite() { 1.0 / t } else { 0.0 }).collect()
    }

    /// γ_φ = 1/T2* − 1/(2 T1) per qubit (µs⁻¹), clamped at 0 against
    /// roundoff when T2* = 2 T1.
    pub fn dephasing_rates(&self) -> Vec<f64> {
        self.t1_us
            .iter()
            .zip(&self.t2_star_us)
            .map(|(&t1, &t2)| {
                if !t2.is_finite() {
                    return 0.0;
                }
                let g1 = if t1.is_finite() { 1.0 / (2.0 * t1) } else { 0.0 };
                (1.0 / t2 - g1).max(0.0)
            })
            .collect()
    }
}

/// Density matrix over {vacuum, site 1, …, site n}: an (n+1)×(n+1)
/// Hermitian positive-semidefinite matrix with unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// ρ = |ψ⟩⟨ψ| for a pure single-excitation state (vacuum amplitude 0).
    pub fn from_pure(state: &PureState) -> Self {
        let n = state.n_qubits();
        let mut full = DVector::zeros(n + 1);
        for (j, &a) in state.amplitudes().iter().enumerate() {
            full[j + 1] = a;
        }
        let m = &full * full.adjoint();
        DensityMatrix { m }
    }

    /// Excitation on one site.
    pub fn site_excitation(n_qubits: usize, site: usize) -> Result<Self> {
        Ok(Self::from_pure(&PureState::site_excitation(n_qubits, site)?))
    }

    /// Wrap a raw matrix after checking hermiticity, unit trace, and
    /// positivity (eigenvalues ≥ −1e−9).
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() < 2 {
            return Err(Error::Input(format!(
                "density matrix must be square with dimension >= 2, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let rho = DensityMatrix { m };
        rho.validate_physical()?;
        Ok(rho)
    }

    pub fn validate_physical(&self) -> Result<()> {
        let herm_defect = (&self.m - self.m.adjoint()).camax();
        if herm_defect > 1e-9 {
            return Err(Error::Input(format!(
                "density matrix not Hermitian: max |ρ − ρ†| = {herm_defect:.2e}"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-8 {
            return Err(Error::Input(format!("density matrix trace {tr} is not 1")));
        }
        let min = self.min_eigenvalue();
        if min < -1e-9 {
            return Err(Error::Input(format!(
                "density matrix not positive: min eigenvalue {min:.2e}"
            )));
        }
        Ok(())
    }

    /// Number of chain sites (dimension − 1).
    pub fn n_qubits(&self) -> usize {
        self.m.nrows() - 1
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.diagonal().iter().map(|d| d.re).sum()
    }

    pub fn vacuum_population(&self) -> f64 {
        self.m[(0, 0)].re
    }

    /// Excited-state populations per site.
    pub fn site_populations(&self) -> Vec<f64> {
        (1..self.m.nrows()).map(|j| self.m[(j, j)].re).collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.m
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::MAX, |a, &b| a.min(b))
    }
}

/// Per-site excited-state populations, vacuum population, and chiral
/// displacement on a time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times_us: Vec<f64>,
    /// Time-major rows of per-site populations.
    populations: Vec<Vec<f64>>,
    vacuum: Vec<f64>,
    cd: Vec<f64>,
}

impl Trajectory {
    pub fn n_qubits(&self) -> usize {
        self.populations.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.times_us.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times_us.is_empty()
    }

    pub fn times_us(&self) -> &[f64] {
        &self.times_us
    }

    /// Populations at one time index, one entry per site.
    pub fn populations_at(&self, idx: usize) -> &[f64] {
        &self.populations[idx]
    }

    /// Time series of one 1-based site.
    pub fn site_series(&self, site: usize) -> Result<Vec<f64>> {
        if site == 0 || site > self.n_qubits() {
            return Err(Error::Bounds(format!(
                "site {site} outside chain of {} qubits",
                self.n_qubits()
            )));
        }
        Ok(self.populations.iter().map(|row| row[site - 1]).collect())
    }

    pub fn vacuum(&self) -> &[f64] {
        &self.vacuum
    }

    pub fn cd(&self) -> &[f64] {
        &self.cd
    }
}

fn validate_times(times_us: &[f64]) -> Result<()> {
    if times_us.is_empty() {
        return Err(Error::Input("empty time grid".into()));
    }
    if times_us[0] != 0.0 {
        return Err(Error::Input(format!(
            "time grid must start at 0, got {}",
            times_us[0]
        )));
    }
    if times_us.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Input("time grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Uniform grid `0, dt, 2dt, …` covering `[0, t_max]` inclusive.
pub fn uniform_grid(t_max_us: f64, dt_us: f64) -> Result<Vec<f64>> {
    if !(t_max_us > 0.0) || !(dt_us > 0.0) {
        return Err(Error::Input(format!(
            "need positive t_max and dt, got {t_max_us}, {dt_us}"
        )));
    }
    let n = (t_max_us / dt_us).round().max(1.0) as usize;
    Ok((0..=n).map(|i| i as f64 * dt_us).collect())
}

/// Chiral weight of each site: `+x` on `a_x`, `−x` on `b_x`
/// (the missing b-site of an odd chain simply contributes nothing).
fn chiral_weights(n_qubits: usize) -> Vec<f64> {
    (1..=n_qubits)
        .map(|site| {
            let cell = site.div_ceil(2) as f64;
            if site % 2 == 1 {
                cell
            } else {
                -cell
            }
        })
        .collect()
}

fn cd_series(populations: &[Vec<f64>], n_qubits: usize) -> Vec<f64> {
    let w = chiral_weights(n_qubits);
    populations
        .iter()
        .map(|row| row.iter().zip(&w).map(|(p, w)| p * w).sum())
        .collect()
}

/// Exact unitary evolution of `psi0` through the eigendecomposition of `h`,
/// sampled on `times_us`.
pub fn evolve_unitary(h: &Hamiltonian, psi0: &PureState, times_us: &[f64]) -> Result<Trajectory> {
    if psi0.n_qubits() != h.n_qubits() {
        return Err(Error::Input(format!(
            "state has {} sites, Hamiltonian {}",
            psi0.n_qubits(),
            h.n_qubits()
        )));
    }
    validate_times(times_us)?;
    let n = h.n_qubits();
    let eig = nalgebra::SymmetricEigen::new(h.to_dense());
    let psi0_vec = DVector::from_column_slice(psi0.amplitudes());
    let coeffs = eig.eigenvectors.adjoint() * &psi0_vec;

    let mut populations = Vec::with_capacity(times_us.len());
    for &t in times_us {
        let phased = DVector::from_iterator(
            n,
            coeffs.iter().zip(eig.eigenvalues.iter()).map(|(c, &e)| {
                c * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * e * t)
            }),
        );
        let psi_t = &eig.eigenvectors * phased;
        populations.push(psi_t.iter().map(|a| a.norm_sqr()).collect());
    }
    let cd = cd_series(&populations, n);
    Ok(Trajectory {
        times_us: times_us.to_vec(),
        vacuum: vec![0.0; times_us.len()],
        populations,
        cd,
    })
}

/// Propagate a pure state to a single time (negative times run the
/// evolution backwards).
pub fn propagate(h: &Hamiltonian, psi0: &PureState, t_us: f64) -> Result<PureState> {
    if psi0.n_qubits() != h.n_qubits() {
        return Err(Error::Input(format!(
            "state has {} sites, Hamiltonian {}",
            psi0.n_qubits(),
            h.n_qubits()
        )));
    }
    let n = h.n_qubits();
    let eig = nalgebra::SymmetricEigen::new(h.to_dense());
    let coeffs = eig.eigenvectors.adjoint() * DVector::from_column_slice(psi0.amplitudes());
    let phased = DVector::from_iterator(
        n,
        coeffs.iter().zip(eig.eigenvalues.iter()).map(|(c, &e)| {
            c * C64::from_polar(1.0, -2.0 * std::f64::consts::PI * e * t_us)
        }),
    );
    let psi_t = &eig.eigenvectors * phased;
    Ok(PureState {
        amplitudes: psi_t,
    })
}

/// Default integrator step for the master equation, µs.
pub const DEFAULT_LINDBLAD_DT_US: f64 = 1e-3;

/// Integrate the Lindblad master equation with the default step.
pub fn evolve_lindblad(
    h: &Hamiltonian,
    noise: &NoiseModel,
    rho0: &DensityMatrix,
    times_us: &[f64],
) -> Result<Trajectory> {
    evolve_lindblad_dt(h, noise, rho0, times_us, DEFAULT_LINDBLAD_DT_US)
}

/// Integrate the Lindblad master equation with an explicit maximum step.
///
/// Classic fixed-step RK4; the sampling grid is honored exactly by
/// splitting each interval into an integer number of substeps no longer
/// than `dt_us`.
pub fn evolve_lindblad_dt(
    h: &Hamiltonian,
    noise: &NoiseModel,
    rho0: &DensityMatrix,
    times_us: &[f64],
    dt_us: f64,
) -> Result<Trajectory> {
    let n = h.n_qubits();
    let mut populations = Vec::with_capacity(times_us.len());
    let mut vacuum = Vec::with_capacity(times_us.len());
    lindblad_integrate(h, noise, rho0, times_us, dt_us, |rho| {
        populations.push((1..=n).map(|j| rho[(j, j)].re).collect());
        vacuum.push(rho[(0, 0)].re);
    })?;
    let cd = cd_series(&populations, n);
    Ok(Trajectory {
        times_us: times_us.to_vec(),
        populations,
        vacuum,
        cd,
    })
}

/// Lindblad evolution returning the full density matrix at every sample
/// time (positivity diagnostics, state hand-off).
pub fn evolve_lindblad_states(
    h: &Hamiltonian,
    noise: &NoiseModel,
    rho0: &DensityMatrix,
    times_us: &[f64],
    dt_us: f64,
) -> Result<Vec<DensityMatrix>> {
    let mut states = Vec::with_capacity(times_us.len());
    lindblad_integrate(h, noise, rho0, times_us, dt_us, |rho| {
        states.push(DensityMatrix { m: rho.clone() });
    })?;
    Ok(states)
}

fn lindblad_integrate(
    h: &Hamiltonian,
    noise: &NoiseModel,
    rho0: &DensityMatrix,
    times_us: &[f64],
    dt_us: f64,
    mut on_sample: impl FnMut(&DMatrix<C64>),
) -> Result<()> {
    let n = h.n_qubits();
    if noise.n_qubits() != n {
        return Err(Error::NoiseModel(format!(
            "noise model covers {} qubits, chain has {n}",
            noise.n_qubits()
        )));
    }
    if rho0.n_qubits() != n {
        return Err(Error::Input(format!(
            "density matrix covers {} sites, chain has {n}",
            rho0.n_qubits()
        )));
    }
    rho0.validate_physical()?;
    validate_times(times_us)?;
    if !(dt_us > 0.0) {
        return Err(Error::Input(format!(
            "integrator step must be positive, got {dt_us}"
        )));
    }

    let g1 = noise.relaxation_rates();
    let gphi = noise.dephasing_rates();
    let bonds = h.bonds().to_vec();
    let dim = n + 1;

    let rhs = |rho: &DMatrix<C64>, out: &mut DMatrix<C64>| {
        let minus_i_2pi = C64::new(0.0, -2.0 * std::f64::consts::PI);
        // coherent part: −i 2π (Hρ − ρH), H tridiagonal on the site block
        for q in 0..dim {
            for p in 0..dim {
                let mut h_rho = C64::new(0.0, 0.0);
                if p >= 2 {
                    h_rho += bonds[p - 2].conj() * rho[(p - 1, q)];
                }
                if p >= 1 && p < n {
                    h_rho += bonds[p - 1] * rho[(p + 1, q)];
                }
                let mut rho_h = C64::new(0.0, 0.0);
                if q >= 2 {
                    rho_h += bonds[q - 2] * rho[(p, q - 1)];
                }
                if q >= 1 && q < n {
                    rho_h += bonds[q - 1].conj() * rho[(p, q + 1)];
                }
                out[(p, q)] = minus_i_2pi * (h_rho - rho_h);
            }
        }
        // relaxation |G⟩⟨j| at 1/T1 and dephasing 2γ_φ D[|j⟩⟨j|]
        for j in 1..dim {
            let damp = 0.5 * g1[j - 1] + gphi[j - 1];
            for q in 0..dim {
                out[(j, q)] -= damp * rho[(j, q)];
                out[(q, j)] -= damp * rho[(q, j)];
            }
            out[(j, j)] += 2.0 * gphi[j - 1] * rho[(j, j)];
            out[(0, 0)] += g1[j - 1] * rho[(j, j)];
        }
    };

    let mut rho = rho0.matrix().clone();
    let mut k1 = DMatrix::zeros(dim, dim);
    let mut k2 = DMatrix::zeros(dim, dim);
    let mut k3 = DMatrix::zeros(dim, dim);
    let mut k4 = DMatrix::zeros(dim, dim);
    let mut stage = DMatrix::zeros(dim, dim);

    // y += a x, elementwise over the matrix storage
    fn acc(y: &mut DMatrix<C64>, a: f64, x: &DMatrix<C64>) {
        for (yi, xi) in y.as_mut_slice().iter_mut().zip(x.as_slice()) {
            *yi += xi * a;
        }
    }

    on_sample(&rho);
    for w in times_us.windows(2) {
        let span = w[1] - w[0];
        let substeps = (span / dt_us).ceil().max(1.0) as usize;
        let hstep = span / substeps as f64;
        for _ in 0..substeps {
            rhs(&rho, &mut k1);
            stage.copy_from(&rho);
            acc(&mut stage, 0.5 * hstep, &k1);
            rhs(&stage, &mut k2);
            stage.copy_from(&rho);
            acc(&mut stage, 0.5 * hstep, &k2);
            rhs(&stage, &mut k3);
            stage.copy_from(&rho);
            acc(&mut stage, hstep, &k3);
            rhs(&stage, &mut k4);
            acc(&mut rho, hstep / 6.0, &k1);
            acc(&mut rho, hstep / 3.0, &k2);
            acc(&mut rho, hstep / 3.0, &k3);
            acc(&mut rho, hstep / 6.0, &k4);
        }
        on_sample(&rho);
    }
    Ok(())
}

/// Chiral displacement per time point: `Σ_x x (P_{a_x} − P_{b_x})`.
pub fn chiral_displacement(traj: &Trajectory, chain: &ChainSpec) -> Result<Vec<f64>> {
    if chain.n_qubits() != traj.n_qubits() {
        return Err(Error::Input(format!(
            "chain has {} qubits, trajectory {}",
            chain.n_qubits(),
            traj.n_qubits()
        )));
    }
    Ok(cd_series(&traj.populations, chain.n_qubits()))
}

/// Trapezoid time average of the chiral displacement over the full
/// trajectory window.
pub fn time_averaged_cd(traj: &Trajectory) -> Result<f64> {
    if traj.len() < 2 {
        return Err(Error::Input(
            "time average needs at least 2 trajectory points".into(),
        ));
    }
    let t = &traj.times_us;
    let cd = &traj.cd;
    let mut integral = 0.0;
    for i in 1..t.len() {
        integral += 0.5 * (cd[i] + cd[i - 1]) * (t[i] - t[i - 1]);
    }
    Ok(integral / (t[t.len() - 1] - t[0]))
}

/// Winding estimate: twice the time-averaged chiral displacement.
pub fn winding_estimate(traj: &Trajectory) -> Result<f64> {
    Ok(2.0 * time_averaged_cd(traj)?)
}
