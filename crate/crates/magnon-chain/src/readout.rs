//! Synthetic finite-shot readout with per-qubit confusion matrices and
//! Bayes-rule correction.
//!
//! Imperfect dispersive readout mixes the |g⟩/|e⟩ outcome statistics.
//! With per-qubit error probabilities `p(e|g)` and `p(g|e)` the observed
//! e-fraction of a qubit with true excitation `P` is
//!
//! ```text
//! f = P · (1 − p(g|e)) + (1 − P) · p(e|g),
//! ```
//!
//! and inverting the 2×2 confusion matrix recovers
//!
//! ```text
//! P = (f − p(e|g)) / (1 − p(e|g) − p(g|e)).
//! ```
//!
//! Sampling is seeded and deterministic; each qubit draws from its own
//! counter-derived stream so results are independent of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};

/// Default synthetic symmetric readout error.
pub const DEFAULT_READOUT_ERROR: f64 = 0.05;

/// Per-qubit readout confusion probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutCalibration {
    p_e_given_g: Vec<f64>,
    p_g_given_e: Vec<f64>,
}

impl ReadoutCalibration {
    pub fn new(p_e_given_g: Vec<f64>, p_g_given_e: Vec<f64>) -> Result<Self> {
        if p_e_given_g.len() != p_g_given_e.len() {
            return Err(Error::Calibration(format!(
                "{} p(e|g) entries but {} p(g|e) entries",
                p_e_given_g.len(),
                p_g_given_e.len()
            )));
        }
        for (q, (&eg, &ge)) in p_e_given_g.iter().zip(&p_g_given_e).enumerate() {
            if !(0.0..=1.0).contains(&eg) || !(0.0..=1.0).contains(&ge) {
                return Err(Error::Calibration(format!(
                    "qubit {}: probabilities must lie in [0, 1], got p(e|g) = {eg}, p(g|e) = {ge}",
                    q + 1
                )));
            }
            // determinant of the 2×2 confusion matrix is 1 − p(e|g) − p(g|e)
            if (1.0 - eg - ge).abs() < 1e-12 {
                return Err(Error::Calibration(format!(
                    "qubit {}: confusion matrix singular (p(e|g) + p(g|e) = 1)",
                    q + 1
                )));
            }
        }
        Ok(ReadoutCalibration {
            p_e_given_g,
            p_g_given_e,
        })
    }

    /// Perfect readout.
    pub fn identity(n_qubits: usize) -> Self {
        ReadoutCalibration {
            p_e_given_g: vec![0.0; n_qubits],
            p_g_given_e: vec![0.0; n_qubits],
        }
    }

    /// Same symmetric error on every qubit.
    pub fn uniform(n_qubits: usize, p_e_given_g: f64, p_g_given_e: f64) -> Result<Self> {
        Self::new(vec![p_e_given_g; n_qubits], vec![p_g_given_e; n_qubits])
    }

    /// The synthetic default: 5% symmetric error.
    pub fn default_synthetic(n_qubits: usize) -> Self {
        Self::uniform(n_qubits, DEFAULT_READOUT_ERROR, DEFAULT_READOUT_ERROR)
            .expect("default error probabilities are valid")
    }

    pub fn n_qubits(&self) -> usize {
        self.p_e_given_g.len()
    }

    /// Column-stochastic confusion matrix of one qubit:
    /// `[[p(g|g), p(g|e)], [p(e|g), p(e|e)]]`.
    pub fn confusion_matrix(&self, qubit: usize) -> Result<[[f64; 2]; 2]> {
        let i = qubit
            .checked_sub(1)
            .filter(|&i| i < self.n_qubits())
            .ok_or_else(|| {
                Error::Bounds(format!(
                    "qubit {qubit} outside calibration of {} qubits",
                    self.n_qubits()
                ))
            })?;
        let eg = self.p_e_given_g[i];
        let ge = self.p_g_given_e[i];
        Ok([[1.0 - eg, ge], [eg, 1.0 - ge]])
    }

    /// Observed e-outcome probability for a true excitation `p` on `qubit`.
    fn observed(&self, qubit_idx: usize, p: f64) -> f64 {
        p * (1.0 - self.p_g_given_e[qubit_idx]) + (1.0 - p) * self.p_e_given_g[qubit_idx]
    }

    /// Load calibration from a TOML file with `p_e_given_g` / `p_g_given_e`
    /// arrays.
    pub fn from_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        #[derive(serde::Deserialize)]
        #[serde(deny_unknown_fields)]
        struct File {
            p_e_given_g: Vec<f64>,
            p_g_given_e: Vec<f64>,
        }
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let f: File = toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(f.p_e_given_g, f.p_g_given_e)
    }
}

/// Counts of e-outcomes per qubit and time point, out of `shots` repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    /// Time-major rows, one count per qubit.
    counts: Vec<Vec<u64>>,
    shots: u64,
    seed: u64,
}

impl ShotRecord {
    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_times(&self) -> usize {
        self.counts.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    pub fn counts_at(&self, time_idx: usize) -> &[u64] {
        &self.counts[time_idx]
    }

    /// Raw observed e-fractions, time-major.
    pub fn frequencies(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 / self.shots as f64).collect())
            .collect()
    }
}

/// Draw `shots` imperfect single-shot outcomes per qubit and time point.
///
/// `probabilities` holds the true per-qubit excitation probabilities,
/// one row per time point. Each qubit samples from stream `seed ⊕ qubit`
/// of a counter-based generator, so records are reproducible and
/// independent of row iteration order.
pub fn sample_shots(
    probabilities: &[Vec<f64>],
    shots: u64,
    cal: &ReadoutCalibration,
    seed: u64,
) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(Error::Input("shot count must be positive".into()));
    }
    let n_qubits = probabilities.first().map_or(0, Vec::len);
    if n_qubits == 0 {
        return Err(Error::Input("no probabilities to sample".into()));
    }
    if n_qubits != cal.n_qubits() {
        return Err(Error::Calibration(format!(
            "calibration covers {} qubits, data has {n_qubits}",
            cal.n_qubits()
        )));
    }
    for (t, row) in probabilities.iter().enumerate() {
        if row.len() != n_qubits {
            return Err(Error::Input(format!(
                "row {t} has {} entries, expected {n_qubits}",
                row.len()
            )));
        }
        // tolerate roundoff-level excursions from exact-arithmetic populations
        if row.iter().any(|&p| !(-1e-9..=1.0 + 1e-9).contains(&p)) {
            return Err(Error::Input(format!(
                "row {t} contains probabilities outside [0, 1]"
            )));
        }
    }

    let mut counts = vec![vec![0_u64; n_qubits]; probabilities.len()];
    for q in 0..n_qubits {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(q as u64 + 1);
        for (t, row) in probabilities.iter().enumerate() {
            let p_obs = cal.observed(q, row[q].clamp(0.0, 1.0)).clamp(0.0, 1.0);
            let dist = Binomial::new(shots, p_obs)
                .map_err(|e| Error::Input(format!("binomial setup failed: {e}")))?;
            counts[t][q] = dist.sample(&mut rng);
        }
    }
    Ok(ShotRecord {
        counts,
        shots,
        seed,
    })
}

/// Convenience wrapper: sample a trajectory's populations.
pub fn sample_trajectory(
    traj: &Trajectory,
    shots: u64,
    cal: &ReadoutCalibration,
    seed: u64,
) -> Result<ShotRecord> {
    let rows: Vec<Vec<f64>> = (0..traj.len())
        .map(|i| traj.populations_at(i).to_vec())
        .collect();
    sample_shots(&rows, shots, cal, seed)
}

/// Bayes-corrected excitation probabilities with clamping flags.
#[derive(Debug, Clone)]
pub struct CorrectedProbabilities {
    /// Time-major corrected per-qubit probabilities.
    pub values: Vec<Vec<f64>>,
    /// Set where the linear inversion left [0, 1] and was clamped.
    pub clamped: Vec<Vec<bool>>,
}

impl CorrectedProbabilities {
    pub fn any_clamped(&self) -> bool {
        self.clamped.iter().flatten().any(|&c| c)
    }
}

/// Invert the per-qubit confusion matrices on the empirical frequencies.
///
/// Values outside [0, 1] can only arise from finite-shot noise; they are
/// clamped and flagged, never silently.
pub fn bayes_correct(record: &ShotRecord, cal: &ReadoutCalibration) -> Result<CorrectedProbabilities> {
    if record.n_qubits() != cal.n_qubits() {
        return Err(Error::Calibration(format!(
            "calibration covers {} qubits, record has {}",
            cal.n_qubits(),
            record.n_qubits()
        )));
    }
    let mut values = Vec::with_capacity(record.n_times());
    let mut clamped = Vec::with_capacity(record.n_times());
    for t in 0..record.n_times() {
        let mut row = Vec::with_capacity(record.n_qubits());
        let mut row_flags = Vec::with_capacity(record.n_qubits());
        for q in 0..record.n_qubits() {
            let f = record.counts[t][q] as f64 / record.shots as f64;
            let eg = cal.p_e_given_g[q];
            let ge = cal.p_g_given_e[q];
            let p = (f - eg) / (1.0 - eg - ge);
            let clamp = !(0.0..=1.0).contains(&p);
            row.push(p.clamp(0.0, 1.0));
            row_flags.push(clamp);
        }
        values.push(row);
        clamped.push(row_flags);
    }
    Ok(CorrectedProbabilities { values, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_validation() {
        assert!(ReadoutCalibration::new(vec![0.05], vec![0.05]).is_ok());
        assert!(ReadoutCalibration::new(vec![1.1], vec![0.0]).is_err());
        assert!(ReadoutCalibration::new(vec![0.6], vec![0.4]).is_err());
        assert!(ReadoutCalibration::new(vec![0.05, 0.05], vec![0.05]).is_err());
        let cal = ReadoutCalibration::uniform(2, 0.05, 0.03).unwrap();
        let m = cal.confusion_matrix(1).unwrap();
        assert_eq!(m, [[0.95, 0.03], [0.05, 0.97]]);
        // columns sum to 1
        assert!((m[0][0] + m[1][0] - 1.0).abs() < 1e-15);
        assert!((m[0][1] + m[1][1] - 1.0).abs() < 1e-15);
        assert!(cal.confusion_matrix(3).is_err());
    }

    #[test]
    fn perfect_calibration_full_excitation() {
        let cal = ReadoutCalibration::identity(2);
        let probs = vec![vec![1.0, 0.0]];
        let rec = sample_shots(&probs, 500, &cal, 7).unwrap();
        assert_eq!(rec.counts_at(0), &[500, 0]);
    }

    #[test]
    fn dark_counts_converge_to_error_rate() {
        // P = 0 with p(e|g) = 0.05: counts/N → 0.05 within 3σ
        let cal = ReadoutCalibration::uniform(1, 0.05, 0.05).unwrap();
        let n = 100_000_u64;
        let rec = sample_shots(&[vec![0.0]], n, &cal, 42).unwrap();
        let f = rec.frequencies()[0][0];
        let sigma = (0.05_f64 * 0.95 / n as f64).sqrt();
        assert!(
            (f - 0.05).abs() < 3.0 * sigma,
            "f = {f}, expected 0.05 ± {:.2e}",
            3.0 * sigma
        );
    }

    #[test]
    fn sampling_is_deterministic_under_seed() {
        let cal = ReadoutCalibration::default_synthetic(3);
        let probs = vec![vec![0.2, 0.5, 0.9], vec![0.3, 0.4, 0.1]];
        let a = sample_shots(&probs, 5000, &cal, 123).unwrap();
        let b = sample_shots(&probs, 5000, &cal, 123).unwrap();
        assert_eq!(a, b);
        let c = sample_shots(&probs, 5000, &cal, 124).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_rejects_bad_input() {
        let cal = ReadoutCalibration::identity(1);
        assert!(sample_shots(&[vec![0.5]], 0, &cal, 0).is_err());
        assert!(sample_shots(&[vec![1.5]], 10, &cal, 0).is_err());
        assert!(sample_shots(&[vec![0.5, 0.5]], 10, &cal, 0).is_err());
    }

    #[test]
    fn identity_calibration_correction_is_empirical() {
        let cal = ReadoutCalibration::identity(2);
        let probs = vec![vec![0.25, 0.75]];
        let rec = sample_shots(&probs, 4000, &cal, 9).unwrap();
        let corrected = bayes_correct(&rec, &cal).unwrap();
        let freqs = rec.frequencies();
        assert_eq!(corrected.values, freqs);
        assert!(!corrected.any_clamped());
    }

    #[test]
    fn bayes_round_trip_unbiased() {
        // corrected ≈ true within 3σ of the corrected estimator at N = 10^6
        let cal = ReadoutCalibration::uniform(1, 0.05, 0.08).unwrap();
        let n = 1_000_000_u64;
        for (seed, p_true) in [(1_u64, 0.3), (2, 0.62), (3, 0.95)] {
            let rec = sample_shots(&[vec![p_true]], n, &cal, seed).unwrap();
            let corrected = bayes_correct(&rec, &cal).unwrap();
            let p_obs = cal.observed(0, p_true);
            let sigma_f = (p_obs * (1.0 - p_obs) / n as f64).sqrt();
            let sigma_p = sigma_f / (1.0 - 0.05 - 0.08);
            let got = corrected.values[0][0];
            assert!(
                (got - p_true).abs() < 3.0 * sigma_p,
                "p_true = {p_true}: corrected {got}, tolerance {:.2e}",
                3.0 * sigma_p
            );
        }
    }

    #[test]
    fn calibration_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cal.toml");
        std::fs::write(
            &path,
            "p_e_given_g = [0.05, 0.07]\np_g_given_e = [0.04, 0.06]\n",
        )
        .unwrap();
        let cal = ReadoutCalibration::from_path(&path).unwrap();
        assert_eq!(cal.p_e_given_g, vec![0.05, 0.07]);
        assert_eq!(cal.p_g_given_e, vec![0.04, 0.06]);
        std::fs::write(&path, "p_e_given_g = [0.05]\nbogus = 1\n").unwrap();
        assert!(ReadoutCalibration::from_path(&path).is_err());
    }

    #[test]
    fn clamping_flagged_at_boundary() {
        // empirical frequency below p(e|g) drives the inversion negative
        let cal = ReadoutCalibration::uniform(1, 0.10, 0.05).unwrap();
        let rec = ShotRecord {
            counts: vec![vec![2]],
            shots: 100,
            seed: 0,
        };
        let corrected = bayes_correct(&rec, &cal).unwrap();
        assert_eq!(corrected.values[0][0], 0.0);
        assert!(corrected.clamped[0][0]);
        assert!(corrected.any_clamped());
    }
}
