//! Quantum and classical state distances, fidelity, Bloch coordinates,
//! measurements and Schmidt decompositions.

mod measurement;
mod schmidt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmatrix::{mat_sqrt_psd, tensor, CMatrix};
use crate::sampling::SeededRng;

pub use measurement::{measure, MeasurementOutcome, QuantumMeasurement};
pub use schmidt::{entanglement_degree, schmidt, schmidt_number, SchmidtData};

/// Tolerance for the Hermiticity, positivity and normalization invariants.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        mat.ensure_square()?;
        let defect = mat.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidTrace(tr));
        }
        let min = mat.hermitian_eigen()?.eigenvalues[0];
        if min < -STATE_TOL {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_bloch_unchecked(r: [f64; 3]) -> Self {
        let [x, y, z] = r;
        let mat = CMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new((1.0 + z) / 2.0, 0.0),
                Complex64::new(x / 2.0, -y / 2.0),
                Complex64::new(x / 2.0, y / 2.0),
                Complex64::new((1.0 - z) / 2.0, 0.0),
            ],
        );
        Self { mat }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// `|psi><psi|`
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            mat: CMatrix::outer(&psi.amplitudes, &psi.amplitudes),
        }
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// `U rho U^dagger`, revalidated.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        let m = u.try_mul(&self.mat)?.try_mul(&u.adjoint())?;
        Self::new(m.hermitian_part())
    }
}

/// Unit vector of amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::NotNormalized(0.0));
        }
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / n).collect(),
        })
    }

    pub(crate) fn from_normalized_unchecked(amplitudes: Vec<Complex64>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim().to_string(),
                right: other.dim().to_string(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// `U |psi>`, revalidated (so `U` must be unitary).
    pub fn apply(&self, u: &CMatrix) -> Result<Self> {
        Self::new(u.mul_vec(&self.amplitudes)?)
    }

    pub fn tensor(&self, other: &PureState) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { amplitudes }
    }
}

/// Probability distribution over a finite alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector {
    probabilities: Vec<f64>,
}

impl ProbVector {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::InvalidProbabilities("empty alphabet".into()));
        }
        if let Some(p) = probabilities.iter().find(|p| p.is_nan() || **p < 0.0 || p.is_infinite()) {
            return Err(Error::InvalidProbabilities(format!("entry {p} is not a probability")));
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidProbabilities(format!("entries sum to {sum}")));
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }
}

fn ensure_same_dim(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

/// `1/2 Tr |rho_1 - rho_2|`.
pub fn trace_distance(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(r1.dim(), r2.dim())?;
    let diff = r1.mat.try_sub(&r2.mat)?;
    let eig = diff.hermitian_eigen()?;
    Ok((0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>()).min(1.0))
}

/// Optimal value of `max Tr P (rho_1 - rho_2)` over `0 <= P <= I`, with the
/// maximizer: the projector onto the positive eigenspace of `rho_1 - rho_2`.
pub fn trace_distance_variational(
    r1: &DensityMatrix,
    r2: &DensityMatrix,
) -> Result<(f64, CMatrix)> {
    ensure_same_dim(r1.dim(), r2.dim())?;
    let diff = r1.mat.try_sub(&r2.mat)?;
    let eig = diff.hermitian_eigen()?;
    let value = eig.eigenvalues.iter().filter(|&&l| l > 0.0).sum();
    let projector = eig.map_eigenvalues(|l| if l > 0.0 { 1.0 } else { 0.0 });
    Ok((value, projector))
}

/// `Tr sqrt(sqrt(rho_1) rho_2 sqrt(rho_1))`, evaluated as the trace norm of
/// `sqrt(rho_1) sqrt(rho_2)` (same quantity, no second square root of a
/// nearly singular spectrum).
pub fn fidelity(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(r1.dim(), r2.dim())?;
    let s1 = mat_sqrt_psd(&r1.mat)?;
    let s2 = mat_sqrt_psd(&r2.mat)?;
    let x = s1.try_mul(&s2)?;
    Ok(x.singular_values().iter().sum::<f64>().clamp(0.0, 1.0))
}

/// `arccos F`, in `[0, pi/2]`.
pub fn angle_distance(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64> {
    Ok(fidelity(r1, r2)?.clamp(-1.0, 1.0).acos())
}

fn ensure_same_alphabet(p1: &ProbVector, p2: &ProbVector) -> Result<()> {
    ensure_same_dim(p1.len(), p2.len())
}

/// `1/2 sum |p_1(x) - p_2(x)|`.
pub fn classical_trace_distance(p1: &ProbVector, p2: &ProbVector) -> Result<f64> {
    ensure_same_alphabet(p1, p2)?;
    Ok(0.5
        * p1.probabilities
            .iter()
            .zip(&p2.probabilities)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

/// `sum sqrt(p_1(x) p_2(x))`.
pub fn classical_fidelity(p1: &ProbVector, p2: &ProbVector) -> Result<f64> {
    ensure_same_alphabet(p1, p2)?;
    Ok(p1
        .probabilities
        .iter()
        .zip(&p2.probabilities)
        .map(|(a, b)| (a * b).sqrt())
        .sum::<f64>()
        .clamp(0.0, 1.0))
}

pub fn classical_angle(p1: &ProbVector, p2: &ProbVector) -> Result<f64> {
    Ok(classical_fidelity(p1, p2)?.clamp(-1.0, 1.0).acos())
}

/// Largest alphabet accepted by [`classical_event_max`].
pub const MAX_EVENT_ALPHABET: usize = 16;

/// `max over events E of |p_1(E) - p_2(E)|` by enumerating every subset.
pub fn classical_event_max(p1: &ProbVector, p2: &ProbVector) -> Result<f64> {
    ensure_same_alphabet(p1, p2)?;
    let n = p1.len();
    if n > MAX_EVENT_ALPHABET {
        return Err(Error::InvalidParameter(format!(
            "event enumeration supports alphabets up to {MAX_EVENT_ALPHABET}, got {n}"
        )));
    }
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let gap: f64 = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| p1.probabilities[i] - p2.probabilities[i])
            .sum();
        best = best.max(gap.abs());
    }
    Ok(best)
}

/// `(I + r . sigma) / 2`; vectors just outside the ball (by at most
/// [`STATE_TOL`]) are pulled back onto the sphere.
pub fn bloch_to_state(r: [f64; 3]) -> Result<DensityMatrix> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if norm.is_nan() || norm > 1.0 + STATE_TOL {
        return Err(Error::OutOfBall(norm));
    }
    let r = if norm > 1.0 {
        [r[0] / norm, r[1] / norm, r[2] / norm]
    } else {
        r
    };
    Ok(DensityMatrix::from_bloch_unchecked(r))
}

/// `(Tr rho sigma_x, Tr rho sigma_y, Tr rho sigma_z)`.
pub fn state_to_bloch(rho: &DensityMatrix) -> Result<[f64; 3]> {
    ensure_same_dim(rho.dim(), 2)?;
    let m = &rho.mat;
    Ok([
        (m[(0, 1)] + m[(1, 0)]).re,
        ((m[(0, 1)] - m[(1, 0)]) * Complex64::new(0.0, 1.0)).re,
        (m[(0, 0)] - m[(1, 1)]).re,
    ])
}

/// Result of sampling purification overlaps against the fidelity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UhlmannSample {
    pub best_overlap: f64,
    pub fidelity: f64,
    /// `fidelity - best_overlap`; never meaningfully negative.
    pub gap: f64,
    /// Largest amount by which any sampled overlap exceeded the fidelity.
    pub max_excess: f64,
}

/// Canonical purification `sum_ij (sqrt rho)_ij |i>|j>` on `H (x) H`.
pub fn canonical_purification(rho: &DensityMatrix) -> Result<PureState> {
    let s = mat_sqrt_psd(&rho.mat)?;
    Ok(PureState::from_normalized_unchecked(s.data().to_vec()))
}

/// Samples `|<psi_1| (I (x) U) |psi_2>|` over random ancilla unitaries `U`,
/// where `psi_k` are canonical purifications of single-qubit states.
pub fn uhlmann_overlap_sample(
    r1: &DensityMatrix,
    r2: &DensityMatrix,
    trials: usize,
    rng: &mut SeededRng,
) -> Result<UhlmannSample> {
    ensure_same_dim(r1.dim(), 2)?;
    ensure_same_dim(r2.dim(), 2)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let f = fidelity(r1, r2)?;
    let psi1 = canonical_purification(r1)?;
    let psi2 = canonical_purification(r2)?;
    let mut best = 0.0f64;
    let mut max_excess = f64::NEG_INFINITY;
    for _ in 0..trials {
        let u = rng.sample_unitary(2)?;
        let local = tensor(&CMatrix::identity(2), &u)?;
        let moved = local.mul_vec(psi2.amplitudes())?;
        let overlap: Complex64 = psi1
            .amplitudes()
            .iter()
            .zip(&moved)
            .map(|(a, b)| a.conj() * b)
            .sum();
        let o = overlap.norm();
        best = best.max(o);
        max_excess = max_excess.max(o - f);
    }
    Ok(UhlmannSample {
        best_overlap: best,
        fidelity: f,
        gap: f - best,
        max_excess,
    })
}

/// Outcome of testing the two candidate upper bounds on the trace distance
/// against random pure-state pairs.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct BoundSearchReport {
    pub trials: usize,
    /// Pairs with `1 - F > D + 1e-9`.
    pub lower_bound_violations: usize,
    /// Pairs with `D > sqrt(1 - F) + 1e-9`.
    pub sqrt_one_minus_f_violations: usize,
    /// Pairs with `D > sqrt(1 - F^2) + 1e-9`.
    pub sqrt_one_minus_f2_violations: usize,
    /// The largest `D - sqrt(1 - F)` seen, with its `(D, F)`.
    pub worst_sqrt_one_minus_f: Option<(f64, f64, f64)>,
}

/// Slack applied when testing the distance inequalities.
pub const BOUND_SLACK: f64 = 1e-9;

/// Random search for violations of `1 - F <= D`, `D <= sqrt(1 - F)` and
/// `D <= sqrt(1 - F^2)` over Haar-random pure qubit pairs.
pub fn search_bound_violations(trials: usize, rng: &mut SeededRng) -> Result<BoundSearchReport> {
    let mut report = BoundSearchReport {
        trials,
        lower_bound_violations: 0,
        sqrt_one_minus_f_violations: 0,
        sqrt_one_minus_f2_violations: 0,
        worst_sqrt_one_minus_f: None,
    };
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let a = rng.sample_pure_state().density();
        let b = rng.sample_pure_state().density();
        let d = trace_distance(&a, &b)?;
        let f = fidelity(&a, &b)?;
        if 1.0 - f > d + BOUND_SLACK {
            report.lower_bound_violations += 1;
        }
        let excess = d - (1.0 - f).max(0.0).sqrt();
        if excess > BOUND_SLACK {
            report.sqrt_one_minus_f_violations += 1;
        }
        if excess > worst {
            worst = excess;
            report.worst_sqrt_one_minus_f = Some((d, f, excess));
        }
        if d > (1.0 - f * f).max(0.0).sqrt() + BOUND_SLACK {
            report.sqrt_one_minus_f2_violations += 1;
        }
    }
    Ok(report)
}
