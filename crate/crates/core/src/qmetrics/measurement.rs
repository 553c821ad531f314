use num_complex::Complex64;

use super::{PureState, STATE_TOL};
use crate::error::{Error, Result};
use crate::qmatrix::CMatrix;

/// Outcomes with probability at or below this carry no post-measurement state.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

/// Measurement operators `M_r` with `sum M_r^dagger M_r = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumMeasurement {
    operators: Vec<CMatrix>,
    labels: Vec<String>,
}

/// One branch of a measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcome {
    pub label: String,
    pub probability: f64,
    /// `M_r |psi> / sqrt(p(r))`, absent for negligible outcomes.
    pub post_state: Option<PureState>,
}

impl QuantumMeasurement {
    pub fn new(operators: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        if operators.is_empty() || operators.len() != labels.len() {
            return Err(Error::InvalidParameter(format!(
                "{} operators for {} labels",
                operators.len(),
                labels.len()
            )));
        }
        let dim = operators[0].rows();
        let mut sum = CMatrix::zeros(dim, dim);
        for m in &operators {
            m.ensure_square()?;
            sum = sum.try_add(&m.adjoint().try_mul(m)?)?;
        }
        let defect = (&sum - &CMatrix::identity(dim)).max_abs();
        if defect > STATE_TOL {
            return Err(Error::InvalidMeasurement(defect));
        }
        Ok(Self { operators, labels })
    }

    /// Projective measurement onto `|0>, ..., |dim-1>`, labelled by index.
    pub fn computational_basis(dim: usize) -> Self {
        let operators = (0..dim)
            .map(|k| {
                let mut p = CMatrix::zeros(dim, dim);
                p[(k, k)] = Complex64::new(1.0, 0.0);
                p
            })
            .collect();
        Self {
            operators,
            labels: (0..dim).map(|k| k.to_string()).collect(),
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    /// POVM elements `M_r^dagger M_r`.
    pub fn effects(&self) -> Vec<CMatrix> {
        self.operators.iter().map(|m| &m.adjoint() * m).collect()
    }
}

/// Outcome probabilities `<psi|M_r^dagger M_r|psi>` and post-measurement states.
pub fn measure(m: &QuantumMeasurement, psi: &PureState) -> Result<Vec<MeasurementOutcome>> {
    if m.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            left: m.dim().to_string(),
            right: psi.dim().to_string(),
        });
    }
    m.operators
        .iter()
        .zip(&m.labels)
        .map(|(op, label)| {
            let branch = op.mul_vec(psi.amplitudes())?;
            let probability: f64 = branch.iter().map(|z| z.norm_sqr()).sum();
            let post_state = (probability > MIN_OUTCOME_PROBABILITY)
                .then(|| PureState::normalized(branch))
                .transpose()?;
            Ok(MeasurementOutcome {
                label: label.clone(),
                probability,
                post_state,
            })
        })
        .collect()
}
