use num_complex::Complex64;

use super::PureState;
use crate::error::{Error, Result};
use crate::qmatrix::{qubit_count, CMatrix};

/// Singular values at or below this fraction of the largest are not counted.
pub const SCHMIDT_RANK_TOL: f64 = 1e-8;

/// `|psi> = sum_i lambda_i |i_A>|i_B>` across one cut of a qubit string.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtData {
    /// Descending, non-negative.
    pub coefficients: Vec<f64>,
    /// Columns are `|i_A>` (dimension `2^k`).
    pub basis_a: CMatrix,
    /// Columns are `|i_B>` (dimension `2^(n-k)`).
    pub basis_b: CMatrix,
}

impl SchmidtData {
    /// `sum_i lambda_i |i_A> (x) |i_B>`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let (da, db) = (self.basis_a.rows(), self.basis_b.rows());
        let mut out = vec![Complex64::new(0.0, 0.0); da * db];
        for (l, &lambda) in self.coefficients.iter().enumerate() {
            for i in 0..da {
                let a = self.basis_a[(i, l)] * lambda;
                for j in 0..db {
                    out[i * db + j] += a * self.basis_b[(j, l)];
                }
            }
        }
        out
    }

    /// Number of coefficients above the scale-aware rank tolerance.
    pub fn number(&self) -> usize {
        let top = self.coefficients.first().copied().unwrap_or(0.0);
        self.coefficients
            .iter()
            .filter(|&&l| l > SCHMIDT_RANK_TOL * top)
            .count()
    }
}

/// Schmidt decomposition between the first `cut` qubits and the rest, via
/// the SVD of the `2^cut x 2^(n-cut)` reshaping of the amplitudes.
pub fn schmidt(psi: &PureState, cut: usize) -> Result<SchmidtData> {
    let n = qubit_count(psi.dim())?;
    if cut == 0 || cut >= n {
        return Err(Error::InvalidCut {
            cut,
            max: n.saturating_sub(1),
        });
    }
    let (da, db) = (1usize << cut, 1usize << (n - cut));
    let m = CMatrix::from_vec(da, db, psi.amplitudes().to_vec());
    let svd = m.svd();
    let r = svd.singular_values.len();
    let mut basis_b = CMatrix::zeros(db, r);
    for j in 0..db {
        for l in 0..r {
            basis_b[(j, l)] = svd.v[(j, l)].conj();
        }
    }
    Ok(SchmidtData {
        coefficients: svd.singular_values,
        basis_a: svd.u,
        basis_b,
    })
}

pub fn schmidt_number(psi: &PureState, cut: usize) -> Result<usize> {
    Ok(schmidt(psi, cut)?.number())
}

/// `max over cuts k = 1..n-1 of schmidt_number(psi, k)`, minus one.
pub fn entanglement_degree(psi: &PureState) -> Result<usize> {
    let n = qubit_count(psi.dim())?;
    if n < 2 {
        return Err(Error::InvalidCut { cut: 1, max: 0 });
    }
    let mut best = 1;
    for k in 1..n {
        best = best.max(schmidt_number(psi, k)?);
    }
    Ok(best - 1)
}
