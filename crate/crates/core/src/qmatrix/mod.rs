//! Dense complex matrices sized for operators on at most ten qubits.

mod eigen;
pub mod json;
mod prefix;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{HermitianEigen, Svd};
pub use prefix::{QuantumPrefix, DENSE_CAP};

/// Largest row or column count any matrix in this crate may reach (2^10).
pub const MAX_DIM: usize = 1 << 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// # Panics
    /// If `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Parse("matrix must have at least one entry".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        Ok(Self::from_vec(r, c, rows.concat()))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn column(v: &[Complex64]) -> Self {
        Self::from_vec(v.len(), 1, v.to_vec())
    }

    /// `|v><w|`
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        let mut m = Self::zeros(v.len(), w.len());
        for (i, a) in v.iter().enumerate() {
            for (j, b) in w.iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        m
    }

    pub fn pauli_x() -> Self {
        Self::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> Self {
        Self::from_vec(2, 2, vec![ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> Self {
        Self::from_vec(2, 2, vec![ONE, ZERO, ZERO, -ONE])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn ensure_same_shape(&self, other: &CMatrix) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            })
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn try_add(&self, other: &CMatrix) -> Result<Self> {
        self.ensure_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &CMatrix) -> Result<Self> {
        self.ensure_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &CMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("vector of {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(a^dagger a)`, the squared Frobenius norm, without forming the product.
    pub fn trace_gram(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.trace_gram().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus of `a - a^dagger` entries.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(a + a^dagger) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        self.zip_with(&adj, |a, b| (a + b) * 0.5)
    }

    pub fn determinant(&self) -> Result<Complex64> {
        let n = self.ensure_square()?;
        let mut a = self.clone();
        let mut det = ONE;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
                .unwrap_or(col);
            if a[(pivot, col)] == ZERO {
                return Ok(ZERO);
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for r in col + 1..n {
                let f = a[(r, col)] / p;
                for j in col..n {
                    let v = a[(col, j)];
                    a[(r, j)] -= f * v;
                }
            }
        }
        Ok(det)
    }

    /// Modified Gram–Schmidt on the columns, phases kept. `None` when a
    /// column is (numerically) dependent on the previous ones.
    pub fn orthonormalize_columns(&self, tol: f64) -> Option<CMatrix> {
        let mut cols: Vec<Vec<Complex64>> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)]).collect())
            .collect();
        for j in 0..cols.len() {
            let (done, rest) = cols.split_at_mut(j);
            let v = &mut rest[0];
            for q in done.iter() {
                let proj: Complex64 = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, qi) in v.iter_mut().zip(q) {
                    *x -= proj * qi;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm <= tol {
                return None;
            }
            v.iter_mut().for_each(|x| *x /= norm);
        }
        let mut out = CMatrix::zeros(self.rows, self.cols);
        for (j, c) in cols.iter().enumerate() {
            for (i, z) in c.iter().enumerate() {
                out[(i, j)] = *z;
            }
        }
        Some(out)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on shape mismatch; use `try_mul` for checked products.
impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.5}{:+.5}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Which Schatten norm [`op_norm`] computes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormOrder {
    /// `(sum sigma_i^p)^(1/p)` for `p >= 1`.
    Schatten(u32),
    /// Largest singular value: the operator norm.
    Infinity,
}

/// Schatten norm computed from singular values.
pub fn op_norm(a: &CMatrix, order: NormOrder) -> Result<f64> {
    a.ensure_square()?;
    let sv = a.singular_values();
    Ok(match order {
        NormOrder::Infinity => sv.first().copied().unwrap_or(0.0),
        NormOrder::Schatten(0) => {
            return Err(Error::InvalidParameter("Schatten order must be at least 1".into()))
        }
        NormOrder::Schatten(1) => sv.iter().sum(),
        NormOrder::Schatten(p) => {
            let s_max = sv.first().copied().unwrap_or(0.0);
            if s_max == 0.0 {
                0.0
            } else {
                // scaled to avoid overflow for large p
                let sum: f64 = sv.iter().map(|s| (s / s_max).powi(p as i32)).sum();
                s_max * sum.powf(1.0 / p as f64)
            }
        }
    })
}

/// Eigenvalues of a 2x2 matrix from its characteristic polynomial.
pub fn eigenvalues_2x2(a: &CMatrix) -> Result<[Complex64; 2]> {
    if a.shape() != (2, 2) {
        return Err(Error::DimensionMismatch {
            left: format!("{}x{}", a.rows, a.cols),
            right: "2x2".into(),
        });
    }
    let tr = a[(0, 0)] + a[(1, 1)];
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    let disc = (tr * tr - det * 4.0).sqrt();
    Ok([(tr + disc) * 0.5, (tr - disc) * 0.5])
}

/// Largest eigenvalue modulus of a 2x2 matrix.
pub fn spectral_radius_2x2(a: &CMatrix) -> Result<f64> {
    let [l1, l2] = eigenvalues_2x2(a)?;
    Ok(l1.norm().max(l2.norm()))
}

/// `|a| = sqrt(a^dagger a)`.
pub fn mat_abs(a: &CMatrix) -> Result<CMatrix> {
    a.ensure_square()?;
    let gram = (&a.adjoint() * a).hermitian_part();
    let eig = gram.hermitian_eigen()?;
    Ok(sqrt_spectrum(&eig))
}

/// `V sqrt(max(lambda, 0)) V^dagger`, with eigenvalues at round-off level
/// relative to the largest set to zero before the square root amplifies them.
fn sqrt_spectrum(eig: &HermitianEigen) -> CMatrix {
    let n = eig.eigenvalues.len() as f64;
    let largest = eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let floor = 4.0 * n * f64::EPSILON * largest;
    eig.map_eigenvalues(|l| if l <= floor { 0.0 } else { l.sqrt() })
}

/// Negative eigenvalues down to this threshold are treated as round-off.
pub const PSD_CLAMP: f64 = 1e-10;

/// Hermitian positive semidefinite square root.
pub fn mat_sqrt_psd(a: &CMatrix) -> Result<CMatrix> {
    a.ensure_square()?;
    let scale = a.max_abs().max(1.0);
    let defect = a.hermiticity_defect();
    if defect > 1e-10 * scale {
        return Err(Error::NotHermitian(defect));
    }
    let eig = a.hermitian_part().hermitian_eigen()?;
    let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min < -PSD_CLAMP {
        return Err(Error::NotPsd(min));
    }
    Ok(sqrt_spectrum(&eig))
}

/// Kronecker product.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    if rows > MAX_DIM || cols > MAX_DIM {
        return Err(Error::Capacity {
            dim: rows.max(cols),
            cap: MAX_DIM,
        });
    }
    let mut out = CMatrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let s = a[(ai, aj)];
            for bi in 0..b.rows {
                let dst = (ai * b.rows + bi) * cols + aj * b.cols;
                let src = &b.data[bi * b.cols..(bi + 1) * b.cols];
                for (d, z) in out.data[dst..dst + b.cols].iter_mut().zip(src) {
                    *d = s * z;
                }
            }
        }
    }
    Ok(out)
}

/// Number of qubits `n` with `2^n == dim`.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim.is_power_of_two() {
        Ok(dim.trailing_zeros() as usize)
    } else {
        Err(Error::NotPowerOfTwo(dim))
    }
}

/// Traces out the last `n - keep_first_k` qubit factors of an operator on
/// `n` qubits. Qubit 1 is the most significant index bit.
pub fn partial_trace(m: &CMatrix, keep_first_k: usize) -> Result<CMatrix> {
    let dim = m.ensure_square()?;
    let n = qubit_count(dim)?;
    if keep_first_k == 0 || keep_first_k >= n {
        return Err(Error::InvalidCut {
            cut: keep_first_k,
            max: n.saturating_sub(1),
        });
    }
    let kept = 1usize << keep_first_k;
    let traced = 1usize << (n - keep_first_k);
    let mut out = CMatrix::zeros(kept, kept);
    for i in 0..kept {
        for j in 0..kept {
            out[(i, j)] = (0..traced).map(|e| m[(i * traced + e, j * traced + e)]).sum();
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::sampling::SeededRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        a.shape() == b.shape() && (a - b).max_abs() <= tol
    }

    fn random_matrix(rng: &mut SeededRng, n: usize) -> CMatrix {
        let data = (0..n * n)
            .map(|_| c(rng.standard_normal(), rng.standard_normal()))
            .collect();
        CMatrix::from_vec(n, n, data)
    }

    pub(crate) fn coin_1() -> CMatrix {
        CMatrix::from_vec(
            2,
            2,
            vec![
                c(5.21295, -0.543424),
                c(-5.83373, -1.51207),
                c(-5.72507, 5.64286),
                c(0.264194, -5.36408),
            ],
        )
    }

    pub(crate) fn coin_2() -> CMatrix {
        CMatrix::from_vec(
            2,
            2,
            vec![
                c(-2.21604, -8.29818),
                c(2.29687, -9.22925),
                c(-7.10612, 4.25443),
                c(-8.19842, 6.03258),
            ],
        )
    }

    pub(crate) fn coin_3() -> CMatrix {
        CMatrix::from_vec(
            2,
            2,
            vec![
                c(9.80519, -7.0523),
                c(-7.72367, -6.40421),
                c(-0.227234, 7.87254),
                c(6.36604, 6.81784),
            ],
        )
    }

    #[test]
    fn op_norm_of_unitary_is_one() {
        let z = CMatrix::pauli_z();
        assert!((op_norm(&z, NormOrder::Infinity).unwrap() - 1.0).abs() < 1e-12);
        assert!((op_norm(&z, NormOrder::Schatten(1)).unwrap() - 2.0).abs() < 1e-12);
        assert!((op_norm(&z, NormOrder::Schatten(2)).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn op_norm_rejects_non_square() {
        assert!(matches!(
            op_norm(&CMatrix::zeros(2, 3), NormOrder::Infinity),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn worked_coin_distances() {
        // The printed distances for the worked evening are eigenvalue moduli;
        // the largest singular values are larger (numpy svd cross-check).
        let z = CMatrix::pauli_z();
        let d2 = &coin_2() - &z;
        let d3 = &coin_3() - &z;
        assert!((spectral_radius_2x2(&d2).unwrap() - 11.5984).abs() < 1e-3);
        assert!((spectral_radius_2x2(&d3).unwrap() - 15.3175).abs() < 1e-3);
        assert!((op_norm(&d2, NormOrder::Infinity).unwrap() - 17.73501).abs() < 1e-4);
        assert!((op_norm(&d3, NormOrder::Infinity).unwrap() - 19.19202).abs() < 1e-4);
    }

    #[test]
    fn mat_abs_examples() {
        let i2 = CMatrix::identity(2);
        assert!(close(&mat_abs(&i2).unwrap(), &i2, 1e-12));
        assert!(close(&mat_abs(&CMatrix::pauli_z()).unwrap(), &i2, 1e-12));
        let d = CMatrix::from_real_diag(&[3.0, -4.0]);
        assert!(close(&mat_abs(&d).unwrap(), &CMatrix::from_real_diag(&[3.0, 4.0]), 1e-12));
    }

    #[test]
    fn mat_sqrt_examples() {
        let i2 = CMatrix::identity(2);
        assert!(close(&mat_sqrt_psd(&i2).unwrap(), &i2, 1e-12));
        let d = CMatrix::from_real_diag(&[4.0, 9.0]);
        assert!(close(&mat_sqrt_psd(&d).unwrap(), &CMatrix::from_real_diag(&[2.0, 3.0]), 1e-12));
        let p = (&i2 + &CMatrix::pauli_x()).scale_real(0.5);
        assert!(close(&mat_sqrt_psd(&p).unwrap(), &p, 1e-10));
    }

    #[test]
    fn mat_sqrt_rejects_negative_and_non_hermitian() {
        assert!(matches!(
            mat_sqrt_psd(&CMatrix::from_real_diag(&[1.0, -1e-6])),
            Err(Error::NotPsd(_))
        ));
        // tiny negative round-off is clamped
        let s = mat_sqrt_psd(&CMatrix::from_real_diag(&[1.0, -1e-12])).unwrap();
        assert_eq!(s[(1, 1)], ZERO);
        let mut nh = CMatrix::identity(2);
        nh[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(mat_sqrt_psd(&nh), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn tensor_of_worked_coins_matches_printed_entries() {
        let t = tensor(&coin_1(), &coin_2()).unwrap();
        let printed_first_row = [
            c(-16.0615, -42.0538),
            c(6.95806, -49.3598),
            c(0.380344, 51.7601),
            c(-27.3546, 50.3679),
        ];
        let printed_last_row = [
            c(16.6759, -64.4557),
            c(12.8955, -80.7994),
            c(20.9437, 39.2418),
            c(30.1933, 45.5707),
        ];
        for j in 0..4 {
            assert!((t[(0, j)] - printed_first_row[j]).norm() < 1e-2);
            assert!((t[(3, j)] - printed_last_row[j]).norm() < 1e-2);
        }
    }

    #[test]
    fn tensor_examples() {
        let i2 = CMatrix::identity(2);
        assert_eq!(tensor(&i2, &i2).unwrap(), CMatrix::identity(4));
        let xx = tensor(&CMatrix::pauli_x(), &CMatrix::pauli_x()).unwrap();
        let ket00 = [ONE, ZERO, ZERO, ZERO];
        assert_eq!(xx.mul_vec(&ket00).unwrap(), vec![ZERO, ZERO, ZERO, ONE]);
    }

    #[test]
    fn tensor_capacity() {
        let big = CMatrix::identity(512);
        assert!(tensor(&big, &CMatrix::identity(2)).is_ok());
        assert!(matches!(
            tensor(&big, &CMatrix::identity(4)),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let mut rng = SeededRng::new(21);
        let rho = rng.sample_density_matrix().mat().clone();
        let sigma = random_matrix(&mut rng, 2);
        let prod = tensor(&rho, &sigma).unwrap();
        assert!(close(&partial_trace(&prod, 1).unwrap(), &rho.scale(sigma.trace()), 1e-12));

        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let epr = CMatrix::outer(&[h, ZERO, ZERO, h], &[h, ZERO, ZERO, h]);
        let half = CMatrix::identity(2).scale_real(0.5);
        assert!(close(&partial_trace(&epr, 1).unwrap(), &half, 1e-15));
        let mixed4 = CMatrix::identity(4).scale_real(0.25);
        assert!(close(&partial_trace(&mixed4, 1).unwrap(), &half, 1e-15));
    }

    #[test]
    fn partial_trace_matches_index_sum_oracle() {
        let mut rng = SeededRng::new(22);
        let m = random_matrix(&mut rng, 8);
        for k in 1..3 {
            let out = partial_trace(&m, k).unwrap();
            let kept = 1 << k;
            let traced = 8 / kept;
            for i in 0..kept {
                for j in 0..kept {
                    let mut s = ZERO;
                    for e in 0..traced {
                        s += m.data()[(i * traced + e) * 8 + j * traced + e];
                    }
                    assert!((out[(i, j)] - s).norm() < 1e-12);
                }
            }
            assert!((out.trace() - m.trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_errors() {
        assert!(matches!(
            partial_trace(&CMatrix::identity(6), 1),
            Err(Error::NotPowerOfTwo(6))
        ));
        assert!(matches!(
            partial_trace(&CMatrix::identity(4), 2),
            Err(Error::InvalidCut { .. })
        ));
        assert!(matches!(
            partial_trace(&CMatrix::identity(4), 0),
            Err(Error::InvalidCut { .. })
        ));
    }

    #[test]
    fn determinant_of_known_matrices() {
        assert!((CMatrix::pauli_y().determinant().unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        let d = CMatrix::from_real_diag(&[2.0, 3.0, 4.0]);
        assert!((d.determinant().unwrap() - c(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn uncertainty_relation_holds() {
        // |<[a,b]/2i>| <= sqrt(Var a) sqrt(Var b), expectations Tr(rho .)
        let mut rng = SeededRng::new(23);
        for dim in [2usize, 3, 4] {
            for _ in 0..200 {
                let a = random_matrix(&mut rng, dim).hermitian_part();
                let b = random_matrix(&mut rng, dim).hermitian_part();
                let g = random_matrix(&mut rng, dim);
                let mut rho = &g * &g.adjoint();
                let t = rho.trace();
                rho = rho.scale(t.inv());
                let ev = |m: &CMatrix| (&rho * m).trace();
                let comm = &(&a * &b) - &(&b * &a);
                let lhs = (ev(&comm) / (I * 2.0)).norm();
                let var = |m: &CMatrix| (ev(&(m * m)) - ev(m) * ev(m)).re.max(0.0);
                let rhs = var(&a).sqrt() * var(&b).sqrt();
                assert!(lhs <= rhs + 1e-10, "{lhs} > {rhs}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn schatten_norms_are_ordered(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
                let a = random_matrix(&mut SeededRng::new(seed), dim);
                let inf = op_norm(&a, NormOrder::Infinity).unwrap();
                let two = op_norm(&a, NormOrder::Schatten(2)).unwrap();
                let one = op_norm(&a, NormOrder::Schatten(1)).unwrap();
                prop_assert!(inf <= two * (1.0 + 1e-12));
                prop_assert!(two <= one * (1.0 + 1e-12));
                prop_assert!((two - a.frobenius_norm()).abs() <= 1e-10 * two.max(1.0));
            }

            #[test]
            fn abs_eigenvalues_are_singular_values(seed in any::<u64>(), dim in 1usize..6) {
                let a = random_matrix(&mut SeededRng::new(seed), dim);
                let abs = mat_abs(&a).unwrap();
                let mut eig = abs.hermitian_eigen().unwrap().eigenvalues;
                eig.reverse();
                let sv = a.singular_values();
                for (e, s) in eig.iter().zip(&sv) {
                    prop_assert!((e - s).abs() <= 1e-8 * s.max(1.0));
                }
                let sq = &abs * &abs;
                let gram = &a.adjoint() * &a;
                prop_assert!((&sq - &gram).max_abs() <= 1e-8 * gram.max_abs().max(1.0));
            }

            #[test]
            fn tensor_is_multiplicative_for_trace_gram(s1 in any::<u64>(), s2 in any::<u64>(), d1 in 1usize..5, d2 in 1usize..5) {
                let a = random_matrix(&mut SeededRng::new(s1), d1);
                let b = random_matrix(&mut SeededRng::new(s2), d2);
                let t = tensor(&a, &b).unwrap();
                prop_assert_eq!(t.shape(), (d1 * d2, d1 * d2));
                let lhs = (&t.adjoint() * &t).trace().re;
                let rhs = a.trace_gram() * b.trace_gram();
                prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs);
            }
        }
    }
}
