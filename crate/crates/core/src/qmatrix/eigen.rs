//! Cyclic Jacobi eigensolver for Hermitian matrices and one-sided Jacobi SVD.

use num_complex::Complex64;

use super::CMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// `a = V diag(eigenvalues) V^dagger`, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = Complex64::new(0.0, 0.0);
                for (k, &w) in fl.iter().enumerate() {
                    if w != 0.0 {
                        s += v[(i, k)] * v[(j, k)].conj() * w;
                    }
                }
                out[(i, j)] = s;
                out[(j, i)] = s.conj();
            }
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_eigenvalues(|l| l)
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let v = &self.eigenvectors;
        (0..v.rows()).map(|i| v[(i, k)]).collect()
    }
}

/// `m = U diag(singular_values) V^dagger` with `U: m x r`, `V: n x r`,
/// `r = min(m, n)`, singular values descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = CMatrix::zeros(m, n);
        for (k, &s) in self.singular_values.iter().enumerate() {
            for i in 0..m {
                let us = self.u[(i, k)] * s;
                for j in 0..n {
                    out[(i, j)] += us * self.v[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Unitary `U` acting on coordinates `p < q` that diagonalizes the Hermitian
/// 2x2 block `[[app, apq], [conj(apq), aqq]]` via `U^dagger B U`.
///
/// The off-diagonal phase is removed first, then a real symmetric Jacobi
/// rotation (smaller rotation angle) finishes the job.
fn jacobi_rotation(app: f64, aqq: f64, apq: Complex64) -> [Complex64; 4] {
    let g = apq.norm();
    let phase = apq / g;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();
    // [u_pp, u_pq, u_qp, u_qq]
    [
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        pc * (-s),
        pc * c,
    ]
}

fn rotate_columns(m: &mut CMatrix, p: usize, q: usize, u: &[Complex64; 4]) {
    for k in 0..m.rows() {
        let a = m[(k, p)];
        let b = m[(k, q)];
        m[(k, p)] = a * u[0] + b * u[2];
        m[(k, q)] = a * u[1] + b * u[3];
    }
}

fn rotate_rows_adjoint(m: &mut CMatrix, p: usize, q: usize, u: &[Complex64; 4]) {
    for k in 0..m.cols() {
        let a = m[(p, k)];
        let b = m[(q, k)];
        m[(p, k)] = u[0].conj() * a + u[2].conj() * b;
        m[(q, k)] = u[1].conj() * a + u[3].conj() * b;
    }
}

impl CMatrix {
    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    /// Only the upper triangle's Hermitian part matters; callers should pass
    /// Hermitian input.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        let n = self.ensure_square()?;
        let mut a = self.hermitian_part();
        let mut v = CMatrix::identity(n);
        let scale = a.frobenius_norm();
        if scale > 0.0 {
            for _ in 0..MAX_SWEEPS {
                let off: f64 = (0..n)
                    .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
                    .map(|(p, q)| a[(p, q)].norm_sqr())
                    .sum();
                if off.sqrt() <= 1e-15 * scale {
                    break;
                }
                for p in 0..n {
                    for q in p + 1..n {
                        let apq = a[(p, q)];
                        let diag = a[(p, p)].re.abs() + a[(q, q)].re.abs();
                        if apq.norm() <= f64::MIN_POSITIVE.max(1e-18 * diag) {
                            a[(p, q)] = Complex64::new(0.0, 0.0);
                            a[(q, p)] = Complex64::new(0.0, 0.0);
                            continue;
                        }
                        let u = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                        rotate_columns(&mut a, p, q, &u);
                        rotate_rows_adjoint(&mut a, p, q, &u);
                        a[(p, q)] = Complex64::new(0.0, 0.0);
                        a[(q, p)] = Complex64::new(0.0, 0.0);
                        a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                        a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                        rotate_columns(&mut v, p, q, &u);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
        let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
        let mut eigenvectors = CMatrix::zeros(n, n);
        for (new, &old) in order.iter().enumerate() {
            for i in 0..n {
                eigenvectors[(i, new)] = v[(i, old)];
            }
        }
        if eigenvectors.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("eigensolver received non-finite input".into()));
        }
        Ok(HermitianEigen {
            eigenvalues,
            eigenvectors,
        })
    }

    /// Singular value decomposition by one-sided (Hestenes) Jacobi rotations
    /// applied to the columns, which keeps small singular values accurate.
    pub fn svd(&self) -> Svd {
        if self.cols() > self.rows() {
            let t = self.adjoint().svd();
            return Svd {
                u: t.v,
                singular_values: t.singular_values,
                v: t.u,
            };
        }
        let (m, n) = self.shape();
        let mut w = self.clone();
        let mut v = CMatrix::identity(n);
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = Complex64::new(0.0, 0.0);
                    for k in 0..m {
                        let x = w[(k, p)];
                        let y = w[(k, q)];
                        alpha += x.norm_sqr();
                        beta += y.norm_sqr();
                        gamma += x.conj() * y;
                    }
                    if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let u = jacobi_rotation(alpha, beta, gamma);
                    rotate_columns(&mut w, p, q, &u);
                    rotate_columns(&mut v, p, q, &u);
                }
            }
            if !rotated {
                break;
            }
        }
        let norms: Vec<f64> = (0..n)
            .map(|j| (0..m).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

        let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut v_sorted = CMatrix::zeros(n, n);
        let mut singular_values = Vec::with_capacity(n);
        for (new, &old) in order.iter().enumerate() {
            let s = norms[old];
            singular_values.push(s);
            for i in 0..n {
                v_sorted[(i, new)] = v[(i, old)];
            }
            if s > 0.0 {
                // left vectors of tiny singular values carry round-off; a
                // Gram-Schmidt pass against the larger ones restores
                // orthogonality without changing the product noticeably
                let mut col: Vec<Complex64> = (0..m).map(|i| w[(i, old)] / s).collect();
                for _ in 0..2 {
                    for q in &u_cols {
                        let proj: Complex64 = q.iter().zip(&col).map(|(a, b)| a.conj() * b).sum();
                        for (x, qi) in col.iter_mut().zip(q) {
                            *x -= proj * qi;
                        }
                    }
                }
                let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm > 0.5 {
                    col.iter_mut().for_each(|x| *x /= norm);
                    u_cols.push(col);
                    continue;
                }
            }
            break;
        }
        complete_orthonormal(&mut u_cols, m, n);
        let mut u = CMatrix::zeros(m, n);
        for (j, col) in u_cols.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                u[(i, j)] = *z;
            }
        }
        Svd {
            u,
            singular_values,
            v: v_sorted,
        }
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.shape() == (2, 2) {
            return singular_values_2x2(self);
        }
        self.svd().singular_values
    }
}

/// Closed form for 2x2: `s^2 = (F +- sqrt(F^2 - 4|det|^2)) / 2`, `F = Tr(a^dagger a)`.
fn singular_values_2x2(a: &CMatrix) -> Vec<f64> {
    let f = a.trace_gram();
    let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm();
    let disc = ((f - 2.0 * det) * (f + 2.0 * det)).max(0.0).sqrt();
    let s1 = ((f + disc) / 2.0).sqrt();
    // det = s1 * s2 is better conditioned than the difference
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    vec![s1, s2]
}

/// Extends orthonormal columns in `cols` (length `m` each) to `target`
/// columns using standard basis vectors.
fn complete_orthonormal(cols: &mut Vec<Vec<Complex64>>, m: usize, target: usize) {
    let mut e = 0;
    while cols.len() < target && e < m {
        let mut cand = vec![Complex64::new(0.0, 0.0); m];
        cand[e] = Complex64::new(1.0, 0.0);
        e += 1;
        for _ in 0..2 {
            for q in cols.iter() {
                let proj: Complex64 = q.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
                for (x, qi) in cand.iter_mut().zip(q) {
                    *x -= proj * qi;
                }
            }
        }
        let norm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cand.iter_mut().for_each(|x| *x /= norm);
            cols.push(cand);
        }
    }
}
