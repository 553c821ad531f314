//! Seeded random generation of every stochastic input.
//!
//! The generator is pinned so that streams are reproducible across runs and
//! portable to other implementations:
//!
//! - core generator: xoshiro256** seeded from a `u64` through SplitMix64;
//! - sub-stream derivation: `derive_seed(seed, label) = splitmix64(seed ^ splitmix64(label))`;
//! - uniform `[0, 1)`: the top 53 bits of `next_u64` times `2^-53`;
//! - fair bit: the top bit of `next_u64`;
//! - standard normal: Box–Muller on two uniforms `u1, u2`,
//!   `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`, one normal per two uniforms.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::error::{Error, Result};
use crate::qmatrix::CMatrix;
use crate::qmetrics::{DensityMatrix, PureState};
use crate::sequences::Bit;

/// SplitMix64 output function applied to a single 64-bit input.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the sub-stream `label` of the stream seeded with `seed`.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    splitmix64(seed ^ splitmix64(label))
}

#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: Xoshiro256StarStar,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// An independent generator for sub-stream `label` (trial index,
    /// sampler role, ...). Does not advance `self`.
    pub fn derive(&self, label: u64) -> SeededRng {
        SeededRng::new(derive_seed(self.seed, label))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos()
    }

    fn complex_normal(&mut self) -> Complex64 {
        let re = self.standard_normal();
        let im = self.standard_normal();
        Complex64::new(re, im)
    }

    pub fn sample_cbit(&mut self) -> Bit {
        Bit::from(self.next_u64() >> 63 == 1)
    }

    /// Haar-random qubit state: two complex standard normals, normalized.
    pub fn sample_pure_state(&mut self) -> PureState {
        loop {
            let a = self.complex_normal();
            let b = self.complex_normal();
            let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if norm > 1e-300 {
                return PureState::from_normalized_unchecked(vec![a / norm, b / norm]);
            }
        }
    }

    /// Haar-random state on `dim` amplitudes.
    pub fn sample_pure_state_dim(&mut self, dim: usize) -> PureState {
        loop {
            let amps: Vec<Complex64> = (0..dim).map(|_| self.complex_normal()).collect();
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-300 {
                return PureState::from_normalized_unchecked(
                    amps.into_iter().map(|z| z / norm).collect(),
                );
            }
        }
    }

    /// Uniform point on the unit sphere (three normals, normalized).
    pub fn sample_direction(&mut self) -> [f64; 3] {
        loop {
            let v = [
                self.standard_normal(),
                self.standard_normal(),
                self.standard_normal(),
            ];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 1e-300 {
                return [v[0] / n, v[1] / n, v[2] / n];
            }
        }
    }

    /// Uniform point in the solid unit ball: uniform direction, radius the
    /// cube root of a uniform variate.
    pub fn sample_ball_point(&mut self) -> [f64; 3] {
        let d = self.sample_direction();
        let r = self.uniform().cbrt();
        [r * d[0], r * d[1], r * d[2]]
    }

    /// Qubit density matrix whose Bloch vector is uniform in the ball.
    pub fn sample_density_matrix(&mut self) -> DensityMatrix {
        DensityMatrix::from_bloch_unchecked(self.sample_ball_point())
    }

    /// 2x2 matrix whose entries have independent real and imaginary parts
    /// uniform on `[-edge/2, edge/2]`.
    pub fn sample_algebraic_coin(&mut self, edge: f64) -> Result<CMatrix> {
        if !(edge > 0.0 && edge.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coin edge must be positive, got {edge}"
            )));
        }
        let mut entries = Vec::with_capacity(4);
        for _ in 0..4 {
            let re = (self.uniform() - 0.5) * edge;
            let im = (self.uniform() - 0.5) * edge;
            entries.push(Complex64::new(re, im));
        }
        Ok(CMatrix::from_vec(2, 2, entries))
    }

    /// Haar-random unitary: Gram–Schmidt on the columns of a complex
    /// Gaussian matrix.
    pub fn sample_unitary(&mut self, dim: usize) -> Result<CMatrix> {
        if dim == 0 {
            return Err(Error::InvalidParameter("unitary dimension must be positive".into()));
        }
        loop {
            let data: Vec<Complex64> = (0..dim * dim).map(|_| self.complex_normal()).collect();
            let g = CMatrix::from_vec(dim, dim, data);
            if let Some(q) = g.orthonormalize_columns(1e-12) {
                return Ok(q);
            }
        }
    }
}
