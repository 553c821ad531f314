use super::{op_norm, tensor, CMatrix, NormOrder};
use crate::error::{Error, Result};

/// Default number of factors kept as an explicit dense matrix (2^10 x 2^10).
pub const DENSE_CAP: usize = 10;

/// The tensor-product history `a_1 (x) ... (x) a_n` of 2x2 coins.
///
/// The dense product is kept only while `n <= dense_cap`; past that the
/// prefix carries multiplicative functionals only, in log domain so that
/// thousands of factors neither overflow nor grow memory:
///
/// - `Tr((a_1 (x) ... (x) a_n)^dagger (a_1 (x) ... (x) a_n)) = prod Tr(a_i^dagger a_i)`
/// - `||a_1 (x) ... (x) a_n|| = prod ||a_i||` (operator norm)
#[derive(Clone, Debug)]
pub struct QuantumPrefix {
    len: usize,
    dense_cap: usize,
    dense: Option<CMatrix>,
    log_trace_gram: f64,
    log_norm_product: f64,
}

impl Default for QuantumPrefix {
    fn default() -> Self {
        Self::new()
    }
}

impl QuantumPrefix {
    pub fn new() -> Self {
        Self::with_dense_cap(DENSE_CAP)
    }

    /// `dense_cap` is clamped to [`DENSE_CAP`].
    pub fn with_dense_cap(dense_cap: usize) -> Self {
        Self {
            len: 0,
            dense_cap: dense_cap.min(DENSE_CAP),
            dense: Some(CMatrix::identity(1)),
            log_trace_gram: 0.0,
            log_norm_product: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dense_cap(&self) -> usize {
        self.dense_cap
    }

    /// The explicit product, while the prefix is within the dense cap.
    pub fn dense(&self) -> Option<&CMatrix> {
        self.dense.as_ref()
    }

    /// Heap bytes held by the dense product (zero past the cap).
    pub fn dense_heap_bytes(&self) -> usize {
        self.dense
            .as_ref()
            .map_or(0, |m| std::mem::size_of_val(m.data()))
    }

    /// `ln Tr(A^dagger A)` for the whole prefix; `-inf` once any factor is zero.
    pub fn log_trace_gram(&self) -> f64 {
        self.log_trace_gram
    }

    /// `Tr(A^dagger A)`; overflows to `inf` for long prefixes, use
    /// [`Self::log_trace_gram`] for comparisons.
    pub fn trace_gram(&self) -> f64 {
        self.log_trace_gram.exp()
    }

    pub fn log_operator_norm(&self) -> f64 {
        self.log_norm_product
    }

    pub fn has_zero_factor(&self) -> bool {
        self.log_trace_gram == f64::NEG_INFINITY
    }

    pub fn extend(&mut self, a: &CMatrix) -> Result<()> {
        if a.shape() != (2, 2) {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", a.rows(), a.cols()),
                right: "2x2".into(),
            });
        }
        self.len += 1;
        self.dense = match self.dense.take() {
            Some(d) if self.len <= self.dense_cap => Some(tensor(&d, a)?),
            _ => None,
        };
        self.log_trace_gram += a.trace_gram().ln();
        self.log_norm_product += op_norm(a, NormOrder::Infinity)?.ln();
        Ok(())
    }

    pub fn extended(mut self, a: &CMatrix) -> Result<Self> {
        self.extend(a)?;
        Ok(self)
    }
}
