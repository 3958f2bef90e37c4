use crate::error::{Error, Result};
use crate::tables::Matrix;

/// Every `r×c` 2-table dominated entrywise by the vertical marginal.
///
/// A state is stored as a mixed-radix index: cell `(i, j)` in row-major order
/// is digit number `i·c + j`, the first cell least significant, with radix
/// `v_{i,j,+} + 1`. Index 0 is the zero table and index `size − 1` is the
/// vertical marginal itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    shape: Matrix<u64>,
    strides: Vec<u64>,
    size: u64,
}

/// `Π (v + 1)` over the cells, saturating at `u128::MAX`.
pub fn state_count(vertical: &Matrix<u64>) -> u128 {
    vertical.as_slice().iter().try_fold(1u128, |acc, &v| acc.checked_mul(u128::from(v) + 1)).unwrap_or(u128::MAX)
}

/// Builds the state space for `vertical`, refusing more than `cap` states.
pub fn build_state_space(vertical: &Matrix<u64>, cap: u64) -> Result<StateSpace> {
    assert!(cap > 0, "state cap must be positive");
    let required = state_count(vertical);
    if required > u128::from(cap) {
        return Err(Error::CapExceeded { required, cap });
    }
    let mut strides = Vec::with_capacity(vertical.as_slice().len());
    let mut stride = 1u64;
    for &v in vertical.as_slice() {
        strides.push(stride);
        stride *= v + 1;
    }
    Ok(StateSpace { shape: vertical.clone(), strides, size: stride })
}

impl StateSpace {
    pub fn size(&self) -> u64 {
        self.size
    }

    /// The vertical marginal `u`.
    pub fn shape(&self) -> &Matrix<u64> {
        &self.shape
    }

    pub fn cells(&self) -> usize {
        self.strides.len()
    }

    pub(crate) fn strides(&self) -> &[u64] {
        &self.strides
    }

    /// Index of the zero table `l`.
    pub fn lower(&self) -> u64 {
        0
    }

    /// Index of the full table `u`.
    pub fn upper(&self) -> u64 {
        self.size - 1
    }

    /// Cell values of state `idx`, row-major.
    pub fn digits(&self, idx: u64) -> Vec<u64> {
        let mut out = vec![0; self.cells()];
        self.digits_into(idx, &mut out);
        out
    }

    pub(crate) fn digits_into(&self, mut idx: u64, out: &mut [u64]) {
        for (d, &v) in out.iter_mut().zip(self.shape.as_slice()) {
            *d = idx % (v + 1);
            idx /= v + 1;
        }
    }

    /// Index of a 2-table given row-major, or `None` if it is not dominated by `u`.
    pub fn index_of(&self, cells: &[u64]) -> Option<u64> {
        if cells.len() != self.cells() {
            return None;
        }
        let mut idx = 0;
        for ((&x, &v), &s) in cells.iter().zip(self.shape.as_slice()).zip(&self.strides) {
            if x > v {
                return None;
            }
            idx += x * s;
        }
        Some(idx)
    }

    pub fn table(&self, idx: u64) -> Matrix<u64> {
        let d = self.digits(idx);
        Matrix::from_fn(self.shape.rows(), self.shape.cols(), |a, b| d[a * self.shape.cols() + b])
    }
}
