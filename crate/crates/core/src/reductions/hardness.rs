use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reductions::embed::{embed_bounds, EmbeddingSpec};
use crate::tables::{Dims3, Matrix, OneMarginals, Table3, TwoMarginals};

/// 2-marginals for `(3, n², 3n)` tables that admit a table iff the binary
/// cube `p` contains a 3-dimensional matching.
pub fn reduce_3dm(p: &Table3) -> Result<(TwoMarginals, EmbeddingSpec)> {
    let Dims3 { r, c, h } = p.dims();
    if r != c || c != h {
        return Err(Error::DimMismatch(format!("3DM needs a cube, got {}", p.dims())));
    }
    if !p.is_binary() {
        return Err(Error::NotBinary("3DM bounds"));
    }
    embed_bounds(&OneMarginals::unit(r)?, p)
}

/// Output of [`permanent_marginals`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PermanentInstance {
    /// Marginals for `(2, n, n)` tables, as many as the permanent.
    Marginals(TwoMarginals),
    /// `A` has an empty row or column, so its permanent is 0.
    TriviallyInfeasible { zero_line: String },
}

impl PermanentInstance {
    pub fn marginals(&self) -> Option<&TwoMarginals> {
        match self {
            Self::Marginals(m) => Some(m),
            Self::TriviallyInfeasible { .. } => None,
        }
    }
}

/// 2-marginals whose tables are in bijection with the permutations counted
/// by `perm(A)`.
///
/// The first axis has size 2: layer 1 holds a permutation matrix inside `A`,
/// layer 2 the rest of `A`. Hence `v_{+,i,j} = A_{i,j}`, the layer-1 row and
/// column sums are 1 and the layer-2 ones are `A_{i,+} − 1` and `A_{+,j} − 1`.
pub fn permanent_marginals(a: &Matrix<u64>) -> Result<PermanentInstance> {
    let (rows, cols) = a.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if a.as_slice().iter().any(|&v| v > 1) {
        return Err(Error::NotBinary("permanent matrix"));
    }
    let n = rows;
    let row_sums = a.row_sums();
    let col_sums = a.col_sums();
    if let Some(i) = row_sums.iter().position(|&s| s == 0) {
        return Ok(PermanentInstance::TriviallyInfeasible { zero_line: format!("row {}", i + 1) });
    }
    if let Some(j) = col_sums.iter().position(|&s| s == 0) {
        return Ok(PermanentInstance::TriviallyInfeasible { zero_line: format!("column {}", j + 1) });
    }
    let dims = Dims3::new(2, n, n)?;
    let layer = |sums: &[u64]| Matrix::from_fn(2, n, |t, x| if t == 0 { 1 } else { sums[x] - 1 });
    let m = TwoMarginals::new(dims, layer(&row_sums), layer(&col_sums), a.clone())?;
    Ok(PermanentInstance::Marginals(m))
}
