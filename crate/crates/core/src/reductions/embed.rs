//! Embedding of 1-marginal and upper-bound constraints on `(r, c, h)` tables
//! into pure 2-marginal constraints on slim `(3, rc, r + c + h)` tables.
//!
//! Target indices: the first axis is `t ∈ {1, 2, 3}`; the second is the pair
//! `ij ↦ (i − 1)·c + j`; the third is split into segments `dom 1..h`,
//! `row 1..r`, `col 1..c`, in that order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tables::{dominated, has_marginals, Array3, Dims3, Entry, Matrix, OneMarginals, Table3, TwoMarginals};

/// Everything needed to lift source arrays into the embedded instance and
/// project them back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub source_dims: Dims3,
    pub target_dims: Dims3,
    /// `min(max_i u_{i,+,+}, max_j u_{+,j,+})`.
    pub u: u64,
    pub one_marginals: OneMarginals,
    pub upper_bounds: Table3,
    pub layout: Layout,
}

/// Offsets of the third-axis segments (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub dom_offset: usize,
    pub row_offset: usize,
    pub col_offset: usize,
}

impl Layout {
    fn for_source(d: Dims3) -> Self {
        Self { dom_offset: 0, row_offset: d.h, col_offset: d.h + d.r }
    }
}

impl EmbeddingSpec {
    /// 0-based pair index of source cell `(i, j)` (0-based).
    pub fn pair(&self, i: usize, j: usize) -> usize {
        i * self.source_dims.c + j
    }

    pub fn dom(&self, k: usize) -> usize {
        self.layout.dom_offset + k
    }

    pub fn row(&self, i: usize) -> usize {
        self.layout.row_offset + i
    }

    pub fn col(&self, j: usize) -> usize {
        self.layout.col_offset + j
    }

    /// Label of a 0-based third-axis index, e.g. `dom 2`.
    pub fn segment_label(&self, g: usize) -> String {
        let Dims3 { r, h, .. } = self.source_dims;
        if g < h {
            format!("dom {}", g + 1)
        } else if g < h + r {
            format!("row {}", g - h + 1)
        } else {
            format!("col {}", g - h - r + 1)
        }
    }

    /// Label of a 0-based pair index, e.g. `12`.
    pub fn pair_label(&self, pair: usize) -> String {
        let c = self.source_dims.c;
        format!("{}{}", pair / c + 1, pair % c + 1)
    }

    /// Rebuilds the embedded 2-marginals; also validates a deserialized spec.
    pub fn marginals(&self) -> Result<TwoMarginals> {
        let (m, spec) = embed_bounds(&self.one_marginals, &self.upper_bounds)?;
        if spec != *self {
            return Err(Error::MarginalViolation(
                "embedding spec does not match its own 1-marginals and bounds".into(),
            ));
        }
        Ok(m)
    }
}

/// Builds the slim 2-marginals whose nonnegative arrays are in affine
/// bijection with the nonnegative arrays having 1-marginals `u` and
/// dominated by `p`.
pub fn embed_bounds(u: &OneMarginals, p: &Table3) -> Result<(TwoMarginals, EmbeddingSpec)> {
    let src = u.dims();
    if p.dims() != src {
        return Err(Error::DimMismatch(format!("1-marginals {src} vs bounds {}", p.dims())));
    }
    u.common_total()?;
    let Dims3 { r, c, h } = src;
    let [_, _, p_layers] = p.line_sums();
    for (k, (&bound, &need)) in p_layers.iter().zip(u.layers()).enumerate() {
        if bound < need {
            return Err(Error::NegativeMarginal { layer: k + 1, bound, required: need });
        }
    }
    let big_u = u.rows().iter().copied().max().unwrap_or(0).min(u.cols().iter().copied().max().unwrap_or(0));
    let c_u = (c as u64).checked_mul(big_u).ok_or(Error::Overflow("c·U"))?;
    let r_u = (r as u64).checked_mul(big_u).ok_or(Error::Overflow("r·U"))?;
    assert!(u.rows().iter().all(|&x| x <= c_u), "c·U bounds every row marginal");
    assert!(u.cols().iter().all(|&x| x <= r_u), "r·U bounds every column marginal");

    let target = Dims3::new(3, r * c, r + c + h)?;
    let layout = Layout::for_source(src);
    let [p_pairs, _, _] = p.face_sums();

    // v_{t,ij,+}
    let ij = Matrix::from_fn(3, r * c, |t, pair| match t {
        1 => *p_pairs.get(pair / c, pair % c),
        _ => big_u,
    });

    // v_{t,+,gro k}
    let ik = Matrix::from_fn(3, r + c + h, |t, g| {
        if g < h {
            let k = g;
            [u.layers()[k], p_layers[k] - u.layers()[k], 0][t]
        } else if g < h + r {
            let i = g - h;
            [c_u - u.rows()[i], 0, u.rows()[i]][t]
        } else {
            let j = g - h - r;
            [0, u.cols()[j], r_u - u.cols()[j]][t]
        }
    });

    // v_{+,ij,gro k}
    let jk = Matrix::from_fn(r * c, r + c + h, |pair, g| {
        let (i, j) = (pair / c, pair % c);
        if g < h {
            *p.at(i, j, g)
        } else if g < h + r {
            if g - h == i {
                big_u
            } else {
                0
            }
        } else if g - h - r == j {
            big_u
        } else {
            0
        }
    });

    let m = TwoMarginals::new(target, ij, ik, jk)?;
    let spec = EmbeddingSpec {
        source_dims: src,
        target_dims: target,
        u: big_u,
        one_marginals: u.clone(),
        upper_bounds: p.clone(),
        layout,
    };
    Ok((m, spec))
}

/// Extends a source array (integral or rational) satisfying the 1-marginals
/// and bounds to the unique array with the embedded 2-marginals.
pub fn lift_embedded<T: Entry>(x: &Array3<T>, spec: &EmbeddingSpec) -> Result<Array3<T>> {
    let src = spec.source_dims;
    if x.dims() != src {
        return Err(Error::DimMismatch(format!("array {} vs source {src}", x.dims())));
    }
    let p = &spec.upper_bounds;
    if !dominated(x, p)? {
        let (i, j, k) = first_violation(x, p);
        return Err(Error::BoundViolation { i, j, k });
    }
    let [xi, xj, xk] = x.line_sums();
    let u = &spec.one_marginals;
    let wanted = [u.rows(), u.cols(), u.layers()];
    for (name, (have, want)) in ["row", "column", "layer"].iter().zip([&xi, &xj, &xk].iter().zip(wanted)) {
        if have.iter().zip(want).any(|(a, &b)| *a != T::from_u64(b)) {
            return Err(Error::MarginalViolation(format!("{name} 1-marginals differ")));
        }
    }
    let [pairs, _, _] = x.face_sums();
    let big_u = T::from_u64(spec.u);
    let Dims3 { r, c, h } = src;

    let mut y = Array3::zeros(spec.target_dims);
    for i in 0..r {
        for j in 0..c {
            let q = spec.pair(i, j);
            let s = pairs.get(i, j).clone();
            if s > big_u {
                return Err(Error::MarginalViolation(format!("x_({},{},+) exceeds U", i + 1, j + 1)));
            }
            for k in 0..h {
                let v = x.at(i, j, k).clone();
                *y.at_mut(1, q, spec.dom(k)) = T::from_u64(*p.at(i, j, k)) - v.clone();
                *y.at_mut(0, q, spec.dom(k)) = v;
            }
            *y.at_mut(0, q, spec.row(i)) = big_u.clone() - s.clone();
            *y.at_mut(2, q, spec.row(i)) = s.clone();
            *y.at_mut(1, q, spec.col(j)) = s.clone();
            *y.at_mut(2, q, spec.col(j)) = big_u.clone() - s;
        }
    }
    Ok(y)
}

/// Reads the source array back from the `(1, dom)` block, after checking
/// that `y` has the embedded 2-marginals.
pub fn project_embedded<T: Entry>(y: &Array3<T>, spec: &EmbeddingSpec) -> Result<Array3<T>> {
    let m = spec.marginals()?;
    if !has_marginals(y, &m)? {
        return Err(Error::MarginalViolation("array does not have the embedded 2-marginals".into()));
    }
    Ok(project_unchecked(y, spec))
}

pub(crate) fn project_unchecked<T: Entry>(y: &Array3<T>, spec: &EmbeddingSpec) -> Array3<T> {
    Array3::from_fn(spec.source_dims, |i, j, k| y.at(0, spec.pair(i, j), spec.dom(k)).clone())
        .expect("projection of a valid array is valid")
}

fn first_violation<T: Entry>(x: &Array3<T>, p: &Table3) -> (usize, usize, usize) {
    let Dims3 { r, c, h } = x.dims();
    for i in 0..r {
        for j in 0..c {
            for k in 0..h {
                if *x.at(i, j, k) > T::from_u64(*p.at(i, j, k)) {
                    return (i + 1, j + 1, k + 1);
                }
            }
        }
    }
    unreachable!("called only when a bound is violated")
}
