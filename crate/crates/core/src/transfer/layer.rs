use crate::transfer::state::StateSpace;

/// One admissible layer `z = t − s`: an `r×c` table with the layer's line sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerDiff {
    /// Row-major cell values.
    pub cells: Vec<u64>,
    /// `index(s + z) − index(s)` for any `s` with `s + z` in the space.
    pub offset: u64,
}

/// The 0/1 transfer relation `A_k` over a state space.
///
/// `(s, t)` is related iff `t − s` is entrywise nonnegative with row sums
/// `v_{i,+,k}` and column sums `v_{+,j,k}`. The relation is stored through its
/// difference layers: the successors of `s` are `s + z` for each stored `z`
/// with `s + z ≤ u`.
#[derive(Debug, Clone)]
pub struct LayerMatrix<'s> {
    space: &'s StateSpace,
    diffs: Vec<LayerDiff>,
}

/// All `r×c` tables `z ≤ cap` with the given row and column sums.
fn enumerate_layers(cap: &[u64], rows: usize, cols: usize, rowsums: &[u64], colsums: &[u64]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if rowsums.iter().sum::<u64>() != colsums.iter().sum::<u64>() {
        return out;
    }
    let mut z = vec![0u64; rows * cols];
    let mut rem_r = rowsums.to_vec();
    let mut rem_c = colsums.to_vec();

    fn go(
        pos: usize,
        cap: &[u64],
        cols: usize,
        z: &mut [u64],
        rem_r: &mut [u64],
        rem_c: &mut [u64],
        out: &mut Vec<Vec<u64>>,
    ) {
        if pos == z.len() {
            out.push(z.to_vec());
            return;
        }
        let rows = z.len() / cols;
        let (a, b) = (pos / cols, pos % cols);
        let mut lo = 0;
        let mut hi = cap[pos].min(rem_r[a]).min(rem_c[b]);
        if b + 1 == cols {
            lo = lo.max(rem_r[a]);
            hi = hi.min(rem_r[a]);
        }
        if a + 1 == rows {
            lo = lo.max(rem_c[b]);
            hi = hi.min(rem_c[b]);
        }
        for v in lo..=hi {
            rem_r[a] -= v;
            rem_c[b] -= v;
            z[pos] = v;
            // The rest of this row must still fit under the remaining caps.
            let row_room: u64 = (b + 1..cols).map(|bb| cap[a * cols + bb].min(rem_c[bb])).sum();
            if rem_r[a] <= row_room || b + 1 == cols {
                go(pos + 1, cap, cols, z, rem_r, rem_c, out);
            }
            rem_r[a] += v;
            rem_c[b] += v;
        }
        z[pos] = 0;
    }

    go(0, cap, cols, &mut z, &mut rem_r, &mut rem_c, &mut out);
    out
}

/// Builds `A_k` for a layer with row sums `rowsums` (length `r`) and column
/// sums `colsums` (length `c`). Unequal totals give the empty relation.
pub fn layer_matrix<'s>(ss: &'s StateSpace, rowsums: &[u64], colsums: &[u64]) -> LayerMatrix<'s> {
    let shape = ss.shape();
    assert_eq!(rowsums.len(), shape.rows(), "row sums must match the state shape");
    assert_eq!(colsums.len(), shape.cols(), "column sums must match the state shape");
    let diffs = enumerate_layers(shape.as_slice(), shape.rows(), shape.cols(), rowsums, colsums)
        .into_iter()
        .map(|cells| {
            let offset = cells.iter().zip(ss.strides()).map(|(&z, &s)| z * s).sum();
            LayerDiff { cells, offset }
        })
        .collect();
    LayerMatrix { space: ss, diffs }
}

impl<'s> LayerMatrix<'s> {
    pub fn space(&self) -> &'s StateSpace {
        self.space
    }

    pub fn diffs(&self) -> &[LayerDiff] {
        &self.diffs
    }

    /// Keeps only layers whose first cell lies in `lo..=hi`.
    pub fn restrict_first_cell(&self, lo: u64, hi: u64) -> Self {
        Self {
            space: self.space,
            diffs: self.diffs.iter().filter(|z| (lo..=hi).contains(&z.cells[0])).cloned().collect(),
        }
    }

    /// Successors of `s`, in layer-enumeration order.
    pub fn successors(&self, s: u64) -> Vec<u64> {
        let digits = self.space.digits(s);
        let shape = self.space.shape().as_slice();
        self.diffs
            .iter()
            .filter(|z| z.cells.iter().zip(&digits).zip(shape).all(|((&dz, &ds), &u)| ds + dz <= u))
            .map(|z| s + z.offset)
            .collect()
    }

    /// Predecessors of `t`.
    pub fn predecessors(&self, t: u64) -> Vec<u64> {
        let digits = self.space.digits(t);
        self.diffs
            .iter()
            .filter(|z| z.cells.iter().zip(&digits).all(|(&dz, &dt)| dz <= dt))
            .map(|z| t - z.offset)
            .collect()
    }

    pub fn contains(&self, s: u64, t: u64) -> bool {
        t >= s && self.successors(s).contains(&t)
    }

    /// Every related pair; only sensible for small spaces.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        (0..self.space.size()).flat_map(|s| self.successors(s).into_iter().map(move |t| (s, t))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::Matrix;
    use crate::transfer::state::build_state_space;

    fn space(rows: Vec<Vec<u64>>) -> StateSpace {
        build_state_space(&Matrix::from_rows(rows).unwrap(), 1 << 20).unwrap()
    }

    #[test]
    fn zero_layer_is_identity() {
        let ss = space(vec![vec![1, 2], vec![0, 1]]);
        let a = layer_matrix(&ss, &[0, 0], &[0, 0]);
        let pairs = a.pairs();
        assert_eq!(pairs.len() as u64, ss.size());
        assert!(pairs.iter().all(|&(s, t)| s == t));
    }

    #[test]
    fn single_cell_step() {
        let ss = space(vec![vec![1]]);
        assert_eq!(layer_matrix(&ss, &[1], &[1]).pairs(), vec![(0, 1)]);
    }

    #[test]
    fn two_permutation_layers_from_zero() {
        let ss = space(vec![vec![1, 1], vec![1, 1]]);
        let a = layer_matrix(&ss, &[1, 1], &[1, 1]);
        let succ = a.successors(0);
        assert_eq!(succ.len(), 2);
        let tables: Vec<_> = succ.iter().map(|&t| ss.table(t)).collect();
        assert!(tables.contains(&Matrix::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap()));
        assert!(tables.contains(&Matrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap()));
    }

    #[test]
    fn unequal_totals_give_empty_relation() {
        let ss = space(vec![vec![2, 2]]);
        assert!(layer_matrix(&ss, &[1], &[1, 1]).pairs().is_empty());
    }

    /// Relation membership by direct definition, for comparison.
    fn related(ss: &StateSpace, rowsums: &[u64], colsums: &[u64], s: u64, t: u64) -> bool {
        let (ds, dt) = (ss.digits(s), ss.digits(t));
        if ds.iter().zip(&dt).any(|(a, b)| a > b) {
            return false;
        }
        let cols = ss.shape().cols();
        let z: Vec<u64> = dt.iter().zip(&ds).map(|(b, a)| b - a).collect();
        let rows_ok = rowsums.iter().enumerate().all(|(a, &rs)| z[a * cols..(a + 1) * cols].iter().sum::<u64>() == rs);
        let cols_ok =
            colsums.iter().enumerate().all(|(b, &cs)| (0..rowsums.len()).map(|a| z[a * cols + b]).sum::<u64>() == cs);
        rows_ok && cols_ok
    }

    #[test]
    fn relation_matches_definition_and_is_monotone() {
        let ss = space(vec![vec![2, 1], vec![1, 2]]);
        for (rs, cs) in [([1u64, 2u64], [2u64, 1u64]), ([0, 1], [1, 0]), ([2, 2], [2, 2]), ([3, 0], [2, 1])] {
            let a = layer_matrix(&ss, &rs, &cs);
            for s in 0..ss.size() {
                for t in 0..ss.size() {
                    assert_eq!(a.contains(s, t), related(&ss, &rs, &cs, s, t), "s={s} t={t}");
                }
                let succ = a.successors(s);
                for &t in &succ {
                    assert!(a.predecessors(t).contains(&s));
                    let (ds, dt) = (ss.digits(s), ss.digits(t));
                    assert!(ds.iter().zip(&dt).all(|(x, y)| x <= y));
                }
            }
        }
    }
}
