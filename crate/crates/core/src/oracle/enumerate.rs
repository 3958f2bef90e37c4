//! Depth-first table enumeration with running-sum pruning.
//!
//! Cells are filled layer by layer (`k` outermost), row-major within a layer.
//! The last cell of every line is forced to the remaining line sum, so each
//! leaf reached is a table meeting the constraints exactly.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::oracle::EnumLimits;
use crate::tables::{Dims3, OneMarginals, Table3, TwoMarginals};

pub(crate) struct Budget {
    nodes: u64,
    max_nodes: u64,
}

impl Budget {
    pub(crate) fn new(lim: EnumLimits) -> Self {
        Self { nodes: 0, max_nodes: lim.max_nodes }
    }

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            Err(Error::LimitExceeded { nodes: self.nodes })
        } else {
            Ok(())
        }
    }
}

fn fill_order(dims: Dims3) -> Vec<[usize; 3]> {
    let mut order = Vec::with_capacity(dims.cells());
    for k in 0..dims.h {
        for i in 0..dims.r {
            for j in 0..dims.c {
                order.push([i, j, k]);
            }
        }
    }
    order
}

/// Optional restriction `lo <= t[cell] <= hi` on one 0-based cell.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CellRange {
    pub cell: [usize; 3],
    pub lo: u64,
    pub hi: u64,
}

struct MarginalSearch<'b> {
    dims: Dims3,
    order: Vec<[usize; 3]>,
    rem_ij: Vec<u64>,
    rem_ik: Vec<u64>,
    rem_jk: Vec<u64>,
    cells: Vec<u64>,
    restrict: Option<CellRange>,
    budget: &'b mut Budget,
}

impl MarginalSearch<'_> {
    fn ij(&self, i: usize, j: usize) -> usize {
        i * self.dims.c + j
    }
    fn ik(&self, i: usize, k: usize) -> usize {
        i * self.dims.h + k
    }
    fn jk(&self, j: usize, k: usize) -> usize {
        j * self.dims.h + k
    }

    /// Every line through `(i, j, k)` that is still open can absorb its remainder.
    fn open_lines_fit(&self, i: usize, j: usize, k: usize) -> bool {
        let Dims3 { r, c, h } = self.dims;
        if j + 1 < c {
            let cap: u64 = (j + 1..c).map(|jj| self.rem_ij[self.ij(i, jj)].min(self.rem_jk[self.jk(jj, k)])).sum();
            if self.rem_ik[self.ik(i, k)] > cap {
                return false;
            }
        }
        if i + 1 < r {
            let cap: u64 = (i + 1..r).map(|ii| self.rem_ij[self.ij(ii, j)].min(self.rem_ik[self.ik(ii, k)])).sum();
            if self.rem_jk[self.jk(j, k)] > cap {
                return false;
            }
        }
        if k + 1 < h {
            let cap: u64 = (k + 1..h).map(|kk| self.rem_ik[self.ik(i, kk)].min(self.rem_jk[self.jk(j, kk)])).sum();
            if self.rem_ij[self.ij(i, j)] > cap {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self, pos: usize, visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>) -> Result<ControlFlow<()>> {
        self.budget.tick()?;
        if pos == self.order.len() {
            return Ok(visit(&self.cells));
        }
        let [i, j, k] = self.order[pos];
        let Dims3 { r, c, h } = self.dims;
        let (a, b, d) = (self.ij(i, j), self.ik(i, k), self.jk(j, k));
        let (ra, rb, rd) = (self.rem_ij[a], self.rem_ik[b], self.rem_jk[d]);
        let mut lo = 0;
        let mut hi = ra.min(rb).min(rd);
        for (last, rem) in [(k + 1 == h, ra), (j + 1 == c, rb), (i + 1 == r, rd)] {
            if last {
                lo = lo.max(rem);
                hi = hi.min(rem);
            }
        }
        if let Some(rg) = self.restrict.filter(|rg| rg.cell == [i, j, k]) {
            lo = lo.max(rg.lo);
            hi = hi.min(rg.hi);
        }
        let offset = self.dims.offset(i, j, k);
        let mut v = lo;
        while v <= hi {
            self.rem_ij[a] = ra - v;
            self.rem_ik[b] = rb - v;
            self.rem_jk[d] = rd - v;
            self.cells[offset] = v;
            if self.open_lines_fit(i, j, k) && self.dfs(pos + 1, visit)?.is_break() {
                self.rem_ij[a] = ra;
                self.rem_ik[b] = rb;
                self.rem_jk[d] = rd;
                self.cells[offset] = 0;
                return Ok(ControlFlow::Break(()));
            }
            v += 1;
        }
        self.rem_ij[a] = ra;
        self.rem_ik[b] = rb;
        self.rem_jk[d] = rd;
        self.cells[offset] = 0;
        Ok(ControlFlow::Continue(()))
    }
}

/// Visits every table with 2-marginals `m` (and the optional cell range).
/// Returns `Break` if the visitor stopped early.
pub(crate) fn for_each_table(
    m: &TwoMarginals,
    restrict: Option<CellRange>,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    let dims = m.dims();
    let mut s = MarginalSearch {
        dims,
        order: fill_order(dims),
        rem_ij: m.ij().as_slice().to_vec(),
        rem_ik: m.ik().as_slice().to_vec(),
        rem_jk: m.jk().as_slice().to_vec(),
        cells: vec![0; dims.cells()],
        restrict,
        budget,
    };
    s.dfs(0, visit)
}

struct BoundedSearch<'b> {
    dims: Dims3,
    order: Vec<[usize; 3]>,
    bounds: Vec<u64>,
    rem_i: Vec<u64>,
    rem_j: Vec<u64>,
    rem_k: Vec<u64>,
    cells: Vec<u64>,
    budget: &'b mut Budget,
}

impl BoundedSearch<'_> {
    fn dfs(&mut self, pos: usize, visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>) -> Result<ControlFlow<()>> {
        self.budget.tick()?;
        if pos == self.order.len() {
            return Ok(visit(&self.cells));
        }
        let [i, j, k] = self.order[pos];
        let Dims3 { r, c, h } = self.dims;
        let offset = self.dims.offset(i, j, k);
        let (ri, rj, rk) = (self.rem_i[i], self.rem_j[j], self.rem_k[k]);
        let mut lo = 0;
        let mut hi = self.bounds[offset].min(ri).min(rj).min(rk);
        let last_k = k + 1 == h;
        for (last, rem) in [(last_k && j + 1 == c, ri), (last_k && i + 1 == r, rj), (i + 1 == r && j + 1 == c, rk)] {
            if last {
                lo = lo.max(rem);
                hi = hi.min(rem);
            }
        }
        let mut v = lo;
        while v <= hi {
            self.rem_i[i] = ri - v;
            self.rem_j[j] = rj - v;
            self.rem_k[k] = rk - v;
            self.cells[offset] = v;
            if self.dfs(pos + 1, visit)?.is_break() {
                self.rem_i[i] = ri;
                self.rem_j[j] = rj;
                self.rem_k[k] = rk;
                self.cells[offset] = 0;
                return Ok(ControlFlow::Break(()));
            }
            v += 1;
        }
        self.rem_i[i] = ri;
        self.rem_j[j] = rj;
        self.rem_k[k] = rk;
        self.cells[offset] = 0;
        Ok(ControlFlow::Continue(()))
    }
}

/// Visits every table with 1-marginals `u` dominated by `p`.
pub(crate) fn for_each_bounded_table(
    u: &OneMarginals,
    p: &Table3,
    budget: &mut Budget,
    visit: &mut dyn FnMut(&[u64]) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    let dims = u.dims();
    if p.dims() != dims {
        return Err(Error::DimMismatch(format!("1-marginals {dims} vs bounds {}", p.dims())));
    }
    let mut s = BoundedSearch {
        dims,
        order: fill_order(dims),
        bounds: p.as_slice().to_vec(),
        rem_i: u.rows().to_vec(),
        rem_j: u.cols().to_vec(),
        rem_k: u.layers().to_vec(),
        cells: vec![0; dims.cells()],
        budget,
    };
    s.dfs(0, visit)
}
