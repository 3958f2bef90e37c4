//! Relabelings of a table's axes and indices.
//!
//! An [`AxisMap`] sends a cell with 0-based coordinates `x` of a table with
//! dims `source` to the cell `y` with `y[a] = perms[a][x[axes[a]]]`. New axis
//! `a` is old axis `axes[a]`, and `perms[a]` relabels indices along it.

use crate::error::{Error, Result};
use crate::tables::{Array3, Dims3, Entry, EntryIndex, Matrix, TwoMarginals};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AxisMap {
    source: Dims3,
    axes: [usize; 3],
    perms: [Vec<usize>; 3],
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !std::mem::replace(&mut seen[v], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (a, &b) in p.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

impl AxisMap {
    pub fn new(source: Dims3, axes: [usize; 3], perms: [Vec<usize>; 3]) -> Result<Self> {
        if !is_permutation(&axes) {
            return Err(Error::InvalidAxisMap(format!("{axes:?} is not a permutation of the axes")));
        }
        let sizes = source.sizes();
        for a in 0..3 {
            if perms[a].len() != sizes[axes[a]] || !is_permutation(&perms[a]) {
                return Err(Error::InvalidAxisMap(format!(
                    "index map for new axis {a} is not a permutation of 0..{}",
                    sizes[axes[a]]
                )));
            }
        }
        Ok(Self { source, axes, perms })
    }

    pub fn identity(source: Dims3) -> Self {
        Self::permute_axes(source, [0, 1, 2]).expect("identity is valid")
    }

    /// Pure axis permutation: new axis `a` is old axis `axes[a]`.
    pub fn permute_axes(source: Dims3, axes: [usize; 3]) -> Result<Self> {
        if !is_permutation(&axes) {
            return Err(Error::InvalidAxisMap(format!("{axes:?} is not a permutation of the axes")));
        }
        let sizes = source.sizes();
        let perms = axes.map(|a| (0..sizes[a]).collect());
        Self::new(source, axes, perms)
    }

    /// Swaps indices `a` and `b` (0-based) along `axis`.
    pub fn swap_indices(source: Dims3, axis: usize, a: usize, b: usize) -> Result<Self> {
        let mut m = Self::identity(source);
        let p = m.perms.get_mut(axis).ok_or_else(|| Error::InvalidAxisMap(format!("axis {axis} out of range")))?;
        if a >= p.len() || b >= p.len() {
            return Err(Error::InvalidAxisMap(format!("index out of range on axis {axis}")));
        }
        p.swap(a, b);
        Ok(m)
    }

    /// Index relabeling that moves entry `e` to `(1, 1, 1)`, keeping the axes.
    pub fn relocate(source: Dims3, e: EntryIndex) -> Result<Self> {
        e.check(source)?;
        let x = e.zero_based();
        let sizes = source.sizes();
        let perms = [0, 1, 2].map(|a| {
            let mut p: Vec<usize> = (0..sizes[a]).collect();
            p.swap(0, x[a]);
            p
        });
        Self::new(source, [0, 1, 2], perms)
    }

    pub fn source(&self) -> Dims3 {
        self.source
    }

    pub fn axes(&self) -> [usize; 3] {
        self.axes
    }

    pub fn target(&self) -> Dims3 {
        let s = self.source.sizes();
        Dims3::from_sizes(self.axes.map(|a| s[a])).expect("nonzero sizes")
    }

    pub fn map_cell(&self, x: [usize; 3]) -> [usize; 3] {
        [0, 1, 2].map(|a| self.perms[a][x[self.axes[a]]])
    }

    pub fn map_entry(&self, e: EntryIndex) -> Result<EntryIndex> {
        e.check(self.source)?;
        let y = self.map_cell(e.zero_based());
        Ok(EntryIndex::new(y[0] + 1, y[1] + 1, y[2] + 1))
    }

    pub fn inverse(&self) -> Self {
        let mut axes = [0; 3];
        let mut perms: [Vec<usize>; 3] = Default::default();
        for a in 0..3 {
            axes[self.axes[a]] = a;
            perms[self.axes[a]] = invert(&self.perms[a]);
        }
        Self { source: self.target(), axes, perms }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AxisMap) -> Result<Self> {
        if other.target() != self.source {
            return Err(Error::InvalidAxisMap(format!(
                "cannot compose: {} does not match {}",
                other.target(),
                self.source
            )));
        }
        let axes = [0, 1, 2].map(|q| other.axes[self.axes[q]]);
        let perms = [0, 1, 2].map(|q| {
            let inner = &other.perms[self.axes[q]];
            inner.iter().map(|&v| self.perms[q][v]).collect()
        });
        Ok(Self { source: other.source, axes, perms })
    }

    fn check_source(&self, dims: Dims3) -> Result<()> {
        if dims != self.source {
            return Err(Error::InvalidAxisMap(format!("map is for dims {}, input has {dims}", self.source)));
        }
        Ok(())
    }
}

/// Relabels a table.
pub fn remap_table<T: Entry>(t: &Array3<T>, a: &AxisMap) -> Result<Array3<T>> {
    a.check_source(t.dims())?;
    let inv = a.inverse();
    Array3::from_fn(a.target(), |i, j, k| {
        let x = inv.map_cell([i, j, k]);
        t.at(x[0], x[1], x[2]).clone()
    })
}

/// Marginals of the relabeled table, computed from the marginals alone.
pub fn remap(m: &TwoMarginals, a: &AxisMap) -> Result<TwoMarginals> {
    a.check_source(m.dims())?;
    let target = a.target();
    let ts = target.sizes();
    let inv = a.inverse();
    // Old coordinate along old axis axes[p] for new index y along new axis p.
    let old = |p: usize, y: usize| inv.perms[a.axes[p]][y];
    let face = |p: usize, q: usize| {
        Matrix::from_fn(ts[p], ts[q], |yp, yq| m.face(a.axes[p], a.axes[q], old(p, yp), old(q, yq)))
    };
    TwoMarginals::new(target, face(0, 1), face(0, 2), face(1, 2))
}
