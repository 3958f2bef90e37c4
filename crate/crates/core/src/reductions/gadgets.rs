//! Entry-security gadgets.
//!
//! Gadget A turns "does any table have these 2-marginals?" into "can entry
//! `(1,1,1)` be zero?" for an always-feasible instance. Gadget B turns 3DM
//! into "can one entry of an always-feasible slim instance reach `2n`?".

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reductions::embed::{embed_bounds, EmbeddingSpec};
use crate::tables::{check_consistency, marginals2_of, Dims3, EntryIndex, OneMarginals, Table3, TwoMarginals};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSpecA {
    pub source_dims: Dims3,
    pub target_dims: Dims3,
    /// Grand total `T` of the input marginals.
    pub total: u64,
    pub target: EntryIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSpecB {
    pub n: usize,
    pub target_dims: Dims3,
    pub target: EntryIndex,
    /// `2n`.
    pub target_value: u64,
    pub embedding: EmbeddingSpec,
}

fn consistent_total(m: &TwoMarginals) -> Result<u64> {
    let report = check_consistency(m);
    match (report.consistent, report.total) {
        (true, Some(t)) => Ok(t),
        _ => Err(Error::Inconsistent { violations: report.violations.len() }),
    }
}

/// The witness table of gadget A, of size `(r+1, c+1, h+1)`.
///
/// `R_{1,1,1} = T`, `R_{s,1,u} = v_{s−1,+,u−1}`, `R_{1,t,u} = v_{+,t−1,u−1}`,
/// `R_{s,t,1} = v_{s−1,t−1,+}` for `s, t, u ≥ 2`; everything else is 0.
pub fn canonical_gadget_table(m: &TwoMarginals) -> Result<Table3> {
    let total = consistent_total(m)?;
    let Dims3 { r, c, h } = m.dims();
    let dims = Dims3::new(r + 1, c + 1, h + 1)?;
    Table3::from_fn(dims, |s, t, u| match (s, t, u) {
        (0, 0, 0) => total,
        (s, 0, u) if s > 0 && u > 0 => *m.ik().get(s - 1, u - 1),
        (0, t, u) if t > 0 && u > 0 => *m.jk().get(t - 1, u - 1),
        (s, t, 0) if s > 0 && t > 0 => *m.ij().get(s - 1, t - 1),
        _ => 0,
    })
}

/// Always-feasible marginals on which `(1,1,1)` can be 0 iff `m` is feasible.
pub fn secure_zero_gadget(m: &TwoMarginals) -> Result<(TwoMarginals, GadgetSpecA)> {
    let table = canonical_gadget_table(m)?;
    let spec = GadgetSpecA {
        source_dims: m.dims(),
        target_dims: table.dims(),
        total: *table.at(0, 0, 0),
        target: EntryIndex::new(1, 1, 1),
    };
    Ok((marginals2_of(&table), spec))
}

/// The `(n+1)`-cube bounds and 1-marginals behind gadget B.
pub fn frechet_gadget_source(p: &Table3) -> Result<(OneMarginals, Table3)> {
    let Dims3 { r, c, h } = p.dims();
    if r != c || c != h {
        return Err(Error::DimMismatch(format!("gadget B needs a cube, got {}", p.dims())));
    }
    if !p.is_binary() {
        return Err(Error::NotBinary("gadget B bounds"));
    }
    let n = r;
    let two_n = 2 * n as u64;
    let dims = Dims3::new(n + 1, n + 1, n + 1)?;
    let bounds = Table3::from_fn(dims, |i, j, k| {
        let new = [i, j, k].iter().filter(|&&x| x == n).count();
        match new {
            0 => *p.at(i, j, k),
            1 => 0,
            2 => 1,
            _ => two_n,
        }
    })?;
    let mut ones = vec![1; n + 1];
    ones[n] = two_n;
    let u = OneMarginals::new(dims, ones.clone(), ones.clone(), ones)?;
    Ok((u, bounds))
}

/// The feasible "spoke" table: ones on the three lines through the corner,
/// corner 0.
pub fn spoke_table(n: usize) -> Result<Table3> {
    let dims = Dims3::new(n + 1, n + 1, n + 1)?;
    Table3::from_fn(dims, |i, j, k| u64::from([i, j, k].iter().filter(|&&x| x == n).count() == 2))
}

/// Always-feasible slim marginals whose target entry can reach `2n` iff `p`
/// contains a 3-dimensional matching.
pub fn secure_frechet_gadget(p: &Table3) -> Result<(TwoMarginals, GadgetSpecB)> {
    let (u, bounds) = frechet_gadget_source(p)?;
    let n = p.dims().r;
    let (m, embedding) = embed_bounds(&u, &bounds)?;
    let q = embedding.pair(n, n);
    let g = embedding.dom(n);
    let spec = GadgetSpecB {
        n,
        target_dims: m.dims(),
        target: EntryIndex::new(1, q + 1, g + 1),
        target_value: 2 * n as u64,
        embedding,
    };
    Ok((m, spec))
}
