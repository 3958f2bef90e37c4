//! Brute-force ground truth used to validate the engines and reductions.
//!
//! Nothing here shares code with [`crate::transfer`]; the two are compared
//! against each other in the test suites.

mod enumerate;
mod permanent;

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::tables::{frechet_upper, real_satisfies, EntryIndex, OneMarginals, RealTable3, Table3, TwoMarginals};

use enumerate::{for_each_bounded_table, for_each_table, Budget, CellRange};
pub use permanent::{permanent_by_permutations, permanent_by_ryser, ryser_permanent};

/// Caps on a single oracle call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumLimits {
    /// Most tables a counting or listing call may visit.
    pub max_tables: u64,
    /// Most search nodes across the whole call.
    pub max_nodes: u64,
}

impl Default for EnumLimits {
    fn default() -> Self {
        Self { max_tables: 10_000_000, max_nodes: 10_000_000 }
    }
}

impl EnumLimits {
    pub fn new(max_tables: u64, max_nodes: u64) -> Self {
        assert!(max_tables > 0 && max_nodes > 0, "limits must be positive");
        Self { max_tables, max_nodes }
    }

    pub fn with_nodes(max_nodes: u64) -> Self {
        Self::new(max_nodes, max_nodes)
    }
}

fn counting_visitor(count: &mut u64, max: u64) -> impl FnMut(&[u64]) -> ControlFlow<()> + '_ {
    move |_| {
        *count += 1;
        if *count > max {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }
}

/// Number of tables with 2-marginals `m`.
pub fn brute_count(m: &TwoMarginals, lim: EnumLimits) -> Result<BigUint> {
    let mut budget = Budget::new(lim);
    let mut count = 0u64;
    let flow = for_each_table(m, None, &mut budget, &mut counting_visitor(&mut count, lim.max_tables))?;
    if flow.is_break() {
        return Err(Error::LimitExceeded { nodes: count });
    }
    Ok(BigUint::from(count))
}

/// Whether some table has 2-marginals `m`; stops at the first witness.
pub fn brute_exists(m: &TwoMarginals, lim: EnumLimits) -> Result<bool> {
    let mut budget = Budget::new(lim);
    Ok(for_each_table(m, None, &mut budget, &mut |_| ControlFlow::Break(()))?.is_break())
}

/// First table found with 2-marginals `m`, if any.
pub fn brute_witness(m: &TwoMarginals, lim: EnumLimits) -> Result<Option<Table3>> {
    let mut budget = Budget::new(lim);
    let mut found = None;
    let _ = for_each_table(m, None, &mut budget, &mut |cells| {
        found = Some(cells.to_vec());
        ControlFlow::Break(())
    })?;
    found.map(|cells| Table3::new(m.dims(), cells)).transpose()
}

/// Every table with 2-marginals `m`, in enumeration order.
pub fn brute_tables(m: &TwoMarginals, lim: EnumLimits) -> Result<Vec<Table3>> {
    let mut budget = Budget::new(lim);
    let mut out = Vec::new();
    let flow = for_each_table(m, None, &mut budget, &mut |cells| {
        out.push(cells.to_vec());
        if out.len() as u64 > lim.max_tables {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if flow.is_break() {
        return Err(Error::LimitExceeded { nodes: out.len() as u64 });
    }
    out.into_iter().map(|c| Table3::new(m.dims(), c)).collect()
}

/// Whether some table with 2-marginals `m` has `t[e] = value`.
pub fn brute_entry_attains(m: &TwoMarginals, e: EntryIndex, value: u64, lim: EnumLimits) -> Result<bool> {
    e.check(m.dims())?;
    let mut budget = Budget::new(lim);
    let restrict = CellRange { cell: e.zero_based(), lo: value, hi: value };
    Ok(for_each_table(m, Some(restrict), &mut budget, &mut |_| ControlFlow::Break(()))?.is_break())
}

/// `{ t[e] : t has 2-marginals m }`, one early-exit search per candidate
/// value in `0..=frechet_upper`. The node budget is shared by all searches.
pub fn brute_entry_set(m: &TwoMarginals, e: EntryIndex, lim: EnumLimits) -> Result<BTreeSet<u64>> {
    let upper = frechet_upper(m, e)?;
    let mut budget = Budget::new(lim);
    let mut set = BTreeSet::new();
    for value in 0..=upper {
        let restrict = CellRange { cell: e.zero_based(), lo: value, hi: value };
        if for_each_table(m, Some(restrict), &mut budget, &mut |_| ControlFlow::Break(()))?.is_break() {
            set.insert(value);
        }
    }
    Ok(set)
}

/// Number of tables with 1-marginals `u` that are dominated by `p`.
pub fn brute_count_bounded(u: &OneMarginals, p: &Table3, lim: EnumLimits) -> Result<BigUint> {
    let mut budget = Budget::new(lim);
    let mut count = 0u64;
    let flow = for_each_bounded_table(u, p, &mut budget, &mut counting_visitor(&mut count, lim.max_tables))?;
    if flow.is_break() {
        return Err(Error::LimitExceeded { nodes: count });
    }
    Ok(BigUint::from(count))
}

/// Every table with 1-marginals `u` dominated by `p`.
pub fn brute_bounded_tables(u: &OneMarginals, p: &Table3, lim: EnumLimits) -> Result<Vec<Table3>> {
    let mut budget = Budget::new(lim);
    let mut out = Vec::new();
    let flow = for_each_bounded_table(u, p, &mut budget, &mut |cells| {
        out.push(cells.to_vec());
        if out.len() as u64 > lim.max_tables {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    if flow.is_break() {
        return Err(Error::LimitExceeded { nodes: out.len() as u64 });
    }
    out.into_iter().map(|c| Table3::new(u.dims(), c)).collect()
}

/// 3-dimensional matching on a 0/1 cube `p`: is there a table with all
/// 1-marginals 1 dominated by `p`? Backtracks over layers, choosing an unused
/// row and column for each.
pub fn brute_3dm(p: &Table3) -> Result<bool> {
    let dims = p.dims();
    if dims.r != dims.c || dims.c != dims.h {
        return Err(Error::Shape { what: "matching cube", expected: "(n, n, n)".into(), found: dims.to_string() });
    }
    if !p.is_binary() {
        return Err(Error::NotBinary("matching cube"));
    }
    fn place(p: &Table3, k: usize, rows: &mut [bool], cols: &mut [bool]) -> bool {
        let n = rows.len();
        if k == n {
            return true;
        }
        for i in 0..n {
            if rows[i] {
                continue;
            }
            for j in 0..n {
                if cols[j] || *p.at(i, j, k) == 0 {
                    continue;
                }
                rows[i] = true;
                cols[j] = true;
                let done = place(p, k + 1, rows, cols);
                rows[i] = false;
                cols[j] = false;
                if done {
                    return true;
                }
            }
        }
        false
    }
    let n = dims.r;
    Ok(place(p, 0, &mut vec![false; n], &mut vec![false; n]))
}

/// Whether the exact rational array `x` has 2-marginals `m`.
pub fn brute_real_halfint_check(m: &TwoMarginals, x: &RealTable3) -> Result<bool> {
    real_satisfies(x, m)
}
