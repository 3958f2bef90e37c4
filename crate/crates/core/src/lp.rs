//! Exact feasibility of the real relaxation.
//!
//! A [`RationalSystem`] is `A x = b, x ≥ 0` with rational data. [`lp_feasible`]
//! runs phase I of the simplex method over `BigRational` with Bland's rule,
//! so the verdict involves no rounding and no cycling.

#[cfg(debug_assertions)]
use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::tables::{Dims3, OneMarginals, RealTable3, Table3, TwoMarginals};

/// One equation `Σ coeff · x_var = rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRow {
    pub terms: Vec<(usize, BigRational)>,
    pub rhs: BigRational,
    pub label: String,
}

/// `A x = b, x ≥ 0`. The first `dims.cells()` variables are the table cells in
/// row-major `(i, j, k)` order; any further variables are slacks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSystem {
    pub dims: Dims3,
    pub num_vars: usize,
    pub rows: Vec<LinearRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub verdict: Verdict,
    /// The table part of a feasible point.
    pub witness: Option<RealTable3>,
    pub pivots: usize,
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn unit_row(vars: impl IntoIterator<Item = usize>, rhs: u64, label: String) -> LinearRow {
    LinearRow { terms: vars.into_iter().map(|v| (v, BigRational::one())).collect(), rhs: int(rhs), label }
}

/// One row per 2-marginal equation: `rc + rh + ch` rows over `rch` variables.
pub fn transportation_system(m: &TwoMarginals) -> RationalSystem {
    let dims = m.dims();
    let Dims3 { r, c, h } = dims;
    let mut rows = Vec::with_capacity(r * c + r * h + c * h);
    for i in 0..r {
        for j in 0..c {
            let vars = (0..h).map(|k| dims.offset(i, j, k));
            rows.push(unit_row(vars, *m.ij().get(i, j), format!("v({},{},+)", i + 1, j + 1)));
        }
    }
    for i in 0..r {
        for k in 0..h {
            let vars = (0..c).map(|j| dims.offset(i, j, k));
            rows.push(unit_row(vars, *m.ik().get(i, k), format!("v({},+,{})", i + 1, k + 1)));
        }
    }
    for j in 0..c {
        for k in 0..h {
            let vars = (0..r).map(|i| dims.offset(i, j, k));
            rows.push(unit_row(vars, *m.jk().get(j, k), format!("v(+,{},{})", j + 1, k + 1)));
        }
    }
    RationalSystem { dims, num_vars: dims.cells(), rows }
}

/// 1-marginal rows, then `x + s = p` for every cell with a slack `s`.
pub fn bounded_system(u: &OneMarginals, p: &Table3) -> RationalSystem {
    let dims = u.dims();
    assert_eq!(dims, p.dims(), "bounds and 1-marginals must share dims");
    let Dims3 { r, c, h } = dims;
    let cells = dims.cells();
    let mut rows = Vec::with_capacity(r + c + h + cells);
    let all = |f: &dyn Fn(usize, usize, usize) -> bool| -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..r {
            for j in 0..c {
                for k in 0..h {
                    if f(i, j, k) {
                        out.push(dims.offset(i, j, k));
                    }
                }
            }
        }
        out
    };
    for (i, &v) in u.rows().iter().enumerate() {
        rows.push(unit_row(all(&|a, _, _| a == i), v, format!("u({},+,+)", i + 1)));
    }
    for (j, &v) in u.cols().iter().enumerate() {
        rows.push(unit_row(all(&|_, b, _| b == j), v, format!("u(+,{},+)", j + 1)));
    }
    for (k, &v) in u.layers().iter().enumerate() {
        rows.push(unit_row(all(&|_, _, g| g == k), v, format!("u(+,+,{})", k + 1)));
    }
    for i in 0..r {
        for j in 0..c {
            for k in 0..h {
                let x = dims.offset(i, j, k);
                let label = format!("bound({},{},{})", i + 1, j + 1, k + 1);
                rows.push(unit_row([x, cells + x], *p.at(i, j, k), label));
            }
        }
    }
    RationalSystem { dims, num_vars: 2 * cells, rows }
}

impl RationalSystem {
    /// True iff `values` is nonnegative and satisfies every row exactly.
    pub fn check(&self, values: &[BigRational]) -> bool {
        values.len() == self.num_vars
            && values.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|row| {
                let lhs = row.terms.iter().fold(BigRational::zero(), |acc, (v, a)| acc + a * &values[*v]);
                lhs == row.rhs
            })
    }
}

/// Dense phase-I tableau: `rows × (num_vars + rows)` plus the right-hand side.
struct Tableau {
    a: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    cost: Vec<BigRational>,
    cost_rhs: BigRational,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(sys: &RationalSystem) -> Self {
        let m = sys.rows.len();
        let width = sys.num_vars + m;
        let mut a = vec![vec![BigRational::zero(); width]; m];
        let mut rhs = Vec::with_capacity(m);
        for (i, row) in sys.rows.iter().enumerate() {
            let flip = row.rhs.is_negative();
            for (v, coeff) in &row.terms {
                a[i][*v] += if flip { -coeff } else { coeff.clone() };
            }
            a[i][sys.num_vars + i] = BigRational::one();
            rhs.push(if flip { -row.rhs.clone() } else { row.rhs.clone() });
        }
        // Reduced costs of `min Σ artificials` with the artificials basic.
        let mut cost = vec![BigRational::zero(); width];
        for row in &a {
            for (c, v) in cost.iter_mut().zip(row).take(sys.num_vars) {
                *c -= v;
            }
        }
        let cost_rhs = rhs.iter().fold(BigRational::zero(), |acc, b| acc - b);
        Self { a, rhs, cost, cost_rhs, basis: (sys.num_vars..width).collect() }
    }

    /// Bland: the lowest-index column with a negative reduced cost.
    fn entering(&self) -> Option<usize> {
        self.cost.iter().position(|c| c.is_negative())
    }

    /// Minimum ratio; ties go to the lowest-index basic variable.
    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, BigRational)> = None;
        for (i, row) in self.a.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / &row[col];
            let better = match &best {
                None => true,
                Some((b, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*b]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.a[row][col].clone();
        for v in self.a[row].iter_mut() {
            *v /= &p;
        }
        self.rhs[row] /= &p;
        let pivot_row = self.a[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for (i, r) in self.a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, y) in r.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (x, y) in self.cost.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            self.cost_rhs -= &f * &pivot_rhs;
        }
        self.basis[row] = col;
    }
}

/// Decides whether the system has a nonnegative real solution.
///
/// A feasible verdict always carries a witness that has been re-checked
/// against every row of `sys`.
pub fn lp_feasible(sys: &RationalSystem) -> LpResult {
    let mut t = Tableau::new(sys);
    let mut pivots = 0;
    #[cfg(debug_assertions)]
    let mut seen = HashSet::new();
    while let Some(col) = t.entering() {
        #[cfg(debug_assertions)]
        {
            let mut key = t.basis.clone();
            key.sort_unstable();
            debug_assert!(seen.insert(key), "simplex revisited a basis");
        }
        let row = t.leaving(col).expect("phase I is bounded below, so an improving column has a positive entry");
        t.pivot(row, col);
        pivots += 1;
    }
    // `cost_rhs` is minus the artificial sum.
    if !t.cost_rhs.is_zero() {
        return LpResult { verdict: Verdict::Infeasible, witness: None, pivots };
    }
    let mut values = vec![BigRational::zero(); sys.num_vars];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < sys.num_vars {
            values[b] = t.rhs[i].clone();
        }
    }
    assert!(sys.check(&values), "phase I returned a point that violates the system");
    let witness = RealTable3::new(sys.dims, values[..sys.dims.cells()].to_vec()).expect("checked nonnegative");
    LpResult { verdict: Verdict::Feasible, witness: Some(witness), pivots }
}
