//! Exact counting and entry-range analysis for tables whose vertical face
//! `v_{i,j,+}` is small.
//!
//! States are the 2-tables `s ≤ v_{·,·,+}`. Layer `k` relates `s` to `t` when
//! `t − s` is a table with row sums `v_{·,+,k}` and column sums `v_{+,·,k}`.
//! The number of 3-tables is the `(l, u)` entry of `A_1 ⋯ A_h`, computed by
//! pushing the indicator of `l` through the layers one at a time. Count
//! vectors are sparse and only hold reachable states.

mod layer;
mod state;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::axis::{remap, AxisMap};
use crate::error::Result;
use crate::tables::{check_consistency, frechet_upper, EntryIndex, TwoMarginals};

pub use layer::{layer_matrix, LayerDiff, LayerMatrix};
pub use state::{build_state_space, state_count, StateSpace};

/// Default cap on the number of states.
pub const DEFAULT_STATE_CAP: u64 = 10_000_000;

/// Sparse big-integer vector over a state space; absent states hold 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountVector {
    counts: BTreeMap<u64, BigUint>,
}

impl CountVector {
    pub fn unit(state: u64) -> Self {
        Self { counts: BTreeMap::from([(state, BigUint::one())]) }
    }

    pub fn get(&self, state: u64) -> BigUint {
        self.counts.get(&state).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.is_empty()
    }

    /// Number of states with a nonzero count.
    pub fn support(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigUint)> {
        self.counts.iter().map(|(&s, c)| (s, c))
    }

    /// Row vector times `A`: `w[t] = Σ_s v[s]·A[s,t]`.
    pub fn push_forward(&self, a: &LayerMatrix<'_>) -> Self {
        let ss = a.space();
        let shape = ss.shape().as_slice();
        let mut digits = vec![0u64; ss.cells()];
        let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (&s, count) in &self.counts {
            ss.digits_into(s, &mut digits);
            for z in a.diffs() {
                let fits = z.cells.iter().zip(&digits).zip(shape).all(|((&dz, &ds), &u)| ds + dz <= u);
                if fits {
                    *out.entry(s + z.offset).or_default() += count;
                }
            }
        }
        Self { counts: out }
    }

    /// `A` times column vector: `w[s] = Σ_t A[s,t]·v[t]`.
    pub fn push_backward(&self, a: &LayerMatrix<'_>) -> Self {
        let ss = a.space();
        let mut digits = vec![0u64; ss.cells()];
        let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (&t, count) in &self.counts {
            ss.digits_into(t, &mut digits);
            for z in a.diffs() {
                if z.cells.iter().zip(&digits).all(|(&dz, &dt)| dz <= dt) {
                    *out.entry(t - z.offset).or_default() += count;
                }
            }
        }
        Self { counts: out }
    }
}

/// Layer matrices `A_1..A_h` for marginals whose vertical face defines `ss`.
pub fn layer_matrices<'s>(ss: &'s StateSpace, m: &TwoMarginals) -> Vec<LayerMatrix<'s>> {
    let dims = m.dims();
    (0..dims.h)
        .map(|k| {
            let rows: Vec<u64> = (0..dims.r).map(|i| *m.ik().get(i, k)).collect();
            let cols: Vec<u64> = (0..dims.c).map(|j| *m.jk().get(j, k)).collect();
            layer_matrix(ss, &rows, &cols)
        })
        .collect()
}

/// Counts tables in the given orientation (layers along the third axis),
/// with the first layer optionally restricted to `lo ≤ z_{1,1} ≤ hi`.
fn count_forward(m: &TwoMarginals, first_cell: Option<(u64, u64)>, cap: u64) -> Result<BigUint> {
    let ss = build_state_space(m.ij(), cap)?;
    let layers = layer_matrices(&ss, m);
    let mut v = CountVector::unit(ss.lower());
    for (k, a) in layers.iter().enumerate() {
        v = match (k, first_cell) {
            (0, Some((lo, hi))) => v.push_forward(&a.restrict_first_cell(lo, hi)),
            _ => v.push_forward(a),
        };
        if v.is_zero() {
            return Ok(BigUint::zero());
        }
    }
    Ok(v.get(ss.upper()))
}

/// Exact number of tables with 2-marginals `m`, layering along the third
/// axis exactly as given (no reorientation).
pub fn count_tables_oriented(m: &TwoMarginals, cap: u64) -> Result<BigUint> {
    count_forward(m, None, cap)
}

/// Exact number of tables with 2-marginals `m`. The axes are first permuted
/// so that the smallest state space is used.
pub fn count_tables(m: &TwoMarginals, cap: u64) -> Result<BigUint> {
    if !check_consistency(m).consistent {
        return Ok(BigUint::zero());
    }
    let oriented = remap(m, &select_orientation(m))?;
    count_tables_oriented(&oriented, cap)
}

/// Whether some table has 2-marginals `m`. Tracks reachable states only and
/// stops as soon as none remain.
pub fn exists_fixed_rc(m: &TwoMarginals, cap: u64) -> Result<bool> {
    if !check_consistency(m).consistent {
        return Ok(false);
    }
    let m = remap(m, &select_orientation(m))?;
    let ss = build_state_space(m.ij(), cap)?;
    let mut reach = BTreeSet::from([ss.lower()]);
    for a in layer_matrices(&ss, &m) {
        reach = reach.iter().flat_map(|&s| a.successors(s)).collect();
        if reach.is_empty() {
            return Ok(false);
        }
    }
    Ok(reach.contains(&ss.upper()))
}

/// Axis permutation putting the layer axis last such that the vertical face
/// has the fewest states. Ties keep the earlier candidate, preferring the
/// given orientation.
pub fn select_orientation(m: &TwoMarginals) -> AxisMap {
    let candidates: [([usize; 3], (usize, usize)); 3] = [([0, 1, 2], (0, 1)), ([0, 2, 1], (0, 2)), ([1, 2, 0], (1, 2))];
    let (axes, _) =
        candidates.iter().min_by_key(|(_, (p, q))| state_count(m.face_matrix(*p, *q))).expect("three candidates");
    AxisMap::permute_axes(m.dims(), *axes).expect("valid axis permutation")
}

/// Moves `e` to `(1, 1, 1)` and picks the cheapest orientation.
fn orient_for_entry(m: &TwoMarginals, e: EntryIndex) -> Result<TwoMarginals> {
    let moved = remap(m, &AxisMap::relocate(m.dims(), e)?)?;
    remap(&moved, &select_orientation(&moved))
}

/// Number of tables with `lo ≤ t[e] ≤ hi`, by restricting the first layer
/// matrix after moving `e` to `(1, 1, 1)`.
pub fn entry_range_count(m: &TwoMarginals, e: EntryIndex, lo: u64, hi: u64, cap: u64) -> Result<BigUint> {
    e.check(m.dims())?;
    if lo > hi || !check_consistency(m).consistent {
        return Ok(BigUint::zero());
    }
    let m = orient_for_entry(m, e)?;
    count_forward(&m, Some((lo, hi)), cap)
}

/// For each attainable value `v` of entry `e`, the number of tables with `t[e] = v`.
///
/// One backward pass from `u` through layers `h..2` gives, for every state,
/// the number of completions; the first layer is then split by its `(1, 1)` cell.
pub fn entry_value_counts(m: &TwoMarginals, e: EntryIndex, cap: u64) -> Result<BTreeMap<u64, BigUint>> {
    e.check(m.dims())?;
    let mut out = BTreeMap::new();
    if !check_consistency(m).consistent {
        return Ok(out);
    }
    let m = orient_for_entry(m, e)?;
    let ss = build_state_space(m.ij(), cap)?;
    let layers = layer_matrices(&ss, &m);
    let mut back = CountVector::unit(ss.upper());
    for a in layers[1..].iter().rev() {
        back = back.push_backward(a);
        if back.is_zero() {
            return Ok(out);
        }
    }
    for z in layers[0].diffs() {
        let completions = back.get(ss.lower() + z.offset);
        if !completions.is_zero() {
            *out.entry(z.cells[0]).or_insert_with(BigUint::zero) += completions;
        }
    }
    Ok(out)
}

/// `{ t[e] : t has 2-marginals m }`. Always a subset of `0..=frechet_upper(m, e)`.
pub fn entry_value_set(m: &TwoMarginals, e: EntryIndex, cap: u64) -> Result<BTreeSet<u64>> {
    let set: BTreeSet<u64> = entry_value_counts(m, e, cap)?.into_keys().collect();
    debug_assert!(set.iter().all(|&v| v <= frechet_upper(m, e).unwrap_or(0)));
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis::remap_table;
    use crate::oracle::{brute_count, brute_entry_set, EnumLimits};
    use crate::tables::{marginals2_of, Dims3, Matrix, Table3};
    use proptest::prelude::*;

    const CAP: u64 = DEFAULT_STATE_CAP;

    fn d(r: usize, c: usize, h: usize) -> Dims3 {
        Dims3::new(r, c, h).unwrap()
    }

    fn all_twos() -> TwoMarginals {
        marginals2_of(&Table3::from_fn(d(2, 2, 2), |_, _, _| 1).unwrap())
    }

    #[test]
    fn zero_marginals_count_one() {
        assert_eq!(count_tables(&TwoMarginals::zeros(d(3, 2, 4)), CAP).unwrap(), BigUint::one());
    }

    #[test]
    fn all_twos_entry_set() {
        let m = all_twos();
        let set = entry_value_set(&m, EntryIndex::new(1, 1, 1), CAP).unwrap();
        assert_eq!(set, [0, 1, 2].into());
        let by_value = entry_value_counts(&m, EntryIndex::new(1, 1, 1), CAP).unwrap();
        let sum: BigUint = by_value.values().sum();
        assert_eq!(sum, count_tables(&m, CAP).unwrap());
    }

    #[test]
    fn inconsistent_marginals_count_zero() {
        let one = Matrix::from_rows(vec![vec![1]]).unwrap();
        let two = Matrix::from_rows(vec![vec![2]]).unwrap();
        let m = TwoMarginals::new(d(1, 1, 1), one.clone(), two, one).unwrap();
        assert!(count_tables(&m, CAP).unwrap().is_zero());
        assert!(count_tables_oriented(&m, CAP).unwrap().is_zero());
        assert!(!exists_fixed_rc(&m, CAP).unwrap());
        assert!(entry_value_set(&m, EntryIndex::new(1, 1, 1), CAP).unwrap().is_empty());
    }

    #[test]
    fn cap_exceeded_is_an_error() {
        let m = marginals2_of(&Table3::from_fn(d(3, 3, 3), |_, _, _| 5).unwrap());
        assert!(matches!(count_tables(&m, 1000), Err(crate::Error::CapExceeded { .. })));
    }

    #[test]
    fn orientation_minimizes_state_count() {
        // Vertical faces: ij has radix 2 per cell, ik and jk are larger.
        let t = Table3::from_fn(d(2, 2, 6), |i, j, k| u64::from((i + j + k) % 6 == 0)).unwrap();
        let m = marginals2_of(&t);
        let a = select_orientation(&m);
        let oriented = remap(&m, &a).unwrap();
        let best = [(0, 1), (0, 2), (1, 2)].iter().map(|&(p, q)| state_count(m.face_matrix(p, q))).min().unwrap();
        assert_eq!(state_count(oriented.ij()), best);
    }

    #[test]
    fn first_layer_restriction_matches_backward_split() {
        let t = Table3::new(d(2, 3, 3), vec![1, 0, 2, 1, 1, 0, 0, 2, 1, 3, 0, 1, 1, 1, 0, 2, 0, 1]).unwrap();
        let m = marginals2_of(&t);
        for e in [EntryIndex::new(1, 1, 1), EntryIndex::new(2, 3, 2), EntryIndex::new(1, 2, 3)] {
            let split = entry_value_counts(&m, e, CAP).unwrap();
            let upper = frechet_upper(&m, e).unwrap();
            for v in 0..=upper {
                let forward = entry_range_count(&m, e, v, v, CAP).unwrap();
                assert_eq!(forward, split.get(&v).cloned().unwrap_or_default(), "e = {e}, v = {v}");
            }
            assert_eq!(entry_range_count(&m, e, 0, upper, CAP).unwrap(), count_tables(&m, CAP).unwrap());
        }
    }

    /// `(A_1 ⋯ A_p)[s, t]` equals the number of `(r, c, p)` tables with the
    /// first `p` layer marginals and vertical marginal `t − s`.
    #[test]
    fn product_entries_count_partial_tables() {
        let t = Table3::new(d(2, 2, 2), vec![1, 0, 1, 1, 0, 1, 1, 0]).unwrap();
        let m = marginals2_of(&t);
        let ss = build_state_space(m.ij(), CAP).unwrap();
        let layers = layer_matrices(&ss, &m);
        for p in 1..=2usize {
            for s in 0..ss.size() {
                let mut v = CountVector::unit(s);
                for a in &layers[..p] {
                    v = v.push_forward(a);
                }
                for tt in 0..ss.size() {
                    let (ds, dt) = (ss.digits(s), ss.digits(tt));
                    let expected = if ds.iter().zip(&dt).all(|(a, b)| a <= b) {
                        let diff = Matrix::from_fn(2, 2, |a, b| dt[a * 2 + b] - ds[a * 2 + b]);
                        let ik = Matrix::from_fn(2, p, |a, k| *m.ik().get(a, k));
                        let jk = Matrix::from_fn(2, p, |b, k| *m.jk().get(b, k));
                        let part = TwoMarginals::new(d(2, 2, p), diff, ik, jk).unwrap();
                        brute_count(&part, EnumLimits::default()).unwrap()
                    } else {
                        BigUint::zero()
                    };
                    assert_eq!(v.get(tt), expected, "p = {p}, s = {s}, t = {tt}");
                }
            }
        }
    }

    fn random_table(max_dims: (usize, usize, usize), max_entry: u64) -> impl Strategy<Value = Table3> {
        (1..=max_dims.0, 1..=max_dims.1, 1..=max_dims.2).prop_flat_map(move |(r, c, h)| {
            proptest::collection::vec(0..=max_entry, r * c * h)
                .prop_map(move |v| Table3::new(Dims3::new(r, c, h).unwrap(), v).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn counts_match_the_oracle(t in random_table((3, 3, 3), 3)) {
            let m = marginals2_of(&t);
            let brute = brute_count(&m, EnumLimits::with_nodes(50_000_000)).unwrap();
            prop_assert_eq!(count_tables(&m, CAP).unwrap(), brute.clone());
            prop_assert_eq!(count_tables_oriented(&m, CAP).unwrap(), brute);
            prop_assert!(exists_fixed_rc(&m, CAP).unwrap());
        }

        #[test]
        fn entry_sets_match_the_oracle(t in random_table((3, 3, 3), 2), pick in 0usize..1000) {
            let m = marginals2_of(&t);
            let dims = t.dims();
            let cell = pick % dims.cells();
            let e = EntryIndex::new(cell / (dims.c * dims.h) + 1, cell / dims.h % dims.c + 1, cell % dims.h + 1);
            let set = entry_value_set(&m, e, CAP).unwrap();
            prop_assert_eq!(&set, &brute_entry_set(&m, e, EnumLimits::default()).unwrap());
            prop_assert!(set.contains(t.get(e).unwrap()));
        }

        #[test]
        fn counts_are_invariant_under_relabeling(t in random_table((3, 3, 3), 2), ax in 0usize..6, seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let axes = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][ax];
            let sizes = t.dims().sizes();
            let perms = axes.map(|a| {
                let mut p: Vec<usize> = (0..sizes[a]).collect();
                p.shuffle(&mut rng);
                p
            });
            let a = AxisMap::new(t.dims(), axes, perms).unwrap();
            let m = marginals2_of(&t);
            let mm = remap(&m, &a).unwrap();
            prop_assert_eq!(marginals2_of(&remap_table(&t, &a).unwrap()), mm.clone());
            prop_assert_eq!(count_tables_oriented(&mm, CAP).unwrap(), count_tables_oriented(&m, CAP).unwrap());
        }
    }
}
