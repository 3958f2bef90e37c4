//! Reductions between table problems.
//!
//! * [`embed`]: 1-marginals plus entry bounds on `(r, c, h)` tables become
//!   2-marginals on `(3, rc, r + c + h)` tables, with an integer-preserving
//!   affine bijection between the solution sets.
//! * [`hardness`]: 3-dimensional matching and the permanent.
//! * [`gadgets`]: instances whose single-entry questions encode feasibility.
//! * [`instances`]: the small worked instances.

pub mod embed;
pub mod gadgets;
pub mod hardness;
pub mod instances;

pub use embed::{embed_bounds, lift_embedded, project_embedded, EmbeddingSpec, Layout};
pub use gadgets::{
    canonical_gadget_table, frechet_gadget_source, secure_frechet_gadget, secure_zero_gadget, spoke_table, GadgetSpecA,
    GadgetSpecB,
};
pub use hardness::{permanent_marginals, reduce_3dm, PermanentInstance};
pub use instances::{example21_instance, example21_solution, vlach_half_integral, vlach_instance};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{lp_feasible, transportation_system};
    use crate::oracle::{brute_count, brute_count_bounded, brute_tables, EnumLimits};
    use crate::tables::{check_consistency, dominated, marginals1_of, Dims3, Table3};
    use crate::transfer::{count_tables, DEFAULT_STATE_CAP};
    use num_bigint::BigUint;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    /// The three expected blocks `y_{t,ij,gro k}`: rows dom 1, dom 2, row 1,
    /// row 2, col 1, col 2; columns 11, 12, 21, 22.
    fn expected_y() -> [[[u64; 4]; 6]; 3] {
        [
            [[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [0; 4], [0; 4]],
            [[0, 1, 0, 0], [1, 1, 0, 0], [0; 4], [0; 4], [1, 0, 0, 0], [0, 0, 0, 1]],
            [[0; 4], [0; 4], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]],
        ]
    }

    #[test]
    fn example21_has_one_table_equal_to_the_lift() {
        let (_, p) = example21_instance();
        let (m, spec) = reduce_3dm(&p).unwrap();
        assert_eq!(m.dims(), Dims3::new(3, 4, 6).unwrap());
        let tables = brute_tables(&m, EnumLimits::default()).unwrap();
        assert_eq!(tables.len(), 1);
        assert_eq!(count_tables(&m, DEFAULT_STATE_CAP).unwrap(), BigUint::one());
        let y = lift_embedded(&example21_solution(), &spec).unwrap();
        assert_eq!(tables[0], y);
        let expected = expected_y();
        for (t, block) in expected.iter().enumerate() {
            for (g, row) in block.iter().enumerate() {
                for (q, &v) in row.iter().enumerate() {
                    assert_eq!(*y.at(t, q, g), v, "t={} {} pair {}", t + 1, spec.segment_label(g), spec.pair_label(q));
                }
            }
        }
        assert_eq!(project_embedded(&y, &spec).unwrap(), example21_solution());
    }

    #[test]
    fn vlach_is_real_feasible_but_has_no_table() {
        let (u, p) = vlach_instance();
        let (m, spec) = embed_bounds(&u, &p).unwrap();
        assert_eq!(m.dims(), Dims3::new(3, 4, 6).unwrap());
        assert!(check_consistency(&m).consistent);
        assert!(count_tables(&m, DEFAULT_STATE_CAP).unwrap().is_zero());
        assert!(brute_count(&m, EnumLimits::default()).unwrap().is_zero());
        let y = lift_embedded(&vlach_half_integral(), &spec).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert!(y.iter().all(|v| v.is_zero() || *v == half));
        assert!(crate::tables::real_satisfies(&y, &m).unwrap());
        assert!(lp_feasible(&transportation_system(&m)).is_feasible());
    }

    #[test]
    fn embedded_tables_project_to_bounded_tables() {
        let (u, p) = example21_instance();
        let (m, spec) = embed_bounds(&u, &p).unwrap();
        for y in brute_tables(&m, EnumLimits::default()).unwrap() {
            let x = project_embedded(&y, &spec).unwrap();
            assert!(dominated(&x, &p).unwrap());
            assert_eq!(marginals1_of(&x), u);
        }
    }

    #[test]
    fn counts_agree_across_the_embedding() {
        let dims = Dims3::new(2, 2, 2).unwrap();
        for bits in 0u32..64 {
            let x = Table3::from_fn(dims, |i, j, k| u64::from((bits >> ((i * 2 + j) * 2 + k)) & 1 == 1)).unwrap();
            let p = Table3::from_fn(dims, |i, j, k| x.at(i, j, k) + ((i + 2 * j + k) % 2) as u64).unwrap();
            let u = marginals1_of(&x);
            let (m, _) = embed_bounds(&u, &p).unwrap();
            let direct = brute_count_bounded(&u, &p, EnumLimits::default()).unwrap();
            assert_eq!(brute_count(&m, EnumLimits::default()).unwrap(), direct);
            assert_eq!(count_tables(&m, 1 << 40).unwrap(), direct);
        }
    }
}
