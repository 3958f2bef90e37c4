use num_rational::BigRational;

use crate::tables::{Dims3, OneMarginals, RealTable3, Table3};

fn cube2(ones: &[(usize, usize, usize)]) -> Table3 {
    let dims = Dims3::new(2, 2, 2).expect("nonzero dims");
    Table3::from_fn(dims, |i, j, k| u64::from(ones.contains(&(i + 1, j + 1, k + 1)))).expect("binary table")
}

/// Vlach's 3DM instance: no matching, yet the embedded marginals are
/// real-feasible.
pub fn vlach_instance() -> (OneMarginals, Table3) {
    let p = cube2(&[(1, 1, 1), (2, 2, 1), (1, 2, 2), (2, 1, 2)]);
    (OneMarginals::unit(2).expect("n = 2"), p)
}

/// The 3DM instance with exactly one matching, `x_{111} = x_{222} = 1`.
pub fn example21_instance() -> (OneMarginals, Table3) {
    let p = cube2(&[(1, 1, 1), (1, 2, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)]);
    (OneMarginals::unit(2).expect("n = 2"), p)
}

/// The unique matching of [`example21_instance`].
pub fn example21_solution() -> Table3 {
    cube2(&[(1, 1, 1), (2, 2, 2)])
}

/// `1/2` on the support of Vlach's bounds, 0 elsewhere.
pub fn vlach_half_integral() -> RealTable3 {
    let (_, p) = vlach_instance();
    let half = BigRational::new(1.into(), 2.into());
    RealTable3::from_fn(
        p.dims(),
        |i, j, k| {
            if *p.at(i, j, k) == 1 {
                half.clone()
            } else {
                BigRational::from_integer(0.into())
            }
        },
    )
    .expect("nonnegative entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_3dm;

    #[test]
    fn instance_data() {
        let (u, p) = vlach_instance();
        assert_eq!((u.rows(), u.cols(), u.layers()), (&[1, 1][..], &[1, 1][..], &[1, 1][..]));
        assert_eq!(p.total(), 4);
        assert!(!brute_3dm(&p).unwrap());

        let (_, p) = example21_instance();
        let zeros: Vec<_> = (0..8).filter(|&x| p.as_slice()[x] == 0).collect();
        // (2,1,1), (2,2,1), (2,1,2) in (i, j, k) row-major order
        assert_eq!(zeros, vec![4, 5, 6]);
        assert!(brute_3dm(&p).unwrap());
    }
}
