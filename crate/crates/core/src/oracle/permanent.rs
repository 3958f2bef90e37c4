use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::tables::Matrix;

/// Sizes up to this use permutation enumeration; larger ones use Ryser's formula.
const ENUMERATION_MAX: usize = 8;

fn check_binary_square(a: &Matrix<u64>) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if a.as_slice().iter().any(|&v| v > 1) {
        return Err(Error::NotBinary("permanent input"));
    }
    Ok(())
}

/// Permanent of a square 0/1 matrix.
pub fn ryser_permanent(a: &Matrix<u64>) -> Result<BigUint> {
    check_binary_square(a)?;
    if a.rows() <= ENUMERATION_MAX {
        Ok(by_permutations(a))
    } else {
        Ok(by_inclusion_exclusion(a))
    }
}

/// `Σ_σ Π_i A_{i,σ(i)}` by walking every permutation (Heap's algorithm).
pub fn permanent_by_permutations(a: &Matrix<u64>) -> Result<BigUint> {
    check_binary_square(a)?;
    Ok(by_permutations(a))
}

/// Ryser's inclusion-exclusion formula over column subsets, in Gray-code order.
pub fn permanent_by_ryser(a: &Matrix<u64>) -> Result<BigUint> {
    check_binary_square(a)?;
    Ok(by_inclusion_exclusion(a))
}

fn by_permutations(a: &Matrix<u64>) -> BigUint {
    let n = a.rows();
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut count: u64 = 0;
    let term = |s: &[usize]| s.iter().enumerate().all(|(i, &j)| *a.get(i, j) == 1);
    if term(&sigma) {
        count += 1;
    }
    let mut stack = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if stack[i] < i {
            if i % 2 == 0 {
                sigma.swap(0, i);
            } else {
                sigma.swap(stack[i], i);
            }
            if term(&sigma) {
                count += 1;
            }
            stack[i] += 1;
            i = 1;
        } else {
            stack[i] = 0;
            i += 1;
        }
    }
    BigUint::from(count)
}

fn by_inclusion_exclusion(a: &Matrix<u64>) -> BigUint {
    let n = a.rows();
    if n == 0 {
        return BigUint::one();
    }
    let mut row_sums = vec![0i64; n];
    let mut total = BigInt::zero();
    let mut prev_gray = 0u64;
    for step in 1u64..(1u64 << n) {
        let gray = step ^ (step >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        let sign = if gray & (1 << flipped) != 0 { 1 } else { -1 };
        for (i, s) in row_sums.iter_mut().enumerate() {
            *s += sign * *a.get(i, flipped) as i64;
        }
        prev_gray = gray;
        if row_sums.iter().all(|&s| s != 0) {
            let prod: BigInt = row_sums.iter().map(|&s| BigInt::from(s)).product();
            if (n as u32 - gray.count_ones()).is_multiple_of(2) {
                total += prod;
            } else {
                total -= prod;
            }
        }
    }
    debug_assert!(!total.is_negative());
    total.magnitude().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<u64>>) -> Matrix<u64> {
        Matrix::from_rows(rows).unwrap()
    }

    fn identity(n: usize) -> Matrix<u64> {
        Matrix::from_fn(n, n, |a, b| u64::from(a == b))
    }

    #[test]
    fn identity_has_permanent_one() {
        for n in 1..=10 {
            assert_eq!(ryser_permanent(&identity(n)).unwrap(), BigUint::one(), "n = {n}");
        }
    }

    #[test]
    fn zero_row_gives_zero() {
        let a = m(vec![vec![1, 1, 1], vec![0, 0, 0], vec![1, 1, 1]]);
        assert_eq!(ryser_permanent(&a).unwrap(), BigUint::zero());
        assert_eq!(permanent_by_ryser(&a).unwrap(), BigUint::zero());
    }

    #[test]
    fn all_ones_is_factorial() {
        // 3! = 6 permutations; 10! via the inclusion-exclusion path.
        assert_eq!(ryser_permanent(&Matrix::filled(3, 3, 1)).unwrap(), BigUint::from(6u32));
        assert_eq!(ryser_permanent(&Matrix::filled(10, 10, 1)).unwrap(), BigUint::from(3_628_800u32));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(ryser_permanent(&m(vec![vec![1, 0]])), Err(Error::NotSquare { rows: 1, cols: 2 })));
        assert!(matches!(ryser_permanent(&m(vec![vec![2]])), Err(Error::NotBinary(_))));
    }

    #[test]
    fn both_routes_agree_exhaustively_up_to_four() {
        for n in 1..=4usize {
            for bits in 0u32..(1 << (n * n)) {
                let a = Matrix::from_fn(n, n, |x, y| u64::from(bits >> (x * n + y) & 1));
                assert_eq!(by_permutations(&a), by_inclusion_exclusion(&a), "n = {n}, bits = {bits:b}");
            }
        }
    }

    #[test]
    fn both_routes_agree_on_random_six_by_six() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let a = Matrix::from_fn(6, 6, |_, _| u64::from(rng.gen_bool(0.6)));
            assert_eq!(by_permutations(&a), by_inclusion_exclusion(&a));
        }
    }
}
