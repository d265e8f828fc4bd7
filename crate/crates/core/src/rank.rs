//! Fraction-free Gaussian elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank of an integer matrix over the rationals, by Bareiss elimination.
///
/// Every intermediate value is a minor of the input, so the exact division
/// in the update step never leaves the integers.
pub fn bareiss_rank(rows: &[Vec<i64>]) -> usize {
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut prev_pivot = BigInt::one();
    let mut rank = 0;
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(pivot_row) = (rank..n_rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let (top, rest) = m.split_at_mut(rank + 1);
        let pivot_line = &top[rank];
        let pivot = pivot_line[col].clone();
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for c in col + 1..n_cols {
                let updated = &pivot * &row[c] - &factor * &pivot_line[c];
                row[c] = updated / &prev_pivot;
            }
            row[col] = BigInt::zero();
        }
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Rank by elimination over exact rationals, kept independent of the
    /// fraction-free route.
    fn rational_rank_oracle(rows: &[Vec<i64>]) -> usize {
        use num_bigint::BigInt;
        use num_traits::Signed;
        type Q = (BigInt, BigInt);
        fn norm((n, d): Q) -> Q {
            let g = num_integer_gcd(&n, &d);
            let (mut n, mut d) = (n / &g, d / &g);
            if d.is_negative() {
                n = -n;
                d = -d;
            }
            (n, d)
        }
        fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
            let (mut a, mut b) = (a.abs(), b.abs());
            while !b.is_zero() {
                let r = &a % &b;
                a = b;
                b = r;
            }
            if a.is_zero() {
                BigInt::one()
            } else {
                a
            }
        }
        let mut m: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| (BigInt::from(x), BigInt::one())).collect())
            .collect();
        let cols = rows.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].0.is_zero()) else { continue };
            m.swap(rank, p);
            let piv = m[rank][c].clone();
            for r in 0..m.len() {
                if r == rank || m[r][c].0.is_zero() {
                    continue;
                }
                let f = norm((&m[r][c].0 * &piv.1, &m[r][c].1 * &piv.0));
                for cc in 0..cols {
                    let (a, b) = m[rank][cc].clone();
                    let (x, y) = m[r][cc].clone();
                    // x/y - f*a/b
                    let num = &x * &f.1 * &b - &f.0 * &a * &y;
                    let den = &y * &f.1 * &b;
                    m[r][cc] = norm((num, den));
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn small_cases() {
        assert_eq!(bareiss_rank(&[]), 0);
        assert_eq!(bareiss_rank(&[vec![], vec![]]), 0);
        assert_eq!(bareiss_rank(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(bareiss_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(bareiss_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), 3);
    }

    proptest::proptest! {
        #[test]
        fn agrees_with_rational_elimination(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..4, 6), 0..7)
        ) {
            proptest::prop_assert_eq!(bareiss_rank(&rows), rational_rank_oracle(&rows));
        }
    }
}
