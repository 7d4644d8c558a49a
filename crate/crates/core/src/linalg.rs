//! Exact rank of integer and rational matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank by fraction-free (Bareiss) elimination; every division is exact.
pub fn rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &row[c] * &pivot_row[j];
                debug_assert!(v.is_multiple_of(&prev));
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        r += 1;
    }
    r
}

/// Clears denominators row by row and returns the integer rank.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let integral = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    rank(integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(m(&[])), 0);
        assert_eq!(rank(m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(m(&[&[0, 1, 2], &[0, 2, 5], &[0, 0, 0]])), 2);
        assert_eq!(rank(m(&[&[2, 3, 5], &[7, 11, 13], &[17, 19, 23]])), 3);
    }

    #[test]
    fn rational_rows() {
        let half = BigRational::new(1.into(), 2.into());
        let one = BigRational::one();
        assert_eq!(
            rational_rank(&[
                vec![half.clone(), one.clone()],
                vec![one.clone(), &one + &one]
            ]),
            1
        );
    }
}
