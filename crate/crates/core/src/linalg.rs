//! Exact rank and determinant: fraction-free elimination over the integers,
//! plain elimination over `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Rank with a witness: the submatrix on `pivot_rows × pivot_cols` is
/// nonsingular and has order `rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankComputation {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
}

/// Bareiss elimination with row pivoting; every intermediate entry is a
/// minor of the input, so the divisions are exact.
pub fn rank_bigint(m: &[Vec<BigInt>]) -> RankComputation {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut prev = BigInt::one();
    let mut pivot_cols = Vec::new();
    let mut k = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(k, p);
        order.swap(k, p);
        for r in k + 1..rows {
            for cc in c + 1..cols {
                let v = &a[k][c] * &a[r][cc] - &a[r][c] * &a[k][cc];
                a[r][cc] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[k][c].clone();
        pivot_cols.push(c);
        k += 1;
    }
    let mut pivot_rows = order[..k].to_vec();
    pivot_rows.sort_unstable();
    RankComputation {
        rank: k,
        pivot_rows,
        pivot_cols,
    }
}

/// Same elimination in `i128`, falling back to big integers on overflow.
pub fn rank_i64(m: &[Vec<i64>]) -> RankComputation {
    match rank_i128(m) {
        Some(r) => r,
        None => rank_bigint(&to_big(m)),
    }
}

fn rank_i128(m: &[Vec<i64>]) -> Option<RankComputation> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut prev: i128 = 1;
    let mut pivot_cols = Vec::new();
    let mut k = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(k, p);
        order.swap(k, p);
        for r in k + 1..rows {
            for cc in c + 1..cols {
                let v = a[k][c]
                    .checked_mul(a[r][cc])?
                    .checked_sub(a[r][c].checked_mul(a[k][cc])?)?;
                a[r][cc] = v / prev;
            }
            a[r][c] = 0;
        }
        prev = a[k][c];
        pivot_cols.push(c);
        k += 1;
    }
    let mut pivot_rows = order[..k].to_vec();
    pivot_rows.sort_unstable();
    Some(RankComputation {
        rank: k,
        pivot_rows,
        pivot_cols,
    })
}

/// Rational matrices are scaled row by row to integers first.
pub fn rank_rational(m: &[Vec<BigRational>]) -> RankComputation {
    let scaled: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let den = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();
    rank_bigint(&scaled)
}

/// Rank over `F_p` of an integer matrix.
pub fn rank_mod_p(m: &[Vec<i64>], p: u64) -> RankComputation {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let pi = p as i64;
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(pi) as u64).collect())
        .collect();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut pivot_cols = Vec::new();
    let mut k = 0;
    let inv = |x: u64| pow_mod(x, p - 2, p);
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(piv) = (k..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(k, piv);
        order.swap(k, piv);
        let iv = inv(a[k][c]);
        for r in k + 1..rows {
            if a[r][c] == 0 {
                continue;
            }
            let f = mul_mod(a[r][c], iv, p);
            for cc in c..cols {
                let sub = mul_mod(f, a[k][cc], p);
                a[r][cc] = (a[r][cc] + p - sub) % p;
            }
        }
        pivot_cols.push(c);
        k += 1;
    }
    let mut pivot_rows = order[..k].to_vec();
    pivot_rows.sort_unstable();
    RankComputation {
        rank: k,
        pivot_rows,
        pivot_cols,
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(k, p);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let v = &a[k][k] * &a[r][c] - &a[r][k] * &a[k][c];
                a[r][c] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

/// Determinant by cofactor expansion; exponential, used as a test oracle.
pub fn determinant_by_expansion(m: &[Vec<i64>]) -> BigInt {
    fn go(m: &[Vec<i64>], rows: &[usize], cols: &mut Vec<usize>) -> BigInt {
        if rows.is_empty() {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for k in 0..cols.len() {
            let c = cols.remove(k);
            let entry = m[rows[0]][c];
            if entry != 0 {
                let sub = go(m, &rows[1..], cols);
                let term = BigInt::from(entry) * sub;
                if k % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            cols.insert(k, c);
        }
        total
    }
    let rows: Vec<usize> = (0..m.len()).collect();
    let mut cols = rows.clone();
    go(m, &rows, &mut cols)
}

pub fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Checks a rank witness: the pivot submatrix is nonsingular.
pub fn witness_is_nonsingular(m: &[Vec<BigInt>], r: &RankComputation) -> bool {
    let sub: Vec<Vec<BigInt>> = r
        .pivot_rows
        .iter()
        .map(|&i| r.pivot_cols.iter().map(|&j| m[i][j].clone()).collect())
        .collect();
    !determinant(&sub).is_zero() && r.pivot_rows.len() == r.rank
}

/// Largest order of a nonzero minor, by brute force; a test oracle.
pub fn rank_by_minors(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for k in (1..=rows.min(cols)).rev() {
        for rs in crate::generators::subsets(rows, k) {
            for cs in crate::generators::subsets(cols, k) {
                let sub: Vec<Vec<i64>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                    .collect();
                if !determinant_by_expansion(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, petersen};
    use crate::laplacian::SymbolicMatrix;

    #[test]
    fn cycle_five_at_printed_point() {
        let l = SymbolicMatrix::of(&cycle(5)).evaluate(&[0, -1, 1, 1, 2]);
        let r = rank_i64(&l);
        assert_eq!(r.rank, 3);
        assert!(witness_is_nonsingular(&to_big(&l), &r));
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        assert_eq!(rank_i64(&vec![vec![0; 4]; 3]).rank, 0);
        assert_eq!(rank_i64(&[]).rank, 0);
    }

    #[test]
    fn petersen_at_all_ones() {
        let l = SymbolicMatrix::of(&petersen()).evaluate(&[1; 10]);
        assert_eq!(rank_i64(&l).rank, 5);
        assert_eq!(rank_bigint(&to_big(&l)).rank, 5);
    }

    #[test]
    fn mod_p_rank_drops() {
        let m = vec![vec![2, 4], vec![1, 3]];
        assert_eq!(rank_i64(&m).rank, 2);
        assert_eq!(rank_mod_p(&m, 2).rank, 1);
        assert_eq!(rank_mod_p(&m, 3).rank, 2);
    }

    #[test]
    fn determinants_agree() {
        let m = vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(determinant(&to_big(&m)), BigInt::from(4));
        assert_eq!(determinant_by_expansion(&m), BigInt::from(4));
        let swap = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(determinant(&to_big(&swap)), BigInt::from(-1));
    }

    #[test]
    fn overflow_falls_back() {
        let big = i64::MAX / 2;
        let m = vec![
            vec![big, big - 1, 3],
            vec![big - 7, big, 5],
            vec![1, 2, big],
        ];
        assert_eq!(rank_i64(&m).rank, rank_bigint(&to_big(&m)).rank);
    }
}
