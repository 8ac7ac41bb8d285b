//! Small dense integer matrices: determinants and unimodular inverses.

use num_traits::{ToPrimitive, Zero};

use crate::rational::{int, Rational};

pub type IntMatrix = Vec<Vec<i64>>;

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// Inverse of a square integer matrix with determinant ±1.
///
/// Returns `None` when the matrix is singular or its inverse is not integral.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Option<IntMatrix> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Rational> = row.iter().map(|&x| int(x)).collect();
            r.extend((0..n).map(|j| int((i == j) as i64)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        let pivot_row = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[Vec<i64>]) -> IntMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[i64], m: &[Vec<i64>]) -> Vec<i64> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| v.iter().zip(m).map(|(x, row)| x * row[j]).sum())
        .collect()
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter()
        .fold(0i64, |g, &x| num_integer::gcd(g, x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(determinant(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(determinant(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]), -1);
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(determinant(&[vec![-2]]), -2);
    }

    #[test]
    fn unimodular_inverse_is_inverse() {
        let m = vec![vec![0, 1, 0], vec![-1, 1, 2], vec![1, 0, -1]];
        assert_eq!(determinant(&m).abs(), 1);
        let inv = unimodular_inverse(&m).unwrap();
        for (i, row) in m.iter().enumerate() {
            for j in 0..3 {
                let e: i64 = row.iter().zip(&inv).map(|(x, inv_row)| x * inv_row[j]).sum();
                assert_eq!(e, (i == j) as i64);
            }
        }
        assert!(unimodular_inverse(&[vec![2, 0], vec![0, 1]]).is_none());
        assert!(unimodular_inverse(&[vec![1, 1], vec![1, 1]]).is_none());
    }
}
