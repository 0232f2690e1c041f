//! Exact rational solving, inversion and determinants.

use super::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Solves `a * x = b` exactly over Q.  Returns `None` when inconsistent.
/// If the system is underdetermined, one solution is returned (free
/// variables set to zero).
pub fn solve_exact(a: &IntMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let aq: Vec<Vec<BigRational>> = (0..a.rows())
        .map(|i| a.row(i).iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    solve_exact_rational(&aq, b)
}

/// Rational-entry variant of [`solve_exact`].
pub fn solve_exact_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "rhs length mismatch");
    let cols = a.first().map_or(0, |r| r.len());
    // Augmented Gaussian elimination.
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r][c..].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistent if a zero row has nonzero rhs.
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[row][cols].clone();
    }
    Some(x)
}

/// Inverse of a square integer matrix over Q; `None` when singular.
pub fn inverse_rational(a: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "inverse of a non-square matrix");
    let mut cols_out = Vec::with_capacity(n);
    // Solve against each unit vector; n small enough that repeating the
    // elimination is not worth optimizing away.
    for k in 0..n {
        let e: Vec<BigRational> = (0..n)
            .map(|i| if i == k { BigRational::one() } else { BigRational::zero() })
            .collect();
        cols_out.push(solve_exact(a, &e)?);
    }
    // Detect singular-but-consistent solves: verify A * X = I.
    let x: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| cols_out[j][i].clone()).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            let mut s = BigRational::zero();
            for k in 0..n {
                s += BigRational::from(a[(i, k)].clone()) * &x[k][j];
            }
            let expect = if i == j { BigRational::one() } else { BigRational::zero() };
            if s != expect {
                return None;
            }
        }
    }
    Some(x)
}

/// Fraction-free Bareiss determinant.
pub fn det_bareiss(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    assert_eq!(n, a.cols(), "determinant of a non-square matrix");
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| a.row_vec(i)).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        for i in k + 1..n {
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Characteristic polynomial of a square integer matrix, monic in the
/// convention det(xI - M), via trace recursion.
pub fn char_poly(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    // Newton's identities on power traces, exact over Q
    let mut pw: Vec<Vec<BigRational>> = (0..n)
        .map(|i| m.row(i).iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    let mut traces = vec![BigRational::zero(); n + 1];
    for k in 1..=n {
        traces[k] = (0..n).map(|i| pw[i][i].clone()).sum();
        if k < n {
            let mut next = vec![vec![BigRational::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = BigRational::zero();
                    for l in 0..n {
                        if !pw[i][l].is_zero() && !m[(l, j)].is_zero() {
                            acc += &pw[i][l] * BigRational::from(m[(l, j)].clone());
                        }
                    }
                    next[i][j] = acc;
                }
            }
            pw = next;
        }
    }
    // e_k from p_k: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
    let mut e = vec![BigRational::one()];
    for k in 1..=n {
        let mut acc = BigRational::zero();
        let mut sign = BigRational::one();
        for i in 1..=k {
            acc += &sign * &e[k - i] * &traces[i];
            sign = -sign;
        }
        e.push(acc / BigRational::from(BigInt::from(k)));
    }
    // det(xI - M) = sum (-1)^k e_k x^{n-k}
    let mut out = vec![BigInt::zero(); n + 1];
    let mut sign = BigInt::one();
    for (k, ek) in e.iter().enumerate() {
        debug_assert!(ek.is_integer());
        out[n - k] = &sign * ek.to_integer();
        sign = -sign;
    }
    out
}
