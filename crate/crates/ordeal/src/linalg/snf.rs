//! Smith normal form with both transforms.

use super::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub struct SnfResult {
    /// Diagonal form, same shape as the input.
    pub s: IntMatrix,
    /// Unimodular `left` and `right` with `left * input * right = s`.
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Nonzero diagonal entries, each dividing the next.
    pub divisors: Vec<BigInt>,
}

/// Computes the Smith normal form of `m`.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let n = rows.min(cols);

    let mut t = 0usize;
    while t < n {
        // Find a nonzero entry in the trailing submatrix.
        let mut found = None;
        'search: for i in t..rows {
            for j in t..cols {
                if !s[(i, j)].is_zero() {
                    found = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = found else { break };
        s.swap_rows(t, pi);
        left.swap_rows(t, pi);
        swap_cols(&mut s, t, pj);
        swap_cols(&mut right, t, pj);

        // Alternate row and column elimination until the pivot is alone.
        loop {
            let mut again = false;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                if s[(i, t)].abs() < s[(t, t)].abs() || !(&s[(i, t)] % &s[(t, t)]).is_zero() {
                    // Euclidean step needs the smaller residue at the pivot.
                    let q = -(&s[(i, t)]).div_floor(&s[(t, t)]);
                    s.add_mul_row(i, t, &q);
                    left.add_mul_row(i, t, &q);
                    if !s[(i, t)].is_zero() {
                        s.swap_rows(t, i);
                        left.swap_rows(t, i);
                        again = true;
                    }
                } else {
                    let q = -(&s[(i, t)] / &s[(t, t)]);
                    s.add_mul_row(i, t, &q);
                    left.add_mul_row(i, t, &q);
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                if !(&s[(t, j)] % &s[(t, t)]).is_zero() {
                    let q = -(&s[(t, j)]).div_floor(&s[(t, t)]);
                    add_mul_col(&mut s, j, t, &q);
                    add_mul_col(&mut right, j, t, &q);
                    if !s[(t, j)].is_zero() {
                        swap_cols(&mut s, t, j);
                        swap_cols(&mut right, t, j);
                        again = true;
                    }
                } else {
                    let q = -(&s[(t, j)] / &s[(t, t)]);
                    add_mul_col(&mut s, j, t, &q);
                    add_mul_col(&mut right, j, t, &q);
                }
            }
            let row_clear = (t + 1..cols).all(|j| s[(t, j)].is_zero());
            let col_clear = (t + 1..rows).all(|i| s[(i, t)].is_zero());
            if row_clear && col_clear && !again {
                break;
            }
        }

        // Pivot must divide the rest of the submatrix.
        let mut disturbed = false;
        'div: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&s[(i, j)] % &s[(t, t)]).is_zero() {
                    let one = BigInt::from(1);
                    s.add_mul_row(t, i, &one);
                    left.add_mul_row(t, i, &one);
                    disturbed = true;
                    break 'div;
                }
            }
        }
        if disturbed {
            continue;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }

    let divisors = (0..n).map(|i| s[(i, i)].clone()).filter(|d| !d.is_zero()).collect();
    SnfResult { s, left, right, divisors }
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..m.rows() {
        let a = m[(r, i)].clone();
        m[(r, i)] = std::mem::replace(&mut m[(r, j)], a);
    }
}

/// col(i) += q * col(j)
fn add_mul_col(m: &mut IntMatrix, i: usize, j: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for r in 0..m.rows() {
        let t = &m[(r, j)] * q;
        m[(r, i)] += t;
    }
}

#[cfg(test)]
mod tests {
    use super::super::det_bareiss;
    use super::*;

    fn check_invariants(m: &IntMatrix) -> SnfResult {
        let res = snf(m);
        assert_eq!(res.left.mul(m).mul(&res.right), res.s, "L*M*R != S");
        assert!(det_bareiss(&res.left).abs() == BigInt::from(1));
        assert!(det_bareiss(&res.right).abs() == BigInt::from(1));
        for i in 0..res.s.rows() {
            for j in 0..res.s.cols() {
                if i != j {
                    assert!(res.s[(i, j)].is_zero(), "off-diagonal entry");
                }
            }
        }
        for w in res.divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisor chain broken");
        }
        res
    }

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![0, 6]]);
        let res = check_invariants(&m);
        assert_eq!(res.divisors, vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let res = check_invariants(&IntMatrix::zero(3, 2));
        assert!(res.divisors.is_empty());
    }

    #[test]
    fn randomized_invariants() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
            check_invariants(&m);
        }
    }
}
