//! Row-style Hermite normal form.
//!
//! The normal form used everywhere in this crate: row echelon, positive
//! pivots, entries above each pivot reduced into `[0, pivot)`, zero rows at
//! the bottom.  That form is unique for a given row span, which is what
//! makes it usable as an equality key for lattices.

use super::IntMatrix;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub struct HnfResult {
    /// The Hermite form, same shape as the input.
    pub h: IntMatrix,
    /// Unimodular transform with `transform * input = h`.
    pub transform: IntMatrix,
    pub rank: usize,
}

/// Computes the row Hermite normal form of `m`.
pub fn hnf(m: &IntMatrix) -> HnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0usize;

    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclidean cascade: shrink column c below row r until one entry is left.
        loop {
            let mut pivot: Option<usize> = None;
            for i in r..rows {
                if !h[(i, c)].is_zero() {
                    pivot = match pivot {
                        None => Some(i),
                        Some(p) if h[(i, c)].abs() < h[(p, c)].abs() => Some(i),
                        keep => keep,
                    };
                }
            }
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)]).div_floor(&h[(r, c)]);
                h.add_mul_row(i, r, &q);
                u.add_mul_row(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        // Entries above the pivot land in [0, pivot).
        for i in 0..r {
            let q = -(&h[(i, c)]).div_floor(&h[(r, c)]);
            h.add_mul_row(i, r, &q);
            u.add_mul_row(i, r, &q);
        }
        r += 1;
    }

    HnfResult { h, transform: u, rank: r }
}

#[cfg(test)]
mod tests {
    use super::super::det_bareiss;
    use super::*;
    use num_bigint::BigInt;

    fn check_invariants(m: &IntMatrix) -> HnfResult {
        let res = hnf(m);
        assert_eq!(res.transform.mul(m), res.h, "U*M != H");
        let det_u = det_bareiss(&res.transform);
        assert!(det_u.abs() == BigInt::from(1), "transform not unimodular: det {det_u}");
        // Echelon with positive pivots and reduced columns.
        let mut last_col = None;
        for i in 0..res.rank {
            let c = (0..m.cols()).find(|&c| !res.h[(i, c)].is_zero()).expect("pivot row is zero");
            if let Some(lc) = last_col {
                assert!(c > lc, "pivots not strictly right-moving");
            }
            last_col = Some(c);
            assert!(res.h[(i, c)].is_positive());
            for j in 0..i {
                assert!(!res.h[(j, c)].is_negative() && res.h[(j, c)] < res.h[(i, c)]);
            }
        }
        for i in res.rank..m.rows() {
            assert!(res.h.is_zero_row(i));
        }
        res
    }

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![1, 1]]);
        let res = check_invariants(&m);
        assert_eq!(res.h, IntMatrix::from_rows(&[vec![1, 1], vec![0, 2]]));
        assert_eq!(res.rank, 2);
    }

    #[test]
    fn rank_deficient_and_zero_rows() {
        let m = IntMatrix::from_rows(&[vec![0, 0, 0], vec![2, 4, 6], vec![1, 2, 3]]);
        let res = check_invariants(&m);
        assert_eq!(res.rank, 1);
        assert_eq!(res.h.row_vec(0), IntMatrix::from_rows(&[vec![1, 2, 3]]).row_vec(0));
    }

    #[test]
    fn randomized_span_preservation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
            check_invariants(&m);
        }
    }
}
