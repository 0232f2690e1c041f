//! Linear algebra over finite fields.
//!
//! Generic over a field handle so that the same elimination serves both
//! prime fields F_p (machine words, p < 2^63) and any residue field whose
//! arithmetic is supplied by multiplication tables elsewhere.

/// Field arithmetic supplied by a context object.  Elements pass by value;
/// implementors with heap-backed elements clone internally as needed.
pub trait FieldOps {
    type El: Clone + PartialEq;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: Self::El, b: Self::El) -> Self::El;
    fn sub(&self, a: Self::El, b: Self::El) -> Self::El;
    fn mul(&self, a: Self::El, b: Self::El) -> Self::El;
    fn inv(&self, a: Self::El) -> Option<Self::El>;
    fn is_zero(&self, a: &Self::El) -> bool {
        *a == self.zero()
    }
}

/// Prime field with word-size modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 63), "modulus out of range");
        Fp { p }
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulw(acc, b);
            }
            b = self.mulw(b, b);
            e >>= 1;
        }
        acc
    }

    fn mulw(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
}

impl FieldOps for Fp {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.mulw(a, b)
    }
    fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        // Fermat; p is prime throughout this crate.
        Some(self.pow(a, self.p - 2))
    }
}

/// Row echelon reduction in place; returns the pivot columns.
fn rref<F: FieldOps>(f: &F, m: &mut [Vec<F::El>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else { continue };
        m.swap(r, p);
        let inv = f.inv(m[r][c].clone()).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(x.clone(), inv.clone());
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = f.mul(m[r][j].clone(), factor.clone());
                    m[i][j] = f.sub(m[i][j].clone(), t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the right kernel `{x : m x = 0}` of a matrix over a finite field.
pub fn ff_kernel<F: FieldOps>(f: &F, m: &[Vec<F::El>]) -> Vec<Vec<F::El>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut work: Vec<Vec<F::El>> = m.to_vec();
    let pivots = rref(f, &mut work);
    let mut basis = Vec::new();
    let mut piv_of_col = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        piv_of_col[c] = Some(r);
    }
    for c in 0..cols {
        if piv_of_col[c].is_some() {
            continue;
        }
        let mut v = vec![f.zero(); cols];
        v[c] = f.one();
        for (pc, pr) in piv_of_col.iter().enumerate() {
            if let Some(pr) = pr {
                v[pc] = f.sub(f.zero(), work[*pr][c].clone());
            }
        }
        basis.push(v);
    }
    basis
}

/// Rank of a matrix over a finite field.
pub fn ff_rank<F: FieldOps>(f: &F, m: &[Vec<F::El>]) -> usize {
    let mut work: Vec<Vec<F::El>> = m.to_vec();
    rref(f, &mut work).len()
}

/// Solves `m x = b`; `None` when inconsistent.
pub fn ff_solve<F: FieldOps>(f: &F, m: &[Vec<F::El>], b: &[F::El]) -> Option<Vec<F::El>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<F::El>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None; // pivot in the rhs column
    }
    for i in pivots.len()..rows {
        if !f.is_zero(&aug[i][cols]) {
            return None;
        }
    }
    let mut x = vec![f.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_mod_two() {
        let f = Fp::new(2);
        // x + y + z = 0 over F_2: kernel dimension 2.
        let m = vec![vec![1u64, 1, 1]];
        let k = ff_kernel(&f, &m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: u64 = v.iter().sum();
            assert_eq!(s % 2, 0);
        }
    }

    #[test]
    fn solve_and_rank() {
        let f = Fp::new(5);
        let m = vec![vec![1u64, 2], vec![3, 4]];
        assert_eq!(ff_rank(&f, &m), 2);
        let x = ff_solve(&f, &m, &[1, 4]).unwrap();
        // x + 2y = 1, 3x + 4y = 4 mod 5
        assert_eq!((x[0] + 2 * x[1]) % 5, 1);
        assert_eq!((3 * x[0] + 4 * x[1]) % 5, 4);
    }

    #[test]
    fn inverse_via_fermat() {
        let f = Fp::new(101);
        for a in 1..101u64 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}
