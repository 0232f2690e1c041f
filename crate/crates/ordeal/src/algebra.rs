//! The ambient étale algebra `K = Q[x]/(f)`.
//!
//! `EtaleAlgebra` is a shared context object: elements are plain coordinate
//! vectors in the power basis `1, pi, ..., pi^(n-1)` and all arithmetic goes
//! through the algebra, which owns the reduction table for powers of `pi`,
//! the trace form, and lazily computed data (certified roots, the maximal
//! order) shared across clones.

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::poly::ZPoly;
use crate::roots::{certified_roots, RootSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

pub(crate) struct AlgebraInner {
    modulus: ZPoly,
    dim: usize,
    /// Row k holds the power-basis coordinates of pi^k, k < 2*dim - 1.
    pow_table: Vec<Vec<BigInt>>,
    /// Tr(pi^k) for k < 2*dim - 1.
    trace_pows: Vec<BigInt>,
    /// Gram matrix of the trace form on the power basis.
    gram: IntMatrix,
    disc: BigInt,
    gram_inv: OnceLock<Vec<Vec<BigRational>>>,
    signature: OnceLock<(usize, usize)>,
    roots: Mutex<BTreeMap<u32, Arc<RootSet>>>,
    pub(crate) maximal_order: OnceLock<Result<crate::order::Order>>,
    pub(crate) equation_order: OnceLock<crate::order::Order>,
}

/// Étale algebra over Q defined by a monic squarefree integer polynomial.
#[derive(Clone)]
pub struct EtaleAlgebra {
    pub(crate) inner: Arc<AlgebraInner>,
}

/// Element of an [`EtaleAlgebra`], as rational power-basis coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgElement {
    pub coords: Vec<BigRational>,
}

impl AlgElement {
    pub fn from_rational_coords(coords: Vec<BigRational>) -> Self {
        AlgElement { coords }
    }

    pub fn from_integer_coords(coords: &[BigInt]) -> Self {
        AlgElement { coords: coords.iter().map(|c| BigRational::from(c.clone())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Least positive d with d * self integral, plus the integer coordinates.
    pub fn clear_denominators(&self) -> (BigInt, Vec<BigInt>) {
        let mut d = BigInt::one();
        for c in &self.coords {
            d = num_integer::lcm(d, c.denom().clone());
        }
        let ints = self.coords.iter().map(|c| (c * BigRational::from(d.clone())).to_integer()).collect();
        (d, ints)
    }
}

/// Builds the algebra `Q[x]/(f)`; `f` must be monic, squarefree, nonconstant.
pub fn make_algebra(f: &ZPoly) -> Result<EtaleAlgebra> {
    EtaleAlgebra::new(f)
}

impl EtaleAlgebra {
    pub fn new(f: &ZPoly) -> Result<Self> {
        let n = f.degree();
        if n == 0 {
            return Err(Error::InvalidPolynomial("degree must be positive".into()));
        }
        if !f.is_monic() {
            return Err(Error::InvalidPolynomial("polynomial must be monic".into()));
        }
        if !f.is_squarefree() {
            return Err(Error::InvalidPolynomial("polynomial must be squarefree".into()));
        }

        // pi^k reduced against f, for k up to 2n-2 (products of basis powers).
        let mut pow_table: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n - 1);
        for k in 0..n {
            let mut row = vec![BigInt::zero(); n];
            row[k] = BigInt::one();
            pow_table.push(row);
        }
        for k in n..2 * n - 1 {
            // pi^k = pi * pi^(k-1); reduce the overflow term via
            // pi^n = -(c_0 + c_1 pi + ... + c_{n-1} pi^(n-1)).
            let prev = pow_table[k - 1].clone();
            let mut row = vec![BigInt::zero(); n];
            for j in 0..n - 1 {
                row[j + 1] = prev[j].clone();
            }
            let top = prev[n - 1].clone();
            if !top.is_zero() {
                for j in 0..n {
                    row[j] -= &top * f.coeff(j);
                }
            }
            pow_table.push(row);
        }

        // Traces of powers via companion-matrix powers; n is small and this
        // avoids Newton-identity sign conventions.
        let companion = IntMatrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -f.coeff(i)
            } else if i == j + 1 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        let mut trace_pows = Vec::with_capacity(2 * n - 1);
        let mut power = IntMatrix::identity(n);
        for _ in 0..2 * n - 1 {
            let tr = (0..n).map(|i| power[(i, i)].clone()).sum::<BigInt>();
            trace_pows.push(tr);
            power = power.mul(&companion);
        }

        let gram = IntMatrix::from_fn(n, n, |i, j| trace_pows[i + j].clone());
        let disc = f.discriminant();
        debug_assert_eq!(crate::linalg::det_bareiss(&gram), disc);

        Ok(EtaleAlgebra {
            inner: Arc::new(AlgebraInner {
                modulus: f.clone(),
                dim: n,
                pow_table,
                trace_pows,
                gram,
                disc,
                gram_inv: OnceLock::new(),
                signature: OnceLock::new(),
                roots: Mutex::new(BTreeMap::new()),
                maximal_order: OnceLock::new(),
                equation_order: OnceLock::new(),
            }),
        })
    }

    pub fn modulus(&self) -> &ZPoly {
        &self.inner.modulus
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn disc(&self) -> &BigInt {
        &self.inner.disc
    }

    /// Gram matrix `Tr(pi^i pi^j)` of the trace form on the power basis.
    pub fn trace_gram(&self) -> &IntMatrix {
        &self.inner.gram
    }

    pub(crate) fn trace_gram_inverse(&self) -> &Vec<Vec<BigRational>> {
        self.inner.gram_inv.get_or_init(|| {
            crate::linalg::inverse_rational(&self.inner.gram)
                .expect("trace form of a squarefree polynomial is nondegenerate")
        })
    }

    /// `(r1, r2)`: number of real embeddings and conjugate pairs.
    pub fn signature(&self) -> (usize, usize) {
        *self.inner.signature.get_or_init(|| {
            let r1 = self.inner.modulus.count_real_roots();
            (r1, (self.inner.dim - r1) / 2)
        })
    }

    /// Short printable identity, used in cache keys and reports.
    pub fn fingerprint(&self) -> String {
        self.inner
            .modulus
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn same_algebra(&self, other: &EtaleAlgebra) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.modulus == other.inner.modulus
    }

    // -- elements ----------------------------------------------------------

    pub fn zero(&self) -> AlgElement {
        AlgElement { coords: vec![BigRational::zero(); self.inner.dim] }
    }

    pub fn one(&self) -> AlgElement {
        let mut e = self.zero();
        e.coords[0] = BigRational::one();
        e
    }

    /// The class of `x`, the distinguished generator.
    pub fn gen(&self) -> AlgElement {
        let mut e = self.zero();
        if self.inner.dim > 1 {
            e.coords[1] = BigRational::one();
        } else {
            // dim 1: pi is the image of x, a rational number.
            e.coords[0] = BigRational::from(-self.inner.modulus.coeff(0));
        }
        e
    }

    pub fn from_integer(&self, k: &BigInt) -> AlgElement {
        let mut e = self.zero();
        e.coords[0] = BigRational::from(k.clone());
        e
    }

    pub fn add(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        AlgElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        AlgElement {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self, a: &AlgElement) -> AlgElement {
        AlgElement { coords: a.coords.iter().map(|x| -x.clone()).collect() }
    }

    pub fn scale(&self, a: &AlgElement, s: &BigRational) -> AlgElement {
        AlgElement { coords: a.coords.iter().map(|x| x * s).collect() }
    }

    pub fn mul(&self, a: &AlgElement, b: &AlgElement) -> AlgElement {
        let n = self.inner.dim;
        assert_eq!(a.coords.len(), n);
        assert_eq!(b.coords.len(), n);
        // Convolution followed by reduction through the power table.
        let mut conv = vec![BigRational::zero(); 2 * n - 1];
        for i in 0..n {
            if a.coords[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b.coords[j].is_zero() {
                    conv[i + j] += &a.coords[i] * &b.coords[j];
                }
            }
        }
        let mut out = vec![BigRational::zero(); n];
        for (k, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &self.inner.pow_table[k][j];
                if !t.is_zero() {
                    out[j] += &c * BigRational::from(t.clone());
                }
            }
        }
        AlgElement { coords: out }
    }

    /// Product of integer coordinate vectors, the hot path for lattice work.
    pub fn mul_int(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.inner.dim;
        let mut conv = vec![BigInt::zero(); 2 * n - 1];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[j].is_zero() {
                    conv[i + j] += &a[i] * &b[j];
                }
            }
        }
        let mut out = vec![BigInt::zero(); n];
        for (k, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &self.inner.pow_table[k][j];
                if !t.is_zero() {
                    out[j] += &c * t;
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &AlgElement, mut e: u64) -> AlgElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn trace(&self, a: &AlgElement) -> BigRational {
        let mut t = BigRational::zero();
        for (c, tp) in a.coords.iter().zip(&self.inner.trace_pows) {
            if !c.is_zero() {
                t += c * BigRational::from(tp.clone());
            }
        }
        t
    }

    /// Matrix of multiplication by `a`: row i is the coordinate vector of
    /// `a * pi^i`, so a row vector `y` maps to `y * M`.
    pub fn regular_rep(&self, a: &AlgElement) -> Vec<Vec<BigRational>> {
        let n = self.inner.dim;
        let mut rows = Vec::with_capacity(n);
        let mut current = a.clone();
        for i in 0..n {
            rows.push(current.coords.clone());
            if i + 1 < n {
                current = self.mul_by_gen(&current);
            }
        }
        rows
    }

    fn mul_by_gen(&self, a: &AlgElement) -> AlgElement {
        let n = self.inner.dim;
        let mut out = vec![BigRational::zero(); n];
        for j in 0..n - 1 {
            out[j + 1] = a.coords[j].clone();
        }
        let top = a.coords[n - 1].clone();
        if !top.is_zero() {
            for j in 0..n {
                out[j] -= &top * BigRational::from(self.inner.modulus.coeff(j));
            }
        }
        AlgElement { coords: out }
    }

    /// Determinant of the regular representation.
    pub fn norm(&self, a: &AlgElement) -> BigRational {
        rational_det(self.regular_rep(a))
    }

    /// Multiplicative inverse; errors on zero divisors and zero.
    pub fn inverse(&self, a: &AlgElement) -> Result<AlgElement> {
        let n = self.inner.dim;
        let rep = self.regular_rep(a);
        // Solve y * rep = e0, i.e. rep^T x = e0.
        let cols: Vec<Vec<BigRational>> =
            (0..n).map(|j| (0..n).map(|i| rep[i][j].clone()).collect()).collect();
        let mut rhs = vec![BigRational::zero(); n];
        rhs[0] = BigRational::one();
        let sol = crate::linalg::solve_exact_rational(&cols, &rhs).ok_or(Error::NotInvertible)?;
        let cand = AlgElement { coords: sol };
        if self.mul(&cand, a) != self.one() {
            return Err(Error::NotInvertible);
        }
        Ok(cand)
    }

    pub fn is_zero_divisor(&self, a: &AlgElement) -> bool {
        !a.is_zero() && self.norm(a).is_zero()
    }

    // -- roots -------------------------------------------------------------

    /// Certified complex roots at `precision >= 64` bits, cached per precision.
    pub fn complex_roots(&self, precision: u32) -> Result<Arc<RootSet>> {
        let precision = precision.max(64);
        let mut cache = self.inner.roots.lock().unwrap();
        if let Some(r) = cache.get(&precision) {
            return Ok(r.clone());
        }
        let set = Arc::new(certified_roots(&self.inner.modulus, precision)?);
        cache.insert(precision, set.clone());
        Ok(set)
    }

    /// True when the unit rank of the maximal order is certifiably zero:
    /// the algebra splits (over Q) into copies of Q and at most one
    /// imaginary quadratic field.  Signature alone cannot separate, say, a
    /// quartic CM field from a product of two imaginary quadratics, so the
    /// certificate splits off integer roots exactly and requires the
    /// remainder to be trivial or an imaginary quadratic.
    pub fn unit_rank_is_zero(&self) -> Option<bool> {
        let f = &self.inner.modulus;
        let n = self.inner.dim;
        let (r1, r2) = self.signature();
        if r2 == 0 {
            // Totally real: rank 0 iff every component is Q.
            let roots = f.integer_roots()?;
            return Some(roots.len() == n);
        }
        if r2 == 1 {
            let roots = f.integer_roots()?;
            return Some(roots.len() == r1);
        }
        Some(false)
    }
}

impl PartialEq for EtaleAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other)
    }
}
impl Eq for EtaleAlgebra {}

impl std::fmt::Debug for EtaleAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EtaleAlgebra(Q[x]/({:?}))", self.inner.modulus)
    }
}

fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &factor;
                m[i][j] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian() -> EtaleAlgebra {
        make_algebra(&ZPoly::from_i64(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(make_algebra(&ZPoly::from_i64(&[1, 2, 1])).is_err()); // (x+1)^2
        assert!(make_algebra(&ZPoly::from_i64(&[1, 0, 2])).is_err()); // not monic
        assert!(make_algebra(&ZPoly::from_i64(&[5])).is_err()); // constant
    }

    #[test]
    fn gaussian_arithmetic() {
        let k = gaussian();
        let i = k.gen();
        let m1 = k.mul(&i, &i);
        assert_eq!(m1, k.neg(&k.one())); // i^2 = -1
        assert_eq!(k.trace(&i), BigRational::zero());
        assert_eq!(k.trace(&k.one()), BigRational::from(BigInt::from(2)));
        let inv = k.inverse(&i).unwrap();
        assert_eq!(inv, k.neg(&i)); // 1/i = -i
        assert_eq!(k.norm(&i), BigRational::one()); // N(i) = det of rotation
    }

    #[test]
    fn zero_divisors_in_split_algebra() {
        // x^2 - 1 = (x-1)(x+1); (pi-1) is a zero divisor.
        let k = make_algebra(&ZPoly::from_i64(&[-1, 0, 1])).unwrap();
        let z = k.sub(&k.gen(), &k.one());
        assert!(k.is_zero_divisor(&z));
        assert!(k.inverse(&z).is_err());
        assert_eq!(k.norm(&z), BigRational::zero());
    }

    #[test]
    fn trace_gram_matches_disc() {
        let f = ZPoly::from_i64(&[1, -3, 0, 1]);
        let k = make_algebra(&f).unwrap();
        assert_eq!(crate::linalg::det_bareiss(k.trace_gram()), f.discriminant());
    }

    #[test]
    fn degree_one_algebra() {
        // Q[x]/(x - 3): pi = 3.
        let k = make_algebra(&ZPoly::from_i64(&[-3, 1])).unwrap();
        let pi = k.gen();
        assert_eq!(pi.coords[0], BigRational::from(BigInt::from(3)));
        assert_eq!(k.norm(&pi), BigRational::from(BigInt::from(3)));
        assert_eq!(k.mul(&pi, &pi).coords[0], BigRational::from(BigInt::from(9)));
    }

    #[test]
    fn unit_rank_certificates() {
        let imquad = gaussian();
        assert_eq!(imquad.unit_rank_is_zero(), Some(true));
        let realquad = make_algebra(&ZPoly::from_i64(&[-2, 0, 1])).unwrap();
        assert_eq!(realquad.unit_rank_is_zero(), Some(false));
        let split = make_algebra(&ZPoly::from_i64(&[-1, 0, 1])).unwrap();
        assert_eq!(split.unit_rank_is_zero(), Some(true)); // Q x Q
        let mixed = make_algebra(&ZPoly::from_i64(&[-2, 1, 2, 1])).unwrap();
        // x^3 + 2x^2 + x - 2 has one real root (irrational) and a complex pair.
        assert_eq!(mixed.signature().0, 1);
        assert_eq!(mixed.unit_rank_is_zero(), Some(false));
    }

    #[test]
    fn regular_rep_row_convention() {
        let k = gaussian();
        let i = k.gen();
        let rep = k.regular_rep(&i);
        // rows: i*1 = i, i*i = -1
        assert_eq!(rep[0], vec![BigRational::zero(), BigRational::one()]);
        assert_eq!(rep[1], vec![-BigRational::one(), BigRational::zero()]);
    }
}
