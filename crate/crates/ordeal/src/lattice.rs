//! Full-rank lattices (fractional ideals) in an étale algebra.
//!
//! A `FracIdeal` is `(1/denom) * rowspan(basis)` with `basis` a full-rank
//! integer matrix in row Hermite form and `denom` minimal positive.  That
//! pair is canonical for the lattice, so equality and hashing are plain
//! structural comparisons; every operation renormalizes before returning.
//!
//! Products, colons, duals and intersections are all exact.  The colon and
//! intersection have two independent routes: the production route goes
//! through trace duality, the direct linear-system route is kept as an
//! oracle for the property suites and verification mode.

use crate::algebra::{AlgElement, EtaleAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{hnf, inverse_rational, snf, IntMatrix};
use crate::verify;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Fractional ideal (full-rank lattice) in an étale algebra.
#[derive(Clone)]
pub struct FracIdeal {
    alg: EtaleAlgebra,
    denom: BigInt,
    basis: IntMatrix,
}

/// Elementary divisors of a lattice quotient `I/J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    /// Nontrivial elementary divisors, each dividing the next.
    pub divisors: Vec<BigInt>,
    /// `[I : J]`, the product of the divisors.
    pub index: BigInt,
}

impl FracIdeal {
    /// Normalizing constructor: puts the span of `rows / denom` in canonical
    /// form.  Errors unless the rows span a full-rank lattice.
    pub fn new(alg: &EtaleAlgebra, denom: BigInt, rows: IntMatrix) -> Result<Self> {
        assert!(denom.is_positive(), "denominator must be positive");
        let n = alg.dim();
        let res = hnf(&rows);
        if res.rank != n {
            return Err(Error::NotFullRank { expected: n, got: res.rank });
        }
        let basis = IntMatrix::from_fn(n, n, |i, j| res.h[(i, j)].clone());
        let mut g = basis.content();
        g = g.gcd(&denom);
        let (basis, denom) = if g.is_one() {
            (basis, denom)
        } else {
            (
                IntMatrix::from_fn(n, n, |i, j| &basis[(i, j)] / &g),
                denom / &g,
            )
        };
        Ok(FracIdeal { alg: alg.clone(), denom, basis })
    }

    /// The lattice `Z[pi]` spanned by the power basis.
    pub fn power_lattice(alg: &EtaleAlgebra) -> Self {
        FracIdeal {
            alg: alg.clone(),
            denom: BigInt::one(),
            basis: IntMatrix::identity(alg.dim()),
        }
    }

    /// Span of the given elements; errors unless they have full rank.
    pub fn from_elements(alg: &EtaleAlgebra, elems: &[AlgElement]) -> Result<Self> {
        let n = alg.dim();
        let mut denom = BigInt::one();
        for e in elems {
            for c in &e.coords {
                denom = denom.lcm(c.denom());
            }
        }
        let rows = IntMatrix::from_fn(elems.len(), n, |i, j| {
            (&elems[i].coords[j] * BigRational::from(denom.clone())).to_integer()
        });
        FracIdeal::new(alg, denom, rows)
    }

    pub fn alg(&self) -> &EtaleAlgebra {
        &self.alg
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn basis_matrix(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn basis_element(&self, i: usize) -> AlgElement {
        let d = BigRational::from(self.denom.clone());
        AlgElement {
            coords: self.basis.row(i).iter().map(|c| BigRational::from(c.clone()) / &d).collect(),
        }
    }

    pub fn basis_elements(&self) -> Vec<AlgElement> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    /// Positive generator of `I ∩ Q` is `det/denom`-free; what callers
    /// actually need is the covolume `|det basis| / denom^n` as a rational.
    pub fn covolume(&self) -> BigRational {
        let det = self.basis.diagonal_product();
        let dn = num_traits::pow::pow(self.denom.clone(), self.dim());
        BigRational::new(det, dn)
    }

    // -- arithmetic --------------------------------------------------------

    pub fn sum(&self, other: &FracIdeal) -> FracIdeal {
        self.check_same(other);
        let d = self.denom.lcm(&other.denom);
        let a = self.basis.scale(&(&d / &self.denom));
        let b = other.basis.scale(&(&d / &other.denom));
        FracIdeal::new(&self.alg, d, a.vstack(&b)).expect("sum of full-rank lattices")
    }

    pub fn product(&self, other: &FracIdeal) -> FracIdeal {
        self.check_same(other);
        let n = self.dim();
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                rows.push(self.alg.mul_int(self.basis.row(i), other.basis.row(j)));
            }
        }
        let d = &self.denom * &other.denom;
        FracIdeal::new(&self.alg, d, IntMatrix::from_bigint_rows(rows))
            .expect("product of full-rank lattices")
    }

    /// `x * self` for a non-zero-divisor `x`.
    pub fn scale_element(&self, x: &AlgElement) -> Result<FracIdeal> {
        let (xd, xi) = x.clear_denominators();
        let n = self.dim();
        let rows: Vec<Vec<BigInt>> =
            (0..n).map(|i| self.alg.mul_int(self.basis.row(i), &xi)).collect();
        let d = &self.denom * xd;
        FracIdeal::new(&self.alg, d, IntMatrix::from_bigint_rows(rows))
            .map_err(|_| Error::NotInvertible)
    }

    pub fn scale_rational(&self, q: &BigRational) -> FracIdeal {
        assert!(!q.is_zero());
        let num = q.numer().abs();
        let den = q.denom().clone();
        FracIdeal::new(&self.alg, &self.denom * den, self.basis.scale(&num))
            .expect("scaling preserves rank")
    }

    /// Trace dual `{x : Tr(x * self) ⊆ Z}`.
    pub fn trace_dual(&self) -> FracIdeal {
        let g = self.alg.trace_gram();
        let m = g.mul(&self.basis.transpose());
        let inv = inverse_rational(&m).expect("trace form nondegenerate");
        // Dual basis rows: (G * B^T)^{-1}, scaled by denom.
        let mut dd = BigInt::one();
        for row in &inv {
            for c in row {
                dd = dd.lcm(c.denom());
            }
        }
        let n = self.dim();
        let rows = IntMatrix::from_fn(n, n, |i, j| {
            (&inv[i][j] * BigRational::from(&dd * &self.denom)).to_integer()
        });
        FracIdeal::new(&self.alg, dd, rows).expect("dual of full-rank lattice")
    }

    /// `(self : other) = {x : x * other ⊆ self}` via trace duality.
    pub fn colon(&self, other: &FracIdeal) -> FracIdeal {
        self.check_same(other);
        let res = other.product(&self.trace_dual()).trace_dual();
        verify::check("colon duality route agrees with kernel route", || {
            res == self.colon_kernel(other)
        });
        res
    }

    /// Direct linear-system route for the colon; oracle for [`colon`].
    pub fn colon_kernel(&self, other: &FracIdeal) -> FracIdeal {
        self.check_same(other);
        let n = self.dim();
        // Ambient bound: x * c ⊆ self for a non-zero-divisor c of other
        // confines x to c^{-1} * self.
        let c = other.nonzerodivisor();
        let cinv = self.alg.inverse(&c).expect("chosen element is a unit of K");
        let ambient = self.scale_element(&cinv).expect("scaling by a unit");

        // Conditions: for each ambient basis vector w_i and each basis
        // vector c_j of other, the product w_i c_j must lie in self.
        // Solutions u ∈ Z^n of u * Q ≡ 0 (mod Δ) for the assembled matrix.
        let self_inv = inverse_rational(&self.basis).expect("basis invertible");
        let mut cond_cols: Vec<Vec<BigRational>> = vec![Vec::new(); n];
        for j in 0..n {
            let cj = other.basis_element(j);
            for (i, col) in cond_cols.iter_mut().enumerate().take(n) {
                let w = ambient.basis_element(i);
                let prod = self.alg.mul(&w, &cj);
                // coordinates of prod in terms of self's basis
                for k in 0..n {
                    let mut coeff = BigRational::zero();
                    for (l, pc) in prod.coords.iter().enumerate() {
                        coeff += pc * &self_inv[l][k];
                    }
                    coeff *= BigRational::from(self.denom.clone());
                    col.push(coeff);
                }
            }
        }
        let mut delta = BigInt::one();
        for col in &cond_cols {
            for c in col {
                delta = delta.lcm(c.denom());
            }
        }
        let width = n * n;
        let q = IntMatrix::from_fn(n, width, |i, k| {
            (&cond_cols[i][k] * BigRational::from(delta.clone())).to_integer()
        });
        // Kernel of u ↦ u*Q mod Δ via the HNF transform of [Q; Δ·I].
        let mut stacked = q;
        let scaled_id = IntMatrix::identity(width).scale(&delta);
        stacked = stacked.vstack(&scaled_id);
        let res = hnf(&stacked);
        let mut sol_rows: Vec<Vec<BigInt>> = Vec::new();
        for r in 0..stacked.rows() {
            if res.h.is_zero_row(r) {
                sol_rows.push(res.transform.row(r)[..n].to_vec());
            }
        }
        let u = IntMatrix::from_bigint_rows(sol_rows);
        let combos = u.mul(&ambient.basis_matrix());
        FracIdeal::new(&self.alg, ambient.denom.clone(), combos).expect("colon is full rank")
    }

    /// Intersection via duality; the kernel route is the oracle.
    pub fn intersect(&self, other: &FracIdeal) -> FracIdeal {
        self.check_same(other);
        let res = self.trace_dual().sum(&other.trace_dual()).trace_dual();
        verify::check("intersection duality route agrees with kernel route", || {
            res == self.intersect_kernel(other)
        });
        res
    }

    /// Direct route: solve `u * A = v * B` over Z.
    pub fn intersect_kernel(&self, other: &FracIdeal) -> FracIdeal {
        self.check_same(other);
        let n = self.dim();
        let d = self.denom.lcm(&other.denom);
        let a = self.basis.scale(&(&d / &self.denom));
        let b = other.basis.scale(&(&d / &other.denom));
        let stacked = a.vstack(&b.scale(&BigInt::from(-1)));
        let res = hnf(&stacked);
        let mut rows = Vec::new();
        for r in 0..stacked.rows() {
            if res.h.is_zero_row(r) {
                let u = &res.transform.row(r)[..n];
                rows.push(IntMatrix::from_bigint_rows(vec![u.to_vec()]).mul(&a).row_vec(0));
            }
        }
        FracIdeal::new(&self.alg, d, IntMatrix::from_bigint_rows(rows))
            .expect("intersection of full-rank lattices is full rank")
    }

    /// Some basis combination that is not a zero divisor.
    pub fn nonzerodivisor(&self) -> AlgElement {
        for i in 0..self.dim() {
            let e = self.basis_element(i);
            if !self.alg.norm(&e).is_zero() {
                return e;
            }
        }
        // Small combinations; a non-zero-divisor exists off a finite union
        // of proper subspaces, so this terminates fast.
        let mut k = 1i64;
        loop {
            let mut acc = self.alg.zero();
            let mut w = BigInt::one();
            for i in 0..self.dim() {
                let e = self.basis_element(i);
                acc = self.alg.add(&acc, &self.alg.scale(&e, &BigRational::from(w.clone())));
                w *= k + i as i64 + 1;
            }
            if !self.alg.norm(&acc).is_zero() {
                return acc;
            }
            k += 1;
        }
    }

    // -- relations ---------------------------------------------------------

    pub fn contains(&self, x: &AlgElement) -> bool {
        // denom * x must be an integer combination of basis rows; the basis
        // is upper triangular, so eliminate columns left to right.
        let n = self.dim();
        let mut target: Vec<BigRational> = x
            .coords
            .iter()
            .map(|c| c * BigRational::from(self.denom.clone()))
            .collect();
        for i in 0..n {
            let piv = &self.basis[(i, i)];
            let t = &target[i];
            if t.is_zero() {
                continue;
            }
            let q = t / BigRational::from(piv.clone());
            if !q.is_integer() {
                return false;
            }
            for j in i..n {
                let s = &q * BigRational::from(self.basis[(i, j)].clone());
                target[j] -= s;
            }
        }
        target.iter().all(|t| t.is_zero())
    }

    pub fn contains_lattice(&self, other: &FracIdeal) -> bool {
        (0..self.dim()).all(|i| self.contains(&other.basis_element(i)))
    }

    /// Generalized index `[self : other]` as a positive rational.
    pub fn index(&self, other: &FracIdeal) -> BigRational {
        self.check_same(other);
        (other.covolume() / self.covolume()).abs()
    }

    /// Elementary divisors of `self/other`; requires `other ⊆ self`.
    pub fn quotient(&self, other: &FracIdeal) -> QuotientData {
        self.check_same(other);
        debug_assert!(self.contains_lattice(other), "quotient wants other ⊆ self");
        let n = self.dim();
        let binv = inverse_rational(&self.basis).expect("basis invertible");
        // C = (d_self / d_other) * B_other * B_self^{-1}, integral by containment.
        let scale = BigRational::new(self.denom.clone(), other.denom.clone());
        let c = IntMatrix::from_fn(n, n, |i, j| {
            let mut acc = BigRational::zero();
            for k in 0..n {
                acc += BigRational::from(other.basis[(i, k)].clone()) * &binv[k][j];
            }
            acc *= &scale;
            debug_assert!(acc.is_integer(), "containment violated");
            acc.to_integer()
        });
        let res = snf(&c);
        let mut divisors: Vec<BigInt> = res.divisors.into_iter().filter(|d| !d.is_one()).collect();
        divisors.sort();
        let index = divisors.iter().fold(BigInt::one(), |a, b| a * b);
        QuotientData { divisors, index }
    }

    fn check_same(&self, other: &FracIdeal) {
        assert!(self.alg.same_algebra(&other.alg), "ideals from different algebras");
    }

    /// Total-order key for deterministic sorting of ideal lists.
    pub fn cmp_key(&self) -> (BigInt, Vec<BigInt>) {
        let mut flat = Vec::with_capacity(self.dim() * self.dim());
        for i in 0..self.dim() {
            flat.extend_from_slice(self.basis.row(i));
        }
        (self.denom.clone(), flat)
    }

    // -- serialization -----------------------------------------------------

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "denom": self.denom.to_string(),
            "basis": (0..self.dim())
                .map(|i| self.basis.row(i).iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn from_json(alg: &EtaleAlgebra, v: &serde_json::Value) -> Result<FracIdeal> {
        let denom: BigInt = v["denom"]
            .as_str()
            .ok_or_else(|| Error::Precondition("denom must be a string".into()))?
            .parse()
            .map_err(|_| Error::Precondition("bad denom".into()))?;
        let rows = v["basis"]
            .as_array()
            .ok_or_else(|| Error::Precondition("basis must be an array".into()))?;
        let n = alg.dim();
        if rows.len() != n {
            return Err(Error::NotFullRank { expected: n, got: rows.len() });
        }
        let mut mat = IntMatrix::zero(n, n);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Precondition("basis row must be an array".into()))?;
            for (j, c) in row.iter().enumerate() {
                mat[(i, j)] = c
                    .as_str()
                    .ok_or_else(|| Error::Precondition("basis entry must be a string".into()))?
                    .parse()
                    .map_err(|_| Error::Precondition("bad basis entry".into()))?;
            }
        }
        FracIdeal::new(alg, denom, mat)
    }
}

impl PartialEq for FracIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.alg.same_algebra(&other.alg)
            && self.denom == other.denom
            && self.basis == other.basis
    }
}
impl Eq for FracIdeal {}

impl std::hash::Hash for FracIdeal {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.denom.hash(state);
        self.basis.hash(state);
    }
}

impl std::fmt::Debug for FracIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FracIdeal(1/{} * {:?})", self.denom, self.basis)
    }
}

/// The module generated over `order` by `gens`: span of `g * b` products.
pub fn ideal_from_generators(
    order: &crate::order::Order,
    gens: &[AlgElement],
) -> Result<FracIdeal> {
    let alg = order.alg().clone();
    let mut elems = Vec::with_capacity(gens.len() * order.lattice().dim());
    for g in gens {
        for b in order.lattice().basis_elements() {
            elems.push(alg.mul(g, &b));
        }
    }
    FracIdeal::from_elements(&alg, &elems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::poly::ZPoly;

    fn gaussian() -> EtaleAlgebra {
        make_algebra(&ZPoly::from_i64(&[1, 0, 1])).unwrap()
    }

    fn elem(_alg: &EtaleAlgebra, coords: &[(i64, i64)]) -> AlgElement {
        AlgElement {
            coords: coords
                .iter()
                .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        }
    }

    #[test]
    fn canonical_form_strips_common_factor() {
        let k = gaussian();
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let i = FracIdeal::new(&k, BigInt::from(4), m).unwrap();
        assert_eq!(*i.denom(), BigInt::from(2));
        assert_eq!(*i.basis_matrix(), IntMatrix::identity(2));
    }

    #[test]
    fn product_of_principal_ideals() {
        let k = gaussian();
        let z = FracIdeal::power_lattice(&k); // Z[i]
        // (1+i) Z[i]
        let x = elem(&k, &[(1, 1), (1, 1)]);
        let i = z.scale_element(&x).unwrap();
        let sq = i.product(&i);
        // (1+i)^2 = 2i, so the square is 2 Z[i]
        let two = z.scale_element(&elem(&k, &[(2, 1), (0, 1)])).unwrap();
        assert_eq!(sq, two);
        assert_eq!(z.index(&i), BigRational::from(BigInt::from(2)));
    }

    #[test]
    fn dual_is_involutive() {
        let k = gaussian();
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
        let i = FracIdeal::new(&k, BigInt::from(5), m).unwrap();
        assert_eq!(i.trace_dual().trace_dual(), i);
    }

    #[test]
    fn colon_routes_agree() {
        let k = gaussian();
        let z = FracIdeal::power_lattice(&k);
        let x = elem(&k, &[(1, 1), (1, 1)]);
        let i = z.scale_element(&x).unwrap();
        // (Z[i] : (1+i)Z[i]) = (1+i)^{-1} Z[i]
        let c1 = z.colon(&i);
        let c2 = z.colon_kernel(&i);
        assert_eq!(c1, c2);
        let inv = k.inverse(&x).unwrap();
        assert_eq!(c1, z.scale_element(&inv).unwrap());
        // (I : I) = Z[i]
        assert_eq!(i.colon(&i), z);
    }

    #[test]
    fn intersect_routes_agree() {
        let k = gaussian();
        let z = FracIdeal::power_lattice(&k);
        let a = z.scale_element(&elem(&k, &[(2, 1), (0, 1)])).unwrap();
        let b = z.scale_element(&elem(&k, &[(1, 1), (1, 1)])).unwrap();
        assert_eq!(a.intersect(&b), a.intersect_kernel(&b));
        // 2Z[i] ⊆ (1+i)Z[i], so the intersection is 2Z[i]
        assert_eq!(a.intersect(&b), a);
    }

    #[test]
    fn membership_and_quotient() {
        let k = gaussian();
        let z = FracIdeal::power_lattice(&k);
        let two = z.scale_rational(&BigRational::from(BigInt::from(2)));
        assert!(z.contains_lattice(&two));
        assert!(!two.contains_lattice(&z));
        let q = z.quotient(&two);
        assert_eq!(q.divisors, vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(q.index, BigInt::from(4));
        assert!(z.contains(&elem(&k, &[(3, 1), (-7, 1)])));
        assert!(!z.contains(&elem(&k, &[(1, 2), (0, 1)])));
    }

    #[test]
    fn json_round_trip() {
        let k = gaussian();
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
        let i = FracIdeal::new(&k, BigInt::from(5), m).unwrap();
        let j = FracIdeal::from_json(&k, &i.to_json()).unwrap();
        assert_eq!(i, j);
    }
}
