//! Orders in étale algebras: the monogenic order, the maximal order, prime
//! ideals above a rational prime, conductors, and locality tests.
//!
//! The maximal order comes from radical-idealizer iteration at each prime
//! whose square divides the discriminant.  Primes above p come from the
//! block decomposition of the finite algebra S/pS; no polynomial factoring
//! over Q is ever needed, so product algebras are handled uniformly.

use crate::algebra::{AlgElement, EtaleAlgebra};
use crate::error::{Error, Result};
use crate::fpalg::FpAlgebra;
use crate::lattice::FracIdeal;
use crate::linalg::{inverse_rational, IntMatrix};
use crate::poly::factor::{factor, factor_u64};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

struct OrderInner {
    lat: FracIdeal,
    basis_inv: OnceLock<Vec<Vec<BigRational>>>,
    conductor: OnceLock<Result<FracIdeal>>,
    primes: Mutex<BTreeMap<u64, Arc<Vec<PrimeIdeal>>>>,
}

/// An order: a full-rank subring of the algebra containing 1.
#[derive(Clone)]
pub struct Order {
    inner: Arc<OrderInner>,
}

/// A maximal ideal of an order, kept with its residue data.
#[derive(Clone)]
pub struct PrimeIdeal {
    order: Order,
    p: u64,
    lat: FracIdeal,
    residue_degree: usize,
}

impl Order {
    /// Wraps a lattice after checking it is a ring containing 1.
    pub fn new(lat: FracIdeal) -> Result<Order> {
        let alg = lat.alg().clone();
        if !lat.contains(&alg.one()) {
            return Err(Error::NotARing);
        }
        let n = lat.dim();
        for i in 0..n {
            for j in i..n {
                let prod = alg.mul(&lat.basis_element(i), &lat.basis_element(j));
                if !lat.contains(&prod) {
                    return Err(Error::NotARing);
                }
            }
        }
        Ok(Order::unchecked(lat))
    }

    pub(crate) fn unchecked(lat: FracIdeal) -> Order {
        Order {
            inner: Arc::new(OrderInner {
                lat,
                basis_inv: OnceLock::new(),
                conductor: OnceLock::new(),
                primes: Mutex::new(BTreeMap::new()),
            }),
        }
    }

    /// The monogenic order Z[pi] on the power basis.
    pub fn equation_order(alg: &EtaleAlgebra) -> Order {
        alg.inner
            .equation_order
            .get_or_init(|| Order::unchecked(FracIdeal::power_lattice(alg)))
            .clone()
    }

    /// The maximal order, by idealizer iteration at each squareful prime of
    /// the discriminant.  Fails only if the discriminant cannot be factored.
    pub fn maximal_order(alg: &EtaleAlgebra) -> Result<Order> {
        alg.inner
            .maximal_order
            .get_or_init(|| compute_maximal_order(alg))
            .clone()
    }

    pub fn alg(&self) -> &EtaleAlgebra {
        self.inner.lat.alg()
    }

    pub fn lattice(&self) -> &FracIdeal {
        &self.inner.lat
    }

    pub fn dim(&self) -> usize {
        self.inner.lat.dim()
    }

    /// Coordinates of `x` on the order's basis, if `x` lies in the order.
    pub fn coords(&self, x: &AlgElement) -> Option<Vec<BigInt>> {
        let inv = self.basis_inv();
        let n = self.dim();
        let d = BigRational::from(self.inner.lat.denom().clone());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = BigRational::zero();
            for (l, c) in x.coords.iter().enumerate() {
                acc += c * &inv[l][k];
            }
            acc *= &d;
            if !acc.is_integer() {
                return None;
            }
            out.push(acc.to_integer());
        }
        Some(out)
    }

    fn basis_inv(&self) -> &Vec<Vec<BigRational>> {
        self.inner
            .basis_inv
            .get_or_init(|| inverse_rational(self.inner.lat.basis_matrix()).expect("full rank"))
    }

    /// The finite algebra S/pS on the order's basis images.
    pub fn algebra_mod_p(&self, p: u64) -> FpAlgebra {
        let n = self.dim();
        let pb = BigInt::from(p);
        let redc = |v: &BigInt| -> u64 {
            let r = v.mod_floor(&pb);
            r.to_u64().expect("residue fits")
        };
        let mut mult = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if j < i {
                    mult[i][j] = mult[j][i].clone();
                    continue;
                }
                let prod = self
                    .alg()
                    .mul(&self.inner.lat.basis_element(i), &self.inner.lat.basis_element(j));
                let coords = self.coords(&prod).expect("order closed under products");
                mult[i][j] = coords.iter().map(redc).collect();
            }
        }
        let one = self
            .coords(&self.alg().one())
            .expect("order contains one")
            .iter()
            .map(redc)
            .collect();
        FpAlgebra::new(p, mult, one)
    }

    /// Lifts an F_p-subspace of S/pS (rows on the order basis) to the
    /// lattice p*S + <rows>.
    pub fn lift_subspace(&self, p: u64, rows: &[Vec<u64>]) -> FracIdeal {
        let n = self.dim();
        let b = self.inner.lat.basis_matrix();
        let mut stacked = b.scale(&BigInt::from(p));
        if !rows.is_empty() {
            let r = IntMatrix::from_fn(rows.len(), n, |i, j| BigInt::from(rows[i][j]));
            stacked = stacked.vstack(&r.mul(b));
        }
        FracIdeal::new(self.alg(), self.inner.lat.denom().clone(), stacked)
            .expect("contains p * order")
    }

    /// Maximal ideals of the order above `p`, sorted deterministically.
    pub fn primes_above(&self, p: u64) -> Result<Arc<Vec<PrimeIdeal>>> {
        if let Some(c) = self.inner.primes.lock().unwrap().get(&p) {
            return Ok(c.clone());
        }
        let a = self.algebra_mod_p(p);
        let ms = a.maximal_ideals()?;
        let mut out = Vec::with_capacity(ms.len());
        for m in &ms {
            let lat = self.lift_subspace(p, m.subspace.rows());
            out.push(PrimeIdeal {
                order: self.clone(),
                p,
                lat,
                residue_degree: m.residue_degree,
            });
        }
        out.sort_by(|x, y| x.lat.cmp_key().cmp(&y.lat.cmp_key()));
        let arc = Arc::new(out);
        self.inner.primes.lock().unwrap().insert(p, arc.clone());
        Ok(arc)
    }

    /// The conductor (S : O_K), the largest O_K-ideal inside S.
    pub fn conductor(&self) -> Result<FracIdeal> {
        self.inner
            .conductor
            .get_or_init(|| {
                let ok = Order::maximal_order(self.alg())?;
                Ok(self.inner.lat.colon(ok.lattice()))
            })
            .clone()
    }

    /// Index [O_K : S] as a positive integer.
    pub fn index_in_maximal(&self) -> Result<BigInt> {
        let ok = Order::maximal_order(self.alg())?;
        let idx = ok.lattice().index(&self.inner.lat);
        debug_assert!(idx.is_integer());
        Ok(idx.to_integer())
    }

    pub fn is_maximal(&self) -> Result<bool> {
        Ok(self.index_in_maximal()?.is_one())
    }

    /// Rational primes that can carry non-invertible maximal ideals: the
    /// prime divisors of [O_K : S].
    pub fn singular_primes(&self) -> Result<Vec<u64>> {
        let idx = self.index_in_maximal()?;
        if idx.is_one() {
            return Ok(Vec::new());
        }
        let fs = factor(&idx)?;
        let mut ps = Vec::new();
        for (q, _) in fs {
            ps.push(q.to_u64().ok_or_else(|| {
                Error::PrimeTooLarge(format!("index prime {} exceeds u64", q))
            })?);
        }
        Ok(ps)
    }

    /// The non-invertible maximal ideals of the order.
    pub fn noninvertible_primes(&self) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        for p in self.singular_primes()? {
            for pr in self.primes_above(p)?.iter() {
                if !pr.is_invertible()? {
                    out.push(pr.clone());
                }
            }
        }
        Ok(out)
    }

    /// The multiplicator ring (I : I) of a lattice, as an order.
    pub fn multiplicator_ring(lat: &FracIdeal) -> Order {
        Order::unchecked(lat.colon(lat))
    }
}

impl PartialEq for Order {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.lat == other.inner.lat
    }
}
impl Eq for Order {}

impl std::hash::Hash for Order {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.lat.hash(state);
    }
}

impl std::fmt::Debug for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Order({:?})", self.inner.lat)
    }
}

impl PrimeIdeal {
    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lattice(&self) -> &FracIdeal {
        &self.lat
    }

    /// Degree of (S/p) over F_p.
    pub fn residue_degree(&self) -> usize {
        self.residue_degree
    }

    /// Size of the residue field as a bigint.
    pub fn residue_size(&self) -> BigInt {
        num_traits::pow::pow(BigInt::from(self.p), self.residue_degree)
    }

    /// Invertibility of the maximal ideal: p * (S : p) = S.
    pub fn is_invertible(&self) -> Result<bool> {
        let s = self.order.lattice();
        let t = s.colon(&self.lat);
        Ok(self.lat.product(&t) == *s)
    }

    /// Invertibility via coprimality with the conductor: p + (S : O_K) = S.
    pub fn is_invertible_via_conductor(&self) -> Result<bool> {
        let f = self.order.conductor()?;
        Ok(self.lat.sum(&f) == *self.order.lattice())
    }

    /// Invertibility via the residue dimension of O_K: the ideal is
    /// invertible iff O_K/(p O_K) is one-dimensional over S/p.
    pub fn is_invertible_via_residue_dim(&self) -> Result<bool> {
        let ok = Order::maximal_order(self.order.alg())?;
        Ok(dim_quotient_at_prime(ok.lattice(), self) == 1)
    }

    /// The endomorphism ring (p : p); equals S exactly when invertible.
    pub fn end_ring(&self) -> Order {
        Order::multiplicator_ring(&self.lat)
    }
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.lat == other.lat
    }
}
impl Eq for PrimeIdeal {}

impl std::fmt::Debug for PrimeIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PrimeIdeal(p={}, f={}, {:?})", self.p, self.residue_degree, self.lat)
    }
}

/// dim over S/p of M/(p M) for a full lattice M: the index [M : p M] is
/// p^(f*d) and d is read off the exponent.
pub fn dim_quotient_at_prime(m: &FracIdeal, pr: &PrimeIdeal) -> usize {
    let pm = pr.lat.product(m);
    let idx = m.index(&pm);
    debug_assert!(idx.is_integer());
    let idx = idx.to_integer();
    let p = BigInt::from(pr.p);
    let mut e = 0usize;
    let mut v = idx;
    while v.is_multiple_of(&p) && !v.is_one() {
        v /= &p;
        e += 1;
    }
    debug_assert!(v.is_one(), "index of M/pM is not a p-power");
    debug_assert!(e % pr.residue_degree == 0);
    e / pr.residue_degree
}

/// Local containment at a maximal ideal: b ⊆ a after localizing at `pr`.
pub fn local_contains(a: &FracIdeal, b: &FracIdeal, pr: &PrimeIdeal) -> bool {
    // 1 lies in (a : b) localized at pr iff (a : b) ∩ S escapes pr.
    let c = a.colon(b);
    let s = pr.order().lattice();
    let cs = c.intersect(s);
    !pr.lattice().contains_lattice(&cs)
}

/// Local equality at a maximal ideal.
pub fn local_eq(a: &FracIdeal, b: &FracIdeal, pr: &PrimeIdeal) -> bool {
    local_contains(a, b, pr) && local_contains(b, a, pr)
}

fn compute_maximal_order(alg: &EtaleAlgebra) -> Result<Order> {
    let mut ord = Order::equation_order(alg);
    let disc = alg.disc().clone();
    let fs = factor(&disc.abs())?;
    for (q, e) in fs {
        if e < 2 {
            continue;
        }
        let p = q
            .to_u64()
            .ok_or_else(|| Error::PrimeTooLarge(format!("discriminant prime {} exceeds u64", q)))?;
        loop {
            let a = ord.algebra_mod_p(p);
            let rad = a.radical();
            if rad.dim() == 0 {
                break;
            }
            let ideal = ord.lift_subspace(p, rad.rows());
            let bigger = Order::multiplicator_ring(&ideal);
            if bigger.lattice() == ord.lattice() {
                break;
            }
            ord = bigger;
        }
    }
    // [O : Z[pi]]^2 must divide the discriminant
    if cfg!(debug_assertions) {
        let idx = ord.lattice().index(&FracIdeal::power_lattice(alg));
        debug_assert!(idx.is_integer());
        let idx = idx.to_integer();
        debug_assert!(alg.disc().is_multiple_of(&(&idx * &idx)));
    }
    Ok(ord)
}

/// Convenience: u64 primality via the integer factor machinery.
pub fn is_prime_u64(p: u64) -> bool {
    factor_u64(&BigInt::from(p)).map(|f| f.len() == 1 && f[0].1 == 1).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::poly::ZPoly;

    fn alg(coeffs: &[i64]) -> EtaleAlgebra {
        make_algebra(&ZPoly::from_i64(coeffs)).unwrap()
    }

    #[test]
    fn gaussian_is_already_maximal() {
        let k = alg(&[1, 0, 1]);
        let ok = Order::maximal_order(&k).unwrap();
        assert_eq!(ok.lattice(), Order::equation_order(&k).lattice());
        assert!(ok.is_maximal().unwrap());
    }

    #[test]
    fn maximalize_z_3i() {
        // Z[3i] = Z[x]/(x^2+9) has index 3 in Z[i]
        let k = alg(&[9, 0, 1]);
        let s = Order::equation_order(&k);
        assert_eq!(s.index_in_maximal().unwrap(), BigInt::from(3));
        let ok = Order::maximal_order(&k).unwrap();
        assert!(ok.is_maximal().unwrap());
        // conductor of Z[3i] is 3 Z[i]
        let f = s.conductor().unwrap();
        assert_eq!(
            f,
            ok.lattice().scale_rational(&BigRational::from(BigInt::from(3)))
        );
    }

    #[test]
    fn split_primes_in_gaussian_integers() {
        let k = alg(&[1, 0, 1]);
        let ok = Order::maximal_order(&k).unwrap();
        // 5 splits, 3 is inert, 2 ramifies
        assert_eq!(ok.primes_above(5).unwrap().len(), 2);
        let inert = ok.primes_above(3).unwrap();
        assert_eq!(inert.len(), 1);
        assert_eq!(inert[0].residue_degree(), 2);
        let ram = ok.primes_above(2).unwrap();
        assert_eq!(ram.len(), 1);
        assert_eq!(ram[0].residue_degree(), 1);
        for p in [2u64, 3, 5] {
            for pr in ok.primes_above(p).unwrap().iter() {
                assert!(pr.is_invertible().unwrap());
            }
        }
    }

    #[test]
    fn singular_prime_of_z_3i() {
        let k = alg(&[9, 0, 1]);
        let s = Order::equation_order(&k);
        assert_eq!(s.singular_primes().unwrap(), vec![3]);
        let ps = s.primes_above(3).unwrap();
        assert_eq!(ps.len(), 1);
        let pr = &ps[0];
        assert!(!pr.is_invertible().unwrap());
        assert!(!pr.is_invertible_via_conductor().unwrap());
        assert!(!pr.is_invertible_via_residue_dim().unwrap());
        // (p : p) = Z[i] here
        let ok = Order::maximal_order(&k).unwrap();
        assert_eq!(pr.end_ring().lattice(), ok.lattice());
        assert_eq!(dim_quotient_at_prime(ok.lattice(), pr), 2);
    }

    #[test]
    fn primes_in_split_algebra() {
        // x^2 - 1: Q x Q, equation order has index 2 in Z x Z
        let k = alg(&[-1, 0, 1]);
        let s = Order::equation_order(&k);
        assert_eq!(s.index_in_maximal().unwrap(), BigInt::from(2));
        let ok = Order::maximal_order(&k).unwrap();
        assert_eq!(ok.primes_above(3).unwrap().len(), 2);
        assert_eq!(ok.primes_above(2).unwrap().len(), 2);
        let sp = s.primes_above(2).unwrap();
        assert_eq!(sp.len(), 1);
        assert!(!sp[0].is_invertible().unwrap());
    }

    #[test]
    fn local_containment_detects_localization() {
        let k = alg(&[9, 0, 1]);
        let s = Order::equation_order(&k);
        let pr3 = s.primes_above(3).unwrap()[0].clone();
        let ok = Order::maximal_order(&k).unwrap();
        // at the singular prime, O_K strictly contains S locally
        assert!(local_contains(ok.lattice(), s.lattice(), &pr3));
        assert!(!local_contains(s.lattice(), ok.lattice(), &pr3));
        // away from it, equal: take an invertible prime above 5
        for pr in s.primes_above(5).unwrap().iter() {
            assert!(local_eq(ok.lattice(), s.lattice(), pr));
        }
    }
}
