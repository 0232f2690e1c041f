//! Finite residue rings of an order modulo a full ideal, their unit
//! counts, and the unit-group indices feeding the Picard size formula.

use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::lattice::FracIdeal;
use crate::linalg::hnf;
use crate::linalg::IntMatrix;
use crate::order::Order;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The quotient of an order by a full-rank integral ideal, with elements
/// as order-basis coordinate vectors reduced into the Hermite box of the
/// ideal.
pub struct ResidueRing {
    ord: Order,
    /// Ideal basis in order coordinates, square row Hermite form.
    cond: IntMatrix,
    size: BigInt,
}

impl ResidueRing {
    pub fn new(ord: &Order, f: &FracIdeal) -> Result<ResidueRing> {
        let n = ord.dim();
        let d = BigRational::from(f.denom().clone());
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let x = AlgElement::from_rational_coords(
                f.basis_matrix().row(i).iter().map(|c| BigRational::from(c.clone()) / &d).collect(),
            );
            let c = ord
                .coords(&x)
                .ok_or_else(|| Error::Precondition("ideal is not contained in the order".into()))?;
            rows.push(c);
        }
        let h = hnf(&IntMatrix::from_bigint_rows(rows));
        if h.rank < n {
            return Err(Error::Precondition("ideal does not have full rank".into()));
        }
        let size = h.h.diagonal_product().abs();
        Ok(ResidueRing { ord: ord.clone(), cond: h.h, size })
    }

    pub fn order(&self) -> &Order {
        &self.ord
    }

    pub fn size(&self) -> &BigInt {
        &self.size
    }

    /// Reduce order coordinates into the Hermite box.
    pub fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let n = v.len();
        for i in 0..n {
            let q = v[i].div_floor(&self.cond[(i, i)]);
            if q.is_zero() {
                continue;
            }
            for j in i..n {
                let s = &q * &self.cond[(i, j)];
                v[j] -= s;
            }
        }
        v
    }

    pub fn to_coords(&self, x: &AlgElement) -> Result<Vec<BigInt>> {
        let c = self
            .ord
            .coords(x)
            .ok_or_else(|| Error::Precondition("element is not in the order".into()))?;
        Ok(self.reduce(c))
    }

    /// Lift reduced coordinates back to an algebra element.
    pub fn lift(&self, v: &[BigInt]) -> AlgElement {
        let lat = self.ord.lattice();
        let n = lat.dim();
        let d = BigRational::from(lat.denom().clone());
        AlgElement::from_rational_coords(
            (0..n)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for (i, c) in v.iter().enumerate() {
                        acc += c * &lat.basis_matrix()[(i, j)];
                    }
                    BigRational::from(acc) / &d
                })
                .collect(),
        )
    }

    pub fn one(&self) -> Vec<BigInt> {
        let c = self.ord.coords(&self.ord.alg().one()).expect("order contains one");
        self.reduce(c)
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let x = self.ord.alg().mul(&self.lift(a), &self.lift(b));
        let c = self.ord.coords(&x).expect("order is closed under multiplication");
        self.reduce(c)
    }

    pub fn pow(&self, a: &[BigInt], e: &BigInt) -> Vec<BigInt> {
        debug_assert!(!e.is_negative());
        let mut acc = self.one();
        let mag = e.magnitude();
        for k in (0..mag.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if mag.bit(k) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Is the class a unit, i.e. does it generate the whole quotient
    /// together with the ideal?
    pub fn is_unit(&self, a: &[BigInt]) -> bool {
        let n = self.cond.rows();
        let x = self.lift(a);
        let lat = self.ord.lattice();
        let d = BigRational::from(lat.denom().clone());
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let b = AlgElement::from_rational_coords(
                lat.basis_matrix().row(i).iter().map(|c| BigRational::from(c.clone()) / &d).collect(),
            );
            match self.ord.coords(&self.ord.alg().mul(&x, &b)) {
                Some(c) => rows.push(c),
                None => return false,
            }
        }
        let stack = IntMatrix::from_bigint_rows(rows).vstack(&self.cond);
        let h = hnf(&stack);
        h.rank == n && (0..n).all(|i| h.h[(i, i)].abs().is_one())
    }
}

/// Number of units of the quotient, via the local count at each maximal
/// ideal of the order containing the given ideal.
pub fn residue_unit_count(t: &Order, f: &FracIdeal) -> Result<BigInt> {
    let ring = ResidueRing::new(t, f)?;
    let mut acc = BigRational::from(ring.size().clone());
    if ring.size().is_one() {
        return Ok(BigInt::one());
    }
    for (p, _) in crate::poly::factor::factor(ring.size())? {
        let p = p
            .to_u64()
            .ok_or_else(|| Error::PrimeTooLarge(p.to_string()))?;
        for pr in t.primes_above(p)?.iter() {
            if pr.lattice().contains_lattice(f) {
                let q = pr.residue_size();
                acc *= BigRational::new(&q - 1, q);
            }
        }
    }
    debug_assert!(acc.is_integer());
    Ok(acc.to_integer())
}

/// Index of the part of the group generated by `gens` that lies in the
/// suborder: cosets are enumerated with exact membership tests modulo
/// the conductor.  The generators must be units of the big order.
pub fn unit_group_index(
    big: &Order,
    small: &Order,
    gens: &[AlgElement],
    coset_budget: usize,
) -> Result<BigInt> {
    let f = small.conductor()?;
    let ring = ResidueRing::new(big, &f)?;
    let group = residue_unit_count(big, &f)?;
    let inv_exp = &group - 1;
    let in_small = |v: &[BigInt]| small.lattice().contains(&ring.lift(v));
    // cosets of the subgroup of units lying in the suborder, stored as
    // (representative, inverse); the group is abelian, so each generator
    // multiplies the list by its relative order and nothing else
    let mut cosets: Vec<(Vec<BigInt>, Vec<BigInt>)> = vec![(ring.one(), ring.one())];
    let mut seen: std::collections::HashSet<Vec<BigInt>> = std::collections::HashSet::new();
    for g in gens {
        let gc = ring.to_coords(g)?;
        if !ring.is_unit(&gc) {
            return Err(Error::Precondition("generator is not a unit modulo the conductor".into()));
        }
        if !seen.insert(gc.clone()) {
            continue;
        }
        let ginv = ring.pow(&gc, &inv_exp);
        seen.insert(ginv.clone());
        // relative order: least d with g^d in a coset already listed
        let mut pw = gc.clone();
        let mut pw_inv = ginv.clone();
        let mut powers: Vec<(Vec<BigInt>, Vec<BigInt>)> = Vec::new();
        loop {
            if cosets.iter().any(|(_, rinv)| in_small(&ring.mul(&pw, rinv))) {
                break;
            }
            powers.push((pw.clone(), pw_inv.clone()));
            if (powers.len() + 1) * cosets.len() > coset_budget {
                return Err(Error::SearchBound("coset budget exceeded".into()));
            }
            pw = ring.mul(&pw, &gc);
            pw_inv = ring.mul(&pw_inv, &ginv);
        }
        if powers.is_empty() {
            continue;
        }
        let base = cosets.clone();
        for (pa, pa_inv) in &powers {
            for (r, rinv) in &base {
                cosets.push((ring.mul(pa, r), ring.mul(pa_inv, rinv)));
            }
        }
    }
    Ok(BigInt::from(cosets.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::classes::principal::{torsion_units, SearchParams};
    use crate::poly::ZPoly;

    fn gaussian() -> Order {
        let k = make_algebra(&ZPoly::from_i64(&[1, 0, 1])).unwrap();
        Order::maximal_order(&k).unwrap()
    }

    #[test]
    fn quotient_of_gaussian_integers() {
        let ok = gaussian();
        let k = ok.alg().clone();
        let two = ok.lattice().scale_element(&k.from_integer(&2.into())).unwrap();
        let r = ResidueRing::new(&ok, &two).unwrap();
        assert_eq!(r.size(), &BigInt::from(4));
        assert!(r.is_unit(&r.one()));
        let onei = r.to_coords(&k.add(&k.one(), &k.gen())).unwrap();
        // 1 + i generates the maximal ideal over 2
        assert!(!r.is_unit(&onei));
        assert_eq!(residue_unit_count(&ok, &two).unwrap(), BigInt::from(2));

        let three = ok.lattice().scale_element(&k.from_integer(&3.into())).unwrap();
        assert_eq!(residue_unit_count(&ok, &three).unwrap(), BigInt::from(8));
        let r3 = ResidueRing::new(&ok, &three).unwrap();
        let x = r3.to_coords(&k.add(&k.one(), &k.gen())).unwrap();
        assert!(r3.is_unit(&x));
        assert_eq!(r3.pow(&x, &BigInt::from(8)), r3.one());
    }

    #[test]
    fn unit_index_of_quadratic_suborders() {
        let ok = gaussian();
        let gens = torsion_units(&ok, &SearchParams::default()).unwrap();
        for m in [2i64, 3i64] {
            // Z[mi] inside Z[i]: only +-1 survive, index 2
            let k = ok.alg();
            let sub = FracIdeal::new(
                k,
                BigInt::one(),
                IntMatrix::from_rows(&[vec![1, 0], vec![0, m]]),
            )
            .unwrap();
            let t = Order::new(sub).unwrap();
            let idx = unit_group_index(&ok, &t, &gens, 64).unwrap();
            assert_eq!(idx, BigInt::from(2));
        }
    }
}
