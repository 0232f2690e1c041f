//! Overorder enumeration: minimal overorders through local module fibers,
//! and the full overorder lattice by closure.
//!
//! The engine is a recursion on sublattices.  For a module window W over an
//! order with a distinguished maximal ideal p, the maximal submodules of W
//! are preimages of residue-field hyperplanes of W/(pW + floor); each one
//! is found as the largest module core inside an F_p-hyperplane, so no
//! explicit arithmetic in the residue field is needed.  The fiber W/pW is
//! never larger than the degree of the algebra, which keeps every scan
//! small no matter how deep the window is.

use crate::error::{Error, Result};
use crate::lattice::FracIdeal;
use crate::linalg::{ff_kernel, inverse_rational, snf, Fp, FieldOps, IntMatrix};
use crate::order::{Order, PrimeIdeal};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Node budget for sublattice recursions; exceeding it is reported, never
/// silently truncated.
pub const SUBMODULE_BUDGET: usize = 400_000;

/// F_p-coordinates on a finite quotient W/B killed by p.
struct TorsionFiber {
    p: u64,
    dim: usize,
    positions: Vec<usize>,
    transform: IntMatrix,
    inv_transform: IntMatrix,
    w_denom: BigInt,
    w_basis: IntMatrix,
    w_inv: Vec<Vec<BigRational>>,
}

impl TorsionFiber {
    /// Requires p*W ⊆ B ⊆ W.
    fn new(w: &FracIdeal, b: &FracIdeal, p: u64) -> TorsionFiber {
        let n = w.dim();
        let w_inv = inverse_rational(w.basis_matrix()).expect("full rank");
        // B in W-coordinates
        let scale = BigRational::new(w.denom().clone(), b.denom().clone());
        let c = IntMatrix::from_fn(n, n, |i, j| {
            let mut acc = BigRational::zero();
            for k in 0..n {
                acc += BigRational::from(b.basis_matrix()[(i, k)].clone()) * &w_inv[k][j];
            }
            acc *= &scale;
            debug_assert!(acc.is_integer());
            acc.to_integer()
        });
        let res = snf(&c);
        let pb = BigInt::from(p);
        let mut positions = Vec::new();
        for (i, d) in res.divisors.iter().enumerate() {
            if !d.is_one() {
                debug_assert!(*d == pb, "fiber is not killed by p");
                positions.push(i);
            }
        }
        let inv = inverse_rational(&res.right).expect("unimodular");
        let inv_transform = IntMatrix::from_fn(n, n, |i, j| {
            debug_assert!(inv[i][j].is_integer());
            inv[i][j].to_integer()
        });
        TorsionFiber {
            p,
            dim: positions.len(),
            positions,
            transform: res.right,
            inv_transform,
            w_denom: w.denom().clone(),
            w_basis: w.basis_matrix().clone(),
            w_inv,
        }
    }

    /// Coordinates of an element of W in the fiber.
    fn project(&self, x: &crate::algebra::AlgElement) -> Vec<u64> {
        let n = self.w_basis.rows();
        let d = BigRational::from(self.w_denom.clone());
        let mut coords = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = BigRational::zero();
            for (l, c) in x.coords.iter().enumerate() {
                acc += c * &self.w_inv[l][k];
            }
            acc *= &d;
            debug_assert!(acc.is_integer(), "element is not in W");
            coords.push(acc.to_integer());
        }
        let pb = BigInt::from(self.p);
        self.positions
            .iter()
            .map(|&pos| {
                let mut acc = BigInt::zero();
                for (k, c) in coords.iter().enumerate() {
                    acc += c * &self.transform[(k, pos)];
                }
                num_integer::Integer::mod_floor(&acc, &pb).to_u64().unwrap()
            })
            .collect()
    }

    /// A representative of a fiber vector, as integer W-coordinates.
    fn lift_coords(&self, v: &[u64]) -> Vec<BigInt> {
        let n = self.w_basis.rows();
        let mut z = vec![BigInt::zero(); n];
        for (vi, &pos) in v.iter().zip(&self.positions) {
            z[pos] = BigInt::from(*vi);
        }
        (0..n)
            .map(|j| {
                let mut acc = BigInt::zero();
                for (k, zk) in z.iter().enumerate() {
                    acc += zk * &self.inv_transform[(k, j)];
                }
                acc
            })
            .collect()
    }
}

/// Maximal sublattices L with floor ⊆ L ⊂ W that are modules over the
/// order of `pr`, for a window whose quotient W/floor is killed by powers
/// of `pr` alone.
pub fn maximal_sublattices(
    w: &FracIdeal,
    floor: &FracIdeal,
    pr: &PrimeIdeal,
) -> Vec<FracIdeal> {
    let b = pr.lattice().product(w).sum(floor);
    if b == *w {
        return Vec::new();
    }
    let p = pr.p();
    let f = Fp::new(p);
    let fiber = TorsionFiber::new(w, &b, p);
    let m = fiber.dim;
    debug_assert!(m > 0);

    // Action of the order's basis on the fiber.
    let t = pr.order();
    let alg = t.alg();
    let lifted: Vec<crate::algebra::AlgElement> = (0..m)
        .map(|k| {
            let mut e = vec![0u64; m];
            e[k] = 1;
            let c = fiber.lift_coords(&e);
            let d = BigRational::from(fiber.w_denom.clone());
            crate::algebra::AlgElement {
                coords: (0..w.dim())
                    .map(|j| {
                        let mut acc = BigRational::zero();
                        for (i, ci) in c.iter().enumerate() {
                            acc += BigRational::from(ci * &fiber.w_basis[(i, j)]);
                        }
                        acc / &d
                    })
                    .collect(),
            }
        })
        .collect();
    let mats: Vec<Vec<Vec<u64>>> = (0..t.dim())
        .map(|a| {
            let ta = t.lattice().basis_element(a);
            (0..m).map(|k| fiber.project(&alg.mul(&ta, &lifted[k]))).collect()
        })
        .collect();
    // residue degree = dimension of the span of the action matrices
    let mut rspan = crate::fpalg::FpSpace::new(p, m * m);
    for mat in &mats {
        let flat: Vec<u64> = mat.iter().flatten().copied().collect();
        rspan.insert(flat);
    }
    let fdeg = rspan.dim();

    let apply = |v: &[u64], mat: &[Vec<u64>]| -> Vec<u64> {
        let mut out = vec![0u64; m];
        for (j, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, ok) in out.iter_mut().enumerate() {
                *ok = f.add(*ok, f.mul(c, mat[j][k]));
            }
        }
        out
    };

    // enumerate normalized dual vectors over F_p
    let mut duals: Vec<Vec<u64>> = Vec::new();
    let mut stack = vec![(0usize, vec![0u64; m])];
    while let Some((i0, base)) = stack.pop() {
        if i0 >= m {
            continue;
        }
        let mut v = base.clone();
        v[i0] = 1;
        // free coordinates after i0
        let free = m - i0 - 1;
        let mut counter = vec![0u64; free];
        loop {
            let mut lam = v.clone();
            for (t, &c) in counter.iter().enumerate() {
                lam[i0 + 1 + t] = c;
            }
            duals.push(lam);
            let mut carry = true;
            for c in counter.iter_mut() {
                *c += 1;
                if *c == p {
                    *c = 0;
                } else {
                    carry = false;
                    break;
                }
            }
            if carry {
                break;
            }
        }
        stack.push((i0 + 1, base));
    }

    let mut seen: BTreeMap<Vec<u64>, crate::fpalg::FpSpace> = BTreeMap::new();
    for lam in duals {
        // hyperplane basis: kernel of v -> <v, lam>
        let h = ff_kernel(&f, std::slice::from_ref(&lam));
        let mut x = crate::fpalg::FpSpace::from_rows(p, m, &h);
        // largest submodule inside: intersect with preimages until stable
        loop {
            let mut residuals: Vec<Vec<u64>> = Vec::new();
            let mut closed = true;
            for row in x.rows() {
                let mut res_row = Vec::new();
                for mat in &mats {
                    let img = apply(row, mat);
                    let r = x.reduce(img);
                    if r.iter().any(|&c| c != 0) {
                        closed = false;
                    }
                    res_row.extend(r);
                }
                residuals.push(res_row);
            }
            if closed {
                break;
            }
            // combos of x-rows with vanishing residual: left kernel
            let rcols = residuals.first().map_or(0, |r| r.len());
            let res_t: Vec<Vec<u64>> = (0..rcols)
                .map(|k| residuals.iter().map(|r| r[k]).collect())
                .collect();
            let ker = ff_kernel(&f, &res_t);
            let old_rows: Vec<Vec<u64>> = x.rows().to_vec();
            let mut nx = crate::fpalg::FpSpace::new(p, m);
            for comb in ker {
                let mut v = vec![0u64; m];
                for (i, &ci) in comb.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    for (k, vk) in v.iter_mut().enumerate() {
                        *vk = f.add(*vk, f.mul(ci, old_rows[i][k]));
                    }
                }
                nx.insert(v);
            }
            if nx.dim() == x.dim() {
                break;
            }
            x = nx;
        }
        if x.dim() + fdeg == m {
            seen.entry(x.canonical_key()).or_insert(x);
        }
    }

    // b ⊆ w forces b.denom | w.denom; put both over w.denom
    debug_assert!(num_integer::Integer::is_multiple_of(w.denom(), b.denom()));
    let lift_scale = w.denom() / b.denom();
    let mut out = Vec::new();
    for (_, core) in seen {
        let mut rows = b.basis_matrix().scale(&lift_scale);
        let extra: Vec<Vec<BigInt>> = core
            .rows()
            .iter()
            .map(|r| {
                let c = fiber.lift_coords(r);
                (0..w.dim())
                    .map(|j| {
                        let mut acc = BigInt::zero();
                        for (i, ci) in c.iter().enumerate() {
                            acc += ci * &fiber.w_basis[(i, j)];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        if !extra.is_empty() {
            rows = rows.vstack(&IntMatrix::from_bigint_rows(extra));
        }
        out.push(
            FracIdeal::new(w.alg(), w.denom().clone(), rows).expect("contains B"),
        );
    }
    out
}

/// All module sublattices L with floor ⊆ L ⊆ top, for a window whose
/// quotient is killed by powers of the given maximal ideal.
pub fn sublattices_between(
    top: &FracIdeal,
    floor: &FracIdeal,
    pr: &PrimeIdeal,
    budget: usize,
) -> Result<Vec<FracIdeal>> {
    let mut seen: BTreeMap<(BigInt, Vec<BigInt>), FracIdeal> = BTreeMap::new();
    let mut queue = vec![top.clone()];
    seen.insert(top.cmp_key(), top.clone());
    while let Some(w) = queue.pop() {
        for child in maximal_sublattices(&w, floor, pr) {
            let key = child.cmp_key();
            if !seen.contains_key(&key) {
                if seen.len() >= budget {
                    return Err(Error::SearchBound(format!(
                        "sublattice count exceeded budget {}",
                        budget
                    )));
                }
                seen.insert(key, child.clone());
                queue.push(child);
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// Whether a lattice containing 1 is closed under multiplication.
fn is_ring_lattice(l: &FracIdeal) -> bool {
    let alg = l.alg();
    if !l.contains(&alg.one()) {
        return false;
    }
    let n = l.dim();
    for i in 0..n {
        for j in i..n {
            if !l.contains(&alg.mul(&l.basis_element(i), &l.basis_element(j))) {
                return false;
            }
        }
    }
    true
}

/// The minimal overorders of `u`: the rings directly above it.
pub fn minimal_overorders(u: &Order) -> Result<Vec<Order>> {
    let mut found: BTreeMap<(BigInt, Vec<BigInt>), Order> = BTreeMap::new();
    for pr in u.noninvertible_primes()? {
        let e = pr.end_ring();
        // candidates live in the fiber of (p : p) over u
        let subs = sublattices_between(e.lattice(), u.lattice(), &pr, SUBMODULE_BUDGET)?;
        let rings: Vec<&FracIdeal> = subs
            .iter()
            .filter(|l| **l != *u.lattice() && is_ring_lattice(l))
            .collect();
        for l in &rings {
            let minimal = rings
                .iter()
                .all(|l2| l2 == l || !l.contains_lattice(l2) || **l2 == **l);
            if minimal {
                found.entry(l.cmp_key()).or_insert_with(|| Order::unchecked((*l).clone()));
            }
        }
    }
    // cross-prime containments cannot occur, but keep only true minima
    let orders: Vec<Order> = found.into_values().collect();
    let out: Vec<Order> = orders
        .iter()
        .filter(|t| {
            orders.iter().all(|t2| {
                t2 == *t
                    || !t.lattice().contains_lattice(t2.lattice())
                    || t2.lattice() == t.lattice()
            })
        })
        .cloned()
        .collect();
    Ok(out)
}

/// Every order between `u` and the maximal order, sorted by index below
/// the maximal order and then by basis.
pub fn overorders(u: &Order) -> Result<Vec<Order>> {
    let ok = Order::maximal_order(u.alg())?;
    let mut seen: BTreeMap<(BigInt, Vec<BigInt>), Order> = BTreeMap::new();
    seen.insert(u.lattice().cmp_key(), u.clone());
    let mut frontier = vec![u.clone()];
    while !frontier.is_empty() {
        let batches: Vec<Result<Vec<Order>>> =
            frontier.par_iter().map(minimal_overorders).collect();
        let mut next = Vec::new();
        for b in batches {
            for t in b? {
                let key = t.lattice().cmp_key();
                if !seen.contains_key(&key) {
                    seen.insert(key, t.clone());
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<(BigInt, (BigInt, Vec<BigInt>), Order)> = seen
        .into_values()
        .map(|t| {
            let idx = ok.lattice().index(t.lattice());
            debug_assert!(idx.is_integer());
            (idx.to_integer(), t.lattice().cmp_key(), t)
        })
        .collect();
    out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    Ok(out.into_iter().map(|x| x.2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::cmtype;
    use crate::poly::ZPoly;

    #[test]
    fn quadratic_overorders_match_divisors_of_conductor() {
        // Z[6i] in Q(i): overorders are Z + d Z[i] for d | 6
        let k = make_algebra(&ZPoly::from_i64(&[36, 0, 1])).unwrap();
        let u = Order::equation_order(&k);
        let all = overorders(&u).unwrap();
        assert_eq!(all.len(), 4);
        // sorted by index: first is maximal, last is u
        assert!(all[0].is_maximal().unwrap());
        assert_eq!(all[3].lattice(), u.lattice());
        // Z[3i] has one minimal overorder, Z[i]
        let k9 = make_algebra(&ZPoly::from_i64(&[9, 0, 1])).unwrap();
        let u9 = Order::equation_order(&k9);
        let m = minimal_overorders(&u9).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0].is_maximal().unwrap());
    }

    #[test]
    fn cubic_type_two_order_jumps_straight_to_maximal() {
        let k = make_algebra(&ZPoly::from_i64(&[-1, -1, 0, 1])).unwrap();
        let u = cmtype::z_plus_p_maximal(&k, 2).unwrap();
        let m = minimal_overorders(&u).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[0].is_maximal().unwrap());
        let all = overorders(&u).unwrap();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn split_quadratic_overorders() {
        // x^2 - 1: Z x Z over the equation order, index 2
        let k = make_algebra(&ZPoly::from_i64(&[-1, 0, 1])).unwrap();
        let u = Order::equation_order(&k);
        let all = overorders(&u).unwrap();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn overorder_chain_in_deeper_quadratic() {
        // conductor 12 = 2^2 * 3: divisors 1,2,3,4,6,12 -> six overorders
        let k = make_algebra(&ZPoly::from_i64(&[144, 0, 1])).unwrap();
        let u = Order::equation_order(&k);
        let all = overorders(&u).unwrap();
        assert_eq!(all.len(), 6);
        // each non-maximal one is Gorenstein (quadratic orders always are)
        for t in &all {
            assert!(cmtype::is_gorenstein(t).unwrap());
        }
    }
}
