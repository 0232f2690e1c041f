//! Weak equivalence of fractional ideals: two ideals are weakly
//! equivalent when they are isomorphic modules after localizing at every
//! maximal ideal.  The working criterion is that 1 lies in (I:J)(J:I),
//! which also hands out the isomorphisms.
//!
//! Classes with multiplicator ring T are counted prime by prime: a class
//! is pinned down by its localizations at the non-invertible maximal
//! ideals of T, and each local slot ranges over a finite window between a
//! floor that freezes the other primes and the maximal order.

use crate::error::Result;
use crate::lattice::FracIdeal;
use crate::order::{local_contains, Order, PrimeIdeal};
use crate::overorders::{sublattices_between, SUBMODULE_BUDGET};
use num_bigint::BigInt;
use num_traits::One;

/// The multiplicator ring (I : I) of a fractional ideal, as an order.
pub fn multiplicator_order(i: &FracIdeal) -> Order {
    Order::multiplicator_ring(i)
}

/// Weak equivalence: 1 ∈ (I:J)(J:I).
pub fn weakly_equivalent(i: &FracIdeal, j: &FracIdeal) -> bool {
    let c = i.colon(j).product(&j.colon(i));
    let ans = c.contains(&i.alg().one());
    crate::verify::check("weak equivalence three-condition agreement", || {
        weakly_equivalent_via_colon_product(i, j) == ans
            && weakly_equivalent_via_localizations(i, j).map(|v| v == ans).unwrap_or(false)
    });
    ans
}

/// Weak equivalence via the colon product being the full multiplicator
/// ring: (I:J)(J:I) = (I:I) = (J:J).
pub fn weakly_equivalent_via_colon_product(i: &FracIdeal, j: &FracIdeal) -> bool {
    let c = i.colon(j).product(&j.colon(i));
    c == i.colon(i) && c == j.colon(j)
}

/// Weak equivalence via localizations: equal multiplicator rings and a
/// local isomorphism at every non-invertible maximal ideal.
pub fn weakly_equivalent_via_localizations(i: &FracIdeal, j: &FracIdeal) -> Result<bool> {
    let t = multiplicator_order(i);
    if t != multiplicator_order(j) {
        return Ok(false);
    }
    for pr in t.noninvertible_primes()? {
        if !locally_isomorphic_at(i, j, &pr) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Local isomorphism of two full lattices at a maximal ideal of the
/// carrier order: (I:J)(J:I) escapes the ideal.
pub fn locally_isomorphic_at(i: &FracIdeal, j: &FracIdeal, pr: &PrimeIdeal) -> bool {
    let c = i.colon(j).product(&j.colon(i));
    let s = pr.order().lattice();
    !pr.lattice().contains_lattice(&c.intersect(s))
}

/// Saturation of T at one of its maximal ideals inside the maximal
/// order: everything in O_K pushed into T by a power of the ideal.
pub fn primary_component(t: &Order, pr: &PrimeIdeal) -> Result<FracIdeal> {
    let ok = Order::maximal_order(t.alg())?;
    let mut x = t.lattice().clone();
    loop {
        let next = x.colon(pr.lattice()).intersect(ok.lattice());
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

/// Window floor for local enumeration at `pr`: T plus the saturations at
/// every other non-invertible maximal ideal, so that a lattice between
/// the floor and O_K is maximal at every prime except `pr`.
pub fn local_floor(t: &Order, pr: &PrimeIdeal) -> Result<FracIdeal> {
    let mut d = t.lattice().clone();
    for q in t.noninvertible_primes()? {
        if q == *pr {
            continue;
        }
        d = d.sum(&primary_component(t, &q)?);
    }
    Ok(d)
}

/// Exhaustive local weak classes at `pr`: representatives of the
/// isomorphism classes of localizations of lattices with multiplicator
/// ring T, each normalized to agree with O_K away from `pr`.
pub fn local_weak_reps(t: &Order, pr: &PrimeIdeal, budget: usize) -> Result<Vec<FracIdeal>> {
    let ok = Order::maximal_order(t.alg())?;
    let floor = local_floor(t, pr)?;
    let all = sublattices_between(ok.lattice(), &floor, pr, budget)?;
    let mut reps: Vec<FracIdeal> = Vec::new();
    for i in all {
        let end = i.colon(&i);
        // multiplicator ring must be T locally at pr
        if !local_contains(t.lattice(), &end, pr) {
            continue;
        }
        if reps.iter().all(|r| !locally_isomorphic_at(&i, r, pr)) {
            reps.push(i);
        }
    }
    Ok(reps)
}

/// Local class count at `pr` read off the Cohen-Macaulay type when it is
/// 1 or 2: Gorenstein primes carry one class, type-2 primes exactly two.
/// Returns None for higher types.
pub fn local_count_by_type(t: &Order, pr: &PrimeIdeal) -> Result<Option<u32>> {
    match crate::cmtype::type_at_prime(t, pr) {
        1 => Ok(Some(1)),
        2 => Ok(Some(2)),
        _ => Ok(None),
    }
}

/// Weak equivalence classes with multiplicator ring exactly T.
pub struct WeakClasses {
    pub order: Order,
    /// Local representatives per non-invertible maximal ideal.
    pub per_prime: Vec<(PrimeIdeal, Vec<FracIdeal>)>,
}

impl WeakClasses {
    pub fn count(&self) -> BigInt {
        let mut n = BigInt::one();
        for (_, reps) in &self.per_prime {
            n *= BigInt::from(reps.len());
        }
        n
    }

    /// Global representatives: one intersection per tuple of local reps.
    pub fn reps(&self) -> Vec<FracIdeal> {
        let mut out = vec![self.order.lattice().clone()];
        if self.per_prime.is_empty() {
            return out;
        }
        // lattices agreeing with O_K away from one prime patch by
        // intersecting across primes
        out = vec![];
        let mut stack: Vec<(usize, Option<FracIdeal>)> = vec![(0, None)];
        while let Some((k, acc)) = stack.pop() {
            if k == self.per_prime.len() {
                out.push(acc.expect("at least one prime"));
                continue;
            }
            for r in &self.per_prime[k].1 {
                let next = match &acc {
                    None => r.clone(),
                    Some(a) => a.intersect(r),
                };
                stack.push((k + 1, Some(next)));
            }
        }
        out
    }
}

/// Exhaustive weak classes of T through local enumeration at every
/// non-invertible maximal ideal.
pub fn weak_classes_exhaustive(t: &Order, budget: usize) -> Result<WeakClasses> {
    let mut per_prime = Vec::new();
    for pr in t.noninvertible_primes()? {
        let reps = local_weak_reps(t, &pr, budget)?;
        per_prime.push((pr, reps));
    }
    Ok(WeakClasses { order: t.clone(), per_prime })
}

/// Number of weak classes with multiplicator ring T; uses the type
/// shortcut at primes of type 1 or 2 and falls back to enumeration at
/// higher types.
pub fn weak_class_count(t: &Order) -> Result<BigInt> {
    let mut n = BigInt::one();
    for pr in t.noninvertible_primes()? {
        match local_count_by_type(t, &pr)? {
            Some(c) => n *= BigInt::from(c),
            None => n *= BigInt::from(local_weak_reps(t, &pr, SUBMODULE_BUDGET)?.len()),
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::overorders::overorders;
    use crate::poly::ZPoly;
    use num_traits::Zero;

    #[test]
    fn maximal_order_has_one_class() {
        let k = make_algebra(&ZPoly::from_i64(&[1, 0, 1])).unwrap();
        let ok = Order::maximal_order(&k).unwrap();
        let w = weak_classes_exhaustive(&ok, 10_000).unwrap();
        assert_eq!(w.count(), BigInt::one());
        assert_eq!(w.reps().len(), 1);
    }

    #[test]
    fn quadratic_orders_are_gorenstein_with_one_class_each() {
        // Z[6i]: four overorders, every one Gorenstein, one class apiece
        let k = make_algebra(&ZPoly::from_i64(&[36, 0, 1])).unwrap();
        let u = Order::equation_order(&k);
        let mut total = BigInt::zero();
        for t in overorders(&u).unwrap() {
            let w = weak_classes_exhaustive(&t, 10_000).unwrap();
            assert_eq!(w.count(), BigInt::one());
            assert_eq!(w.count(), weak_class_count(&t).unwrap());
            total += w.count();
        }
        assert_eq!(total, BigInt::from(4));
    }

    #[test]
    fn type_two_cubic_order_has_two_classes() {
        // x^3 - x - 1, U = Z + 2 O_K: one non-invertible prime of type 2
        let k = make_algebra(&ZPoly::from_i64(&[-1, -1, 0, 1])).unwrap();
        let u = crate::cmtype::z_plus_p_maximal(&k, 2).unwrap();
        let w = weak_classes_exhaustive(&u, 10_000).unwrap();
        assert_eq!(w.count(), BigInt::from(2));
        assert_eq!(weak_class_count(&u).unwrap(), BigInt::from(2));
        // the nontrivial class is the one of the trace dual
        let pr = &w.per_prime[0].0;
        let dual = u.lattice().trace_dual();
        let reps = &w.per_prime[0].1;
        let dual_like: Vec<_> =
            reps.iter().filter(|r| locally_isomorphic_at(r, &dual, pr)).collect();
        assert_eq!(dual_like.len(), 1);
        // global reps are pairwise inequivalent and self-equivalent
        let reps = w.reps();
        assert_eq!(reps.len(), 2);
        assert!(weakly_equivalent(&reps[0], &reps[0]));
        assert!(!weakly_equivalent(&reps[0], &reps[1]));
    }

    #[test]
    fn equivalence_conditions_agree() {
        let k = make_algebra(&ZPoly::from_i64(&[-1, -1, 0, 1])).unwrap();
        let u = crate::cmtype::z_plus_p_maximal(&k, 2).unwrap();
        let w = weak_classes_exhaustive(&u, 10_000).unwrap();
        let reps = w.reps();
        for a in &reps {
            for b in &reps {
                let e1 = weakly_equivalent(a, b);
                let e2 = weakly_equivalent_via_colon_product(a, b);
                let e3 = weakly_equivalent_via_localizations(a, b).unwrap();
                assert_eq!(e1, e2);
                assert_eq!(e1, e3);
            }
        }
    }
}
