//! Cohen-Macaulay type of an order, Gorenstein and Bass tests, and
//! generator counts of modules over an order.
//!
//! The type at a maximal ideal is the residue dimension of the trace dual;
//! at non-invertible maximal ideals it also shows up, shifted by one, in
//! the endomorphism ring of the ideal, which gives an independent route
//! used by the property suites.

use crate::error::Result;
use crate::lattice::FracIdeal;
use crate::order::{dim_quotient_at_prime, Order, PrimeIdeal};
use crate::verify;
use num_bigint::BigInt;
use num_traits::One;

/// dim over S/p of the fiber of the trace dual at `pr`.
pub fn type_at_prime(s: &Order, pr: &PrimeIdeal) -> usize {
    let dual = s.lattice().trace_dual();
    let t = dim_quotient_at_prime(&dual, pr);
    verify::check("type via endomorphism ring of the ideal", || {
        pr.is_invertible().map(|inv| inv || t + 1 == type_plus_one_via_end(pr)).unwrap_or(true)
    });
    t
}

/// For a non-invertible maximal ideal, dim of (p : p)/p over S/p, which
/// equals type + 1.
pub fn type_plus_one_via_end(pr: &PrimeIdeal) -> usize {
    let end = pr.end_ring();
    let q = end.lattice().quotient(pr.lattice());
    // the quotient is a vector space over S/p; read its residue dimension
    let p = BigInt::from(pr.p());
    let mut e = 0usize;
    let mut v = q.index;
    while !v.is_one() {
        debug_assert!(num_integer::Integer::is_multiple_of(&v, &p));
        v /= &p;
        e += 1;
    }
    debug_assert!(e % pr.residue_degree() == 0);
    e / pr.residue_degree()
}

/// Cohen-Macaulay type: the maximum of the local types.  Maximal orders
/// and orders with only invertible primes have type 1.
pub fn global_type(s: &Order) -> Result<usize> {
    let mut t = 1usize;
    for pr in s.noninvertible_primes()? {
        t = t.max(type_at_prime(s, &pr));
    }
    Ok(t)
}

/// Gorenstein means type 1; equivalently the trace dual is invertible.
pub fn is_gorenstein(s: &Order) -> Result<bool> {
    let by_type = global_type(s)? == 1;
    verify::check("Gorenstein iff trace dual invertible", || {
        is_invertible_ideal(&s.lattice().trace_dual(), s) == by_type
    });
    Ok(by_type)
}

/// Invertibility of a lattice as a fractional ideal of `s`:
/// I * (S : I) = S.
pub fn is_invertible_ideal(i: &FracIdeal, s: &Order) -> bool {
    let c = s.lattice().colon(i);
    i.product(&c) == *s.lattice()
}

/// Minimal number of generators of a full lattice as a module over `s`,
/// up to the principality question for invertible modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GensCount {
    /// Locally the module needs k >= 2 generators somewhere, and k global
    /// generators suffice.
    Exact(usize),
    /// Locally principal everywhere: one generator if principal as a
    /// fractional ideal, else two.
    TwoUnlessPrincipal,
}

pub fn gens_count_module(i: &FracIdeal, s: &Order) -> Result<GensCount> {
    let mut m = 1usize;
    for pr in s.noninvertible_primes()? {
        m = m.max(dim_quotient_at_prime(i, &pr));
    }
    if m >= 2 {
        Ok(GensCount::Exact(m))
    } else {
        Ok(GensCount::TwoUnlessPrincipal)
    }
}

/// The largest residue dimension of O_K over a maximal ideal of `s`; equals
/// 1 exactly for maximal orders.
pub fn g_of_order(s: &Order) -> Result<usize> {
    let ok = Order::maximal_order(s.alg())?;
    let mut g = 1usize;
    for pr in s.noninvertible_primes()? {
        g = g.max(dim_quotient_at_prime(ok.lattice(), &pr));
    }
    Ok(g)
}

/// Bass criterion: g at most 2.
pub fn is_bass(s: &Order) -> Result<bool> {
    Ok(g_of_order(s)? <= 2)
}

/// O_K/S is a cyclic S-module iff dim of O_K/(S + p O_K) is at most 1 at
/// every maximal ideal.
pub fn maximal_over_order_cyclic(s: &Order) -> Result<bool> {
    let ok = Order::maximal_order(s.alg())?;
    for pr in s.noninvertible_primes()? {
        let sum = s.lattice().sum(&pr.lattice().product(ok.lattice()));
        let q = ok.lattice().quotient(&sum);
        let p = BigInt::from(pr.p());
        let mut e = 0usize;
        let mut v = q.index;
        while !v.is_one() {
            debug_assert!(num_integer::Integer::is_multiple_of(&v, &p));
            v /= &p;
            e += 1;
        }
        if e / pr.residue_degree() > 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The order Z + p O_K.
pub fn z_plus_p_maximal(alg: &crate::algebra::EtaleAlgebra, p: u64) -> Result<Order> {
    let ok = Order::maximal_order(alg)?;
    let scaled = ok.lattice().scale_rational(&num_rational::BigRational::from(BigInt::from(p)));
    let one = FracIdeal::from_elements(alg, &{
        let mut v = vec![alg.one()];
        v.extend(scaled.basis_elements());
        v
    })?;
    Order::new(one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::poly::ZPoly;

    #[test]
    fn monogenic_quadratic_orders_are_gorenstein() {
        let k = make_algebra(&ZPoly::from_i64(&[9, 0, 1])).unwrap();
        let s = Order::equation_order(&k);
        assert_eq!(global_type(&s).unwrap(), 1);
        assert!(is_gorenstein(&s).unwrap());
        assert!(is_bass(&s).unwrap());
        assert!(maximal_over_order_cyclic(&s).unwrap());
        assert_eq!(g_of_order(&s).unwrap(), 2);
    }

    #[test]
    fn cubic_z_plus_2ok_has_type_two() {
        // x^3 - x - 1 has prime discriminant -23, so Z[x] is maximal
        let k = make_algebra(&ZPoly::from_i64(&[-1, -1, 0, 1])).unwrap();
        let s = z_plus_p_maximal(&k, 2).unwrap();
        assert_eq!(s.index_in_maximal().unwrap(), BigInt::from(4));
        let prs = s.noninvertible_primes().unwrap();
        assert_eq!(prs.len(), 1);
        assert_eq!(type_at_prime(&s, &prs[0]), 2);
        assert_eq!(global_type(&s).unwrap(), 2);
        assert!(!is_gorenstein(&s).unwrap());
        assert_eq!(g_of_order(&s).unwrap(), 3);
        assert!(!is_bass(&s).unwrap());
        assert!(!maximal_over_order_cyclic(&s).unwrap());
        // the trace dual needs two generators
        assert_eq!(
            gens_count_module(&s.lattice().trace_dual(), &s).unwrap(),
            GensCount::Exact(2)
        );
    }

    #[test]
    fn maximal_orders_have_type_one() {
        let k = make_algebra(&ZPoly::from_i64(&[1, 0, 1])).unwrap();
        let ok = Order::maximal_order(&k).unwrap();
        assert_eq!(global_type(&ok).unwrap(), 1);
        assert!(is_gorenstein(&ok).unwrap());
        assert_eq!(g_of_order(&ok).unwrap(), 1);
    }

    #[test]
    fn type_respects_dimension_bound() {
        for coeffs in [vec![2, 0, 0, 1], vec![-1, -1, 0, 1], vec![1, 1, 1, 1, 1]] {
            let f = ZPoly::from_i64(&coeffs);
            if !f.is_squarefree() {
                continue;
            }
            let k = make_algebra(&f).unwrap();
            let n = k.dim();
            for p in [2u64, 3] {
                let s = z_plus_p_maximal(&k, p).unwrap();
                let t = global_type(&s).unwrap();
                assert!(t <= n - 1, "type {} exceeds n-1={}", t, n - 1);
                assert_eq!(t, n - 1, "Z + pO_K should attain the bound");
            }
        }
    }
}
