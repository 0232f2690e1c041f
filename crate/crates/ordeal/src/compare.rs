//! Trace ideals, local lengths, and the refined Gorenstein hierarchy:
//! Gorenstein, nearly Gorenstein, almost Gorenstein.
//!
//! Lengths are computed two independent ways: a filtration by powers of
//! the maximal ideal, and the primary-part order.  The almost Gorenstein
//! test pins the canonical module between the order and the maximal order
//! by an explicit scaling element before measuring its length.

use crate::error::{Error, Result};
use crate::lattice::FracIdeal;
use crate::order::{local_contains, Order, PrimeIdeal};
use crate::verify;
use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The trace ideal of the canonical module: S^t * (S : S^t).  Equals S
/// exactly when S is Gorenstein.
pub fn trace_ideal(s: &Order) -> FracIdeal {
    let dual = s.lattice().trace_dual();
    let hom = s.lattice().colon(&dual);
    dual.product(&hom)
}

/// Gorenstein locally at a maximal ideal: the trace ideal fills S there.
pub fn is_gorenstein_at(s: &Order, pr: &PrimeIdeal) -> bool {
    local_contains(&trace_ideal(s), s.lattice(), pr)
}

/// Nearly Gorenstein at a maximal ideal: the trace ideal covers p there.
pub fn is_nearly_gorenstein_at(s: &Order, pr: &PrimeIdeal) -> bool {
    local_contains(&trace_ideal(s), pr.lattice(), pr)
}

pub fn is_nearly_gorenstein(s: &Order) -> Result<bool> {
    for pr in s.noninvertible_primes()? {
        if !is_nearly_gorenstein_at(s, &pr) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Length of (a/b) localized at `pr`, via the filtration by powers of the
/// maximal ideal.  Requires b ⊆ a.
pub fn length_at_prime(a: &FracIdeal, b: &FracIdeal, pr: &PrimeIdeal) -> usize {
    debug_assert!(a.contains_lattice(b));
    let mut len = 0usize;
    let mut cur = a.clone();
    loop {
        let next = pr.lattice().product(&cur).sum(b);
        if next == cur {
            break;
        }
        len += space_dim(&cur.sum(b), &next, pr);
        cur = next;
    }
    len
}

/// Length of (a/b) localized at `pr`, via the order of the primary part.
pub fn length_at_prime_via_primary(a: &FracIdeal, b: &FracIdeal, pr: &PrimeIdeal) -> usize {
    debug_assert!(a.contains_lattice(b));
    // saturate b inside a along pr
    let mut x = b.clone();
    loop {
        let next = x.colon(pr.lattice()).intersect(a);
        if next == x {
            break;
        }
        x = next;
    }
    let idx = x.index(b);
    debug_assert!(idx.is_integer());
    let mut v = idx.to_integer();
    let p = BigInt::from(pr.p());
    let mut e = 0usize;
    while !v.is_one() {
        debug_assert!(num_integer::Integer::is_multiple_of(&v, &p));
        v /= &p;
        e += 1;
    }
    debug_assert!(e % pr.residue_degree() == 0);
    e / pr.residue_degree()
}

/// dim over the residue field of X/Y when p X ⊆ Y ⊆ X.
fn space_dim(x: &FracIdeal, y: &FracIdeal, pr: &PrimeIdeal) -> usize {
    let idx = x.index(y);
    debug_assert!(idx.is_integer());
    let mut v = idx.to_integer();
    let p = BigInt::from(pr.p());
    let mut e = 0usize;
    while !v.is_one() {
        v /= &p;
        e += 1;
    }
    debug_assert!(e % pr.residue_degree() == 0);
    e / pr.residue_degree()
}

/// A canonical-module representative pinched between S and O_K at `pr`:
/// some c with c S^t ⊆ O_K and S ⊆ c S^t locally at `pr`.
fn pinched_canonical(s: &Order, pr: &PrimeIdeal) -> Result<FracIdeal> {
    let alg = s.alg();
    let ok = Order::maximal_order(alg)?;
    let dual = s.lattice().trace_dual();
    let room = ok.lattice().colon(&dual);
    let n = room.dim();
    let mut candidates: Vec<crate::algebra::AlgElement> =
        (0..n).map(|i| room.basis_element(i)).collect();
    for k in 1..40i64 {
        let mut acc = alg.zero();
        let mut w = BigInt::one();
        for i in 0..n {
            let e = room.basis_element(i);
            acc = alg.add(
                &acc,
                &alg.scale(&e, &num_rational::BigRational::from(w.clone())),
            );
            w *= k + i as i64 + 1;
        }
        candidates.push(acc);
    }
    let passes = |c: &crate::algebra::AlgElement| -> Result<Option<FracIdeal>> {
        if num_traits::Zero::is_zero(&alg.norm(c)) {
            return Ok(None);
        }
        let scaled = dual.scale_element(c)?;
        if local_contains(&scaled, s.lattice(), pr) {
            return Ok(Some(scaled));
        }
        Ok(None)
    };
    for c in &candidates {
        if let Some(k) = passes(c)? {
            return Ok(k);
        }
    }
    // a local generator exists (the localized maximal order is a
    // semilocal PID) and random small combinations hit one with
    // positive density, so widen the box until something passes
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca90);
    for height in [1i64, 2, 4, 8, 16] {
        for _ in 0..60 {
            let mut acc = alg.zero();
            for i in 0..n {
                let w = rng.gen_range(-height..=height);
                if w == 0 {
                    continue;
                }
                let e = room.basis_element(i);
                acc = alg.add(
                    &acc,
                    &alg.scale(&e, &num_rational::BigRational::from(BigInt::from(w))),
                );
            }
            if let Some(k) = passes(&acc)? {
                return Ok(k);
            }
        }
    }
    Err(Error::SearchBound(
        "no pinching element found for the canonical module".into(),
    ))
}

/// Almost Gorenstein at a maximal ideal: the pinched canonical module K
/// satisfies len(K/S) = type - 1 there.
pub fn is_almost_gorenstein_at(s: &Order, pr: &PrimeIdeal) -> Result<bool> {
    let k = pinched_canonical(s, pr)?;
    let sum = k.sum(s.lattice());
    let len = length_at_prime(&sum, s.lattice(), pr);
    verify::check("filtration and primary-part lengths agree", || {
        length_at_prime_via_primary(&sum, s.lattice(), pr) == len
    });
    let t = crate::cmtype::type_at_prime(s, pr);
    Ok(len == t - 1)
}

pub fn is_almost_gorenstein(s: &Order) -> Result<bool> {
    for pr in s.noninvertible_primes()? {
        if !is_almost_gorenstein_at(s, &pr)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Summary of one order's position in the hierarchy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinProfile {
    pub global_type: usize,
    pub gorenstein: bool,
    pub nearly_gorenstein: bool,
    pub almost_gorenstein: bool,
}

pub fn gorenstein_profile(s: &Order) -> Result<GorensteinProfile> {
    Ok(GorensteinProfile {
        global_type: crate::cmtype::global_type(s)?,
        gorenstein: crate::cmtype::is_gorenstein(s)?,
        nearly_gorenstein: is_nearly_gorenstein(s)?,
        almost_gorenstein: is_almost_gorenstein(s)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::cmtype;
    use crate::poly::ZPoly;

    #[test]
    fn gorenstein_orders_have_full_trace_ideal() {
        let k = make_algebra(&ZPoly::from_i64(&[9, 0, 1])).unwrap();
        let s = Order::equation_order(&k);
        assert_eq!(trace_ideal(&s), *s.lattice());
        assert!(is_nearly_gorenstein(&s).unwrap());
        assert!(is_almost_gorenstein(&s).unwrap());
    }

    #[test]
    fn lengths_agree_on_quadratic_quotient() {
        let k = make_algebra(&ZPoly::from_i64(&[36, 0, 1])).unwrap();
        let s = Order::equation_order(&k);
        let ok = Order::maximal_order(&k).unwrap();
        for pr in s.noninvertible_primes().unwrap() {
            let l1 = length_at_prime(ok.lattice(), s.lattice(), &pr);
            let l2 = length_at_prime_via_primary(ok.lattice(), s.lattice(), &pr);
            assert_eq!(l1, l2);
            assert!(l1 >= 1);
        }
        // total length over all primes is v_p-weighted index: [O_K : S] = 6
        let total: usize = s
            .noninvertible_primes()
            .unwrap()
            .iter()
            .map(|pr| {
                length_at_prime(ok.lattice(), s.lattice(), pr) * pr.residue_degree()
            })
            .sum();
        let idx = s.index_in_maximal().unwrap();
        let mut logsum = 0usize;
        let mut v = idx.clone();
        for p in [2u32, 3] {
            let pb = BigInt::from(p);
            while num_integer::Integer::is_multiple_of(&v, &pb) {
                v /= &pb;
                logsum += 1;
            }
        }
        assert_eq!(total, logsum);
    }

    #[test]
    fn type_two_cubic_is_almost_but_measured_honestly() {
        let k = make_algebra(&ZPoly::from_i64(&[-1, -1, 0, 1])).unwrap();
        let s = cmtype::z_plus_p_maximal(&k, 2).unwrap();
        let prs = s.noninvertible_primes().unwrap();
        assert_eq!(prs.len(), 1);
        let pr = &prs[0];
        assert!(!is_gorenstein_at(&s, pr));
        // the trace ideal is a proper ideal of S here
        let tr = trace_ideal(&s);
        assert!(s.lattice().contains_lattice(&tr));
        assert_ne!(tr, *s.lattice());
        let profile = gorenstein_profile(&s).unwrap();
        assert_eq!(profile.global_type, 2);
        assert!(!profile.gorenstein);
        // almost implies nearly
        if profile.almost_gorenstein {
            assert!(profile.nearly_gorenstein);
        }
    }
}
