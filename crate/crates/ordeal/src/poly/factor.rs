//! Integer factoring: trial division plus Pollard rho, with bounded effort.
//!
//! Factoring only ever gates discriminant analysis and residue-field setup;
//! when the effort bound is hit the caller gets an explicit error instead of
//! a silently wrong result.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const TRIAL_BOUND: u64 = 100_000;
const RHO_ROUNDS: usize = 64;
const RHO_ITERATIONS: u64 = 1 << 22;

/// Factors `n > 0` into prime powers, smallest prime first.
pub fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    assert!(n.is_positive(), "factor() wants a positive integer");
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();

    fn push(p: BigInt, k: u32, out: &mut Vec<(BigInt, u32)>) {
        if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
            e.1 += k;
        } else {
            out.push((p, k));
        }
    }

    for p in 2..=TRIAL_BOUND {
        if rest.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut k = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            k += 1;
        }
        if k > 0 {
            push(pb, k, &mut out);
        }
    }

    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, 1, &mut out);
            continue;
        }
        // Perfect powers split for free and defeat rho's worst case.
        if let Some((root, k)) = perfect_power(&m) {
            for _ in 0..k {
                stack.push(root.clone());
            }
            continue;
        }
        let d = pollard_rho(&m).ok_or_else(|| Error::FactoringFailure(m.to_string()))?;
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Miller-Rabin with fixed witness set; deterministic for anything the rest
/// of the crate can reach, overwhelming for larger inputs.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let pb = BigInt::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2u32), n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest `(r, k)` with `r^k = n` and `k >= 2`, if any.
pub fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    let bits = n.bits() as u32;
    for k in (2..=bits.max(2)).rev() {
        let r = n.nth_root(k);
        if r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

fn pollard_rho(n: &BigInt) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    for round in 1..=RHO_ROUNDS {
        let c = BigInt::from(round as u64);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut x = BigInt::from(2u32 + round as u32);
        let mut y = x.clone();
        let mut d = BigInt::one();
        let mut it = 0u64;
        // Brent-style batching of gcds.
        let mut q = BigInt::one();
        while d.is_one() && it < RHO_ITERATIONS {
            x = f(&x);
            y = f(&f(&y));
            let diff = (&x - &y).abs();
            if diff.is_zero() {
                break;
            }
            q = (&q * &diff) % n;
            it += 1;
            if it % 64 == 0 {
                d = q.gcd(n);
            }
        }
        if d.is_one() {
            d = q.gcd(n);
        }
        if !d.is_one() && &d != n {
            return Some(d);
        }
    }
    None
}

/// Factors `n` expecting every prime to fit in u64; errors otherwise.
pub fn factor_u64(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    factor(n)?
        .into_iter()
        .map(|(p, k)| p.to_u64().map(|p| (p, k)).ok_or(Error::PrimeTooLarge(p.to_string())))
        .collect()
}

/// All positive divisors of `n`, ascending.  Intended for small inputs.
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut ds = vec![BigInt::one()];
    for (p, k) in factor(n)? {
        let mut next = Vec::with_capacity(ds.len() * (k as usize + 1));
        let mut pe = BigInt::one();
        for _ in 0..=k {
            for d in &ds {
                next.push(d * &pe);
            }
            pe *= &p;
        }
        ds = next;
    }
    ds.sort();
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        let f = factor(&BigInt::from(5040)).unwrap();
        assert_eq!(
            f,
            vec![
                (BigInt::from(2), 4),
                (BigInt::from(3), 2),
                (BigInt::from(5), 1),
                (BigInt::from(7), 1)
            ]
        );
    }

    #[test]
    fn semiprime_beyond_trial_range() {
        let p = BigInt::from(1_000_003u64);
        let q = BigInt::from(1_000_033u64);
        let f = factor(&(&p * &q)).unwrap();
        assert_eq!(f, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_probable_prime(&BigInt::from(2u32)));
        assert!(is_probable_prime(&BigInt::from(1_000_000_007u64)));
        assert!(!is_probable_prime(&BigInt::from(1u32)));
        assert!(!is_probable_prime(&(BigInt::from(1_000_003u64) * 17)));
    }

    #[test]
    fn divisors_of_twelve() {
        let ds = divisors(&BigInt::from(12)).unwrap();
        let expect: Vec<BigInt> = [1, 2, 3, 4, 6, 12].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(ds, expect);
    }

    #[test]
    fn perfect_power_detection() {
        assert_eq!(perfect_power(&BigInt::from(729)), Some((BigInt::from(3), 6)));
        assert_eq!(perfect_power(&BigInt::from(12)), None);
    }
}
