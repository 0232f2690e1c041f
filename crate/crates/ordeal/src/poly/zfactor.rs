//! Irreducible factorization of monic squarefree polynomials over Z:
//! distinct-degree and equal-degree splitting modulo a good odd prime,
//! linear Hensel lifting of the modular factors, and subset recombination
//! against a coefficient bound.

use crate::error::{Error, Result};
use crate::fpalg::{pgcd, pmul, ppowmod, prem, ptrim};
use crate::linalg::{FieldOps, Fp};
use crate::poly::ZPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Monic irreducible factors, sorted by degree then coefficients.
pub fn factor_squarefree_monic(f: &ZPoly) -> Result<Vec<ZPoly>> {
    if f.is_zero() || !f.is_monic() || f.degree() == 0 {
        return Err(Error::Precondition(
            "factorization needs a monic polynomial of positive degree".into(),
        ));
    }
    if !f.is_squarefree() {
        return Err(Error::Precondition("factorization needs a squarefree polynomial".into()));
    }
    if f.degree() == 1 {
        return Ok(vec![f.clone()]);
    }
    let p = good_prime(f)?;
    let fbar = to_fp(f, p);
    let modular = factor_mod_p(p, &fbar);
    if modular.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    let bound = factor_coeff_bound(f);
    let (pk, lifted) = hensel_lift(f, p, &modular, &bound);
    let mut out = recombine(f, &pk, lifted);
    out.sort_by(compare_polys);
    debug_assert_eq!(
        out.iter().fold(ZPoly::from_i64(&[1]), |acc, g| acc.mul(g)),
        *f,
        "factor product must recover the input"
    );
    Ok(out)
}

fn compare_polys(a: &ZPoly, b: &ZPoly) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        for i in (0..=a.degree()).rev() {
            let o = a.coeff(i).cmp(&b.coeff(i));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// Smallest odd prime keeping the reduction squarefree.
fn good_prime(f: &ZPoly) -> Result<u64> {
    let mut p = 3u64;
    while p < 100_000 {
        if crate::order::is_prime_u64(p) {
            let fc = Fp::new(p);
            let fbar = to_fp(f, p);
            let dbar = to_fp(&f.derivative(), p);
            if fbar.len() == f.degree() + 1 && pgcd(&fc, &fbar, &dbar).len() == 1 {
                return Ok(p);
            }
        }
        p += 2;
    }
    Err(Error::FactoringFailure("no squarefree reduction prime found".into()))
}

fn to_fp(f: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = (0..=f.degree())
        .map(|i| {
            let mut c = f.coeff(i) % &pb;
            if c.is_negative() {
                c += &pb;
            }
            c.try_into().unwrap()
        })
        .collect();
    ptrim(&mut v);
    v
}

fn psub(fc: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let ai = a.get(i).copied().unwrap_or(0);
        let bi = b.get(i).copied().unwrap_or(0);
        *o = fc.sub(ai, bi);
    }
    ptrim(&mut out);
    out
}

/// Euclidean division by a monic divisor over F_p.
fn pdivrem(fc: &Fp, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    let lead_inv = fc.inv(b[db]).expect("divisor has invertible lead");
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = fc.mul(r[dr], lead_inv);
        q[dr - db] = c;
        for (k, &bk) in b.iter().enumerate() {
            r[dr - db + k] = fc.sub(r[dr - db + k], fc.mul(c, bk));
        }
        ptrim(&mut r);
    }
    (q, r)
}

/// Extended gcd over F_p[x]: returns (g, s, t) with s a + t b = g, g monic.
fn pegcd(fc: &Fp, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    ptrim(&mut r0);
    ptrim(&mut r1);
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(fc, &r0, &r1);
        let s = psub(fc, &s0, &pmul(fc, &q, &s1));
        let t = psub(fc, &t0, &pmul(fc, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let lead_inv = fc.inv(*r0.last().unwrap()).unwrap();
    let scale = |v: &[u64]| v.iter().map(|&c| fc.mul(c, lead_inv)).collect::<Vec<_>>();
    (scale(&r0), scale(&s0), scale(&t0))
}

/// Distinct-degree then equal-degree splitting; input squarefree mod p.
fn factor_mod_p(p: u64, fbar: &[u64]) -> Vec<Vec<u64>> {
    let fc = Fp::new(p);
    let x = vec![0u64, 1];
    let mut rest = fbar.to_vec();
    let mut w = prem(&fc, &x, &rest);
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fac7);
    let mut d = 1usize;
    while 2 * d <= rest.len() - 1 {
        w = ppowmod(&fc, &w, p, &rest);
        let g = pgcd(&fc, &psub(&fc, &w, &x), &rest);
        if g.len() > 1 {
            split_equal_degree(&fc, &g, d, &mut rng, &mut out);
            let (q, r) = pdivrem(&fc, &rest, &g);
            debug_assert!(r.is_empty());
            rest = q;
            w = prem(&fc, &w, &rest);
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

/// Cantor-Zassenhaus split of a product of degree-d irreducibles, p odd.
fn split_equal_degree(
    fc: &Fp,
    h: &[u64],
    d: usize,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Vec<u64>>,
) {
    if h.len() - 1 == d {
        out.push(h.to_vec());
        return;
    }
    let q = (fc.p as u128).pow(d as u32);
    let e = ((q - 1) / 2).try_into().expect("splitting exponent fits a word");
    loop {
        let a: Vec<u64> = (0..h.len() - 1).map(|_| rng.gen_range(0..fc.p)).collect();
        let b = ppowmod(fc, &a, e, h);
        let g = pgcd(fc, &psub(fc, &b, &[1]), h);
        if g.len() > 1 && g.len() < h.len() {
            let (rest, r) = pdivrem(fc, h, &g);
            debug_assert!(r.is_empty());
            split_equal_degree(fc, &g, d, rng, out);
            split_equal_degree(fc, &rest, d, rng, out);
            return;
        }
    }
}

/// Bound on the coefficients of any monic divisor of f over Z.
fn factor_coeff_bound(f: &ZPoly) -> BigInt {
    let norm_sq: BigInt = (0..=f.degree()).map(|i| f.coeff(i).pow(2)).sum();
    let norm = norm_sq.sqrt() + 1;
    (norm + 1) << (f.degree() + 1)
}

fn reduce_mod(v: &mut [BigInt], m: &BigInt) {
    for c in v.iter_mut() {
        *c = c.mod_floor(m);
    }
}

fn zp_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    reduce_mod(&mut out, m);
    out
}

fn lift_u64(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts the modular factorization to precision exceeding twice the bound.
fn hensel_lift(
    f: &ZPoly,
    p: u64,
    modular: &[Vec<u64>],
    bound: &BigInt,
) -> (BigInt, Vec<Vec<BigInt>>) {
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    let target: BigInt = bound * 2;
    while pk <= target {
        pk *= &pb;
    }
    let fv: Vec<BigInt> = (0..=f.degree()).map(|i| f.coeff(i)).collect();
    let mut out = Vec::with_capacity(modular.len());
    lift_chain(fv, modular, p, &pk, &mut out);
    (pk, out)
}

fn lift_chain(fv: Vec<BigInt>, factors: &[Vec<u64>], p: u64, pk: &BigInt, out: &mut Vec<Vec<BigInt>>) {
    if factors.len() == 1 {
        let mut v = fv;
        reduce_mod(&mut v, pk);
        out.push(v);
        return;
    }
    let fc = Fp::new(p);
    let g0 = factors[0].clone();
    let mut h0 = vec![1u64];
    for fac in &factors[1..] {
        h0 = pmul(&fc, &h0, fac);
    }
    let (g, h) = lift_pair(&fv, &g0, &h0, p, pk);
    out.push(g);
    lift_chain(h, &factors[1..], p, pk, out);
}

/// Linear Hensel step with a fixed Bezout pair mod p; f = g h mod p in,
/// f = g h mod pk out, with g, h monic throughout.
fn lift_pair(
    fv: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    p: u64,
    pk: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let fc = Fp::new(p);
    let (unit, s, t) = pegcd(&fc, g0, h0);
    debug_assert_eq!(unit, vec![1]);
    let pb = BigInt::from(p);
    let mut g = lift_u64(g0);
    let mut h = lift_u64(h0);
    let mut m = pb.clone();
    while &m < pk {
        let prod = zp_mul(&g, &h, pk);
        // e = (f - g h) / m reduced mod p drives the next correction
        let e: Vec<u64> = (0..fv.len())
            .map(|i| {
                let d = (fv.get(i).cloned().unwrap_or_default()
                    - prod.get(i).cloned().unwrap_or_default())
                    / &m;
                let r = d.mod_floor(&pb);
                r.try_into().unwrap()
            })
            .collect();
        let (q, dg) = pdivrem(&fc, &pmul(&fc, &e, &t), g0);
        let mut dh = pmul(&fc, &e, &s);
        let qh = pmul(&fc, &q, h0);
        dh = padd(&fc, &dh, &qh);
        debug_assert!(dh.len() < h0.len() + 1);
        for (i, &c) in dg.iter().enumerate() {
            g[i] += &m * BigInt::from(c);
        }
        for (i, &c) in dh.iter().enumerate() {
            h[i] += &m * BigInt::from(c);
        }
        m *= &pb;
        reduce_mod(&mut g, &m.clone().min(pk.clone()));
        reduce_mod(&mut h, &m.clone().min(pk.clone()));
    }
    (g, h)
}

fn padd(fc: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        *o = fc.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0));
    }
    ptrim(&mut out);
    out
}

/// Symmetric representative in (-pk/2, pk/2].
fn symmetric(c: &BigInt, pk: &BigInt) -> BigInt {
    if c * 2 > *pk {
        c - pk
    } else {
        c.clone()
    }
}

/// Groups lifted modular factors into true divisors by trial division.
fn recombine(f: &ZPoly, pk: &BigInt, lifted: Vec<Vec<BigInt>>) -> Vec<ZPoly> {
    let mut pool = lifted;
    let mut fcur = f.clone();
    let mut out = Vec::new();
    let mut size = 1usize;
    while 2 * size <= pool.len() {
        let mut advanced = false;
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let mut prod = vec![BigInt::one()];
            for &i in &combo {
                prod = zp_mul(&prod, &pool[i], pk);
            }
            let cand = ZPoly::new(prod.iter().map(|c| symmetric(c, pk)).collect());
            if let Some(q) = fcur.div_exact(&cand) {
                out.push(cand);
                fcur = q;
                for &i in combo.iter().rev() {
                    pool.remove(i);
                }
                advanced = true;
                break;
            }
            if !next_combination(&mut combo, pool.len()) {
                break;
            }
        }
        if !advanced {
            size += 1;
        }
    }
    if fcur.degree() > 0 {
        out.push(fcur);
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(coeffs: &[i64], expect: &[&[i64]]) {
        let f = ZPoly::from_i64(coeffs);
        let got = factor_squarefree_monic(&f).unwrap();
        let want: Vec<ZPoly> = expect.iter().map(|c| ZPoly::from_i64(c)).collect();
        assert_eq!(got, want, "factors of {coeffs:?}");
    }

    #[test]
    fn splits_linear_products() {
        check(&[-6, 11, -6, 1], &[&[-3, 1], &[-2, 1], &[-1, 1]]);
        check(&[0, -4, 0, 1], &[&[-2, 1], &[0, 1], &[2, 1]]);
    }

    #[test]
    fn keeps_irreducibles_whole() {
        check(&[5, 0, 1], &[&[5, 0, 1]]);
        check(&[-1, -1, 0, 1], &[&[-1, -1, 0, 1]]);
        // x^4 + 1 splits modulo every prime but not over Z
        check(&[1, 0, 0, 0, 1], &[&[1, 0, 0, 0, 1]]);
    }

    #[test]
    fn splits_quadratic_pairs() {
        check(&[1, 1, 2, 1, 1], &[&[1, 0, 1], &[1, 1, 1]]);
    }

    #[test]
    fn splits_the_flagship_sextic() {
        let f = ZPoly::parse("4096,-1536,96,43,6,-6,1").unwrap();
        let got = factor_squarefree_monic(&f).unwrap();
        assert_eq!(
            got,
            vec![ZPoly::from_i64(&[16, -5, 1]), ZPoly::from_i64(&[256, -16, -15, -1, 1])]
        );
    }

    #[test]
    fn mixed_degrees_with_large_coefficients() {
        let a = ZPoly::from_i64(&[7, 1]);
        let b = ZPoly::from_i64(&[123457, -50, 1]);
        let c = ZPoly::from_i64(&[-3, 9999, 0, 1]);
        let f = a.mul(&b).mul(&c);
        let got = factor_squarefree_monic(&f).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got.contains(&a) && got.contains(&b) && got.contains(&c));
    }
}
