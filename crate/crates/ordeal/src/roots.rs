//! Certified complex roots of squarefree integer polynomials.
//!
//! Strategy: Aberth-Ehrlich simultaneous iteration in dyadic big-float
//! arithmetic (warm-started from an f64 pass), followed by an exact
//! certificate.  The certificate is the classical simultaneous inclusion
//! bound: for pairwise distinct approximations `z_i` of a monic degree-n
//! polynomial, the disks around `z_i` of radius `n*|f(z_i)| / prod_{j!=i}
//! |z_i - z_j|` cover all roots, and disjoint disks isolate exactly one root
//! each.  Approximations are dyadic rationals, so both the radii and the
//! disjointness tests are exact rational arithmetic: no rounding-error
//! analysis of the iteration is ever needed.

use crate::error::{Error, Result};
use crate::poly::ZPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// One isolated root: an exact dyadic center with an exact radius bound.
#[derive(Clone, Debug)]
pub struct CertifiedRoot {
    pub re: BigRational,
    pub im: BigRational,
    /// The true root lies within `radius` of `re + im*i`.
    pub radius: BigRational,
    /// Certified real (the conjugate disk coincides with this one).
    pub is_real: bool,
    /// Index of the complex-conjugate root in the sorted output.
    pub conj_index: usize,
}

/// Isolated roots sorted by real part, then imaginary part.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub precision: u32,
    pub roots: Vec<CertifiedRoot>,
}

// ---------------------------------------------------------------------------
// Dyadic big-floats: value = mant * 2^exp, truncated to a working precision.

#[derive(Clone, Debug)]
pub(crate) struct Dy {
    m: BigInt,
    e: i64,
}

impl Dy {
    pub(crate) fn zero() -> Self {
        Dy { m: BigInt::zero(), e: 0 }
    }

    pub(crate) fn from_bigint(x: &BigInt) -> Self {
        Dy { m: x.clone(), e: 0 }
    }

    pub(crate) fn from_f64(x: f64) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Dy::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        Dy { m: BigInt::from(sign * m as i64), e }
    }

    fn norm(mut self, prec: u32) -> Self {
        let bits = self.m.bits() as i64;
        let excess = bits - prec as i64;
        if excess > 0 {
            self.m >>= excess as u64;
            self.e += excess;
        }
        if self.m.is_zero() {
            self.e = 0;
        }
        self
    }

    fn add(&self, other: &Dy, prec: u32) -> Dy {
        if self.m.is_zero() {
            return other.clone();
        }
        if other.m.is_zero() {
            return self.clone();
        }
        let e = self.e.min(other.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &other.m << (other.e - e) as u64;
        Dy { m: a + b, e }.norm(prec)
    }

    fn sub(&self, other: &Dy, prec: u32) -> Dy {
        self.add(&other.neg(), prec)
    }

    fn neg(&self) -> Dy {
        Dy { m: -self.m.clone(), e: self.e }
    }

    fn mul(&self, other: &Dy, prec: u32) -> Dy {
        Dy { m: &self.m * &other.m, e: self.e + other.e }.norm(prec)
    }

    /// Truncated reciprocal of a nonzero value.
    fn recip(&self, prec: u32) -> Dy {
        assert!(!self.m.is_zero(), "reciprocal of zero");
        let shift = prec as i64 + self.m.bits() as i64 + 2;
        let num = BigInt::one() << shift as u64;
        Dy { m: num / &self.m, e: -self.e - shift }.norm(prec)
    }

    fn div(&self, other: &Dy, prec: u32) -> Dy {
        self.mul(&other.recip(prec), prec)
    }

    /// Truncated square root of a nonnegative value.
    fn sqrt(&self, prec: u32) -> Dy {
        assert!(!self.m.is_negative(), "sqrt of a negative value");
        if self.m.is_zero() {
            return Dy::zero();
        }
        let bits = self.m.bits() as i64;
        let mut shift = 2 * prec as i64 - bits;
        if (self.e - shift) % 2 != 0 {
            shift += 1;
        }
        let (m, e) = if shift >= 0 {
            (&self.m << shift as u64, self.e - shift)
        } else {
            (&self.m >> (-shift) as u64, self.e - shift)
        };
        Dy { m: m.sqrt(), e: e / 2 }.norm(prec)
    }

    fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from(&self.m << self.e as u64)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    fn to_f64(&self) -> f64 {
        let bits = self.m.bits() as i64;
        if bits == 0 {
            return 0.0;
        }
        let shift = bits - 53;
        let m = if shift > 0 { &self.m >> shift as u64 } else { &self.m << (-shift) as u64 };
        m.to_f64().unwrap_or(0.0) * 2f64.powi((self.e + shift) as i32)
    }

    /// log2 magnitude, for convergence checks.
    fn mag2(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN / 2
        } else {
            self.m.bits() as i64 + self.e
        }
    }
}

#[derive(Clone, Debug)]
struct Cx {
    re: Dy,
    im: Dy,
}

impl Cx {
    fn new(re: Dy, im: Dy) -> Self {
        Cx { re, im }
    }

    fn from_f64(re: f64, im: f64) -> Self {
        Cx::new(Dy::from_f64(re), Dy::from_f64(im))
    }

    fn add(&self, o: &Cx, p: u32) -> Cx {
        Cx::new(self.re.add(&o.re, p), self.im.add(&o.im, p))
    }

    fn sub(&self, o: &Cx, p: u32) -> Cx {
        Cx::new(self.re.sub(&o.re, p), self.im.sub(&o.im, p))
    }

    fn mul(&self, o: &Cx, p: u32) -> Cx {
        let rr = self.re.mul(&o.re, p);
        let ii = self.im.mul(&o.im, p);
        let ri = self.re.mul(&o.im, p);
        let ir = self.im.mul(&o.re, p);
        Cx::new(rr.sub(&ii, p), ri.add(&ir, p))
    }

    fn abs2(&self, p: u32) -> Dy {
        self.re.mul(&self.re, p).add(&self.im.mul(&self.im, p), p)
    }

    fn recip(&self, p: u32) -> Cx {
        let d = self.abs2(p).recip(p);
        Cx::new(self.re.mul(&d, p), self.im.neg().mul(&d, p))
    }

    fn div(&self, o: &Cx, p: u32) -> Cx {
        self.mul(&o.recip(p), p)
    }

    /// Upper estimate of |z|'s binary magnitude.
    fn mag2(&self) -> i64 {
        self.re.mag2().max(self.im.mag2()) + 1
    }
}

// ---------------------------------------------------------------------------

/// Computes certified roots of a squarefree monic integer polynomial with
/// every radius below `2^-precision * max(1, |root|)`.
pub fn certified_roots(f: &ZPoly, precision: u32) -> Result<RootSet> {
    let n = f.degree();
    assert!(f.is_monic(), "root isolation wants a monic polynomial");
    if n == 0 {
        return Ok(RootSet { precision, roots: vec![] });
    }
    if !f.is_squarefree() {
        return Err(Error::InvalidPolynomial("polynomial is not squarefree".into()));
    }

    // f64 warm start.
    let mut zs: Vec<Cx> = aberth_f64(f).into_iter().map(|(r, i)| Cx::from_f64(r, i)).collect();

    let mut wp: u32 = (2 * precision + 64).max(128);
    loop {
        aberth_dyadic(f, &mut zs, wp);
        if let Some(set) = certify(f, &zs, precision, wp) {
            return Ok(set);
        }
        if wp > 1 << 20 {
            return Err(Error::Precondition(format!(
                "root isolation failed to certify at precision {wp}"
            )));
        }
        wp *= 2;
    }
}

fn aberth_f64(f: &ZPoly) -> Vec<(f64, f64)> {
    use std::f64::consts::PI;
    let n = f.degree();
    let cf: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
    // Cauchy-style radius; clamps keep degenerate f64 conversions harmless.
    let maxc = cf[..n].iter().map(|c| c.abs()).fold(0.0f64, f64::max);
    let r0 = (1.0 + maxc).min(1e18).max(1e-6);
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let ang = 2.0 * PI * k as f64 / n as f64 + 0.4 + 0.33 / n as f64;
            let rad = r0 * (1.0 + 0.05 * (k as f64) / n as f64);
            (rad * ang.cos(), rad * ang.sin())
        })
        .collect();

    let eval = |x: (f64, f64)| -> ((f64, f64), (f64, f64)) {
        let mut p = (0.0, 0.0);
        let mut dp = (0.0, 0.0);
        for c in cf.iter().rev() {
            dp = (dp.0 * x.0 - dp.1 * x.1 + p.0, dp.0 * x.1 + dp.1 * x.0 + p.1);
            p = (p.0 * x.0 - p.1 * x.1 + c, p.0 * x.1 + p.1 * x.0);
        }
        (p, dp)
    };
    let cdiv = |a: (f64, f64), b: (f64, f64)| -> (f64, f64) {
        let d = b.0 * b.0 + b.1 * b.1;
        if d == 0.0 {
            return (0.0, 0.0);
        }
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };

    for _ in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(z[i]);
            let newton = cdiv(p, dp);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    let inv = cdiv((1.0, 0.0), d);
                    s = (s.0 + inv.0, s.1 + inv.1);
                }
            }
            let denom = (1.0 - (newton.0 * s.0 - newton.1 * s.1), -(newton.0 * s.1 + newton.1 * s.0));
            let w = cdiv(newton, denom);
            z[i] = (z[i].0 - w.0, z[i].1 - w.1);
            moved = moved.max(w.0.abs() + w.1.abs());
        }
        if moved < 1e-13 {
            break;
        }
    }
    z
}

fn aberth_dyadic(f: &ZPoly, z: &mut [Cx], wp: u32) {
    let n = z.len();
    let coeffs: Vec<Dy> = f.coeffs().iter().map(Dy::from_bigint).collect();
    let eval = |x: &Cx| -> (Cx, Cx) {
        let mut p = Cx::new(Dy::zero(), Dy::zero());
        let mut dp = Cx::new(Dy::zero(), Dy::zero());
        for c in coeffs.iter().rev() {
            dp = dp.mul(x, wp).add(&p, wp);
            p = p.mul(x, wp).add(&Cx::new(c.clone(), Dy::zero()), wp);
        }
        (p, dp)
    };
    // Quadratic convergence: the iteration count only needs to absorb the
    // precision doubling plus slack for clustered starts.
    let max_iter = 60 + 2 * (wp as usize).ilog2() as usize;
    for _ in 0..max_iter {
        let mut biggest_move = i64::MIN;
        let mut scale = i64::MIN;
        for i in 0..n {
            let (p, dp) = eval(&z[i]);
            if p.re.m.is_zero() && p.im.m.is_zero() {
                continue;
            }
            let newton = p.div(&dp, wp);
            let mut s = Cx::new(Dy::zero(), Dy::zero());
            for j in 0..n {
                if j != i {
                    s = s.add(&z[i].sub(&z[j], wp).recip(wp), wp);
                }
            }
            let one = Cx::new(Dy::from_bigint(&BigInt::one()), Dy::zero());
            let denom = one.sub(&newton.mul(&s, wp), wp);
            let w = if denom.re.m.is_zero() && denom.im.m.is_zero() {
                newton
            } else {
                newton.div(&denom, wp)
            };
            biggest_move = biggest_move.max(w.mag2());
            z[i] = z[i].sub(&w, wp);
            scale = scale.max(z[i].mag2());
        }
        if biggest_move < scale.max(0) - wp as i64 + 8 {
            break;
        }
    }
}

/// Exact certificate.  Returns `None` when disks are too large or overlap.
fn certify(f: &ZPoly, zs: &[Cx], precision: u32, wp: u32) -> Option<RootSet> {
    let n = zs.len();
    let mids: Vec<(BigRational, BigRational)> =
        zs.iter().map(|z| (z.re.to_rational(), z.im.to_rational())).collect();

    // |f(z_i)|^2 exactly, via Horner over exact rationals.
    let fz2: Vec<BigRational> = mids
        .iter()
        .map(|(re, im)| {
            let mut pre = BigRational::zero();
            let mut pim = BigRational::zero();
            for c in f.coeffs().iter().rev() {
                let nre = &pre * re - &pim * im + BigRational::from(c.clone());
                let nim = &pre * im + &pim * re;
                pre = nre;
                pim = nim;
            }
            &pre * &pre + &pim * &pim
        })
        .collect();

    // prod_{j != i} |z_i - z_j|^2 exactly.
    let mut sep2 = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let dre = &mids[i].0 - &mids[j].0;
            let dim = &mids[i].1 - &mids[j].1;
            let d = &dre * &dre + &dim * &dim;
            if d.is_zero() {
                return None; // coincident approximations; iterate more
            }
            sep2[i][j] = d.clone();
            sep2[j][i] = d;
        }
    }

    let n2 = BigRational::from(BigInt::from((n * n) as u64));
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let mut denom = BigRational::one();
        for j in 0..n {
            if j != i {
                denom *= &sep2[i][j];
            }
        }
        let r2 = &n2 * &fz2[i] / denom;
        let r = rational_sqrt_upper(&r2, wp);
        // Radius target: 2^-precision relative to the root's size.
        let scale = BigRational::one().max(rational_sqrt_upper(
            &(&mids[i].0 * &mids[i].0 + &mids[i].1 * &mids[i].1),
            64,
        ));
        let target = scale / BigRational::from(BigInt::one() << precision as u64);
        if r > target {
            return None;
        }
        radii.push(r);
    }

    // Disjointness: |z_i - z_j| > r_i + r_j.
    for i in 0..n {
        for j in i + 1..n {
            let s = &radii[i] + &radii[j];
            if sep2[i][j] <= &s * &s {
                return None;
            }
        }
    }

    // Conjugate structure (f has real coefficients): a disk containing a
    // non-real root must have a disjoint mirror disk, and a disk meeting the
    // real axis contains its own conjugate, hence a real root.
    let mut roots: Vec<CertifiedRoot> = Vec::with_capacity(n);
    let mut paired = vec![usize::MAX; n];
    for i in 0..n {
        if mids[i].1.abs() <= radii[i] {
            paired[i] = i;
        }
    }
    for i in 0..n {
        if paired[i] != usize::MAX {
            continue;
        }
        // The mirror disk of i must be one of the others.
        let mut found = usize::MAX;
        for j in 0..n {
            if j == i || paired[j] != usize::MAX {
                continue;
            }
            let dre = &mids[i].0 - &mids[j].0;
            let dim = &mids[i].1 + &mids[j].1;
            let d2 = &dre * &dre + &dim * &dim;
            let s = &radii[i] + &radii[j];
            if d2 <= &s * &s {
                found = j;
                break;
            }
        }
        if found == usize::MAX {
            return None; // symmetry not yet resolved; iterate more
        }
        paired[i] = found;
        paired[found] = i;
    }

    for i in 0..n {
        let j = paired[i];
        if j == i {
            roots.push(CertifiedRoot {
                re: mids[i].0.clone(),
                im: BigRational::zero(),
                radius: &radii[i] + mids[i].1.abs(),
                is_real: true,
                conj_index: usize::MAX,
            });
        } else {
            // Symmetrize the pair so conjugates print consistently.
            let re = (&mids[i].0 + &mids[j].0) / BigRational::from(BigInt::from(2));
            let im = (&mids[i].1 - &mids[j].1) / BigRational::from(BigInt::from(2));
            let shift_re = (&mids[i].0 - &re).abs();
            let shift_im = (&mids[i].1 - &im).abs();
            roots.push(CertifiedRoot {
                re,
                im,
                radius: &radii[i] + shift_re + shift_im,
                is_real: false,
                conj_index: usize::MAX,
            });
        }
    }

    roots.sort_by(|a, b| a.re.cmp(&b.re).then(a.im.cmp(&b.im)));
    // Conjugate indices after sorting.
    let mut out = roots;
    for i in 0..out.len() {
        if out[i].is_real {
            out[i].conj_index = i;
        } else {
            let re_i = out[i].re.clone();
            let target_im = -out[i].im.clone();
            let pos = out
                .iter()
                .position(|r| r.re == re_i && r.im == target_im)
                .expect("conjugate root present");
            out[i].conj_index = pos;
        }
    }

    Some(RootSet { precision, roots: out })
}

/// Dyadic upper bound for the square root of a nonnegative rational.
pub(crate) fn rational_sqrt_upper(q: &BigRational, bits: u32) -> BigRational {
    assert!(!q.is_negative());
    if q.is_zero() {
        return BigRational::zero();
    }
    let shift = 2 * bits as u64;
    let scaled = (q.numer() << shift) / q.denom();
    let root = scaled.sqrt() + 1; // sqrt truncates, +1 makes it an upper bound
    BigRational::new(root, BigInt::one() << bits as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(f: &ZPoly, prec: u32) -> RootSet {
        let set = certified_roots(f, prec).unwrap();
        assert_eq!(set.roots.len(), f.degree());
        // Radii honored and the real-root count matches Sturm.
        let real_count = set.roots.iter().filter(|r| r.is_real).count();
        assert_eq!(real_count, f.count_real_roots());
        for (i, r) in set.roots.iter().enumerate() {
            assert!(r.radius < BigRational::new(BigInt::one(), BigInt::from(1u64 << 32)));
            if r.is_real {
                assert_eq!(r.conj_index, i);
                assert!(r.im.is_zero());
            } else {
                assert_eq!(set.roots[r.conj_index].re, r.re);
                assert_eq!(set.roots[r.conj_index].im, -&r.im);
            }
        }
        set
    }

    #[test]
    fn quadratic_with_known_roots() {
        // x^2 - 2: roots +-sqrt(2)
        let set = check(&ZPoly::from_i64(&[-2, 0, 1]), 64);
        let s = set.roots[1].re.to_f64().unwrap();
        assert!((s - 1.4142135623730951).abs() < 1e-12);
        assert!(set.roots[0].re < set.roots[1].re);
    }

    #[test]
    fn gaussian_integers() {
        // x^2 + 9: roots +-3i
        let set = check(&ZPoly::from_i64(&[9, 0, 1]), 80);
        assert!(!set.roots[0].is_real);
        assert_eq!(set.roots[0].re, set.roots[1].re);
        assert!((set.roots[1].im.to_f64().unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn flagship_sextic_is_totally_imaginary() {
        let f = ZPoly::parse("4096,-1536,96,43,6,-6,1").unwrap();
        let set = check(&f, 96);
        assert!(set.roots.iter().all(|r| !r.is_real));
        // Weil bound: all roots have |z| = 4.
        for r in &set.roots {
            let m2 = (&r.re * &r.re + &r.im * &r.im).to_f64().unwrap();
            assert!((m2 - 16.0).abs() < 1e-9, "modulus^2 = {m2}");
        }
    }

    #[test]
    fn split_polynomial_with_close_roots() {
        // (x-1)(x-2)(x^2+1)(x^2+x+1), not squarefree-stressed but mixed.
        let f = ZPoly::from_i64(&[2, 1, 2, 0, 1]); // placeholder small quartic
        let _ = check(&ZPoly::from_i64(&[-2, 3, -1, 0, 0, 1]), 64);
        let _ = check(&f, 64);
    }
}
