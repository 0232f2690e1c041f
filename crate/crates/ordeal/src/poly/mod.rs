//! Dense univariate polynomials over Z and Q.
//!
//! Coefficients are stored ascending (constant term first).  The input
//! format for defining polynomials everywhere in the crate is the ascending
//! comma list "c0,c1,...,1" with a monic leading 1.

pub mod factor;
pub mod zfactor;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial over Z, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Parses the ascending comma format, e.g. "16,-5,1" for x^2 - 5x + 16.
    pub fn parse(s: &str) -> Result<ZPoly> {
        let coeffs: Vec<BigInt> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::InvalidPolynomial(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<_>>()?;
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial("empty coefficient list".into()));
        }
        Ok(ZPoly::new(coeffs))
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> ZPoly {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        ZPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    pub fn to_rational(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from(c.clone())).collect())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    /// Exact division; `None` when `d` does not divide `self` over Z.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        let q = self.to_rational().div_rem(&d.to_rational());
        if !q.1.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(q.0.coeffs.len());
        for c in q.0.coeffs {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(ZPoly::new(out))
    }

    /// Resultant of `self` and `other` via the Sylvester matrix.
    pub fn resultant(&self, other: &ZPoly) -> BigInt {
        use crate::linalg::{det_bareiss, IntMatrix};
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let n = self.degree();
        let m = other.degree();
        if n == 0 {
            return self.coeffs[0].pow(m as u32);
        }
        if m == 0 {
            return other.coeffs[0].pow(n as u32);
        }
        let size = n + m;
        let mat = IntMatrix::from_fn(size, size, |i, j| {
            if i < m {
                // row of self's coefficients, descending, shifted by i
                let k = n as i64 - (j as i64 - i as i64);
                if (0..=n as i64).contains(&k) {
                    self.coeff(k as usize)
                } else {
                    BigInt::zero()
                }
            } else {
                let i2 = i - m;
                let k = m as i64 - (j as i64 - i2 as i64);
                if (0..=m as i64).contains(&k) {
                    other.coeff(k as usize)
                } else {
                    BigInt::zero()
                }
            }
        });
        det_bareiss(&mat)
    }

    /// Discriminant of a monic polynomial.
    pub fn discriminant(&self) -> BigInt {
        assert!(self.is_monic(), "discriminant wants a monic polynomial");
        let n = self.degree();
        let r = self.resultant(&self.derivative());
        if (n * (n - 1) / 2) % 2 == 1 {
            -r
        } else {
            r
        }
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree() == 0 {
            return true;
        }
        !self.discriminant().is_zero()
    }

    /// Number of distinct real roots, by Sturm's theorem.
    pub fn count_real_roots(&self) -> usize {
        let mut chain: Vec<QPoly> = vec![self.to_rational(), self.derivative().to_rational()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let rem = chain[k - 2].div_rem(&chain[k - 1]).1;
            chain.push(rem.neg());
        }
        let sign_at_inf = |p: &QPoly, positive: bool| -> i32 {
            let lead = p.coeffs.last().unwrap();
            let mut s = if lead.is_positive() { 1 } else { -1 };
            if !positive && p.degree() % 2 == 1 {
                s = -s;
            }
            s
        };
        let changes = |signs: Vec<i32>| -> usize {
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_neg = changes(chain.iter().map(|p| sign_at_inf(p, false)).collect());
        let at_pos = changes(chain.iter().map(|p| sign_at_inf(p, true)).collect());
        at_neg - at_pos
    }

    /// Integer roots with multiplicity one (callers require squarefree `f`).
    /// `None` when the constant term resists factoring.
    pub fn integer_roots(&self) -> Option<Vec<BigInt>> {
        assert!(self.is_monic());
        let mut roots = Vec::new();
        let mut g = self.clone();
        while g.coeff(0).is_zero() && g.degree() > 0 {
            roots.push(BigInt::zero());
            g = ZPoly::new(g.coeffs[1..].to_vec());
        }
        if g.degree() == 0 {
            roots.sort();
            return Some(roots);
        }
        let c0 = g.coeff(0).abs();
        let divs = factor::divisors(&c0).ok()?;
        for d in divs {
            for cand in [d.clone(), -d] {
                if g.eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
        roots.sort();
        roots.dedup();
        Some(roots)
    }
}

impl std::fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt_terms(f, self.coeffs.iter().map(|c| (c.is_zero(), c.to_string())))
    }
}

/// Polynomial over Q, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn neg(&self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = d.degree();
        let lead_inv = d.coeffs[dd].recip();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = rem[k].clone() * &lead_inv;
            if !c.is_zero() {
                quot[k - dd] = c.clone();
                for i in 0..=dd {
                    let t = &d.coeffs[i] * &c;
                    rem[k - dd + i] -= t;
                }
            }
            rem.pop();
        }
        (QPoly::new(quot), QPoly::new(rem))
    }
}

fn fmt_terms(
    f: &mut std::fmt::Formatter<'_>,
    coeffs: impl Iterator<Item = (bool, String)>,
) -> std::fmt::Result {
    let terms: Vec<String> = coeffs
        .enumerate()
        .filter(|(_, (zero, _))| !zero)
        .map(|(i, (_, c))| match i {
            0 => c,
            1 => format!("{c}*x"),
            _ => format!("{c}*x^{i}"),
        })
        .collect();
    if terms.is_empty() {
        return write!(f, "0");
    }
    write!(f, "{}", terms.join(" + "))
}

impl std::fmt::Debug for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fmt_terms(f, self.coeffs.iter().map(|c| (c.is_zero(), c.to_string())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let f = ZPoly::parse("16,-5,1").unwrap();
        assert_eq!(f.degree(), 2);
        assert!(f.is_monic());
        assert_eq!(f.eval(&BigInt::from(2)), BigInt::from(10));
        assert!(ZPoly::parse("a,b").is_err());
    }

    #[test]
    fn discriminants_of_quadratics() {
        // disc(x^2 + bx + c) = b^2 - 4c
        for (b, c) in [(0i64, 5i64), (-5, 16), (3, -7), (0, -1)] {
            let f = ZPoly::from_i64(&[c, b, 1]);
            assert_eq!(f.discriminant(), BigInt::from(b * b - 4 * c));
        }
    }

    #[test]
    fn discriminant_of_flagship_sextic() {
        let f = ZPoly::parse("4096,-1536,96,43,6,-6,1").unwrap();
        let d: BigInt = "-2794767511584138854400".parse().unwrap();
        assert_eq!(f.discriminant(), d);
        assert!(f.is_squarefree());
    }

    #[test]
    fn squarefree_detection() {
        assert!(!ZPoly::from_i64(&[1, 2, 1]).is_squarefree()); // (x+1)^2
        assert!(ZPoly::from_i64(&[-1, 0, 1]).is_squarefree());
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(ZPoly::from_i64(&[-2, 0, 1]).count_real_roots(), 2); // x^2-2
        assert_eq!(ZPoly::from_i64(&[1, 0, 1]).count_real_roots(), 0); // x^2+1
        assert_eq!(ZPoly::from_i64(&[0, -1, 0, 1]).count_real_roots(), 3); // x^3-x
        // x^4 - x^3 - 15x^2 - 16x + 256 is totally imaginary
        assert_eq!(ZPoly::from_i64(&[256, -16, -15, -1, 1]).count_real_roots(), 0);
    }

    #[test]
    fn integer_root_extraction() {
        let f = ZPoly::from_i64(&[-6, 11, -6, 1]); // (x-1)(x-2)(x-3)
        assert_eq!(
            f.integer_roots().unwrap(),
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]
        );
        assert_eq!(ZPoly::from_i64(&[1, 0, 1]).integer_roots().unwrap(), Vec::<BigInt>::new());
        let g = ZPoly::from_i64(&[0, -4, 0, 1]); // x(x^2-4)
        assert_eq!(
            g.integer_roots().unwrap(),
            vec![BigInt::from(-2), BigInt::from(0), BigInt::from(2)]
        );
    }

    #[test]
    fn exact_division() {
        let f = ZPoly::from_i64(&[-6, 11, -6, 1]);
        let d = ZPoly::from_i64(&[-1, 1]);
        let q = f.div_exact(&d).unwrap();
        assert_eq!(q, ZPoly::from_i64(&[6, -5, 1]));
        assert!(f.div_exact(&ZPoly::from_i64(&[7, 1])).is_none());
    }
}
