//! Ideal class monoids: the class count fibered over multiplicator
//! rings, integer-matrix conjugacy classes, and the order whose classes
//! count abelian varieties in an isogeny class.

use crate::algebra::EtaleAlgebra;
use crate::classes::picard::{pic_context, pic_order, Certification, PicContext, PicParams, PicardGroup};
use crate::classes::principal::{module_isomorphism, SearchOutcome, SearchParams};
use crate::classes::weak::weak_class_count;
use crate::error::{Error, Result};
use crate::lattice::FracIdeal;
use crate::linalg::{char_poly, solve_exact};
use crate::order::Order;
use crate::overorders::overorders;
use crate::poly::ZPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// One multiplicator ring's contribution to the class monoid.
pub struct IcmRow {
    pub order: Order,
    pub weak: BigInt,
    pub pic: PicardGroup,
}

pub struct IcmReport {
    pub total: BigInt,
    pub rows: Vec<IcmRow>,
    pub certification: Certification,
}

/// Class-monoid size over an explicit list of multiplicator rings:
/// the weak class count of each ring times its Picard size, summed.
pub fn icm_over(orders: &[Order], ctx: &PicContext) -> Result<IcmReport> {
    let rows = orders
        .par_iter()
        .map(|t| {
            let weak = weak_class_count(t)?;
            let pic = pic_order(ctx, t)?;
            Ok(IcmRow { order: t.clone(), weak, pic })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = BigInt::zero();
    let mut certification = Certification::Exact;
    for r in &rows {
        total += &r.weak * &r.pic.size;
        certification = certification.meet(&r.pic.certification);
    }
    Ok(IcmReport { total, rows, certification })
}

/// Class-monoid size of an order: every overorder is a multiplicator
/// ring exactly once.
pub fn icm_count(s: &Order, params: &PicParams) -> Result<IcmReport> {
    let ctx = pic_context(s.alg(), params)?;
    let orders = overorders(s)?;
    icm_over(&orders, &ctx)
}

/// Matrix of multiplication by the algebra generator on the basis of a
/// lattice; rows are coordinates in that same basis.
pub fn multiplication_matrix(i: &FracIdeal) -> Result<crate::linalg::IntMatrix> {
    let alg = i.alg();
    let n = i.dim();
    let gen = alg.gen();
    let bt = i.basis_matrix().transpose();
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let d = BigRational::from(i.denom().clone());
        let b = crate::algebra::AlgElement::from_rational_coords(
            i.basis_matrix().row(k).iter().map(|c| BigRational::from(c.clone()) / &d).collect(),
        );
        let x = alg.mul(&gen, &b);
        // solve y * B = d * x so the coordinates stay denominator-free
        let target: Vec<BigRational> = x.coords.iter().map(|c| c * &d).collect();
        let y = solve_exact(&bt, &target)
            .ok_or_else(|| Error::Precondition("lattice is not stable under the generator".into()))?;
        let mut row = Vec::with_capacity(n);
        for c in y {
            if !c.is_integer() {
                return Err(Error::Precondition("lattice is not stable under the generator".into()));
            }
            row.push(c.to_integer());
        }
        rows.push(row);
    }
    Ok(crate::linalg::IntMatrix::from_bigint_rows(rows))
}

/// Every sublattice of the order with index within the bound that is a
/// module over it, one representative per isomorphism class.  Exhaustive
/// dedup requires certified unit rank zero.
pub fn ideal_class_reps_brute(
    s: &Order,
    index_bound: u64,
    params: &SearchParams,
) -> Result<Vec<FracIdeal>> {
    let alg = s.alg();
    let n = s.dim();
    let gen = alg.gen();
    let mut stable: Vec<FracIdeal> = Vec::new();
    let mut diag = vec![1u64; n];
    let mut offd = vec![vec![0u64; n]; n];
    enumerate_hnf(s, &gen, index_bound, 0, &mut diag, &mut offd, &mut stable)?;
    let mut reps: Vec<FracIdeal> = Vec::new();
    'outer: for i in &stable {
        for r in &reps {
            match module_isomorphism(i, r, params)? {
                SearchOutcome::Found(_) => continue 'outer,
                SearchOutcome::Absent => {}
                SearchOutcome::Inconclusive(msg) => return Err(Error::SearchBound(msg)),
            }
        }
        reps.push(i.clone());
    }
    Ok(reps)
}

fn enumerate_hnf(
    s: &Order,
    gen: &crate::algebra::AlgElement,
    bound: u64,
    row: usize,
    diag: &mut Vec<u64>,
    offd: &mut Vec<Vec<u64>>,
    out: &mut Vec<FracIdeal>,
) -> Result<()> {
    let n = s.dim();
    if row == n {
        let h = crate::linalg::IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::from(diag[i])
            } else if j > i {
                BigInt::from(offd[i][j])
            } else {
                BigInt::zero()
            }
        });
        let rows = h.mul(s.lattice().basis_matrix());
        let l = FracIdeal::new(s.alg(), s.lattice().denom().clone(), rows)?;
        let shifted = l.scale_element(gen)?;
        if l.contains_lattice(&shifted) {
            out.push(l);
        }
        return Ok(());
    }
    let used: u64 = diag[..row].iter().product();
    let mut d = 1u64;
    while used.saturating_mul(d) <= bound {
        diag[row] = d;
        // entries above the pivot of each later column range over its box
        enumerate_offdiag(s, gen, bound, row, diag, offd, out)?;
        d += 1;
    }
    diag[row] = 1;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn enumerate_offdiag(
    s: &Order,
    gen: &crate::algebra::AlgElement,
    bound: u64,
    row: usize,
    diag: &mut Vec<u64>,
    offd: &mut Vec<Vec<u64>>,
    out: &mut Vec<FracIdeal>,
) -> Result<()> {
    // entries (i, row) for i < row, each within [0, diag[row])
    fn rec(
        s: &Order,
        gen: &crate::algebra::AlgElement,
        bound: u64,
        row: usize,
        i: usize,
        diag: &mut Vec<u64>,
        offd: &mut Vec<Vec<u64>>,
        out: &mut Vec<FracIdeal>,
    ) -> Result<()> {
        if i == row {
            return enumerate_hnf(s, gen, bound, row + 1, diag, offd, out);
        }
        for v in 0..diag[row] {
            offd[i][row] = v;
            rec(s, gen, bound, row, i + 1, diag, offd, out)?;
        }
        offd[i][row] = 0;
        Ok(())
    }
    rec(s, gen, bound, row, 0, diag, offd, out)
}

/// Conjugacy classes of integer matrices with the given characteristic
/// polynomial, one exact representative each, produced from ideal class
/// representatives of the equation order.
pub fn matrix_conjugacy_classes(
    f: &ZPoly,
    index_bound: Option<u64>,
    params: &SearchParams,
) -> Result<Vec<crate::linalg::IntMatrix>> {
    let alg = crate::algebra::make_algebra(f)?;
    let s = Order::equation_order(&alg);
    let bound = match index_bound {
        Some(b) => b,
        None => alg
            .disc()
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Precondition("discriminant too large; pass an index bound".into()))?,
    };
    let reps = ideal_class_reps_brute(&s, bound, params)?;
    let mut out = Vec::with_capacity(reps.len());
    for r in &reps {
        let m = multiplication_matrix(r)?;
        let cp = char_poly(&m);
        if cp != f.coeffs() {
            return Err(Error::Precondition("representative has the wrong characteristic polynomial".into()));
        }
        out.push(m);
    }
    Ok(out)
}

/// The order generated by the algebra generator together with q over it.
/// For a Weil polynomial this is the ring whose class monoid counts the
/// isomorphism classes in the isogeny class.
pub fn av_order(alg: &EtaleAlgebra, q: u64) -> Result<Order> {
    let n = alg.dim();
    let f0 = alg.modulus().coeff(0);
    let qn = num_traits::pow::pow(BigInt::from(q), n);
    if &f0 * &f0 != qn {
        return Err(Error::Precondition(format!(
            "constant term squared must equal {}^{}",
            q, n
        )));
    }
    let gen = alg.gen();
    let inv = alg.inverse(&gen)?;
    let qpi = alg.scale(&inv, &BigRational::from(BigInt::from(q)));
    let s = Order::equation_order(alg);
    let mut l = s.lattice().sum(&s.lattice().scale_element(&qpi)?);
    for _ in 0..16 {
        let next = l.sum(&l.product(&l));
        if next == l {
            return Order::new(l);
        }
        l = next;
    }
    Err(Error::Precondition("ring generated by q over the generator does not close up".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::algebra::make_algebra;

    #[test]
    fn class_monoid_of_quadratic_orders() {
        // x^2 + 5: maximal order, class number two, one weak class
        let k = make_algebra(&ZPoly::from_i64(&[5, 0, 1])).unwrap();
        let s = Order::equation_order(&k);
        let rep = icm_count(&s, &PicParams::default()).unwrap();
        assert_eq!(rep.total, BigInt::from(2));
        assert!(rep.certification.is_exact());
        // x^2 + 9: Z[3i] under Z[i], classes 2 + 1
        let k = make_algebra(&ZPoly::from_i64(&[9, 0, 1])).unwrap();
        let s = Order::equation_order(&k);
        let rep = icm_count(&s, &PicParams::default()).unwrap();
        assert_eq!(rep.total, BigInt::from(3));
        assert_eq!(rep.rows.len(), 2);
        assert!(rep.certification.is_exact());
    }

    #[test]
    fn matrix_classes_of_quadratic_moduli() {
        let params = SearchParams::default();
        let f5 = ZPoly::from_i64(&[5, 0, 1]);
        let m5 = matrix_conjugacy_classes(&f5, None, &params).unwrap();
        assert_eq!(m5.len(), 2);
        for m in &m5 {
            assert_eq!(char_poly(m), f5.coeffs());
        }
        let f9 = ZPoly::from_i64(&[9, 0, 1]);
        let m9 = matrix_conjugacy_classes(&f9, None, &params).unwrap();
        assert_eq!(m9.len(), 3);
        for m in &m9 {
            assert_eq!(char_poly(m), f9.coeffs());
        }
    }

    #[test]
    fn weil_order_closes_up() {
        // x^2 + 2x + 2 at q = 2: the generator is -1 + i, and q over it
        // lands back in Z[i]
        let k = make_algebra(&ZPoly::from_i64(&[2, 2, 1])).unwrap();
        let r = av_order(&k, 2).unwrap();
        assert!(r.is_maximal().unwrap());
        // x^2 + 5 at q = 5: q over the generator is its negative
        let k = make_algebra(&ZPoly::from_i64(&[5, 0, 1])).unwrap();
        let r = av_order(&k, 5).unwrap();
        let rep = icm_count(&r, &PicParams::default()).unwrap();
        assert_eq!(rep.total, BigInt::from(2));
        // wrong q is refused
        assert!(av_order(&k, 3).is_err());
    }

    #[test]
    fn cubic_class_monoid_is_conditional() {
        // x^3 - x - 1 has a maximal equation order and unit rank one
        let k = make_algebra(&ZPoly::from_i64(&[-1, -1, 0, 1])).unwrap();
        let s = Order::equation_order(&k);
        let rep = icm_count(&s, &PicParams::default()).unwrap();
        assert_eq!(rep.total, BigInt::one());
        assert!(!rep.certification.is_exact());
    }
}
