//! Randomized property suites: 10,000 cases each over small random
//! algebras, lattices and matrices, all driven by fixed seeds.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use ordeal::algebra::{make_algebra, AlgElement, EtaleAlgebra};
use ordeal::classes::weak::{
    weakly_equivalent, weakly_equivalent_via_colon_product, weakly_equivalent_via_localizations,
};
use ordeal::linalg::{det_bareiss, hnf, snf, IntMatrix};
use ordeal::poly::ZPoly;
use ordeal::{FracIdeal, Order};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CASES: usize = 10_000;

fn random_algebra(rng: &mut ChaCha8Rng, max_deg: usize) -> EtaleAlgebra {
    loop {
        let deg = rng.gen_range(2..=max_deg);
        let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(-9..=9)).collect();
        coeffs.push(1);
        if let Ok(alg) = make_algebra(&ZPoly::from_i64(&coeffs)) {
            return alg;
        }
    }
}

fn algebra_pool(seed: u64, count: usize, max_deg: usize) -> Vec<EtaleAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_algebra(&mut rng, max_deg)).collect()
}

fn random_lattice(rng: &mut ChaCha8Rng, alg: &EtaleAlgebra) -> FracIdeal {
    let n = alg.dim();
    loop {
        let m = IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-20i64..=20)));
        let d = BigInt::from(rng.gen_range(1i64..=12));
        if let Ok(l) = FracIdeal::new(alg, d, m) {
            return l;
        }
    }
}

fn random_unit(rng: &mut ChaCha8Rng, alg: &EtaleAlgebra) -> AlgElement {
    loop {
        let coords: Vec<BigRational> = (0..alg.dim())
            .map(|_| BigRational::from(BigInt::from(rng.gen_range(-6i64..=6))))
            .collect();
        let x = AlgElement::from_rational_coords(coords);
        if !x.is_zero() && !alg.is_zero_divisor(&x) {
            return x;
        }
    }
}

#[test]
fn dual_involution_on_random_lattices() {
    let pool = algebra_pool(0x5eed_d0a1, 40, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0a2);
    for k in 0..CASES {
        let alg = &pool[k % pool.len()];
        let l = random_lattice(&mut rng, alg);
        assert_eq!(l.trace_dual().trace_dual(), l, "case {k}");
    }
}

#[test]
fn product_with_dual_equals_colon_dual() {
    let pool = algebra_pool(0x5eed_d0b1, 40, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0b2);
    for k in 0..CASES {
        let alg = &pool[k % pool.len()];
        let i = random_lattice(&mut rng, alg);
        let j = random_lattice(&mut rng, alg);
        assert_eq!(i.product(&j.trace_dual()), j.colon(&i).trace_dual(), "case {k}");
    }
}

#[test]
fn quotient_divisors_match_dual_quotient() {
    let pool = algebra_pool(0x5eed_d0c1, 40, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0c2);
    for k in 0..CASES {
        let alg = &pool[k % pool.len()];
        let i = random_lattice(&mut rng, alg);
        let n = i.dim();
        // a sublattice with nonzero index: random integral transform
        let j = loop {
            let c = IntMatrix::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-4i64..=4)));
            if det_bareiss(&c).is_zero() {
                continue;
            }
            break FracIdeal::new(alg, i.denom().clone(), c.mul(i.basis_matrix())).unwrap();
        };
        let fwd = i.quotient(&j);
        let dual = j.trace_dual().quotient(&i.trace_dual());
        assert_eq!(fwd.divisors, dual.divisors, "case {k}");
        assert_eq!(fwd.index, dual.index, "case {k}");
    }
}

#[test]
fn colon_and_intersection_kernel_routes_agree() {
    let pool = algebra_pool(0x5eed_d0d1, 40, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0d2);
    for k in 0..CASES {
        let alg = &pool[k % pool.len()];
        let i = random_lattice(&mut rng, alg);
        let j = random_lattice(&mut rng, alg);
        assert_eq!(i.colon(&j), i.colon_kernel(&j), "colon case {k}");
        assert_eq!(i.intersect(&j), i.intersect_kernel(&j), "intersect case {k}");
    }
}

fn check_hnf_shape(h: &IntMatrix, rank: usize, tag: usize) {
    let mut last_pivot: Option<usize> = None;
    for r in 0..h.rows() {
        let pivot = (0..h.cols()).find(|&c| !h[(r, c)].is_zero());
        match pivot {
            Some(c) => {
                assert!(r < rank, "nonzero row past the rank, case {tag}");
                assert!(
                    last_pivot.map(|p| p < c).unwrap_or(true),
                    "pivots not strictly right-moving, case {tag}"
                );
                assert!(h[(r, c)].is_positive(), "pivot not positive, case {tag}");
                for above in 0..r {
                    let e = &h[(above, c)];
                    assert!(
                        !e.is_negative() && e < &h[(r, c)],
                        "entry above pivot not reduced, case {tag}"
                    );
                }
                last_pivot = Some(c);
            }
            None => assert!(r >= rank, "zero row inside the rank, case {tag}"),
        }
    }
}

#[test]
fn hnf_and_snf_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0e1);
    for k in 0..CASES {
        let rows = rng.gen_range(1..=5);
        let cols = rng.gen_range(1..=5);
        let m = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-30i64..=30)));

        let r = hnf(&m);
        assert_eq!(r.transform.mul(&m), r.h, "transform mismatch, case {k}");
        assert_eq!(det_bareiss(&r.transform).abs(), BigInt::one(), "case {k}");
        check_hnf_shape(&r.h, r.rank, k);
        assert_eq!(hnf(&r.h).h, r.h, "not idempotent, case {k}");

        let s = snf(&m);
        assert_eq!(s.left.mul(&m).mul(&s.right), s.s, "snf transform mismatch, case {k}");
        assert_eq!(det_bareiss(&s.left).abs(), BigInt::one(), "case {k}");
        assert_eq!(det_bareiss(&s.right).abs(), BigInt::one(), "case {k}");
        for (i, d) in s.divisors.iter().enumerate() {
            assert!(!d.is_zero(), "zero divisor entry, case {k}");
            assert_eq!(s.s[(i, i)], *d, "diagonal disagrees with divisors, case {k}");
            if i + 1 < s.divisors.len() {
                assert!(
                    s.divisors[i + 1].is_multiple_of(d),
                    "divisor chain broken, case {k}"
                );
            }
        }
        for i in 0..rows.min(cols) {
            for j in 0..rows.min(cols) {
                if i != j {
                    assert!(s.s[(i, j)].is_zero(), "off-diagonal junk, case {k}");
                }
            }
        }
        if rows == cols {
            let det = det_bareiss(&m).abs();
            let prod = s.divisors.iter().product::<BigInt>().abs();
            if det.is_zero() {
                assert!(s.divisors.len() < rows, "full divisor run on singular input, case {k}");
            } else {
                assert_eq!(prod, det, "divisor product is not |det|, case {k}");
            }
        }
        // the divisors only see the row span
        assert_eq!(snf(&r.h).divisors, s.divisors, "case {k}");
    }
}

#[test]
fn weak_equivalence_three_conditions_agree() {
    let pool = algebra_pool(0x5eed_d0f1, 30, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d0f2);
    for k in 0..CASES {
        let alg = &pool[k % pool.len()];
        let i = random_lattice(&mut rng, alg);
        let scaled = k % 2 == 0;
        let j = if scaled {
            i.scale_element(&random_unit(&mut rng, alg)).unwrap()
        } else {
            random_lattice(&mut rng, alg)
        };
        let a = weakly_equivalent(&i, &j);
        let b = weakly_equivalent_via_colon_product(&i, &j);
        let c = weakly_equivalent_via_localizations(&i, &j).unwrap();
        assert_eq!(a, b, "colon-product route disagrees, case {k}");
        assert_eq!(a, c, "localization route disagrees, case {k}");
        if scaled {
            assert!(a, "scaling must preserve the weak class, case {k}");
        }
    }
}

#[test]
fn prime_invertibility_three_routes_agree() {
    let pool = algebra_pool(0x5eed_d1a1, 60, 3);
    let orders: Vec<Order> = pool.iter().map(Order::equation_order).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1a2);
    let small = [2u64, 3, 5, 7, 11, 13];
    let mut checked = 0usize;
    'outer: loop {
        for s in &orders {
            let p = small[rng.gen_range(0..small.len())];
            for pr in s.primes_above(p).unwrap().iter() {
                let a = pr.is_invertible().unwrap();
                let b = pr.is_invertible_via_conductor().unwrap();
                let c = pr.is_invertible_via_residue_dim().unwrap();
                assert_eq!(a, b, "conductor route disagrees at p={p}");
                assert_eq!(a, c, "residue-dimension route disagrees at p={p}");
                checked += 1;
                if checked >= CASES {
                    break 'outer;
                }
            }
        }
    }
    assert!(checked >= CASES);
}
