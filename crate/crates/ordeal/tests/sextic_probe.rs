//! Scratch probe for the big sextic; not part of the regular suite.

use ordeal::algebra::make_algebra;
use ordeal::cmtype;
use ordeal::order::Order;
use ordeal::overorders::overorders;
use ordeal::poly::ZPoly;

#[test]
#[ignore]
fn probe_sextic() {
    let f = ZPoly::from_i64(&[4096, -1536, 96, 43, 6, -6, 1]);
    let k = make_algebra(&f).unwrap();
    let u = Order::equation_order(&k);
    let t0 = std::time::Instant::now();
    let ok = Order::maximal_order(&k).unwrap();
    eprintln!("maximal order at {:?}; index = {}", t0.elapsed(), ok.lattice().index(u.lattice()));
    let sing = u.singular_primes().unwrap();
    eprintln!("singular primes: {:?}", sing);
    for p in &sing {
        for pr in u.primes_above(*p).unwrap().iter() {
            let inv = pr.is_invertible().unwrap();
            let d = ordeal::order::dim_quotient_at_prime(ok.lattice(), pr);
            eprintln!("p={} f={} invertible={} dim O_K/pO_K = {}", p, pr.residue_degree(), inv, d);
        }
    }
    eprintln!("g = {:?}", cmtype::g_of_order(&u));
    let t1 = std::time::Instant::now();
    let all = overorders(&u).unwrap();
    eprintln!("overorders: {} in {:?}", all.len(), t1.elapsed());
    let t2 = std::time::Instant::now();
    let gor = all.iter().filter(|t| cmtype::is_gorenstein(t).unwrap()).count();
    eprintln!("gorenstein: {} in {:?}", gor, t2.elapsed());
    let mut types = std::collections::BTreeSet::new();
    for t in &all {
        types.insert(cmtype::global_type(t).unwrap());
    }
    eprintln!("type set: {:?}", types);
}

#[test]
#[ignore]
fn probe_weak_total() {
    use ordeal::classes::weak;
    use num_bigint::BigInt;
    use num_traits::Zero;
    let f = ZPoly::from_i64(&[4096, -1536, 96, 43, 6, -6, 1]);
    let k = make_algebra(&f).unwrap();
    let u = Order::equation_order(&k);
    let t0 = std::time::Instant::now();
    let all = overorders(&u).unwrap();
    eprintln!("overorders: {} in {:?}", all.len(), t0.elapsed());
    let t1 = std::time::Instant::now();
    let counts: Vec<BigInt> = all
        .iter()
        .map(|t| weak::weak_class_count(t).unwrap())
        .collect();
    let total: BigInt = counts.iter().fold(BigInt::zero(), |a, b| a + b);
    eprintln!("total weak classes: {} in {:?}", total, t1.elapsed());
    // exhaustive check on a few orders spread across the list
    let t2 = std::time::Instant::now();
    for idx in [0usize, 7, 77, 777, 1500, 1727] {
        let t = &all[idx];
        let w = weak::weak_classes_exhaustive(t, 400_000).unwrap();
        assert_eq!(w.count(), counts[idx], "mismatch at order {}", idx);
    }
    eprintln!("exhaustive sample in {:?}", t2.elapsed());
}

#[test]
#[ignore]
fn probe_icm_total() {
    use num_bigint::BigInt;
    use num_traits::Zero;
    use ordeal::classes::icm;
    use ordeal::classes::picard::{pic_context, pic_order, PicParams};
    use ordeal::classes::weak;
    let f = ZPoly::from_i64(&[4096, -1536, 96, 43, 6, -6, 1]);
    let k = make_algebra(&f).unwrap();
    let u = Order::equation_order(&k);
    let t0 = std::time::Instant::now();
    let all = overorders(&u).unwrap();
    eprintln!("overorders: {} in {:?}", all.len(), t0.elapsed());
    let params = PicParams::default();
    let ctx = pic_context(&k, &params).unwrap();
    let mut total = BigInt::zero();
    let t1 = std::time::Instant::now();
    for (i, t) in all.iter().enumerate() {
        let w = weak::weak_class_count(t).unwrap();
        let p = pic_order(&ctx, t).unwrap();
        total += w * p.size;
        if i % 100 == 99 {
            eprintln!("{} orders in {:?}; running total {}", i + 1, t1.elapsed(), total);
        }
    }
    eprintln!("ICM(Z[pi]) = {} in {:?}", total, t1.elapsed());
    let t2 = std::time::Instant::now();
    let s = icm::av_order(&k, 16).unwrap();
    let rpt = icm::icm_count(&s, &params).unwrap();
    eprintln!(
        "ICM(Z[pi, qbar]) = {} ({:?}) in {:?}",
        rpt.total,
        rpt.certification,
        t2.elapsed()
    );
}

#[test]
#[ignore]
fn probe_quartic_component() {
    use ordeal::classes::picard::{conditional_class_number, PicParams};
    use ordeal::classes::principal::{torsion_units, unit_sweep};
    let g = ZPoly::from_i64(&[256, -16, -15, -1, 1]);
    let k = make_algebra(&g).unwrap();
    let params = PicParams::default();
    let t0 = std::time::Instant::now();
    let ok = Order::maximal_order(&k).unwrap();
    eprintln!("maximal order in {:?}; disc = {}", t0.elapsed(), k.disc());
    let t1 = std::time::Instant::now();
    let h = conditional_class_number(&ok, &params);
    eprintln!("h = {:?} in {:?}", h, t1.elapsed());
    let t2 = std::time::Instant::now();
    let tu = torsion_units(&ok, &params.search).unwrap();
    eprintln!("torsion: {} in {:?}", tu.len(), t2.elapsed());
    let t3 = std::time::Instant::now();
    let us = unit_sweep(&ok, &params.unit_level, &params.search).unwrap();
    eprintln!("sweep units: {} in {:?}", us.len(), t3.elapsed());
}

#[test]
#[ignore]
fn probe_picard() {
    use ordeal::classes::picard::{pic_context, pic_order, PicParams};
    let f = ZPoly::from_i64(&[4096, -1536, 96, 43, 6, -6, 1]);
    let k = make_algebra(&f).unwrap();
    let params = PicParams::default();
    let t1 = std::time::Instant::now();
    let ctx = pic_context(&k, &params).unwrap();
    eprintln!(
        "pic_context in {:?}; h = {} ({:?}); units found: {}",
        t1.elapsed(),
        ctx.h,
        ctx.h_certification,
        ctx.unit_gens.len()
    );
    let u = Order::equation_order(&k);
    let t2 = std::time::Instant::now();
    let p = pic_order(&ctx, &u).unwrap();
    eprintln!("pic(Z[pi]) = {} ({:?}) in {:?}", p.size, p.certification, t2.elapsed());
}
