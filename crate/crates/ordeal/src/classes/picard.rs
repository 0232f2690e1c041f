//! Picard groups of orders: the invertible-ideal class count, computed
//! through the class number of the maximal order and a conductor index
//! formula.  Results carry a certification flag so bounded searches are
//! never passed off as theorems.

use crate::algebra::{make_algebra, AlgElement, EtaleAlgebra};
use crate::classes::principal::{
    is_principal_over, module_isomorphism, torsion_units, unit_sweep, SearchOutcome, SearchParams,
    UnitRankZero,
};
use crate::classes::resunits::{residue_unit_count, unit_group_index};
use crate::error::{Error, Result};
use crate::lattice::FracIdeal;
use crate::linalg::{hnf, IntMatrix};
use crate::order::{Order, PrimeIdeal};
use crate::poly::ZPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Whether a count is a theorem or depends on a search bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Exact,
    Conditional(String),
}

impl Certification {
    pub fn meet(&self, other: &Certification) -> Certification {
        match (self, other) {
            (Certification::Exact, Certification::Exact) => Certification::Exact,
            (Certification::Conditional(a), _) => Certification::Conditional(a.clone()),
            (_, Certification::Conditional(b)) => Certification::Conditional(b.clone()),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Certification::Exact)
    }
}

#[derive(Debug, Clone)]
pub struct PicardGroup {
    pub size: BigInt,
    pub certification: Certification,
}

/// Controls for the class-number and unit searches.
#[derive(Debug, Clone)]
pub struct PicParams {
    pub search: SearchParams,
    /// Rational primes through this bound form the factor base.
    pub class_bound: u64,
    /// Embedding-norm level for the unit sweep when the rank is positive.
    pub unit_level: BigRational,
    pub coset_budget: usize,
    pub relation_budget: usize,
}

impl Default for PicParams {
    fn default() -> Self {
        PicParams {
            search: SearchParams::default(),
            class_bound: 60,
            unit_level: BigRational::from(BigInt::from(64)),
            coset_budget: 1 << 16,
            relation_budget: 200_000,
        }
    }
}

/// Class number of the maximal order of an algebra certified to have
/// unit rank zero: the product over factors, each enumerated exactly.
pub fn exact_class_number(cert: &UnitRankZero, params: &SearchParams) -> Result<BigInt> {
    let mut h = BigInt::one();
    for (b, c) in &cert.quadratics {
        let f = ZPoly::new(vec![c.clone(), b.clone(), BigInt::one()]);
        let k = make_algebra(&f)?;
        h *= quadratic_class_number(&k, params)?;
    }
    Ok(h)
}

/// Class number of an imaginary quadratic field by listing every
/// integral ideal of norm within the Minkowski bound and separating them
/// into isomorphism classes with an exhaustive generator search.
fn quadratic_class_number(k: &EtaleAlgebra, params: &SearchParams) -> Result<BigInt> {
    let ok = Order::maximal_order(k)?;
    let disc_k = field_discriminant(&ok);
    let bound = minkowski_bound(&disc_k);
    let mut ideals: Vec<FracIdeal> = vec![ok.lattice().clone()];
    let mut p = 1u64;
    let bound_big = BigInt::from(bound);
    while p < bound {
        p = next_prime(p);
        if p > bound {
            break;
        }
        for pr in ok.primes_above(p)?.iter() {
            if pr.residue_size() > bound_big {
                continue;
            }
            // layer products of this prime over everything collected so far
            let mut layer: Vec<FracIdeal> = Vec::new();
            let mut cur: Vec<FracIdeal> = ideals.clone();
            loop {
                let mut next = Vec::new();
                for i in &cur {
                    let prod = i.product(pr.lattice());
                    if ideal_norm(&ok, &prod) <= bound_big {
                        next.push(prod);
                    }
                }
                if next.is_empty() {
                    break;
                }
                layer.extend(next.iter().cloned());
                cur = next;
            }
            ideals.extend(layer);
        }
    }
    // partition by isomorphism
    let mut reps: Vec<FracIdeal> = Vec::new();
    'outer: for i in &ideals {
        for r in &reps {
            match module_isomorphism(i, r, params)? {
                SearchOutcome::Found(_) => continue 'outer,
                SearchOutcome::Absent => {}
                SearchOutcome::Inconclusive(msg) => return Err(Error::SearchBound(msg)),
            }
        }
        reps.push(i.clone());
    }
    Ok(BigInt::from(reps.len()))
}

fn ideal_norm(ok: &Order, i: &FracIdeal) -> BigInt {
    let r = i.covolume() / ok.lattice().covolume();
    debug_assert!(r.is_integer());
    r.to_integer()
}

/// Discriminant of the maximal order, from the modulus discriminant and
/// the index of the equation order.
fn field_discriminant(ok: &Order) -> BigInt {
    let alg = ok.alg();
    let idx = ok.lattice().covolume().recip();
    // covolume of O relative to the power lattice is 1/[O : Z[pi]]
    let idx = idx.to_integer();
    alg.disc() / (&idx * &idx)
}

/// Integer upper bound for (2/pi)^s sqrt|d| with s complex places; the
/// crude constant 0.6367 covers the quadratic case used here.
fn next_prime(mut p: u64) -> u64 {
    loop {
        p += 1;
        if crate::order::is_prime_u64(p) {
            return p;
        }
    }
}

fn minkowski_bound(d: &BigInt) -> u64 {
    let s = d.abs().sqrt() + 1u32;
    let m = (&s * 6367u32) / 10000u32;
    (m + 1u32).to_u64().unwrap_or(u64::MAX)
}

/// Incrementally reduced relation lattice over a fixed factor base.
struct RelationLattice {
    base: Vec<PrimeIdeal>,
    rat_primes: Vec<u64>,
    powers: Vec<Vec<FracIdeal>>,
    /// Current Hermite form of the relations seen so far.
    reduced: Vec<Vec<BigInt>>,
    relations: usize,
}

impl RelationLattice {
    fn new(ok: &Order, class_bound: u64) -> Result<RelationLattice> {
        let mut base: Vec<PrimeIdeal> = Vec::new();
        let mut rat_primes: Vec<u64> = Vec::new();
        let bound_big = BigInt::from(class_bound);
        let mut p = 1u64;
        while p < class_bound {
            p = next_prime(p);
            if p > class_bound {
                break;
            }
            let mut used = false;
            for pr in ok.primes_above(p)?.iter() {
                // only primes of small norm can generate small classes
                if pr.residue_size() <= bound_big {
                    base.push(pr.clone());
                    used = true;
                }
            }
            if used {
                rat_primes.push(p);
            }
        }
        if base.is_empty() {
            return Err(Error::Precondition("empty factor base".into()));
        }
        let powers = base.iter().map(|pr| vec![pr.lattice().clone()]).collect();
        Ok(RelationLattice { base, rat_primes, powers, reduced: Vec::new(), relations: 0 })
    }

    /// Valuation row of a smooth element, or None if its norm does not
    /// factor over the base.
    fn relation_of(&mut self, ok: &Order, x: &AlgElement) -> Option<Vec<BigInt>> {
        let alg = ok.alg();
        let norm = alg.norm(x);
        if norm.is_zero() {
            return None;
        }
        let target = norm.to_integer().abs();
        let mut residue = target.clone();
        for p in &self.rat_primes {
            let pb = BigInt::from(*p);
            while (&residue % &pb).is_zero() {
                residue /= &pb;
            }
        }
        if !residue.is_one() {
            return None;
        }
        let r = self.base.len();
        let mut vrow = vec![BigInt::zero(); r];
        let mut check = BigInt::one();
        for j in 0..r {
            let mut v = 0usize;
            loop {
                if v < self.powers[j].len() {
                    if self.powers[j][v].contains(x) {
                        v += 1;
                        continue;
                    }
                    break;
                }
                let next = self.powers[j].last().unwrap().product(self.base[j].lattice());
                self.powers[j].push(next);
            }
            if v > 0 {
                vrow[j] = BigInt::from(v);
                check *= num_traits::pow::pow(self.base[j].residue_size(), v);
            }
        }
        // the valuations must explain the whole norm, otherwise a prime
        // outside the base divides it
        if check != target {
            return None;
        }
        Some(vrow)
    }

    fn add(&mut self, row: Vec<BigInt>) {
        if row.iter().all(|c| c.is_zero()) {
            return;
        }
        self.relations += 1;
        let mut stack = self.reduced.clone();
        stack.push(row);
        let h = hnf(&IntMatrix::from_bigint_rows(stack));
        self.reduced = (0..h.rank).map(|i| h.h.row_vec(i)).collect();
    }

    fn determinant(&self) -> Option<BigInt> {
        let r = self.base.len();
        if self.reduced.len() < r {
            return None;
        }
        Some((0..r).map(|i| self.reduced[i][i].clone()).product::<BigInt>().abs())
    }
}

/// Factor-base class number of the maximal order: the determinant of the
/// relation lattice once it stabilizes.  Conditional on the factor base
/// generating the class group and the relation search saturating it.
pub fn conditional_class_number(ok: &Order, params: &PicParams) -> Result<BigInt> {
    let alg = ok.alg().clone();
    let n = alg.dim();
    let mut rel = RelationLattice::new(ok, params.class_bound)?;
    // seed with the rational primes themselves, which reach inert ideals
    let seeds: Vec<AlgElement> =
        rel.rat_primes.iter().map(|p| alg.from_integer(&BigInt::from(*p))).collect();
    for s in seeds {
        if let Some(row) = rel.relation_of(ok, &s) {
            rel.add(row);
        }
    }
    let mut det = BigInt::zero();
    let mut stable = 0usize;
    let mut consider = |rel: &mut RelationLattice, x: &AlgElement| -> Option<BigInt> {
        let row = rel.relation_of(ok, x)?;
        rel.add(row);
        let d = rel.determinant()?;
        if d == det {
            stable += 1;
            if stable >= 24 {
                return Some(d);
            }
        } else {
            det = d;
            stable = 0;
        }
        None
    };
    // deterministic pass over a small coordinate box
    let mut box_coords = vec![0i64; n];
    loop {
        // odometer over [-2, 2]^n
        let mut k = 0;
        loop {
            if k == n {
                break;
            }
            box_coords[k] += 1;
            if box_coords[k] <= 2 {
                break;
            }
            box_coords[k] = -2;
            k += 1;
        }
        if k == n {
            break;
        }
        let x = AlgElement::from_integer_coords(
            &box_coords.iter().map(|c| BigInt::from(*c)).collect::<Vec<_>>(),
        );
        if let Some(d) = consider(&mut rel, &x) {
            return Ok(d);
        }
    }
    // randomized widening search
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f1c_ed1d);
    let mut amplitude = 3i64;
    for attempt in 0..params.relation_budget {
        if attempt > 0 && attempt % 2048 == 0 && amplitude < 24 {
            amplitude += 1;
        }
        let x = AlgElement::from_integer_coords(
            &(0..n).map(|_| BigInt::from(rng.gen_range(-amplitude..=amplitude))).collect::<Vec<_>>(),
        );
        if let Some(d) = consider(&mut rel, &x) {
            return Ok(d);
        }
    }
    Err(Error::SearchBound("relation search did not stabilize".into()))
}

/// Shared state for Picard computations over one algebra: the maximal
/// order, its class number, and unit-group generators.
pub struct PicContext {
    pub ok: Order,
    pub h: BigInt,
    pub h_certification: Certification,
    pub unit_gens: Vec<AlgElement>,
    pub unit_certification: Certification,
    pub params: PicParams,
}

fn elem_from_poly(alg: &EtaleAlgebra, q: &ZPoly) -> AlgElement {
    let mut coords = vec![BigRational::zero(); alg.dim()];
    for (i, c) in coords.iter_mut().enumerate().take(q.degree() + 1) {
        *c = BigRational::from(q.coeff(i));
    }
    AlgElement::from_rational_coords(coords)
}

/// CRT idempotent cutting out the component defined by the factor g.
fn component_idempotent(alg: &EtaleAlgebra, g: &ZPoly) -> Result<AlgElement> {
    let u = alg
        .modulus()
        .div_exact(g)
        .ok_or_else(|| Error::Precondition("factor does not divide the modulus".into()))?;
    let u_big = elem_from_poly(alg, &u);
    if g.degree() == 1 {
        // the cofactor is invertible modulo x - a by the scalar u(a)
        let v = u.eval(&(-g.coeff(0)));
        return Ok(alg.scale(&u_big, &BigRational::new(BigInt::one(), v)));
    }
    let ki = make_algebra(g)?;
    let x = ki.gen();
    let mut acc = ki.zero();
    for j in (0..=u.degree()).rev() {
        acc = ki.add(&ki.mul(&acc, &x), &ki.from_integer(&u.coeff(j)));
    }
    let inv = ki.inverse(&acc)?;
    let mut coords = vec![BigRational::zero(); alg.dim()];
    for (i, c) in inv.coords.iter().enumerate() {
        coords[i] = c.clone();
    }
    let inv_big = AlgElement::from_rational_coords(coords);
    Ok(alg.mul(&inv_big, &u_big))
}

/// Transplants a component element into the product, filling the other
/// components with one so that units stay units.
fn embed_component(alg: &EtaleAlgebra, e: &AlgElement, w: &AlgElement) -> AlgElement {
    let mut coords = vec![BigRational::zero(); alg.dim()];
    for (i, c) in w.coords.iter().enumerate() {
        coords[i] = c.clone();
    }
    let w_big = AlgElement::from_rational_coords(coords);
    alg.add(&alg.mul(&w_big, e), &alg.sub(&alg.one(), e))
}

/// Builds the shared context by splitting the algebra into its component
/// fields: the class number is the product over components, and unit
/// generators are component units carried across by the idempotents.
pub fn pic_context(alg: &EtaleAlgebra, params: &PicParams) -> Result<PicContext> {
    let ok = Order::maximal_order(alg)?;
    let factors = crate::poly::zfactor::factor_squarefree_monic(alg.modulus())?;
    let mut h = BigInt::one();
    let mut h_exact = true;
    let mut units_exact = true;
    let mut unit_gens: Vec<AlgElement> = Vec::new();
    for g in &factors {
        let e = component_idempotent(alg, g)?;
        if g.degree() == 1 {
            let minus_one = AlgElement::from_integer_coords(&[BigInt::from(-1)]);
            unit_gens.push(embed_component(alg, &e, &minus_one));
            continue;
        }
        let ki = make_algebra(g)?;
        let ok_i = Order::maximal_order(&ki)?;
        let rank_zero = g.degree() == 2 && g.discriminant().is_negative();
        if rank_zero {
            h *= quadratic_class_number(&ki, &params.search)?;
        } else {
            h *= conditional_class_number(&ok_i, params)?;
            h_exact = false;
            units_exact = false;
        }
        let mut comp_units = torsion_units(&ok_i, &params.search)?;
        if !rank_zero {
            comp_units.extend(unit_sweep(&ok_i, &params.unit_level, &params.search)?);
        }
        for w in &comp_units {
            let u = embed_component(alg, &e, w);
            debug_assert!(ok.coords(&u).is_some(), "component unit must be integral");
            unit_gens.push(u);
        }
    }
    let h_certification = if h_exact {
        Certification::Exact
    } else {
        Certification::Conditional(format!(
            "class number from factor base through {}",
            params.class_bound
        ))
    };
    let unit_certification = if units_exact {
        Certification::Exact
    } else {
        Certification::Conditional(format!(
            "unit generators from sweep at embedding norm {}",
            params.unit_level
        ))
    };
    Ok(PicContext { ok, h, h_certification, unit_gens, unit_certification, params: params.clone() })
}

/// Picard group of an order, by the conductor formula
/// h * #(O/f)^x / (#(T/f)^x * [O^x : T^x]).
pub fn pic_order(ctx: &PicContext, t: &Order) -> Result<PicardGroup> {
    if t.lattice() == ctx.ok.lattice() {
        return Ok(PicardGroup { size: ctx.h.clone(), certification: ctx.h_certification.clone() });
    }
    let f = t.conductor()?;
    let num = residue_unit_count(&ctx.ok, &f)?;
    let den = residue_unit_count(t, &f)?;
    let idx = unit_group_index(&ctx.ok, t, &ctx.unit_gens, ctx.params.coset_budget)?;
    let size = BigRational::from(&ctx.h * num) / BigRational::from(den * idx);
    if !size.is_integer() {
        return Err(Error::Precondition("Picard size formula gave a non-integer".into()));
    }
    Ok(PicardGroup {
        size: size.to_integer(),
        certification: ctx.h_certification.meet(&ctx.unit_certification),
    })
}

/// Convenience: certified principality test used by validation paths.
pub fn principal_search(i: &FracIdeal, t: &Order, params: &SearchParams) -> Result<SearchOutcome> {
    is_principal_over(i, t, params)
}
