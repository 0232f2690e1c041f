//! Finite commutative F_p-algebras: radicals, block decomposition, and
//! polynomial root extraction over prime fields.
//!
//! An `FpAlgebra` is given by structure constants modulo p.  The radical is
//! the kernel of an iterated Frobenius, which is F_p-linear on a commutative
//! algebra.  The semisimple quotient splits into field blocks by eigenspace
//! decomposition along the Frobenius-fixed subalgebra; no factoring of
//! integers or global number-theoretic data is involved.

use crate::error::{Error, Result};
use crate::linalg::{ff_kernel, FieldOps, Fp};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Row-reduced subspace of F_p^ambient with incremental insertion.
#[derive(Clone, Debug)]
pub struct FpSpace {
    p: u64,
    ambient: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl FpSpace {
    pub fn new(p: u64, ambient: usize) -> Self {
        FpSpace { p, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows(p: u64, ambient: usize, rows: &[Vec<u64>]) -> Self {
        let mut s = FpSpace::new(p, ambient);
        for r in rows {
            s.insert(r.clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the stored rows; the residual is zero iff `v` is
    /// in the span.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let f = Fp::new(self.p);
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if v[pc] != 0 {
                let c = v[pc];
                for (vj, rj) in v.iter_mut().zip(row) {
                    *vj = f.sub(*vj, f.mul(c, *rj));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v.to_vec()).iter().all(|&c| c == 0)
    }

    /// Inserts a vector, returning true if it enlarged the span.  Keeps the
    /// rows in fully reduced echelon form, so equal spans have equal rows.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let f = Fp::new(self.p);
        let mut v = self.reduce(v);
        let pc = match v.iter().position(|&c| c != 0) {
            Some(pc) => pc,
            None => return false,
        };
        let inv = f.inv(v[pc]).expect("nonzero pivot");
        for c in v.iter_mut() {
            *c = f.mul(*c, inv);
        }
        // Back-reduce existing rows against the new pivot.
        for row in self.rows.iter_mut() {
            if row[pc] != 0 {
                let c = row[pc];
                for (rj, vj) in row.iter_mut().zip(&v) {
                    *rj = f.sub(*rj, f.mul(c, *vj));
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > pc).unwrap_or(self.pivots.len());
        self.rows.insert(at, v);
        self.pivots.insert(at, pc);
        true
    }

    pub fn insert_all(&mut self, vs: &[Vec<u64>]) {
        for v in vs {
            self.insert(v.clone());
        }
    }

    /// Canonical key for the subspace: dimensions plus flattened rref rows.
    pub fn canonical_key(&self) -> Vec<u64> {
        let mut k = vec![self.rows.len() as u64];
        for r in &self.rows {
            k.extend_from_slice(r);
        }
        k
    }

    pub fn is_subspace_of(&self, other: &FpSpace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Indices of ambient coordinates that are not pivot columns; the
    /// corresponding unit vectors complete the span to F_p^ambient.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }
}

// -- dense polynomials over F_p ---------------------------------------------

pub(crate) fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn pmul(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(ai, bj));
        }
    }
    ptrim(&mut out);
    out
}

pub(crate) fn prem(f: &Fp, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]).expect("monic-able modulus");
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], lead_inv);
        for (k, &mk) in m.iter().enumerate() {
            let idx = dr - dm + k;
            r[idx] = f.sub(r[idx], f.mul(c, mk));
        }
        ptrim(&mut r);
    }
    r
}

pub(crate) fn pgcd(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let r = prem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = f.inv(lead).unwrap();
        for c in a.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    a
}

pub(crate) fn ppowmod(f: &Fp, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = prem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = prem(f, &pmul(f, &acc, &b), m);
        }
        b = prem(f, &pmul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// All roots in F_p of a polynomial that splits into distinct linear factors
/// over F_p.  Coefficients ascending.  Deterministic: the splitting samples
/// come from a generator seeded from the input.
pub fn split_poly_roots(p: u64, poly: &[u64]) -> Vec<u64> {
    let f = Fp::new(p);
    let mut m = poly.to_vec();
    ptrim(&mut m);
    assert!(!m.is_empty(), "zero polynomial has no well-defined root set");
    let mut roots = Vec::new();
    if m[0] == 0 {
        roots.push(0);
        // divide out x
        m.remove(0);
        ptrim(&mut m);
    }
    if m.len() > 1 {
        if p <= 1024 {
            for a in 0..p {
                let mut acc = 0u64;
                for &c in m.iter().rev() {
                    acc = f.add(f.mul(acc, a), c);
                }
                if acc == 0 {
                    roots.push(a);
                }
            }
        } else {
            let mut seed = [0u8; 32];
            seed[..8].copy_from_slice(&p.to_le_bytes());
            for (i, &c) in m.iter().enumerate().take(3) {
                seed[8 + 8 * i..16 + 8 * i].copy_from_slice(&c.to_le_bytes());
            }
            let mut rng = ChaCha8Rng::from_seed(seed);
            let mut stack = vec![m];
            while let Some(cur) = stack.pop() {
                if cur.len() == 2 {
                    // monic linear: root = -c0
                    let inv = f.inv(cur[1]).unwrap();
                    roots.push(f.mul(f.sub(0, cur[0]), inv));
                    continue;
                }
                // split with gcd((x+d)^((p-1)/2) - 1, cur)
                loop {
                    let d = rng.gen_range(0..p);
                    let t = ppowmod(&f, &[d, 1], (p - 1) / 2, &cur);
                    let mut t1 = t.clone();
                    if t1.is_empty() {
                        t1 = vec![f.sub(0, 1)];
                    } else {
                        t1[0] = f.sub(t1[0], 1);
                    }
                    let g = pgcd(&f, &t1, &cur);
                    if g.len() > 1 && g.len() < cur.len() {
                        let mut q = Vec::new();
                        // cur / g by repeated prem-style division
                        let mut r = cur.clone();
                        let dg = g.len() - 1;
                        while r.len() > dg {
                            let dr = r.len() - 1;
                            let c = r[dr];
                            let mut term = vec![0u64; dr - dg + 1];
                            term[dr - dg] = c;
                            q.push((dr - dg, c));
                            for (k, &gk) in g.iter().enumerate() {
                                r[dr - dg + k] = f.sub(r[dr - dg + k], f.mul(c, gk));
                            }
                            ptrim(&mut r);
                            let _ = term;
                        }
                        let mut quo = vec![0u64; cur.len() - dg];
                        for (e, c) in q {
                            quo[e] = c;
                        }
                        ptrim(&mut quo);
                        stack.push(g);
                        stack.push(quo);
                        break;
                    }
                }
            }
        }
    }
    roots.sort_unstable();
    roots
}

// -- finite algebras ---------------------------------------------------------

/// Data for one maximal ideal of an `FpAlgebra`.
#[derive(Clone, Debug)]
pub struct MaxIdealData {
    /// The ideal as a subspace of the algebra.
    pub subspace: FpSpace,
    /// Degree of the residue field over F_p.
    pub residue_degree: usize,
}

/// Commutative algebra over F_p given by structure constants.
#[derive(Clone)]
pub struct FpAlgebra {
    p: u64,
    dim: usize,
    /// mult[i][j] = coordinates of e_i * e_j.
    mult: Vec<Vec<Vec<u64>>>,
    one: Vec<u64>,
}

impl FpAlgebra {
    pub fn new(p: u64, mult: Vec<Vec<Vec<u64>>>, one: Vec<u64>) -> Self {
        let dim = one.len();
        debug_assert!(mult.len() == dim && mult.iter().all(|r| r.len() == dim));
        FpAlgebra { p, dim, mult, one }
    }

    /// F_p[x]/(m), m monic with ascending coefficients already reduced mod p.
    pub fn from_poly(p: u64, m: &[u64]) -> Self {
        let f = Fp::new(p);
        let dim = m.len() - 1;
        let mut pows: Vec<Vec<u64>> = Vec::with_capacity(2 * dim);
        for k in 0..2 * dim.max(1) {
            if k < dim {
                let mut v = vec![0u64; dim];
                v[k] = 1;
                pows.push(v);
            } else {
                let prev = pows[k - 1].clone();
                let mut v = vec![0u64; dim];
                // multiply prev by x, reduce by m
                let top = prev[dim - 1];
                for j in (1..dim).rev() {
                    v[j] = prev[j - 1];
                }
                v[0] = 0;
                for (j, vj) in v.iter_mut().enumerate() {
                    *vj = f.sub(*vj, f.mul(top, m[j]));
                }
                pows.push(v);
            }
        }
        let mult = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| pows[i + j].clone())
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut one = vec![0u64; dim];
        one[0] = 1;
        FpAlgebra::new(p, mult, one)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> Vec<u64> {
        self.one.clone()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = Fp::new(self.p);
        let mut out = vec![0u64; self.dim];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let c = f.mul(ai, bj);
                for (k, ok) in out.iter_mut().enumerate() {
                    *ok = f.add(*ok, f.mul(c, self.mult[i][j][k]));
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `a`: row j holds coordinates of a * e_j,
    /// so a row vector of coordinates maps by v -> v * M.
    pub fn mult_matrix(&self, a: &[u64]) -> Vec<Vec<u64>> {
        (0..self.dim)
            .map(|j| {
                let mut e = vec![0u64; self.dim];
                e[j] = 1;
                self.mul(a, &e)
            })
            .collect()
    }

    fn frobenius_matrix(&self) -> Vec<Vec<u64>> {
        (0..self.dim)
            .map(|j| {
                let mut e = vec![0u64; self.dim];
                e[j] = 1;
                self.pow(&e, self.p)
            })
            .collect()
    }

    fn mat_mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let f = Fp::new(self.p);
        let n = self.dim;
        let mut out = vec![vec![0u64; n]; n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i][k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] = f.add(out[i][j], f.mul(aik, b[k][j]));
                }
            }
        }
        out
    }

    /// Nilradical as a subspace: kernel of Frobenius iterated past the
    /// dimension.
    pub fn radical(&self) -> FpSpace {
        let fp = Fp::new(self.p);
        let mut m = self.frobenius_matrix();
        let mut q = self.p;
        while q < self.dim as u64 {
            m = self.mat_mul(&m, &self.frobenius_matrix());
            q = q.saturating_mul(self.p);
        }
        // kernel of v -> v * M: rows of M^T span the column relations
        let mt: Vec<Vec<u64>> =
            (0..self.dim).map(|j| (0..self.dim).map(|i| m[i][j]).collect()).collect();
        let ker = ff_kernel(&fp, &mt);
        FpSpace::from_rows(self.p, self.dim, &ker)
    }

    /// Minimal polynomial of `a` acting on the algebra, ascending coeffs.
    pub fn min_poly(&self, a: &[u64]) -> Vec<u64> {
        let fp = Fp::new(self.p);
        let mut span = FpSpace::new(self.p, self.dim);
        let mut pows = vec![self.one()];
        span.insert(self.one());
        loop {
            let next = self.mul(pows.last().unwrap(), a);
            if !span.insert(next.clone()) {
                // solve for the dependency: next = sum c_k pows[k]
                let k = pows.len();
                let rows: Vec<Vec<u64>> = (0..self.dim)
                    .map(|j| pows.iter().map(|pw| pw[j]).collect())
                    .collect();
                let rhs: Vec<u64> = next.clone();
                let sol = crate::linalg::ff_solve(&fp, &rows, &rhs)
                    .expect("dependency exists");
                let mut mp = vec![0u64; k + 1];
                for (i, c) in sol.iter().enumerate() {
                    mp[i] = fp.sub(0, *c);
                }
                mp[k] = 1;
                return mp;
            }
            pows.push(next);
        }
    }

    /// Splits the algebra into its local blocks and reports each maximal
    /// ideal with its residue degree.  The algebra need not be semisimple;
    /// blocks of A/rad are pulled back through the radical.
    pub fn maximal_ideals(&self) -> Result<Vec<MaxIdealData>> {
        let rad = self.radical();
        let (quot, lift) = self.quotient(&rad);
        let blocks = quot.field_blocks()?;
        let fp = Fp::new(self.p);
        let mut out = Vec::new();
        for bi in 0..blocks.len() {
            let mut sub = FpSpace::new(self.p, self.dim);
            for r in rad.rows() {
                sub.insert(r.clone());
            }
            for (bj, block) in blocks.iter().enumerate() {
                if bj == bi {
                    continue;
                }
                for brow in block.rows() {
                    // lift the quotient vector back to the parent
                    let mut v = vec![0u64; self.dim];
                    for (k, &c) in brow.iter().enumerate() {
                        for (t, vt) in v.iter_mut().enumerate() {
                            *vt = fp.add(*vt, fp.mul(c, lift[k][t]));
                        }
                    }
                    sub.insert(v);
                }
            }
            out.push(MaxIdealData {
                subspace: sub,
                residue_degree: blocks[bi].dim(),
            });
        }
        out.sort_by_key(|m| m.subspace.canonical_key());
        Ok(out)
    }

    /// Quotient by an ideal-subspace: returns the quotient algebra and the
    /// lift matrix (row k = parent coordinates of the k-th quotient basis
    /// vector, the unit vectors on non-pivot coordinates).
    pub fn quotient(&self, ideal: &FpSpace) -> (FpAlgebra, Vec<Vec<u64>>) {
        let comp = ideal.complement_coords();
        let qd = comp.len();
        let lift: Vec<Vec<u64>> = comp
            .iter()
            .map(|&c| {
                let mut v = vec![0u64; self.dim];
                v[c] = 1;
                v
            })
            .collect();
        let project = |v: Vec<u64>| -> Vec<u64> {
            let r = ideal.reduce(v);
            comp.iter().map(|&c| r[c]).collect()
        };
        let mut mult = vec![vec![Vec::new(); qd]; qd];
        for i in 0..qd {
            for j in 0..qd {
                mult[i][j] = project(self.mul(&lift[i], &lift[j]));
            }
        }
        let one = project(self.one());
        (FpAlgebra::new(self.p, mult, one), lift)
    }

    /// Field blocks of a semisimple commutative algebra, as subspaces.
    /// Eigenspace-splits along a basis of the Frobenius-fixed subalgebra.
    fn field_blocks(&self) -> Result<Vec<FpSpace>> {
        let fp = Fp::new(self.p);
        if self.dim == 0 {
            return Ok(Vec::new());
        }
        // fixed subalgebra: kernel of (Frob - id)
        let frob = self.frobenius_matrix();
        let mut fm: Vec<Vec<u64>> = (0..self.dim)
            .map(|j| (0..self.dim).map(|i| frob[i][j]).collect())
            .collect();
        for (i, row) in fm.iter_mut().enumerate() {
            row[i] = fp.sub(row[i], 1);
        }
        let fixed = ff_kernel(&fp, &fm);
        let mut blocks: Vec<FpSpace> = vec![FpSpace::from_rows(
            self.p,
            self.dim,
            &(0..self.dim)
                .map(|i| {
                    let mut v = vec![0u64; self.dim];
                    v[i] = 1;
                    v
                })
                .collect::<Vec<_>>(),
        )];
        for b in &fixed {
            let mb = self.mult_matrix(b);
            let mut next: Vec<FpSpace> = Vec::new();
            for w in &blocks {
                if w.dim() <= 1 {
                    next.push(w.clone());
                    continue;
                }
                // minimal polynomial of mult-by-b restricted to w
                let roots = {
                    let mp = self.min_poly_on(&mb, w);
                    split_poly_roots(self.p, &mp)
                };
                if roots.len() <= 1 {
                    next.push(w.clone());
                    continue;
                }
                for &r in &roots {
                    // eigenspace: kernel of (Mb - r) restricted to w
                    let rows: Vec<Vec<u64>> = w
                        .rows()
                        .iter()
                        .map(|wr| {
                            let mut img = vec![0u64; self.dim];
                            for (j, &c) in wr.iter().enumerate() {
                                if c == 0 {
                                    continue;
                                }
                                for (k, ik) in img.iter_mut().enumerate() {
                                    *ik = fp.add(*ik, fp.mul(c, mb[j][k]));
                                }
                            }
                            for (k, ik) in img.iter_mut().enumerate() {
                                *ik = fp.sub(*ik, fp.mul(r, wr[k]));
                            }
                            img
                        })
                        .collect();
                    // combos of w-rows landing in the kernel: left kernel of
                    // the image matrix, i.e. right kernel of its transpose
                    let rows_t: Vec<Vec<u64>> = (0..self.dim)
                        .map(|k| (0..w.dim()).map(|i| rows[i][k]).collect())
                        .collect();
                    let ker = ff_kernel(&fp, &rows_t);
                    let mut sp = FpSpace::new(self.p, self.dim);
                    for comb in ker {
                        let mut v = vec![0u64; self.dim];
                        for (i, &ci) in comb.iter().enumerate() {
                            if ci == 0 {
                                continue;
                            }
                            for (k, vk) in v.iter_mut().enumerate() {
                                *vk = fp.add(*vk, fp.mul(ci, w.rows()[i][k]));
                            }
                        }
                        sp.insert(v);
                    }
                    if sp.dim() > 0 {
                        next.push(sp);
                    }
                }
            }
            blocks = next;
        }
        let total: usize = blocks.iter().map(|b| b.dim()).sum();
        if total != self.dim {
            return Err(Error::Precondition("block decomposition lost dimension".into()));
        }
        Ok(blocks)
    }

    /// Minimal polynomial of a matrix restricted to an invariant subspace.
    fn min_poly_on(&self, m: &[Vec<u64>], w: &FpSpace) -> Vec<u64> {
        let fp = Fp::new(self.p);
        // use the first basis vector's Krylov sequence; for a direct sum of
        // fields each block element generates, and splitting is iterated, so
        // per-vector minimal polynomials suffice for eigenvalue discovery.
        let mut mp = vec![1u64];
        for start in w.rows() {
            let mut span = FpSpace::new(self.p, self.dim);
            let mut pows = vec![start.clone()];
            span.insert(start.clone());
            loop {
                let last = pows.last().unwrap();
                let mut next = vec![0u64; self.dim];
                for (j, &c) in last.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (k, nk) in next.iter_mut().enumerate() {
                        *nk = fp.add(*nk, fp.mul(c, m[j][k]));
                    }
                }
                if !span.insert(next.clone()) {
                    let k = pows.len();
                    let rows: Vec<Vec<u64>> = (0..self.dim)
                        .map(|j| pows.iter().map(|pw| pw[j]).collect())
                        .collect();
                    let sol = crate::linalg::ff_solve(&fp, &rows, &next)
                        .expect("dependency exists");
                    let mut vmp = vec![0u64; k + 1];
                    for (i, c) in sol.iter().enumerate() {
                        vmp[i] = fp.sub(0, *c);
                    }
                    vmp[k] = 1;
                    // lcm accumulate
                    let g = pgcd(&fp, &mp, &vmp);
                    let gm = pmul(&fp, &mp, &vmp);
                    // divide gm by g exactly
                    mp = pdiv_exact(&fp, &gm, &g);
                    break;
                }
                pows.push(next);
            }
        }
        mp
    }
}

fn pdiv_exact(f: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    ptrim(&mut r);
    let db = b.len() - 1;
    let inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = f.mul(r[dr], inv);
        q[dr - db] = c;
        for (k, &bk) in b.iter().enumerate() {
            r[dr - db + k] = f.sub(r[dr - db + k], f.mul(c, bk));
        }
        ptrim(&mut r);
    }
    debug_assert!(r.is_empty(), "division was not exact");
    ptrim(&mut q);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_small_and_large_p() {
        // x^2 - 1 over F_7
        assert_eq!(split_poly_roots(7, &[6, 0, 1]), vec![1, 6]);
        // (x-3)(x-5)(x-11) over a large prime
        let p = 2_000_000_011u64;
        let f = Fp::new(p);
        let a = pmul(&f, &[p - 3, 1], &[p - 5, 1]);
        let poly = pmul(&f, &a, &[p - 11, 1]);
        assert_eq!(split_poly_roots(p, &poly), vec![3, 5, 11]);
    }

    #[test]
    fn radical_of_dual_numbers() {
        // F_2[x]/(x^2): radical = (x)
        let a = FpAlgebra::from_poly(2, &[0, 0, 1]);
        let r = a.radical();
        assert_eq!(r.dim(), 1);
        assert!(r.contains(&[0, 1]));
    }

    #[test]
    fn split_semisimple_blocks() {
        // F_5[x]/(x^2-1) = F_5 x F_5: two maximal ideals, residue degree 1
        let a = FpAlgebra::from_poly(5, &[4, 0, 1]);
        let ms = a.maximal_ideals().unwrap();
        assert_eq!(ms.len(), 2);
        assert!(ms.iter().all(|m| m.residue_degree == 1 && m.subspace.dim() == 1));
    }

    #[test]
    fn field_stays_whole() {
        // F_2[x]/(x^3+x+1) is a field: one maximal ideal (0), residue degree 3
        let a = FpAlgebra::from_poly(2, &[1, 1, 0, 1]);
        let ms = a.maximal_ideals().unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].residue_degree, 3);
        assert_eq!(ms[0].subspace.dim(), 0);
    }

    #[test]
    fn mixed_nilpotent_and_split() {
        // F_3[x]/(x^2(x-1)) : radical dim 1, two maximal ideals
        let f = Fp::new(3);
        let m = pmul(&f, &[0, 0, 1], &[2, 1]);
        let a = FpAlgebra::from_poly(3, &m);
        assert_eq!(a.radical().dim(), 1);
        let ms = a.maximal_ideals().unwrap();
        assert_eq!(ms.len(), 2);
        let mut dims: Vec<usize> = ms.iter().map(|m| m.subspace.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![2, 2]);
    }

    #[test]
    fn quadratic_residue_field() {
        // F_3[x]/(x^2+1) is a field of degree 2
        let a = FpAlgebra::from_poly(3, &[1, 0, 1]);
        let ms = a.maximal_ideals().unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].residue_degree, 2);
    }

    #[test]
    fn min_poly_of_generator() {
        let a = FpAlgebra::from_poly(5, &[3, 1, 1]);
        assert_eq!(a.min_poly(&[0, 1]), vec![3, 1, 1]);
    }
}
