//! Ground truth by exact linear algebra on graded pieces: invariant bases,
//! generator counts, decomposability, transfer images, radical membership and
//! the monomial-appearance lemmas.
//!
//! Everything here works over a finite field. Vectors are sparse lists of
//! (monomial index, coefficient) sorted by decreasing index; within a degree,
//! index order is grevlex order, so the first entry is the lead term.

use std::collections::BinaryHeap;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::coeff::{gf_inv_table, gf_mul_table, FieldDescriptor, Scalar};
use crate::construct;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::rep::{RepKind, Representation};

pub type SparseVec = Vec<(u32, u8)>;

/// GF(2^k) arithmetic on bit patterns.
#[derive(Clone, Copy)]
pub(crate) struct Fq {
    q: usize,
    mul: &'static [u8],
    inv: &'static [u8],
}

impl Fq {
    pub(crate) fn new(field: FieldDescriptor) -> Result<Fq> {
        let k = match field {
            FieldDescriptor::Gf2 => 1,
            FieldDescriptor::Gf2k(k) => k,
            FieldDescriptor::RationalFunction => {
                return Err(Error::UnsupportedField("linear algebra needs a finite field; specialise lambda".into()))
            }
        };
        Ok(Fq { q: 1 << k, mul: gf_mul_table(k), inv: gf_inv_table(k) })
    }

    #[inline]
    pub(crate) fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub(crate) fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
}

fn scalar_bits(s: &Scalar) -> u8 {
    match s {
        Scalar::Gf2(b) => *b as u8,
        Scalar::Gf2k { bits, .. } => *bits,
        Scalar::Rational(_) => unreachable!("finite field checked on construction"),
    }
}

/// All monomials of one degree in grevlex order, smallest first.
pub struct DegreeSpace {
    pub degree: u32,
    monomials: Vec<Monomial>,
    index: FxHashMap<Monomial, u32>,
}

impl DegreeSpace {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let mut monomials = Vec::new();
        let mut cur = Monomial::one();
        fn rec(v: usize, n: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
            if v + 1 == n {
                cur.set_exp(v, left);
                out.push(*cur);
                cur.set_exp(v, 0);
                return;
            }
            for e in 0..=left {
                cur.set_exp(v, e);
                rec(v + 1, n, left - e, cur, out);
            }
            cur.set_exp(v, 0);
        }
        if nvars > 0 {
            rec(0, nvars, degree, &mut cur, &mut monomials);
        } else if degree == 0 {
            monomials.push(cur);
        }
        monomials.sort();
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect();
        DegreeSpace { degree, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, i: u32) -> &Monomial {
        &self.monomials[i as usize]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<u32> {
        self.index.get(m).copied()
    }
}

/// Dense accumulator with a max-heap of touched positions.
pub(crate) struct Scratch {
    dense: Vec<u8>,
    mark: Vec<bool>,
    heap: BinaryHeap<u32>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Self {
        Scratch { dense: vec![0; n], mark: vec![false; n], heap: BinaryHeap::new() }
    }

    fn ensure(&mut self, n: usize) {
        if self.dense.len() < n {
            self.dense.resize(n, 0);
            self.mark.resize(n, false);
        }
    }

    #[inline]
    fn add(&mut self, i: u32, c: u8) {
        self.dense[i as usize] ^= c;
        if !self.mark[i as usize] {
            self.mark[i as usize] = true;
            self.heap.push(i);
        }
    }

    fn add_scaled(&mut self, fq: &Fq, a: u8, v: &[(u32, u8)]) {
        if a == 1 {
            for &(i, c) in v {
                self.add(i, c);
            }
        } else {
            for &(i, c) in v {
                self.add(i, fq.mul(a, c));
            }
        }
    }

    fn pop(&mut self) -> Option<(u32, u8)> {
        let i = self.heap.pop()?;
        self.mark[i as usize] = false;
        let c = std::mem::take(&mut self.dense[i as usize]);
        Some((i, c))
    }

    fn drain_into(&mut self, out: &mut SparseVec) {
        while let Some((i, c)) = self.pop() {
            if c != 0 {
                out.push((i, c));
            }
        }
    }

    fn drain(&mut self) -> SparseVec {
        let mut out = Vec::new();
        self.drain_into(&mut out);
        out
    }
}

/// Row echelon form keyed by pivot (lead) position; rows are monic.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: Vec<SparseVec>,
    pivots: FxHashMap<u32, u32>,
}

impl Echelon {
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce until the lead is not a pivot; empty result means v is in the span.
    fn top_reduce(&self, fq: &Fq, s: &mut Scratch, v: &[(u32, u8)]) -> SparseVec {
        s.add_scaled(fq, 1, v);
        while let Some((c, a)) = s.pop() {
            if a == 0 {
                continue;
            }
            match self.pivots.get(&c) {
                Some(&r) => s.add_scaled(fq, a, &self.rows[r as usize][1..]),
                None => {
                    let mut out = vec![(c, a)];
                    s.drain_into(&mut out);
                    return out;
                }
            }
        }
        Vec::new()
    }

    /// Reduce every pivot position out of v.
    fn full_reduce(&self, fq: &Fq, s: &mut Scratch, v: &[(u32, u8)]) -> SparseVec {
        s.add_scaled(fq, 1, v);
        let mut out = Vec::new();
        while let Some((c, a)) = s.pop() {
            if a == 0 {
                continue;
            }
            match self.pivots.get(&c) {
                Some(&r) => s.add_scaled(fq, a, &self.rows[r as usize][1..]),
                None => out.push((c, a)),
            }
        }
        out
    }

    fn push_reduced(&mut self, fq: &Fq, mut v: SparseVec) {
        let lc = v[0].1;
        if lc != 1 {
            let inv = fq.inv(lc);
            for e in v.iter_mut() {
                e.1 = fq.mul(inv, e.1);
            }
        }
        self.pivots.insert(v[0].0, self.rows.len() as u32);
        self.rows.push(v);
    }

    /// Adds v to the span; returns whether the rank grew.
    pub(crate) fn add(&mut self, fq: &Fq, s: &mut Scratch, v: &[(u32, u8)]) -> bool {
        let r = self.top_reduce(fq, s, v);
        if r.is_empty() {
            return false;
        }
        self.push_reduced(fq, r);
        true
    }

    pub(crate) fn contains(&self, fq: &Fq, s: &mut Scratch, v: &[(u32, u8)]) -> bool {
        self.top_reduce(fq, s, v).is_empty()
    }

    /// Reduced row echelon form, rows ordered by increasing pivot.
    fn into_rref(self, fq: &Fq, s: &mut Scratch) -> Vec<SparseVec> {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        let mut done = Echelon::default();
        for row in rows {
            let lead = row[0];
            let mut tail = done.full_reduce(fq, s, &row[1..]);
            let mut v = vec![lead];
            v.append(&mut tail);
            done.push_reduced(fq, v);
        }
        done.rows
    }
}

/// A linear substitution given by the images of the variables.
struct LinearMap {
    images: Vec<Vec<(usize, u8)>>,
    powers: Vec<Vec<Vec<(Monomial, u8)>>>,
}

impl LinearMap {
    fn new(images: &[Polynomial]) -> Result<Self> {
        let mut out = Vec::with_capacity(images.len());
        for img in images {
            let mut lin = Vec::new();
            for (m, c) in img.terms() {
                if m.degree() != 1 {
                    return Err(Error::InvalidParameter("group action must be linear".into()));
                }
                let v = (0..img.ring().nvars()).find(|&k| m.exp(k) == 1).unwrap();
                lin.push((v, scalar_bits(c)));
            }
            out.push(lin);
        }
        let n = out.len();
        Ok(LinearMap { images: out, powers: vec![Vec::new(); n] })
    }

    fn power(&mut self, fq: &Fq, v: usize, e: u32) -> &[(Monomial, u8)] {
        let e = e as usize;
        if self.powers[v].is_empty() {
            self.powers[v].push(vec![(Monomial::one(), 1)]);
        }
        while self.powers[v].len() <= e {
            let last = self.powers[v].last().unwrap();
            let mut acc: FxHashMap<Monomial, u8> = FxHashMap::default();
            for (m, c) in last {
                for &(w, d) in &self.images[v] {
                    *acc.entry(m.mul(&Monomial::var(w))).or_insert(0) ^= fq.mul(*c, d);
                }
            }
            let next: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
            self.powers[v].push(next);
        }
        &self.powers[v][e]
    }

    /// sigma(m) + m.
    fn delta(&mut self, fq: &Fq, m: &Monomial, nvars: usize) -> FxHashMap<Monomial, u8> {
        let mut acc: FxHashMap<Monomial, u8> = FxHashMap::default();
        acc.insert(Monomial::one(), 1);
        for v in 0..nvars {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let p = self.power(fq, v, e).to_vec();
            if p.len() == 1 && p[0].1 == 1 {
                let t = p[0].0;
                acc = acc.into_iter().map(|(k, c)| (k.mul(&t), c)).collect();
                continue;
            }
            let mut next: FxHashMap<Monomial, u8> = FxHashMap::default();
            for (k, c) in &acc {
                for (t, d) in &p {
                    *next.entry(k.mul(t)).or_insert(0) ^= fq.mul(*c, *d);
                }
            }
            acc = next;
        }
        *acc.entry(*m).or_insert(0) ^= 1;
        acc.retain(|_, c| *c != 0);
        acc
    }
}

/// Basis of the invariants of one degree, in reduced echelon form.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub degree: u32,
    pub basis: Vec<Polynomial>,
}

impl GradedBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Per-degree invariant dimensions and minimal generator counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorProfile {
    pub bound: u32,
    /// dim of the invariants of degree d, indexed by d.
    pub dimensions: Vec<usize>,
    /// Number of new generators needed in degree d, indexed by d.
    pub new_generators: Vec<usize>,
    /// Largest degree with a new generator.
    pub noether_number: u32,
}

/// Span of the transfer in one degree.
#[derive(Clone, Debug)]
pub struct TransferImage {
    pub degree: u32,
    pub basis: Vec<Polynomial>,
    /// Whether the span lies in the ideal generated by the transfers of the
    /// divisors of the top class (`None` when there is no hsop with a top class).
    pub generated_by_top_divisors: Option<bool>,
}

/// Exact linear algebra on the graded pieces for one representation.
pub struct Oracle {
    rep: Representation,
    fq: Fq,
    maps: [LinearMap; 2],
    spaces: Vec<Option<Arc<DegreeSpace>>>,
    bases: Vec<Option<Arc<Vec<SparseVec>>>>,
    generators: Vec<Vec<SparseVec>>,
    decomposables: FxHashMap<u32, Echelon>,
    transfers: FxHashMap<u32, Echelon>,
    permuted: bool,
    budget: Option<usize>,
    steps: usize,
    scratch: Scratch,
}

impl Oracle {
    pub fn new(rep: &Representation) -> Result<Self> {
        let fq = Fq::new(rep.field())?;
        let maps = [LinearMap::new(rep.sigma_images(1))?, LinearMap::new(rep.sigma_images(2))?];
        Ok(Oracle {
            rep: rep.clone(),
            fq,
            maps,
            spaces: Vec::new(),
            bases: Vec::new(),
            generators: vec![Vec::new()],
            decomposables: FxHashMap::default(),
            transfers: FxHashMap::default(),
            permuted: false,
            budget: None,
            steps: 0,
            scratch: Scratch::new(0),
        })
    }

    /// Same computations, but every enumeration runs in a scrambled order.
    /// Results must not change; used to check basis independence.
    pub fn permuted(mut self) -> Self {
        self.permuted = true;
        self
    }

    /// Caps the number of elimination steps; exceeding it is an error.
    pub fn with_budget(mut self, steps: usize) -> Self {
        self.budget = Some(steps);
        self
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    fn tick(&mut self, n: usize) -> Result<()> {
        self.steps += n;
        match self.budget {
            Some(b) if self.steps > b => Err(Error::BudgetExceeded { steps: self.steps }),
            _ => Ok(()),
        }
    }

    fn order<T: Clone>(&self, items: &[T]) -> Vec<T> {
        if !self.permuted || items.len() < 3 {
            return items.to_vec();
        }
        // a stride coprime to the length, walking backwards
        let n = items.len();
        let mut stride = n / 2 + 1;
        while gcd(stride, n) != 1 {
            stride += 1;
        }
        (0..n).map(|i| items[n - 1 - (i * stride) % n].clone()).collect()
    }

    pub fn space(&mut self, d: u32) -> Arc<DegreeSpace> {
        let d = d as usize;
        if self.spaces.len() <= d {
            self.spaces.resize(d + 1, None);
        }
        if self.spaces[d].is_none() {
            self.spaces[d] = Some(Arc::new(DegreeSpace::new(self.rep.nvars(), d as u32)));
        }
        self.spaces[d].clone().unwrap()
    }

    /// Coordinates of a homogeneous polynomial in its degree space.
    pub fn to_vector(&mut self, f: &Polynomial) -> Result<(u32, SparseVec)> {
        if f.field() != self.rep.field() {
            return Err(Error::MixedFields(f.field().to_string(), self.rep.field().to_string()));
        }
        let d = match f.degree() {
            Some(d) if f.is_homogeneous() => d,
            Some(_) => return Err(Error::InvalidParameter("polynomial is not homogeneous".into())),
            None => return Ok((0, Vec::new())),
        };
        let sp = self.space(d);
        let v = f.terms().iter().map(|(m, c)| (sp.index_of(m).unwrap(), scalar_bits(c))).collect();
        Ok((d, v))
    }

    pub fn to_polynomial(&mut self, d: u32, v: &[(u32, u8)]) -> Polynomial {
        let sp = self.space(d);
        let field = self.rep.field();
        Polynomial::from_terms(self.rep.ring(), v.iter().map(|&(i, c)| (*sp.monomial(i), field.element(c))))
    }

    fn delta_vector(&mut self, which: usize, sp: &DegreeSpace, i: u32) -> SparseVec {
        let n = self.rep.nvars();
        let img = self.maps[which].delta(&self.fq, sp.monomial(i), n);
        let mut v: SparseVec = img.into_iter().map(|(m, c)| (sp.index_of(&m).unwrap(), c)).collect();
        v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        v
    }

    /// Blocks of monomial indices preserved by Delta_1.
    fn sigma1_blocks(&self, sp: &DegreeSpace) -> Vec<Vec<u32>> {
        let n = self.rep.nvars();
        let pairs = self.rep.pairs(1).filter(|p| {
            let ys: Vec<usize> = p.iter().map(|q| q.0).collect();
            let mut xs: Vec<usize> = p.iter().map(|q| q.1).collect();
            xs.sort_unstable();
            xs.dedup();
            xs.len() == p.len() && xs.iter().all(|x| !ys.contains(x))
        });
        let Some(pairs) = pairs else {
            return vec![(0..sp.len() as u32).collect()];
        };
        let mut owner: Vec<usize> = (0..n).collect();
        for &(y, x) in &pairs {
            owner[y] = x;
        }
        let mut blocks: FxHashMap<[u8; 16], Vec<u32>> = FxHashMap::default();
        for i in 0..sp.len() as u32 {
            let m = sp.monomial(i);
            let mut key = [0u8; 16];
            for v in 0..n {
                key[owner[v]] += m.exp(v) as u8;
            }
            blocks.entry(key).or_default().push(i);
        }
        let mut out: Vec<(_, _)> = blocks.into_iter().collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out.into_iter().map(|(_, b)| b).collect()
    }

    fn compute_basis(&mut self, d: u32) -> Result<Vec<SparseVec>> {
        let sp = self.space(d);
        let n = sp.len();
        if d == 0 {
            return Ok(vec![vec![(0, 1)]]);
        }
        let fq = self.fq;
        let mut scratch = Scratch::new(2 * n);
        // kernel of Delta_1, block by block
        let mut k1: Vec<SparseVec> = Vec::new();
        for block in self.sigma1_blocks(&sp) {
            let mut ech = Echelon::default();
            for t in self.order(&block) {
                let img = self.delta_vector(0, &sp, t);
                if img.is_empty() {
                    k1.push(vec![(t, 1)]);
                    continue;
                }
                let mut v: SparseVec = img.iter().map(|&(i, c)| (i + n as u32, c)).collect();
                v.push((t, 1));
                let r = ech.top_reduce(&fq, &mut scratch, &v);
                if r[0].0 as usize >= n {
                    ech.push_reduced(&fq, r);
                } else {
                    k1.push(r);
                }
            }
            self.tick(block.len())?;
        }
        k1.sort_by_key(|v| v[0].0);
        let k1 = self.order(&k1);
        // kernel of Delta_2 restricted to it
        let kk = k1.len();
        let mut d2_cache: Vec<Option<SparseVec>> = vec![None; n];
        let mut acc = Scratch::new(n);
        let mut scratch = Scratch::new(kk + n);
        let mut ech = Echelon::default();
        let mut kernel: Vec<SparseVec> = Vec::new();
        for (i, kv) in k1.iter().enumerate() {
            for &(t, c) in kv {
                if d2_cache[t as usize].is_none() {
                    d2_cache[t as usize] = Some(self.delta_vector(1, &sp, t));
                }
                acc.add_scaled(&fq, c, d2_cache[t as usize].as_ref().unwrap());
            }
            let img = acc.drain();
            if img.is_empty() {
                kernel.push(kv.clone());
                continue;
            }
            let mut v: SparseVec = img.iter().map(|&(j, c)| (j + kk as u32, c)).collect();
            v.push((i as u32, 1));
            let r = ech.top_reduce(&fq, &mut scratch, &v);
            if r[0].0 as usize >= kk {
                ech.push_reduced(&fq, r);
            } else {
                for &(j, c) in &r {
                    acc.add_scaled(&fq, c, &k1[j as usize]);
                }
                kernel.push(acc.drain());
            }
            if i % 256 == 255 {
                self.tick(256)?;
            }
        }
        // canonical form
        let mut ech = Echelon::default();
        let mut scratch = Scratch::new(n);
        for v in &kernel {
            ech.add(&fq, &mut scratch, v);
        }
        Ok(ech.into_rref(&fq, &mut scratch))
    }

    pub(crate) fn basis_vectors(&mut self, d: u32) -> Result<Arc<Vec<SparseVec>>> {
        let i = d as usize;
        if self.bases.len() <= i {
            self.bases.resize(i + 1, None);
        }
        if self.bases[i].is_none() {
            let b = self.compute_basis(d)?;
            self.bases[i] = Some(Arc::new(b));
        }
        Ok(self.bases[i].clone().unwrap())
    }

    /// Dimension of the invariants of degree d.
    pub fn dimension(&mut self, d: u32) -> Result<usize> {
        Ok(self.basis_vectors(d)?.len())
    }

    /// Reduced echelon basis of the invariants of degree d, smallest lead first.
    pub fn invariant_basis(&mut self, d: u32) -> Result<Vec<Polynomial>> {
        let b = self.basis_vectors(d)?;
        Ok(b.iter().map(|v| self.to_polynomial(d, v)).collect())
    }

    pub fn graded_basis(&mut self, d: u32) -> Result<GradedBasis> {
        Ok(GradedBasis { degree: d, basis: self.invariant_basis(d)? })
    }

    /// Whether a homogeneous polynomial lies in the span of the invariants
    /// of its degree.
    pub fn in_invariant_span(&mut self, f: &Polynomial) -> Result<bool> {
        let (d, v) = self.to_vector(f)?;
        if v.is_empty() {
            return Ok(true);
        }
        let basis = self.basis_vectors(d)?;
        let mut ech = Echelon::default();
        let mut s = Scratch::new(self.space(d).len());
        for b in basis.iter() {
            ech.push_reduced(&self.fq, b.clone());
        }
        Ok(ech.contains(&self.fq, &mut s, &v))
    }

    fn multiply(&mut self, da: u32, a: &[(u32, u8)], db: u32, b: &[(u32, u8)]) -> SparseVec {
        let (sa, sb, sc) = (self.space(da), self.space(db), self.space(da + db));
        self.scratch.ensure(sc.len());
        for &(i, c) in a {
            let mi = *sa.monomial(i);
            for &(j, e) in b {
                let k = sc.index_of(&mi.mul(sb.monomial(j))).unwrap();
                let p = self.fq.mul(c, e);
                self.scratch.add(k, p);
            }
        }
        self.scratch.drain()
    }

    fn ensure_generators(&mut self, d: u32) -> Result<()> {
        while (self.generators.len() as u32) <= d {
            let deg = self.generators.len() as u32;
            let (ech, gens) = self.decomposables_and_generators(deg)?;
            self.decomposables.insert(deg, ech);
            self.generators.push(gens);
        }
        Ok(())
    }

    fn decomposable_echelon(&mut self, deg: u32) -> Result<Echelon> {
        let target = self.basis_vectors(deg)?.len();
        let mut ech = Echelon::default();
        let mut s = Scratch::new(self.space(deg).len());
        let fq = self.fq;
        let mut degrees: Vec<u32> = (1..deg).collect();
        if self.permuted {
            degrees.reverse();
        }
        'outer: for a in degrees {
            let gens = self.order(&self.generators[a as usize].clone());
            let others = self.basis_vectors(deg - a)?;
            let others = self.order(&others);
            for g in &gens {
                for b in &others {
                    if ech.rank() == target {
                        break 'outer;
                    }
                    let p = self.multiply(a, g, deg - a, b);
                    ech.add(&fq, &mut s, &p);
                }
                self.tick(others.len())?;
            }
        }
        Ok(ech)
    }

    fn decomposables_and_generators(&mut self, deg: u32) -> Result<(Echelon, Vec<SparseVec>)> {
        if deg == 0 {
            return Ok((Echelon::default(), Vec::new()));
        }
        let mut ech = self.decomposable_echelon(deg)?;
        let basis = self.basis_vectors(deg)?;
        let mut s = Scratch::new(self.space(deg).len());
        let fq = self.fq;
        let mut probe = Echelon::default();
        for r in &ech.rows {
            probe.rows.push(r.clone());
        }
        probe.pivots = ech.pivots.clone();
        let mut gens = Vec::new();
        for b in self.order(&basis) {
            if probe.add(&fq, &mut s, &b) {
                gens.push(b);
            }
        }
        // keep the decomposable span itself for later membership queries
        ech.rows.shrink_to_fit();
        Ok((ech, gens))
    }

    /// Per-degree dimensions and new-generator counts up to `bound`.
    pub fn generator_profile(&mut self, bound: u32) -> Result<GeneratorProfile> {
        self.ensure_generators(bound)?;
        Ok(self.profile_so_far(bound))
    }

    /// Profile of every degree already computed, up to `bound`.
    pub fn profile_so_far(&self, bound: u32) -> GeneratorProfile {
        let top = (self.generators.len() as u32).saturating_sub(1).min(bound);
        let dimensions =
            (0..=top).map(|d| self.bases.get(d as usize).and_then(|b| b.as_ref()).map_or(0, |b| b.len())).collect();
        let new_generators: Vec<usize> = (0..=top).map(|d| self.generators[d as usize].len()).collect();
        let noether_number = new_generators.iter().rposition(|&c| c > 0).unwrap_or(0) as u32;
        GeneratorProfile { bound: top, dimensions, new_generators, noether_number }
    }

    /// Minimal generators found in degree d (a complement of the decomposables).
    pub fn generators(&mut self, d: u32) -> Result<Vec<Polynomial>> {
        self.ensure_generators(d)?;
        let g = self.generators[d as usize].clone();
        Ok(g.iter().map(|v| self.to_polynomial(d, v)).collect())
    }

    /// Whether an invariant is a sum of products of invariants of lower degree.
    pub fn is_decomposable(&mut self, f: &Polynomial) -> Result<bool> {
        if !self.rep.is_invariant(f)? {
            return Err(Error::NotInvariant(f.to_string()));
        }
        let (d, v) = self.to_vector(f)?;
        if v.is_empty() {
            return Ok(true);
        }
        if d == 0 {
            return Ok(false);
        }
        self.ensure_generators(d - 1)?;
        if !self.decomposables.contains_key(&d) {
            let ech = self.decomposable_echelon(d)?;
            self.decomposables.insert(d, ech);
        }
        let mut s = Scratch::new(self.space(d).len());
        Ok(self.decomposables[&d].contains(&self.fq, &mut s, &v))
    }

    fn transfer_echelon(&mut self, d: u32) -> Result<&Echelon> {
        if !self.transfers.contains_key(&d) {
            let sp = self.space(d);
            let fq = self.fq;
            let mut ech = Echelon::default();
            let mut s = Scratch::new(sp.len());
            let mut acc = Scratch::new(sp.len());
            let mut d2: FxHashMap<u32, SparseVec> = FxHashMap::default();
            for i in 0..sp.len() as u32 {
                let first = self.delta_vector(0, &sp, i);
                for &(j, c) in &first {
                    if !d2.contains_key(&j) {
                        let v = self.delta_vector(1, &sp, j);
                        d2.insert(j, v);
                    }
                    acc.add_scaled(&fq, c, &d2[&j]);
                }
                let tr = acc.drain();
                if !tr.is_empty() {
                    ech.add(&fq, &mut s, &tr);
                }
            }
            self.tick(sp.len())?;
            self.transfers.insert(d, ech);
        }
        Ok(&self.transfers[&d])
    }

    /// Basis of the transfer image in degree d, with the check that it lies in
    /// the ideal generated by transfers of divisors of the top class.
    pub fn transfer_image(&mut self, d: u32) -> Result<TransferImage> {
        let fq = self.fq;
        let n = self.space(d).len();
        let rows = {
            let ech = self.transfer_echelon(d)?;
            Echelon { rows: ech.rows.clone(), pivots: ech.pivots.clone() }
        };
        let mut s = Scratch::new(n);
        let rref = rows.into_rref(&fq, &mut s);
        let basis: Vec<Polynomial> = rref.iter().map(|v| self.to_polynomial(d, v)).collect();
        let generated = match construct::hsop(&self.rep) {
            Ok(spec) => {
                let mut ideal = Echelon::default();
                for beta in construct::divisors(&spec.top_class, self.rep.nvars()) {
                    let db = beta.degree();
                    if db > d {
                        continue;
                    }
                    let tb = construct::transfer_monomial(&self.rep, &beta)?;
                    if tb.is_zero() {
                        continue;
                    }
                    let (_, tv) = self.to_vector(&tb)?;
                    let mult = self.basis_vectors(d - db)?;
                    for b in mult.iter() {
                        let p = self.multiply(db, &tv, d - db, b);
                        ideal.add(&fq, &mut s, &p);
                    }
                }
                Some(rref.iter().all(|v| ideal.contains(&fq, &mut s, v)))
            }
            Err(_) => None,
        };
        Ok(TransferImage { degree: d, basis, generated_by_top_divisors: generated })
    }

    /// Whether a homogeneous polynomial lies in the transfer image.
    pub fn in_transfer_image(&mut self, f: &Polynomial) -> Result<bool> {
        let (d, v) = self.to_vector(f)?;
        if v.is_empty() {
            return Ok(true);
        }
        let fq = self.fq;
        let n = self.space(d).len();
        let ech = self.transfer_echelon(d)?;
        let mut s = Scratch::new(n);
        Ok(ech.contains(&fq, &mut s, &v))
    }

    /// Smallest k <= kmax with f^k in the image of the transfer.
    pub fn radical_membership(&mut self, f: &Polynomial, kmax: u32) -> Result<Option<u32>> {
        if !self.rep.is_invariant(f)? {
            return Err(Error::NotInvariant(f.to_string()));
        }
        if !f.is_homogeneous() {
            return Err(Error::InvalidParameter("polynomial is not homogeneous".into()));
        }
        let mut p = f.clone();
        for k in 1..=kmax {
            if self.in_transfer_image(&p)? {
                return Ok(Some(k));
            }
            p = &p * f;
        }
        Ok(None)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Identifiers accepted by [`lemma_predicate`].
pub const LEMMA_IDS: [&str; 7] = ["ilk", "permute", "lift", "shift", "double", "artikiki", "ciftiki"];

/// Outcome of a lemma predicate: the first monomial breaking the condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaVerdict {
    pub lemma: String,
    pub pass: bool,
    pub violation: Option<String>,
}

struct PairView {
    y_of_x: FxHashMap<usize, usize>,
    x_of_y: FxHashMap<usize, usize>,
}

impl PairView {
    fn new(pairs: &[(usize, usize)]) -> Self {
        PairView {
            y_of_x: pairs.iter().map(|&(y, x)| (x, y)).collect(),
            x_of_y: pairs.iter().copied().collect(),
        }
    }

    /// The pair-x variables of m with their exponents.
    fn x_part(&self, m: &Monomial) -> Vec<(usize, u32)> {
        let mut v: Vec<_> = self.y_of_x.keys().filter(|&&x| m.exp(x) > 0).map(|&x| (x, m.exp(x))).collect();
        v.sort_unstable();
        v
    }
}

fn minus(m: &Monomial, v: usize, k: u32) -> Monomial {
    let mut out = *m;
    out.set_exp(v, m.exp(v) - k);
    out
}

fn plus(m: &Monomial, v: usize, k: u32) -> Monomial {
    let mut out = *m;
    out.set_exp(v, m.exp(v) + k);
    out
}

/// Checks a monomial-appearance lemma against the support of f.
pub fn lemma_predicate(rep: &Representation, f: &Polynomial, lemma: &str) -> Result<LemmaVerdict> {
    let vars = &rep.ring().vars;
    let fail = |m: &Monomial| LemmaVerdict { lemma: lemma.into(), pass: false, violation: Some(m.format(vars)) };
    let ok = LemmaVerdict { lemma: lemma.into(), pass: true, violation: None };
    match lemma {
        "ilk" | "permute" | "lift" => {
            let mut applied = false;
            for i in 1..=2 {
                let Some(pairs) = rep.pairs(i) else { continue };
                if !rep.delta(i, f)?.is_zero() {
                    continue;
                }
                applied = true;
                let pv = PairView::new(&pairs);
                for (m, c) in f.terms() {
                    if let Some(bad) = sigma_lemma(lemma, &pv, f, m, c) {
                        return Ok(fail(&bad));
                    }
                }
            }
            if !applied {
                return Err(Error::NotApplicable(format!("{lemma}: no involution in pair form fixes f")));
            }
            Ok(ok)
        }
        "shift" | "double" => {
            let RepKind::Even { m, lambda } = rep.kind() else {
                return Err(Error::NotApplicable(format!("{lemma} is about V_(m,lambda)")));
            };
            if !rep.is_invariant(f)? {
                return Err(Error::NotInvariant(f.to_string()));
            }
            let idx = |p: &str, j: usize| rep.ring().vars.index_of(&format!("{p}{j}")).unwrap();
            let xs: Vec<usize> = (1..=*m).map(|j| idx("x", j)).collect();
            let ys: Vec<usize> = (1..=*m).map(|j| idx("y", j)).collect();
            for (mono, _) in f.terms() {
                let bad = if lemma == "shift" {
                    shift_violation(f, mono, &xs, &ys)
                } else {
                    double_violation(mono, &xs, &ys, lambda.in_prime_field())
                };
                if bad {
                    return Ok(fail(mono));
                }
            }
            Ok(ok)
        }
        "artikiki" | "ciftiki" => {
            let RepKind::OmegaPlus { m } = rep.kind() else {
                return Err(Error::NotApplicable(format!("{lemma} is about Omega^m")));
            };
            if !rep.is_invariant(f)? {
                return Err(Error::NotInvariant(f.to_string()));
            }
            let idx = |p: &str, j: usize| rep.ring().vars.index_of(&format!("{p}{j}")).unwrap();
            let xs: Vec<usize> = (1..=*m + 1).map(|j| idx("x", j)).collect();
            let ys: Vec<usize> = (1..=*m).map(|j| idx("y", j)).collect();
            for (mono, _) in f.terms() {
                let xdeg: Vec<u32> = xs.iter().map(|&x| mono.exp(x)).collect();
                let all_y_even = ys.iter().all(|&y| mono.exp(y) % 2 == 0);
                let bad = if lemma == "artikiki" {
                    let only = |k: usize| xdeg[k] > 0 && xdeg.iter().enumerate().all(|(i, &e)| i == k || e == 0);
                    (only(0) || only(*m)) && !all_y_even
                } else {
                    xdeg.iter().all(|&e| e == 0)
                        && ys.iter().all(|&y| mono.exp(y) == 0 || mono.exp(y) == 2)
                        && ys.iter().any(|&y| mono.exp(y) == 2)
                };
                if bad {
                    return Ok(fail(mono));
                }
            }
            Ok(ok)
        }
        _ => Err(Error::UnknownLemma(lemma.into())),
    }
}

/// Lemmas about a single involution in pair form; returns the offending monomial.
fn sigma_lemma(lemma: &str, pv: &PairView, f: &Polynomial, m: &Monomial, c: &Scalar) -> Option<Monomial> {
    let xp = pv.x_part(m);
    let ys: Vec<usize> = pv.x_of_y.keys().copied().collect();
    match lemma {
        "ilk" => {
            if xp.is_empty() && ys.iter().any(|&y| m.exp(y) % 2 == 1) {
                return Some(*m);
            }
            if let [(x, 1)] = xp[..] {
                let yx = pv.y_of_x[&x];
                if m.exp(yx) == 1 && ys.iter().any(|&y| y != yx && m.exp(y) % 2 == 1) {
                    return Some(*m);
                }
            }
            None
        }
        "permute" => {
            let [(xi, 1)] = xp[..] else { return None };
            let yi = pv.y_of_x[&xi];
            for &yj in &ys {
                if yj == yi || m.exp(yj) % 2 == 0 {
                    continue;
                }
                let rest = minus(&minus(m, xi, 1), yj, 1);
                if rest.exp(yi) % 2 == 1 {
                    return Some(*m);
                }
                let partner = plus(&plus(&rest, pv.x_of_y[&yj], 1), yi, 1);
                if &f.coefficient(&partner) != c {
                    return Some(*m);
                }
            }
            None
        }
        "lift" => {
            if let [(xj, 1)] = xp[..] {
                let yj = pv.y_of_x[&xj];
                match m.exp(yj) {
                    1 => {
                        let partner = plus(&minus(m, xj, 1), yj, 1);
                        if &f.coefficient(&partner) != c {
                            return Some(*m);
                        }
                    }
                    3 => return Some(*m),
                    _ => {}
                }
            }
            if xp.is_empty() {
                for &yj in &ys {
                    if m.exp(yj) == 2 {
                        let partner = plus(&minus(m, yj, 1), pv.x_of_y[&yj], 1);
                        if &f.coefficient(&partner) != c {
                            return Some(*m);
                        }
                    }
                }
            }
            None
        }
        _ => None,
    }
}

/// The shift lemma for V_(m,lambda); indices into xs/ys are 0-based.
fn shift_violation(f: &Polynomial, mono: &Monomial, xs: &[usize], ys: &[usize]) -> bool {
    let m = xs.len();
    let xdeg: Vec<u32> = xs.iter().map(|&x| mono.exp(x)).collect();
    if xdeg.iter().sum::<u32>() != 1 {
        return false;
    }
    let a = xdeg.iter().position(|&e| e == 1).unwrap();
    let has = |t: &Monomial| !f.coefficient(t).is_zero();
    // read as M' y_i x_j with j = a
    for i in 1..m {
        let e = mono.exp(ys[i]);
        if e % 2 == 0 {
            continue;
        }
        let rest = minus(&minus(mono, ys[i], 1), xs[a], 1);
        if a == m - 1 {
            return true;
        }
        let other = plus(&plus(&rest, ys[a + 1], 1), xs[i - 1], 1);
        if rest.exp(ys[a + 1]) % 2 == 1 || !has(&other) {
            return true;
        }
    }
    // read as M' y_(j+1) x_(i-1) with i - 1 = a
    if a + 1 < m {
        let i = a + 1;
        for j1 in 1..m {
            if mono.exp(ys[j1]) % 2 == 0 {
                continue;
            }
            let rest = minus(&minus(mono, ys[j1], 1), xs[a], 1);
            let other = plus(&plus(&rest, ys[i], 1), xs[j1 - 1], 1);
            if rest.exp(ys[i]) % 2 == 1 || !has(&other) {
                return true;
            }
        }
    }
    false
}

fn double_violation(mono: &Monomial, xs: &[usize], ys: &[usize], lambda_in_f2: bool) -> bool {
    if xs.iter().any(|&x| mono.exp(x) > 0) {
        return false;
    }
    if !ys.iter().all(|&y| mono.exp(y) == 0 || mono.exp(y) == 2) {
        return false;
    }
    let Some(j) = ys.iter().rposition(|&y| mono.exp(y) == 2) else { return false };
    let (j, m) = (j + 1, ys.len());
    if lambda_in_f2 {
        2 * j > m + 1
    } else {
        2 * j > m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldDescriptor;

    #[test]
    fn degree_space_is_sorted_and_indexed() {
        let sp = DegreeSpace::new(3, 4);
        assert_eq!(sp.len(), 15);
        for i in 1..sp.len() as u32 {
            assert!(sp.monomial(i - 1) < sp.monomial(i));
            assert_eq!(sp.index_of(sp.monomial(i)), Some(i));
        }
    }

    #[test]
    fn omega_minus_one_degree_one() {
        let rep = Representation::omega_minus(1, FieldDescriptor::Gf2).unwrap();
        let mut o = Oracle::new(&rep).unwrap();
        let b = o.invariant_basis(1).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_string(), "x1");
    }

    #[test]
    fn echelon_rref_is_order_independent() {
        let fq = Fq::new(FieldDescriptor::Gf2k(2)).unwrap();
        let vs: Vec<SparseVec> = vec![vec![(5, 1), (3, 2), (0, 1)], vec![(3, 1), (1, 3)], vec![(5, 2), (1, 1)]];
        let mut s = Scratch::new(6);
        let mut a = Echelon::default();
        let mut b = Echelon::default();
        for v in &vs {
            a.add(&fq, &mut s, v);
        }
        for v in vs.iter().rev() {
            b.add(&fq, &mut s, v);
        }
        assert_eq!(a.into_rref(&fq, &mut s), b.into_rref(&fq, &mut s));
    }
}
