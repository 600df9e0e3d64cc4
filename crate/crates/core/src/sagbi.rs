//! SAGBI machinery: lead-term relations (tête-à-têtes), subduction, the SAGBI
//! test and the SAGBI/divide-by-x completion loop.
//!
//! Lead-term relations are the binomials of the toric ideal of the lead
//! monomials, found by eliminating the ring variables from t_i - LM(b_i).

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use rustc_hash::{FxHashMap, FxHashSet};

use crate::construct::NamedInvariant;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};

/// A pair of power products of the generators with equal lead monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeteATete {
    pub i: Vec<u32>,
    pub j: Vec<u32>,
    pub degree: u32,
    pub nontrivial: bool,
}

impl TeteATete {
    /// Text form `b1^2*b3 ~ b2*b4` using the given element names.
    pub fn describe(&self, names: &[String]) -> String {
        let side = |e: &[u32]| {
            let parts: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
                .collect();
            parts.join("*")
        };
        format!("{} ~ {}", side(&self.i), side(&self.j))
    }
}

/// Lead-term relations of a generating set.
#[derive(Clone, Debug)]
pub struct TeteSet {
    pub relations: Vec<TeteATete>,
    /// Largest degree at which relations were searched.
    pub bound: u32,
}

impl TeteSet {
    pub fn nontrivial(&self) -> impl Iterator<Item = &TeteATete> {
        self.relations.iter().filter(|t| t.nontrivial)
    }
}

// ---------------------------------------------------------------------------
// Binomial elimination. Exponent layout: [tags 0..s | variables s..s+n].

struct BinomialOrder {
    weights: Vec<u32>,
    s: usize,
}

impl BinomialOrder {
    fn wdeg(&self, a: &[u16]) -> u32 {
        a.iter().zip(&self.weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        let d = self.wdeg(a).cmp(&self.wdeg(b));
        if d != Ordering::Equal {
            return d;
        }
        let va: u32 = a[self.s..].iter().map(|&e| e as u32).sum();
        let vb: u32 = b[self.s..].iter().map(|&e| e as u32).sum();
        if va != vb {
            return va.cmp(&vb);
        }
        for k in (self.s..a.len()).chain(0..self.s) {
            if a[k] != b[k] {
                return b[k].cmp(&a[k]);
            }
        }
        Ordering::Equal
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Binomial {
    lead: Vec<u16>,
    tail: Vec<u16>,
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn make_binomial(ord: &BinomialOrder, mut a: Vec<u16>, mut b: Vec<u16>) -> Option<Binomial> {
    // both sides may share a monomial factor; the ideal is prime and
    // contains no monomial, so it can be cancelled
    for k in 0..a.len() {
        let g = a[k].min(b[k]);
        a[k] -= g;
        b[k] -= g;
    }
    match ord.cmp(&a, &b) {
        Ordering::Equal => None,
        Ordering::Greater => Some(Binomial { lead: a, tail: b }),
        Ordering::Less => Some(Binomial { lead: b, tail: a }),
    }
}

fn reduce_binomial(ord: &BinomialOrder, mut f: Binomial, basis: &[Binomial]) -> Option<Binomial> {
    'outer: loop {
        for g in basis {
            if divides(&g.lead, &f.lead) {
                let a: Vec<u16> = f.lead.iter().zip(&g.lead).zip(&g.tail).map(|((x, y), z)| x - y + z).collect();
                f = make_binomial(ord, a, f.tail)?;
                continue 'outer;
            }
        }
        return Some(f);
    }
}

/// Reduced Gröbner basis of the toric elimination ideal, truncated at `cap`;
/// the flag says whether no pair was skipped.
fn toric_relations(leads: &[Monomial], weights: &[u32], nvars: usize, cap: u32) -> (Vec<(Vec<u16>, Vec<u16>)>, bool) {
    let s = leads.len();
    let mut w = weights.to_vec();
    w.extend(std::iter::repeat(1).take(nvars));
    let ord = BinomialOrder { weights: w, s };
    let mut basis: Vec<Binomial> = Vec::new();
    for (i, l) in leads.iter().enumerate() {
        let mut a = vec![0u16; s + nvars];
        a[i] = 1;
        let mut b = vec![0u16; s + nvars];
        for v in 0..nvars {
            b[s + v] = l.exp(v) as u16;
        }
        if let Some(f) = make_binomial(&ord, a, b) {
            if let Some(r) = reduce_binomial(&ord, f, &basis) {
                basis.push(r);
            }
        }
    }
    let mut complete = true;
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let lcm = |a: &[u16], b: &[u16]| -> Vec<u16> { a.iter().zip(b).map(|(x, y)| *x.max(y)).collect() };
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((ord.wdeg(&lcm(&basis[i].lead, &basis[j].lead)), i, j));
        }
    }
    while let Some(&(d, i, j)) = pairs.iter().next() {
        pairs.remove(&(d, i, j));
        if d > cap {
            complete = false;
            continue;
        }
        let (f, g) = (&basis[i], &basis[j]);
        if f.lead.iter().zip(&g.lead).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = lcm(&f.lead, &g.lead);
        let a: Vec<u16> = l.iter().zip(&f.lead).zip(&f.tail).map(|((x, y), z)| x - y + z).collect();
        let b: Vec<u16> = l.iter().zip(&g.lead).zip(&g.tail).map(|((x, y), z)| x - y + z).collect();
        let Some(sp) = make_binomial(&ord, a, b) else { continue };
        if let Some(r) = reduce_binomial(&ord, sp, &basis) {
            basis.push(r);
            let k = basis.len() - 1;
            for i in 0..k {
                pairs.insert((ord.wdeg(&lcm(&basis[i].lead, &basis[k].lead)), i, k));
            }
        }
    }
    let out = basis
        .into_iter()
        .filter(|b| b.lead[s..].iter().all(|&e| e == 0))
        .map(|b| (b.lead[..s].to_vec(), b.tail[..s].to_vec()))
        .collect();
    (out, complete)
}

/// All exponent vectors E with prod LM(b_i)^E_i = m.
fn factorizations(leads: &[Monomial], m: &Monomial) -> Vec<Vec<u32>> {
    fn rec(leads: &[Monomial], m: &Monomial, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if m.is_one() {
            out.push(cur.clone());
            return;
        }
        for i in start..leads.len() {
            if let Some(q) = leads[i].div(m) {
                cur[i] += 1;
                rec(leads, &q, i, cur, out);
                cur[i] -= 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0; leads.len()];
    rec(leads, m, 0, &mut cur, &mut out);
    out
}

fn lead_product(leads: &[Monomial], e: &[u32]) -> Monomial {
    e.iter().zip(leads).fold(Monomial::one(), |acc, (&k, l)| acc.mul(&l.pow(k)))
}

/// Minimal lead-term relations of `gens`, found up to the degree bound
/// `cap`; doubles the bound until the elimination is complete or `max_cap`
/// is passed.
pub fn tete_a_tetes(gens: &[Polynomial], cap: Option<u32>, max_cap: Option<u32>) -> Result<TeteSet> {
    if gens.iter().any(|g| g.is_zero()) {
        return Err(Error::ZeroPolynomial);
    }
    let ring = gens.first().ok_or(Error::ZeroPolynomial)?.ring().clone();
    let leads: Vec<Monomial> = gens.iter().map(|g| g.lm()).collect::<Result<_>>()?;
    if leads.iter().any(|l| l.is_one()) {
        return Err(Error::InvalidParameter("generators must have positive degree".into()));
    }
    let weights: Vec<u32> = leads.iter().map(|l| l.degree()).collect();
    let maxdeg = weights.iter().copied().max().unwrap_or(1);
    let mut bound = cap.unwrap_or(2 * maxdeg);
    let limit = max_cap.unwrap_or(8 * maxdeg).max(bound);
    let (raw, _) = loop {
        let (raw, complete) = toric_relations(&leads, &weights, ring.nvars(), bound);
        if complete {
            break (raw, true);
        }
        if bound >= limit {
            return Err(Error::DegreeBoundExceeded { bound });
        }
        bound = (bound * 2).min(limit);
    };
    // keep a minimal generating set: a relation is redundant when its two
    // sides are already connected in their fiber by the relations kept so far
    let mut rels: Vec<(u32, Vec<u32>, Vec<u32>)> = raw
        .into_iter()
        .map(|(a, b)| {
            let i: Vec<u32> = a.iter().map(|&e| e as u32).collect();
            let j: Vec<u32> = b.iter().map(|&e| e as u32).collect();
            (lead_product(&leads, &i).degree(), i, j)
        })
        .collect();
    rels.sort();
    let mut kept: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    let mut out = Vec::new();
    for (deg, i, j) in rels {
        if connected(&leads, &kept, &i, &j) {
            continue;
        }
        let nontrivial = i.iter().zip(&j).all(|(a, b)| *a == 0 || *b == 0);
        kept.push((i.clone(), j.clone()));
        out.push(TeteATete { i, j, degree: deg, nontrivial });
    }
    Ok(TeteSet { relations: out, bound })
}

fn connected(leads: &[Monomial], moves: &[(Vec<u32>, Vec<u32>)], from: &[u32], to: &[u32]) -> bool {
    if moves.is_empty() {
        return false;
    }
    let fiber: FxHashSet<Vec<u32>> = factorizations(leads, &lead_product(leads, from)).into_iter().collect();
    let mut seen: FxHashSet<Vec<u32>> = FxHashSet::default();
    let mut queue = VecDeque::from([from.to_vec()]);
    seen.insert(from.to_vec());
    while let Some(k) = queue.pop_front() {
        if k == to {
            return true;
        }
        for (p, q) in moves {
            for (a, b) in [(p, q), (q, p)] {
                if a.iter().zip(&k).all(|(x, y)| x <= y) {
                    let next: Vec<u32> = k.iter().zip(a).zip(b).map(|((x, y), z)| x - y + z).collect();
                    if fiber.contains(&next) && seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Subduction

/// Subduction against a fixed generating set, with cached powers.
pub struct Subductor {
    gens: Vec<Polynomial>,
    leads: Vec<Monomial>,
    powers: Vec<Vec<Polynomial>>,
    memo: FxHashMap<Monomial, Option<Vec<u32>>>,
}

/// Result of subduction: f = sum c_k * prod b_i^(E_k,i) + remainder.
#[derive(Clone, Debug)]
pub struct Subduction {
    pub remainder: Polynomial,
    pub steps: Vec<(crate::coeff::Scalar, Vec<u32>)>,
}

impl Subductor {
    pub fn new(gens: &[Polynomial]) -> Result<Self> {
        let gens: Vec<Polynomial> = gens.to_vec();
        let leads = gens.iter().map(|g| g.lm()).collect::<Result<Vec<_>>>()?;
        let powers = gens.iter().map(|g| vec![Polynomial::one(g.ring()), g.clone()]).collect();
        Ok(Subductor { gens, leads, powers, memo: FxHashMap::default() })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    fn factor(&mut self, m: &Monomial) -> Option<Vec<u32>> {
        if let Some(r) = self.memo.get(m) {
            return r.clone();
        }
        let r = if m.is_one() {
            Some(vec![0; self.gens.len()])
        } else {
            let mut found = None;
            for i in 0..self.leads.len() {
                if self.leads[i].is_one() {
                    continue;
                }
                if let Some(q) = self.leads[i].div(m) {
                    if let Some(mut e) = self.factor(&q) {
                        e[i] += 1;
                        found = Some(e);
                        break;
                    }
                }
            }
            found
        };
        self.memo.insert(*m, r.clone());
        r
    }

    fn power(&mut self, i: usize, k: u32) -> Polynomial {
        while self.powers[i].len() <= k as usize {
            let next = self.powers[i].last().unwrap() * &self.gens[i];
            self.powers[i].push(next);
        }
        self.powers[i][k as usize].clone()
    }

    /// prod b_i^(e_i).
    pub fn product(&mut self, e: &[u32]) -> Polynomial {
        let mut acc: Option<Polynomial> = None;
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let p = self.power(i, k);
            acc = Some(match acc {
                None => p,
                Some(a) => &a * &p,
            });
        }
        acc.unwrap_or_else(|| Polynomial::one(self.gens[0].ring()))
    }

    pub fn subduct(&mut self, f: &Polynomial) -> Result<Subduction> {
        if !f.is_homogeneous() {
            return Err(Error::NonHomogeneousMix);
        }
        let mut r = f.clone();
        let mut steps = Vec::new();
        while let Ok((m, c)) = r.leading_term() {
            let Some(e) = self.factor(&m) else { break };
            let p = self.product(&e);
            let coef = c.try_div(&p.lc()?)?;
            r = &r - &p.scale(&coef);
            steps.push((coef, e));
        }
        Ok(Subduction { remainder: r, steps })
    }

    /// Re-expand a subduction record: f - remainder as a polynomial.
    pub fn expand(&mut self, s: &Subduction) -> Polynomial {
        let mut acc = Polynomial::zero(self.gens[0].ring());
        for (c, e) in &s.steps {
            acc = &acc + &self.product(e).scale(c);
        }
        acc
    }

    /// h^I - c h^J with the lead terms cancelled.
    pub fn tete_difference(&mut self, t: &TeteATete) -> Result<Polynomial> {
        let a = self.product(&t.i);
        let b = self.product(&t.j);
        let c = a.lc()?.try_div(&b.lc()?)?;
        Ok(&a - &b.scale(&c))
    }
}

/// Remainder of f after subduction by `gens`.
pub fn subduct(f: &Polynomial, gens: &[Polynomial]) -> Result<Polynomial> {
    Ok(Subductor::new(gens)?.subduct(f)?.remainder)
}

/// Outcome of the SAGBI test.
#[derive(Clone, Debug)]
pub struct SagbiVerdict {
    pub pass: bool,
    pub relations_checked: usize,
    pub bound: u32,
    /// First non-subducting relation and its remainder.
    pub witness: Option<(TeteATete, Polynomial)>,
    /// The remainder with every linear generator factored out: the new
    /// invariant the failure points to.
    pub candidate: Option<Polynomial>,
}

/// Every nontrivial tête-à-tête must subduct to zero.
pub fn sagbi_test(gens: &[Polynomial], cap: Option<u32>, max_cap: Option<u32>) -> Result<SagbiVerdict> {
    let tetes = tete_a_tetes(gens, cap, max_cap)?;
    let mut sub = Subductor::new(gens)?;
    let mut checked = 0;
    for t in tetes.nontrivial() {
        checked += 1;
        let diff = sub.tete_difference(t)?;
        let r = sub.subduct(&diff)?.remainder;
        if !r.is_zero() {
            let mut cand = r.clone();
            for g in gens.iter().filter(|g| g.degree() == Some(1)) {
                cand = strip(&cand, g).1;
            }
            return Ok(SagbiVerdict {
                pass: false,
                relations_checked: checked,
                bound: tetes.bound,
                witness: Some((t.clone(), r)),
                candidate: Some(cand),
            });
        }
    }
    Ok(SagbiVerdict { pass: true, relations_checked: checked, bound: tetes.bound, witness: None, candidate: None })
}

/// One step of the completion log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub relation: String,
    pub remainder_degree: u32,
    pub x_power: u32,
    pub inserted: String,
    pub inserted_name: String,
}

/// Result of the divide-by-x completion.
#[derive(Clone, Debug)]
pub struct Completion {
    pub basis: Vec<NamedInvariant>,
    pub transcript: Vec<TranscriptEntry>,
    pub sweeps: usize,
}

/// Largest k with x^k dividing f, and the quotient.
fn strip(f: &Polynomial, x: &Polynomial) -> (u32, Polynomial) {
    let mut k = 0;
    let mut cur = f.clone();
    if cur.is_zero() {
        return (0, cur);
    }
    while let Ok(q) = cur.exact_div(x) {
        cur = q;
        k += 1;
    }
    (k, cur)
}

/// SAGBI/divide-by-x: subduct every nontrivial tête-à-tête; each nonzero
/// remainder is divided by the largest power of x and added; repeat until
/// nothing new appears or `budget` sweeps have run.
pub fn sagbi_divide_by_x(
    input: &[NamedInvariant],
    x: &Polynomial,
    budget: usize,
    cap: Option<u32>,
    max_cap: Option<u32>,
) -> Result<Completion> {
    let mut basis: Vec<NamedInvariant> = input.to_vec();
    let mut transcript = Vec::new();
    let mut fresh = 0;
    for sweep in 1..=budget {
        let polys: Vec<Polynomial> = basis.iter().map(|b| b.value.clone()).collect();
        let names: Vec<String> = basis.iter().map(|b| b.name.clone()).collect();
        let tetes = tete_a_tetes(&polys, cap, max_cap)?;
        let mut sub = Subductor::new(&polys)?;
        let mut added: Vec<NamedInvariant> = Vec::new();
        for t in tetes.nontrivial() {
            let diff = sub.tete_difference(t)?;
            let r = sub.subduct(&diff)?.remainder;
            if r.is_zero() {
                continue;
            }
            let (k, mut q) = strip(&r, x);
            // keep only what the current set plus this sweep's additions cannot produce
            let mut all: Vec<Polynomial> = polys.clone();
            all.extend(added.iter().map(|a| a.value.clone()));
            loop {
                q = subduct(&q, &all)?;
                let (k2, q2) = strip(&q, x);
                if k2 == 0 || q.is_zero() {
                    break;
                }
                q = q2;
            }
            if q.is_zero() {
                continue;
            }
            let q = q.monic()?;
            fresh += 1;
            let name = format!("g{fresh}");
            transcript.push(TranscriptEntry {
                relation: t.describe(&names),
                remainder_degree: r.degree().unwrap_or(0),
                x_power: k,
                inserted: q.to_string(),
                inserted_name: name.clone(),
            });
            added.push(NamedInvariant::new(name, q));
        }
        if added.is_empty() {
            return Ok(Completion { basis, transcript, sweeps: sweep });
        }
        basis.extend(added);
    }
    Err(Error::BudgetExceeded { steps: budget })
}

/// Same algebra and same size: each set subducts to zero against the other
/// and the counts agree.
pub fn same_generating_set(a: &[Polynomial], b: &[Polynomial]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for (p, q) in [(a, b), (b, a)] {
        let mut s = Subductor::new(q)?;
        for f in p {
            if !s.subduct(f)?.remainder.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Number of distinct monomials of each degree `0..=bound` in the monoid
/// generated by the lead monomials.  For a SAGBI basis this is the Hilbert
/// function of the algebra it generates.
pub fn lead_algebra_dimensions(gens: &[Polynomial], bound: u32) -> Result<Vec<usize>> {
    let mut by_deg: Vec<FxHashSet<Monomial>> = vec![FxHashSet::default(); bound as usize + 1];
    by_deg[0].insert(Monomial::one());
    for g in gens {
        let lead = g.lm()?;
        let e = lead.degree();
        if e == 0 {
            return Err(Error::InvalidParameter("constant generator".into()));
        }
        for d in e..=bound {
            let below: Vec<Monomial> = by_deg[(d - e) as usize].iter().copied().collect();
            for m in below {
                by_deg[d as usize].insert(m.mul(&lead));
            }
        }
    }
    Ok(by_deg.iter().map(|s| s.len()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldDescriptor;
    use crate::poly::Ring;

    #[test]
    fn independent_leads_have_no_relations() {
        let r = Ring::new(&["x1", "y1"], FieldDescriptor::Gf2).unwrap();
        let g = vec![Polynomial::parse("x1", &r).unwrap(), Polynomial::parse("y1^2+x1*y1", &r).unwrap()];
        assert!(tete_a_tetes(&g, None, None).unwrap().relations.is_empty());
    }

    #[test]
    fn twisted_cubic_relations() {
        let r = Ring::new(&["a", "b"], FieldDescriptor::Gf2).unwrap();
        let g: Vec<Polynomial> = ["a^3", "a^2*b", "a*b^2", "b^3"].iter().map(|s| Polynomial::parse(s, &r).unwrap()).collect();
        let t = tete_a_tetes(&g, None, None).unwrap();
        assert_eq!(t.relations.len(), 3);
        assert!(t.relations.iter().all(|t| t.nontrivial && t.degree == 6));
        assert!(sagbi_test(&g, None, None).unwrap().pass);
    }

    #[test]
    fn subduction_of_a_member() {
        let r = Ring::new(&["x", "y"], FieldDescriptor::Gf2).unwrap();
        let g = vec![Polynomial::parse("x", &r).unwrap(), Polynomial::parse("y^2+x*y", &r).unwrap()];
        let f = Polynomial::parse("y^4+x^2*y^2+x^4", &r).unwrap();
        let mut s = Subductor::new(&g).unwrap();
        let out = s.subduct(&f).unwrap();
        assert!(out.remainder.is_zero());
        assert_eq!(s.expand(&out), f);
    }

    #[test]
    fn lead_algebra_of_twisted_cubic() {
        let r = Ring::new(&["a", "b"], FieldDescriptor::Gf2).unwrap();
        let g: Vec<Polynomial> = ["a^3", "a^2*b", "a*b^2", "b^3"].iter().map(|s| Polynomial::parse(s, &r).unwrap()).collect();
        // every monomial of degree divisible by 3
        assert_eq!(lead_algebra_dimensions(&g, 6).unwrap(), vec![1, 0, 0, 4, 0, 0, 7]);
    }
}
