//! Buchberger's algorithm, normal forms, and the hsop / block-hsop / Hilbert
//! ideal checks built on them.

use std::collections::BTreeSet;

use crate::construct::{HsopSpec, NamedInvariant};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::rep::Representation;

/// A Gröbner basis under the grevlex order of the ambient ring.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub generators: Vec<Polynomial>,
    pub reduced: bool,
}

impl GroebnerBasis {
    pub fn lead_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().map(|g| g.lm().expect("nonzero generator")).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        normal_form(f, &self.generators)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }
}

/// Fully reduce f modulo the given polynomials (all terms, not only the lead).
pub fn normal_form(f: &Polynomial, gens: &[Polynomial]) -> Polynomial {
    normal_form_with_record(f, gens).0
}

/// Normal form together with the division record: f = sum q_i g_i + r.
pub fn normal_form_with_record(f: &Polynomial, gens: &[Polynomial]) -> (Polynomial, Vec<Polynomial>) {
    let ring = f.ring().clone();
    let leads: Vec<(Monomial, crate::coeff::Scalar)> =
        gens.iter().map(|g| g.leading_term().expect("zero polynomial in basis")).collect();
    let inv: Vec<_> = leads.iter().map(|(_, c)| c.inv().expect("nonzero lead coefficient")).collect();
    let mut quotients: Vec<Vec<(Monomial, crate::coeff::Scalar)>> = vec![Vec::new(); gens.len()];
    let mut p = f.clone();
    let mut rem = Vec::new();
    while let Ok((m, c)) = p.leading_term() {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let t = leads[i].0.div(&m).unwrap();
                let coef = &c * &inv[i];
                p = &p - &gens[i].mul_term(&t, &coef);
                quotients[i].push((t, coef));
            }
            None => {
                rem.push((m, c));
                let terms = p.terms()[1..].to_vec();
                p = Polynomial::from_terms(&ring, terms);
            }
        }
    }
    let r = Polynomial::from_terms(&ring, rem);
    let q = quotients.into_iter().map(|t| Polynomial::from_terms(&ring, t)).collect();
    (r, q)
}

fn s_polynomial(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let (mf, cf) = f.leading_term().unwrap();
    let (mg, cg) = g.leading_term().unwrap();
    let l = mf.lcm(&mg);
    let a = f.mul_term(&mf.div(&l).unwrap(), &cf.inv().unwrap());
    let b = g.mul_term(&mg.div(&l).unwrap(), &cg.inv().unwrap());
    &a - &b
}

/// True when every S-polynomial of the set reduces to zero modulo the set.
pub fn is_groebner(gens: &[Polynomial]) -> bool {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let (a, b) = (gens[i].lm().unwrap(), gens[j].lm().unwrap());
            if a.is_coprime(&b) {
                continue;
            }
            if !normal_form(&s_polynomial(&gens[i], &gens[j]), gens).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Buchberger's algorithm with the normal selection strategy and the coprime
/// criterion, followed by inter-reduction to the reduced basis.
pub fn buchberger(gens: &[Polynomial]) -> Result<GroebnerBasis> {
    let mut basis: Vec<Polynomial> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.monic()?);
        }
    }
    if basis.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let add_pairs = |basis: &Vec<Polynomial>, pairs: &mut BTreeSet<(u32, usize, usize)>, j: usize| {
        for i in 0..j {
            let l = basis[i].lm().unwrap().lcm(&basis[j].lm().unwrap());
            pairs.insert((l.degree(), i, j));
        }
    };
    for j in 0..basis.len() {
        add_pairs(&basis, &mut pairs, j);
    }
    while let Some(&(d, i, j)) = pairs.iter().next() {
        pairs.remove(&(d, i, j));
        let (a, b) = (basis[i].lm()?, basis[j].lm()?);
        if a.is_coprime(&b) {
            continue;
        }
        let r = normal_form(&s_polynomial(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            basis.push(r.monic()?);
            add_pairs(&basis, &mut pairs, basis.len() - 1);
        }
    }
    Ok(GroebnerBasis { generators: reduce_basis(basis)?, reduced: true })
}

fn reduce_basis(mut basis: Vec<Polynomial>) -> Result<Vec<Polynomial>> {
    // drop elements whose lead monomial is divisible by another's
    basis.sort_by_key(|a| a.lm().unwrap());
    let mut minimal: Vec<Polynomial> = Vec::new();
    for g in basis {
        let lm = g.lm()?;
        if !minimal.iter().any(|h| h.lm().unwrap().divides(&lm)) {
            minimal.retain(|h| !lm.divides(&h.lm().unwrap()));
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p.clone()).collect();
        let (lm, lc) = minimal[i].leading_term()?;
        let tail = &minimal[i] - &Polynomial::term(minimal[i].ring(), lm, lc.clone());
        let r = &Polynomial::term(minimal[i].ring(), lm, lc) + &normal_form(&tail, &others);
        out.push(r.monic()?);
    }
    out.sort_by_key(|a| std::cmp::Reverse(a.lm().unwrap()));
    Ok(out)
}

/// Outcome of the hsop check.
#[derive(Clone, Debug)]
pub struct HsopVerdict {
    pub pass: bool,
    /// Variables with no pure power among the Gröbner lead monomials.
    pub missing: Vec<String>,
}

/// Zero-dimensionality of the ideal generated by the elements, read off the
/// lead monomials of its Gröbner basis.
pub fn is_hsop(elements: &[Polynomial]) -> Result<HsopVerdict> {
    let ring = elements.first().ok_or(Error::ZeroPolynomial)?.ring().clone();
    if elements.len() != ring.nvars() {
        return Ok(HsopVerdict { pass: false, missing: vec!["wrong number of elements".into()] });
    }
    let gb = buchberger(elements)?;
    let leads = gb.lead_monomials();
    let mut missing = Vec::new();
    for v in 0..ring.nvars() {
        let pure = leads.iter().any(|m| m.exp(v) > 0 && (0..ring.nvars()).all(|k| k == v || m.exp(k) == 0));
        if !pure {
            missing.push(ring.vars.name(v).to_string());
        }
    }
    Ok(HsopVerdict { pass: missing.is_empty(), missing })
}

/// Monomials not divisible by any of the given lead monomials; `None` when
/// the set is infinite (detected by exceeding `limit`).
pub fn standard_monomials(leads: &[Monomial], nvars: usize, limit: usize) -> Option<Vec<Monomial>> {
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut frontier = vec![Monomial::one()];
    if leads.iter().any(|l| l.is_one()) {
        return Some(Vec::new());
    }
    seen.insert(Monomial::one());
    while let Some(m) = frontier.pop() {
        for v in 0..nvars {
            let next = m.mul(&Monomial::var(v));
            if seen.contains(&next) || leads.iter().any(|l| l.divides(&next)) {
                continue;
            }
            seen.insert(next);
            if seen.len() > limit {
                return None;
            }
            frontier.push(next);
        }
    }
    Some(seen.into_iter().collect())
}

/// Outcome of the block-hsop check.
#[derive(Clone, Debug)]
pub struct BlockVerdict {
    pub is_groebner: bool,
    pub top_class: Option<Monomial>,
    pub matches_claim: bool,
}

impl BlockVerdict {
    pub fn pass(&self) -> bool {
        self.is_groebner && self.top_class.is_some() && self.matches_claim
    }
}

/// The elements must be a Gröbner basis of the ideal they generate and the
/// reduced monomials must be exactly the divisors of one monomial beta.
pub fn is_block_hsop(elements: &[Polynomial], claimed: Option<&Monomial>) -> Result<BlockVerdict> {
    let ring = elements.first().ok_or(Error::ZeroPolynomial)?.ring().clone();
    let is_gb = is_groebner(elements);
    let leads: Vec<Monomial> = elements.iter().map(|e| e.lm()).collect::<Result<_>>()?;
    let top = if is_gb { block_top_class(&leads, ring.nvars()) } else { None };
    let matches_claim = match (claimed, &top) {
        (Some(c), Some(t)) => c == t,
        (None, Some(_)) => true,
        _ => false,
    };
    Ok(BlockVerdict { is_groebner: is_gb, top_class: top, matches_claim })
}

/// The unique maximal standard monomial, provided the standard monomials are
/// exactly its divisors.
pub fn block_top_class(leads: &[Monomial], nvars: usize) -> Option<Monomial> {
    let std = standard_monomials(leads, nvars, 1 << 20)?;
    let mut beta = Monomial::one();
    for m in &std {
        beta = beta.lcm(m);
    }
    let count: usize = (0..nvars).map(|i| beta.exp(i) as usize + 1).product();
    if count == std.len() && std.contains(&beta) {
        Some(beta)
    } else {
        None
    }
}

impl HsopSpec {
    pub fn check_block(&self) -> Result<BlockVerdict> {
        is_block_hsop(&self.polys(), Some(&self.top_class))
    }
}

/// Outcome of a Hilbert ideal comparison.
#[derive(Clone, Debug)]
pub struct HilbertVerdict {
    pub pass: bool,
    /// Name of a generator that is not invariant, if any.
    pub non_invariant: Option<String>,
    /// Degree and text of an invariant outside the ideal, if any.
    pub witness: Option<(u32, Polynomial)>,
    pub degrees_checked: u32,
}

/// Checks that the given invariants generate the Hilbert ideal: each is
/// invariant, and every invariant of positive degree at most `bound`
/// reduces to zero modulo their Gröbner basis.
pub fn hilbert_ideal_equals(
    rep: &Representation,
    gens: &[NamedInvariant],
    bound: u32,
) -> Result<HilbertVerdict> {
    let mut oracle = crate::oracle::Oracle::new(rep)?;
    hilbert_ideal_equals_in(&mut oracle, gens, bound)
}

/// As [`hilbert_ideal_equals`], reusing the invariant bases cached in `oracle`.
pub fn hilbert_ideal_equals_in(
    oracle: &mut crate::oracle::Oracle,
    gens: &[NamedInvariant],
    bound: u32,
) -> Result<HilbertVerdict> {
    let rep = oracle.representation().clone();
    let rep = &rep;
    for g in gens {
        if !rep.is_invariant(&g.value)? {
            return Ok(HilbertVerdict { pass: false, non_invariant: Some(g.name.clone()), witness: None, degrees_checked: 0 });
        }
    }
    let polys: Vec<Polynomial> = gens.iter().map(|g| g.value.clone()).collect();
    let gb = buchberger(&polys)?;
    let leads = gb.lead_monomials();
    // above the top standard monomial every polynomial reduces to zero
    let top = standard_monomials(&leads, rep.nvars(), 1 << 20)
        .map(|s| s.iter().map(|m| m.degree()).max().unwrap_or(0));
    for d in 1..=bound {
        if top.is_some_and(|t| d > t) {
            break;
        }
        let basis = oracle.invariant_basis(d)?;
        for f in basis {
            let r = gb.normal_form(&f);
            if !r.is_zero() {
                return Ok(HilbertVerdict { pass: false, non_invariant: None, witness: Some((d, f)), degrees_checked: d });
            }
        }
    }
    Ok(HilbertVerdict { pass: true, non_invariant: None, witness: None, degrees_checked: bound })
}
