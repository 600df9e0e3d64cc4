//! Sparse multivariate polynomials under graded reverse lexicographic order.
//!
//! Variables are listed smallest first.  Monomials are compared by total
//! degree; ties are broken at the smallest-index variable where the exponents
//! differ, and the monomial with the smaller exponent there is the larger one.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::coeff::{FieldDescriptor, Scalar};
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 16;

/// Ordered variable names, smallest variable first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableList {
    names: Vec<String>,
}

impl VariableList {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.len() > MAX_VARS {
            return Err(Error::InvalidParameter(format!("at most {MAX_VARS} variables")));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || !n.chars().next().unwrap().is_ascii_alphabetic() {
                return Err(Error::InvalidParameter(format!("bad variable name '{n}'")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidParameter(format!("duplicate variable '{n}'")));
            }
        }
        Ok(VariableList { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Ambient data shared by polynomials that may be combined.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub vars: VariableList,
    pub field: FieldDescriptor,
}

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S], field: FieldDescriptor) -> Result<Arc<Ring>> {
        Ok(Arc::new(Ring { vars: VariableList::new(names)?, field }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Same variables over another field.
    pub fn with_field(&self, field: FieldDescriptor) -> Arc<Ring> {
        Arc::new(Ring { vars: self.vars.clone(), field })
    }
}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> Result<()> {
    if Arc::ptr_eq(a, b) {
        return Ok(());
    }
    if a.vars != b.vars {
        return Err(Error::MixedAmbient);
    }
    if a.field != b.field {
        return Err(Error::MixedFields(a.field.to_string(), b.field.to_string()));
    }
    Ok(())
}

/// Exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial {
    e: [u8; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(i: usize) -> Self {
        let mut m = Monomial::default();
        m.e[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Monomial::default();
        for (i, &x) in exps.iter().enumerate() {
            m.e[i] = u8::try_from(x).expect("exponent exceeds 255");
        }
        m
    }

    pub fn exponents(&self) -> &[u8; MAX_VARS] {
        &self.e
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn set_exp(&mut self, i: usize, v: u32) {
        self.e[i] = u8::try_from(v).expect("exponent exceeds 255");
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.e.iter().map(|&x| x as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.e[i] += o.e[i];
        }
        r
    }

    pub fn pow(&self, k: u32) -> Monomial {
        let mut r = *self;
        for x in r.e.iter_mut() {
            *x = u8::try_from(*x as u32 * k).expect("exponent exceeds 255");
        }
        r
    }

    #[inline]
    pub fn divides(&self, o: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.e[i] <= o.e[i])
    }

    /// `o / self` when `self` divides `o`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if !self.divides(o) {
            return None;
        }
        let mut r = *o;
        for i in 0..MAX_VARS {
            r.e[i] -= self.e[i];
        }
        Some(r)
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.e[i] = r.e[i].max(o.e[i]);
        }
        r
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut r = *self;
        for i in 0..MAX_VARS {
            r.e[i] = r.e[i].min(o.e[i]);
        }
        r
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.e[i] == 0 || o.e[i] == 0)
    }

    /// Text form such as "x1^2*y3"; "1" for the empty monomial.
    pub fn format(&self, vars: &VariableList) -> String {
        let mut parts = Vec::new();
        for i in 0..vars.len() {
            match self.e[i] {
                0 => {}
                1 => parts.push(vars.name(i).to_string()),
                k => parts.push(format!("{}^{k}", vars.name(i))),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        let d = self.degree().cmp(&o.degree());
        if d != Ordering::Equal {
            return d;
        }
        for i in 0..MAX_VARS {
            if self.e[i] != o.e[i] {
                return o.e[i].cmp(&self.e[i]);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial with terms kept in strictly decreasing monomial order.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Scalar)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, o: &Self) -> bool {
        self.ring.vars == o.ring.vars && self.ring.field == o.ring.field && self.terms == o.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Scalar) -> Self {
        Self::term(ring, Monomial::one(), c)
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Scalar) -> Self {
        assert_eq!(c.field(), ring.field, "coefficient from a foreign field");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial) -> Self {
        Self::term(ring, m, ring.field.one())
    }

    pub fn var(ring: &Arc<Ring>, name: &str) -> Result<Self> {
        let i = ring
            .vars
            .index_of(name)
            .ok_or_else(|| Error::InvalidParameter(format!("no variable named '{name}'")))?;
        Ok(Self::monomial(ring, Monomial::var(i)))
    }

    pub fn var_at(ring: &Arc<Ring>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(i))
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(ring: &Arc<Ring>, it: I) -> Self {
        let mut acc: FxHashMap<Monomial, Scalar> = FxHashMap::default();
        for (m, c) in it {
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: FxHashMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<(Monomial, Scalar)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Polynomial { ring: ring.clone(), terms }
    }


    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> FieldDescriptor {
        self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => self.ring.field.zero(),
        }
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search_by(|(t, _)| m.cmp(t)).is_ok()
    }

    pub fn leading_term(&self) -> Result<(Monomial, Scalar)> {
        self.terms.first().cloned().ok_or(Error::ZeroPolynomial)
    }

    pub fn lm(&self) -> Result<Monomial> {
        self.terms.first().map(|t| t.0).ok_or(Error::ZeroPolynomial)
    }

    pub fn lc(&self) -> Result<Scalar> {
        self.terms.first().map(|t| t.1.clone()).ok_or(Error::ZeroPolynomial)
    }

    /// Largest total degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|(t, _)| t.degree() == m.degree()),
        }
    }

    /// Degree-`d` homogeneous component.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.degree() == d).cloned().collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn try_add(&self, o: &Polynomial) -> Result<Polynomial> {
        same_ring(&self.ring, &o.ring)?;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Polynomial { ring: self.ring.clone(), terms: out })
    }

    pub fn try_mul(&self, o: &Polynomial) -> Result<Polynomial> {
        same_ring(&self.ring, &o.ring)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        if o.terms.len() == 1 {
            return Ok(self.mul_term(&o.terms[0].0, &o.terms[0].1));
        }
        if self.terms.len() == 1 {
            return Ok(o.mul_term(&self.terms[0].0, &self.terms[0].1));
        }
        let mut acc: FxHashMap<Monomial, Scalar> = FxHashMap::default();
        acc.reserve(self.terms.len() * o.terms.len() / 2);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.ring, acc))
    }

    /// Multiply by c * m; order is preserved since the order is multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(t, d)| (t.mul(m), d * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        self.mul_term(&Monomial::one(), c)
    }

    /// Square via the Frobenius map, valid in characteristic two.
    pub fn square(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.pow(2), c * c)).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn monic(&self) -> Result<Polynomial> {
        let lc = self.lc()?;
        Ok(self.scale(&lc.inv()?))
    }

    /// Exact quotient `self / d`; fails with `NotDivisible` carrying the remainder.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial> {
        same_ring(&self.ring, &d.ring)?;
        let (lm, lc) = d.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut r = self.clone();
        let mut q = Vec::new();
        let mut rem = Vec::new();
        while let Some((m, c)) = r.terms.first().cloned() {
            match lm.div(&m) {
                Some(t) => {
                    let coef = &c * &lc_inv;
                    r = &r + &d.mul_term(&t, &coef);
                    q.push((t, coef));
                }
                None => {
                    rem.push((m, c));
                    r.terms.remove(0);
                }
            }
        }
        if !rem.is_empty() {
            let rem = Polynomial::from_terms(&self.ring, rem);
            return Err(Error::NotDivisible { remainder: rem.to_string() });
        }
        Ok(Polynomial::from_terms(&self.ring, q))
    }

    /// Division by `n`, whose highest power of variable `k` has a constant
    /// coefficient: self = q*n + r with deg_k r < deg_k n.
    pub fn monic_divide(&self, n: &Polynomial, k: usize) -> Result<(Polynomial, Polynomial)> {
        same_ring(&self.ring, &n.ring)?;
        let name = || Error::NotMonicInVariable(self.ring.vars.name(k).to_string());
        let e = n.terms.iter().map(|(m, _)| m.exp(k)).max().ok_or(Error::ZeroPolynomial)?;
        let top: Vec<_> = n.terms.iter().filter(|(m, _)| m.exp(k) == e).collect();
        if e == 0 || top.len() != 1 || top[0].0.degree() != e {
            return Err(name());
        }
        let a_inv = top[0].1.inv()?;
        let lead = Monomial::var(k).pow(e);
        let mut q = Polynomial::zero(&self.ring);
        let mut r = self.clone();
        loop {
            let d = r.terms.iter().map(|(m, _)| m.exp(k)).max().unwrap_or(0);
            if r.is_zero() || d < e {
                break;
            }
            let part = r
                .terms
                .iter()
                .filter(|(m, _)| m.exp(k) == d)
                .map(|(m, c)| (lead.div(m).unwrap(), c * &a_inv));
            let t = Polynomial::from_terms(&self.ring, part.collect::<Vec<_>>());
            r = &r - &(&t * n);
            q = &q + &t;
        }
        Ok((q, r))
    }

    /// Divide by a monomial, failing if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, c) in &self.terms {
            match m.div(t) {
                Some(q) => terms.push((q, c.clone())),
                None => return Err(Error::NotDivisible { remainder: self.to_string() }),
            }
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    /// Replace variable i by `images[i]` for every i.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        for p in images {
            same_ring(&self.ring, &p.ring)?;
        }
        let mut cache = PowerCache::new(images);
        let mut acc: FxHashMap<Monomial, Scalar> = FxHashMap::default();
        for (m, c) in &self.terms {
            let img = cache.monomial_image(m);
            for (t, d) in img.terms() {
                let v = c * d;
                match acc.get_mut(t) {
                    Some(x) => *x = &*x + &v,
                    None => {
                        acc.insert(*t, v);
                    }
                }
            }
        }
        Ok(Self::from_map(&self.ring, acc))
    }

    /// Apply `f` to every coefficient, landing in `ring`.
    pub fn map_coefficients<F>(&self, ring: &Arc<Ring>, f: F) -> Result<Polynomial>
    where
        F: Fn(&Scalar) -> Result<Scalar>,
    {
        if ring.vars != self.ring.vars {
            return Err(Error::MixedAmbient);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let v = f(c)?;
            if v.field() != ring.field {
                return Err(Error::MixedFields(v.field().to_string(), ring.field.to_string()));
            }
            if !v.is_zero() {
                terms.push((*m, v));
            }
        }
        Ok(Polynomial { ring: ring.clone(), terms })
    }

    /// Substitute a finite-field value for l in every coefficient.
    pub fn evaluate_lambda(&self, value: &Scalar) -> Result<Polynomial> {
        let ring = self.ring.with_field(value.field());
        self.map_coefficients(&ring, |c| c.evaluate_lambda(value))
    }

    /// Largest k with `m^k` dividing every term (`u32::MAX` for zero).
    pub fn max_power_dividing(&self, m: &Monomial) -> u32 {
        let mut best = u32::MAX;
        for (t, _) in &self.terms {
            let mut k = 0;
            let mut cur = *m;
            while cur.divides(t) {
                k += 1;
                cur = cur.mul(m);
            }
            best = best.min(k);
        }
        best
    }

    pub fn parse(text: &str, ring: &Arc<Ring>) -> Result<Polynomial> {
        Parser { s: text.as_bytes(), text, pos: 0, ring }.parse_sum()
    }
}

/// Memoised powers of substitution images.
pub struct PowerCache<'a> {
    images: &'a [Polynomial],
    powers: Vec<Vec<Polynomial>>,
}

impl<'a> PowerCache<'a> {
    pub fn new(images: &'a [Polynomial]) -> Self {
        let powers = images.iter().map(|p| vec![Polynomial::one(p.ring())]).collect();
        PowerCache { images, powers }
    }

    pub fn power(&mut self, i: usize, e: usize) -> &Polynomial {
        while self.powers[i].len() <= e {
            let next = &self.powers[i][self.powers[i].len() - 1] * &self.images[i];
            self.powers[i].push(next);
        }
        &self.powers[i][e]
    }

    pub fn monomial_image(&mut self, m: &Monomial) -> Polynomial {
        let ring = self.images[0].ring().clone();
        let mut acc = Polynomial::one(&ring);
        for i in 0..self.images.len() {
            let e = m.exp(i) as usize;
            if e > 0 {
                acc = &acc * self.power(i, e);
            }
        }
        acc
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("polynomial addition across rings")
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self.try_add(o).expect("polynomial subtraction across rings")
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        self.try_mul(o).expect("polynomial multiplication across rings")
    }
}

fn coefficient_text(c: &Scalar) -> String {
    let s = c.to_string();
    if s.contains('+') || s.contains('/') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if m.is_one() {
                write!(f, "{}", coefficient_text(c))?;
            } else if c.is_one() {
                write!(f, "{}", m.format(&self.ring.vars))?;
            } else {
                write!(f, "{}*{}", coefficient_text(c), m.format(&self.ring.vars))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    text: &'a str,
    pos: usize,
    ring: &'a Arc<Ring>,
}

impl Parser<'_> {
    fn err(&self, pos: usize, m: impl Into<String>) -> Error {
        Error::Parse { column: pos + 1, message: m.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn parse_sum(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        loop {
            let t = self.parse_term()?;
            acc = &acc + &t;
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') | Some(b'-') => self.pos += 1,
                Some(c) => return Err(self.err(self.pos, format!("unexpected character '{}'", c as char))),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Polynomial> {
        let mut m = Monomial::one();
        let mut c = self.ring.field.one();
        loop {
            match self.peek() {
                None => return Err(self.err(self.pos, "expected a factor")),
                Some(b'(') => {
                    let start = self.pos;
                    let mut depth = 0;
                    while self.pos < self.s.len() {
                        match self.s[self.pos] {
                            b'(' => depth += 1,
                            b')' => {
                                depth -= 1;
                                if depth == 0 {
                                    break;
                                }
                            }
                            _ => {}
                        }
                        self.pos += 1;
                    }
                    if self.pos >= self.s.len() {
                        return Err(self.err(start, "unbalanced parenthesis"));
                    }
                    let inner = &self.text[start + 1..self.pos];
                    self.pos += 1;
                    let v = Scalar::parse_at(inner, self.ring.field, start + 1)?;
                    c = &c * &v;
                }
                Some(ch) if ch.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let n: u64 = self.text[start..self.pos].parse().map_err(|_| self.err(start, "bad integer"))?;
                    if n % 2 == 0 {
                        c = self.ring.field.zero();
                    }
                }
                Some(ch) if ch.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                        self.pos += 1;
                    }
                    let name = &self.text[start..self.pos];
                    let mut e = 1u32;
                    if self.pos < self.s.len() && self.s[self.pos] == b'^' {
                        let caret = self.pos;
                        self.pos += 1;
                        let ds = self.pos;
                        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                            self.pos += 1;
                        }
                        if ds == self.pos {
                            return Err(self.err(caret, "missing exponent"));
                        }
                        e = self.text[ds..self.pos].parse().map_err(|_| self.err(ds, "exponent out of range"))?;
                    }
                    if let Some(i) = self.ring.vars.index_of(name) {
                        let total = m.exp(i) + e;
                        if total > 255 {
                            return Err(self.err(start, "exponent out of range"));
                        }
                        m.set_exp(i, total);
                    } else {
                        let atom = if e == 1 { name.to_string() } else { format!("{name}^{e}") };
                        let v = Scalar::parse_at(&atom, self.ring.field, start)
                            .map_err(|_| self.err(start, format!("unknown symbol '{name}'")))?;
                        c = &c * &v;
                    }
                }
                Some(ch) => return Err(self.err(self.pos, format!("unexpected character '{}'", ch as char))),
            }
            match self.peek() {
                Some(b'*') => self.pos += 1,
                _ => return Ok(Polynomial::term(self.ring, m, c)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::new(&["x1", "x2", "x3", "y1", "y2", "y3"], FieldDescriptor::Gf2).unwrap()
    }

    #[test]
    fn grevlex_prefers_smaller_exponent_of_smallest_variable() {
        let r = ring();
        let a = Polynomial::parse("y1*x2*x3", &r).unwrap().lm().unwrap();
        let b = Polynomial::parse("x1*y2*y3", &r).unwrap().lm().unwrap();
        assert!(a > b);
        let p = Polynomial::parse("x1*y1^2+x2^3*y1+x1^2*y2^2", &r).unwrap();
        assert_eq!(p.lm().unwrap().format(&r.vars), "x2^3*y1");
    }

    #[test]
    fn parse_error_column() {
        let r = ring();
        assert_eq!(
            Polynomial::parse("y1^", &r).unwrap_err(),
            Error::Parse { column: 3, message: "missing exponent".into() }
        );
    }

    #[test]
    fn exact_division_round_trip() {
        let r = ring();
        let a = Polynomial::parse("x1*y2+x2*y1+y3^2", &r).unwrap();
        let b = Polynomial::parse("x1+x3*y1", &r).unwrap();
        let p = &a * &b;
        assert_eq!(p.exact_div(&b).unwrap(), a);
        assert!(matches!(a.exact_div(&b), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn coefficients_print_and_parse() {
        let r = Ring::new(&["x", "y"], FieldDescriptor::RationalFunction).unwrap();
        let p = Polynomial::parse("((l^2+l)/1)*x*y+(l/1)*y^2+x^2", &r).unwrap();
        let again = Polynomial::parse(&p.to_string(), &r).unwrap();
        assert_eq!(p, again);
        let r4 = Ring::new(&["x", "y"], FieldDescriptor::Gf2k(2)).unwrap();
        let p = Polynomial::parse("(t+1)*x*y+t*y^2", &r4).unwrap();
        assert_eq!(p.to_string(), "t*y^2+(t+1)*x*y");
    }
}
