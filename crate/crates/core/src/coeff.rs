//! Coefficient fields of characteristic two: GF(2), GF(2^k) for k <= 8, and the
//! rational function field F_2(l) in one indeterminate.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Defining polynomials of GF(2^k), as bit masks (bit i = coefficient of t^i).
const MODULI: [u16; 9] = [
    0, 0b11, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10000011, 0x11B,
];

/// Which field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Gf2,
    Gf2k(u8),
    RationalFunction,
}

impl FieldDescriptor {
    pub fn gf2k(k: u8) -> Result<Self> {
        if k == 0 || k > 8 {
            return Err(Error::UnsupportedField(format!("GF(2^{k})")));
        }
        Ok(FieldDescriptor::Gf2k(k))
    }

    pub fn zero(self) -> Scalar {
        match self {
            FieldDescriptor::Gf2 => Scalar::Gf2(false),
            FieldDescriptor::Gf2k(k) => Scalar::Gf2k { k, bits: 0 },
            FieldDescriptor::RationalFunction => Scalar::Rational(RatFn::zero()),
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldDescriptor::Gf2 => Scalar::Gf2(true),
            FieldDescriptor::Gf2k(k) => Scalar::Gf2k { k, bits: 1 },
            FieldDescriptor::RationalFunction => Scalar::Rational(RatFn::one()),
        }
    }

    /// Number of elements, `None` for the infinite field.
    pub fn order(self) -> Option<usize> {
        match self {
            FieldDescriptor::Gf2 => Some(2),
            FieldDescriptor::Gf2k(k) => Some(1 << k),
            FieldDescriptor::RationalFunction => None,
        }
    }

    /// Element with the given bit pattern (finite fields only).
    pub fn element(self, bits: u8) -> Scalar {
        match self {
            FieldDescriptor::Gf2 => Scalar::Gf2(bits & 1 == 1),
            FieldDescriptor::Gf2k(k) => Scalar::Gf2k { k, bits: reduce_gf(k, bits as u16) },
            FieldDescriptor::RationalFunction => panic!("element() on the rational function field"),
        }
    }

    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        Scalar::parse(text, self)
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Gf2 => write!(f, "GF(2)"),
            FieldDescriptor::Gf2k(k) => write!(f, "GF(2^{k})"),
            FieldDescriptor::RationalFunction => write!(f, "F_2(l)"),
        }
    }
}

// ---------------------------------------------------------------------------
// GF(2^k)

struct GfTables {
    q: usize,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

static GF_TABLES: [OnceLock<GfTables>; 9] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

fn clmul_small(a: u16, b: u16) -> u32 {
    let mut r = 0u32;
    for i in 0..16 {
        if (a >> i) & 1 == 1 {
            r ^= (b as u32) << i;
        }
    }
    r
}

fn reduce_gf(k: u8, v: u16) -> u8 {
    reduce_wide(k, v as u32)
}

fn reduce_wide(k: u8, mut v: u32) -> u8 {
    let m = MODULI[k as usize] as u32;
    for bit in (k as u32..32).rev() {
        if (v >> bit) & 1 == 1 {
            v ^= m << (bit - k as u32);
        }
    }
    v as u8
}

/// True when the defining polynomial of GF(2^k) is irreducible over F_2.
pub fn modulus_is_irreducible(k: u8) -> bool {
    let m = Gf2Poly::from_bits(MODULI[k as usize] as u64);
    for d in 1..=(k as u64 / 2) {
        for low in 0..(1u64 << d) {
            let f = Gf2Poly::from_bits((1 << d) | low);
            if m.rem(&f).is_zero() {
                return false;
            }
        }
    }
    true
}

fn gf_tables(k: u8) -> &'static GfTables {
    GF_TABLES[k as usize].get_or_init(|| {
        assert!(modulus_is_irreducible(k), "modulus of GF(2^{k}) is reducible");
        let q = 1usize << k;
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                mul[a * q + b] = reduce_wide(k, clmul_small(a as u16, b as u16));
            }
        }
        let mut inv = vec![0u8; q];
        for a in 1..q {
            for b in 1..q {
                if mul[a * q + b] == 1 {
                    inv[a] = b as u8;
                    break;
                }
            }
        }
        GfTables { q, mul, inv }
    })
}

/// Product in GF(2^k) of two bit patterns.
#[inline]
pub fn gf_mul(k: u8, a: u8, b: u8) -> u8 {
    let t = gf_tables(k);
    t.mul[a as usize * t.q + b as usize]
}

/// Inverse in GF(2^k); `a` must be nonzero.
#[inline]
pub fn gf_inv(k: u8, a: u8) -> u8 {
    gf_tables(k).inv[a as usize]
}

/// Full multiplication table of GF(2^k), row-major.
pub fn gf_mul_table(k: u8) -> &'static [u8] {
    &gf_tables(k).mul
}

/// Inverse table of GF(2^k) (entry 0 is 0).
pub fn gf_inv_table(k: u8) -> &'static [u8] {
    &gf_tables(k).inv
}

// ---------------------------------------------------------------------------
// F_2[l]

/// Polynomial over F_2 stored as little-endian bit limbs.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Gf2Poly {
    limbs: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { limbs: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly { limbs: vec![1] }
    }

    /// The indeterminate l.
    pub fn var() -> Self {
        Gf2Poly { limbs: vec![2] }
    }

    pub fn from_bits(bits: u64) -> Self {
        let mut p = Gf2Poly { limbs: vec![bits] };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs.len() == 1 && self.limbs[0] == 1
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some((self.limbs.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.limbs.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    fn flip(&mut self, i: usize) {
        if self.limbs.len() <= i / 64 {
            self.limbs.resize(i / 64 + 1, 0);
        }
        self.limbs[i / 64] ^= 1 << (i % 64);
        self.trim();
    }

    fn xor_shifted(&mut self, other: &Gf2Poly, shift: usize) {
        if other.is_zero() {
            return;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let need = other.limbs.len() + ws + 1;
        if self.limbs.len() < need {
            self.limbs.resize(need, 0);
        }
        for (i, &w) in other.limbs.iter().enumerate() {
            self.limbs[i + ws] ^= w << bs;
            if bs != 0 {
                self.limbs[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        self.trim();
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut r = self.clone();
        r.xor_shifted(other, 0);
        r
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let (a, b) = if self.limbs.len() <= other.limbs.len() { (self, other) } else { (other, self) };
        let mut r = Gf2Poly::zero();
        let Some(da) = a.degree() else { return r };
        for i in 0..=da {
            if a.bit(i) {
                r.xor_shifted(b, i);
            }
        }
        r
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut q = Gf2Poly::zero();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            q.flip(dr - dd);
            r.xor_shifted(d, dr - dd);
        }
        (q, r)
    }

    pub fn rem(&self, d: &Gf2Poly) -> Gf2Poly {
        self.divrem(d).1
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Value at an element of GF(2^k) given by its bit pattern.
    pub fn eval_gf(&self, k: u8, v: u8) -> u8 {
        let Some(d) = self.degree() else { return 0 };
        let mut acc = 0u8;
        for i in (0..=d).rev() {
            acc = gf_mul(k, acc, v) ^ (self.bit(i) as u8);
        }
        acc
    }

    fn write_in(&self, f: &mut fmt::Formatter<'_>, var: char) -> fmt::Result {
        let Some(d) = self.degree() else { return write!(f, "0") };
        let mut first = true;
        for i in (0..=d).rev() {
            if !self.bit(i) {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "{var}")?,
                _ => write!(f, "{var}^{i}")?,
            }
        }
        Ok(())
    }

    fn term_count(&self) -> u32 {
        self.limbs.iter().map(|w| w.count_ones()).sum()
    }
}

/// Parse a sum of powers of `var` (e.g. "l^2+l+1") starting at byte `offset`
/// of the enclosing text; columns in errors are 1-based in that text.
fn parse_upoly(s: &str, var: char, offset: usize) -> Result<Gf2Poly> {
    let err = |pos: usize, m: &str| Error::Parse { column: offset + pos + 1, message: m.to_string() };
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut p = Gf2Poly::zero();
    let mut i = 0;
    loop {
        if i >= bytes.len() {
            return Err(err(i, "expected a term"));
        }
        let c = bytes[i] as char;
        if c == var {
            i += 1;
            let mut e = 1usize;
            if i < bytes.len() && bytes[i] == b'^' {
                let caret = i;
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(err(caret, "missing exponent"));
                }
                e = s[start..i].parse().map_err(|_| err(start, "exponent out of range"))?;
                if e > 4096 {
                    return Err(err(start, "exponent out of range"));
                }
            }
            p.flip(e);
        } else if c == '0' || c == '1' {
            if c == '1' {
                p.flip(0);
            }
            i += 1;
        } else {
            return Err(err(i, &format!("unexpected character '{c}'")));
        }
        if i == bytes.len() {
            break;
        }
        if bytes[i] != b'+' {
            return Err(err(i, &format!("unexpected character '{}'", bytes[i] as char)));
        }
        i += 1;
    }
    Ok(p)
}

// ---------------------------------------------------------------------------
// F_2(l)

/// Reduced fraction num/den over F_2[l]; den is nonzero and gcd(num, den) = 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn {
    num: Gf2Poly,
    den: Gf2Poly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: Gf2Poly::zero(), den: Gf2Poly::one() }
    }

    pub fn one() -> Self {
        RatFn { num: Gf2Poly::one(), den: Gf2Poly::one() }
    }

    pub fn lambda() -> Self {
        RatFn { num: Gf2Poly::var(), den: Gf2Poly::one() }
    }

    pub fn new(num: Gf2Poly, den: Gf2Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Gf2Poly, den: Gf2Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        if den.is_one() {
            return RatFn { num, den };
        }
        let g = num.gcd(&den);
        if g.is_one() {
            RatFn { num, den }
        } else {
            RatFn { num: num.divrem(&g).0, den: den.divrem(&g).0 }
        }
    }

    pub fn num(&self) -> &Gf2Poly {
        &self.num
    }

    pub fn den(&self) -> &Gf2Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return Self::reduced(self.num.add(&o.num), self.den.clone());
        }
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::reduced(num, self.den.mul(&o.den))
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFn { num: self.num.mul(&o.num), den: Gf2Poly::one() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let a = self.num.divrem(&g1).0;
        let d = o.den.divrem(&g1).0;
        let c = o.num.divrem(&g2).0;
        let b = self.den.divrem(&g2).0;
        RatFn { num: a.mul(&c), den: b.mul(&d) }
    }

    pub fn inv(&self) -> Result<RatFn> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn { num: self.den.clone(), den: self.num.clone() })
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in [&self.num, &self.den].into_iter().enumerate() {
            if i == 1 {
                write!(f, "/")?;
            }
            if p.term_count() > 1 {
                write!(f, "(")?;
                p.write_in(f, 'l')?;
                write!(f, ")")?;
            } else {
                p.write_in(f, 'l')?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Scalars

/// An element of one of the supported fields.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Gf2(bool),
    Gf2k { k: u8, bits: u8 },
    Rational(RatFn),
}

impl Scalar {
    pub fn field(&self) -> FieldDescriptor {
        match self {
            Scalar::Gf2(_) => FieldDescriptor::Gf2,
            Scalar::Gf2k { k, .. } => FieldDescriptor::Gf2k(*k),
            Scalar::Rational(_) => FieldDescriptor::RationalFunction,
        }
    }

    /// The indeterminate l of F_2(l).
    pub fn lambda() -> Scalar {
        Scalar::Rational(RatFn::lambda())
    }

    /// The class of t in GF(2^k).
    pub fn generator(k: u8) -> Scalar {
        Scalar::Gf2k { k, bits: reduce_gf(k, 2) }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Gf2(b) => !b,
            Scalar::Gf2k { bits, .. } => *bits == 0,
            Scalar::Rational(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Gf2(b) => *b,
            Scalar::Gf2k { bits, .. } => *bits == 1,
            Scalar::Rational(r) => r.num.is_one() && r.den.is_one(),
        }
    }

    /// True when the scalar lies in the prime field F_2.
    pub fn in_prime_field(&self) -> bool {
        self.is_zero() || self.is_one()
    }

    fn mismatch(&self, o: &Scalar) -> Error {
        Error::MixedFields(self.field().to_string(), o.field().to_string())
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Gf2(a), Scalar::Gf2(b)) => Ok(Scalar::Gf2(a ^ b)),
            (Scalar::Gf2k { k, bits: a }, Scalar::Gf2k { k: k2, bits: b }) if k == k2 => {
                Ok(Scalar::Gf2k { k: *k, bits: a ^ b })
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.add(b))),
            _ => Err(self.mismatch(o)),
        }
    }

    pub fn try_mul(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Gf2(a), Scalar::Gf2(b)) => Ok(Scalar::Gf2(a & b)),
            (Scalar::Gf2k { k, bits: a }, Scalar::Gf2k { k: k2, bits: b }) if k == k2 => {
                Ok(Scalar::Gf2k { k: *k, bits: gf_mul(*k, *a, *b) })
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a.mul(b))),
            _ => Err(self.mismatch(o)),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Gf2(b) => Scalar::Gf2(*b),
            Scalar::Gf2k { k, bits } => Scalar::Gf2k { k: *k, bits: gf_inv(*k, *bits) },
            Scalar::Rational(r) => Scalar::Rational(r.inv()?),
        })
    }

    pub fn try_div(&self, o: &Scalar) -> Result<Scalar> {
        self.try_mul(&o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitute a concrete value from GF(2) or GF(2^k) for l.
    pub fn evaluate_lambda(&self, value: &Scalar) -> Result<Scalar> {
        let Scalar::Rational(r) = self else {
            return Err(Error::UnsupportedField(format!("evaluate_lambda on {}", self.field())));
        };
        let (k, v) = match value {
            Scalar::Gf2(b) => (1u8, *b as u8),
            Scalar::Gf2k { k, bits } => (*k, *bits),
            Scalar::Rational(_) => {
                return Err(Error::UnsupportedField("lambda value must be finite".into()))
            }
        };
        let d = r.den.eval_gf(k, v);
        if d == 0 {
            return Err(Error::PoleAtValue(value.to_string()));
        }
        let n = r.num.eval_gf(k, v);
        let bits = gf_mul(k, n, gf_inv(k, d));
        Ok(match value {
            Scalar::Gf2(_) => Scalar::Gf2(bits == 1),
            _ => Scalar::Gf2k { k, bits },
        })
    }

    /// Parse the text form for the given field: "0"/"1" for GF(2), a
    /// polynomial in t for GF(2^k), "num/den" in l for F_2(l).
    pub fn parse(text: &str, field: FieldDescriptor) -> Result<Scalar> {
        Self::parse_at(text, field, 0)
    }

    pub(crate) fn parse_at(text: &str, field: FieldDescriptor, offset: usize) -> Result<Scalar> {
        match field {
            FieldDescriptor::Gf2 => match text {
                "0" => Ok(Scalar::Gf2(false)),
                "1" => Ok(Scalar::Gf2(true)),
                _ => Err(Error::Parse { column: offset + 1, message: format!("invalid GF(2) element '{text}'") }),
            },
            FieldDescriptor::Gf2k(k) => {
                let (inner, off) = strip_parens(text, offset);
                let p = parse_upoly(inner, 't', off)?;
                let m = Gf2Poly::from_bits(MODULI[k as usize] as u64);
                let r = p.rem(&m);
                Ok(Scalar::Gf2k { k, bits: r.limbs.first().copied().unwrap_or(0) as u8 })
            }
            FieldDescriptor::RationalFunction => {
                let (num_txt, den_txt, den_off) = match split_top_slash(text) {
                    Some(pos) => (&text[..pos], &text[pos + 1..], offset + pos + 1),
                    None => (text, "1", offset),
                };
                let (n, noff) = strip_parens(num_txt, offset);
                let (d, doff) = strip_parens(den_txt, den_off);
                let num = parse_upoly(n, 'l', noff)?;
                let den = parse_upoly(d, 'l', doff)?;
                if den.is_zero() {
                    return Err(Error::Parse { column: den_off + 1, message: "zero denominator".into() });
                }
                Ok(Scalar::Rational(RatFn::reduced(num, den)))
            }
        }
    }
}

fn strip_parens(s: &str, offset: usize) -> (&str, usize) {
    if s.len() >= 2 && s.starts_with('(') && s.ends_with(')') {
        (&s[1..s.len() - 1], offset + 1)
    } else {
        (s, offset)
    }
}

fn split_top_slash(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Gf2(b) => write!(f, "{}", *b as u8),
            Scalar::Gf2k { bits, .. } => Gf2Poly::from_bits(*bits as u64).write_in(f, 't'),
            Scalar::Rational(r) => write!(f, "{r}"),
        }
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.try_add(o).expect("scalar addition across fields")
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.try_mul(o).expect("scalar multiplication across fields")
    }
}
