//! Closed-form invariants of each representation family, candidate
//! generating sets, hsops with their top classes, and the registry of closed
//! form identities.

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::rep::{RepKind, Representation};

/// An invariant (or auxiliary polynomial) together with its name.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedInvariant {
    pub name: String,
    pub value: Polynomial,
}

impl NamedInvariant {
    pub fn new(name: impl Into<String>, value: Polynomial) -> Self {
        NamedInvariant { name: name.into(), value }
    }
}

/// Family tag of an hsop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HsopFamily {
    /// V_{m,lambda}, lambda not in F_2.
    H,
    /// V_{m,lambda}, lambda in F_2.
    HPrime,
    OmegaMinus,
    OmegaPlus,
    Regular,
}

/// Candidate hsop and its claimed top class.
#[derive(Clone, Debug)]
pub struct HsopSpec {
    pub family: HsopFamily,
    pub elements: Vec<NamedInvariant>,
    pub top_class: Monomial,
}

impl HsopSpec {
    pub fn polys(&self) -> Vec<Polynomial> {
        self.elements.iter().map(|e| e.value.clone()).collect()
    }
}

fn generic(rep: &Representation) -> bool {
    rep.lambda().is_some_and(|l| !l.in_prime_field())
}

fn var_name(rep: &Representation, i: usize) -> String {
    rep.ring().vars.name(i).to_string()
}

/// n_i = y_i^2 + x_i y_i (terms with missing variables vanish).
pub fn n(rep: &Representation, i: usize) -> Polynomial {
    let y = rep.y(i);
    &y.square() + &(&rep.x(i) * &y)
}

/// u_ij = x_i y_j + x_j y_i (terms with missing variables vanish).
pub fn u(rep: &Representation, i: usize, j: usize) -> Polynomial {
    &(&rep.x(i) * &rep.y(j)) + &(&rep.x(j) * &rep.y(i))
}

/// N_i for V_{m,lambda} (i <= l or l') and Omega^{-m} (i <= m+1).
pub fn capital_n(rep: &Representation, i: usize) -> Result<Polynomial> {
    let m = rep.m();
    let (bound, c) = match rep.kind() {
        RepKind::Even { .. } => {
            let b = if generic(rep) { m / 2 } else { m.div_ceil(2) };
            (b, rep.c())
        }
        RepKind::OmegaMinus { .. } => (m + 1, rep.field().zero()),
        _ => return Err(Error::UnknownName(format!("N_{i} for {rep}"))),
    };
    if i == 0 || i > bound {
        return Err(Error::InvalidParameter(format!("N_{i} out of range for {rep}")));
    }
    let mut acc = n(rep, i);
    if !c.is_zero() {
        let mut s = Polynomial::zero(rep.ring());
        for j in 1..=i {
            s = &s + &u(rep, i - j + 1, i + j);
        }
        acc = &acc + &s.scale(&c);
    }
    for j in 1..i {
        acc = &acc + &(&u(rep, i - j, i + j) + &u(rep, i - j, i + j - 1));
    }
    Ok(acc)
}

/// t_j = u_12 x_{j-1} + u_1j x_1.
pub fn t(rep: &Representation, j: usize) -> Result<Polynomial> {
    let top = match rep.kind() {
        RepKind::Even { m, .. } => *m,
        RepKind::OmegaMinus { m } => m + 1,
        _ => return Err(Error::UnknownName(format!("t_{j} for {rep}"))),
    };
    if j < 2 || j > top {
        return Err(Error::InvalidParameter(format!("t_{j} out of range for {rep}")));
    }
    Ok(&(&u(rep, 1, 2) * &rep.x(j - 1)) + &(&u(rep, 1, j) * &rep.x(1)))
}

/// Norm of the variable with the given name.
pub fn norm_of(rep: &Representation, var: &str) -> Result<Polynomial> {
    rep.norm(&rep.var(var)?)
}

fn div_x1_power(rep: &Representation, f: &Polynomial, k: u32) -> Result<Polynomial> {
    f.div_monomial(&rep.x(1).lm()?.pow(k))
}

fn need_even(rep: &Representation, min_m: usize, name: &str) -> Result<Scalar> {
    match rep.kind() {
        RepKind::Even { m, .. } if *m >= min_m => Ok(rep.c()),
        _ => Err(Error::UnknownName(format!("{name} for {rep}"))),
    }
}

/// w = Delta_2(n_2) u_12 + x_1^2 n_2.
pub fn w(rep: &Representation) -> Result<Polynomial> {
    need_even(rep, 2, "w")?;
    let d2 = rep.delta(2, &n(rep, 2))?;
    Ok(&(&d2 * &u(rep, 1, 2)) + &(&rep.x(1).square() * &n(rep, 2)))
}

/// w~ = (x_1 + x_2) u_12 + x_1 n_2.
pub fn w_tilde(rep: &Representation) -> Result<Polynomial> {
    need_even(rep, 2, "w~")?;
    Ok(&(&(&rep.x(1) + &rep.x(2)) * &u(rep, 1, 2)) + &(&rep.x(1) * &n(rep, 2)))
}

/// N~_2 = n_2^2 + n_2 (x_1^2 + x_1 x_2).
pub fn n_tilde_2(rep: &Representation) -> Result<Polynomial> {
    need_even(rep, 2, "N~_2")?;
    let n2 = n(rep, 2);
    let q = &rep.x(1).square() + &(&rep.x(1) * &rep.x(2));
    Ok(&n2.square() + &(&n2 * &q))
}

/// u_123 = x_1 (n_2 + u_12 + u_13) + c x_2 u_13.
pub fn u_123(rep: &Representation) -> Result<Polynomial> {
    let c = need_even(rep, 3, "u_123")?;
    let inner = &(&n(rep, 2) + &u(rep, 1, 2)) + &u(rep, 1, 3);
    Ok(&(&rep.x(1) * &inner) + &(&rep.x(2) * &u(rep, 1, 3)).scale(&c))
}

/// n_23 = (n_2+u_12+u_13)(c x_3+x_2+x_1) + c(x_1 n_3 + x_2 u_23 + c x_3 u_23).
pub fn n_23(rep: &Representation) -> Result<Polynomial> {
    let c = need_even(rep, 3, "n_23")?;
    let (x1, x2, x3) = (rep.x(1), rep.x(2), rep.x(3));
    let inner = &(&n(rep, 2) + &u(rep, 1, 2)) + &u(rep, 1, 3);
    let lin = &(&x3.scale(&c) + &x2) + &x1;
    let u23 = u(rep, 2, 3);
    let tail = &(&(&x1 * &n(rep, 3)) + &(&x2 * &u23)) + &(&x3 * &u23).scale(&c);
    Ok(&(&inner * &lin) + &tail.scale(&c))
}

/// u_133 of V_{3,lambda}: (c x_3 t_3 + x_2 u_123) / x_1.
pub fn u_133_even(rep: &Representation) -> Result<Polynomial> {
    let c = need_even(rep, 3, "u_133")?;
    let num = &(&rep.x(3) * &t(rep, 3)?).scale(&c) + &(&rep.x(2) * &u_123(rep)?);
    div_x1_power(rep, &num, 1)
}

/// n_222 = (t_3^2 + N_1(x_2^4 + x_1^2 x_3^2) + (c(x_2^3 + x_1x_2x_3) + x_1x_2^2) t_3) / x_1^2.
pub fn n_222(rep: &Representation) -> Result<Polynomial> {
    let c = need_even(rep, 3, "n_222")?;
    let (x1, x2, x3) = (rep.x(1), rep.x(2), rep.x(3));
    let t3 = t(rep, 3)?;
    let n1 = capital_n(rep, 1)?;
    let a = &x2.pow(4) + &(&x1.square() * &x3.square());
    let b = &(&x2.pow(3) + &(&(&x1 * &x2) * &x3)).scale(&c) + &(&x1 * &x2.square());
    let num = &(&t3.square() + &(&n1 * &a)) + &(&b * &t3);
    div_x1_power(rep, &num, 2)
}

/// u_2333 = ((c x_3 + x_2) n_222 + n_23 x_2^2 + x_2^2 (u_123 + t_3)) / x_1.
pub fn u_2333(rep: &Representation) -> Result<Polynomial> {
    let c = need_even(rep, 3, "u_2333")?;
    let (x2, x3) = (rep.x(2), rep.x(3));
    let x22 = x2.square();
    let num = &(&(&(&x3.scale(&c) + &x2) * &n_222(rep)?) + &(&n_23(rep)? * &x22))
        + &(&x22 * &(&u_123(rep)? + &t(rep, 3)?));
    div_x1_power(rep, &num, 1)
}

fn need_kind(rep: &Representation, ok: bool, name: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::UnknownName(format!("{name} for {rep}")))
    }
}

/// u_133 of Omega^{-3}: x_3 u_13 + x_1 u_24.
pub fn u_133_odd(rep: &Representation) -> Result<Polynomial> {
    need_kind(rep, matches!(rep.kind(), RepKind::OmegaMinus { m } if *m >= 3), "u_133")?;
    Ok(&(&rep.x(3) * &u(rep, 1, 3)) + &(&rep.x(1) * &u(rep, 2, 4)))
}

/// u_233 of Omega^{-3}: x_3 u_23 + x_2 u_24 + x_3 u_14.
pub fn u_233_odd(rep: &Representation) -> Result<Polynomial> {
    need_kind(rep, matches!(rep.kind(), RepKind::OmegaMinus { m } if *m >= 3), "u_233")?;
    let x3 = rep.x(3);
    Ok(&(&(&x3 * &u(rep, 2, 3)) + &(&rep.x(2) * &u(rep, 2, 4))) + &(&x3 * &u(rep, 1, 4)))
}

/// v_j = u_1j (x_2^2 + x_1 x_2) + n_1 (x_j x_2 + x_1 x_{j+1}) for Omega^m.
pub fn v(rep: &Representation, j: usize) -> Result<Polynomial> {
    need_kind(rep, matches!(rep.kind(), RepKind::OmegaPlus { m } if j >= 2 && j <= *m), "v_j")?;
    let (x1, x2) = (rep.x(1), rep.x(2));
    let a = &x2.square() + &(&x1 * &x2);
    let b = &(&rep.x(j) * &x2) + &(&x1 * &rep.x(j + 1));
    Ok(&(&u(rep, 1, j) * &a) + &(&n(rep, 1) * &b))
}

/// n_13 = x_3 n_1 + x_3 u_12 + x_1 n_2 for Omega^m.
pub fn n_13(rep: &Representation) -> Result<Polynomial> {
    need_kind(rep, matches!(rep.kind(), RepKind::OmegaPlus { m } if *m >= 2), "n_13")?;
    let x3 = rep.x(3);
    Ok(&(&(&x3 * &n(rep, 1)) + &(&x3 * &u(rep, 1, 2))) + &(&rep.x(1) * &n(rep, 2)))
}

/// u_1233 = (x_3^2 + x_2 x_3) u_12 + (x_2^2 + x_1 x_3) n_2 for Omega^m.
pub fn u_1233(rep: &Representation) -> Result<Polynomial> {
    need_kind(rep, matches!(rep.kind(), RepKind::OmegaPlus { m } if *m >= 2), "u_1233")?;
    let (x1, x2, x3) = (rep.x(1), rep.x(2), rep.x(3));
    let a = &x3.square() + &(&x2 * &x3);
    let b = &x2.square() + &(&x1 * &x3);
    Ok(&(&a * &u(rep, 1, 2)) + &(&b * &n(rep, 2)))
}

/// The degree-3 polynomial alpha of Omega^m (m >= 3) with Tr(alpha) = (x_2+x_3)^3.
pub fn alpha(rep: &Representation) -> Result<Polynomial> {
    need_kind(rep, matches!(rep.kind(), RepKind::OmegaPlus { m } if *m >= 3), "alpha")?;
    let (x1, x2, x3, x4) = (rep.x(1), rep.x(2), rep.x(3), rep.x(4));
    let (y1, y2, y3) = (rep.y(1), rep.y(2), rep.y(3));
    let a = &(&x1 + &x2) + &x3;
    let b = &a + &x4;
    let c = &(&x2 + &x3) + &x4;
    Ok(sum(&[
        &a * &(&y2 * &y3),
        &b * &(&y1 * &y3),
        &c * &(&y1 * &y2),
        &y1.square() * &y3,
        &y1 * &y3.square(),
    ]))
}

/// u = y1 y2 + x z for the regular representation.
pub fn u_reg(rep: &Representation) -> Result<Polynomial> {
    need_kind(rep, matches!(rep.kind(), RepKind::Regular), "u")?;
    rep.parse("y1*y2+x*z")
}

/// h = (u^2 + N(y1) N(y2)) / x for the regular representation.
pub fn h_reg(rep: &Representation) -> Result<Polynomial> {
    let uu = u_reg(rep)?;
    let num = &uu.square() + &(&norm_of(rep, "y1")? * &norm_of(rep, "y2")?);
    num.div_monomial(&rep.var("x")?.lm()?)
}

/// Transfer of a monomial.
pub fn transfer_monomial(rep: &Representation, m: &Monomial) -> Result<Polynomial> {
    rep.transfer(&Polynomial::monomial(rep.ring(), *m))
}

fn parse_index(s: &str) -> Option<usize> {
    if s.len() == 1 {
        s.parse().ok()
    } else {
        None
    }
}

/// Look up a named invariant.  Accepted names: variable names ("x1"),
/// "N(<var>)", "Tr(<monomial>)", "n_i", "u_ij", "N_i", "t_j", "v_j", and the
/// family specific names "w", "w~", "N~_2", "u_123", "n_23", "u_133",
/// "n_222", "u_2333", "u_233", "n_13", "u_1233", "alpha", "u", "h".
pub fn named(rep: &Representation, name: &str) -> Result<Polynomial> {
    let unknown = || Error::UnknownName(name.to_string());
    if rep.ring().vars.index_of(name).is_some() {
        return rep.var(name);
    }
    if let Some(inner) = name.strip_prefix("N(").and_then(|s| s.strip_suffix(')')) {
        return norm_of(rep, inner);
    }
    if let Some(inner) = name.strip_prefix("Tr(").and_then(|s| s.strip_suffix(')')) {
        return rep.transfer(&rep.parse(inner)?);
    }
    let is_even = matches!(rep.kind(), RepKind::Even { .. });
    let is_minus = matches!(rep.kind(), RepKind::OmegaMinus { .. });
    match name {
        "w" => return w(rep),
        "w~" => return w_tilde(rep),
        "N~_2" => return n_tilde_2(rep),
        "u_123" => return u_123(rep),
        "n_23" => return n_23(rep),
        "u_133" if is_even => return u_133_even(rep),
        "u_133" if is_minus => return u_133_odd(rep),
        "u_233" => return u_233_odd(rep),
        "n_222" => return n_222(rep),
        "u_2333" => return u_2333(rep),
        "n_13" => return n_13(rep),
        "u_1233" => return u_1233(rep),
        "alpha" => return alpha(rep),
        "u" => return u_reg(rep),
        "h" => return h_reg(rep),
        _ => {}
    }
    let (head, idx) = name.split_once('_').ok_or_else(unknown)?;
    match head {
        "n" => Ok(n(rep, parse_index(idx).ok_or_else(unknown)?)),
        "N" => capital_n(rep, parse_index(idx).ok_or_else(unknown)?),
        "t" => t(rep, parse_index(idx).ok_or_else(unknown)?),
        "v" => v(rep, parse_index(idx).ok_or_else(unknown)?),
        "u" if idx.len() == 2 => {
            let i = parse_index(&idx[..1]).ok_or_else(unknown)?;
            let j = parse_index(&idx[1..]).ok_or_else(unknown)?;
            Ok(u(rep, i, j))
        }
        _ => Err(unknown()),
    }
}

/// Names of the closed-form invariants available for this representation.
pub fn invariant_names(rep: &Representation) -> Vec<String> {
    let m = rep.m();
    let mut out: Vec<String> = Vec::new();
    match rep.kind() {
        RepKind::Even { .. } => {
            let bound = if generic(rep) { m / 2 } else { m.div_ceil(2) };
            out.extend((1..=bound).map(|i| format!("N_{i}")));
            out.extend((3..=m).map(|j| format!("t_{j}")));
            out.extend((1..=m).map(|j| format!("N(y{j})")));
            if m >= 2 {
                out.push("w".into());
                if !generic(rep) {
                    out.push("w~".into());
                    out.push("N~_2".into());
                }
            }
            if m == 3 && generic(rep) {
                for s in ["u_123", "n_23", "u_133", "n_222", "u_2333"] {
                    out.push(s.into());
                }
            }
        }
        RepKind::OmegaMinus { .. } => {
            out.extend((1..=m + 1).map(|i| format!("N_{i}")));
            out.extend((3..=m + 1).map(|j| format!("t_{j}")));
            if m == 3 {
                out.push("u_133".into());
                out.push("u_233".into());
            }
        }
        RepKind::OmegaPlus { .. } => {
            out.extend((1..=m).map(|j| format!("N(y{j})")));
            out.extend((2..=m).map(|j| format!("v_{j}")));
            if m == 2 {
                out.push("n_13".into());
                out.push("u_1233".into());
            }
        }
        RepKind::Regular => {
            for s in ["u", "h", "N(y1)", "N(y2)", "N(z)"] {
                out.push(s.into());
            }
        }
    }
    out
}

/// One row of the registry dump.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RegistryEntry {
    pub family: String,
    pub name: String,
    pub degree: u32,
    #[serde(rename = "leadTerm")]
    pub lead_term: String,
    pub text: String,
}

/// Every named invariant of the representation with degree and lead term.
/// Names are namespaced by the representation selector.
pub fn registry(rep: &Representation) -> Result<Vec<RegistryEntry>> {
    let mut items: Vec<NamedInvariant> = Vec::new();
    for name in invariant_names(rep) {
        let f = named(rep, &name)?;
        items.push(NamedInvariant::new(name, f));
    }
    let extra = candidate_generating_set(rep)?.into_iter().chain(hsop(rep)?.elements);
    for e in extra {
        if !items.iter().any(|i| i.name == e.name) {
            items.push(e);
        }
    }
    let mut out = Vec::new();
    for NamedInvariant { name, value: f } in items {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        let (m, c) = f.leading_term()?;
        out.push(RegistryEntry {
            family: rep.to_string(),
            degree: f.degree().unwrap_or(0),
            lead_term: Polynomial::term(rep.ring(), m, c).to_string(),
            text: f.to_string(),
            name,
        });
    }
    Ok(out)
}

fn nv(rep: &Representation, name: &str) -> Result<NamedInvariant> {
    Ok(NamedInvariant::new(name, named(rep, name)?))
}

fn tr(rep: &Representation, mono: &str) -> Result<NamedInvariant> {
    nv(rep, &format!("Tr({mono})"))
}

fn x_names(rep: &Representation) -> Vec<String> {
    (0..rep.nvars()).map(|i| var_name(rep, i)).filter(|s| s.starts_with('x')).collect()
}

/// The standard hsop of the family, with its claimed top class.
pub fn hsop(rep: &Representation) -> Result<HsopSpec> {
    let m = rep.m();
    let ring = rep.ring();
    let mut elements = Vec::new();
    for name in x_names(rep) {
        elements.push(nv(rep, &name)?);
    }
    let mut beta = Monomial::one();
    let yi = |j: usize| ring.vars.index_of(&format!("y{j}")).expect("y variable");
    let family = match rep.kind() {
        RepKind::Even { .. } => {
            let (fam, l) = if generic(rep) { (HsopFamily::H, m / 2) } else { (HsopFamily::HPrime, m.div_ceil(2)) };
            for i in 1..=l {
                elements.push(nv(rep, &format!("N_{i}"))?);
                beta.set_exp(yi(i), 1);
            }
            for j in l + 1..=m {
                elements.push(nv(rep, &format!("N(y{j})"))?);
                beta.set_exp(yi(j), 3);
            }
            fam
        }
        RepKind::OmegaMinus { .. } => {
            for i in 1..=m + 1 {
                elements.push(nv(rep, &format!("N_{i}"))?);
                beta.set_exp(yi(i), 1);
            }
            HsopFamily::OmegaMinus
        }
        RepKind::OmegaPlus { .. } => {
            for j in 1..=m {
                elements.push(nv(rep, &format!("N(y{j})"))?);
                beta.set_exp(yi(j), 3);
            }
            HsopFamily::OmegaPlus
        }
        RepKind::Regular => {
            for s in ["N(y1)", "N(y2)", "N(z)"] {
                elements.push(nv(rep, s)?);
            }
            beta = rep.parse("y1*y2*z^3")?.lm()?;
            HsopFamily::Regular
        }
    };
    Ok(HsopSpec { family, elements, top_class: beta })
}

/// Claimed generators of the Hilbert ideal.
pub fn hilbert_ideal_generators(rep: &Representation) -> Result<Vec<NamedInvariant>> {
    match rep.kind() {
        RepKind::Regular => ["x", "u", "N(y1)", "N(y2)", "N(z)"].iter().map(|s| nv(rep, s)).collect(),
        _ => Ok(hsop(rep)?.elements),
    }
}

/// Divisors of a monomial, in lexicographic order of exponent vectors.
pub fn divisors(beta: &Monomial, nvars: usize) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for i in 0..nvars {
        let e = beta.exp(i);
        if e == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for m in &out {
            for k in 0..=e {
                let mut m2 = *m;
                m2.set_exp(i, k);
                next.push(m2);
            }
        }
        out = next;
    }
    out.sort_by(|a, b| a.exponents()[..nvars].cmp(&b.exponents()[..nvars]));
    out
}

/// The SAGBI/divide-by-x input for the family together with x: B, B' or
/// the Omega^{-m} set (H_{-m} plus t_3..t_{m+1}).
pub fn divide_by_x_input(rep: &Representation) -> Result<(Vec<NamedInvariant>, Polynomial)> {
    let m = rep.m();
    let mut set = hsop(rep)?.elements;
    match rep.kind() {
        RepKind::Even { .. } => {
            for j in 3..=m {
                set.push(nv(rep, &format!("t_{j}"))?);
            }
        }
        RepKind::OmegaMinus { .. } => {
            for j in 3..=m + 1 {
                set.push(nv(rep, &format!("t_{j}"))?);
            }
        }
        _ => return Err(Error::InvalidParameter(format!("no divide-by-x input for {rep}"))),
    }
    Ok((set, rep.x(1)))
}

/// Transfers of all divisors of `beta` with nonzero, pairwise distinct value.
pub fn transfer_set(rep: &Representation, beta: &Monomial) -> Result<Vec<NamedInvariant>> {
    let mut out: Vec<NamedInvariant> = Vec::new();
    for d in divisors(beta, rep.nvars()) {
        let v = transfer_monomial(rep, &d)?;
        if v.is_zero() || out.iter().any(|e| e.value == v) {
            continue;
        }
        out.push(NamedInvariant::new(format!("Tr({})", d.format(&rep.ring().vars)), v));
    }
    Ok(out)
}

/// The candidate generating set of the invariant ring.
pub fn candidate_generating_set(rep: &Representation) -> Result<Vec<NamedInvariant>> {
    let m = rep.m();
    let names: Vec<&str> = match (rep.kind(), m, generic(rep)) {
        (RepKind::Even { .. }, 1, _) => vec!["x1", "N(y1)"],
        (RepKind::Even { .. }, 2, true) => vec!["x1", "x2", "N_1", "w", "N(y2)"],
        (RepKind::Even { .. }, 2, false) => vec!["x1", "x2", "n_1", "w~", "N~_2"],
        (RepKind::Even { .. }, 3, true) => vec![
            "x1",
            "x2",
            "x3",
            "N_1",
            "t_3",
            "u_123",
            "u_133",
            "n_23",
            "n_222",
            "u_2333",
            "N(y2)",
            "N(y3)",
            "Tr(y1*y2*y3^3)",
            "Tr(y1*y2^3*y3)",
            "Tr(y2^3*y3^3)",
            "Tr(y1*y2^3*y3^3)",
        ],
        (RepKind::Even { .. }, 3, false) => {
            let mut v = Vec::new();
            for s in ["x1", "x2", "x3", "n_1", "N_2", "t_3"] {
                v.push(nv(rep, s)?);
            }
            let extra = &(&(&rep.x(3) + &rep.x(2)) * &u(rep, 1, 3)) + &(&n(rep, 3) * &rep.x(1));
            v.push(NamedInvariant::new("(x3+x2)*u_13+n_3*x1", extra));
            v.push(nv(rep, "N(y3)")?);
            v.push(tr(rep, "y2*y3^3")?);
            v.push(tr(rep, "y1*y2*y3^3")?);
            return Ok(v);
        }
        (RepKind::Even { .. }, _, _) => return Ok(divide_by_x_input(rep)?.0),
        (RepKind::OmegaMinus { .. }, 1, _) => vec!["x1", "n_1", "N_2"],
        (RepKind::OmegaMinus { .. }, 2, _) => vec!["x1", "x2", "N_1", "N_2", "N_3", "t_3"],
        (RepKind::OmegaMinus { .. }, 3, _) => vec![
            "x1",
            "x2",
            "x3",
            "n_1",
            "N_2",
            "N_3",
            "N_4",
            "t_3",
            "t_4",
            "u_233",
            "u_133",
            "Tr(y1*y2*y3*y4)",
        ],
        (RepKind::OmegaMinus { .. }, _, _) => return Ok(divide_by_x_input(rep)?.0),
        (RepKind::OmegaPlus { .. }, 1, _) => vec!["x1", "x2", "N(y1)"],
        (RepKind::OmegaPlus { .. }, 2, _) => {
            vec!["x1", "x2", "x3", "N(y1)", "N(y2)", "v_2", "n_13", "u_1233", "Tr(y1^3*y2^3)"]
        }
        (RepKind::OmegaPlus { .. }, _, _) => {
            let spec = hsop(rep)?;
            let mut v = spec.elements.clone();
            v.extend(transfer_set(rep, &spec.top_class)?);
            return Ok(v);
        }
        (RepKind::Regular, _, _) => vec!["x", "u", "N(y1)", "N(y2)", "h", "N(z)"],
    };
    names.into_iter().map(|s| nv(rep, s)).collect()
}

/// A closed-form relation: lhs = rhs.
#[derive(Clone, Debug)]
pub struct Identity {
    pub id: &'static str,
    pub statement: &'static str,
    pub lhs: Polynomial,
    pub rhs: Polynomial,
}

/// Outcome of evaluating an identity exactly.
#[derive(Clone, Debug)]
pub struct IdentityVerdict {
    pub id: &'static str,
    pub holds: bool,
    /// lhs - rhs; zero when the identity holds.
    pub difference: Polynomial,
}

/// Identity ids applicable to a representation.
pub fn identity_ids(rep: &Representation) -> Vec<&'static str> {
    let m = rep.m();
    let mut ids = Vec::new();
    match rep.kind() {
        RepKind::Even { .. } => {
            if m >= 2 {
                ids.push("transfer-y1y2yj");
                ids.push("w-square");
            }
            if generic(rep) {
                ids.push("norm-y1-closed");
                if m >= 2 {
                    ids.push("norm-y1-stated-v2");
                    ids.push("norm-y1-recomputed-v2");
                }
                if m >= 4 {
                    ids.push("norm-y1-subduction");
                }
            } else if m >= 2 {
                ids.push("w-tilde-hypersurface");
            }
            if m >= 3 {
                ids.push("w-expansion");
                if !generic(rep) {
                    ids.push("w-tilde-expansion");
                }
            }
        }
        RepKind::OmegaMinus { .. } => {
            if m == 2 {
                ids.push("omega-minus-2-hypersurface");
            }
            if m == 3 {
                ids.push("omega-minus-3-relation");
            }
        }
        RepKind::OmegaPlus { .. } => {
            if m == 2 {
                ids.push("omega-2-relation");
            }
            if m >= 3 {
                ids.push("alpha-transfer");
            }
        }
        RepKind::Regular => {
            ids.push("regular-u-square");
            ids.push("regular-h-square");
        }
    }
    ids
}

fn sum(ps: &[Polynomial]) -> Polynomial {
    let mut acc = Polynomial::zero(ps[0].ring());
    for p in ps {
        acc = &acc + p;
    }
    acc
}

/// Build an identity from the registry.
pub fn identity(rep: &Representation, id: &str) -> Result<Identity> {
    let id: &'static str = identity_ids(rep)
        .into_iter()
        .find(|s| *s == id)
        .ok_or_else(|| Error::UnknownName(format!("identity {id} for {rep}")))?;
    let c = rep.c();
    let (x1, x2, x3) = (rep.x(1), rep.x(2), rep.x(3));
    fn mk(id: &'static str, statement: &'static str, lhs: Polynomial, rhs: Polynomial) -> Identity {
        Identity { id, statement, lhs, rhs }
    }
    Ok(match id {
        "transfer-y1y2yj" => {
            let j = rep.m();
            let (y1, y2, yj) = (rep.y(1), rep.y(2), rep.y(j));
            let xj = rep.x(j);
            let xj1 = rep.x(j - 1);
            let lhs = rep.transfer(&(&(&y1 * &y2) * &yj))?;
            let rhs = sum(&[
                &y1 * &(&(&x2 * &xj1) + &(&x1 * &xj)),
                &(&y2 * &x1) * &xj1,
                &yj * &x1.square(),
                &(&x1 * &x2) * &(&xj.scale(&c) + &xj1),
                &x1.square() * &(&xj + &xj1),
            ]);
            mk(id, "Tr(y1 y2 y_m) = y1(x2 x_{m-1} + x1 x_m) + y2 x1 x_{m-1} + y_m x1^2 + x1 x2 (c x_m + x_{m-1}) + x1^2 (x_m + x_{m-1})", lhs, rhs)
        }
        "w-square" => {
            let ww = w(rep)?;
            let d = rep.delta(2, &n(rep, 2))?;
            let rhs = sum(&[
                &(&d.square() * &x2.square()) * &capital_n(rep, 1)?,
                &x1.pow(4) * &norm_of(rep, "y2")?,
                &(&ww * &d) * &(&d + &x1.square()),
            ]);
            mk(id, "w^2 = D2(n2)^2 x2^2 N1 + x1^4 N(y2) + w D2(n2) (D2(n2) + x1^2)", ww.square(), rhs)
        }
        "w-tilde-hypersurface" => {
            let wt = w_tilde(rep)?;
            let s12 = &x1 + &x2;
            let lhs = sum(&[
                wt.square(),
                &(&x2.square() * &s12.square()) * &n(rep, 1),
                &(&(&x1 * &x2) * &s12) * &wt,
            ]);
            mk(id, "w~^2 + x2^2 (x2+x1)^2 n1 + x1 x2 (x1+x2) w~ = x1^2 N~2", lhs, &x1.square() * &n_tilde_2(rep)?)
        }
        "omega-minus-2-hypersurface" => {
            let t3 = t(rep, 3)?;
            let lhs = sum(&[
                t3.square(),
                &x2.pow(4) * &capital_n(rep, 1)?,
                &(&(&x1 * &x2) * &(&x1 + &x2)) * &t3,
                &(&x1.square() * &x2.square()) * &capital_n(rep, 2)?,
            ]);
            mk(id, "t3^2 + x2^4 N1 + x1 x2 (x1+x2) t3 + x1^2 x2^2 N2 = x1^4 N3", lhs, &x1.pow(4) * &capital_n(rep, 3)?)
        }
        "regular-u-square" => {
            let x = rep.var("x")?;
            let (ny1, ny2) = (norm_of(rep, "y1")?, norm_of(rep, "y2")?);
            let rhs = &(&ny1 * &ny2) + &(&x * &h_reg(rep)?);
            mk(id, "u^2 = N(y1) N(y2) + x h", u_reg(rep)?.square(), rhs)
        }
        "regular-h-square" => {
            let x = rep.var("x")?;
            let (ny1, ny2, nz) = (norm_of(rep, "y1")?, norm_of(rep, "y2")?, norm_of(rep, "z")?);
            let h = h_reg(rep)?;
            let uu = u_reg(rep)?;
            let inner = sum(&[&h * &ny1, &uu * &h, &h * &ny2, &x * &nz]);
            let rhs = sum(&[&ny1.square() * &ny2, &ny1 * &ny2.square(), &x * &inner]);
            mk(id, "h^2 = N(y1)^2 N(y2) + N(y1) N(y2)^2 + x (h N(y1) + u h + h N(y2) + x N(z))", h.square(), rhs)
        }
        "w-expansion" => {
            let t3 = t(rep, 3)?;
            let rhs = sum(&[(&x2 * &t3).scale(&c), &x1 * &u_123(rep)?, &x1 * &t3]);
            mk(id, "w = c x2 t3 + x1 u_123 + x1 t3", w(rep)?, rhs)
        }
        "w-tilde-expansion" => {
            let rhs = &(&x1 * &capital_n(rep, 2)?) + &t(rep, 3)?;
            mk(id, "w~ = x1 N2 + t3", w_tilde(rep)?, rhs)
        }
        "norm-y1-closed" => {
            let y1 = rep.y(1);
            let one = rep.field().one();
            let rhs = sum(&[
                y1.pow(4),
                (&x1.square() * &y1.square()).scale(&(&c + &one)),
                (&x1.pow(3) * &y1).scale(&c),
            ]);
            mk(id, "N(y1) = y1^4 + x1^2 y1^2 (c+1) + x1^3 y1 c", norm_of(rep, "y1")?, rhs)
        }
        "norm-y1-subduction" => {
            let n1 = capital_n(rep, 1)?;
            let c2 = &c * &c;
            let c3 = &c2 * &c;
            let rhs = sum(&[
                n1.square(),
                &(&x2.scale(&c).square() + &x1.square().scale(&c)) * &n1,
                &x1.scale(&c).square() * &capital_n(rep, 2)?,
                &(&x2.scale(&c3) + &x1.scale(&c2)) * &t(rep, 3)?,
                &x1.scale(&c3) * &t(rep, 4)?,
            ]);
            mk(id, "N(y1) = N1^2 + ((c x2)^2 + c x1^2) N1 + (c x1)^2 N2 + (c^3 x2 + c^2 x1) t3 + c^3 x1 t4", norm_of(rep, "y1")?, rhs)
        }
        "norm-y1-stated-v2" => {
            let n1 = capital_n(rep, 1)?;
            let ww = w(rep)?;
            let c2 = &c * &c;
            let rhs = sum(&[
                n1.square(),
                (&(&x2.square() * &n1) + &ww).scale(&c2),
                &(&x1.square() * &(&ww.square() + &ww)) * &n1,
            ]);
            mk(id, "N(y1) = N1^2 + c^2 (x2^2 N1 + w) + x1^2 (w^2 + w) N1 (degree-inconsistent as stated)", norm_of(rep, "y1")?, rhs)
        }
        "norm-y1-recomputed-v2" => {
            let n1 = capital_n(rep, 1)?;
            let ww = w(rep)?;
            let c2 = &c * &c;
            let rhs = sum(&[
                n1.square(),
                (&(&x2.square() * &n1) + &ww).scale(&c2),
                (&x1.square() * &n1).scale(&c),
            ]);
            mk(id, "N(y1) = N1^2 + c^2 (x2^2 N1 + w) + c x1^2 N1", norm_of(rep, "y1")?, rhs)
        }
        "omega-minus-3-relation" => {
            let lhs = sum(&[&x2 * &t(rep, 4)?, &x3 * &t(rep, 3)?, &x1 * &u_133_odd(rep)?]);
            mk(id, "x2 t4 + x3 t3 + x1 u_133 = 0", lhs, Polynomial::zero(rep.ring()))
        }
        "omega-2-relation" => {
            let lhs = sum(&[
                &x3 * &v(rep, 2)?,
                &(&x2.square() + &(&x1 * &x3)) * &n_13(rep)?,
                &x1 * &u_1233(rep)?,
            ]);
            mk(id, "x3 v2 + (x2^2 + x1 x3) n13 + x1 u_1233 = 0", lhs, Polynomial::zero(rep.ring()))
        }
        "alpha-transfer" => {
            let s = &x2 + &x3;
            mk(id, "Tr(alpha) = (x2 + x3)^3", rep.transfer(&alpha(rep)?)?, s.pow(3))
        }
        _ => return Err(Error::UnknownName(id.to_string())),
    })
}

/// Evaluate an identity exactly.
pub fn verify_identity(rep: &Representation, id: &str) -> Result<IdentityVerdict> {
    let idn = identity(rep, id)?;
    let difference = &idn.lhs - &idn.rhs;
    Ok(IdentityVerdict { id: idn.id, holds: difference.is_zero(), difference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::FieldDescriptor;

    #[test]
    fn omega_minus_small_n() {
        let rep = Representation::omega_minus(3, FieldDescriptor::Gf2).unwrap();
        assert_eq!(capital_n(&rep, 1).unwrap(), n(&rep, 1));
        let n2 = &(&n(&rep, 2) + &u(&rep, 1, 2)) + &u(&rep, 1, 3);
        assert_eq!(capital_n(&rep, 2).unwrap(), n2);
    }

    #[test]
    fn regular_h_closed_form() {
        let rep = Representation::regular(FieldDescriptor::Gf2).unwrap();
        let h = h_reg(&rep).unwrap();
        assert_eq!(h, rep.parse("y1^2*y2+y2^2*y1+x*z^2+x*y1*y2").unwrap());
    }

    #[test]
    fn divisors_are_lexicographic() {
        let rep = Representation::omega_plus(2, FieldDescriptor::Gf2).unwrap();
        let beta = rep.parse("y1^3*y2^3").unwrap().lm().unwrap();
        let d = divisors(&beta, rep.nvars());
        assert_eq!(d.len(), 16);
        assert!(d[0].is_one());
        assert_eq!(d[15], beta);
    }
}
