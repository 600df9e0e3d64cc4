//! Klein four group representations given by explicit substitution maps, and
//! the group-level operators built from them.

use std::fmt;
use std::sync::Arc;

use crate::coeff::{FieldDescriptor, Scalar};
use crate::error::{Error, Result};
use crate::poly::{Polynomial, Ring};

/// Which family a representation belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepKind {
    /// V_{m,lambda}: x_1..x_m, y_1..y_m.
    Even { m: usize, lambda: Scalar },
    /// Omega^{-m}: x_1..x_m, y_1..y_{m+1}.
    OmegaMinus { m: usize },
    /// Omega^{m}: x_1..x_{m+1}, y_1..y_m.
    OmegaPlus { m: usize },
    /// The regular representation: x, y2, y1, z.
    Regular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Identity,
    Sigma1,
    Sigma2,
    Sigma12,
}

impl GroupElement {
    pub const ALL: [GroupElement; 4] =
        [GroupElement::Identity, GroupElement::Sigma1, GroupElement::Sigma2, GroupElement::Sigma12];
}

/// A representation: the polynomial ring it acts on plus the images of every
/// variable under the two generating involutions.
#[derive(Clone, Debug)]
pub struct Representation {
    kind: RepKind,
    ring: Arc<Ring>,
    sigma: [Vec<Polynomial>; 2],
}

fn names(prefix: &str, range: std::ops::RangeInclusive<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

impl Representation {
    /// V_{m,lambda} over the field of `lambda`.
    pub fn even(m: usize, lambda: Scalar) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        let mut vars = names("x", 1..=m);
        vars.extend(names("y", 1..=m));
        let ring = Ring::new(&vars, lambda.field())?;
        let x = |j: usize| Polynomial::var_at(&ring, j - 1);
        let y = |j: usize| Polynomial::var_at(&ring, m + j - 1);
        let mut s1: Vec<Polynomial> = (0..2 * m).map(|i| Polynomial::var_at(&ring, i)).collect();
        let mut s2 = s1.clone();
        for j in 1..=m {
            s1[m + j - 1] = &y(j) + &x(j);
            let mut img = &y(j) + &x(j).scale(&lambda);
            if j > 1 {
                img = &img + &x(j - 1);
            }
            s2[m + j - 1] = img;
        }
        Ok(Representation { kind: RepKind::Even { m, lambda }, ring, sigma: [s1, s2] })
    }

    /// Omega^{-m}.
    pub fn omega_minus(m: usize, field: FieldDescriptor) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        let mut vars = names("x", 1..=m);
        vars.extend(names("y", 1..=m + 1));
        let ring = Ring::new(&vars, field)?;
        let x = |j: usize| Polynomial::var_at(&ring, j - 1);
        let y = |j: usize| Polynomial::var_at(&ring, m + j - 1);
        let mut s1: Vec<Polynomial> = (0..2 * m + 1).map(|i| Polynomial::var_at(&ring, i)).collect();
        let mut s2 = s1.clone();
        for j in 1..=m + 1 {
            if j <= m {
                s1[m + j - 1] = &y(j) + &x(j);
            }
            if j > 1 {
                s2[m + j - 1] = &y(j) + &x(j - 1);
            }
        }
        Ok(Representation { kind: RepKind::OmegaMinus { m }, ring, sigma: [s1, s2] })
    }

    /// Omega^{m}.
    pub fn omega_plus(m: usize, field: FieldDescriptor) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        let mut vars = names("x", 1..=m + 1);
        vars.extend(names("y", 1..=m));
        let ring = Ring::new(&vars, field)?;
        let x = |j: usize| Polynomial::var_at(&ring, j - 1);
        let y = |j: usize| Polynomial::var_at(&ring, m + 1 + j - 1);
        let mut s1: Vec<Polynomial> = (0..2 * m + 1).map(|i| Polynomial::var_at(&ring, i)).collect();
        let mut s2 = s1.clone();
        for j in 1..=m {
            s1[m + j] = &y(j) + &x(j);
            s2[m + j] = &y(j) + &x(j + 1);
        }
        Ok(Representation { kind: RepKind::OmegaPlus { m }, ring, sigma: [s1, s2] })
    }

    /// The regular representation with variables ordered x < y2 < y1 < z.
    /// sigma_1 fixes x and y1 and sends y2 to y2+x, z to z+y1; sigma_2 is the
    /// mirror image.
    pub fn regular(field: FieldDescriptor) -> Result<Self> {
        let ring = Ring::new(&["x", "y2", "y1", "z"], field)?;
        let v = |i: usize| Polynomial::var_at(&ring, i);
        let (x, y2, y1, z) = (v(0), v(1), v(2), v(3));
        let s1 = vec![x.clone(), &y2 + &x, y1.clone(), &z + &y1];
        let s2 = vec![x.clone(), y2.clone(), &y1 + &x, &z + &y2];
        Ok(Representation { kind: RepKind::Regular, ring, sigma: [s1, s2] })
    }

    /// Parse a selector: `Vm:<m>:lambda=<scalar>[:k=<k>]`, `Omega-:<m>`,
    /// `Omega+:<m>` or `Vreg`.  A lambda mentioning `l` is the
    /// indeterminate of F_2(l); one mentioning `t` lives in GF(2^k), GF(4) by
    /// default; otherwise it is 0 or 1 in GF(2).
    pub fn from_selector(sel: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad representation selector '{sel}'"));
        let parts: Vec<&str> = sel.split(':').collect();
        match parts[0] {
            "Vreg" if parts.len() == 1 => Self::regular(FieldDescriptor::Gf2),
            "Omega-" | "Omega+" if parts.len() == 2 => {
                let m: usize = parts[1].parse().map_err(|_| bad())?;
                if parts[0] == "Omega-" {
                    Self::omega_minus(m, FieldDescriptor::Gf2)
                } else {
                    Self::omega_plus(m, FieldDescriptor::Gf2)
                }
            }
            "Vm" if parts.len() == 3 || parts.len() == 4 => {
                let m: usize = parts[1].parse().map_err(|_| bad())?;
                let lam = parts[2].strip_prefix("lambda=").ok_or_else(bad)?;
                let k = match parts.get(3) {
                    Some(p) => p.strip_prefix("k=").and_then(|s| s.parse::<u8>().ok()).ok_or_else(bad)?,
                    None => 2,
                };
                let lambda = parse_lambda(lam, k)?;
                Self::even(m, lambda)
            }
            _ => Err(bad()),
        }
    }

    pub fn kind(&self) -> &RepKind {
        &self.kind
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> FieldDescriptor {
        self.ring.field
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// Images of every variable under sigma_i (i = 1 or 2).
    pub fn sigma_images(&self, i: usize) -> &[Polynomial] {
        &self.sigma[i - 1]
    }

    /// The parameter m (0 for the regular representation).
    pub fn m(&self) -> usize {
        match &self.kind {
            RepKind::Even { m, .. } | RepKind::OmegaMinus { m } | RepKind::OmegaPlus { m } => *m,
            RepKind::Regular => 0,
        }
    }

    pub fn lambda(&self) -> Option<&Scalar> {
        match &self.kind {
            RepKind::Even { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    /// c = lambda^2 + lambda (zero outside the even family).
    pub fn c(&self) -> Scalar {
        match &self.kind {
            RepKind::Even { lambda, .. } => &(lambda * lambda) + lambda,
            _ => self.field().zero(),
        }
    }

    /// The variable with the given name.
    pub fn var(&self, name: &str) -> Result<Polynomial> {
        Polynomial::var(&self.ring, name)
    }

    /// x_j, or zero when j is out of range.
    pub fn x(&self, j: usize) -> Polynomial {
        self.indexed("x", j)
    }

    /// y_j, or zero when j is out of range.
    pub fn y(&self, j: usize) -> Polynomial {
        self.indexed("y", j)
    }

    fn indexed(&self, prefix: &str, j: usize) -> Polynomial {
        if j == 0 {
            return Polynomial::zero(&self.ring);
        }
        Polynomial::var(&self.ring, &format!("{prefix}{j}")).unwrap_or_else(|_| Polynomial::zero(&self.ring))
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        Polynomial::parse(text, &self.ring)
    }

    fn check(&self, f: &Polynomial) -> Result<()> {
        if f.ring().vars != self.ring.vars {
            return Err(Error::MixedAmbient);
        }
        if f.field() != self.field() {
            return Err(Error::MixedFields(f.field().to_string(), self.field().to_string()));
        }
        Ok(())
    }

    pub fn act(&self, g: GroupElement, f: &Polynomial) -> Result<Polynomial> {
        self.check(f)?;
        match g {
            GroupElement::Identity => Ok(f.clone()),
            GroupElement::Sigma1 => f.substitute(&self.sigma[0]),
            GroupElement::Sigma2 => f.substitute(&self.sigma[1]),
            GroupElement::Sigma12 => f.substitute(&self.sigma[0])?.substitute(&self.sigma[1]),
        }
    }

    /// Delta_i(f) = sigma_i(f) + f.
    pub fn delta(&self, i: usize, f: &Polynomial) -> Result<Polynomial> {
        if i != 1 && i != 2 {
            return Err(Error::InvalidParameter(format!("no generator sigma_{i}")));
        }
        self.check(f)?;
        Ok(&f.substitute(&self.sigma[i - 1])? + f)
    }

    /// Sum of the group orbit with multiplicity.
    pub fn transfer(&self, f: &Polynomial) -> Result<Polynomial> {
        let d1 = self.delta(1, f)?;
        self.delta(2, &d1)
    }

    /// The distinct elements of the orbit of f.
    pub fn orbit(&self, f: &Polynomial) -> Result<Vec<Polynomial>> {
        let mut out: Vec<Polynomial> = Vec::new();
        for g in GroupElement::ALL {
            let h = self.act(g, f)?;
            if !out.contains(&h) {
                out.push(h);
            }
        }
        Ok(out)
    }

    /// Product over the distinct orbit elements.
    pub fn norm(&self, f: &Polynomial) -> Result<Polynomial> {
        let orbit = self.orbit(f)?;
        let mut acc = Polynomial::one(&self.ring);
        for h in &orbit {
            acc = &acc * h;
        }
        Ok(acc)
    }

    pub fn is_invariant(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.delta(1, f)?.is_zero() && self.delta(2, f)?.is_zero())
    }

    /// Pairs (y, x) of variable indices with sigma_i(y) = y + x, provided every
    /// moved variable is moved by a single other variable.
    pub fn pairs(&self, i: usize) -> Option<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for (v, img) in self.sigma[i - 1].iter().enumerate() {
            let diff = img - &Polynomial::var_at(&self.ring, v);
            if diff.is_zero() {
                continue;
            }
            if diff.len() != 1 || !diff.terms()[0].1.is_one() || diff.terms()[0].0.degree() != 1 {
                return None;
            }
            let x = (0..self.nvars()).find(|&k| diff.terms()[0].0.exp(k) == 1)?;
            out.push((v, x));
        }
        Some(out)
    }

    /// Same representation with lambda replaced by a finite value.
    pub fn evaluate_lambda(&self, value: &Scalar) -> Result<Representation> {
        match &self.kind {
            RepKind::Even { m, lambda } => {
                let v = match lambda {
                    Scalar::Rational(_) => lambda.evaluate_lambda(value)?,
                    _ => lambda.clone(),
                };
                Representation::even(*m, v)
            }
            _ => Err(Error::InvalidParameter("only V_{m,lambda} has a parameter".into())),
        }
    }
}

/// Parse a lambda value: `l` expressions over F_2(l), `t` expressions in
/// GF(2^k), otherwise 0/1.
pub fn parse_lambda(text: &str, k: u8) -> Result<Scalar> {
    if text.contains('l') {
        Scalar::parse(text, FieldDescriptor::RationalFunction)
    } else if text.contains('t') {
        Scalar::parse(text, FieldDescriptor::gf2k(k)?)
    } else {
        Scalar::parse(text, FieldDescriptor::Gf2)
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RepKind::Even { m, lambda } => match lambda.field() {
                FieldDescriptor::Gf2k(k) if k != 2 => write!(f, "Vm:{m}:lambda={lambda}:k={k}"),
                _ => {
                    // selector form: F_2(l) values with denominator 1 print bare
                    let text = lambda.to_string();
                    let text = match text.strip_suffix("/1") {
                        Some(n) => n.strip_prefix('(').and_then(|n| n.strip_suffix(')')).unwrap_or(n).to_string(),
                        None => text,
                    };
                    write!(f, "Vm:{m}:lambda={text}")
                }
            },
            RepKind::OmegaMinus { m } => write!(f, "Omega-:{m}"),
            RepKind::OmegaPlus { m } => write!(f, "Omega+:{m}"),
            RepKind::Regular => write!(f, "Vreg"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_small() -> Vec<Representation> {
        let mut v = Vec::new();
        for m in 1..=3 {
            v.push(Representation::even(m, Scalar::lambda()).unwrap());
            v.push(Representation::even(m, Scalar::generator(2)).unwrap());
            v.push(Representation::even(m, FieldDescriptor::Gf2.zero()).unwrap());
            v.push(Representation::omega_minus(m, FieldDescriptor::Gf2).unwrap());
            v.push(Representation::omega_plus(m, FieldDescriptor::Gf2).unwrap());
        }
        v.push(Representation::regular(FieldDescriptor::Gf2).unwrap());
        v
    }

    #[test]
    fn generators_are_commuting_involutions() {
        for rep in all_small() {
            for v in 0..rep.nvars() {
                let f = Polynomial::var_at(rep.ring(), v);
                let s1 = rep.act(GroupElement::Sigma1, &f).unwrap();
                let s2 = rep.act(GroupElement::Sigma2, &f).unwrap();
                assert_eq!(rep.act(GroupElement::Sigma1, &s1).unwrap(), f, "{rep}");
                assert_eq!(rep.act(GroupElement::Sigma2, &s2).unwrap(), f, "{rep}");
                assert_eq!(
                    rep.act(GroupElement::Sigma2, &s1).unwrap(),
                    rep.act(GroupElement::Sigma1, &s2).unwrap(),
                    "{rep}"
                );
            }
        }
    }

    #[test]
    fn regular_transfer_of_z_is_x() {
        let rep = Representation::regular(FieldDescriptor::Gf2).unwrap();
        let z = rep.var("z").unwrap();
        assert_eq!(rep.transfer(&z).unwrap(), rep.var("x").unwrap());
    }

    #[test]
    fn norm_of_y1_for_generic_lambda() {
        let rep = Representation::even(2, Scalar::lambda()).unwrap();
        let n = rep.norm(&rep.y(1)).unwrap();
        let c = rep.c();
        let one = rep.field().one();
        let x1 = rep.x(1);
        let y1 = rep.y(1);
        let expect = &(&y1.pow(4) + &(&x1.pow(2) * &y1.pow(2)).scale(&(&c + &one))) + &(&x1.pow(3) * &y1).scale(&c);
        assert_eq!(n, expect);
    }

    #[test]
    fn selectors_round_trip() {
        for s in ["Vm:3:lambda=t", "Vm:2:lambda=0", "Vm:4:lambda=l", "Vm:2:lambda=l^2+1", "Omega-:2", "Omega+:3", "Vreg"] {
            let rep = Representation::from_selector(s).unwrap();
            assert_eq!(rep.to_string(), s);
        }
    }
}
