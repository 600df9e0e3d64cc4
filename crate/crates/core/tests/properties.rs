use std::sync::Arc;

use klein_core::coeff::{Gf2Poly, RatFn};
use klein_core::construct::{self, candidate_generating_set};
use klein_core::gb;
use klein_core::sagbi::Subductor;
use klein_core::{Error, FieldDescriptor, GroupElement, Monomial, Polynomial, Representation, Ring, Scalar};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = FieldDescriptor> {
    prop_oneof![
        Just(FieldDescriptor::Gf2),
        (2u8..=8).prop_map(|k| FieldDescriptor::gf2k(k).unwrap()),
        Just(FieldDescriptor::RationalFunction),
    ]
}

fn scalar_in(f: FieldDescriptor) -> BoxedStrategy<Scalar> {
    match f {
        FieldDescriptor::Gf2 => any::<bool>().prop_map(move |b| if b { f.one() } else { f.zero() }).boxed(),
        FieldDescriptor::Gf2k(k) => (0u16..(1 << k)).prop_map(move |b| f.element(b as u8)).boxed(),
        FieldDescriptor::RationalFunction => (0u64..64, 1u64..32)
            .prop_map(|(n, d)| Scalar::Rational(RatFn::new(Gf2Poly::from_bits(n), Gf2Poly::from_bits(d)).unwrap()))
            .boxed(),
    }
}

fn three_scalars() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    field_strategy().prop_flat_map(|f| (scalar_in(f), scalar_in(f), scalar_in(f)))
}

proptest! {
    #[test]
    fn field_axioms((a, b, c) in three_scalars()) {
        let add = |x: &Scalar, y: &Scalar| x.try_add(y).unwrap();
        let mul = |x: &Scalar, y: &Scalar| x.try_mul(y).unwrap();
        let zero = a.field().zero();
        let one = a.field().one();
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        prop_assert_eq!(mul(&a, &b), mul(&b, &a));
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        prop_assert_eq!(add(&a, &zero), a.clone());
        prop_assert_eq!(mul(&a, &one), a.clone());
        // characteristic 2
        prop_assert!(add(&a, &a).is_zero());
        if a.is_zero() {
            prop_assert!(matches!(a.inv(), Err(Error::DivisionByZero)));
        } else {
            prop_assert!(mul(&a, &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn frobenius_is_additive((a, b, _c) in three_scalars()) {
        let sq = |x: &Scalar| x.pow(2);
        prop_assert_eq!(sq(&a.try_add(&b).unwrap()), sq(&a).try_add(&sq(&b)).unwrap());
    }
}

fn monomial(nvars: usize) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..5, nvars).prop_map(|e| Monomial::from_exponents(&e))
}

proptest! {
    #[test]
    fn grevlex_is_a_monomial_order(a in monomial(4), b in monomial(4), c in monomial(4)) {
        use std::cmp::Ordering::*;
        let ab = a.cmp(&b);
        prop_assert_eq!(ab == Equal, a == b);
        prop_assert_eq!(ab.reverse(), b.cmp(&a));
        if a < b && b < c {
            prop_assert!(a < c);
        }
        // compatible with multiplication, 1 is least
        prop_assert_eq!(a.mul(&c).cmp(&b.mul(&c)), ab);
        prop_assert!(Monomial::one() <= a);
        // higher degree wins
        if a.degree() != b.degree() {
            prop_assert_eq!(ab, a.degree().cmp(&b.degree()));
        }
    }
}

fn polynomial(ring: Arc<Ring>, max_exp: u32, max_terms: usize) -> BoxedStrategy<Polynomial> {
    let n = ring.nvars();
    let f = ring.field;
    proptest::collection::vec((proptest::collection::vec(0..=max_exp, n), scalar_in(f)), 0..=max_terms)
        .prop_map(move |terms| {
            Polynomial::from_terms(&ring, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), c)))
        })
        .boxed()
}

fn catalog() -> Vec<Representation> {
    let mut v = vec![Representation::regular(FieldDescriptor::Gf2).unwrap()];
    for m in 1..=3 {
        v.push(Representation::even(m, Scalar::lambda()).unwrap());
        v.push(Representation::even(m, Scalar::generator(2)).unwrap());
        v.push(Representation::even(m, FieldDescriptor::Gf2.zero()).unwrap());
        v.push(Representation::omega_minus(m, FieldDescriptor::Gf2).unwrap());
        v.push(Representation::omega_plus(m, FieldDescriptor::Gf2).unwrap());
    }
    v
}

fn rep_and_polys() -> impl Strategy<Value = (Representation, Polynomial, Polynomial)> {
    (0..catalog().len()).prop_flat_map(|i| {
        let rep = catalog().swap_remove(i);
        let ring = rep.ring().clone();
        (Just(rep), polynomial(ring.clone(), 2, 4), polynomial(ring, 2, 4))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_law_and_delta((rep, f, g) in rep_and_polys()) {
        use GroupElement::*;
        let act = |e, p: &Polynomial| rep.act(e, p).unwrap();
        for e in [Sigma1, Sigma2] {
            prop_assert_eq!(act(e, &act(e, &f)), f.clone());
        }
        prop_assert_eq!(act(Sigma1, &act(Sigma2, &f)), act(Sigma2, &act(Sigma1, &f)));
        prop_assert_eq!(act(Sigma12, &f), act(Sigma2, &act(Sigma1, &f)));
        // ring automorphism
        prop_assert_eq!(act(Sigma1, &(&f * &g)), &act(Sigma1, &f) * &act(Sigma1, &g));
        for i in 1..=2 {
            let d = |p: &Polynomial| rep.delta(i, p).unwrap();
            prop_assert!(d(&d(&f)).is_zero());
            let sigma = if i == 1 { Sigma1 } else { Sigma2 };
            // twisted Leibniz rule
            prop_assert_eq!(d(&(&f * &g)), &(&d(&f) * &g) + &(&act(sigma, &f) * &d(&g)));
        }
        let tr = rep.transfer(&f).unwrap();
        prop_assert!(rep.is_invariant(&tr).unwrap());
    }

    #[test]
    fn text_round_trip((_rep, f, _g) in rep_and_polys()) {
        let again = Polynomial::parse(&f.to_string(), f.ring()).unwrap();
        prop_assert_eq!(again, f);
    }
}

fn small_ideal() -> impl Strategy<Value = Vec<Polynomial>> {
    let ring = Ring::new(&["a", "b", "c"], FieldDescriptor::Gf2).unwrap();
    proptest::collection::vec(polynomial(ring, 2, 3), 1..=3)
        .prop_map(|v| v.into_iter().filter(|p| !p.is_zero()).collect::<Vec<_>>())
        .prop_filter("nonzero generators", |v| !v.is_empty())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_forms(gens in small_ideal(), f in polynomial(Ring::new(&["a", "b", "c"], FieldDescriptor::Gf2).unwrap(), 3, 5)) {
        let basis = gb::buchberger(&gens).unwrap();
        prop_assert!(gb::is_groebner(&basis.generators));
        let r = basis.normal_form(&f);
        prop_assert_eq!(basis.normal_form(&r), r.clone());
        // every generator lies in the ideal
        for g in &gens {
            prop_assert!(basis.contains(g));
        }
        // f = sum q_i g_i + r
        let (r2, qs) = gb::normal_form_with_record(&f, &basis.generators);
        prop_assert_eq!(&r2, &r);
        let mut acc = r2;
        for (q, g) in qs.iter().zip(&basis.generators) {
            acc = &acc + &(q * g);
        }
        prop_assert_eq!(acc, f);
    }
}

fn subduction_case() -> impl Strategy<Value = (usize, Vec<Vec<u32>>, Polynomial)> {
    let sels = ["Vreg", "Omega-:2", "Omega+:2", "Vm:2:lambda=l"];
    (0..sels.len()).prop_flat_map(move |i| {
        let rep = Representation::from_selector(sels[i]).unwrap();
        let k = candidate_generating_set(&rep).unwrap().len();
        let ring = rep.ring().clone();
        (
            Just(i),
            proptest::collection::vec(proptest::collection::vec(0u32..3, k), 1..=3),
            polynomial(ring, 2, 3),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subduction_re_expands((i, exps, noise) in subduction_case()) {
        let sels = ["Vreg", "Omega-:2", "Omega+:2", "Vm:2:lambda=l"];
        let rep = Representation::from_selector(sels[i]).unwrap();
        let gens: Vec<Polynomial> = candidate_generating_set(&rep).unwrap().into_iter().map(|e| e.value).collect();
        let mut s = Subductor::new(&gens).unwrap();
        let mut member = Polynomial::zero(rep.ring());
        for e in &exps {
            member = &member + &s.product(e);
        }
        let top = member.degree().unwrap_or(0).max(noise.degree().unwrap_or(0));
        for d in 0..=top {
            // members of the algebra subduct to zero
            let part = member.homogeneous_part(d);
            let out = s.subduct(&part).unwrap();
            prop_assert!(out.remainder.is_zero());
            prop_assert_eq!(s.expand(&out), part.clone());
            // anything: expansion plus remainder gives back the input
            let f = &part + &noise.homogeneous_part(d);
            let out = s.subduct(&f).unwrap();
            prop_assert_eq!(&s.expand(&out) + &out.remainder, f);
        }
    }
}

#[test]
fn parse_examples() {
    let rep = Representation::from_selector("Vm:2:lambda=l").unwrap();
    assert_eq!(rep.parse("y1^2+x1*y1").unwrap(), construct::n(&rep, 1));
    match rep.parse("y1^") {
        Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
        other => panic!("{other:?}"),
    }
}
