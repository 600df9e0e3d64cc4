use klein_core::coeff::{FieldDescriptor, Scalar};
use klein_core::construct::{self, candidate_generating_set, hsop, identity_ids, invariant_names, named, verify_identity};
use klein_core::poly::Polynomial;
use klein_core::rep::Representation;

fn catalog() -> Vec<Representation> {
    let mut v = Vec::new();
    for m in 1..=4 {
        v.push(Representation::even(m, Scalar::lambda()).unwrap());
        v.push(Representation::even(m, Scalar::generator(2)).unwrap());
        v.push(Representation::even(m, FieldDescriptor::Gf2.zero()).unwrap());
        v.push(Representation::even(m, FieldDescriptor::Gf2.one()).unwrap());
        v.push(Representation::omega_minus(m, FieldDescriptor::Gf2).unwrap());
        v.push(Representation::omega_plus(m, FieldDescriptor::Gf2).unwrap());
    }
    v.push(Representation::regular(FieldDescriptor::Gf2).unwrap());
    v
}

#[test]
fn named_invariants_are_invariant() {
    for rep in catalog() {
        for name in invariant_names(&rep) {
            let f = named(&rep, &name).unwrap_or_else(|e| panic!("{rep} {name}: {e}"));
            assert!(rep.is_invariant(&f).unwrap(), "{rep}: {name} = {f}");
        }
    }
}

#[test]
fn sigma1_invariance_of_basic_pieces() {
    for rep in catalog() {
        if rep.m() == 0 {
            continue;
        }
        for i in 1..=rep.m() {
            assert!(rep.delta(1, &construct::n(&rep, i)).unwrap().is_zero());
            for j in 1..=rep.m() {
                assert!(rep.delta(1, &construct::u(&rep, i, j)).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn generating_sets_and_hsops_are_invariant() {
    for rep in catalog() {
        for e in candidate_generating_set(&rep).unwrap() {
            assert!(rep.is_invariant(&e.value).unwrap(), "{rep}: {}", e.name);
        }
        let h = hsop(&rep).unwrap();
        assert_eq!(h.elements.len(), rep.nvars(), "{rep}");
        for e in &h.elements {
            assert!(e.value.is_homogeneous());
            assert!(rep.is_invariant(&e.value).unwrap(), "{rep}: {}", e.name);
        }
    }
}

fn lt(rep: &Representation, name: &str) -> String {
    let f = named(rep, name).unwrap();
    let (m, c) = f.leading_term().unwrap();
    let p = Polynomial::term(rep.ring(), m, c);
    p.to_string()
}

#[test]
fn nine_lead_term_facts() {
    let v3 = Representation::even(3, Scalar::lambda()).unwrap();
    let v2 = Representation::even(2, Scalar::lambda()).unwrap();
    let v4 = Representation::even(4, Scalar::lambda()).unwrap();
    // c = l^2 + l, c^2 = l^4 + l^2
    assert_eq!(lt(&v4, "N_1"), "y1^2");
    assert_eq!(lt(&v4, "N_2"), "y2^2");
    for j in 1..=3 {
        assert_eq!(lt(&v3, &format!("N(y{j})")), format!("y{j}^4"));
    }
    assert_eq!(named(&v3, "u_123").unwrap().lm().unwrap().format(&v3.ring().vars), "x2*x3*y1");
    assert_eq!(lt(&v2, "w"), "((l^2+l)/1)*x2^3*y1");
    assert_eq!(lt(&v3, "n_23"), "((l^2+l)/1)*x3*y2^2");
    assert_eq!(lt(&v3, "u_133"), "((l^2+l)/1)*x3^2*y1");
    assert_eq!(lt(&v3, "n_222"), "x2^2*y2^2");
    assert_eq!(lt(&v3, "u_2333"), "((l^4+l^2)/1)*x3^3*y2");
    assert_eq!(lt(&v3, "Tr(y1*y2*y3^3)"), "((l^2+l)/1)*x3^3*y1*y2");
}

#[test]
fn identities_hold_symbolically_and_at_omega() {
    let omega = Scalar::generator(2);
    for rep in catalog() {
        for id in identity_ids(&rep) {
            let v = verify_identity(&rep, id).unwrap();
            let expect = id != "norm-y1-stated-v2";
            assert_eq!(v.holds, expect, "{rep}: {id}: {}", v.difference);
            if matches!(rep.field(), FieldDescriptor::RationalFunction) {
                let conc = rep.evaluate_lambda(&omega).unwrap();
                let v = verify_identity(&conc, id).unwrap();
                assert_eq!(v.holds, expect, "{conc}: {id}");
            }
        }
    }
}

#[test]
fn top_class_transfer_of_v3_generic_is_in_b3() {
    let rep = Representation::even(3, Scalar::lambda()).unwrap();
    let b = candidate_generating_set(&rep).unwrap();
    assert_eq!(b.len(), 16);
}
