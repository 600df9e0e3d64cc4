use klein_core::construct::{hilbert_ideal_generators, hsop, invariant_names, named};
use klein_core::gb;
use klein_core::oracle::{DegreeSpace, Oracle};
use klein_core::{FieldDescriptor, Monomial, Polynomial, Representation};

fn rep(s: &str) -> Representation {
    Representation::from_selector(s).unwrap()
}

fn texts(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

#[test]
fn regular_hilbert_ideal_reduced_basis() {
    let r = rep("Vreg");
    let g: Vec<Polynomial> = hilbert_ideal_generators(&r).unwrap().into_iter().map(|e| e.value).collect();
    let basis = gb::buchberger(&g).unwrap();
    assert_eq!(texts(&basis.generators), ["z^4", "y1^2", "y2*y1", "y2^2", "x"]);
    // the hsop alone leaves y2*y1 outside
    let h = gb::buchberger(&hsop(&r).unwrap().polys()).unwrap();
    assert_eq!(texts(&h.generators), ["z^4+y2*y1*z^2", "y1^2", "y2^2", "x"]);
    assert!(!h.contains(&r.parse("y2*y1").unwrap()));
    assert!(basis.contains(&named(&r, "u").unwrap()));
}

#[test]
fn normal_form_examples() {
    let r = rep("Vm:1:lambda=l");
    let gens = vec![r.parse("x1").unwrap(), named(&r, "N(y1)").unwrap()];
    // modulo x1 the norm is y1^4
    assert_eq!(gb::normal_form(&r.parse("y1^5+x1*y1+y1^3").unwrap(), &gens).to_string(), "y1^3");
    assert!(gb::normal_form(&r.parse("y1^4").unwrap(), &gens).is_zero());
    let (rem, q) = gb::normal_form_with_record(&r.parse("y1^4+y1").unwrap(), &gens);
    assert_eq!(rem.to_string(), "y1");
    assert_eq!(q.len(), 2);
}

#[test]
fn monic_division_by_n1() {
    let r = rep("Vm:2:lambda=t");
    let n1 = named(&r, "N_1").unwrap();
    let f = named(&r, "N(y1)").unwrap();
    let y1 = r.ring().vars.index_of("y1").unwrap();
    let (q, rem) = f.monic_divide(&n1, y1).unwrap();
    assert_eq!(&(&q * &n1) + &rem, f);
    assert!(r.is_invariant(&q).unwrap());
    assert!(r.is_invariant(&rem).unwrap());
    assert_eq!(q.to_string(), "y1^2+x2*y1+x2^2+x1*y2+x1*y1+x1^2");
    assert_eq!(rem.to_string(), "x2^3*y1+x1*x2^2*y2+x1*x2^2*y1+x1^2*y2^2+x1^2*x2*y1+x1^3*y2");
    // the divisor must be monic in y1
    assert!(f.monic_divide(&r.parse("x1*y1").unwrap(), y1).is_err());
}

fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    let sp = DegreeSpace::new(n, d);
    (0..sp.len() as u32).map(|i| *sp.monomial(i)).collect()
}

/// Invariant dimension by enumerating every polynomial of the degree.
fn brute_dimension(r: &Representation, d: u32) -> usize {
    let monos: Vec<Monomial> = monomials(r.nvars(), d);
    assert!(monos.len() <= 16, "too many monomials for enumeration");
    let mut count = 0usize;
    for mask in 0u32..(1 << monos.len()) {
        let f = Polynomial::from_terms(
            r.ring(),
            monos.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, m)| (*m, FieldDescriptor::Gf2.one())),
        );
        if r.is_invariant(&f).unwrap() {
            count += 1;
        }
    }
    count.trailing_zeros() as usize
}

#[test]
fn oracle_dimensions_match_enumeration() {
    for (s, top) in [("Vm:1:lambda=0", 6), ("Vm:1:lambda=1", 6), ("Omega-:1", 4), ("Omega+:1", 4), ("Vm:2:lambda=0", 3), ("Vreg", 3)] {
        let r = rep(s);
        let mut o = Oracle::new(&r).unwrap();
        for d in 0..=top {
            if monomials(r.nvars(), d).len() > 16 {
                break;
            }
            assert_eq!(o.dimension(d).unwrap(), brute_dimension(&r, d), "{s} degree {d}");
        }
    }
}

#[test]
fn oracle_agrees_with_constructions() {
    for s in ["Vm:2:lambda=t", "Vm:3:lambda=t", "Vm:3:lambda=0", "Omega-:2", "Omega-:3", "Omega+:2", "Vreg"] {
        let r = rep(s);
        let mut o = Oracle::new(&r).unwrap();
        for name in invariant_names(&r) {
            let f = named(&r, &name).unwrap();
            if f.degree().unwrap_or(0) > 8 {
                continue;
            }
            assert!(o.in_invariant_span(&f).unwrap(), "{s}: {name}");
        }
        assert!(!o.in_invariant_span(&r.y(1)).unwrap());
        // degree one invariants are the x variables
        let xs = (0..r.nvars()).filter(|&i| r.ring().vars.name(i).starts_with('x')).count();
        assert_eq!(o.dimension(1).unwrap(), xs, "{s}");
    }
}

#[test]
fn oracle_bases_do_not_depend_on_enumeration_order() {
    for s in ["Vm:3:lambda=t", "Omega+:2", "Omega-:3"] {
        let r = rep(s);
        let mut a = Oracle::new(&r).unwrap();
        let mut b = Oracle::new(&r).unwrap().permuted();
        for d in 1..=5 {
            assert_eq!(a.invariant_basis(d).unwrap(), b.invariant_basis(d).unwrap(), "{s} degree {d}");
        }
        assert_eq!(a.generator_profile(5).unwrap(), b.generator_profile(5).unwrap());
    }
}

#[test]
fn decomposability_examples() {
    let r = rep("Vm:2:lambda=t");
    let mut o = Oracle::new(&r).unwrap();
    let x1n1 = &r.x(1) * &named(&r, "N_1").unwrap();
    assert!(o.is_decomposable(&x1n1).unwrap());
    assert!(!o.is_decomposable(&named(&r, "N_1").unwrap()).unwrap());
    assert!(o.is_decomposable(&r.y(1)).is_err());
    // Tr(1) = 0 and degree zero has no transfers
    assert!(o.transfer_image(0).unwrap().basis.is_empty());
}
