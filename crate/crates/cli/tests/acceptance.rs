//! Acceptance run: one line per checked claim, grouped by criterion.
//!
//! All comparisons are exact (tolerance: equality). A line marked FAIL with
//! a recorded deviation means the listed target disagrees with the value
//! established independently below; the harness then checks the recorded
//! value instead, so the binary still fails on any unexplained change.

use std::time::Instant;

use klein_cli::{finite_specialization, generation_bound};
use klein_core::coeff::{Gf2Poly, RatFn};
use klein_core::construct::{self, candidate_generating_set, hilbert_ideal_generators, hsop, NamedInvariant};
use klein_core::gb;
use klein_core::oracle::{self, Oracle, LEMMA_IDS};
use klein_core::sagbi::{self, Subductor};
use klein_core::{Error, FieldDescriptor, GroupElement, Polynomial, Representation, Scalar};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    /// Fails the listed target; matches the recorded analysis.
    Deviation,
}

struct Line {
    criterion: u8,
    status: Status,
    text: String,
}

fn line(criterion: u8, pass: bool, text: String) -> Line {
    Line { criterion, status: if pass { Status::Pass } else { Status::Fail }, text }
}

fn rep(s: &str) -> Representation {
    Representation::from_selector(s).unwrap()
}

/// Noether targets. The third field is the recorded value when the target
/// is known to disagree with the computation.
const NOETHER: [(&str, u32, Option<u32>); 17] = [
    ("Vm:1:lambda=t", 4, None),
    ("Vm:2:lambda=t", 4, None),
    ("Vm:3:lambda=t", 7, None),
    ("Vm:4:lambda=t", 8, None),
    ("Vm:2:lambda=0", 4, None),
    ("Vm:3:lambda=0", 5, None),
    ("Vm:4:lambda=0", 8, None),
    ("Vm:5:lambda=0", 11, Some(9)),
    ("Omega-:1", 2, None),
    ("Omega-:2", 3, None),
    ("Omega-:3", 4, None),
    ("Omega-:4", 5, None),
    ("Omega+:1", 4, None),
    ("Omega+:2", 6, None),
    ("Omega+:3", 9, None),
    ("Vreg", 4, None),
    // supplementary: generic lambda at m = 5
    ("Vm:5:lambda=t", 11, None),
];

const INDECOMPOSABLE: [&str; 9] = [
    "Vm:3:lambda=t",
    "Vm:4:lambda=t",
    "Vm:4:lambda=0",
    "Vm:5:lambda=0",
    "Omega-:2",
    "Omega-:3",
    "Omega-:4",
    "Omega+:2",
    "Omega+:3",
];

/// Block-hsop and Hilbert-ideal range.
fn hsop_range() -> Vec<String> {
    let mut v = Vec::new();
    for m in 2..=5 {
        v.push(format!("Vm:{m}:lambda=t"));
    }
    for m in 2..=5 {
        v.push(format!("Vm:{m}:lambda=0"));
    }
    for m in 1..=4 {
        v.push(format!("Omega-:{m}"));
    }
    for m in 1..=3 {
        v.push(format!("Omega+:{m}"));
    }
    v.push("Vreg".into());
    v
}

/// Everything that needs the linear-algebra oracle for one representation.
fn oracle_job(sel: &str) -> Vec<Line> {
    let r = rep(sel);
    let mut out = Vec::new();
    let mut o = Oracle::new(&r).unwrap();
    let upper = generation_bound(&r).unwrap();
    let target = NOETHER.iter().find(|t| t.0 == sel).copied();
    let t0 = Instant::now();

    // criterion 1
    if let Some((_, expected, recorded)) = target {
        let bound = upper.max(expected);
        let res = o.generator_profile(bound);
        let text = |p: &klein_core::oracle::GeneratorProfile| {
            let counts: Vec<String> = p.new_generators.iter().map(|c| c.to_string()).collect();
            format!(
                "noether {sel}: expected {expected}, computed {} (profile to degree {bound}, generation bound {upper}; new generators [{}]) [{:.1}s]",
                p.noether_number,
                counts.join(","),
                t0.elapsed().as_secs_f64()
            )
        };
        match (res, recorded) {
            (Ok(p), None) => out.push(line(1, p.noether_number == expected, text(&p))),
            (Ok(p), Some(rec)) => {
                let mut l = line(1, p.noether_number == expected, text(&p));
                if p.noether_number == rec {
                    l.status = Status::Deviation;
                    l.text.push_str(&format!(
                        " -- recorded deviation: the family formula 3m-2*ceil(m/2) gives {rec}, the computation agrees"
                    ));
                }
                out.push(l);
            }
            (Err(e), _) => out.push(line(1, false, format!("noether {sel}: error {e}"))),
        }
    }

    // criterion 4
    let spec = hsop(&r).unwrap();
    let vars = &r.ring().vars;
    if INDECOMPOSABLE.contains(&sel) {
        let t = Instant::now();
        let tr = construct::transfer_monomial(&r, &spec.top_class).unwrap();
        let dec = o.is_decomposable(&tr).unwrap();
        out.push(line(
            4,
            !dec,
            format!("indecomposable {sel}: Tr({}) decomposable = {dec} [{:.1}s]", spec.top_class.format(vars), t.elapsed().as_secs_f64()),
        ));
    }
    if target.is_some() {
        out.push(decomposable_sanity(&r, sel, &mut o, &spec, upper));
    }

    // criteria 2 and 6
    if hsop_range().iter().any(|s| s == sel) {
        let v = spec.check_block().unwrap();
        let got = v.top_class.as_ref().map_or("-".into(), |t| t.format(vars));
        out.push(line(
            2,
            v.pass(),
            format!("block hsop {sel}: groebner {}, top class {got}, claimed {}", v.is_groebner, spec.top_class.format(vars)),
        ));
        let t = Instant::now();
        let gens = hilbert_ideal_generators(&r).unwrap();
        let names: Vec<&str> = gens.iter().map(|g| g.name.as_str()).collect();
        let h = gb::hilbert_ideal_equals_in(&mut o, &gens, 64).unwrap();
        let w = h.witness.map(|(d, f)| format!("; degree {d} witness {f}")).unwrap_or_default();
        out.push(line(
            6,
            h.pass,
            format!("hilbert {sel}: generated by {{{}}}{w} [{:.1}s]", names.join(", "), t.elapsed().as_secs_f64()),
        ));
        let top = gens.iter().filter_map(|g| g.value.degree()).max().unwrap_or(0);
        out.push(line(6, top <= 4, format!("hilbert {sel}: max generator degree {top} <= 4")));
    }

    // criterion 7: lemma predicates, m <= 4, degree <= 6
    if r.m() <= 4 {
        let mut counts = vec![0usize; LEMMA_IDS.len()];
        let mut bad = Vec::new();
        for d in 1..=6 {
            for f in o.invariant_basis(d).unwrap() {
                for (i, lemma) in LEMMA_IDS.iter().enumerate() {
                    match oracle::lemma_predicate(&r, &f, lemma) {
                        Ok(v) => {
                            counts[i] += 1;
                            if !v.pass {
                                bad.push(format!("{lemma} on {f}: {}", v.violation.unwrap_or_default()));
                            }
                        }
                        Err(Error::NotApplicable(_)) => {}
                        Err(e) => bad.push(format!("{lemma}: {e}")),
                    }
                }
            }
        }
        let applied: Vec<String> =
            LEMMA_IDS.iter().zip(&counts).filter(|(_, c)| **c > 0).map(|(l, c)| format!("{l}:{c}")).collect();
        out.push(line(
            7,
            bad.is_empty(),
            format!("lemmas {sel}: degree <= 6, checked [{}]{}", applied.join(" "), bad.first().map(|b| format!("; {b}")).unwrap_or_default()),
        ));
    }
    out
}

/// Three seeded products Tr(proper divisor) * hsop element must be decomposable.
fn decomposable_sanity(r: &Representation, sel: &str, o: &mut Oracle, spec: &construct::HsopSpec, upper: u32) -> Line {
    let vars = &r.ring().vars;
    let mut pool: Vec<(String, Polynomial)> = Vec::new();
    for d in construct::divisors(&spec.top_class, r.nvars()) {
        if d == spec.top_class || d.degree() == 0 {
            continue;
        }
        let t = construct::transfer_monomial(r, &d).unwrap();
        if !t.is_zero() {
            pool.push((d.format(vars), t));
        }
    }
    let seed = sel.bytes().fold(7u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut cases = Vec::new();
    let mut ok = true;
    let mut tries = 0;
    while cases.len() < 3 && tries < 200 && !pool.is_empty() {
        tries += 1;
        let (dn, t) = &pool[rng.gen_range(0..pool.len())];
        let h: &NamedInvariant = &spec.elements[rng.gen_range(0..spec.elements.len())];
        let f = t * &h.value;
        if f.degree().unwrap_or(0) > upper {
            continue;
        }
        let dec = o.is_decomposable(&f).unwrap();
        ok &= dec;
        cases.push(format!("Tr({dn})*{}:{}", h.name, if dec { "decomposable" } else { "INDECOMPOSABLE" }));
    }
    let enough = cases.len() == 3 || pool.is_empty();
    line(4, ok && enough, format!("products {sel}: {}", if pool.is_empty() { "no nonzero proper transfers".into() } else { cases.join(", ") }))
}

fn identity_lines() -> Vec<Line> {
    let mut out = Vec::new();
    let sels = [
        "Vm:2:lambda=l",
        "Vm:3:lambda=l",
        "Vm:4:lambda=l",
        "Vm:2:lambda=0",
        "Vm:3:lambda=0",
        "Omega-:2",
        "Omega-:3",
        "Omega+:2",
        "Omega+:3",
        "Omega+:4",
        "Vreg",
    ];
    for sel in sels {
        let r = rep(sel);
        let mut targets = vec![(r.clone(), "")];
        if matches!(r.field(), FieldDescriptor::RationalFunction) {
            targets.push((finite_specialization(&r).unwrap(), "@omega"));
        }
        for (t, sfx) in targets {
            for id in construct::identity_ids(&t) {
                let v = construct::verify_identity(&t, id).unwrap();
                if id == "norm-y1-stated-v2" {
                    // not a listed identity; the stated form is degree-inconsistent
                    let mut l = line(3, !v.holds, format!("identity {sel}{sfx} {id}: fails as stated, as recorded"));
                    if v.holds {
                        l.text = format!("identity {sel}{sfx} {id}: unexpectedly holds");
                    }
                    out.push(l);
                    continue;
                }
                out.push(line(3, v.holds, format!("identity {sel}{sfx} {id}: lhs - rhs = {}", if v.holds { "0".into() } else { v.difference.to_string() })));
            }
        }
    }
    out
}

fn polys(set: &[NamedInvariant]) -> Vec<Polynomial> {
    set.iter().map(|e| e.value.clone()).collect()
}

fn sagbi_lines() -> Vec<Line> {
    let mut out = Vec::new();
    for (sel, label) in [("Vreg", "C"), ("Omega+:2", "B_2"), ("Vm:3:lambda=l", "B_3,lambda")] {
        let t = Instant::now();
        let set = candidate_generating_set(&rep(sel)).unwrap();
        let v = sagbi::sagbi_test(&polys(&set), None, None).unwrap();
        out.push(line(
            5,
            v.pass,
            format!("sagbi {label} ({sel}): {} tete-a-tetes checked, pass {} [{:.1}s]", v.relations_checked, v.pass, t.elapsed().as_secs_f64()),
        ));
    }
    for (sel, label, drop, deg) in [("Vm:3:lambda=l", "B_3,lambda", "Tr(y1*y2^3*y3^3)", 7), ("Omega+:2", "B_2", "Tr(y1^3*y2^3)", 6)] {
        let set: Vec<NamedInvariant> = candidate_generating_set(&rep(sel)).unwrap().into_iter().filter(|e| e.name != drop).collect();
        let v = sagbi::sagbi_test(&polys(&set), None, None).unwrap();
        let cd = v.candidate.as_ref().and_then(|c| c.degree());
        out.push(line(
            5,
            !v.pass && cd == Some(deg),
            format!("sagbi {label} without {drop}: pass {}, witness degree {} (expected {deg})", v.pass, cd.map_or("-".into(), |d| d.to_string())),
        ));
    }
    for sel in ["Omega-:2", "Omega-:3", "Vm:3:lambda=0"] {
        let t = Instant::now();
        let r = rep(sel);
        let (input, x) = construct::divide_by_x_input(&r).unwrap();
        let done = sagbi::sagbi_divide_by_x(&input, &x, 8, None, None).unwrap();
        let target = polys(&candidate_generating_set(&r).unwrap());
        let same = sagbi::same_generating_set(&polys(&done.basis), &target).unwrap();
        out.push(line(
            5,
            same,
            format!(
                "divide-by-x {sel}: {} sweeps, {} elements, equals the stated set {same} [{:.1}s]",
                done.sweeps,
                done.basis.len(),
                t.elapsed().as_secs_f64()
            ),
        ));
    }
    out
}

fn property_lines() -> Vec<Line> {
    let mut out = Vec::new();
    // field axioms: exhaustive on GF(4) and GF(8), sampled on F_2(l)
    for k in [2u8, 3] {
        let f = FieldDescriptor::gf2k(k).unwrap();
        let els: Vec<Scalar> = (0..(1u16 << k)).map(|b| f.element(b as u8)).collect();
        let mut ok = true;
        for a in &els {
            for b in &els {
                for c in &els {
                    ok &= field_axioms(a, b, c);
                }
            }
        }
        out.push(line(7, ok, format!("field axioms GF(2^{k}): all {} triples", els.len().pow(3))));
    }
    let mut rng = StdRng::seed_from_u64(11);
    let mut ok = true;
    for _ in 0..200 {
        let mut s = || Scalar::Rational(RatFn::new(Gf2Poly::from_bits(rng.gen_range(0..256)), Gf2Poly::from_bits(rng.gen_range(1..64))).unwrap());
        let (a, b, c) = (s(), s(), s());
        ok &= field_axioms(&a, &b, &c);
    }
    out.push(line(7, ok, "field axioms F_2(l): 200 seeded triples".into()));

    // order conformance via the lead-term facts
    let facts: [(&str, &str, &str); 9] = [
        ("Vm:4:lambda=l", "N_1", "y1^2"),
        ("Vm:4:lambda=l", "N_2", "y2^2"),
        ("Vm:3:lambda=l", "N(y3)", "y3^4"),
        ("Vm:3:lambda=l", "u_123", "((l^2+l)/1)*x2*x3*y1"),
        ("Vm:2:lambda=l", "w", "((l^2+l)/1)*x2^3*y1"),
        ("Vm:3:lambda=l", "n_23", "((l^2+l)/1)*x3*y2^2"),
        ("Vm:3:lambda=l", "u_133", "((l^2+l)/1)*x3^2*y1"),
        ("Vm:3:lambda=l", "n_222", "x2^2*y2^2"),
        ("Vm:3:lambda=l", "u_2333", "((l^4+l^2)/1)*x3^3*y2"),
    ];
    for (sel, name, want) in facts {
        let r = rep(sel);
        let (m, c) = construct::named(&r, name).unwrap().leading_term().unwrap();
        let got = Polynomial::term(r.ring(), m, c).to_string();
        out.push(line(7, got == want, format!("lead term {sel} {name}: {got}")));
    }

    // group law and Delta^2 = 0 on variables and hsop elements
    let mut catalog = vec![rep("Vreg")];
    for m in 1..=4 {
        for s in [format!("Vm:{m}:lambda=l"), format!("Vm:{m}:lambda=0"), format!("Omega-:{m}"), format!("Omega+:{m}")] {
            catalog.push(rep(&s));
        }
    }
    for r in &catalog {
        let mut fs: Vec<Polynomial> = (0..r.nvars()).map(|i| Polynomial::var_at(r.ring(), i)).collect();
        fs.extend(hsop(r).unwrap().polys());
        let prod = fs.iter().take(3).fold(Polynomial::one(r.ring()), |a, b| &a * b);
        fs.push(prod);
        let mut ok = true;
        for f in &fs {
            use GroupElement::*;
            let s1 = r.act(Sigma1, f).unwrap();
            let s2 = r.act(Sigma2, f).unwrap();
            ok &= r.act(Sigma1, &s1).unwrap() == *f;
            ok &= r.act(Sigma2, &s2).unwrap() == *f;
            ok &= r.act(Sigma1, &s2).unwrap() == r.act(Sigma2, &s1).unwrap();
            for i in 1..=2 {
                ok &= r.delta(i, &r.delta(i, f).unwrap()).unwrap().is_zero();
            }
        }
        out.push(line(7, ok, format!("group law and Delta^2 = 0 {r}: {} polynomials", fs.len())));
    }

    // subduction soundness: products of generator pairs re-expand exactly
    for sel in ["Vreg", "Omega+:2", "Omega-:2", "Vm:3:lambda=l"] {
        let gens = polys(&candidate_generating_set(&rep(sel)).unwrap());
        let mut s = Subductor::new(&gens).unwrap();
        let mut ok = true;
        let mut n = 0;
        for i in 0..gens.len() {
            for j in i..gens.len().min(i + 4) {
                let f = &gens[i] * &gens[j];
                let sub = s.subduct(&f).unwrap();
                ok &= sub.remainder.is_zero() && s.expand(&sub) == f;
                n += 1;
            }
        }
        out.push(line(7, ok, format!("subduction re-expansion {sel}: {n} products")));
    }
    out
}

fn field_axioms(a: &Scalar, b: &Scalar, c: &Scalar) -> bool {
    let add = |x: &Scalar, y: &Scalar| x.try_add(y).unwrap();
    let mul = |x: &Scalar, y: &Scalar| x.try_mul(y).unwrap();
    let mut ok = add(a, b) == add(b, a)
        && mul(a, b) == mul(b, a)
        && add(&add(a, b), c) == add(a, &add(b, c))
        && mul(&mul(a, b), c) == mul(a, &mul(b, c))
        && mul(a, &add(b, c)) == add(&mul(a, b), &mul(a, c))
        && add(a, a).is_zero();
    if !a.is_zero() {
        ok &= mul(a, &a.inv().unwrap()).is_one();
    }
    ok
}

fn main() {
    let start = Instant::now();
    let mut sels: Vec<String> = NOETHER.iter().map(|t| t.0.to_string()).collect();
    for s in hsop_range() {
        if !sels.contains(&s) {
            sels.push(s);
        }
    }
    // heaviest first so a single worker is not left with them at the end
    sels.sort_by_key(|s| std::cmp::Reverse(generation_bound(&rep(s)).unwrap() * rep(s).nvars() as u32));
    type Job = Box<dyn Fn() -> Vec<Line> + Send + Sync>;
    let mut jobs: Vec<Job> = Vec::new();
    for s in sels {
        jobs.push(Box::new(move || oracle_job(&s)));
    }
    jobs.push(Box::new(identity_lines));
    jobs.push(Box::new(sagbi_lines));
    jobs.push(Box::new(property_lines));
    let mut lines: Vec<Line> = jobs.par_iter().flat_map(|j| j()).collect();
    lines.sort_by_key(|l| l.criterion);

    println!("acceptance: exact arithmetic, tolerance = equality");
    let mut unexplained = 0;
    for l in &lines {
        let tag = match l.status {
            Status::Pass => "PASS",
            Status::Fail | Status::Deviation => "FAIL",
        };
        println!("[{}] {tag} {}", l.criterion, l.text);
        if l.status == Status::Fail {
            unexplained += 1;
        }
    }
    println!();
    for c in 1..=7u8 {
        let mine: Vec<&Line> = lines.iter().filter(|l| l.criterion == c).collect();
        let fails = mine.iter().filter(|l| l.status != Status::Pass).count();
        let dev = mine.iter().filter(|l| l.status == Status::Deviation).count();
        let verdict = if fails == 0 { "PASS".to_string() } else { format!("FAIL ({fails} lines, {dev} recorded deviations)") };
        println!("criterion {c}: {verdict} ({} lines)", mine.len());
    }
    println!("elapsed {:.1}s", start.elapsed().as_secs_f64());
    if unexplained > 0 {
        eprintln!("{unexplained} unexplained failures");
        std::process::exit(1);
    }
}
