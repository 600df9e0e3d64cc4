//! Batch driver: runs named verification suites against one representation
//! and assembles an order-stable report.
//!
//! Claims are grouped into jobs. Jobs run on a rayon pool; each returns its
//! claims in a fixed order, and the report keeps job order, so the claim list
//! does not depend on scheduling. Wall times live in a separate `timings`
//! list so two runs can be diffed on `claims` alone.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use klein_core::construct::{self, NamedInvariant};
use klein_core::gb;
use klein_core::oracle::{self, Oracle, LEMMA_IDS};
use klein_core::sagbi;
use klein_core::{Error, FieldDescriptor, Monomial, Polynomial, RepKind, Representation, Scalar};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

/// Suite names accepted by `--suite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Leadterms,
    Identities,
    Hsop,
    Hilbert,
    Transfer,
    Lemmas,
    Noether,
    Sagbi,
    All,
}

impl Suite {
    /// Order used by `all`: cheapest first.
    pub const ORDER: [Suite; 8] = [
        Suite::Leadterms,
        Suite::Identities,
        Suite::Hsop,
        Suite::Hilbert,
        Suite::Transfer,
        Suite::Lemmas,
        Suite::Noether,
        Suite::Sagbi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Leadterms => "leadterms",
            Suite::Identities => "identities",
            Suite::Hsop => "hsop",
            Suite::Hilbert => "hilbert",
            Suite::Transfer => "transfer",
            Suite::Lemmas => "lemmas",
            Suite::Noether => "noether",
            Suite::Sagbi => "sagbi",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Suite::ORDER
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(ConfigError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("unknown format '{0}'")]
    UnknownFormat(String),
    #[error("degree bound must be at least 1")]
    DegreeBound,
    #[error("budget must be at least 1")]
    Budget,
    #[error(transparent)]
    Core(#[from] Error),
    #[error("writing report: {0}")]
    Io(#[from] std::io::Error),
}

/// Everything a run depends on.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub rep: String,
    pub suite: Suite,
    #[serde(rename = "degreeBound")]
    pub degree_bound: u32,
    /// Overrides the lambda of a `Vm` selector; coefficient grammar, `l` is
    /// the indeterminate of F_2(l).
    pub lambda: Option<String>,
    /// Sweep limit for divide-by-x.
    pub budget: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
    /// Worker cap; not part of the echo.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            rep: "Vreg".into(),
            suite: Suite::All,
            degree_bound: 12,
            lambda: None,
            budget: 8,
            out: None,
            format: Format::Json,
            threads: None,
        }
    }
}

impl SuiteConfig {
    /// The representation named by the selector, with `lambda` applied.
    pub fn representation(&self) -> Result<Representation, ConfigError> {
        if self.degree_bound == 0 {
            return Err(ConfigError::DegreeBound);
        }
        if self.budget == 0 {
            return Err(ConfigError::Budget);
        }
        let sel = match (&self.lambda, self.rep.strip_prefix("Vm:")) {
            (Some(l), Some(rest)) => {
                let m = rest.split(':').next().unwrap_or("");
                let k = rest.split(':').find_map(|p| p.strip_prefix("k="));
                match k {
                    Some(k) => format!("Vm:{m}:lambda={l}:k={k}"),
                    None => format!("Vm:{m}:lambda={l}"),
                }
            }
            _ => self.rep.clone(),
        };
        Ok(Representation::from_selector(&sel)?)
    }
}

/// One verdict.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Claim {
    pub id: String,
    /// Plain statement of what is being checked.
    pub anchor: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub id: String,
    #[serde(rename = "wallMs")]
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Result of a run.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: SuiteConfig,
    pub representation: String,
    pub claims: Vec<Claim>,
    pub summary: Summary,
    /// Wall time per claim; excluded from fixture comparisons.
    pub timings: Vec<Timing>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} rep={} suite={} D={}", self.tool, self.version, self.representation, self.config.suite.name(), self.config.degree_bound);
        for (c, t) in self.claims.iter().zip(&self.timings) {
            let _ = write!(s, "{} {}  {}", if c.pass { "PASS" } else { "FAIL" }, c.id, c.anchor);
            if let Some(w) = &c.witness {
                let _ = write!(s, "  [{w}]");
            }
            let _ = writeln!(s, "  ({} ms)", t.wall_ms);
        }
        let _ = writeln!(s, "{} claims, {} passed, {} failed", self.summary.total, self.summary.passed, self.summary.failed);
        s
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }

    /// Write to `path` via a temporary file and rename.
    pub fn write_atomic(&self, path: &std::path::Path) -> std::io::Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.render())?;
        std::fs::rename(&tmp, path)
    }
}

fn claim(id: impl Into<String>, anchor: impl Into<String>, pass: bool, witness: Option<String>) -> Claim {
    Claim { id: id.into(), anchor: anchor.into(), pass, witness }
}

fn errored(id: impl Into<String>, anchor: impl Into<String>, e: &Error) -> Claim {
    claim(id, anchor, false, Some(format!("error: {e}")))
}

type Timed = (Claim, u64);
type Job = Box<dyn Fn() -> Vec<Timed> + Send + Sync>;

/// Wraps a fallible single-claim check with timing; errors become failed claims.
fn single<F>(id: String, anchor: String, f: F) -> Job
where
    F: Fn() -> klein_core::Result<(bool, Option<String>)> + Send + Sync + 'static,
{
    Box::new(move || {
        let t = Instant::now();
        let c = match f() {
            Ok((pass, w)) => claim(id.clone(), anchor.clone(), pass, w),
            Err(e) => errored(id.clone(), anchor.clone(), &e),
        };
        vec![(c, t.elapsed().as_millis() as u64)]
    })
}

/// Runs the configured suites.
pub fn run(config: &SuiteConfig) -> Result<Report, ConfigError> {
    let rep = config.representation()?;
    let suites: Vec<Suite> = if config.suite == Suite::All { Suite::ORDER.to_vec() } else { vec![config.suite] };
    let mut jobs: Vec<Job> = Vec::new();
    for s in suites {
        jobs.extend(suite_jobs(s, &rep, config)?);
    }
    let exec = || jobs.par_iter().map(|j| j()).collect::<Vec<_>>();
    let results = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|p| p.install(exec))
            .unwrap_or_else(|_| exec()),
        None => exec(),
    };
    let mut claims = Vec::new();
    let mut timings = Vec::new();
    for (c, ms) in results.into_iter().flatten() {
        timings.push(Timing { id: c.id.clone(), wall_ms: ms });
        claims.push(c);
    }
    let passed = claims.iter().filter(|c| c.pass).count();
    let summary = Summary { total: claims.len(), passed, failed: claims.len() - passed };
    let report = Report {
        tool: "klein",
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        representation: rep.to_string(),
        claims,
        summary,
        timings,
    };
    if let Some(p) = &config.out {
        report.write_atomic(p)?;
    }
    Ok(report)
}

/// The registry of named invariants as JSON.
pub fn registry_json(rep: &Representation) -> Result<String, ConfigError> {
    let entries = construct::registry(rep)?;
    Ok(serde_json::to_string_pretty(&entries).expect("registry serializes"))
}

fn suite_jobs(s: Suite, rep: &Representation, cfg: &SuiteConfig) -> Result<Vec<Job>, ConfigError> {
    Ok(match s {
        Suite::Leadterms => leadterm_jobs(rep),
        Suite::Identities => identity_jobs(rep)?,
        Suite::Hsop => hsop_jobs(rep)?,
        Suite::Hilbert => hilbert_jobs(rep, cfg)?,
        Suite::Transfer => transfer_jobs(rep, cfg)?,
        Suite::Lemmas => lemma_jobs(rep, cfg)?,
        Suite::Noether => noether_jobs(rep, cfg)?,
        Suite::Sagbi => sagbi_jobs(rep, cfg)?,
        Suite::All => unreachable!("expanded by run"),
    })
}

fn is_symbolic(rep: &Representation) -> bool {
    matches!(rep.field(), FieldDescriptor::RationalFunction)
}

/// The representation the oracle works over: lambda = omega in GF(4) when
/// the coefficients are symbolic.
pub fn finite_specialization(rep: &Representation) -> Result<Representation, Error> {
    if is_symbolic(rep) {
        rep.evaluate_lambda(&Scalar::generator(2))
    } else {
        Ok(rep.clone())
    }
}

fn suffix(rep: &Representation) -> &'static str {
    if is_symbolic(rep) {
        "@omega"
    } else {
        ""
    }
}

fn generic_even(rep: &Representation) -> bool {
    rep.lambda().is_some_and(|l| !l.in_prime_field())
}

/// Expected Noether number of the family.
pub fn expected_noether(rep: &Representation) -> u32 {
    let m = rep.m() as u32;
    match rep.kind() {
        RepKind::Even { .. } if m == 1 => 4,
        RepKind::Even { .. } if generic_even(rep) => 3 * m - 2 * (m / 2),
        RepKind::Even { .. } => 3 * m - 2 * m.div_ceil(2),
        RepKind::OmegaMinus { .. } => m + 1,
        RepKind::OmegaPlus { .. } if m == 1 => 4,
        RepKind::OmegaPlus { .. } if m == 2 => 6,
        RepKind::OmegaPlus { .. } => 3 * m,
        RepKind::Regular => 4,
    }
}

/// Degree beyond which no new generators exist: the top class degree or the
/// largest hsop degree, whichever is bigger.
pub fn generation_bound(rep: &Representation) -> Result<u32, Error> {
    let h = construct::hsop(rep)?;
    let top = h.elements.iter().filter_map(|e| e.value.degree()).max().unwrap_or(0);
    Ok(h.top_class.degree().max(top))
}

// ---- leadterms ----

/// Lead-term facts for generic lambda: (name, monomial, power of c).
const LEAD_FACTS: [(&str, &str, u32); 12] = [
    ("N_1", "y1^2", 0),
    ("N_2", "y2^2", 0),
    ("N(y1)", "y1^4", 0),
    ("N(y2)", "y2^4", 0),
    ("N(y3)", "y3^4", 0),
    ("u_123", "x2*x3*y1", 1),
    ("w", "x2^3*y1", 1),
    ("n_23", "x3*y2^2", 1),
    ("u_133", "x3^2*y1", 1),
    ("n_222", "x2^2*y2^2", 0),
    ("u_2333", "x3^3*y2", 2),
    ("Tr(y1*y2*y3^3)", "x3^3*y1*y2", 1),
];

fn leadterm_jobs(rep: &Representation) -> Vec<Job> {
    let mut jobs = Vec::new();
    if generic_even(rep) {
        for (name, mono, cpow) in LEAD_FACTS {
            if construct::named(rep, name).is_err() {
                continue;
            }
            let r = rep.clone();
            let anchor = format!("LT({name}) = c^{cpow}*{mono}");
            jobs.push(single(format!("leadterms.{name}"), anchor, move || {
                let f = construct::named(&r, name)?;
                let (m, c) = f.leading_term()?;
                let want_m = r.parse(mono)?.lm()?;
                let want_c = r.c().pow(cpow);
                let got = Polynomial::term(r.ring(), m, c.clone());
                let pass = m == want_m && c == want_c;
                Ok((pass, (!pass).then(|| format!("LT = {got}"))))
            }));
        }
    }
    let r = rep.clone();
    jobs.push(single(
        "leadterms.hsop-pure-powers".into(),
        "each hsop element has a pure-power lead monomial in a distinct variable".into(),
        move || {
            let h = construct::hsop(&r)?;
            let mut used = vec![false; r.nvars()];
            for e in &h.elements {
                let lm = e.value.lm()?;
                let vars: Vec<usize> = (0..r.nvars()).filter(|&i| lm.exp(i) > 0).collect();
                if vars.len() != 1 || used[vars[0]] {
                    return Ok((false, Some(format!("{}: LM {}", e.name, lm.format(&r.ring().vars)))));
                }
                used[vars[0]] = true;
            }
            Ok((true, None))
        },
    ));
    jobs
}

// ---- identities ----

fn identity_jobs(rep: &Representation) -> Result<Vec<Job>, ConfigError> {
    let mut jobs = Vec::new();
    let mut targets = vec![rep.clone()];
    if is_symbolic(rep) {
        targets.push(finite_specialization(rep)?);
    }
    for (ti, r) in targets.into_iter().enumerate() {
        let sfx = if ti == 0 { "" } else { "@omega" };
        for id in construct::identity_ids(&r) {
            let anchor = construct::identity(&r, id)?.statement.to_string();
            let r = r.clone();
            jobs.push(single(format!("identities.{id}{sfx}"), anchor, move || {
                let v = construct::verify_identity(&r, id)?;
                if v.holds {
                    return Ok((true, None));
                }
                let mut w = format!("lhs - rhs = {}", v.difference);
                if id == "norm-y1-stated-v2" {
                    let rec = construct::identity(&r, "norm-y1-recomputed-v2")?;
                    let ok = construct::verify_identity(&r, "norm-y1-recomputed-v2")?.holds;
                    let _ = write!(w, "; recomputed relation: {} ({})", rec.statement, if ok { "holds" } else { "fails" });
                }
                Ok((false, Some(w)))
            }));
        }
    }
    Ok(jobs)
}

// ---- hsop ----

fn hsop_jobs(rep: &Representation) -> Result<Vec<Job>, ConfigError> {
    let mut targets = vec![rep.clone()];
    if is_symbolic(rep) {
        targets.push(finite_specialization(rep)?);
    }
    let mut jobs = Vec::new();
    for (ti, r) in targets.into_iter().enumerate() {
        let sfx = if ti == 0 { "" } else { "@omega" };
        let spec = construct::hsop(&r)?;
        let names: Vec<String> = spec.elements.iter().map(|e| e.name.clone()).collect();
        let beta = spec.top_class.format(&r.ring().vars);
        let r1 = r.clone();
        jobs.push(single(
            format!("hsop.parameters{sfx}"),
            format!("{{{}}} is a homogeneous system of parameters", names.join(", ")),
            move || {
                let v = gb::is_hsop(&construct::hsop(&r1)?.polys())?;
                Ok((v.pass, (!v.pass).then(|| format!("no pure power for {}", v.missing.join(", ")))))
            },
        ));
        jobs.push(single(format!("hsop.block{sfx}"), format!("block hsop with top class {beta}"), move || {
            let spec = construct::hsop(&r)?;
            let v = spec.check_block()?;
            let w = (!v.pass()).then(|| match (&v.top_class, v.is_groebner) {
                (_, false) => "not a Groebner basis".to_string(),
                (None, true) => "standard monomials are not the divisors of one monomial".to_string(),
                (Some(t), true) => format!("top class is {}", t.format(&r.ring().vars)),
            });
            Ok((v.pass(), w))
        }));
    }
    Ok(jobs)
}

// ---- hilbert ----

fn hilbert_jobs(rep: &Representation, cfg: &SuiteConfig) -> Result<Vec<Job>, ConfigError> {
    let fin = finite_specialization(rep)?;
    let sfx = suffix(rep);
    let gens = construct::hilbert_ideal_generators(&fin)?;
    let names: Vec<String> = gens.iter().map(|g| g.name.clone()).collect();
    let bound = cfg.degree_bound;
    let r = fin.clone();
    let g2 = gens.clone();
    let mut jobs = vec![single(
        format!("hilbert.generators{sfx}"),
        format!("the Hilbert ideal is generated by {{{}}}", names.join(", ")),
        move || {
            let v = gb::hilbert_ideal_equals(&r, &g2, bound)?;
            let w = if let Some(n) = v.non_invariant {
                Some(format!("{n} is not invariant"))
            } else {
                v.witness.map(|(d, f)| format!("degree {d} invariant outside the ideal: {f}"))
            };
            Ok((v.pass, w))
        },
    )];
    jobs.push(single(
        format!("hilbert.degree-at-most-4{sfx}"),
        "the Hilbert ideal generators have degree at most 4".into(),
        move || {
            let top = gens.iter().filter_map(|g| g.value.degree()).max().unwrap_or(0);
            Ok((top <= 4, (top > 4).then(|| format!("max degree {top}"))))
        },
    ));
    Ok(jobs)
}

// ---- transfer ----

fn transfer_jobs(rep: &Representation, cfg: &SuiteConfig) -> Result<Vec<Job>, ConfigError> {
    let fin = finite_specialization(rep)?;
    let sfx = suffix(rep);
    let mut jobs = Vec::new();
    let r = fin.clone();
    jobs.push(single(format!("transfer.tr-one{sfx}"), "Tr(1) = 0".into(), move || {
        Ok((r.transfer(&Polynomial::one(r.ring()))?.is_zero(), None))
    }));
    let top = cfg.degree_bound.min(generation_bound(&fin)?);
    let r = fin.clone();
    jobs.push(single(
        format!("transfer.top-divisors{sfx}"),
        format!("the transfer image in degrees 1..={top} lies in the ideal of transfers of divisors of the top class"),
        move || {
            let mut o = Oracle::new(&r)?;
            for d in 1..=top {
                let t = o.transfer_image(d)?;
                if t.generated_by_top_divisors != Some(true) {
                    return Ok((false, Some(format!("degree {d}"))));
                }
            }
            Ok((true, None))
        },
    ));
    let m = fin.m();
    let mut spot = |id: &str, anchor: String, f: String, kmax: u32, expect: Option<(u32, u32)>| {
        let r = fin.clone();
        jobs.push(single(format!("transfer.{id}{sfx}"), anchor, move || {
            let f = construct::named(&r, &f).or_else(|_| r.parse(&f))?;
            let got = Oracle::new(&r)?.radical_membership(&f, kmax)?;
            let pass = match (expect, got) {
                (None, None) => true,
                (Some((lo, hi)), Some(k)) => (lo..=hi).contains(&k),
                _ => false,
            };
            Ok((pass, Some(format!("smallest k = {}", got.map_or("none".into(), |k| k.to_string())))))
        }));
    };
    match fin.kind() {
        RepKind::Even { .. } if m >= 3 => {
            for j in 3..=m {
                spot(&format!("t{j}-in-image"), format!("t_{j} lies in the transfer image"), format!("t_{j}"), 1, Some((1, 1)));
            }
            if generic_even(&fin) && m == 3 {
                spot("x1-radical", "some power x1^k with k <= 4 lies in the transfer image".into(), "x1".into(), 4, Some((1, 4)));
            }
        }
        RepKind::OmegaPlus { .. } if m >= 3 => {
            spot("alpha-cube", "(x2 + x3)^3 lies in the transfer image".into(), "x2^3+x2^2*x3+x2*x3^2+x3^3".into(), 1, Some((1, 1)));
            if m == 3 {
                spot("x2+x3-radical", "x2 + x3 lies in the radical with exponent 3".into(), "x2+x3".into(), 4, Some((3, 3)));
            }
        }
        RepKind::OmegaPlus { .. } if m == 2 => {
            spot("x1-not-radical", "no power x1^k with k <= 6 lies in the transfer image".into(), "x1".into(), 6, None);
            spot(
                "x1x2(x1+x2)-radical",
                "some power of x1*x2*(x1+x2) lies in the transfer image".into(),
                "x1^2*x2+x1*x2^2".into(),
                3,
                Some((1, 3)),
            );
        }
        _ => {}
    }
    Ok(jobs)
}

// ---- lemmas ----

fn lemma_jobs(rep: &Representation, cfg: &SuiteConfig) -> Result<Vec<Job>, ConfigError> {
    let fin = finite_specialization(rep)?;
    let sfx = suffix(rep);
    let top = cfg.degree_bound.min(6);
    let r = fin.clone();
    let job: Job = Box::new(move || {
        let t = Instant::now();
        let mut out = Vec::new();
        let mut o = match Oracle::new(&r) {
            Ok(o) => o,
            Err(e) => return vec![(errored(format!("lemmas.oracle{sfx}"), "oracle construction", &e), 0)],
        };
        let mut bases = Vec::new();
        for d in 1..=top {
            match o.invariant_basis(d) {
                Ok(b) => bases.push(b),
                Err(e) => return vec![(errored(format!("lemmas.oracle{sfx}"), "invariant bases", &e), 0)],
            }
        }
        for lemma in LEMMA_IDS {
            let mut applied = 0usize;
            let mut bad = None;
            'outer: for b in &bases {
                for f in b {
                    match oracle::lemma_predicate(&r, f, lemma) {
                        Ok(v) => {
                            applied += 1;
                            if !v.pass {
                                bad = Some(format!("{f}: {}", v.violation.unwrap_or_default()));
                                break 'outer;
                            }
                        }
                        Err(Error::NotApplicable(_)) => {}
                        Err(e) => {
                            bad = Some(format!("error: {e}"));
                            break 'outer;
                        }
                    }
                }
            }
            if applied == 0 && bad.is_none() {
                continue;
            }
            let anchor = format!("lemma '{lemma}' holds on every invariant basis element of degree <= {top}");
            out.push(claim(format!("lemmas.{lemma}{sfx}"), anchor, bad.is_none(), bad.or(Some(format!("{applied} elements")))));
        }
        let ms = t.elapsed().as_millis() as u64;
        out.into_iter().map(|c| (c, ms)).collect()
    });
    Ok(vec![job])
}

// ---- noether ----

fn noether_jobs(rep: &Representation, cfg: &SuiteConfig) -> Result<Vec<Job>, ConfigError> {
    let fin = finite_specialization(rep)?;
    let sfx = suffix(rep);
    let bound = cfg.degree_bound;
    let seed = rep.to_string().bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
    let job: Job = Box::new(move || noether_claims(&fin, sfx, bound, seed));
    Ok(vec![job])
}

fn noether_claims(r: &Representation, sfx: &str, bound: u32, seed: u64) -> Vec<Timed> {
    let mut out = Vec::new();
    let expected = expected_noether(r);
    let t = Instant::now();
    let res = (|| -> klein_core::Result<(bool, Option<String>, Oracle)> {
        let upper = generation_bound(r)?;
        let mut o = Oracle::new(r)?;
        let top = bound.min(upper);
        let p = o.generator_profile(top)?;
        let counts = p.new_generators.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let (pass, note) = if top == upper {
            (p.noether_number == expected, format!("computed {} (complete: no generators above degree {upper})", p.noether_number))
        } else if expected <= top {
            (p.noether_number == expected, format!("computed {} up to degree {top}; generation bound {upper} not reached", p.noether_number))
        } else {
            (false, format!("degree bound {top} below expected {expected}"))
        };
        Ok((pass, Some(format!("{note}; new generators per degree [{counts}]")), o))
    })();
    let mut oracle = None;
    match res {
        Ok((pass, w, o)) => {
            out.push((claim(format!("noether.number{sfx}"), format!("Noether number is {expected}"), pass, w), t.elapsed().as_millis() as u64));
            oracle = Some(o);
        }
        Err(e) => out.push((errored(format!("noether.number{sfx}"), format!("Noether number is {expected}"), &e), t.elapsed().as_millis() as u64)),
    }
    let Some(mut o) = oracle else { return out };
    let Ok(spec) = construct::hsop(r) else { return out };
    let beta = spec.top_class;
    let vars = &r.ring().vars;
    if top_class_indecomposable(r) && beta.degree() <= bound {
        let t = Instant::now();
        let id = format!("noether.tr-top-class-indecomposable{sfx}");
        let anchor = format!("Tr({}) is indecomposable", beta.format(vars));
        let c = match construct::transfer_monomial(r, &beta).and_then(|f| o.is_decomposable(&f)) {
            Ok(dec) => claim(id, anchor, !dec, dec.then(|| "decomposable".to_string())),
            Err(e) => errored(id, anchor, &e),
        };
        out.push((c, t.elapsed().as_millis() as u64));
    }
    // products are decomposable: a sanity check of the oracle
    let t = Instant::now();
    let id = format!("noether.products-decomposable{sfx}");
    let anchor = "Tr(proper divisor of the top class) times an hsop element is decomposable (3 seeded cases)".to_string();
    let c = match decomposable_products(r, &mut o, &beta, &spec.elements, bound, seed) {
        Ok((pass, w)) => claim(id, anchor, pass, Some(w)),
        Err(e) => errored(id, anchor, &e),
    };
    out.push((c, t.elapsed().as_millis() as u64));
    out
}

/// Families whose top-class transfer is a new generator.
pub fn top_class_indecomposable(rep: &Representation) -> bool {
    let m = rep.m();
    match rep.kind() {
        RepKind::Even { .. } => m >= 3,
        RepKind::OmegaMinus { .. } | RepKind::OmegaPlus { .. } => m >= 2,
        RepKind::Regular => false,
    }
}

fn decomposable_products(
    r: &Representation,
    o: &mut Oracle,
    beta: &Monomial,
    hsop: &[NamedInvariant],
    bound: u32,
    seed: u64,
) -> klein_core::Result<(bool, String)> {
    let mut pool = Vec::new();
    for d in construct::divisors(beta, r.nvars()) {
        if d == *beta || d.degree() == 0 {
            continue;
        }
        let t = construct::transfer_monomial(r, &d)?;
        if !t.is_zero() {
            pool.push((d, t));
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut cases = Vec::new();
    let mut tries = 0;
    while cases.len() < 3 && tries < 64 && !pool.is_empty() {
        tries += 1;
        let (d, t) = &pool[rng.gen_range(0..pool.len())];
        let h = &hsop[rng.gen_range(0..hsop.len())];
        if d.degree() + h.value.degree().unwrap_or(0) > bound.max(2) {
            continue;
        }
        let f = t * &h.value;
        if !o.is_decomposable(&f)? {
            return Ok((false, format!("Tr({}) * {} reported indecomposable", d.format(&r.ring().vars), h.name)));
        }
        cases.push(format!("Tr({})*{}", d.format(&r.ring().vars), h.name));
    }
    Ok((!cases.is_empty() || pool.is_empty(), cases.join(", ")))
}

// ---- sagbi ----

fn sagbi_jobs(rep: &Representation, cfg: &SuiteConfig) -> Result<Vec<Job>, ConfigError> {
    let m = rep.m();
    let mut jobs = Vec::new();
    let bound = cfg.degree_bound;
    let budget = cfg.budget;
    let fam_tested = match rep.kind() {
        RepKind::Regular => true,
        RepKind::Even { .. } => m == 1 || (generic_even(rep) && m <= 3) || (!generic_even(rep) && m == 2),
        RepKind::OmegaMinus { .. } => m == 1,
        RepKind::OmegaPlus { .. } => m <= 2,
    };
    if fam_tested {
        let set = construct::candidate_generating_set(rep)?;
        let names: Vec<String> = set.iter().map(|e| e.name.clone()).collect();
        let polys: Vec<Polynomial> = set.iter().map(|e| e.value.clone()).collect();
        let p2 = polys.clone();
        jobs.push(single("sagbi.test".into(), format!("{{{}}} is a SAGBI basis", names.join(", ")), move || {
            let v = sagbi::sagbi_test(&p2, None, None)?;
            let w = match &v.candidate {
                Some(c) => format!("non-subducting remainder of degree {}: {c}", c.degree().unwrap_or(0)),
                None => format!("{} tete-a-tetes subduct to zero", v.relations_checked),
            };
            Ok((v.pass, Some(w)))
        }));
        jobs.push(dimension_job(rep, polys.clone(), bound)?);
        let drop = match rep.kind() {
            RepKind::OmegaPlus { .. } if m == 2 => Some(("Tr(y1^3*y2^3)", 6)),
            RepKind::Even { .. } if m == 3 && generic_even(rep) => Some(("Tr(y1*y2^3*y3^3)", 7)),
            _ => None,
        };
        if let Some((name, deg)) = drop {
            let rest: Vec<Polynomial> =
                set.iter().filter(|e| e.name != name).map(|e| e.value.clone()).collect();
            jobs.push(single(
                format!("sagbi.without-{name}"),
                format!("dropping {name} fails the SAGBI test with a degree {deg} remainder"),
                move || {
                    let v = sagbi::sagbi_test(&rest, None, None)?;
                    let cd = v.candidate.as_ref().and_then(|c| c.degree());
                    Ok((!v.pass && cd == Some(deg), Some(format!("remainder degree {}", cd.map_or("-".into(), |d| d.to_string())))))
                },
            ));
        }
    }
    let divide = match rep.kind() {
        RepKind::OmegaMinus { .. } => (2..=3).contains(&m),
        RepKind::Even { .. } => !generic_even(rep) && m == 3,
        _ => false,
    };
    if divide {
        let (input, x) = construct::divide_by_x_input(rep)?;
        let target = construct::candidate_generating_set(rep)?;
        let names: Vec<String> = target.iter().map(|e| e.name.clone()).collect();
        let r = rep.clone();
        let job: Job = Box::new(move || {
            let t = Instant::now();
            let id = "sagbi.divide-by-x".to_string();
            let anchor = format!("divide-by-x completes to the generating set {{{}}}", names.join(", "));
            let done = match sagbi::sagbi_divide_by_x(&input, &x, budget, None, None) {
                Ok(c) => c,
                Err(e) => return vec![(errored(id, anchor, &e), t.elapsed().as_millis() as u64)],
            };
            let got: Vec<Polynomial> = done.basis.iter().map(|b| b.value.clone()).collect();
            let want: Vec<Polynomial> = target.iter().map(|b| b.value.clone()).collect();
            let same = sagbi::same_generating_set(&got, &want);
            let mut w = format!("{} sweeps, {} elements", done.sweeps, got.len());
            for e in &done.transcript {
                let _ = write!(w, "; {} -> {} = {}", e.relation, e.inserted_name, e.inserted);
            }
            let c = match same {
                Ok(s) => claim(id, anchor, s, Some(w)),
                Err(e) => errored(id, anchor, &e),
            };
            let mut out = vec![(c, t.elapsed().as_millis() as u64)];
            if let Ok(j) = dimension_job(&r, got, bound) {
                out.extend(j());
            }
            out
        });
        jobs.push(job);
        if matches!(rep.kind(), RepKind::OmegaMinus { .. }) && m == 2 {
            let r = rep.clone();
            let id = "omega-minus-2-hypersurface";
            let anchor = construct::identity(&r, id)?.statement.to_string();
            jobs.push(single("sagbi.relation".into(), anchor, move || {
                let v = construct::verify_identity(&r, id)?;
                Ok((v.holds, (!v.holds).then(|| v.difference.to_string())))
            }));
        }
    }
    Ok(jobs)
}

/// Hilbert function of the lead-monomial algebra against the oracle.
fn dimension_job(rep: &Representation, polys: Vec<Polynomial>, bound: u32) -> Result<Job, ConfigError> {
    let fin = finite_specialization(rep)?;
    let sfx = suffix(rep);
    let top = bound.min(8);
    Ok(single(
        format!("sagbi.dimensions{sfx}"),
        format!("the lead monomials span the invariants in every degree <= {top}"),
        move || {
            let lead = sagbi::lead_algebra_dimensions(&polys, top)?;
            let mut o = Oracle::new(&fin)?;
            for d in 0..=top {
                let want = o.dimension(d)?;
                if lead[d as usize] != want {
                    return Ok((false, Some(format!("degree {d}: lead algebra {} vs invariants {want}", lead[d as usize]))));
                }
            }
            Ok((true, None))
        },
    ))
}
