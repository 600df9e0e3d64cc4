use std::process::Command;

use klein_cli::{run, Claim, Format, Suite, SuiteConfig};

fn config(rep: &str, suite: Suite, d: u32) -> SuiteConfig {
    SuiteConfig { rep: rep.into(), suite, degree_bound: d, ..Default::default() }
}

fn find<'a>(claims: &'a [Claim], id: &str) -> &'a Claim {
    claims.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("no claim {id}"))
}

#[test]
fn regular_all_suites_pass() {
    let r = run(&config("Vreg", Suite::All, 6)).unwrap();
    assert!(r.all_pass(), "{}", r.to_text());
    find(&r.claims, "identities.regular-u-square");
    find(&r.claims, "identities.regular-h-square");
    // suite order is fixed
    let firsts: Vec<&str> = r.claims.iter().map(|c| c.id.split('.').next().unwrap()).collect();
    let mut seen: Vec<&str> = Vec::new();
    for s in firsts {
        if seen.last() != Some(&s) {
            assert!(!seen.contains(&s), "suite {s} interleaved");
            seen.push(s);
        }
    }
    assert_eq!(seen, ["leadterms", "identities", "hsop", "hilbert", "transfer", "lemmas", "noether", "sagbi"]);
}

#[test]
fn omega_minus_two_divide_by_x() {
    let r = run(&config("Omega-:2", Suite::Sagbi, 6)).unwrap();
    assert!(r.all_pass(), "{}", r.to_text());
    assert!(find(&r.claims, "sagbi.divide-by-x").pass);
    assert!(find(&r.claims, "sagbi.relation").pass);
}

#[test]
fn stated_norm_relation_fails_with_recomputed_attached() {
    let r = run(&config("Vm:3:lambda=l", Suite::Identities, 4)).unwrap();
    let c = find(&r.claims, "identities.norm-y1-stated-v2");
    assert!(!c.pass);
    let w = c.witness.as_deref().unwrap();
    assert!(w.contains("recomputed relation"), "{w}");
    assert!(w.ends_with("(holds)"), "{w}");
    assert!(find(&r.claims, "identities.norm-y1-recomputed-v2").pass);
    assert!(!r.all_pass());
}

#[test]
fn reports_are_deterministic() {
    let mut cfg = config("Omega+:2", Suite::All, 6);
    let a = run(&cfg).unwrap();
    cfg.threads = Some(1);
    let b = run(&cfg).unwrap();
    assert_eq!(a.claims, b.claims);
    let strip = |r: &klein_cli::Report| {
        let mut v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn lambda_flag_overrides_selector() {
    let cfg = SuiteConfig { lambda: Some("t".into()), ..config("Vm:2:lambda=0", Suite::Hsop, 4) };
    let r = run(&cfg).unwrap();
    assert_eq!(r.representation, "Vm:2:lambda=t");
    assert!(r.all_pass());
}

#[test]
fn invalid_config_is_rejected() {
    assert!(run(&config("Vm:0:lambda=1", Suite::Hsop, 4)).is_err());
    assert!(run(&config("Vreg", Suite::Hsop, 0)).is_err());
    assert!(run(&config("nonsense", Suite::Hsop, 4)).is_err());
}

fn klein(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_klein")).args(args).env("KLEIN_THREADS", "2").output().unwrap()
}

#[test]
fn exit_codes() {
    let ok = klein(&["--rep", "Vreg", "--suite", "hsop"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    let fail = klein(&["--rep", "Vm:2:lambda=l", "--suite", "identities", "--format", "text"]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stdout).contains("FAIL identities.norm-y1-stated-v2"));
    let bad = klein(&["--rep", "Omega-:x"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn report_written_to_file() {
    let dir = std::env::temp_dir().join(format!("klein-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let cfg = SuiteConfig { out: Some(path.clone()), format: Format::Json, ..config("Omega-:1", Suite::Noether, 4) };
    let r = run(&cfg).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["representation"], "Omega-:1");
    assert_eq!(v["config"]["suite"], "noether");
    assert_eq!(v["claims"].as_array().unwrap().len(), r.claims.len());
    assert!(!path.with_extension("tmp").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn registry_dump() {
    let out = klein(&["--rep", "Omega+:2", "--registry"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    let tr = rows.iter().find(|r| r["name"] == "Tr(y1^3*y2^3)").unwrap();
    assert_eq!(tr["family"], "Omega+:2");
    assert_eq!(tr["degree"], 6);
    assert!(tr["leadTerm"].is_string() && tr["text"].is_string());
}
