use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use atf_core::atf::{atf_exact, atf_truncated, IdealRecord};
use atf_core::families::{jacobian_ideal, monomial_curve};
use atf_core::{Certificate, Ctx, Ideal, Rational, Verdict};
use serde_json::Value;
use tempfile::TempDir;

type Q = Rational;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

fn corpus_job(name: &str) -> PathBuf {
    corpus_dir().join(format!("{name}.json"))
}

fn atf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_job(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run_cert(args: &[&str]) -> (i32, Certificate) {
    let o = atf(args);
    let cert = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("no certificate ({e}): {}", String::from_utf8_lossy(&o.stderr))
    });
    (code(&o), cert)
}

fn ideal_of(cert: &Certificate, name: &str) -> Ideal<Q> {
    let ring = cert.inputs.ring.to_ring::<Q>().unwrap();
    cert.inputs.ideals[name].to_ideal(&ring).unwrap()
}

#[test]
fn curve_check_matches_library() {
    let job = corpus_job("curve_1_1_check");
    let (c, cert) = run_cert(&["check", "--job", job.to_str().unwrap()]);
    assert_eq!(c, 0);
    let (j, i) = monomial_curve::<Q>(1, 1).unwrap();
    let lib = atf_exact(&j, &i, &Ctx::unlimited()).unwrap().without_timing();
    assert_eq!(cert, lib);
}

#[test]
fn quartet_refutation_matches_truncated_library_run() {
    let job = corpus_job("quartet_xy2z_check");
    let (c, cert) = run_cert(&["check", "--job", job.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(cert.verdict, Verdict::False);
    let (n, _) = cert.witness().expect("witness recorded");
    let ctx = Ctx::unlimited();
    let lib = atf_truncated(&ideal_of(&cert, "J"), &ideal_of(&cert, "I"), 3, &ctx).unwrap();
    assert_eq!(lib.verdict, Verdict::False);
    assert_eq!(lib.witness().unwrap().0, n);
    assert_eq!(n, 2);

    let (c, trunc) = run_cert(&["check", "--truncated", "--N", "3", "--job", job.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(trunc.check, "atf_truncated");
    assert_eq!(trunc.witness().unwrap().0, 2);
}

#[test]
fn undefined_ideal_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let p = write_job(
        &dir,
        "k.json",
        r#"{"ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["x"]}, "I": {"sum_of": ["J", "K"]}}}"#,
    );
    let o = atf(&["check", "--job", p.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("`K`"));

    let p = write_job(&dir, "role.json", r#"{"ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["x"]}}}"#);
    assert_eq!(code(&atf(&["check", "--job", p.to_str().unwrap()])), 3);
}

#[test]
fn malformed_jobs_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("syntax.json", r#"{"ideals": "#),
        ("unknown_field.json", r#"{"ring": {"vars": ["x"]}, "ideals": {}, "colour": 1}"#),
        ("bad_n.json", r#"{"ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["x"]}, "I": {"gens": ["x"]}}, "N": 0}"#),
        ("bad_budget.json", r#"{"ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["x"]}, "I": {"gens": ["x"]}}, "budget_ms": 0}"#),
        ("bad_poly.json", r#"{"ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["x +* 1"]}, "I": {"gens": ["x"]}}}"#),
        ("bad_var.json", r#"{"ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["y"]}, "I": {"gens": ["x"]}}}"#),
        ("bad_field.json", r#"{"field": 6, "ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["x"]}, "I": {"gens": ["x"]}}}"#),
        ("cycle.json", r#"{"ring": {"vars": ["x"]}, "ideals": {"J": {"sum_of": ["I"]}, "I": {"sum_of": ["J"]}}}"#),
        ("no_ring.json", r#"{"ideals": {"J": {"gens": ["x"]}, "I": {"gens": ["x"]}}}"#),
        ("bad_family.json", r#"{"ideals": {"J": {"from_family": {"family": "monomial_curve", "p": 0, "q": 0}}, "I": {"jacobian_of": "J"}}}"#),
    ];
    for (name, text) in cases {
        let p = write_job(&dir, name, text);
        let o = atf(&["check", "--job", p.to_str().unwrap()]);
        assert_eq!(code(&o), 3, "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(code(&atf(&["check"])), 3);
    assert_eq!(code(&atf(&["no-such-command"])), 3);
}

#[test]
fn prime_field_jobs() {
    let dir = TempDir::new().unwrap();
    let p = write_job(
        &dir,
        "p.json",
        r#"{"field": 32003, "ring": {"vars": ["x", "y", "z"]},
            "ideals": {"J": {"gens": ["x*y*z"]}, "M": {"gens": ["x", "y", "z"]}, "I": {"power_of": "M", "n": 2}}}"#,
    );
    let (c, cert) = run_cert(&["check", "--job", p.to_str().unwrap()]);
    assert_eq!(c, 1);
    assert_eq!(cert.inputs.ring.characteristic, 32003);
    assert_eq!(cert.witness().unwrap().0, 2);
    let out = dir.path().join("cert.json");
    std::fs::write(&out, serde_json::to_string(&cert).unwrap()).unwrap();
    assert_eq!(code(&atf(&["verify", "--cert", out.to_str().unwrap()])), 0);
}

#[test]
fn budget_exhaustion_is_undecided() {
    let dir = TempDir::new().unwrap();
    let p = write_job(
        &dir,
        "points.json",
        r#"{"ring": {"vars": ["x", "y", "z"]}, "ideals": {
            "J": {"gens": ["x*y + 3*x*z - 4*y*z", "z*x^2 - 2*y*z^2 + x*z^2", "z*y^2 + 6*x*z^2 - 7*y*z^2"]},
            "I": {"gens": ["x*y + 3*x*z - 4*y*z", "x^2*z + x*z^2 - 2*y*z^2", "y^2*z + 6*x*z^2 - 7*y*z^2",
                           "-2*x^2*z + 7*x*z^2 - 2*y*z^2 - 2*z^3",
                           "x^2*y - 3*x^2*z + 10*x*y*z - 4*y^2*z + 3*x*z^2 - 8*y*z^2",
                           "x^3 - 2*x^2*z - 4*x*y*z - 2*x*z^2 + 8*y*z^2",
                           "y^3 + 12*x*y*z - 11*y^2*z + 18*x*z^2 - 18*y*z^2"]}}}"#,
    );
    let (c, cert) = run_cert(&["check", "--budget-ms", "1", "--job", p.to_str().unwrap()]);
    assert_eq!(c, 2);
    assert_eq!(cert.verdict, Verdict::Undecided);

    // running out while the ideals are still being built has no certificate
    let job = corpus_job("points_check");
    let o = atf(&["check", "--budget-ms", "1", "--job", job.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn identical_inputs_give_identical_output() {
    let job = corpus_job("quartet_xyz_check");
    let a = atf(&["check", "--job", job.to_str().unwrap()]);
    let b = atf(&["check", "--job", job.to_str().unwrap()]);
    assert_eq!(code(&a), 1);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cache_never_changes_verdicts() {
    let cache = TempDir::new().unwrap();
    let cache_arg = cache.path().to_str().unwrap();
    for name in ["curve_1_2_check", "quartet_xyz_check", "quadrics_strong", "standard_base_fails"] {
        let job = corpus_job(name);
        let cmd = if name.ends_with("strong") {
            "strong"
        } else if name.starts_with("standard") {
            "grform"
        } else {
            "check"
        };
        let job = job.to_str().unwrap();
        let (c0, plain) = run_cert(&[cmd, "--job", job]);
        let (c1, cold) = run_cert(&[cmd, "--cache", cache_arg, "--job", job]);
        let (c2, warm) = run_cert(&[cmd, "--cache", cache_arg, "--job", job]);
        assert_eq!((c0, c1, c2), (c0, c0, c0), "{name}");
        assert_eq!(plain.verdict, cold.verdict);
        assert_eq!(plain.verdict, warm.verdict);
        assert_eq!(plain.evidence, warm.evidence, "{name}");
    }
    let entries = std::fs::read_dir(cache.path()).unwrap().count();
    assert!(entries > 0);
    for e in std::fs::read_dir(cache.path()).unwrap() {
        let p = e.unwrap().path();
        assert_eq!(p.extension().unwrap(), "json", "no temporary files left behind");
        let _: Vec<String> = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    }
}

#[test]
fn shipped_corpus_passes() {
    let o = atf(&["corpus", "--dir", corpus_dir().to_str().unwrap()]);
    let table = stdout(&o);
    assert_eq!(code(&o), 0, "{table}");
    assert!(!table.contains("FAIL"));
    assert!(table.contains("0 failed"));
}

#[test]
fn empty_corpus_passes() {
    let dir = TempDir::new().unwrap();
    let o = atf(&["corpus", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 jobs"));
}

#[test]
fn flipped_expectation_is_reported() {
    let dir = TempDir::new().unwrap();
    for name in ["quartet_xy_check", "quartet_xyz_check"] {
        std::fs::copy(corpus_job(name), dir.path().join(format!("{name}.json"))).unwrap();
    }
    let flipped = std::fs::read_to_string(corpus_job("quartet_yz_check"))
        .unwrap()
        .replace(r#""expect": "TRUE""#, r#""expect": "FALSE""#);
    write_job(&dir, "flipped_yz.json", &flipped);
    let o = atf(&["corpus", "--dir", dir.path().to_str().unwrap()]);
    assert_ne!(code(&o), 0);
    let table = stdout(&o);
    let bad: Vec<&str> = table.lines().filter(|l| l.ends_with("FAIL")).collect();
    assert_eq!(bad.len(), 1, "{table}");
    assert!(bad[0].starts_with("flipped_yz"));
}

#[test]
fn corpus_job_without_expectation_is_rejected() {
    let dir = TempDir::new().unwrap();
    write_job(
        &dir,
        "no_expect.json",
        r#"{"command": "check", "ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["x"]}, "I": {"gens": ["x"]}}}"#,
    );
    let o = atf(&["corpus", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no_expect"));
}

#[test]
fn certificates_verify_and_tampering_is_caught() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("strong.json");
    let job = corpus_job("points_strong");
    let o = atf(&["strong", "--job", job.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v = atf(&["verify", "--cert", out.to_str().unwrap()]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));

    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let w = cert["evidence"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|e| e.get("witness").is_some())
        .expect("a witness");
    w["witness"] = Value::String("x*y".into());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, cert.to_string()).unwrap();
    let v = atf(&["verify", "--cert", bad.to_str().unwrap()]);
    assert_eq!(code(&v), 1);
    let report: Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["valid"], Value::Bool(false));
}

/// Every certificate the shipped corpus produces re-verifies, and its
/// ideals satisfy `J I^{n-1} ⊆ J ∩ I^n` for small `n`.
#[test]
fn corpus_certificates_are_sound() {
    let dir = TempDir::new().unwrap();
    let ctx = Ctx::unlimited();
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        let job: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let cmd = job["command"].as_str().unwrap();
        if !["check", "strong", "vv"].contains(&cmd) {
            continue;
        }
        let (_, cert) = run_cert(&[cmd, "--job", path.to_str().unwrap()]);
        let out = dir.path().join("c.json");
        std::fs::write(&out, serde_json::to_string(&cert).unwrap()).unwrap();
        let v = atf(&["verify", "--cert", out.to_str().unwrap()]);
        assert_eq!(code(&v), 0, "{}: {}", path.display(), stdout(&v));

        let (j, i) = (ideal_of(&cert, "J"), ideal_of(&cert, "I"));
        for n in 1..=2 {
            let lhs = j.product(&i.power(n - 1, &ctx).unwrap(), &ctx).unwrap();
            let rhs = j.intersect(&i.power(n, &ctx).unwrap(), &ctx).unwrap();
            assert!(lhs.is_subset(&rhs, &ctx).unwrap(), "{} at n = {n}", path.display());
        }
    }
}

#[test]
fn presentations_and_family_output() {
    let dir = TempDir::new().unwrap();
    let p = write_job(
        &dir,
        "plane.json",
        r#"{"ring": {"vars": ["x", "y"]}, "ideals": {"J": {"gens": ["x"]}, "I": {"gens": ["x", "y"]}}}"#,
    );
    let p = p.to_str().unwrap();
    for cmd in ["rees", "sym", "aluffi"] {
        let o = atf(&[cmd, "--job", p]);
        assert_eq!(code(&o), 0, "{cmd}");
        let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(doc["t_vars"].as_array().unwrap().len(), 2, "{cmd}");
        let defining: Vec<String> = serde_json::from_value(doc["defining"].clone()).unwrap();
        assert!(!defining.is_empty(), "{cmd}");
    }

    let job = corpus_job("curve_1_1_check");
    let o = atf(&["family", "--job", job.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let o = atf(&["jacobian", "--job", job.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let jac: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(jac["height"], Value::from(2));

    let (j, i) = monomial_curve::<Q>(1, 1).unwrap();
    let ctx = Ctx::unlimited();
    let ring = j.ring().clone();
    let gens = |v: &Value| -> Vec<String> { serde_json::from_value(v.clone()).unwrap() };
    let from_cli = |g: Vec<String>| {
        IdealRecord { hash: String::new(), gens: g }.to_ideal(&ring).unwrap()
    };
    assert!(from_cli(gens(&doc["ideals"]["J"])).is_equal(&j, &ctx).unwrap());
    assert!(from_cli(gens(&doc["ideals"]["I"])).is_equal(&i, &ctx).unwrap());
    let lib_jac = jacobian_ideal(&j, &ctx).unwrap();
    assert!(from_cli(gens(&jac["jacobian"])).is_equal(&lib_jac, &ctx).unwrap());
    assert!(lib_jac.is_equal(&i, &ctx).unwrap());
}

#[test]
fn criterion_jobs_report_facts() {
    let job = corpus_job("sum_quartet");
    let (c, cert) = run_cert(&["criterion", "--job", job.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(cert.fact("sides_agree"), Some(true));

    let dir = TempDir::new().unwrap();
    let p = write_job(
        &dir,
        "missing.json",
        r#"{"ring": {"vars": ["x"]}, "ideals": {"J": {"gens": ["x"]}, "I": {"gens": ["x"]}}}"#,
    );
    assert_eq!(code(&atf(&["criterion", "--job", p.to_str().unwrap()])), 3);
}
