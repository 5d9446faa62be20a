use std::path::Path;
use std::process::{Command, Output};

use neumann_witness::eigenfunction::Eigenfunction;
use neumann_witness::exact::{Domain, RectangleClass};
use neumann_witness::oracle::SweepReport;
use neumann_witness::spectrum::SpectrumLine;
use neumann_witness::witness::WitnessCertificate;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_neumann-witness")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn decompose_prints_compact_json() {
    let o = bin(&["decompose", "50"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), r#"{"lam":50,"s":0,"ell":12,"core":"twice_odd","class":"I"}"#);
}

#[test]
fn classify_and_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let rect = write(dir.path(), "r.json", r#"{"case":"rational","p":1,"q":1}"#);
    let o = bin(&["classify", "--rect", &rect]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(r#""case":"C3""#));

    let o = bin(&["spectrum", "--rect", &rect, "--mu-max", "25"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<SpectrumLine> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let last = lines.last().unwrap();
    assert_eq!(last.modes, vec![(0, 5), (3, 4), (4, 3), (5, 0)]);
    assert!(stdout(&o).contains(r#"{"mu":"25/1","modes":[[0,5],[3,4],[4,3],[5,0]]}"#));

    let generic = write(dir.path(), "g.json", r#"{"case":"generic","c":1.0,"d":1.2599210498948732}"#);
    assert_eq!(code(&bin(&["spectrum", "--rect", &generic, "--mu-max", "4"])), 2);
    let square = write(dir.path(), "s.json", r#"{"case":"quadratic","rho":"4"}"#);
    assert_eq!(code(&bin(&["classify", "--rect", &square])), 2);
}

#[test]
fn witness_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (Domain::Rect(RectangleClass::rational(1, 1).unwrap()), vec![(0, 5, 0.3), (3, 4, -1.0), (4, 3, 0.2), (5, 0, 0.9)]),
        (Domain::Rect(RectangleClass::rational(3, 2).unwrap()), vec![(6, 0, 1.0), (0, 4, -0.5)]),
        (Domain::Rect(RectangleClass::quadratic("5/2".parse().unwrap()).unwrap()), vec![(5, 0, 1.0)]),
        (Domain::Rect(RectangleClass::generic(1.0, 2f64.cbrt()).unwrap()), vec![(2, 3, -0.7)]),
        (Domain::Square2Pi, vec![(1, 0, 1.0), (0, 1, 1.0)]),
    ];
    for (i, (domain, modes)) in cases.into_iter().enumerate() {
        let u = Eigenfunction::from_modes(domain, &modes).unwrap();
        let u_path = write(dir.path(), &format!("u{i}.json"), &serde_json::to_string(&u).unwrap());
        let c_path = dir.path().join(format!("c{i}.json"));
        let c_str = c_path.to_str().unwrap();
        let o = bin(&["witness", "--in", &u_path, "--out", c_str]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(&c_path).unwrap();
        let cert: WitnessCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&cert).unwrap(), text);

        let o = bin(&["verify", "--in", &u_path, "--cert", c_str]);
        assert_eq!(code(&o), 0);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["verified"], true);
        assert_eq!(v["relation_holds"], true);

        let back: Eigenfunction = serde_json::from_str(&std::fs::read_to_string(&u_path).unwrap()).unwrap();
        assert_eq!(back, u);
    }
}

#[test]
fn verify_rejects_fabricated_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let u = write(
        dir.path(),
        "u.json",
        r#"{"rect":{"case":"rational","p":1,"q":1},"mu":"0","basis":"neumann","coeffs":[{"m":0,"n":0,"a":1.0}]}"#,
    );
    let cert = r#"{"case_tag":"C3","kind":"exact_zero","relation":"mean_zero",
        "points":[{"edge":"bottom","t":0.25}],"derivation":{"steps":[]}}"#;
    let c = write(dir.path(), "c.json", cert);
    assert_eq!(code(&bin(&["verify", "--in", &u, "--cert", &c])), 1);
    // constant input has no witness
    assert_eq!(code(&bin(&["witness", "--in", &u])), 2);
    let off = write(dir.path(), "off.json", &cert.replace("0.25", "1.5"));
    assert_eq!(code(&bin(&["verify", "--in", &u, "--cert", &off])), 2);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"rect":{"case":"rational","p":1,"q":1},"mu":"1","basis":"neumann","coefs":[]}"#,
    );
    let o = bin(&["witness", "--in", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("coefs"));

    let wrong_mu = write(
        dir.path(),
        "mu.json",
        r#"{"rect":{"case":"rational","p":1,"q":1},"mu":"2","basis":"neumann","coeffs":[{"m":1,"n":0,"a":1.0}]}"#,
    );
    let o = bin(&["witness", "--in", &wrong_mu]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("coeffs"));
    assert_eq!(code(&bin(&["witness", "--in", "missing.json"])), 2);
    assert_eq!(code(&bin(&["trace", "--in", &bad, "--edge", "diagonal"])), 2);
}

#[test]
fn trace_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let u = write(
        dir.path(),
        "u.json",
        r#"{"rect":{"case":"square_2pi"},"mu":"1","basis":"neumann","coeffs":[{"m":1,"n":0,"a":1.0},{"m":0,"n":1,"a":1.0}]}"#,
    );
    let csv = dir.path().join("t.csv");
    let o = bin(&["trace", "--in", &u, "--edge", "top", "--csv", csv.to_str().unwrap(), "--samples", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(r#""terms":[[0,1.0],[1,1.0]]"#), "{}", stdout(&o));
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().nth(3).unwrap().ends_with(",0"));
}

#[test]
fn sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let rect = write(dir.path(), "r.json", r#"{"case":"quadratic","rho":"3"}"#);
    let csv = dir.path().join("s.csv");
    let args = ["sweep", "--rect", &rect, "--mu-max", "10", "--trials", "4", "--seed", "9"];
    let a = bin(&args);
    let b = bin(&[&args[..], &["--csv", csv.to_str().unwrap()]].concat());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let rep: SweepReport = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(rep.pass);
    assert_eq!(serde_json::to_string(&rep).unwrap(), stdout(&a).trim());
    let rows = std::fs::read_to_string(csv).unwrap().lines().count();
    assert_eq!(rows, 1 + 4 * rep.records.len());
}

#[test]
fn check_prop_passes() {
    let o = bin(&["check-prop", "--max", "1000"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}
