use std::path::Path;
use std::process::{Command, Output};

fn bogocert(args: &[&str], seed: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bogocert"));
    c.args(args);
    match seed {
        Some(s) => c.env("BOGOCERT_SEED", s),
        None => c.env_remove("BOGOCERT_SEED"),
    };
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    let line = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(line.lines().last().unwrap()).unwrap()
}

#[test]
fn golden_ratio_height() {
    let o = bogocert(&["height", "--field", "x^2-x-1", "--elem", "0,1"], None);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("exact_zero: false"));
    assert!(s.contains("h = 0.2406059125298017"), "{s}");
    assert!(s.contains(" ± "));
}

#[test]
fn gaussian_certificate_is_fifth_root_of_five_sixteenth() {
    let o = bogocert(
        &["certify", "--field", "x^2+1", "--ell", "5", "--rho", "1/1", "--attest", "ℓ unramified in K/F", "--format", "json"],
        None,
    );
    assert!(o.status.success());
    let cert: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["epsilon_expr"], "5^(1/16)");
    let eps: f64 = cert["epsilon"].as_str().unwrap().parse().unwrap();
    assert!((eps - 5f64.powf(1.0 / 16.0)).abs() < 1e-13);
}

#[test]
fn first_witness_at_twenty() {
    let o = bogocert(&["witnesses", "--b", "2", "--eps", "1e-6"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("first witness below 1e-6: k = 20"));
    let csv = stdout(&bogocert(&["witnesses", "--b", "2", "--kmax", "6", "--format", "csv"], None));
    assert_eq!(csv.lines().count(), 6);
    assert!(csv.starts_with("k,x,formula,height\n"));
}

fn certify_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let out = dir.join(name);
    let mut a = vec!["certify"];
    a.extend_from_slice(args);
    a.extend_from_slice(&["--attest", "unramified", "--out", out.to_str().unwrap()]);
    let o = bogocert(&a, None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out.to_str().unwrap().to_string()
}

#[test]
fn certificates_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["--field", "x", "--ell", "3", "--rho", "1"],
        &["--field", "x", "--ell", "5", "--rho", "1", "--arch"],
        &["--field", "x^2+1", "--ell", "5", "--rho", "1"],
        &["--field", "x^2+1", "--ell", "3", "--rho", "3/2"],
        &["--field", "x^2-2", "--ell", "7", "--rho", "2", "--arch"],
        &["--field", "x^3-2", "--ell", "5", "--rho", "2"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let path = certify_to(dir.path(), &format!("c{i}.json"), args);
        let v = bogocert(&["verify", "--cert", &path], None);
        assert!(v.status.success(), "{args:?}: {}", stdout(&v));
        assert!(stdout(&v).starts_with("ok: true"));
    }
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = certify_to(dir.path(), "c.json", &["--field", "x^2+1", "--ell", "5", "--rho", "1"]);
    let mut cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert["rho_k"] = "3/2".into();
    std::fs::write(&path, cert.to_string()).unwrap();
    let v = bogocert(&["verify", "--cert", &path], None);
    assert_eq!(v.status.code(), Some(6));
    assert_eq!(stderr_json(&v)["category"], "verify");
}

#[test]
fn exit_codes_by_category() {
    let parse = bogocert(&["height", "--field", "x^^2", "--elem", "1"], None);
    assert_eq!(parse.status.code(), Some(2));
    assert_eq!(stderr_json(&parse)["category"], "parse");

    let digits = bogocert(&["height", "--field", "x^2+1", "--elem", "1", "--digits", "500"], None);
    assert_eq!(digits.status.code(), Some(2));

    let flag = bogocert(&["height", "--bogus"], None);
    assert_eq!(flag.status.code(), Some(2));

    let reducible = bogocert(&["height", "--field", "x^2-1", "--elem", "1"], None);
    assert_eq!(reducible.status.code(), Some(3));
    let e = stderr_json(&reducible);
    assert_eq!(e["category"], "precondition");
    assert_eq!(e["module"], "numberfield");

    let ramified = bogocert(&["construct", "--field", "x^2-3", "--ell", "3"], None);
    assert_eq!(ramified.status.code(), Some(3));
    assert_eq!(stderr_json(&ramified)["module"], "constructor");

    let io = bogocert(&["verify", "--cert", "/nonexistent/cert.json"], None);
    assert_eq!(io.status.code(), Some(4));

    let seed = bogocert(&["height", "--field", "x", "--elem", "2"], Some("abc"));
    assert_eq!(seed.status.code(), Some(2));
}

#[test]
fn identical_jobs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = [
        "command = \"split\"\nfield = \"x^4+1\"\nell = 17\nformat = \"json\"\n",
        "command = \"kummer\"\nfield = \"x^2+1\"\nelem = \"16,10\"\nell = 5\n",
        "command = \"construct\"\nfield = \"x^3-x-1\"\nell = 7\nformat = \"json\"\n",
        "command = \"height\"\nfield = \"x^5-x-1\"\nelem = \"1,2,0,0,1/3\"\ndigits = 60\n",
    ];
    let mut files = Vec::new();
    for (i, j) in jobs.iter().enumerate() {
        let p = dir.path().join(format!("j{i}.toml"));
        std::fs::write(&p, j).unwrap();
        files.push(p.to_str().unwrap().to_string());
    }
    let run = |jobs: &str, seed: Option<&str>| {
        let mut a = vec!["run", "--jobs", jobs];
        a.extend(files.iter().map(String::as_str));
        let o = bogocert(&a, seed);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        o.stdout
    };
    let base = run("1", None);
    assert_eq!(base, run("4", None));
    assert_eq!(base, run("4", Some("99")));
}

#[test]
fn bounds_subcommand_values() {
    let s = stdout(&bogocert(&["bounds", "--kind", "silverman", "--s", "2", "--d", "2", "--delta", "1", "--norm", "8"], None));
    assert!(s.starts_with("silverman = 2^(1/8) = 1.0905077326652"), "{s}");
    let g = stdout(&bogocert(&["bounds", "--kind", "garza", "--d", "5", "--r", "5"], None));
    assert!(g.contains("1.27201964951406"));
    let t = stdout(&bogocert(&["tower", "--p", "7"], None));
    assert!(t.contains("1.15016331689"), "{t}");
    let e = stdout(&bogocert(&["bounds", "--kind", "excess", "--norm", "28", "--s", "2", "--family", "1:1,2:44"], None));
    assert!(e.contains("7"));
}
