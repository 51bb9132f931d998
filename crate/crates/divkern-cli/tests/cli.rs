use serde_json::Value;
use std::process::{Command, Output};

fn divkern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divkern"))
        .args(args)
        .output()
        .expect("spawn divkern")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn lambert_passes() {
    let o = divkern(&["verify-lambert", "--k", "2", "--z", "0", "--w", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["pass"], true);
    assert!(r["discrepancy"].as_f64().unwrap() < 1e-12);
    assert!(r["route"].is_string() && r["est_error"].is_number());
}

#[test]
fn hardy_value() {
    let o = divkern(&["eval-h", "--k", "1", "--z", "0", "--x", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    // K_0(2) - (pi/2) Y_0(2), mpmath
    let want = -0.687_802_359_134_160_8;
    assert!((r["value"]["re"].as_f64().unwrap() - want).abs() < 1e-10);
    assert_eq!(r["value"]["im"].as_f64().unwrap(), 0.0);
    assert!(r["route"].is_string() && r["est_error"].is_number());

    let o = divkern(&[
        "eval-h", "--k", "1", "--z", "0", "--x", "1", "--route", "bessel",
    ]);
    assert!((json(&o)["value"]["re"].as_f64().unwrap() - want).abs() < 1e-13);
}

#[test]
fn lemma45_exact() {
    let o = divkern(&["verify-lemmas", "--which", "lemma45", "--k", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["pass"], true);
    let checks = r["checks"].as_array().unwrap();
    let exact: Vec<&Value> = checks.iter().filter(|c| c["exact"] == true).collect();
    // m = 1..=8 and the vanishing factors
    assert_eq!(exact.len(), 9);
    assert!(exact.iter().all(|c| c["discrepancy"].as_f64() == Some(0.0)));
}

#[test]
fn strip_violation_is_a_usage_error() {
    let o = divkern(&["eval-h", "--k", "2", "--z", "2.5", "--x", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("-1 < Re z < k"), "{msg}");

    let o = divkern(&["verify-lambert", "--k", "2", "--z", "0", "--w=-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Re w > 0"));

    assert_eq!(
        divkern(&["eval-h", "--k", "2", "--z", "1,2,3", "--x", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(divkern(&["no-such-command"]).status.code(), Some(1));
    let o = divkern(&[
        "verify-voronoi",
        "--alpha",
        "1",
        "--beta",
        "3.5",
        "--n",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failed_verification_exits_2() {
    let o = divkern(&[
        "verify-voronoi",
        "--k",
        "2",
        "--z",
        "0.5",
        "--n",
        "32",
        "--output",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let text = String::from_utf8_lossy(&o.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("identity,terms"));
    // levels 16 and 32
    assert_eq!(lines.len(), 3);
    assert!(lines[2].ends_with(",false"));
}

#[test]
fn complex_and_scientific_arguments() {
    let o = divkern(&["eval-k", "--k", "2", "--z", "4e-1,3e-1", "--x", "1.3,0.2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["z"]["re"].as_f64(), Some(0.4));
    assert_eq!(r["x"]["im"].as_f64(), Some(0.2));

    let o = divkern(&["eval-b", "--z", "0.5", "--b", "2"]);
    let r = json(&o);
    assert!(r["est_error"].as_f64().unwrap() < 1e-10);
}

#[test]
fn tol_override_is_echoed() {
    let o = divkern(&[
        "eval-h",
        "--k",
        "2",
        "--z",
        "0.5",
        "--x",
        "1.5",
        "--route",
        "quadrature",
        "--tol",
        "1e-9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["quadrature"]["rel_tol"].as_f64(), Some(1e-9));

    let o = divkern(&[
        "verify-lambert",
        "--k",
        "2",
        "--z",
        "0.5",
        "--w",
        "1",
        "--tol",
        "1e-20",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["tolerances"]["target"].as_f64(), Some(1e-20));

    let o = divkern(&[
        "verify-voronoi-schwartz",
        "--k",
        "1",
        "--z",
        "0.5",
        "--n",
        "16",
        "--f",
        "gaussian",
        "--quad-tol",
        "1e-9",
    ]);
    assert_eq!(
        json(&o)["tolerances"]["quadrature"]["rel_tol"].as_f64(),
        Some(1e-9)
    );
}

#[test]
fn csv_outputs_have_headers() {
    let o = divkern(&[
        "sieve", "--k", "2", "--z", "0", "--n", "9", "--output", "csv",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,re_sigma,im_sigma,re_s,im_s");
    assert_eq!(lines.len(), 10);
    // sigma_0^(2)(4) = sigma_0^(2)(8) = 2, sigma_0^(2)(9) = 2
    assert!(lines[4].starts_with("4,2e0,"));
    assert!(lines[9].starts_with("9,2e0,"));

    let o = divkern(&[
        "tabulate", "--k", "2", "--z", "0", "--x-max", "4", "--points", "5", "--output", "csv",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("x,re_h,im_h,route,est_error\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn output_is_deterministic() {
    let dir = std::env::temp_dir();
    let a = dir.join(format!("divkern-det-a-{}.json", std::process::id()));
    let b = dir.join(format!("divkern-det-b-{}.json", std::process::id()));
    for (path, threads) in [(&a, "1"), (&b, "2")] {
        let o = divkern(&[
            "verify-voronoi-schwartz",
            "--k",
            "2",
            "--z",
            "0.25",
            "--n",
            "48",
            "--f",
            "poly-exp",
            "--w",
            "1.5",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.code() == Some(0) || o.status.code() == Some(2));
    }
    let (x, y) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let _ = (std::fs::remove_file(&a), std::fs::remove_file(&b));
    assert!(!x.is_empty());
    assert_eq!(x, y);
}
