//! The installed binary, driven as a subprocess.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radial-restriction"))
        .args(args)
        .env_remove("RESTRICT_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sweep_header_is_stable() {
    let out = run(&["sweep", "--d", "3", "--p", "1.2", "--q", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "d,p,q,p_prime,beta,integral,integral_err,k_rad,k_rad_paper,gauss_opt,gauss_paper,tomas_stein_ok"
    );
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn sweep_marks_points_outside_the_window() {
    let out = run(&["sweep", "--d", "2", "--p", "1.2:1.4:2", "--q", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(!rows[0].contains("skipped"));
    assert!(rows[1].contains("skipped"));
}

#[test]
fn constant_outside_window_exits_with_domain_code() {
    let out = run(&["constant", "--d", "2", "--p", "1.4", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("4/3"));
}

#[test]
fn malformed_numbers_are_parse_errors() {
    let out = run(&["constant", "--p", "one"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn constant_json_has_both_assemblies() {
    let out = run(&["constant", "--d", "3", "--p", "1.2", "--q", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let k = v["k_rad_first_principles"].as_f64().unwrap();
    assert!((k - 4.625_406_328_923_67).abs() < 1e-10, "{v}");
    assert!(v["k_rad_paper_closed_form"].as_f64().unwrap() > 0.0);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# grid\nd = 2\np = 1.1\nq = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&run(&["sweep", "--config", cfg]));
    assert!(from_file.lines().nth(1).unwrap().starts_with("2,1.1,4,"), "{from_file}");
    let overridden = stdout(&run(&["sweep", "--config", cfg, "--q", "2"]));
    assert!(overridden.lines().nth(1).unwrap().starts_with("2,1.1,2,"), "{overridden}");
}

#[test]
fn output_files_are_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let out = run(&["-o", path.to_str().unwrap(), "sweep", "--d", "2:3:2", "--p", "1.1:1.2:2", "--q", "1:2:2"]);
        assert!(out.status.success());
        assert!(Path::new(&path).exists());
    }
    assert_eq!(read("a.csv"), read("b.csv"));
}

#[test]
fn verify_report_is_reproducible_and_seed_sensitive() {
    let a = run(&["verify", "--seed", "7", "--count", "20"]);
    let b = run(&["verify", "--seed", "7", "--count", "20"]);
    let c = run(&["verify", "--seed", "8", "--count", "20"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gls_with_constant_weight_runs() {
    let out = run(&["gls", "--d", "3", "--psi-constant", "1", "--count", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!stdout(&out).is_empty());
}
