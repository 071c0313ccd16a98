use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dbar_kernels::cli::{run, Command as Cmd, ExperimentConfig};
use dbar_kernels::Error;
use serde_json::Value;

const SMALL: &str = "
[conditions]
boundary = 80
interior = 80
collar = 80
diagonal_depth = 6
";

fn write_cfg(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn dbar(cfg: &Path, sub: &str, out: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dbar"))
        .arg(sub)
        .arg("--config")
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn report(out: &Path, sub: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join(format!("report_{sub}.json"))).unwrap()).unwrap()
}

fn ball_check() -> String {
    format!("n = 2\nseed = 4\n\n[domain]\nkind = \"ball\"\nradius = 1.0\n{SMALL}")
}

#[test]
fn check_domain_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "ball.toml", &ball_check());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let oa = dbar(&cfg, "check-domain", &a, &["--threads", "1"]);
    let ob = dbar(&cfg, "check-domain", &b, &["--threads", "3"]);
    assert_eq!(oa.status.code(), Some(0), "{}", String::from_utf8_lossy(&oa.stderr));
    assert_eq!(ob.status.code(), Some(0));
    assert_eq!(fs::read(a.join("conditions.csv")).unwrap(), fs::read(b.join("conditions.csv")).unwrap());
    assert_eq!(report(&a, "check-domain")["checks"], report(&b, "check-domain")["checks"]);
}

#[test]
fn report_embeds_config_and_fingerprint_with_unique_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "ball.toml", &ball_check());
    let out = dir.path().join("o");
    assert_eq!(dbar(&cfg, "check-domain", &out, &["--seed", "9"]).status.code(), Some(0));
    let rep = report(&out, "check-domain");
    assert_eq!(rep["config"]["domain"]["kind"], "ball");
    assert_eq!(rep["fingerprint"]["seed"], 9);
    assert!(rep["fingerprint"]["version"].is_string());
    let names: Vec<&str> = rep["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.iter().collect::<HashSet<_>>().len(), names.len());
    assert!(names.contains(&"condition_c0") && names.contains(&"condition_Cplus"));
}

#[test]
fn failed_condition_gives_exit_status_one() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("n = 2\n\n[domain]\nkind = \"limacon\"\nb = 0.9\n{SMALL}");
    let cfg = write_cfg(dir.path(), "limacon.toml", &body);
    let out = dir.path().join("o");
    let o = dbar(&cfg, "check-domain", &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let rep = report(&out, "check-domain");
    let failed: Vec<&Value> = rep["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn malformed_configs_give_exit_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let power = "n = 2\n\n[domain]\nkind = \"power_domain\"\nexponents = [1.0, 2.0, 2.0, 2.0]\nlevel = 1.0\n";
    let cfg = write_cfg(dir.path(), "power.toml", power);
    let o = dbar(&cfg, "check-domain", &dir.path().join("o"), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m > 1"), "{}", String::from_utf8_lossy(&o.stderr));

    let unknown = format!("{}\nbogus = 1\n", ball_check());
    let cfg = write_cfg(dir.path(), "unknown.toml", &unknown);
    assert_eq!(dbar(&cfg, "check-domain", &dir.path().join("o"), &[]).status.code(), Some(2));

    let holder = "n = 2\n\n[domain]\nkind = \"ball\"\nradius = 1.0\n\n[holder]\nexponents = [1.0]\n";
    let cfg = write_cfg(dir.path(), "holder.toml", holder);
    assert_eq!(dbar(&cfg, "holder", &dir.path().join("o"), &[]).status.code(), Some(2));
}

#[test]
fn h_in_top_degree_is_out_of_scope() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!(
        "n = 2\nout = {:?}\n\n[domain]\nkind = \"ball\"\nradius = 1.0\n\n[data]\nq = 2\ncoeffs = {{ \"1,2\" = \"1\" }}\n\n[operator]\ntag = \"H\"\n",
        dir.path().join("o")
    );
    let cfg = ExperimentConfig::parse(&body).unwrap();
    let err = run(Cmd::Solve, &cfg).unwrap_err();
    assert!(matches!(err, Error::OutOfScope(_)), "{err}");
}

#[test]
fn solve_and_verify_with_zero_data() {
    let dir = tempfile::tempdir().unwrap();
    let disk = "n = 1\nseed = 2\n\n[domain]\nkind = \"ball\"\nradius = 1.0\n\n[data]\nq = 1\ncoeffs = { \"1\" = \"1\" }\nexact = { \"\" = \"conj(z1)\" }\n\n[operator]\ntag = \"T\"\n\n[probes]\ncount = 5\n";
    let cfg = write_cfg(dir.path(), "disk.toml", disk);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(dbar(&cfg, "solve", &a, &[]).status.code(), Some(0));
    assert_eq!(dbar(&cfg, "solve", &b, &["--threads", "2"]).status.code(), Some(0));
    assert_eq!(fs::read(a.join("solution.csv")).unwrap(), fs::read(b.join("solution.csv")).unwrap());

    let zero = "n = 2\n\n[domain]\nkind = \"ball\"\nradius = 1.0\n\n[data]\nq = 1\ncoeffs = {}\ndbar = {}\n\n[resolution]\nboundary = 32\nvolume = 8\n\n[probes]\ncount = 3\n\n[verify]\nkoppelman_points = 5\noperators = [\"T\"]\n";
    let cfg = write_cfg(dir.path(), "zero.toml", zero);
    let out = dir.path().join("z");
    let o = dbar(&cfg, "verify", &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let ladder = fs::read_to_string(out.join("ladder.csv")).unwrap();
    assert!(ladder.lines().count() > 1);
}
