use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use msroot_core::io::{parse_roots, parse_system};
use msroot_core::solver::{multiset_distance, newton_polish};
use serde_json::Value;
use tempfile::TempDir;

const PAPER: &str = r#"{"n": 2, "polys": [
    {"terms": [{"exps": [0,2], "coef": [1,0]}, {"exps": [1,1], "coef": [3,0]},
               {"exps": [1,0], "coef": [-4,0]}, {"exps": [0,0], "coef": [1,0]}]},
    {"terms": [{"exps": [1,1], "coef": [-6,0]}, {"exps": [2,0], "coef": [-2,0]},
               {"exps": [0,1], "coef": [6,0]}, {"exps": [0,0], "coef": [3,0]}]}]}"#;

fn msroot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msroot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_paper_system() {
    let dir = TempDir::new().unwrap();
    let sys_path = write(&dir, "paper.json", PAPER);
    let sys = parse_system(PAPER).unwrap();

    let roots = parse_roots(&stdout(&msroot(&["solve", s(&sys_path)]))).unwrap();
    assert_eq!(roots.roots.len(), 4);
    assert_eq!(roots.method, "direct-svd");
    for r in &roots.roots {
        assert!(r.residual < 1e-8);
    }
    for z in roots.points() {
        let (_, step) = newton_polish(&sys, &z, 1).unwrap();
        assert!(step < 1e-6);
    }

    let other = parse_roots(&stdout(&msroot(&[
        "solve",
        s(&sys_path),
        "--method",
        "nullspace",
        "--factorization",
        "qrp",
    ])))
    .unwrap();
    assert_eq!(other.method, "nullspace-qrp");
    assert!(multiset_distance(&roots.points(), &other.points()) < 1e-6);
}

#[test]
fn solve_is_deterministic_with_random_combinations() {
    let dir = TempDir::new().unwrap();
    let sys_path = write(&dir, "paper.json", PAPER);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        stdout(&msroot(&["solve", s(&sys_path), "--rand-combos", "--seed", "7", "--out", s(out)]));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let doc: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["random_combinations"], true);
    assert!(doc["tolerances"].is_object());
    assert!(doc["version"].is_string());
}

#[test]
fn tol_flag_scales_recorded_tolerances() {
    let dir = TempDir::new().unwrap();
    let sys_path = write(&dir, "paper.json", PAPER);
    let base: Value = serde_json::from_str(&stdout(&msroot(&["solve", s(&sys_path)]))).unwrap();
    let scaled: Value = serde_json::from_str(&stdout(&msroot(&["solve", s(&sys_path), "--tol", "10"]))).unwrap();
    let get = |v: &Value| v["tolerances"]["rank_rel"].as_f64().unwrap();
    assert!((get(&scaled) / get(&base) - 10.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let nongeneric = write(
        &dir,
        "ng.json",
        r#"{"n": 2, "polys": [{"terms": [{"exps": [1,1], "coef": [1,0]}]},
            {"terms": [{"exps": [1,1], "coef": [1,0]}, {"exps": [0,0], "coef": [-1,0]}]}]}"#,
    );
    assert_eq!(msroot(&["solve", s(&nongeneric)]).status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    assert_eq!(msroot(&["solve", s(&missing)]).status.code(), Some(1));

    let bad = write(&dir, "bad.json", &PAPER.replace(r#""coef": [-4,0]"#, r#""coef": "oops""#));
    let out = msroot(&["solve", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("poly 0, term 2"), "{err}");

    let truncated = write(&dir, "trunc.json", "{\"n\": 2, \"polys\": [");
    assert_eq!(msroot(&["solve", s(&truncated)]).status.code(), Some(1));

    assert_eq!(msroot(&["solve"]).status.code(), Some(1));
    assert_eq!(msroot(&["gen", "unknown", "--n", "2"]).status.code(), Some(1));
    assert_eq!(msroot(&["--help"]).status.code(), Some(0));
}

fn gen(args: &[&str]) -> (Value, msroot_core::PolySystem) {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let text = stdout(&msroot(&full));
    (serde_json::from_str(&text).unwrap(), parse_system(&text).unwrap())
}

#[test]
fn gen_devastating_structure() {
    let (doc, sys) = gen(&["devastating", "--n", "3", "--eps", "0.01", "--seed", "1"]);
    assert_eq!(sys.polys().len(), 3);
    for p in sys.polys() {
        let quadratic = p.terms().filter(|(e, _)| e.total_degree() == 2).count();
        let linear = p.terms().filter(|(e, _)| e.total_degree() == 1).count();
        assert_eq!((quadratic, linear, p.num_terms()), (1, 3, 4));
    }
    assert_eq!(doc["meta"]["seed"], 1);
}

#[test]
fn gen_random_term_counts() {
    let (_, sys) = gen(&["random", "--n", "2", "--deg", "3"]);
    assert_eq!(sys.polys().len(), 2);
    assert!(sys.polys().iter().all(|p| p.num_terms() == 10));
}

#[test]
fn gen_conic_self_check() {
    let (doc, sys) = gen(&["conic", "--n", "2", "--k", "2", "--alpha", "1e-3"]);
    let meta = &doc["meta"];
    assert_eq!(meta["verified"], true);
    assert!(meta["max_prescribed_residual"].as_f64().unwrap() <= 1e-9);
    let roots = meta["prescribed_roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    for r in roots {
        let z: Vec<num_complex::Complex64> = r
            .as_array()
            .unwrap()
            .iter()
            .map(|x| num_complex::Complex64::new(x.as_f64().unwrap(), 0.0))
            .collect();
        assert!(sys.eval(&z).unwrap().iter().all(|v| v.norm() <= 1e-9));
    }
}

fn summary(csv: &str, key: &str) -> Vec<f64> {
    csv.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .flat_map(|l| l.split(' '))
        .filter_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        .map(|v| v.parse().unwrap())
        .collect()
}

#[test]
fn experiment_devastating_growth() {
    let csv = stdout(&msroot(&["experiment", "devastating_growth", "--eps", "0.1", "--ns", "2..5"]));
    assert!(csv.lines().any(|l| l == "n,eps,delta,alpha,k,seed,root_cond,eig_cond,cr"));
    let g = summary(&csv, "growth_rate");
    assert_eq!(g.len(), 1);
    assert!((g[0] - 9.0).abs() < 1.5, "{g:?}");
    assert!(csv.lines().next().unwrap().contains("seed=0"));
}

#[test]
fn experiment_perturb_growth_decreases() {
    let csv = stdout(&msroot(&["experiment", "perturb_growth", "--ns", "2..4", "--trials", "3"]));
    let g = summary(&csv, "median_growth_rate");
    assert_eq!(g.len(), 4);
    assert!(g.windows(2).all(|w| w[1] < w[0]), "{g:?}");
}

#[test]
fn experiment_method_compare_columns() {
    let csv = stdout(&msroot(&["experiment", "method_compare", "--dims", "3..5", "--trials", "20"]));
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("dim,direct-svd,direct-qrp"));
    let mut svd_wins = 0;
    for line in lines {
        let v: Vec<f64> = line.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        if v[0] <= v[1] {
            svd_wins += 1;
        }
    }
    assert!(svd_wins >= 2);
}

#[test]
fn experiment_rejects_single_point_fit() {
    let out = msroot(&["experiment", "devastating_growth", "--ns", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flops_csv_is_deterministic() {
    let a = stdout(&msroot(&["flops", "--dims", "3,4", "--degrees", "2..60"]));
    let b = stdout(&msroot(&["flops", "--dims", "3,4", "--degrees", "2..60"]));
    assert_eq!(a, b);
    let rows: Vec<&str> = a.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "dim,degree,simple_flops,dbd_flops,ratio");
    assert_eq!(rows.len(), 1 + 2 * 59);
    assert!(rows[1..].iter().all(|r| r.split(',').nth(4).unwrap().parse::<f64>().unwrap() > 0.0));
}

#[test]
fn bench_writes_one_row_per_method() {
    let csv = stdout(&msroot(&["bench", "--dims", "2", "--trials", "1", "--methods", "direct-svd,dbd-svd"]));
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "dim,degree,method,trials,median_seconds,max_residual");
    assert_eq!(rows.len(), 3);
}
