use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn gainforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gainforge")).args(args).output().expect("spawn gainforge")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn build(dir: &TempDir, name: &str, params: &[&str], file: &str) -> String {
    let out = path(dir, file);
    let mut args = vec!["construct", name, "-o", &out];
    for p in params {
        args.extend(["--param", p]);
    }
    let o = gainforge(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn construct_and_verify_w4() {
    let dir = TempDir::new().unwrap();
    let w4 = build(&dir, "W4", &[], "w4.gg");
    let o = gainforge(&["verify", &w4]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("TWO-EV theta1=1.732050807568"));
    assert!(stdout(&o).contains("m=2"));
}

#[test]
fn verify_rejects_cycle() {
    let dir = TempDir::new().unwrap();
    let c5 = build(&dir, "cycle", &["n=5"], "c5.gg");
    let o = gainforge(&["verify", &c5]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).starts_with("NOT-TWO-EV"));
}

#[test]
fn spectrum_lists_clusters() {
    let dir = TempDir::new().unwrap();
    let k4 = build(&dir, "K_n", &["n=4"], "k4.gg");
    let text = stdout(&gainforge(&["spectrum", &k4]));
    let (values, clusters) = text.split_once("clusters:\n").unwrap();
    assert_eq!(values.lines().count(), 4);
    let mults: Vec<&str> = clusters.lines().map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(mults, ["1", "3"]);
}

#[test]
fn parameterized_construct() {
    let dir = TempDir::new().unwrap();
    let t6 = build(&dir, "toral", &["t=3", "x=rot:1/5"], "t6.gg");
    assert_eq!(code(&gainforge(&["verify", &t6])), 0);
    let o = gainforge(&["construct", "toral", "--param", "x=garbage"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&gainforge(&["construct", "NoSuchGraph"])), 2);
}

#[test]
fn malformed_file_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.gg");
    std::fs::write(&bad, "gaingraph v1\nn 3\ne 0 1 num 2 0\n").unwrap();
    let o = gainforge(&["verify", &bad]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(code(&gainforge(&["verify", &path(&dir, "missing.gg")])), 2);
}

#[test]
fn equiv_and_iso() {
    let dir = TempDir::new().unwrap();
    let t6 = build(&dir, "toral", &["t=3", "x=rot:1/3"], "t6.gg");
    let k222 = build(&dir, "K222_gamma", &[], "k222.gg");
    let w4 = build(&dir, "W4", &[], "w4.gg");
    let k4 = build(&dir, "K_n", &["n=4"], "k4.gg");

    let o = gainforge(&["equiv", &w4, &w4]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("EQUIVALENT"));
    let o = gainforge(&["equiv", &w4, &k4]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).starts_with("NOT-EQUIVALENT"));

    let o = gainforge(&["iso", &w4, &k4]);
    assert_eq!(code(&o), 4);
    let o = gainforge(&["iso", &t6, &k222, "--budget", "1"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("TIMEOUT"));
}

#[test]
fn lines_round_trip() {
    let dir = TempDir::new().unwrap();
    let w4 = build(&dir, "W4", &[], "w4.gg");
    let lines = path(&dir, "w4.lines");
    assert_eq!(code(&gainforge(&["lines", "export", &w4, "-o", &lines])), 0);
    let o = gainforge(&["lines", "check", &lines]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("TIGHT z=2.0"));
    let back = path(&dir, "back.gg");
    let alpha = format!("{}", 1.0 / 3f64.sqrt());
    let o = gainforge(&["lines", "import", &lines, "--alpha", &alpha, "-o", &back]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("tight=true"));
    assert_eq!(code(&gainforge(&["verify", &back])), 0);
}

#[test]
fn lines_check_not_tight() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "two.lines");
    let mub = path(&dir, "mub.lines");
    assert_eq!(code(&gainforge(&["lines", "build", "MUB_C2", "--param", "t=2", "-o", &mub])), 0);
    let text = std::fs::read_to_string(&mub).unwrap();
    let kept: Vec<&str> = text.lines().collect();
    let trimmed = rewrite_count(&kept, 3);
    std::fs::write(&file, trimmed).unwrap();
    let o = gainforge(&["lines", "check", &file]);
    assert_eq!(code(&o), 4, "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("NOT-TIGHT"));
}

fn rewrite_count(rows: &[&str], keep: usize) -> String {
    let mut out = String::new();
    let mut seen = 0;
    for r in rows {
        let mut toks = r.split_whitespace();
        match toks.next() {
            Some("count") => out.push_str(&format!("count {keep}\n")),
            Some("v") => {
                if seen < keep {
                    out.push_str(r);
                    out.push('\n');
                }
                seen += 1;
            }
            _ => {
                out.push_str(r);
                out.push('\n');
            }
        }
    }
    out
}

#[test]
fn dismantle_mub_bases() {
    let dir = TempDir::new().unwrap();
    let mub = path(&dir, "mub.lines");
    assert_eq!(code(&gainforge(&["lines", "build", "MUB_C3", "--param", "t=4", "-o", &mub])), 0);
    let o = gainforge(&["dismantle", &mub, "--partition", "0-2;3-5;6-8;9-11"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("part")).count(), 4);
    assert!(text.contains("union t=4 n=12 TWO-EV"));
    let o = gainforge(&["dismantle", &mub, "--partition", "0,3,6;1-2,4-5,7-11"]);
    assert_eq!(code(&o), 4);
    assert_eq!(code(&gainforge(&["dismantle", &mub, "--partition", "0-5"])), 2);
}

#[test]
fn dismantle_finds_witting_spread() {
    let dir = TempDir::new().unwrap();
    let w = path(&dir, "witting.lines");
    assert_eq!(code(&gainforge(&["lines", "build", "Witting", "-o", &w])), 0);
    let o = gainforge(&["dismantle", &w, "--find"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("union t=10 n=40 TWO-EV"));
}

#[test]
fn catalog_verify_with_negative_control() {
    let o = gainforge(&["catalog", "--verify-all", "--only", "degree4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("name,order,k,m,theta1,theta2,residual,status\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with(",PASS")).count(), 8);

    let o = gainforge(&["catalog", "--verify-all", "--only", "degree4", "--negative-control"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).lines().any(|l| l.starts_with("W4_corrupted,") && l.ends_with(",FAIL")));
}

#[test]
fn catalog_list() {
    let o = gainforge(&["catalog", "--list"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().any(|l| l.starts_with("Witting\t")));
}

#[test]
fn search_converges_on_c4() {
    let dir = TempDir::new().unwrap();
    let c4 = build(&dir, "cycle", &["n=4"], "c4.gg");
    let out = path(&dir, "found.gg");
    let trace = path(&dir, "trace.csv");
    let o = gainforge(&["search", "--underlying", &c4, "--quick", "--seed", "3", "-o", &out, "--trace", &trace]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("CONVERGED"));
    assert!(stdout(&o).contains("identified IG(W2)"));
    assert_eq!(code(&gainforge(&["verify", &out])), 0);
    assert!(std::fs::read_to_string(&trace).unwrap().starts_with("temperature,best_f\n"));
}

#[test]
fn search_seed_from_env_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let c4 = build(&dir, "cycle", &["n=4"], "c4.gg");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_gainforge"))
            .args(["search", "--underlying", &c4, "--quick", "--tau", "1e-3"])
            .env("GAINFORGE_SEED", "11")
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("seed=11"));
}

#[test]
fn search_exhausted_exit_code() {
    let dir = TempDir::new().unwrap();
    let c5 = build(&dir, "cycle", &["n=5"], "c5.gg");
    let o = gainforge(&["search", "--underlying", &c5, "--quick", "--tau", "1e-2", "--iters", "50"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("EXHAUSTED"));
}

#[test]
fn invalid_search_config_is_usage_error() {
    let dir = TempDir::new().unwrap();
    let c4 = build(&dir, "cycle", &["n=4"], "c4.gg");
    assert_eq!(code(&gainforge(&["search", "--underlying", &c4, "--alpha", "1.5"])), 2);
    assert!(Path::new(&c4).exists());
}
