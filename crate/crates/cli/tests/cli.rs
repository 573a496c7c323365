use std::process::{Command, Output};

fn rankprof(args: &[&str]) -> Output {
    rankprof_env(args, &[])
}

fn rankprof_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rankprof"));
    cmd.args(args).env_remove("RANKPROF_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn parity_profile_csv() {
    let o = rankprof(&["profile", "--lang", "regex:(aa)*", "--max-n", "16", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("n,exact,lower,upper,witness_member,witness_nonmember\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 15);
    let exact: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(exact, ["2", "2", "3", "3", "3", "3", "4", "4", "4", "4", "4", "4", "4", "4", "5"]);
    assert!(stderr(&o).contains("classification: logarithmic-nonaperiodic"));
}

#[test]
fn profile_json_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = rankprof(&["profile", "--lang", "builtin:threshold:3", "--max-n", "8", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema"], "rankprof.profile/1");
    assert_eq!(report["classification"], "bounded-starfree");
    assert_eq!(report["global_rank"]["value"], 2);
    assert!(report["witness"].is_null());
    assert_eq!(report["rows"].as_array().unwrap().len(), 7);
}

#[test]
fn empty_language_has_zero_profile() {
    let o = rankprof(&["profile", "--lang", "regex:@empty", "--max-n", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(csv_rows(&stdout(&o)).iter().all(|r| r[1] == "0"));
}

#[test]
fn dfa_file_language() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("even.json");
    std::fs::write(&path, r#"{"alphabet":["a"],"states":2,"start":0,"accept":[0],"delta":[[1],[0]]}"#).unwrap();
    let spec = format!("dfa:{}", path.display());
    let from_file = rankprof(&["profile", "--lang", &spec, "--max-n", "12", "--format", "csv"]);
    let builtin = rankprof(&["profile", "--lang", "builtin:even", "--max-n", "12", "--format", "csv"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&builtin));
}

#[test]
fn synth_formulas() {
    let o = rankprof(&["synth", "dist", "--d", "0"]);
    assert_eq!(stdout(&o).lines().next(), Some("(eq v0 v1)"));
    let o = rankprof(&["synth", "length", "--m", "0"]);
    assert_eq!(stdout(&o).lines().next(), Some("(not (exists v0 (eq v0 v0)))"));
    let o = rankprof(&["synth", "exact-word", "--word", "ab"]);
    assert_eq!(o.status.code(), Some(0));
    let meta = stdout(&o).lines().nth(1).unwrap().to_string();
    let rank: usize = meta.split("rank=").nth(1).unwrap().split(' ').next().unwrap().parse().unwrap();
    assert!(rank <= 1 + 4, "{meta}");
}

#[test]
fn synth_rejects_foreign_letters() {
    let o = rankprof(&["synth", "exact-word", "--word", "abc", "--alphabet", "ab"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn extract_parity_witness() {
    let o = rankprof(&["extract", "--lang", "regex:(aa)*"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let w: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(w["x"], "a");
    assert_eq!(w["period"], 2);
    assert_eq!(w["context_len"], 0);
}

#[test]
fn extract_on_star_free_exits_3() {
    let o = rankprof(&["extract", "--lang", "regex:a*b*"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no cycle witness"));
}

#[test]
fn separator_matches_parity_profile() {
    let sep = rankprof(&["separator", "--k", "regex:(aa)*", "--h", "regex:a(aa)*", "--max-n", "16", "--format", "csv"]);
    let prof = rankprof(&["profile", "--lang", "regex:(aa)*", "--max-n", "16", "--format", "csv"]);
    assert_eq!(sep.status.code(), Some(0), "{}", stderr(&sep));
    let s: Vec<String> = csv_rows(&stdout(&sep)).into_iter().map(|r| r[1].clone()).collect();
    let p: Vec<String> = csv_rows(&stdout(&prof)).into_iter().map(|r| r[1].clone()).collect();
    assert_eq!(s, p);
}

#[test]
fn separator_rejects_overlap() {
    let o = rankprof(&["separator", "--k", "regex:a*", "--h", "regex:aa", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_parity() {
    let o = rankprof(&["verify", "--lang", "builtin:even", "--max-n", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(csv_rows(&stdout(&o)).iter().all(|r| r.last().unwrap() == "ok"));
}

#[test]
fn horizon_cap_skips_rows_and_exits_2() {
    let o = rankprof(&["profile", "--lang", "regex:(a|b)*", "--max-n", "12", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
    let rows = csv_rows(&stdout(&o));
    let skipped: Vec<&str> = rows.iter().filter(|r| r[1] == "skipped").map(|r| r[0].as_str()).collect();
    assert_eq!(skipped, ["11", "12"]);
}

#[test]
fn budget_env_is_honoured() {
    let args = ["profile", "--lang", "regex:(ab)*", "--max-n", "6", "--format", "csv"];
    assert_eq!(rankprof(&args).status.code(), Some(0));
    let o = rankprof_env(&args, &[("RANKPROF_BUDGET", "10")]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stdout(&o).contains("skipped"));
}

#[test]
fn regex_syntax_error_exits_1() {
    let o = rankprof(&["profile", "--lang", "regex:(a", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["profile", "--lang", "regex:b*(ab*ab*)*", "--max-n", "8"];
    let (a, b) = (rankprof(&args), rankprof(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
