use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fakeoct"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn verify_stdin(surface: &[u8], json: bool) -> Output {
    let mut cmd = bin();
    cmd.args(["verify", "-"]);
    if json {
        cmd.arg("--json");
    }
    let mut child = cmd.stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(surface).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn iterate_one_json() {
    let o = run(&["iterate", "1", "--json"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{\"n\":1,\"P\":\"2\",\"Pp\":\"1\",\"oracle_match\":true}\n");
}

#[test]
fn iterate_negative() {
    let o = run(&["iterate", "-2", "--json"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"oracle_match\":true"));
}

#[test]
fn systole_two() {
    let o = run(&["systole", "2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["family"], 2);
    assert_eq!(v["count"], 2);
    assert_eq!(v["sq_len"], "2-√2");
    assert_eq!(v["closed_form_match"], true);
}

#[test]
fn gen_pipes_into_verify() {
    for n in [-3, 0, 1, 2, 7] {
        let g = run(&["gen", &n.to_string()]);
        assert!(g.status.success());
        let v = verify_stdin(&g.stdout, true);
        assert!(v.status.success(), "n = {n}");
        let r: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
        assert_eq!(r["periods_match"], true);
        assert_eq!(r["is_fake"], n != 0);
    }
}

#[test]
fn output_is_deterministic() {
    for args in [&["gen", "5"][..], &["table", "-3", "3", "--json"], &["systole", "4", "--json"], &["render", "2"]] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(run(&["iterate"]).status.code(), Some(2));
    assert_eq!(run(&["table", "x", "3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["approx", "0", "--eps", "-1"]).status.code(), Some(2));
}

#[test]
fn broken_surface_exits_one_with_json_error() {
    let o = verify_stdin(b"{\"faces\": []", true);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("line"));
}

#[test]
fn search_budget_is_honored() {
    let o = bin().args(["systole", "5"]).env("OCT_SEARCH_BUDGET", "2").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = bin().args(["systole", "5"]).env("OCT_SEARCH_BUDGET", "lots").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table_partners_approx_render() {
    let t = run(&["table", "1", "3", "--csv"]);
    assert!(stdout(&t).starts_with("n,P,P_f64,Pp,Pp_f64,family"));
    assert_eq!(stdout(&t).lines().count(), 4);
    let p = run(&["partners", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&p.stdout).unwrap();
    assert_eq!(v["match"], true);
    let a = run(&["approx", "0", "0.05", "200", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["reached"], true);
    assert!(v["dist"].as_f64().unwrap() < 0.05);
    let dir = std::env::temp_dir().join(format!("fakeoct-render-{}.svg", std::process::id()));
    let r = run(&["render", "1", "-o", dir.to_str().unwrap()]);
    assert!(r.status.success());
    let svg = std::fs::read_to_string(&dir).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("stroke-dasharray"));
    let _ = std::fs::remove_file(dir);
}

#[test]
fn trace_out_records_every_step() {
    let path = std::env::temp_dir().join(format!("fakeoct-trace-{}.jsonl", std::process::id()));
    let o = run(&["iterate", "3", "--trace-out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count(), 3);
    assert!(body.lines().last().unwrap().contains("\"P\":\"2-√2\""));
    let _ = std::fs::remove_file(path);
}
