use std::io::Write;
use std::process::{Command, Stdio};

use lamnorm::{alpha_eq, parse, parse_generated};

const KIO: &str = r"(\a.\b.a) (\z.z) ((\w.w w)(\w.w w))";

fn lamnorm(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lamnorm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn prints(args: &[&str], expected: &str) {
    let (code, out, err) = lamnorm(args, "");
    assert_eq!(code, 0, "{args:?}: {err}");
    let got = parse_generated(out.trim()).unwrap();
    assert!(alpha_eq(&got, &parse(expected).unwrap()), "{args:?}: {out}");
}

#[test]
fn normalize_examples() {
    prints(&["normalize", "--strategy", "nbe", r"(\x.x) (\y.y)"], r"\y. y");
    assert_eq!(lamnorm(&["normalize", "--strategy", "cbv", "--fuel", "1000", KIO], "").0, 2);
    assert_eq!(lamnorm(&["normalize", "--strategy", "cps", "(x y) z"], "").0, 3);
    assert_eq!(lamnorm(&["normalize", "(x"], "").0, 1);
    prints(&["normalize", "--strategy", "cbn", KIO], r"\z. z");
}

#[test]
fn whnf_examples() {
    prints(&["whnf", r"(\x.x) (\y.(\z.z) y)"], r"\y. (\z. z) y");
    prints(&["whnf", r"x ((\y.y) z)"], "x z");
    assert_eq!(lamnorm(&["whnf", r"(\x.x x)(\x.x x)", "--fuel", "100"], "").0, 2);
}

#[test]
fn cps_examples_are_byte_exact() {
    assert_eq!(lamnorm(&["cps", "--variant", "cbn", "x y"], "").1, "\\_k0. x (\\_m1. _m1 y _k0)\n");
    assert_eq!(lamnorm(&["cps", "--variant", "cbn", "x"], "").1, "x\n");
    assert_eq!(lamnorm(&["cps", "--variant", "cbv", "x"], "").1, "\\_k0. _k0 x\n");
}

#[test]
fn check_examples() {
    let (code, out, _) = lamnorm(&["check", r"(\x.x) y"], "");
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("  ") && l.ends_with(" y")).count(), 5, "{out}");
    assert!(out.ends_with("1 checked, 0 disagreements\n"));

    let (code, out, _) = lamnorm(&["check", KIO], "");
    assert_eq!(code, 0, "{out}");
    let status = |name: &str| out.lines().find(|l| l.trim_start().starts_with(name)).unwrap().to_owned();
    assert!(status("oracle").contains("normalized"));
    assert!(status("cbn").contains("normalized"));
    assert!(status("cbv").contains("diverged"));
    assert!(status("nbe").contains("diverged"));

    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/check.lam");
    let (code, out, _) = lamnorm(&["check", "--corpus", corpus], "");
    assert_eq!(code, 0);
    assert!(out.ends_with("100 checked, 0 disagreements\n"));
}

#[test]
fn bench_examples() {
    let (code, out, _) = lamnorm(&["bench", "--suite", "church", "--max", "6", "--format", "json"], "");
    assert_eq!(code, 0);
    let records: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 6 * 3 * 4);
    let exp = records.iter().find(|r| r["case"] == "exp 2 6" && r["strategy"] == "nbe").unwrap();
    assert_eq!(exp["result_size"], lamnorm::church::encode(64).size());

    assert_eq!(lamnorm(&["bench", "--suite", "church", "--max", "1"], "").0, 0);
    assert_eq!(lamnorm(&["bench", "--suite", "primes"], "").0, 1);
}

#[test]
fn repl_examples() {
    let session = ":let id = \\x.x\nid z\n(\\x.x) y\n:strategy cbv\n(\\a.\\b.a) (\\z.z) ((\\w.w w)(\\w.w w))\n:quit\n";
    let (code, out, _) = lamnorm(&["repl"], session);
    assert_eq!(code, 0);
    let replies: Vec<_> = out.split("> ").map(str::trim).filter(|s| !s.is_empty()).collect();
    assert_eq!(replies[1..4], ["z", "y", "strategy cbv"]);
    assert!(replies[4].starts_with("diverged"));
}

#[test]
fn json_results_reparse() {
    for (strategy, expr) in [("nbe", r"(\f.\x.f (f x)) (\f.\x.f (f x))"), ("cbn", KIO), ("whnf", r"\x.(\y.y) x")] {
        let (code, out, _) = lamnorm(&["normalize", "--json", "--strategy", strategy, expr], "");
        assert_eq!(code, 0);
        let report: serde_json::Value = serde_json::from_str(&out).unwrap();
        let result = parse_generated(report["result"].as_str().unwrap()).unwrap();
        let (_, plain, _) = lamnorm(&["normalize", "--strategy", strategy, expr], "");
        assert!(alpha_eq(&result, &parse_generated(&plain).unwrap()));
        assert!(report["steps_used"].as_u64().unwrap() <= report["fuel_limit"].as_u64().unwrap());
    }
}

#[test]
fn exit_codes_follow_the_outcome() {
    let diverging = r"(\x.x x)(\x.x x)";
    for strategy in ["whnf", "cbn", "cbv", "nbe"] {
        let (code, out, _) = lamnorm(&["normalize", "--json", "--fuel", "50", "--strategy", strategy, diverging], "");
        assert_eq!(code, 2);
        assert_eq!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["outcome"], "diverged");
    }
    let (code, out, _) = lamnorm(&["normalize", "--json", "--strategy", "cps", "(x y) z"], "");
    assert_eq!(code, 3);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["outcome"], "not_cps");
}

#[test]
fn stdin_input() {
    let (code, out, _) = lamnorm(&["normalize", "--stdin"], "# comment\n(\\x.x) y\n");
    assert_eq!((code, out.as_str()), (0, "y\n"));
}
