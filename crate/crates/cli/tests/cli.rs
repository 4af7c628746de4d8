use std::path::PathBuf;
use std::process::Command;

use wahl_cli::report::Report;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wahl").chain(args.iter().copied());
    let code = wahl_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn value<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in\n{out}"))
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wahl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn genus_of_quintic_with_triple_point() {
    let (code, out) = run(&["genus", "--curve", "corpus:hyperell-5-3"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "genus"), "3");
    assert_eq!(value(&out, "seed"), "0");
    assert!(value(&out, "p").parse::<u64>().unwrap() >= 1 << 28);
}

#[test]
fn smooth_septic_corank() {
    let (code, out) = run(&["corank", "--curve", "corpus:smooth-plane-7"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "corank"), "10");
    assert_eq!(value(&out, "points"), "85");
}

#[test]
fn hyperelliptic_sextic_corank() {
    let (_, out) = run(&["corank", "--curve", "corpus:hyperell-6-4", "--seed", "3"]);
    assert_eq!(value(&out, "corank"), "10");
}

#[test]
fn smooth_septic_has_no_second_order_normal_sections() {
    let (code, out) = run(&["normal", "--k", "2", "--curve", "corpus:smooth-plane-7"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "dim"), "0");
}

#[test]
fn reports_are_reproducible() {
    let args = ["gauss", "--k", "2", "--curve", "corpus:trigonal-6-3", "--seed", "5"];
    let (_, a) = run(&args);
    let (_, b) = run(&args);
    assert_eq!(a, b);
    let (_, c) = run(&["gauss", "--k", "2", "--curve", "corpus:trigonal-6-3", "--seed", "6"]);
    assert_ne!(value(&a, "p"), value(&c, "p"));
    assert_eq!(value(&a, "corank"), value(&c, "corank"));
}

#[test]
fn corpus_lists_named_curves() {
    let (code, out) = run(&["corpus"]);
    assert_eq!(code, 0);
    assert!(value(&out, "count").parse::<usize>().unwrap() >= 7);
    assert!(value(&out, "nodal-8-2").contains("genus=19"));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&[]).0, 64);
    assert_eq!(run(&["corank"]).0, 64);
    assert_eq!(run(&["corank", "--curve", "corpus:nope"]).0, 64);
    assert_eq!(
        run(&["corank", "--curve", "corpus:smooth-plane-7", "--prime", "15"]).0,
        64
    );
    assert_eq!(run(&["frobnicate"]).0, 64);
    assert_eq!(run(&["extend", "--curve", "corpus:smooth-plane-7"]).0, 64);
}

#[test]
fn parse_errors_exit_65() {
    let bad = scratch("bad.curve", "degree 4\nterm 1 1 x 1\n");
    let (code, out) = run(&["genus", "--curve", bad.to_str().unwrap()]);
    assert_eq!(code, 65);
    assert_eq!(value(&out, "error"), "PARSE");
    assert_eq!(run(&["genus", "--curve", "/nonexistent/file.curve"]).0, 65);
}

#[test]
fn gates_exit_1() {
    let (code, out) = run(&["extend", "--random-ribbon", "--curve", "corpus:trigonal-6-3"]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "error"), "CLIFF_GATE");
    let (code, out) = run(&["normal", "--curve", "corpus:hyperell-6-4"]);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "error"), "HYPERELLIPTIC_INPUT");
}

#[test]
fn curve_file_round_trip() {
    let (_, out) = run(&["genus", "--curve", "corpus:nodal-7-3", "--dump"]);
    let body: String = out
        .lines()
        .skip_while(|l| *l != "begin curve")
        .skip(1)
        .take_while(|l| *l != "end curve")
        .map(|l| format!("{l}\n"))
        .collect();
    let path = scratch("nodal-7-3.curve", &body);
    let (code, again) = run(&["corank", "--curve", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{again}");
    assert_eq!(value(&again, "genus"), "12");
    assert_eq!(value(&again, "p"), value(&out, "p"));
    assert_eq!(value(&again, "corank"), "7");
}

#[test]
fn plane_extension_with_explicit_cubic() {
    // no singular points to pass through, so the Fermat cubic only needs
    // to meet the curve transversally
    let cubic = scratch("fermat.cubic", "term 3 0 0 1\nterm 0 3 0 1\nterm 0 0 3 1\n");
    let (code, out) = run(&[
        "plane-extend",
        "--curve",
        "corpus:smooth-plane-7",
        "--cubic",
        cubic.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "dim"), "16");
    assert_eq!(value(&out, "cubic_rank"), "1");
    assert_eq!(value(&out, "curve_span"), "15");
}

#[test]
fn extension_dump_has_every_quadric() {
    let (code, out) = run(&["extend", "--ribbon-index", "0", "--curve", "corpus:nodal-7-3", "--dump"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(value(&out, "certificate"), "ok");
    assert_eq!(value(&out, "residue_zero"), "true");
    let m: usize = value(&out, "quadrics").parse().unwrap();
    assert!(out.contains(&format!("\nm {m}\n")));
}

#[test]
fn verify_single_criterion() {
    let (code, out) = run(&["verify", "--criterion", "2", "--mode", "quick"]);
    assert_eq!(code, 0, "{out}");
    assert!(value(&out, "criterion.2").starts_with("PASS [2]"));
    assert_eq!(run(&["verify", "--criterion", "13"]).0, 64);
}

#[test]
fn timing_flag_adds_elapsed() {
    let (_, out) = run(&["genus", "--curve", "corpus:smooth-plane-5", "--timing"]);
    assert!(value(&out, "elapsed_ms").parse::<u64>().is_ok());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_wahl");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["genus", "--curve", "corpus:smooth-plane-7"]), Some(0));
    assert_eq!(
        status(&["extend", "--random-ribbon", "--curve", "corpus:smooth-plane-5"]),
        Some(1)
    );
    assert_eq!(status(&["nope"]), Some(64));
    let out = Command::new(bin).args(["corpus"]).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("command=corpus\n"));
}

#[test]
fn report_lookup_matches_rendering() {
    let mut r = Report::new("x");
    r.field("a", 1);
    assert_eq!(value(&r.to_string(), "a"), r.get("a").unwrap());
}
