use std::path::{Path, PathBuf};
use std::process::Command;

/// `(golden name, arguments, exit code)`; stdout must equal `golden/<name>.out`.
const CASES: &[(&str, &[&str], i32)] = &[
    ("ring_loop_sphere_3", &["ring", "loop_sphere", "3"], 0),
    ("ring_loop_sphere_4", &["ring", "loop_sphere", "4"], 0),
    ("ring_loop_sphere_5", &["ring", "loop_sphere", "5"], 0),
    ("ring_loop_sphere_6", &["ring", "loop_sphere", "6"], 0),
    ("ring_loop_sphere_7", &["ring", "loop_sphere", "7"], 0),
    ("ring_imm_prime_4", &["ring", "imm_prime", "4"], 0),
    ("ring_degree", &["ring", "loop_sphere", "3", "--degree", "-1"], 0),
    ("ring_degree_empty", &["ring", "loop_sphere", "3", "--degree", "-2"], 0),
    ("ring_table", &["ring", "unit_tangent", "4", "--table", "-7", "0"], 0),
    ("ring_too_small", &["ring", "loop_sphere", "1"], 2),
    ("mult_a_a", &["mult", "loop_sphere", "4", "a", "a"], 0),
    ("mult_unit", &["mult", "loop_sphere", "3", "1", "u"], 0),
    ("mult_u_u", &["mult", "loop_sphere", "3", "u", "u"], 0),
    ("mult_torsion", &["mult", "loop_sphere", "4", "b", "v"], 0),
    ("ss_even", &["ss", "unit_tangent", "omega_sphere", "4"], 0),
    ("ss_odd", &["ss", "sphere", "loop_sphere", "5"], 0),
    ("ss_imm_compare", &["ss", "imm", "4", "--compare", "-8", "4"], 0),
    ("ss_violating", &["ss", "--table", "tests/golden/inputs/violating.table"], 1),
    ("ss_collapsing", &["ss", "--table", "tests/golden/inputs/collapsing.table"], 0),
    ("ss_no_fibration", &["ss", "unit_tangent", "omega_sphere", "5"], 2),
    ("resolve_figure_eight", &["resolve", "tests/data/figure_eight_r3.curve"], 0),
    ("resolve_two", &["resolve", "tests/data/two_figure_eights_r3.curve", "--signs", "2,1"], 0),
    ("resolve_fixed", &["resolve", "tests/data/figure_eight_r5.curve", "--eps", "0.1", "--delta", "0.02"], 0),
    ("resolve_trivial", &["resolve", "tests/data/trivial_r3.curve"], 0),
    ("resolve_invalid", &["resolve", "tests/golden/inputs/tangent_decoration_r3.curve"], 2),
    ("budney_5", &["budney", "5", "10"], 0),
    ("budney_gauss", &["budney", "3", "2", "--gauss-check"], 0),
    ("budney_too_small", &["budney", "2", "10"], 2),
    ("check_compat", &["check", "compat", "--n", "5", "--k", "1", "--l", "1"], 0),
    ("check_morphism", &["check", "morphism", "--n", "4", "--window", "20"], 0),
    ("check_degrees", &["check", "degrees", "--n", "3"], 0),
    ("degrees_table", &["degrees", "--n", "3..6", "--k", "0..2"], 0),
];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn knotalg(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_knotalg"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn golden(name: &str) -> String {
    let path = root().join("tests/golden").join(format!("{name}.out"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn outputs_match_golden_files() {
    let mut failures = Vec::new();
    for (name, args, code) in CASES {
        let (got_code, stdout) = knotalg(args);
        if got_code != *code {
            failures.push(format!("{name}: exit {got_code}, expected {code}"));
        }
        if stdout != golden(name) {
            failures.push(format!("{name}: stdout differs:\n{stdout}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn outputs_are_deterministic() {
    for args in
        [&["budney", "5", "3"][..], &["ss", "imm", "4"], &["resolve", "tests/data/figure_eight_r3.curve"]]
    {
        assert_eq!(knotalg(args), knotalg(args));
    }
}

#[test]
fn resolve_writes_curve_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.curve");
    let out_s = out.to_str().unwrap();

    let (code, _) = knotalg(&["resolve", "tests/data/trivial_r3.curve", "--out", out_s]);
    assert_eq!(code, 0);
    let input = std::fs::read_to_string(root().join("tests/data/trivial_r3.curve")).unwrap();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), input);

    let (code, _) = knotalg(&["resolve", "tests/data/figure_eight_r3.curve", "--out", out_s]);
    assert_eq!(code, 0);
    let written = std::fs::read_to_string(&out).unwrap();
    assert!(written.starts_with("longcurve n=3 N=2048\n"));
    assert!(!written.contains("\ndp "));
    // The written curve is itself a valid input and already embedded.
    let (code, report) = knotalg(&["resolve", out_s]);
    assert_eq!((code, report.lines().next()), (0, Some("k: 0 → 0")));
}

#[test]
fn usage_errors() {
    for args in [
        &[][..],
        &["ring"],
        &["frobnicate"],
        &["ss"],
        &["resolve", "/no/such/file"],
        &["degrees", "--k", "a..b"],
    ] {
        assert_eq!(knotalg(args).0, 2, "{args:?}");
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_knotalg")).exists());
}
