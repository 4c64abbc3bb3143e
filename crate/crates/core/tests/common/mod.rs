//! CLI invocations with stored outputs under `tests/golden/`.

#![allow(dead_code)]

use std::path::PathBuf;

use solenoid_rep::cli::run_with_level_cap;

/// `(golden file stem, command line, expected exit code)`.
pub const GOLDEN_CASES: &[(&str, &[&str], i32)] = &[
    ("orbit_sol_1_7", &["orbit", "-A", "[[2]]", "-x", "sol:1/7"], 0),
    ("orbit_sol_0", &["orbit", "-A", "[[2]]", "-x", "sol:0"], 0),
    ("orbit_real_1_3", &["orbit", "-A", "[[2]]", "-x", "real:1/3"], 0),
    ("rep_finite_dilation", &["rep", "-A", "[[2]]", "-x", "sol:1/7", "-g", "1,0", "--mode", "finite"], 0),
    ("rep_finite_translation", &["rep", "-A", "[[2]]", "-x", "sol:1/7", "-g", "0,1", "--mode", "finite"], 0),
    ("rep_cyclic_two_copies", &["rep", "-A", "[[2]]", "-x", "sol:1/7", "--mode", "cyclic", "-N", "2", "-g", "1,0"], 0),
    ("commutant_expect_dim", &["commutant", "-A", "[[2]]", "-x", "sol:1/7", "--expect-dim", "1"], 0),
    ("frobenius_same_orbit", &["frobenius", "-A", "[[2]]", "-x1", "sol:1/7", "-x2", "sol:2/7"], 0),
    ("vanishing_m12", &["vanishing", "-A", "[[2]]", "-x", "sol:1/7", "-M", "12", "--expect-dim", "0"], 0),
    ("bratteli_dyadic_dot", &["bratteli", "-A", "[[2]]", "-n", "3", "--format", "dot"], 0),
    ("bratteli_triadic_json", &["bratteli", "-A", "[[3]]", "-n", "1"], 0),
    ("bratteli_unimodular", &["bratteli", "-A", "[[1]]", "-n", "2"], 2),
    ("ergodic_cat_map", &["ergodic", "-A", "[[2,1],[1,1]]"], 0),
    ("ergodic_shear", &["ergodic", "-A", "[[1,1],[0,1]]"], 0),
    ("waveletset_shannon", &["waveletset", "-E", "-1,-1/2;1/2,1", "-a", "2"], 0),
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Exit code, stdout and stderr of one invocation in a stable text form.
pub fn render(args: &[&str]) -> (i32, String) {
    let argv = std::iter::once("solenoid-rep").chain(args.iter().copied());
    let (code, out, err) = run_with_level_cap(argv, None);
    let text = format!(
        "$ solenoid-rep {}\nexit: {code}\n--- stdout\n{out}--- stderr\n{err}",
        args.join(" ")
    );
    (code, text)
}

/// Names of cases whose output differs from the stored file. With
/// `BLESS=1` the stored files are rewritten instead.
pub fn golden_mismatches() -> Vec<String> {
    let bless = std::env::var_os("BLESS").is_some();
    let mut bad = Vec::new();
    for (name, args, want_code) in GOLDEN_CASES {
        let (code, text) = render(args);
        let path = golden_path(name);
        if bless {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let stored = std::fs::read_to_string(&path).unwrap_or_default();
        if code != *want_code || stored != text {
            bad.push(name.to_string());
        }
    }
    bad
}
