use std::process::Command;

use pretzel_kh::bigraded::BigradedSpace;
use pretzel_kh::cli::{render_grid, run};
use pretzel_kh::formula::kh_m_equals_l_odd;

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pretzel-kh"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn binary_exit_codes() {
    let (code, out, _) = bin(&[
        "formula", "-l", "3", "-m", "5", "-n", "7", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        BigradedSpace::from_json(out.trim_end())
            .unwrap()
            .total_dim(),
        16
    );
    let (code, _, err) = bin(&["formula", "-l", "1", "-m", "2", "-n", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("l must be ≥ 2"));
    assert_eq!(bin(&["compare", "--pretzel", "2,3,3"]).0, 0);
    assert_eq!(
        bin(&["oracle", "--pretzel", "2,3,3", "--max-crossings", "5"]).0,
        2
    );
    assert_eq!(bin(&["frobnicate"]).0, 2);
}

#[test]
fn pd_file_input_matches_pretzel_input() {
    let dir = std::env::temp_dir().join(format!("pretzel-kh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let d = pretzel_kh::formula::PretzelSpec::new(2, 3, 4)
        .diagram()
        .unwrap();
    let path = dir.join("p234.json");
    std::fs::write(&path, d.to_json()).unwrap();
    let p = path.to_str().unwrap();
    let a = run(["oracle", "--pd", p]);
    let b = run(["oracle", "--pretzel", "2,3,4"]);
    assert_eq!(a.0, 0, "{}", a.1);
    assert_eq!(a, b);
    assert_eq!(
        run(["jones", "--pd", p]),
        run(["jones", "--pretzel", "2,3,4"])
    );
    let (code, out) = run(["oracle", "--pd", p, "--stats"]);
    assert_eq!(code, 0);
    let stats: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(stats["crossings"], 9);
    assert_eq!(run(["oracle", "--pd", p, "--pretzel", "2,3,4"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["formula", "-l", "4", "-m", "6", "-n", "7"],
        vec!["oracle", "--pretzel", "3,4,5", "--format", "json"],
        vec!["verify", "--suite", "linking", "--max", "6"],
    ] {
        assert_eq!(run(args.clone()), run(args));
    }
}

#[test]
fn orientation_override() {
    // LL and LR are both admissible for (odd, even, even); they differ by the n_- shift
    let (c1, lr) = run(["formula", "-l", "3", "-m", "4", "-n", "8", "--orient", "LR"]);
    let (c2, ll) = run(["formula", "-l", "3", "-m", "4", "-n", "8", "--orient", "LL"]);
    assert_eq!((c1, c2), (0, 0));
    assert_ne!(lr, ll);
    assert_eq!(
        run(["compare", "--pretzel", "3,4,8", "--orient", "LL"]).0,
        0
    );
}

#[test]
fn grid_of_m_equals_l_family_matches_oracle_grid() {
    let g = render_grid(&kh_m_equals_l_odd(5, 2).unwrap());
    let (code, out) = run(["grid", "-l", "5", "-m", "5", "-n", "2", "--oracle"]);
    assert_eq!(code, 0);
    assert_eq!(g, out);
    // 11 t-columns from -7 to 3; rows from q = 7 down to q = -15
    let header = g.lines().next().unwrap();
    assert_eq!(
        header.split('|').nth(1).unwrap().split_whitespace().count(),
        11
    );
    assert_eq!(g.lines().count(), 1 + 12);
}

#[test]
fn every_suite_runs() {
    for s in pretzel_kh::verify::SUITES {
        let (code, out) = run(["verify", "--suite", s, "--max", "7"]);
        assert_eq!(code, 0, "{s}: {out}");
        assert!(out.lines().count() > 0, "{s} produced no records");
    }
}
