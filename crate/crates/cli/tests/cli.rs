use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn omlkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omlkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = omlkit(args);
    assert!(
        out.status.success(),
        "{args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

const GO3: &str = "(a->b)^(b->c)^(c->a) = (c->b)^(b->a)^(a->c)";

#[test]
fn documented_verdict_lines() {
    assert_eq!(stdout(&["ngo", &path("peterson.gre")]), "L1: fails n=4\n");
    assert_eq!(
        stdout(&["states", &path("peterson.gre")]),
        "L1: refutes pair=(a1,a7')\n"
    );
    assert_eq!(
        stdout(&["check", "--eq", GO3, &path("boolean.gre")]),
        "L1: holds (assignments=512)\n"
    );
}

#[test]
fn batch_keeps_input_order_and_reports_rejections() {
    let out = stdout(&["ngo", &path("mixed.gre")]);
    assert_eq!(
        out,
        "L2: passes (converged k=3)\n\
         L3: fails n=4\n\
         L4: rejected (pasting is not a lattice: a1 and a3 have no least upper bound)\n\
         L5: passes (converged k=4)\n"
    );
    assert_eq!(stdout(&["--jobs", "1", "ngo", &path("mixed.gre")]), out);
    let states = stdout(&["states", &path("mixed.gre")]);
    assert!(
        states.starts_with("L2: admits\nL3: refutes pair=(a1,a7')\n"),
        "{states}"
    );
}

#[test]
fn lp_dump_listing() {
    let out = stdout(&["lp-dump", "--pair", "a1,a7'", &path("peterson.gre")]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("L1: lp pair=(a1,a7')"));
    let listing: Vec<&str> = lines.collect();
    assert_eq!(listing.len(), 13);
    assert_eq!(listing[0], "min: m7';");
    assert_eq!(listing[2], "m7 + m7' = 1;");
    assert_eq!(listing[12], "mD + mE + mF = 1;");
    assert_eq!(
        stdout(&["lp-dump", "--pair", "1,7'", &path("peterson.gre")]),
        out
    );
    let skipped = stdout(&["lp-dump", "--pair", "a1,a2'", &path("peterson.gre")]);
    assert!(skipped.starts_with("L1: skipped"), "{skipped}");
}

#[test]
fn mge_block() {
    let out = stdout(&["mge", &path("peterson.gre")]);
    let expected = "L1: mge pair=(a1,a7')
  weakened: 123 567 789 BC1 4FA DEF
  kept: 345 9AB 2E8 6DC
  condensed: 45+9A+E8+6D=56+89+4A+DE
  renamed: ab+cd+ef+gh=bg+fc+ad+he
";
    assert!(out.starts_with(expected), "{out}");
    assert!(out.contains("\n  witness: a=a4 b=a5 "));
    let admits = stdout(&["mge", &path("boolean.gre")]);
    assert_eq!(
        admits,
        "L1: skipped (lattice admits a strong set of states)\n"
    );
    for seed in ["1", "2", "3"] {
        let shuffled = stdout(&["mge", "--seed-order", seed, &path("peterson.gre")]);
        assert!(shuffled.starts_with("L1: mge pair=(a1,a7')"));
    }
}

#[test]
fn json_lines_carry_the_text_fields() {
    for args in [
        vec!["ngo"],
        vec!["states"],
        vec!["parse"],
        vec!["check", "--eq", GO3],
        vec!["mge"],
    ] {
        let file = path("mixed.gre");
        let mut text_args = args.clone();
        text_args.push(&file);
        let text = stdout(&text_args);
        let mut json_args = vec!["--json"];
        json_args.extend(&text_args);
        let json = stdout(&json_args);
        let records: Vec<serde_json::Value> = json
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        let mut blocks: Vec<String> = Vec::new();
        for line in text.lines() {
            match blocks.last_mut() {
                Some(b) if !line.starts_with('L') => {
                    b.push('\n');
                    b.push_str(line);
                }
                _ => blocks.push(line.to_string()),
            }
        }
        assert_eq!(records.len(), blocks.len(), "{args:?}");
        for (record, block) in records.iter().zip(blocks) {
            let obj = record.as_object().unwrap();
            let key = obj["lattice"].as_str().unwrap();
            assert!(block.starts_with(&format!("{key}: ")), "{block}");
            for (name, value) in obj {
                let rendered = match value {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Array(items) => items
                        .iter()
                        .map(|i| i.as_str().unwrap().to_string())
                        .collect::<Vec<_>>()
                        .join(" "),
                    other => other.to_string(),
                };
                assert!(
                    block.contains(&rendered),
                    "{name}={rendered} missing from {block}"
                );
            }
        }
    }
}

#[test]
fn input_errors_exit_1() {
    let out = omlkit(&["parse", &path("malformed.gre")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(
        stdout(&["parse", "--lenient", &path("malformed.gre")]),
        "L1: ok atoms=3 blocks=1 elements=8\nL3: ok atoms=5 blocks=2 elements=12\n"
    );
    assert_eq!(
        omlkit(&["check", &path("boolean.gre")]).status.code(),
        Some(1)
    );
    assert_eq!(
        omlkit(&["check", "--eq", "a ^", &path("boolean.gre")])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        omlkit(&["ngo", "--all-pairs", &path("boolean.gre")])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        omlkit(&["ngo", &path("missing.gre")]).status.code(),
        Some(1)
    );
    assert_eq!(omlkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn equation_from_file_and_var_cap() {
    let out = stdout(&["check", "--eq-file", &path("go3.eq"), &path("peterson.gre")]);
    assert_eq!(out, "L1: holds (assignments=32768)\n");
    let capped = omlkit(&["check", "--eq", GO3, "--var-cap", "2", &path("boolean.gre")]);
    assert_eq!(capped.status.code(), Some(1));
    let fails = stdout(&["check", "--eq", "a = b", &path("boolean.gre")]);
    assert_eq!(fails, "L1: fails (assignments=2)\n  witness: a=0 b=I\n");
}

#[test]
fn cutoff_and_no_verify() {
    assert_eq!(
        stdout(&["ngo", "--cutoff", "3", &path("peterson.gre")]),
        "L1: inconclusive (cutoff=3)\n"
    );
    assert_eq!(
        stdout(&["parse", "--no-verify", &path("peterson.gre")]),
        "L1: ok atoms=15 blocks=10 elements=32\n"
    );
}
