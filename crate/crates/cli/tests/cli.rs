use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn repr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repr"))
        .args(args)
        .output()
        .expect("repr runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    dir.join(format!("{name}.prog")).display().to_string()
}

fn small_config(dir: &Path, extra: &str) -> PathBuf {
    let path = dir.join("exp.cfg");
    let text = format!(
        "max_len = 8\nbudget = 1000\nn_max = 10\noutput_dir = {}\n{extra}",
        dir.join("out").display()
    );
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn numeral_examples() {
    assert_eq!(
        stdout(&repr(&[
            "numeral", "encode", "--system", "k-adic", "--k", "2", "5"
        ])),
        "21\n"
    );
    assert_eq!(stdout(&repr(&["numeral", "foursquares", "7"])), "2 1 1 1\n");
    assert_eq!(
        stdout(&repr(&[
            "numeral",
            "decode",
            "--system",
            "avizienis",
            "--k",
            "10",
            "2,-1"
        ])),
        "19\n"
    );
    assert_eq!(
        stdout(&repr(&[
            "numeral",
            "encode",
            "--system",
            "avizienis",
            "--k",
            "10",
            "-19"
        ])),
        "-2,1\n"
    );
}

#[test]
fn domain_errors_exit_2() {
    assert_eq!(repr(&["numeral", "primesum", "1"]).status.code(), Some(2));
    assert_eq!(
        repr(&["numeral", "encode", "--system", "k-ary", "--k", "1", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        repr(&["numeral", "decode", "--system", "k-ary", "--k", "2", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        repr(&["compile", "--combinator", "NOPE", &fixture("emit3")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(repr(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn stream_run_reports_emissions() {
    let out = repr(&[
        "run",
        "--mode",
        "stream",
        "--budget",
        "100",
        &fixture("emit3"),
    ]);
    assert_eq!(stdout(&out), "Emitting 3 (stable)\n");
}

#[test]
fn compiled_stream_has_three_defined_points() {
    let dir = tempfile::tempdir().unwrap();
    let compiled = stdout(&repr(&[
        "compile",
        "--combinator",
        "STREAM2CARD",
        &fixture("emit3"),
    ]));
    let prog = dir.path().join("card.prog");
    fs::write(&prog, &compiled).unwrap();
    let prog = prog.display().to_string();
    let defined = (0..10)
        .filter(|t| {
            let out = stdout(&repr(&[
                "run",
                "--mode",
                "func",
                "--input",
                &t.to_string(),
                &prog,
            ]));
            !out.contains("undefined")
        })
        .count();
    assert_eq!(defined, 3);
}

#[test]
fn oracle_runs_scripted_and_registry() {
    let p = fixture("oq3_sum");
    assert_eq!(
        stdout(&repr(&["run", "--mode", "oracle", &p])),
        "Halted with 6 after 16 steps\n"
    );
    let out = stdout(&repr(&[
        "run",
        "--mode",
        "oracle",
        "--answers",
        "1,1,1",
        &p,
    ]));
    assert!(out.starts_with("Halted with 8"), "{out}");
}

#[test]
fn asm_produces_raw_words() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("p.asm");
    fs::write(&src, "LOADC r1, #5\nOUTPUT r1\n").unwrap();
    let word = stdout(&repr(&["asm", &src.display().to_string()]));
    assert_eq!(
        word.trim(),
        fs::read_to_string(fixture("output5")).unwrap().trim()
    );
}

#[test]
fn estimate_is_byte_identical_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "notions = K,Kinf,CardN\n");
    let cfg = cfg.display().to_string();
    let first = stdout(&repr(&["estimate", "--config", &cfg]));
    let second = stdout(&repr(&["estimate", "--config", &cfg]));
    assert_eq!(first, second);
    assert_eq!(
        fs::read_to_string(dir.path().join("out/estimate.csv")).unwrap(),
        first
    );

    let par = tempfile::tempdir().unwrap();
    let cfg4 = small_config(par.path(), "notions = K,Kinf,CardN\nworkers = 4\n");
    assert_eq!(
        stdout(&repr(&[
            "estimate",
            "--config",
            &cfg4.display().to_string()
        ])),
        first
    );

    let mut lines = first.lines();
    assert_eq!(
        lines.next(),
        Some("notion,n,ub_length,witness_bits,budget,status")
    );
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 6, "{line}");
        assert_eq!(cols[2].parse::<usize>().unwrap(), cols[3].len());
        let prog = dir.path().join("w.prog");
        fs::write(&prog, cols[3]).unwrap();
        let prog = prog.display().to_string();
        let out = match cols[0] {
            "K" => stdout(&repr(&[
                "run", "--mode", "halt", "--budget", cols[4], &prog,
            ])),
            "Kinf" => stdout(&repr(&[
                "run", "--mode", "stream", "--budget", cols[4], &prog,
            ])),
            _ => stdout(&repr(&[
                "run", "--mode", "func", "--budget", cols[4], &prog,
            ])),
        };
        let want = match cols[0] {
            "K" => format!("Halted with {} ", cols[1]),
            "Kinf" => format!("Emitting {} ", cols[1]),
            _ => format!("({} points", cols[1]),
        };
        assert!(out.contains(&want), "{line}: {out}");
    }
}

#[test]
fn hierarchy_writes_ledger_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "");
    let report = stdout(&repr(&[
        "hierarchy",
        "--config",
        &cfg.display().to_string(),
    ]));
    assert!(report.contains("NOT certified"));
    assert!(report.contains("not desk-verifiable"));
    assert!(report.contains("Kinf =ct CardN"));
    let ledger = fs::read_to_string(dir.path().join("out/ledger.csv")).unwrap();
    assert_eq!(ledger.lines().count(), 10);
    assert!(ledger.starts_with("notionA,notionB,header_bits,c,range,verified\n"));
    assert_eq!(
        fs::read_to_string(dir.path().join("out/report.txt")).unwrap(),
        report
    );
}

#[test]
fn missing_fixtures_exit_3_and_bad_config_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "fixtures = /definitely/not/here\n");
    assert_eq!(
        repr(&["estimate", "--config", &cfg.display().to_string()])
            .status
            .code(),
        Some(3)
    );
    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(
        repr(&["hierarchy", "--config", &bad.display().to_string()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn fixtures_env_var_overrides_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_repr"))
        .args(["run", "--mode", "oracle", &fixture("oq1_no")])
        .env("REPRK_FIXTURES", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn written_fixtures_match_shipped() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&repr(&[
        "fixtures",
        "--write",
        &dir.path().display().to_string(),
    ]));
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let mut names: Vec<_> = fs::read_dir(&shipped)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let mut written: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    written.sort();
    assert_eq!(names, written);
    for name in names {
        assert_eq!(
            fs::read(shipped.join(&name)).unwrap(),
            fs::read(dir.path().join(&name)).unwrap(),
            "{name:?}"
        );
    }
}
