use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infobroker"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn process_exit_codes() {
    assert_eq!(run(&["examples", "--verify"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--scenario", "triangular", "--menu", "canonical"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_location() {
    let dir = std::env::temp_dir().join(format!("infobroker-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.scn");
    std::fs::write(
        &path,
        "problem\n  states: w1 w2\n  actions: a1 a2\n  prior: 1/2 1/2\n  payoff a1: 1 0\n  payoff a2: 0 1\nsignal half\n  message a: w1 [0,1/2); w2 [0,1)\n",
    )
    .unwrap();
    let out = run(&["eval", "--scenario", path.to_str().unwrap(), "--signal", "half"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 7") && err.contains("state w1 not fully covered"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scenario_files_on_disk_are_read() {
    let dir = std::env::temp_dir().join(format!("infobroker-disk-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.scn");
    std::fs::write(&path, infobroker::builtin::MONOPOLIST).unwrap();
    let out = run(&["eval", "--scenario", path.to_str().unwrap(), "--signal", "residential"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("367/5 (73.4)"));
    std::fs::remove_dir_all(&dir).unwrap();
}
