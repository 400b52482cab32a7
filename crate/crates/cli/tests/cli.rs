use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str, contents: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn stackplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stackplan"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn convert_then_accept() {
    let o = stackplan(&["convert", "--grammar", &fixture("anbn.cfg")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let pda = scratch("anbn-converted.pda", &stdout(&o));
    let o = stackplan(&["accept", "--automaton", &pda, "a a b b"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "accept\n"));

    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("openagi-converted.pda");
    let o = stackplan(&[
        "convert",
        "--grammar",
        &fixture("openagi.cfg"),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let o = stackplan(&[
        "accept",
        "--automaton",
        out.to_str().unwrap(),
        "e_1",
        "a_1",
        "i",
        "b_1",
        "i",
    ]);
    assert_eq!(stdout(&o), "accept\n");
}

#[test]
fn convert_errors() {
    let o = stackplan(&["convert", "--grammar", "no/such/file.cfg"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("no/such/file.cfg"));
    let bad = scratch("bad.cfg", "start S\nS -> a |\n-> b\n");
    let o = stackplan(&["convert", "--grammar", &bad]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn accept_codes() {
    let anbn = fixture("anbn.pda");
    let o = stackplan(&["accept", "--automaton", &anbn, "a a b b b"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "reject\n"));
    let o = stackplan(&["accept", "--automaton", &anbn]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "accept\n"));
    let o = stackplan(&["accept", "--automaton", &anbn, "a x b"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains('x'));
    let o = stackplan(&["accept", "--grammar", &fixture("anbn.cfg"), "a b"]);
    assert_eq!(code(&o), 0);
    let o = stackplan(&["accept", "--grammar", &fixture("anbn.cfg"), "--automaton", &anbn, "a b"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn enumerate_anbn() {
    let o = stackplan(&["enumerate", "--grammar", &fixture("anbn.cfg"), "--max-steps", "3"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "\na b\na a b b\n"));
    let o = stackplan(&["enumerate", "--grammar", &fixture("anbn.cfg"), "--max-len", "5"]);
    assert_eq!(stdout(&o), "\na b\na a b b\n");
    let o = stackplan(&["enumerate", "--grammar", &fixture("anbn.cfg"), "--max-steps", "5"]);
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn enumerate_openagi_count() {
    let o = stackplan(&[
        "enumerate",
        "--grammar",
        &fixture("openagi.cfg"),
        "--tools",
        &fixture("openagi.tools.toml"),
        "--max-steps",
        "40",
        "--count",
    ]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "4007600937\n"));
}

#[test]
fn enumerate_with_zero_budgets_is_empty() {
    let registry = std::fs::read_to_string(fixture("openagi.tools.toml"))
        .unwrap()
        .replace("terminal = \"", "budget = 0\nterminal = \"")
        .replace("budget = 0\nterminal = \"i\"", "terminal = \"i\"")
        .replace("budget = 0\nterminal = \"t\"", "terminal = \"t\"");
    let tools = scratch("openagi-zero.tools.toml", &registry);
    let o = stackplan(&["enumerate", "--grammar", &fixture("openagi.cfg"), "--tools", &tools]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, ""));
    let o = stackplan(&["plan", "--grammar", &fixture("openagi.cfg"), "--tools", &tools]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no valid plan"), "{}", stderr(&o));
}

fn plan_openagi(extra: &[&str]) -> Output {
    let g = fixture("openagi.cfg");
    let t = fixture("openagi.tools.toml");
    let mut args = vec!["plan", "--grammar", &g, "--tools", &t];
    args.extend_from_slice(extra);
    stackplan(&args)
}

/// The colorize, classify, answer plan.
fn vqa_plan(extra: &[&str]) -> Output {
    let mut args = vec!["--oracle", "scripted", "--script", "9,1,5,1,5"];
    args.extend_from_slice(extra);
    plan_openagi(&args)
}

#[test]
fn plan_vqa_steps() {
    let o = vqa_plan(&["--style", "steps"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "Step 1: Use Colorization on Input Image.\n\
         Step 2: Use Image Classification on Input Image.\n\
         Step 3: Use Visual Question Answering on the output of Step 1 and the output of Step 2.\n"
    );
    assert_eq!(stdout(&vqa_plan(&["--style", "functional"])), "e_1(a_1(i), b_1(i))\n");
    assert_eq!(stdout(&vqa_plan(&[])), "e_1 a_1 i b_1 i\n");
}

#[test]
fn plan_from_run_file() {
    let file = scratch(
        "vqa.run",
        &format!(
            "# colorize, classify, answer\ngrammar = {}\ntools = {}\nscript = 9 1 5 1 5\nstyle = functional\n",
            fixture("openagi.cfg"),
            fixture("openagi.tools.toml")
        ),
    );
    let o = stackplan(&["plan", "--config", &file]);
    assert_eq!(
        (code(&o), stdout(&o).as_str()),
        (0, "e_1(a_1(i), b_1(i))\n"),
        "{}",
        stderr(&o)
    );
    let o = stackplan(&["plan", "--config", &file, "--style", "prefix"]);
    assert_eq!(stdout(&o), "e_1 a_1 i b_1 i\n");
    let bad = scratch("bad.run", "colour = red\n");
    assert_eq!(code(&stackplan(&["plan", "--config", &bad])), 2);
}

#[test]
fn plan_exit_codes() {
    // script runs dry with no fallback
    let o = plan_openagi(&["--script", "9"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let o = plan_openagi(&["--script", "9", "--fallback", "--stats"]);
    // after e_1 every decision takes the first remaining option
    assert_eq!(
        (code(&o), stdout(&o).as_str()),
        (0, "e_1 a_1 a_2 a_3 a_4 c_1 b_1 i b_2 i\n")
    );
    assert!(stderr(&o).contains("oracle calls: 8"), "{}", stderr(&o));
    assert_eq!(code(&vqa_plan(&["--style", "haiku"])), 2);
    assert_eq!(code(&plan_openagi(&["--oracle", "psychic"])), 2);
    assert_eq!(code(&vqa_plan(&["--step-cap", "0"])), 2);
    let o = stackplan(&["plan", "--tools", &fixture("openagi.tools.toml")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("--grammar"));
}

#[test]
fn unreachable_endpoint_is_an_oracle_failure() {
    let port = std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let url = format!("http://127.0.0.1:{port}/v1/chat/completions");
    let o = plan_openagi(&["--oracle", "http", "--endpoint", &url, "--model", "m", "--timeout", "5"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let o = plan_openagi(&["--oracle", "http", "--endpoint", &url]);
    assert_eq!(code(&o), 2, "missing model is a usage error");
}

#[test]
fn interactive_oracle_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_stackplan"))
        .args([
            "plan",
            "--grammar",
            &fixture("openagi.cfg"),
            "--tools",
            &fixture("openagi.tools.toml"),
        ])
        .args([
            "--oracle",
            "interactive",
            "--style",
            "functional",
            "--task",
            "\"Answer a question about a grayscale image.\"",
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"9\nzero\n1\n5\n1\n5\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(
        (code(&o), stdout(&o).as_str()),
        (0, "e_1(a_1(i), b_1(i))\n"),
        "{}",
        stderr(&o)
    );
    assert!(stderr(&o).contains("To get the final text, we have the following choices:"));
}

#[test]
fn daily_schedule() {
    let o = stackplan(&[
        "plan",
        "--automaton",
        &fixture("daily.pda"),
        "--tools",
        &fixture("daily.tools.toml"),
        "--style",
        "steps",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("10:00 - "), "{text}");
    assert!(lines.last().unwrap().contains(" - 20:00 "), "{text}");
    for pair in lines.windows(2) {
        let end = pair[0].split(" - ").nth(1).unwrap().split(' ').next().unwrap();
        assert!(pair[1].starts_with(end), "{text}");
    }
    let meals = lines
        .iter()
        .filter(|l| l.contains("Eating") || l.contains("Having"))
        .count();
    assert_eq!(meals, 3, "{text}");
}

#[test]
fn risk_decision_path() {
    let o = stackplan(&[
        "plan",
        "--automaton",
        &fixture("risk.pda"),
        "--tools",
        &fixture("risk.tools.toml"),
        "--script",
        "1,2,2,1",
        "--style",
        "steps",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("Step 1: Confirm that the seller is entitled to sell the company.\n"));
    assert!(text.contains("Step 4: Submit the mandatory antitrust filings"));
}

#[test]
fn validate_codes() {
    let g = fixture("openagi.cfg");
    let t = fixture("openagi.tools.toml");
    let o = stackplan(&["validate", "--grammar", &g, "--tools", &t, "e_1 a_1 i b_1 i"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "valid\n"));
    let o = stackplan(&["validate", "--grammar", &g, "--tools", &t, "b_1 a_1 a_1 i"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "invalid\n"));
    let o = stackplan(&["validate", "--grammar", &g, "b_1 a_1 a_1 i"]);
    assert_eq!(code(&o), 0, "no registry means no budgets");
    let o = stackplan(&["validate", "--grammar", &g, "--tools", "missing.toml", "i"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn random_plans_are_reproducible() {
    let g = fixture("openagi.cfg");
    let t = fixture("openagi.tools.toml");
    let run = |seed: &str| {
        stdout(&stackplan(&[
            "plan",
            "--grammar",
            &g,
            "--tools",
            &t,
            "--oracle",
            "random",
            "--seed",
            seed,
        ]))
    };
    assert_eq!(run("7"), run("7"));
    let distinct: std::collections::BTreeSet<String> = (0..8).map(|s| run(&s.to_string())).collect();
    assert!(distinct.len() > 1);
}

#[test]
fn help_and_version() {
    let o = stackplan(&["--help"]);
    assert_eq!(code(&o), 0);
    for sub in ["convert", "accept", "enumerate", "plan", "validate"] {
        assert!(stdout(&o).contains(sub));
    }
    assert_eq!(code(&stackplan(&["frobnicate"])), 2);
}
