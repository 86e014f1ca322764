use std::fs;
use std::process::{Command, Output};

fn selfdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfdual")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(stdout(out).trim()).expect("json output")
}

#[test]
fn construct_c1() {
    let v = json(&selfdual(&["construct", "--p", "19", "--f", "2", "--u", "6,15,21", "--v", "1,93", "--s", "(1,2,3,4)"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["d"], 14);
    assert_eq!(v["i_2d"], 646285);
    assert_eq!(v["derived_params"]["beta"], "0");
}

#[test]
fn construct_c13_csv() {
    let out = selfdual(&[
        "construct", "--p", "19", "--f", "2", "--u", "26,6,5", "--v", "9,59", "--s", "(1,2,3,4)", "--output", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, "26,6,5,9,59,\"(1,2,3,4)\",78,14,3401,-38,0,547523");
}

#[test]
fn construct_usage_errors() {
    let out = selfdual(&["construct", "--p", "19", "--f", "2", "--u", "6,15,21", "--s", "I"]);
    assert_eq!(out.status.code(), Some(2));
    let out = selfdual(&["construct", "--p", "19", "--f", "2", "--u", "6,15", "--v", "1,93"]);
    assert_eq!(out.status.code(), Some(2));
    let out = selfdual(&["construct", "--p", "19", "--f", "2", "--u", "6,15,21", "--v", "1,94"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_then_analyze() {
    let dir = std::env::temp_dir().join(format!("selfdual-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c1.txt");
    let p = path.to_str().unwrap();
    let out = selfdual(&[
        "construct", "--p", "19", "--f", "2", "--u", "6,15,21", "--v", "1,93", "--s", "(1,2,3,4)", "--matrix-out", p,
        "--shadow-w-max", "0", "--no-intersections",
    ]);
    assert!(out.status.success());
    let v = json(&selfdual(&["analyze", p, "--extra-weights", "0"]));
    assert_eq!(v["d"], 14);
    assert_eq!(v["a_d"], 3705);
    assert_eq!(v["i_2d"], 646285);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn types_examples() {
    assert_eq!(stdout(&selfdual(&["types", "--n", "78", "--d", "14", "--p", "19"])).trim(), "19-(4;2)");
    assert!(stdout(&selfdual(&["types", "--n", "116", "--d", "18", "--p", "29"])).lines().any(|l| l == "29-(4;0)"));
    let out = selfdual(&["types", "--n", "10", "--d", "4", "--p", "11"]);
    assert!(out.status.success());
    assert!(stdout(&out).trim().is_empty());
}

#[test]
fn certify_examples() {
    let out = selfdual(&["certify", "--n", "76", "--class", "near-extremal-minimal"]);
    let text = stdout(&out);
    assert!(out.status.success());
    assert!(text.contains("verdict: eliminated"));
    assert!(text.contains("1050") && text.contains("2590"));

    let v = json(&selfdual(&["certify", "--n", "82", "--class", "extremal-near-minimal", "--output", "json"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verdict"], "eliminated");
    assert_eq!(v["b_value_closed_form"], "1105");
    assert_eq!(v["b_value_gleason"], "1505");

    let v = json(&selfdual(&["certify", "--n", "24", "--class", "extremal-minimal", "--output", "json"]));
    assert_eq!(v["verdict"], "not-eliminated");

    let out = selfdual(&["certify", "--n", "78", "--class", "near-extremal-minimal"]);
    assert_eq!(out.status.code(), Some(3));
    let out = selfdual(&["certify", "--n", "78", "--class", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gleason_family() {
    let out = selfdual(&["gleason", "--family", "78,1"]);
    let text = stdout(&out);
    assert!(text.contains("A14 = 3705 + 8*beta"));
    assert!(text.contains("A16 = 62244 + 512*alpha - 24*beta"));

    let out = selfdual(&["gleason", "--family", "100,1", "--shadow-weight", "10"]);
    assert!(stdout(&out).contains("0 ≤ alpha ≤ min{100, -1/20*beta}"));

    let v = json(&selfdual(&["gleason", "--n", "76", "--d", "14", "--pin", "B2=0", "--pin", "B6=0", "--pin", "B10=alpha", "--output", "json"]));
    assert_eq!(v["family"]["a"]["14"], "4750 - 16*alpha");

    let out = selfdual(&["gleason", "--family", "82", "--shadow-weight", "11"]);
    assert_eq!(out.status.code(), Some(3));
    let out = selfdual(&["gleason", "--n", "78"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_plan() {
    let dir = std::env::temp_dir().join(format!("selfdual-search-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let plan = dir.join("plan.txt");
    fs::write(&plan, "p = 19\nf = 2\ntarget_d = 14\nv_pairs = 1:93\nu1 = 6\nu2 = 12..15\n").unwrap();
    let plan = plan.to_str().unwrap();

    let out = selfdual(&["search", "--plan", plan, "--threads", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("(complete)"), "{text}");
    assert!(text.contains("I=646285") && text.contains("I=643910"), "{text}");

    let out = selfdual(&["search", "--plan", plan, "--output", "csv"]);
    let csv = stdout(&out);
    assert!(csv.starts_with("u1,u2,u3,v1,v2,s,n,d,A_d,beta,alpha,I_2d,needs_review"));
    assert_eq!(csv.lines().count(), 3);

    let out = selfdual(&["search", "--plan", "/nonexistent/plan.txt"]);
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(&dir).unwrap();
}
