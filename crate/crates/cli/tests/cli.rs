use std::process::{Command, Output};

fn szlenk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szlenk"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = szlenk(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

#[test]
fn szlenk_of_omega_omega() {
    assert_eq!(ok(&["szlenk", "w^(w)"]), "CB=w+1, Sz(C(K))=w^(2)\n");
    assert_eq!(ok(&["szlenk", "w"]), "CB=2, Sz(C(K))=w\n");
}

#[test]
fn cb_of_omega() {
    assert_eq!(ok(&["cb", "w"]), "2\n");
    assert_eq!(ok(&["cb", "w^(w^(3))"]), "w^(3)+1\n");
}

#[test]
fn ordinal_commands() {
    assert_eq!(ok(&["ord", "eval", "w^(1) * 2 + w^(0)*3"]), "w*2+3\n");
    assert_eq!(ok(&["ord", "add", "w*3+2", "w^(2)+w"]), "w^(2)+w\n");
    assert_eq!(ok(&["ord", "mul", "w^(2)+w", "2"]), "w^(2)*2+w\n");
    assert_eq!(ok(&["ord", "sub", "w", "w*2"]), "w\n");
    assert_eq!(ok(&["ord", "cmp", "w^(w)", "w^(5)*9"]), "w^(w) > w^(5)*9\n");
    assert_eq!(ok(&["derive", "w^(2)*2+3", "--times", "2"]), "(0,w^(2)*2] mod w^(2)\n");
}

#[test]
fn exit_codes() {
    let bad = szlenk(&["cb", "w^2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("position 2"));
    assert_eq!(szlenk(&["ord", "sub", "w*2", "w"]).status.code(), Some(1));
    assert_eq!(szlenk(&["grasberg", "params", "--space", "5"]).status.code(), Some(1));
    assert_eq!(szlenk(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn king_check_is_deterministic() {
    let args = ["check", "king", "--space", "w^(2)", "--trials", "1000", "--seed", "1"];
    let first = ok(&args);
    assert_eq!(first, "1000/1000 pass\n");
    assert_eq!(ok(&args), first);
    assert_eq!(ok(&["check", "queen", "--space", "w^(w)", "--trials", "300", "--seed", "4"]), "300/300 pass\n");
}

#[test]
fn json_output_round_trips() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["--json", "szlenk", "w^(w)"])).unwrap();
    let cb: szlenk::Ordinal = serde_json::from_value(v["cb"].clone()).unwrap();
    assert_eq!(cb.to_string(), "w+1");
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["--json", "extract", "--space", "w^(2)*2", "--delta", "1/2"])).unwrap();
    assert_eq!(v["n"], 33);
    assert_eq!(v["eps"], "1/66");
    let summary: szlenk::szlenk::CertificateSummary = serde_json::from_value(v).unwrap();
    assert_eq!(summary.final_norm, "1/33");
}

#[test]
fn grasberg_commands() {
    let w = serde_json::to_value("w".parse::<szlenk::Ordinal>().unwrap()).unwrap();
    let three = serde_json::to_value("3".parse::<szlenk::Ordinal>().unwrap()).unwrap();
    let f = serde_json::json!({
        "ambient": w,
        "pieces": [{"upTo": three, "value": "1/4"}, {"upTo": w, "value": "-3/4"}],
    })
    .to_string();
    assert_eq!(ok(&["grasberg", "params", "--space", "w"]), "o=0, b=1, CB=2\n");
    assert_eq!(ok(&["grasberg", "norm", "--space", "w", "--fn", &f]), "|f|=3/2, sup=3/4\n");
    assert_eq!(ok(&["grasberg", "phi", "--space", "w", "--fn", &f, "--eps", "1/2"]), "(0,w] mod w^(1) (CB=1)\n");
}

#[test]
fn tree_commands() {
    let dir = std::env::temp_dir().join(format!("szlenk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tree.txt");
    std::fs::write(&path, "# a root chain with a branch\na -\nb a\nc b\nd a\n").unwrap();
    let path = path.to_str().unwrap();
    assert_eq!(ok(&["tree", "rank", "--file", path]), "3\n");
    let facts = ok(&["tree", "facts", "--file", path]);
    assert!(facts.ends_with("rank 3: pass\n"), "{facts}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn family_file_reports_contract_violation() {
    let w = serde_json::to_value("w".parse::<szlenk::Ordinal>().unwrap()).unwrap();
    let one = serde_json::json!({ "ambient": w, "pieces": [{ "upTo": w, "value": "1" }] });
    let family = serde_json::json!({ "cutoff": 20, "functions": vec![one; 20] }).to_string();
    let out = szlenk(&["extract", "--space", "w", "--family", &family, "--delta", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weakly null contract violated"));
    let zero = serde_json::json!({ "cutoff": 1, "functions": [] }).to_string();
    assert!(ok(&["extract", "--space", "w", "--family", &zero, "--delta", "1/2"]).contains("|f|=0"));
}
