use std::process::{Command, Output};

fn rauzy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rauzy")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn cardinalities_suite_passes() {
    let out = rauzy(&["verify", "--suite", "cardinalities", "--n", "4..10"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["suite"], "cardinalities");
    assert_eq!(report["summary"]["failed"], 0);
}

#[test]
fn verify_output_is_reproducible() {
    let args = ["verify", "--suite", "floor2", "--n", "4..4"];
    let a = rauzy(&args);
    let b = rauzy(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn diagram_exports() {
    let out = rauzy(&["diagram", "--family", "hyp", "--n", "4", "--out", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 14);

    let out = rauzy(&["diagram", "--family", "marked", "--n", "4", "--labeled"]);
    let d = json(&out);
    assert_eq!(d["vertices"].as_array().unwrap().len(), 33);
}

#[test]
fn loops_stream_ndjson() {
    let out = rauzy(&["loops", "--family", "marked", "--n", "4", "--max-len", "6", "--primitive-only"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.is_empty());
    for row in text.lines() {
        let v: serde_json::Value = serde_json::from_str(row).unwrap();
        assert_eq!(v["primitive"], true);
        assert!(v["moves"].as_str().unwrap().chars().all(|c| c == 't' || c == 'b'));
    }
}

#[test]
fn dilatation_of_a_short_loop() {
    let loops = rauzy(&["loops", "--family", "marked", "--n", "4", "--max-len", "6", "--primitive-only"]);
    let first: serde_json::Value = serde_json::from_str(String::from_utf8(loops.stdout).unwrap().lines().next().unwrap()).unwrap();
    let base = first["base"].to_string();
    let moves = first["moves"].as_str().unwrap();
    let out = rauzy(&["dilatation", "--family", "marked", "--n", "4", "--moves", moves, "--base", &base]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = json(&out);
    assert!(cert["dilatation"]["value"].as_f64().unwrap() >= 2.0);
    assert!(cert["residuals"]["margin"].as_f64().unwrap() > 0.0);
}

#[test]
fn families_report() {
    let out = rauzy(&["families", "--which", "A1", "--g-range", "2..20"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["summary"]["total"], 19);
    assert_eq!(report["summary"]["failed"], 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rauzy(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(rauzy(&["diagram", "--family", "hyp", "--n", "1"]).status.code(), Some(2));
    assert_eq!(rauzy(&["dilatation", "--family", "hyp", "--n", "4", "--moves", "tq"]).status.code(), Some(2));
    assert_eq!(rauzy(&["diagram", "--family", "hyp", "--n", "12", "--budget", "10"]).status.code(), Some(2));
    assert_eq!(rauzy(&["--help"]).status.code(), Some(0));
}

#[test]
fn non_primitive_loop_is_rejected() {
    // the top self-loop at the base of D(tau_4) fixes letters
    let out = rauzy(&["dilatation", "--family", "hyp", "--n", "4", "--labeled", "--moves", "t"]);
    assert_ne!(out.status.code(), Some(0));
}
