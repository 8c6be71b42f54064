use std::process::{Command, Output};

fn cft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cft"))
        .args(args)
        .env_remove("CFT_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = cft(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn pure_value() {
    let v = json(&["pure"]);
    let f = v["value"].as_f64().unwrap();
    assert!((f - 0.81517).abs() < 1e-5, "{v}");
}

#[test]
fn exit_codes() {
    assert_eq!(cft(&["bounds", "--mu", "1.5"]).status.code(), Some(2));
    assert_eq!(cft(&["verdict", "--experiment", "nope"]).status.code(), Some(2));
    assert_eq!(cft(&["dist", "--kind", "thermal-lower", "--mu", "1/3", "--n-cut", "3"]).status.code(), Some(2));
    assert_eq!(cft(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(cft(&["--precision", "40", "pure"]).status.code(), Some(2));
    assert_eq!(cft(&["--help"]).status.code(), Some(0));
    assert_eq!(cft(&["quantum", "eval", "--r", "0", "--s", "0"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    let args = ["bounds", "--mu-range", "1/9:1:4"];
    let (a, b) = (cft(&args), cft(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mu,f_up,f_lo,n_cut,err"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn bounds_json_keys() {
    let v = json(&["bounds", "--mu", "1/2"]);
    let text = v.to_string();
    for key in ["mu", "f_up", "f_lo", "n_cut", "err"] {
        assert!(text.contains(&format!("\"{key}\"")), "{key} missing from {text}");
    }
}

#[test]
fn config_file_is_read() {
    let path = std::env::temp_dir().join(format!("cft-config-{}.toml", std::process::id()));
    std::fs::write(&path, "delta_max = 1.0\nn_points = 200\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cft"))
        .args(["dist", "--kind", "opt-vacuum"])
        .env("CFT_CONFIG", &path)
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    // a one-unit window cannot hold the density
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn quantum_subcommands() {
    let v = json(&["quantum", "eval", "--r", "0", "--s", "0"]);
    assert!((v["fidelity"].as_f64().unwrap() - 0.5).abs() < 1e-12, "{v}");
    let o = cft(&["quantum", "critical", "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("none"));
    let v = json(&["quantum", "min-resource"]);
    let text = v.to_string();
    assert!(text.contains("0.74198") && text.contains("6.44"), "{text}");
}

#[test]
fn parity_mismatch_warns() {
    let o = cft(&["dist", "--kind", "cross", "--n", "1", "--seed", "0", "--stride", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!o.stderr.is_empty());
}

#[test]
fn fits_and_experiments() {
    let v = json(&["fig1", "--fits-only"]);
    let text = v.to_string();
    assert!(text.contains("0.815"), "{text}");
    let v = json(&["verdict", "--experiment", "eit-storage"]);
    assert_eq!(v["classification"], "BeatsUpperBound");
}
