use std::process::{Command, Output};

use serde_json::Value;

fn qac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qac"))
        .args(args)
        .env_remove("QAC_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn terms(v: &Value) -> Vec<(Vec<u64>, String)> {
    v["poly"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let e = t["exp"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            (e, t["coef"].as_str().unwrap().to_string())
        })
        .collect()
}

#[test]
fn asc_all_routes_agree() {
    let out = qac(&["asc", "--family", "U", "--partition", "1", "--n", "2", "--q", "1/2", "--t", "1/3", "--a", "-1", "--route", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["agree"], Value::Bool(true));
    assert_eq!(v["family"], "U");
    // a = -1 kills the constant (1+a)(1+t)
    assert_eq!(terms(&v), vec![(vec![1, 0], "1".into()), (vec![0, 1], "1".into())]);

    let out = qac(&["asc", "--family", "U", "--partition", "1", "--n", "2", "--q", "1/2", "--t", "1/3", "--a", "1/2"]);
    let v = json(&out);
    // 1 + a = 3/2 and [2]_t = 4/3
    assert!(terms(&v).contains(&(vec![0, 0], "-2".into())));
    assert_eq!(v["route"], "eigen");
}

#[test]
fn v_family_and_routes() {
    for route in ["eigen", "genfun", "expop", "all"] {
        let out = qac(&["asc", "--family", "V", "--partition", "2,1", "--n", "2", "--q", "2/3", "--t", "1/5", "--a", "-3/2", "--route", route]);
        assert_eq!(out.status.code(), Some(0), "{route}");
        assert_eq!(json(&out)["family"], "V");
    }
}

#[test]
fn macdonald_output() {
    let out = qac(&["macdonald", "--partition", "0", "--n", "3", "--q", "1/2", "--t", "1/3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(terms(&json(&out)), vec![(vec![0, 0, 0], "1".into())]);

    let out = qac(&["macdonald", "--partition", "1,1", "--n", "2", "--q", "1/2", "--t", "1/3"]);
    assert_eq!(terms(&json(&out)), vec![(vec![1, 1], "1".into())]);
}

#[test]
fn det_matches_eigen_route_at_t_equal_q() {
    let det = json(&qac(&["det", "--partition", "2,1", "--n", "2", "--q", "1/2", "--a", "-1"]));
    let eig = json(&qac(&["asc", "--family", "U", "--partition", "2,1", "--n", "2", "--q", "1/2", "--t", "1/2", "--a", "-1"]));
    assert_eq!(det["params"]["t"], "1/2");
    assert_eq!(det["poly"], eig["poly"]);
}

#[test]
fn error_exit_codes() {
    let out = qac(&["macdonald", "--partition", "2", "--n", "2", "--q", "2", "--t", "1/2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"], "resonance");

    for bad in [
        vec!["asc", "--family", "W", "--partition", "1", "--n", "2", "--q", "1/2", "--t", "1/3", "--a", "-1"],
        vec!["macdonald", "--partition", "1,2", "--n", "2", "--q", "1/2", "--t", "1/3"],
        vec!["macdonald", "--partition", "1", "--n", "2", "--q", "0.5", "--t", "1/3"],
        vec!["macdonald", "--partition", "1", "--n", "2", "--q", "1", "--t", "1/3"],
        vec!["macdonald", "--partition", "1,1,1", "--n", "2", "--q", "1/2", "--t", "1/3"],
        vec!["verify", "--suite", "nope"],
        vec!["verify", "--suite", "norms", "--a", "1/2"],
        vec!["verify", "--suite", "norms", "--q", "1/2", "--t", "1/3"],
        vec!["frobnicate"],
    ] {
        let out = qac(&bad);
        assert_eq!(out.status.code(), Some(2), "{bad:?}");
        assert!(json(&out)["error"].is_string(), "{bad:?}");
    }
}

#[test]
fn verify_examples() {
    let out = qac(&["verify", "--suite", "appendixA", "--n", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out).as_array().unwrap().iter().all(|r| r["pass"] == Value::Bool(true)));

    let out = qac(&["verify", "--suite", "orthogonality", "--n", "2", "--k", "1", "--q", "1/2", "--a", "-1", "--degmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let gram = v.as_array().unwrap().iter().find(|r| r["check"] == "Gram matrix").expect("Gram matrix report");
    assert_eq!(gram["detail"]["gram"].as_array().unwrap().len(), 6);

    let out = qac(&["verify", "--suite", "all", "--degmax", "0"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn report_shape_and_order() {
    let out = qac(&["verify", "--suite", "hecke", "--n", "2", "--degmax", "2", "--points", "2"]);
    let v = json(&out);
    let reports = v.as_array().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        for key in ["check", "params", "lhs", "rhs", "abs_err", "rel_err", "tail_bound", "pass"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
    let names: Vec<&str> = reports.iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert!(names.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn deterministic_output() {
    let args = ["verify", "--suite", "identities", "--n", "2", "--degmax", "2", "--seed", "11"];
    let a = qac(&args);
    let b = qac(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = qac(&["verify", "--suite", "identities", "--n", "2", "--degmax", "2", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn precision_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qac"));
        c.args(["verify", "--suite", "integral-reps", "--n", "1", "--degmax", "0"]).args(extra);
        match env {
            Some(v) => c.env("QAC_PRECISION", v),
            None => c.env_remove("QAC_PRECISION"),
        };
        c.output().unwrap()
    };
    let digits = |o: &Output| {
        let v = json(o);
        v.as_array().unwrap().iter().find_map(|r| r["params"]["measure"]["digits"].as_u64()).unwrap()
    };
    assert_eq!(digits(&run(None, &[])), 60);
    let o = run(Some("40"), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(digits(&o), 40);
    assert_eq!(digits(&run(Some("40"), &["--precision", "50"])), 50);
    assert_eq!(run(Some("abc"), &[]).status.code(), Some(2));
    assert_eq!(run(Some("5"), &[]).status.code(), Some(2));
}
