use std::process::{Command, Output};

fn latsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latsum"))
        .args(args)
        .output()
        .expect("spawn latsum")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn ok(args: &[&str]) -> String {
    let o = latsum(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn sums() {
    assert_eq!(
        ok(&["sum", "--polytope", "corpus:unit-square", "--poly", "1"]).trim(),
        "1/1"
    );
    assert_eq!(
        ok(&[
            "sum",
            "--polytope",
            "corpus:nonregular-triangle",
            "--poly",
            "1"
        ])
        .trim(),
        "5/4"
    );
    assert_eq!(
        ok(&["sum", "--polytope", "[0,5]", "--poly", "x1^3"]).trim(),
        "325/2"
    );
    let out = ok(&[
        "sum",
        "--polytope",
        "corpus:nonregular-triangle",
        "--poly",
        "x1*x2 + x2^2",
        "--oracle",
    ]);
    assert!(out.contains("(equal)"), "{out}");
}

#[test]
fn counts() {
    for (name, weighted) in [
        ("simplex2", "3/4"),
        ("simplex2x3", "19/4"),
        ("simplex2x2", "9/4"),
    ] {
        let out = ok(&[
            "--format",
            "json",
            "count",
            "--polytope",
            &format!("corpus:{name}"),
        ]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["weighted"], weighted, "{name}");
    }
}

#[test]
fn exit_codes() {
    let nonprimitive = r#"{"dim":2,"normals":[[2,0],[0,1],[-1,-1]],"offsets":[0,0,2]}"#;
    assert_eq!(
        latsum(&["validate", "--polytope", nonprimitive])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        latsum(&["validate", "--polytope", "{bad"]).status.code(),
        Some(3)
    );
    assert_eq!(
        latsum(&["sum", "--polytope", "[0,2]", "--poly", "x1^^2"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        latsum(&["sum", "--polytope", "[3,1]", "--poly", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(latsum(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(latsum(&["--help"]).status.code(), Some(0));
    assert_eq!(
        latsum(&["validate", "--polytope", "/nonexistent/p.json"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn cyclotomic_cap_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_latsum"))
        .args([
            "sum",
            "--polytope",
            "corpus:nonregular-triangle",
            "--poly",
            "1",
        ])
        .env("LE_MAX_CYCLO_ORDER", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tables() {
    let b: Vec<String> = ok(&["tables", "bernoulli", "--max", "4"])
        .lines()
        .map(|l| l.to_string())
        .collect();
    assert_eq!(b, ["b_1 = -1/2", "b_2 = 1/6", "b_3 = 0/1", "b_4 = -1/30"]);
    let q = ok(&["tables", "qvalues", "--order", "2", "--m", "4"]);
    assert!(q.trim().ends_with("0, 1/4, 0, -1/48"), "{q}");
    let g = ok(&[
        "--format",
        "json",
        "tables",
        "groups",
        "--polytope",
        "corpus:nonregular-triangle",
    ]);
    let v: serde_json::Value = serde_json::from_str(&g).unwrap();
    let orders: Vec<u64> = v["faces"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, [1, 1, 1, 1, 1, 1, 2]);
    assert_eq!(v["cyclotomic_order"], 2);
}

#[test]
fn decompose_signs() {
    let out = ok(&[
        "--format",
        "json",
        "decompose",
        "--polytope",
        "corpus:nonregular-triangle",
        "--seed",
        "2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let cones = v["cones"].as_array().unwrap();
    assert_eq!(cones.len(), 3);
    for c in cones {
        let flips = c["flip_count"].as_i64().unwrap();
        assert_eq!(
            c["sign"].as_i64().unwrap(),
            if flips % 2 == 0 { 1 } else { -1 }
        );
    }
}

#[test]
fn verify_modes() {
    let out = ok(&[
        "verify",
        "--polytope",
        "corpus:nonregular-triangle",
        "--count",
        "4",
        "--seed",
        "9",
    ]);
    assert!(out.contains("4/4 exact"), "{out}");
    let out = ok(&[
        "--format",
        "json",
        "verify",
        "--polytope",
        "corpus:simplex2x3",
        "--mode",
        "smooth",
        "--k",
        "2",
        "--seed",
        "1",
        "--seed",
        "2",
        "--function",
        r#"{"family":"gaussian","center":[1.0,1.5],"sigma":1.0}"#,
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for r in v["reports"].as_array().unwrap() {
        assert!(r["defect"].as_f64().unwrap() < 1e-6);
    }
    let bad_dim = latsum(&[
        "verify",
        "--polytope",
        "[0,3]",
        "--mode",
        "smooth",
        "--function",
        r#"{"family":"gaussian","center":[1.0,1.5],"sigma":1.0}"#,
    ]);
    assert_eq!(bad_dim.status.code(), Some(2));
}

#[test]
fn job_files_and_determinism() {
    let dir = std::env::temp_dir().join(format!("latsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let job = dir.join("job.json");
    std::fs::write(
        &job,
        r#"{"command":"sum","polytope":"corpus:simplex2x4","poly":"x1^2 - x2","format":"json"}"#,
    )
    .unwrap();
    let a = ok(&["run", "--job", job.to_str().unwrap()]);
    let b = ok(&["run", "--job", job.to_str().unwrap()]);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let direct = ok(&[
        "sum",
        "--polytope",
        "corpus:simplex2x4",
        "--poly",
        "x1^2 - x2",
    ]);
    assert_eq!(v["value"], direct.trim());

    let poly = dir.join("tri.json");
    std::fs::write(
        &poly,
        r#"{"dim":2,"normals":[[1,0],[0,1],[-2,-1]],"offsets":[0,0,2]}"#,
    )
    .unwrap();
    assert_eq!(
        ok(&["sum", "--polytope", poly.to_str().unwrap(), "--poly", "1"]).trim(),
        "5/4"
    );

    std::fs::write(&job, r#"{"command":"sum","polytope":"[0,1]","bogus":true}"#).unwrap();
    assert_eq!(
        latsum(&["run", "--job", job.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
