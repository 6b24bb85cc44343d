use gridfloer::concordance::BatchReport;
use gridfloer::legendrian::LegendrianError;
use gridfloer_cli::{threads_from_env, Failure};
use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn grid(name: &str) -> String {
    root().join("grids").join(format!("{name}.grid")).display().to_string()
}

fn diagram(name: &str) -> String {
    root()
        .join("diagrams")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn gridfloer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridfloer"))
        .args(args)
        .env_remove("GRIDFLOER_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn documented_examples() {
    let o = gridfloer(&["invariants", &grid("unknot2")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "tb=-1 r=0 sl=-1\n");

    let o = gridfloer(&["theta", &grid("sixone_tbmax")]);
    assert_eq!(stdout(&o), "vanishes=true\n");

    let o = gridfloer(&[
        "--cap",
        "16",
        "obstruct",
        &grid("k1_substitute"),
        &grid("k2_substitute"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("obstructed_theta"));
}

#[test]
fn theta_sign_and_tau() {
    let o = gridfloer(&["theta", "--sign", "minus", &grid("trefoil_rh_tbmax")]);
    assert_eq!(stdout(&o), "vanishes=false\n");
    let o = gridfloer(&["tau", "--thin", &grid("sixone_tbmax")]);
    assert_eq!(stdout(&o), "tau=0 sl=-5 bound=-1 sharp=false thin_shortcut=zero\n");
    let o = gridfloer(&["tau", &grid("trefoil_rh_tbmax"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tau"], 1);
    assert_eq!(v["sharp"], true);
}

#[test]
fn hfk_tables() {
    let o = gridfloer(&["hfk", "--hat", &grid("trefoil_rh_tbmax")]);
    assert_eq!(stdout(&o), "0\t-2\t1\n1\t0\t1\n2\t2\t1\n");
    let o = gridfloer(&["hfk", &grid("unknot2"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(gridfloer(&[]).status.code(), Some(2));
    assert_eq!(gridfloer(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        gridfloer(&["--cap", "17", "theta", &grid("unknot2")]).status.code(),
        Some(2)
    );
    assert_eq!(
        gridfloer(&["theta", "--sign", "zero", &grid("unknot2")]).status.code(),
        Some(2)
    );
    assert_eq!(gridfloer(&["--help"]).status.code(), Some(0));

    assert_eq!(gridfloer(&["theta", "/no/such/file"]).status.code(), Some(3));
    let o = gridfloer(&["theta", &grid("k2_substitute")]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capacity"));

    let dir = tempfile::tempdir().unwrap();
    let link = dir.path().join("link.grid");
    std::fs::write(&link, "4\n0 1 2 3\n1 0 3 2\n").unwrap();
    let link = link.display().to_string();
    let o = gridfloer(&["validate", &link]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o), "invalid\nlink\tdiagram presents a link with 2 components\n");
    assert_eq!(gridfloer(&["invariants", &link]).status.code(), Some(3));
    let o = gridfloer(&["validate", &grid("sixone_tbmax")]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "valid n=8\n".to_string()));

    let conv = Failure::from(LegendrianError::Convention("x".into()));
    assert_eq!(conv.code, 5);
}

#[test]
fn thread_variable() {
    assert_eq!(threads_from_env(None), Ok(None));
    assert_eq!(threads_from_env(Some("3")), Ok(Some(3)));
    assert!(threads_from_env(Some("0")).is_err());
    assert!(threads_from_env(Some("many")).is_err());
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_gridfloer"))
            .args(["invariants", &grid("unknot2")])
            .env("GRIDFLOER_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    assert_eq!(run("none").status.code(), Some(2));
}

#[test]
fn stabilized_obstruction_table() {
    let o = gridfloer(&[
        "obstruct",
        "--cap",
        "16",
        "--depth",
        "1",
        &grid("family2_k1"),
        &grid("family2_k2"),
    ]);
    assert_eq!(
        stdout(&o),
        "i\tj\tverdict\n0\t0\tobstructed_theta\n0\t1\tobstructed_classical\n\
         1\t0\tobstructed_classical\n1\t1\tobstructed_theta\ninherits_base=true\n"
    );
}

#[test]
fn batch_reports_are_stable_and_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.txt");
    std::fs::write(
        &pairs,
        format!(
            "# k1 k2\n{} {}\n{} {}\n",
            grid("family2_k1"),
            grid("family2_k2"),
            grid("unknot2"),
            grid("trefoil_rh_tbmax")
        ),
    )
    .unwrap();
    let p = pairs.display().to_string();
    let a = gridfloer(&["obstruct-batch", "--cap", "16", "--format", "json", &p]);
    let b = gridfloer(&["obstruct-batch", "--cap", "16", "--format", "json", &p]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: BatchReport = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.rows.len(), 2);

    let tsv = gridfloer(&["obstruct-batch", "--cap", "16", &p]);
    let lines: Vec<String> = stdout(&tsv).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains("\tobstructed_theta\t-2\t-1\t-2\t-1\tfalse\ttrue"));
    assert!(lines[2].contains("\tobstructed_classical\t"));

    // relative paths resolve against the pairs file; a missing file and an
    // oversized grid fail only their own rows
    std::fs::copy(grid("unknot2"), dir.path().join("u.grid")).unwrap();
    std::fs::write(
        &pairs,
        format!("u.grid u.grid\nu.grid missing.grid\nu.grid {}\n", grid("k2_substitute")),
    )
    .unwrap();
    let o = gridfloer(&["obstruct-batch", "--format", "json", &p]);
    assert_eq!(o.status.code(), Some(3));
    let report: BatchReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.rows[0].verdict.is_some());
    assert_eq!(report.rows[1].error.as_ref().unwrap().kind, "io");
    assert_eq!(report.rows[2].error.as_ref().unwrap().kind, "capacity");

    std::fs::write(&pairs, "only-one-path\n").unwrap();
    assert_eq!(gridfloer(&["obstruct-batch", &p]).status.code(), Some(3));
}

#[test]
fn domains_check_reports() {
    let o = gridfloer(&["domains-check", &diagram("s1s2_wound"), "--generator", "p1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("weakly_admissible=true"));
    assert!(s.contains("whole_surface_pairing=2"));

    let o = gridfloer(&["domains-check", &diagram("s1s2_parallel"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["admissibility"]["verdict"], "inadmissible");
    assert_eq!(v["basis"].as_array().unwrap().len(), 1);

    let o = gridfloer(&[
        "domains-check",
        &diagram("genus2_wound"),
        "--eliminate",
        "beta2,beta1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let basis = v["basis"].as_array().unwrap();
    assert!(basis[0]["boundary"].get("beta1").is_none());
    assert!(basis[1]["boundary"].get("beta2").is_none());

    let o = gridfloer(&["domains-check", &diagram("triple_toy"), "--families", "beta,gamma"]);
    assert!(stdout(&o).contains("basis\t0\t"));
    assert_eq!(
        gridfloer(&["domains-check", &diagram("triple_toy"), "--generator", "a,c"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(gridfloer(&["domains-check", &grid("unknot2")]).status.code(), Some(3));
}
