use std::fs;
use std::process::{Command, Output};

fn intervene(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intervene"))
        .args(args)
        .env_remove("RUST_BACKTRACE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bench_is_reproducible_and_has_fixed_columns() {
    let args = [
        "bench", "--n", "80", "--k", "3", "--trials", "2", "--density-grid", "0.5:1.5:0.5", "--seed", "11",
    ];
    let a = intervene(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = intervene(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance_id,n,k,chi,alpha,strategy,interventions_used,node_accesses,info_lb,chromatic_lb,katona_lb_n,sepsys_size_chi,sepsys_size_n,wall_time_ms"
    );
    // 3 densities x 2 trials x 2 strategies
    assert_eq!(lines.count(), 12);
}

#[test]
fn bench_with_no_trials_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = intervene(&["bench", "--n", "50", "--k", "2", "--trials", "0", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(out).unwrap().lines().count(), 1);
}

#[test]
fn bounds_rows_cover_the_range() {
    let o = intervene(&["bounds", "--chi", "20:100", "--n", "1000", "--k", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(
        rows[0],
        "chi,info_lb,chromatic_lb,clique_sepsys_achievable,clique_sepsys_ours,sepsys_ub_n,sepsys_size_n,note"
    );
    assert_eq!(rows.len(), 1 + 81);
    assert!(rows[1].starts_with("20,1.0,,"));
    let last: Vec<&str> = rows[81].split(',').collect();
    assert_eq!(last[0], "100");
    let chromatic: f64 = last[2].parse().unwrap();
    assert!((chromatic - 13.944).abs() < 0.01);
}

#[test]
fn gen_then_run_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("inst");
    let p = prefix.to_str().unwrap();
    let o = intervene(&["gen", "--family", "random", "--n", "120", "--density", "1.5", "--seed", "2", "--out", p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let graph = format!("{p}.graph");
    let dag = format!("{p}.dag");
    let log = dir.path().join("t.log");
    for strategy in ["naive", "hybrid"] {
        let o = intervene(&[
            "run", "--graph", &graph, "--orientation", &dag, "--strategy", strategy, "--k", "4",
            "--transcript", log.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with(&format!("strategy={strategy} interventions=")));
        let t = fs::read_to_string(&log).unwrap();
        assert!(t.starts_with("I 1: {"));
        assert!(t.trim_end().lines().last().unwrap().starts_with("# experiments="));
    }
}

#[test]
fn other_families_generate() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["--family", "complete", "--n", "12"],
        vec!["--family", "tree", "--n", "30"],
        vec!["--family", "split", "--chi", "5", "--alpha", "7"],
        vec!["--family", "line", "--chi", "4", "--alpha", "3"],
    ] {
        let prefix = dir.path().join(args[1]);
        let mut full = vec!["gen"];
        full.extend(args.iter().copied());
        full.extend(["--out", prefix.to_str().unwrap()]);
        let o = intervene(&full);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = intervene(&["gen", "--family", "split", "--chi", "5", "--out", "x"]);
    assert!(!o.status.success());
}

#[test]
fn run_fails_on_unsupported_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g");
    let p = p.to_str().unwrap();
    assert!(intervene(&["gen", "--family", "random", "--n", "40", "--density", "2", "--out", p]).status.success());
    let o = intervene(&[
        "run", "--graph", &format!("{p}.graph"), "--orientation", &format!("{p}.dag"), "--strategy", "tree", "--k", "1",
    ]);
    assert!(!o.status.success());
}

#[test]
fn run_rejects_orientation_with_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    let d = dir.path().join("d");
    fs::write(&g, "3 3\n0 1\n1 2\n0 2\n").unwrap();
    fs::write(&d, "0 1\n1 2\n2 0\n").unwrap();
    let o = intervene(&[
        "run", "--graph", g.to_str().unwrap(), "--orientation", d.to_str().unwrap(), "--strategy", "hybrid", "--k", "1",
    ]);
    assert!(!o.status.success());
}

#[test]
fn sepsys_emits_verified_sets() {
    let o = intervene(&["sepsys", "--n", "10", "--k", "3", "--emit"]);
    assert!(o.status.success());
    let sets: Vec<Vec<usize>> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(sets.iter().all(|s| !s.is_empty() && s.len() <= 3));
    for i in 0..10 {
        for j in i + 1..10 {
            assert!(sets.iter().any(|s| s.contains(&i) != s.contains(&j)), "{i} {j}");
        }
    }
    assert!(!intervene(&["sepsys", "--n", "4", "--k", "2"]).status.success());
}
