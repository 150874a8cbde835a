use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use altroute::io::{parse_dimacs, AgDocument};
use serde_json::Value;

fn altroute(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altroute")).args(args).env("ALTROUTE_LOG", "off").output().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn plateau_on_single_path_graph() {
    let dir = tempfile::tempdir().unwrap();
    let gr = write(dir.path(), "line.gr", "p sp 3 2\na 1 2 4\na 2 3 6\n");
    let out = dir.path().join("ag.json");
    let res = altroute(&[
        "compute",
        "--graph",
        path_str(&gr),
        "--source",
        "1",
        "--target",
        "3",
        "--method",
        "plateau",
        "--out",
        path_str(&out),
    ]);
    assert!(res.status.success(), "{}", stderr(&res));
    let doc = AgDocument::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.edges.len(), 1);
    assert_eq!(doc.edges[0].path_nodes, vec![0, 1, 2]);
    let metrics = doc.metrics.unwrap();
    assert_eq!(metrics.decision_edges, 0);
    assert_eq!(metrics.total_distance.exact, "1");
    assert_eq!(doc.method.unwrap().name, "plateau");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let gr = write(dir.path(), "g.gr", "p sp 3 1\na 1 2 4\n");
    let out = dir.path().join("ag.json");
    let run = |extra: &[&str]| {
        let mut args = vec!["compute", "--graph", path_str(&gr), "--method", "yen", "--out", path_str(&out)];
        args.extend_from_slice(extra);
        altroute(&args).status.code()
    };
    assert_eq!(run(&["--source", "1", "--target", "3"]), Some(3));
    assert_eq!(run(&["--source", "1", "--target", "4"]), Some(2));
    assert_eq!(run(&["--source", "1", "--target", "1"]), Some(2));
    assert_eq!(run(&["--source", "1", "--target", "2", "--k", "0"]), Some(2));
    assert_eq!(altroute(&["compute", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        altroute(&["generate", "grid", "--width", "1", "--height", "3", "--out", "x.gr"]).status.code(),
        Some(2)
    );

    let bad = write(dir.path(), "bad.gr", "p sp 2 1\na 1 2 -3\n");
    let res = altroute(&[
        "compute",
        "--graph",
        path_str(&bad),
        "--source",
        "1",
        "--target",
        "2",
        "--method",
        "yen",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(stderr(&res).contains("line 2"), "{}", stderr(&res));
}

#[test]
fn dimacs_errors_name_lines() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("p sp 2 2\na 1 2 5\n", "line 1"),
        ("c\np sp 2 1\na 1 9 5\n", "line 3"),
        ("p sp 2 1\na 1 2 five\n", "line 2"),
        ("p sp 2 1\nx 1 2 5\n", "line 2"),
    ];
    for (i, (text, expected)) in cases.iter().enumerate() {
        let gr = write(dir.path(), &format!("bad{i}.gr"), text);
        let res = altroute(&[
            "compare",
            "--graph",
            path_str(&gr),
            "--source",
            "1",
            "--target",
            "2",
            "--out",
            path_str(&dir.path().join("r.json")),
        ]);
        assert_eq!(res.status.code(), Some(1), "{text:?}");
        assert!(stderr(&res).contains(expected), "{text:?}: {}", stderr(&res));
    }
}

#[test]
fn metrics_recomputes_and_rejects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let gr = write(dir.path(), "d.gr", "p sp 4 4\na 1 2 1\na 2 4 1\na 1 3 2\na 3 4 2\n");
    let out = dir.path().join("ag.json");
    let res = altroute(&[
        "compute",
        "--graph",
        path_str(&gr),
        "--source",
        "1",
        "--target",
        "4",
        "--method",
        "disjoint",
        "--max-stretch",
        "1",
        "--out",
        path_str(&out),
    ]);
    assert!(res.status.success(), "{}", stderr(&res));

    let res = altroute(&["metrics", "--ag", path_str(&out), "--graph", path_str(&gr)]);
    assert!(res.status.success(), "{}", stderr(&res));
    let printed: Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(printed["total_distance"]["exact"], "2");
    assert_eq!(printed["average_distance"]["exact"], "3/2");

    // point the first edge at a node that is not in the graph
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    doc["edges"][0]["to"] = Value::from(99);
    let corrupt = write(dir.path(), "corrupt.json", &serde_json::to_string_pretty(&doc).unwrap());
    let res = altroute(&["metrics", "--ag", path_str(&corrupt)]);
    assert_eq!(res.status.code(), Some(1));
    assert!(stderr(&res).contains("99"), "{}", stderr(&res));

    // a weight that disagrees with the road graph
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    doc["edges"][0]["weight"] = Value::from(7);
    let corrupt = write(dir.path(), "weight.json", &serde_json::to_string_pretty(&doc).unwrap());
    let res = altroute(&["metrics", "--ag", path_str(&corrupt), "--graph", path_str(&gr)]);
    assert_eq!(res.status.code(), Some(1));
    assert!(stderr(&res).contains("weight"), "{}", stderr(&res));
}

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.gr"), dir.path().join("b.gr"));
    for p in [&a, &b] {
        let res = altroute(&[
            "generate",
            "ring",
            "--width",
            "6",
            "--height",
            "3",
            "--seed",
            "4",
            "--perturb",
            "2",
            "--out",
            path_str(p),
        ]);
        assert!(res.status.success(), "{}", stderr(&res));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(dir.path().join("a.co").exists());
    let g = parse_dimacs(&text).unwrap();
    assert_eq!(g.node_count(), 18);
    assert!(g.main_weights().iter().all(|w| (8..=12).contains(w)));
}

#[test]
fn compare_on_grid() {
    let dir = tempfile::tempdir().unwrap();
    let gr = dir.path().join("g.gr");
    let res = altroute(&[
        "generate",
        "grid",
        "--width",
        "20",
        "--height",
        "20",
        "--seed",
        "3",
        "--perturb",
        "3",
        "--out",
        path_str(&gr),
    ]);
    assert!(res.status.success());
    let out = dir.path().join("report.json");
    let res =
        altroute(&["compare", "--graph", path_str(&gr), "--source", "1", "--target", "400", "--out", path_str(&out)]);
    assert!(res.status.success(), "{}", stderr(&res));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let results = report["results"].as_array().unwrap();
    let names: Vec<&str> = results.iter().map(|r| r["method"]["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["penalty", "plateau", "disjoint", "yen", "pareto"]);
    for r in results {
        let td = r["metrics"]["total_distance"]["approx"].as_f64().unwrap();
        assert!(td >= 1.0, "{}: {td}", r["method"]["name"]);
        assert_eq!(r["feasible"], true);
    }
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let gr = dir.path().join("g.gr");
    assert!(altroute(&[
        "generate",
        "grid",
        "--width",
        "6",
        "--height",
        "6",
        "--seed",
        "1",
        "--perturb",
        "3",
        "--out",
        path_str(&gr)
    ])
    .status
    .success());
    let co = dir.path().join("g.co");
    let query = |format: &str, coords: bool| {
        let out = dir.path().join(format!("ag.{format}"));
        let mut args =
            vec!["compute", "--graph", path_str(&gr), "--source", "1", "--target", "36", "--method", "plateau"];
        if coords {
            args.extend(["--coords", path_str(&co)]);
        }
        args.extend(["--format", format, "--out", path_str(&out)]);
        (altroute(&args), out)
    };
    let (res, json) = query("json", false);
    assert!(res.status.success(), "{}", stderr(&res));
    let doc = AgDocument::from_json(&std::fs::read_to_string(json).unwrap()).unwrap();

    let (res, geo) = query("geojson", true);
    assert!(res.status.success(), "{}", stderr(&res));
    let geo: Value = serde_json::from_str(&std::fs::read_to_string(geo).unwrap()).unwrap();
    assert_eq!(geo["features"].as_array().unwrap().len(), doc.edges.len());

    let (res, dot) = query("dot", false);
    assert!(res.status.success(), "{}", stderr(&res));
    let dot = std::fs::read_to_string(dot).unwrap();
    assert_eq!(dot.matches(" -> ").count(), doc.edges.len());

    let (res, _) = query("geojson", false);
    assert_eq!(res.status.code(), Some(1));
}
