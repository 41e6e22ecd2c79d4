use std::fs;
use std::path::Path;

use booksize::cli::{
    meta_path, run, GraphMetadata, EXIT_ASSERTION, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE,
};
use booksize::graph::format;
use booksize::oracle::brute_force_triangles;
use booksize::Pair;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn booksize(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["booksize"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_writes_graph_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.tri");
    let run = booksize(&["construct", "--r", "2", "--d", "4", "--out", path_str(&g)]);
    assert_eq!(run.code, EXIT_OK, "{}", run.err);
    let meta: GraphMetadata =
        serde_json::from_str(&fs::read_to_string(meta_path(&g)).unwrap()).unwrap();
    assert_eq!(meta.pipeline.part_sizes, [16, 16, 256]);
    assert_eq!(format::load(&g).unwrap().sizes(), [16, 16, 256]);
}

#[test]
fn construct_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let outs: Vec<_> = (0..2)
        .map(|k| {
            let g = dir.path().join(format!("g{k}.tri"));
            let run = booksize(&[
                "construct",
                "--r",
                "2",
                "--d",
                "2",
                "--sparsify",
                "random:4",
                "--seed",
                "7",
                "--out",
                path_str(&g),
            ]);
            assert_eq!(run.code, EXIT_OK, "{}", run.err);
            (fs::read(&g).unwrap(), fs::read(meta_path(&g)).unwrap())
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn oversized_instance_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("big.tri");
    let run = booksize(&["construct", "--r", "3", "--d", "40", "--out", path_str(&g)]);
    assert_eq!(run.code, EXIT_RESOURCE);
    assert!(run.err.contains("cap"), "{}", run.err);
    assert!(!g.exists());
}

#[test]
fn usage_errors() {
    assert_eq!(booksize(&["construct", "--r", "x"]).code, EXIT_USAGE);
    assert_eq!(
        booksize(&["construct", "--r", "2", "--d", "2"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        booksize(&[
            "construct",
            "--r",
            "2",
            "--d",
            "2",
            "--sparsify",
            "coin",
            "--out",
            "x"
        ])
        .code,
        EXIT_USAGE
    );
    assert_eq!(booksize(&["--help"]).code, EXIT_OK);
}

#[test]
fn analyze_reports_oracle_booksize() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.tri");
    let report = dir.path().join("report.json");
    assert_eq!(
        booksize(&[
            "construct",
            "--r",
            "2",
            "--d",
            "4",
            "--prune",
            "--out",
            path_str(&g)
        ])
        .code,
        EXIT_OK
    );
    let run = booksize(&["analyze", "--in", path_str(&g), "--out", path_str(&report)]);
    assert_eq!(run.code, EXIT_OK, "{}", run.err);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let graph = format::load(&g).unwrap();
    let oracle = brute_force_triangles(&graph, u64::MAX).unwrap();
    let max = oracle.counts.values().copied().max().unwrap();
    assert_eq!(json["booksize"], max);
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["params"]["r"], 2);
    assert_eq!(json["seed"], 0);
    assert!(json["tool_version"]
        .as_str()
        .unwrap()
        .starts_with("booksize "));
    assert_eq!(json["verdicts"].as_array().unwrap().len(), 6);
}

#[test]
fn analyze_empty_and_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.tri");
    fs::write(&empty, "tripartite 0 0 0\n").unwrap();
    let run = booksize(&["analyze", "--in", path_str(&empty)]);
    assert_eq!(run.code, EXIT_OK);
    let json: serde_json::Value = serde_json::from_str(&run.out).unwrap();
    assert_eq!(json["booksize"], 0);
    assert_eq!(json["total_edges"], 0);

    let bad = dir.path().join("bad.tri");
    let report = dir.path().join("bad.json");
    fs::write(&bad, "tripartite 2 2 2\nAB 0 1\nAB 5 0\n").unwrap();
    let run = booksize(&[
        "analyze",
        "--in",
        path_str(&bad),
        "--out",
        path_str(&report),
    ]);
    assert_eq!(run.code, EXIT_USAGE);
    assert!(run.err.contains("line 3"), "{}", run.err);
    assert!(!report.exists());
}

#[test]
fn analyze_formats() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.tri");
    booksize(&["construct", "--r", "2", "--d", "2", "--out", path_str(&g)]);
    let csv = booksize(&["analyze", "--in", path_str(&g), "--format", "csv"]);
    assert!(csv.out.starts_with("triangles,edges\n"));
    let text = booksize(&["analyze", "--in", path_str(&g), "--format", "text"]);
    assert!(text.out.contains("booksize"));
}

#[test]
fn verify_pipeline_and_injected_fault() {
    let run = booksize(&[
        "verify",
        "--r",
        "2",
        "--d",
        "4",
        "--sparsify",
        "random:64",
        "--seed",
        "3",
        "--prune",
        "--blowup",
        "2",
    ]);
    assert_eq!(run.code, EXIT_OK, "{}{}", run.out, run.err);
    assert!(run.out.contains("[pass] w_identities"));

    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.tri");
    booksize(&["construct", "--r", "2", "--d", "3", "--out", path_str(&g)]);
    assert_eq!(booksize(&["verify", "--in", path_str(&g)]).code, EXIT_OK);

    let mut graph = format::load(&g).unwrap();
    let e = graph.edges(Pair::BC).next().unwrap();
    graph.remove_edges(&[e]).unwrap();
    format::save(&graph, &g, format::GraphFormat::Text).unwrap();
    let run = booksize(&["verify", "--in", path_str(&g)]);
    assert_eq!(run.code, EXIT_ASSERTION);
    assert!(run.out.contains("failed: recheck_geometry"), "{}", run.out);
}

#[test]
fn verify_without_coordinates_skips_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("plain.tri");
    fs::write(&g, "tripartite 1 1 1\nAB 0 0\nBC 0 0\nAC 0 0\n").unwrap();
    let run = booksize(&["verify", "--in", path_str(&g)]);
    assert_eq!(run.code, EXIT_OK);
    assert!(run.out.contains("[skip] w_identities"));
    assert!(run.out.contains("[pass] oracle_equivalence"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "r=2\nd=3\nsparsify.mode=random\nsparsify.size=10\nsparsify.seed=1\nprune=true\n",
    )
    .unwrap();
    let a = dir.path().join("a.tri");
    let b = dir.path().join("b.tri");
    booksize(&[
        "construct",
        "--config",
        path_str(&cfg),
        "--out",
        path_str(&a),
    ]);
    booksize(&[
        "construct",
        "--config",
        path_str(&cfg),
        "--d",
        "2",
        "--out",
        path_str(&b),
    ]);
    assert_eq!(format::load(&a).unwrap().sizes(), [8, 8, 10]);
    assert_eq!(format::load(&b).unwrap().sizes(), [4, 4, 10]);
}

#[test]
fn sweep_and_export() {
    let run = booksize(&["sweep", "--r", "2", "--d", "2,4", "--sizes", "auto,full"]);
    assert_eq!(run.code, EXIT_OK);
    let lines: Vec<_> = run.out.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("r,d,mode,size"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));

    let skipped = booksize(&["sweep", "--r", "3", "--d", "40"]);
    assert_eq!(skipped.code, EXIT_OK);
    assert!(skipped.out.lines().nth(1).unwrap().contains("skipped"));

    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.tri");
    let bin = dir.path().join("g.bin");
    let back = dir.path().join("back.tri");
    let csv = dir.path().join("edges.csv");
    booksize(&["construct", "--r", "2", "--d", "2", "--out", path_str(&g)]);
    assert_eq!(
        booksize(&[
            "export",
            "--in",
            path_str(&g),
            "--to",
            "binary",
            "--out",
            path_str(&bin)
        ])
        .code,
        EXIT_OK
    );
    assert_eq!(
        booksize(&[
            "export",
            "--in",
            path_str(&bin),
            "--to",
            "text",
            "--out",
            path_str(&back)
        ])
        .code,
        EXIT_OK
    );
    assert_eq!(fs::read(&g).unwrap(), fs::read(&back).unwrap());
    assert_eq!(
        booksize(&[
            "export",
            "--in",
            path_str(&g),
            "--to",
            "edges-csv",
            "--out",
            path_str(&csv)
        ])
        .code,
        EXIT_OK
    );
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(
        rows.lines().count() as u64,
        1 + format::load(&g).unwrap().total_edges()
    );
}

#[test]
fn coupled_bounds_need_only_r() {
    let run = booksize(&["construct", "--r", "2", "--coupled"]);
    assert_eq!(run.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&run.out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(
        booksize(&["construct", "--r", "3", "--coupled"]).code,
        EXIT_USAGE
    );
}
