// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use epidemetric::PairMatrix;

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epidemetric"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn metrics_writes_path_tables() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("p6.txt");
    fs::write(&input, "# P6\n1 2\n2 3\n3 4\n4 5\n5 6\n").unwrap();
    let o = run(&["metrics", "--input", input.to_str().unwrap(), "--out", "m"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = dir.path().join("m");
    for name in ["distances", "epidemic", "effres", "discrepancy"] {
        assert!(out.join(format!("{name}.csv")).exists(), "{name}.csv missing");
    }
    let epi = PairMatrix::from_csv(&fs::read_to_string(out.join("epidemic.csv")).unwrap()).unwrap();
    let n = 6;
    for i in 1..=n {
        for j in i + 1..=n {
            let expected = (j - i).min(i - 1) + 2 * (j - i) + (j - i).min(n - j);
            assert_eq!(epi.get(i - 1, j - 1), expected as f64);
        }
    }
}

#[test]
fn complete_graph_resistances() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["effres", "--dataset", "complete:5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = PairMatrix::from_csv(&stdout(&o)).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            let expected = if i == j { 0.0 } else { 0.4 };
            assert!((r.get(i, j) - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn tables_round_trip_at_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["metrics", "karate", "--out", "k"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("k/effres.csv")).unwrap();
    let table = PairMatrix::from_csv(&text).unwrap();
    let direct = epidemetric::electrical::resistance_matrix(&epidemetric::karate::graph()).unwrap();
    assert_eq!(table, direct);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.txt"), "").unwrap();
    fs::write(dir.path().join("split.txt"), "1 2\n3 4\n").unwrap();
    fs::write(dir.path().join("bad.txt"), "1 2\n2 x\n").unwrap();
    for args in [
        vec!["metrics", "--input", "empty.txt"],
        vec!["metrics", "--input", "split.txt"],
        vec!["metrics", "--input", "bad.txt"],
        vec!["metrics", "--input", "missing.txt"],
        vec!["metrics", "--dataset", "nonsense"],
        vec!["simulate", "path:6", "--trials", "0"],
        vec!["simulate", "path:6", "--a", "7"],
        vec!["cluster", "path:4", "--k", "5"],
        vec!["effres", "path:4", "--digits", "40"],
        vec!["effres", "path:4", "--unknown"],
        vec!["effres"],
    ] {
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["metrics", "--input", "bad.txt"], dir.path());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn karate_cluster_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["cluster", "karate", "--k", "2", "--out", "c"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let c = dir.path().join("c");
    let mislabels = fs::read_to_string(c.join("mislabels.txt")).unwrap();
    let count: usize = mislabels.lines().next().unwrap().strip_prefix("mislabels ").unwrap().parse().unwrap();
    assert!(count <= 4);
    let dend = epidemetric::clustering::Dendrogram::from_json(&fs::read_to_string(c.join("dendrogram.json")).unwrap()).unwrap();
    assert_eq!(dend.merges.len(), 33);
    let newick = fs::read_to_string(c.join("dendrogram.newick")).unwrap();
    assert!(newick.trim_end().ends_with(';'));
    assert_eq!(fs::read_to_string(c.join("partition.csv")).unwrap().lines().count(), 35);
}

#[test]
fn cluster_extremes() {
    let dir = tempfile::tempdir().unwrap();
    for (k, distinct) in [("1", 1), ("6", 6)] {
        let o = run(&["cluster", "path:6", "--k", k, "--out", k], dir.path());
        assert_eq!(o.status.code(), Some(0));
        let csv = fs::read_to_string(dir.path().join(k).join("partition.csv")).unwrap();
        let mut labels: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), distinct);
        assert!(!dir.path().join(k).join("mislabels.txt").exists());
    }
}

#[test]
fn simulate_is_deterministic_and_accurate() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--dataset", "path:6", "--trials", "100000", "--seed", "11", "--format", "json"];
    let first = run(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    let second = Command::new(env!("CARGO_BIN_EXE_epidemetric"))
        .args(args)
        .env("EPIDEMETRIC_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert!((v["estimate"].as_f64().unwrap() - 0.2).abs() < 0.01);
    assert!(v["z"].as_f64().unwrap().abs() <= 4.0);
}

#[test]
fn simulate_reports_abort_rate_as_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["simulate", "path:10", "--trials", "200", "--max-steps", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("step cap"));
}

#[test]
fn verify_random_corpus_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--random", "12", "50", "--seed", "2024", "--out", "v"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["graphs"], 50);
    assert!(dir.path().join("v/report.json").exists());
}

#[test]
fn verify_tree_and_pendant_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "star:6"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let tree = report["suites"].as_array().unwrap().iter().find(|s| s["name"] == "tree_equality").unwrap();
    assert!(tree["checks"].as_u64().unwrap() > 0);
    assert!(tree["max_violation"].as_f64().unwrap() < 1e-9);

    let o = run(&["verify", "complete-pendant:10"], dir.path());
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let worst = report["max_discrepancy"]["value"].as_f64().unwrap();
    assert!((worst - 47.0).abs() < 1e-9);
}

#[test]
fn single_pair_queries() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["epidemic", "star:5", "--a", "2", "--b", "3", "--format", "json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["epidemic"], 8);
    let o = run(&["modulus", "path:4", "--a", "1", "--b", "4", "--bruteforce", "--format", "json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["modulus"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((v["bruteforce"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-6);
}
