use std::fs;
use std::process::Command;

fn arbcolour(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_arbcolour"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn generated_forest_run_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("metrics.csv");
    let out = arbcolour(&[
        "--algo",
        "dynamic-adaptive",
        "--generate",
        "forest",
        "--n",
        "200",
        "--steps",
        "2000",
        "--seed",
        "5",
        "--verify-every",
        "100",
        "--metrics-out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("step,live_edges,"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.last().unwrap().starts_with("2000,"));
    for row in rows {
        assert_eq!(row.split(',').nth(3), Some("1"));
    }
}

#[test]
fn dumped_stream_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    let gen = [
        "--algo",
        "dynamic-max",
        "--generate",
        "grid-planar",
        "--n",
        "64",
        "--steps",
        "500",
    ];
    let mut dump_args = gen.to_vec();
    dump_args.push("--dump-stream");
    let dump = arbcolour(&dump_args);
    assert!(dump.status.success());
    fs::write(&path, &dump.stdout).unwrap();

    let mut from_gen = gen.to_vec();
    from_gen.extend(["--metrics-out", "-"]);
    let a = arbcolour(&from_gen);
    let b = arbcolour(&[
        "--algo",
        "dynamic-max",
        "--stream",
        path.to_str().unwrap(),
        "--metrics-out",
        "-",
    ]);
    assert!(a.status.success() && b.status.success());
    let strip = |o: &[u8]| -> Vec<String> {
        String::from_utf8_lossy(o)
            .lines()
            .map(|l| {
                l.rsplit_once(',')
                    .unwrap()
                    .0
                    .split(',')
                    .enumerate()
                    .filter(|&(i, _)| i != 3)
                    .map(|(_, f)| f)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect()
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn static_algorithm_rejects_deletes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    fs::write(&path, "+ 0 1\n+ 1 2\n- 0 1\n").unwrap();
    let out = arbcolour(&[
        "--algo",
        "static-degeneracy",
        "--stream",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_stream_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    fs::write(&path, "n 3\n+ 0 1\n+ 1 x\n").unwrap();
    let out = arbcolour(&["--algo", "dynamic-max", "--stream", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3, column 5"), "{err}");
}

#[test]
fn missing_input_is_usage_error() {
    let out = arbcolour(&["--algo", "dynamic-max"]);
    assert_eq!(out.status.code(), Some(2));
}
