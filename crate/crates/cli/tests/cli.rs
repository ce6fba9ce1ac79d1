use std::process::{Command, Output};

use hcwalk::WalkTopology;

fn hcwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(out.stdout.as_slice())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

fn header(out: &Output) -> Vec<String> {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.headers().unwrap().iter().map(String::from).collect()
}

/// Everything but the wall-clock column.
fn without_seconds(out: &Output) -> Vec<Vec<String>> {
    rows(out)
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|&(i, _)| i != 14)
                .map(|(_, v)| v.to_string())
                .collect()
        })
        .collect()
}

#[test]
fn classical_tails_point() {
    let out = hcwalk(&["classical", "--kind", "tails", "--d", "3", "--n", "1", "--q", "1", "--oracle"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        header(&out),
        "kind,d,n,q,dims,mode,eps,tau_classical,tau_q,t_c,p_total,D_red,dark,converged,seconds,error"
            .split(',')
            .collect::<Vec<_>>()
    );
    let r = &rows(&out)[0];
    assert_eq!(&r[0], "tails");
    assert_eq!(&r[7], "50/3");
    assert_eq!(&r[11], "15");
}

#[test]
fn quantum_bare_point_converges() {
    let out = hcwalk(&["quantum", "--kind", "bare", "--d", "5", "--eps", "1e-4", "--verify-convergence"]);
    assert!(out.status.success());
    let r = &rows(&out)[0];
    assert_eq!(&r[13], "true");
    assert_eq!(&r[12], "false");
    assert!(r[8].parse::<f64>().unwrap() > 1.0);
}

#[test]
fn level_sweep_shows_the_gap() {
    let out = hcwalk(&["sweep", "--kind", "concat", "--dims-equal", "2", "--m", "1..5", "--engine", "both"]);
    assert!(out.status.success());
    let rows = rows(&out);
    assert_eq!(rows.len(), 5);
    let mut last = 0.0;
    for (m, r) in rows.iter().enumerate() {
        let classical: f64 = r[7].parse().unwrap();
        let quantum: f64 = r[8].parse().unwrap();
        assert!(quantum < classical && classical > last);
        last = classical;
        let t = WalkTopology::concatenated(vec![2; m + 2], hcwalk::WalkMode::CentralCornerToCorner)
            .unwrap();
        assert_eq!(r[11].parse::<u128>().unwrap(), t.reduced_dimension());
    }
}

#[test]
fn output_is_reproducible_and_ordered() {
    let args = ["sweep", "--kind", "tails", "--d", "2..6", "--n", "2", "--q", "1", "--jobs", "3"];
    let a = hcwalk(&args);
    let b = hcwalk(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(without_seconds(&a), without_seconds(&b));
    let ds: Vec<String> = rows(&a).iter().map(|r| r[1].to_string()).collect();
    assert_eq!(ds, ["2", "3", "4", "5", "6"]);
}

#[test]
fn config_file_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("plan.txt");
    std::fs::write(
        &config,
        "# two structures\nkind=bare d=4\nkind=concat dims=2,2 mode=penetrate loops=false\n",
    )
    .unwrap();
    let out_path = dir.path().join("rows.csv");
    let out = hcwalk(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--oracle",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][7], "64/3");
    assert_eq!(&rows[1][5], "penetrate");
    assert_eq!(&rows[1][11], "21");
}

#[test]
fn trace_file() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = hcwalk(&["quantum", "--kind", "bare", "--d", "2", "--trace", trace.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,p,cumulative");
    assert_eq!(lines.len(), 3);
}

#[test]
fn failed_points_set_the_exit_code() {
    // loop-adjusted classical values exist for tails only
    let out = hcwalk(&["sweep", "--kind", "concat", "--dims", "2,2", "--loops", "--engine", "classical"]);
    assert_eq!(out.status.code(), Some(1));
    let r = &rows(&out)[0];
    assert!(r[15].contains("classical"));

    let out = Command::new(env!("CARGO_BIN_EXE_hcwalk"))
        .args(["quantum", "--kind", "bare", "--d", "12"])
        .env("HCWALK_MAX_STEPS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(rows(&out)[0][15].contains("after 3 steps"));
}

#[test]
fn malformed_input_is_a_config_error() {
    for args in [
        &["classical", "--kind", "tails", "--d", "3"][..],
        &["sweep", "--kind", "bare", "--d", "5,3"],
        &["sweep", "--kind", "tails", "--d", "2,3", "--n", "1,2", "--q", "1"],
        &["quantum", "--kind", "bare", "--d", "3", "--eps", "2"],
        &["classical", "--kind", "bare", "--d", "3,4"],
    ] {
        let out = hcwalk(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn figure_writes_one_file_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = hcwalk(&["figure", "fig8", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("fig8_d2.csv")).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["m", "tau_classical", "tau_classical_approx", "tau_q", "D_red", "converged", "dark", "error"]
    );
    let rows: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() < r[2].parse::<f64>().unwrap());
    }
}
