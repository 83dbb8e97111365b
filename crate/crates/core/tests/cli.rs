use std::path::Path;
use std::process::{Command, Output};

fn tailrisk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tailrisk")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn describe_json_per_cohort() {
    for (filter, mean, n) in [("summer", 213.25, 8), ("winter", 142.181818, 11), ("all", 172.105263, 19)] {
        let o = tailrisk(&["describe", "--filter", filter, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let text = v.to_string();
        assert!(text.contains(&format!("{n}")), "{filter}: {text}");
        let got = v["summary"]["overrun_pct"]["result"]["mean"].as_f64().unwrap();
        assert!((got - mean).abs() < 1e-4, "{filter}: {got}");
    }
}

#[test]
fn describe_text_and_csv() {
    let o = tailrisk(&["describe"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("172.105"));
    let o = tailrisk(&["describe", "--format", "csv"]);
    let s = stdout(&o);
    assert!(s.starts_with("section,key,statistic,value"), "{s}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tailrisk(&["nonsense"]).status.code(), Some(2));
    assert_eq!(tailrisk(&["simulate", "--dist", "pareto:x:1"]).status.code(), Some(2));
    assert_eq!(tailrisk(&["simulate", "--dist", "cauchy:0:1"]).status.code(), Some(2));
    assert_eq!(tailrisk(&["plotdata", "--figure", "pie"]).status.code(), Some(2));
    assert_eq!(tailrisk(&["describe", "--input", "/nonexistent/x.csv"]).status.code(), Some(2));
    assert_eq!(tailrisk(&["--help"]).status.code(), Some(0));
}

#[test]
fn numerical_failure_exits_3() {
    // a single point above the cutoff cannot support a tail fit
    let o = tailrisk(&["compare", "--xmin", "8.2"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn fit_and_compare_json() {
    let o = tailrisk(&["fit", "--model", "pareto1", "--xmin", "1.02", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.to_string().contains("1.2058"), "{v}");

    let o = tailrisk(&["compare", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.to_string().contains("favored"), "{v}");
}

#[test]
fn simulate_is_reproducible_and_flags_regime() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = tailrisk(&[
            "simulate", "--dist", "pareto:0.8:1", "--horizon", "300", "--runs", "50", "--seed", "7",
            "--out", path(out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ta = std::fs::read(a.join("trace.csv")).unwrap();
    assert_eq!(ta, std::fs::read(b.join("trace.csv")).unwrap());
    assert_eq!(
        std::fs::read(a.join("summary.json")).unwrap(),
        std::fs::read(b.join("summary.json")).unwrap()
    );
    let trace = String::from_utf8(ta).unwrap();
    assert!(trace.starts_with("step,q05,q50,q95"));
    assert_eq!(trace.lines().count(), 301);
    let summary = std::fs::read_to_string(a.join("summary.json")).unwrap();
    assert!(summary.contains("infinite-mean regime"), "{summary}");
}

#[test]
fn plotdata_tables() {
    let dir = tempfile::tempdir().unwrap();
    let ccdf = dir.path().join("ccdf.csv");
    assert!(tailrisk(&["plotdata", "--figure", "ccdf", "--out", path(&ccdf)]).status.success());
    let text = std::fs::read_to_string(&ccdf).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 19);
    let p: f64 = rows[0].split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(p, 1.0);

    let ct = dir.path().join("ct.csv");
    assert!(tailrisk(&["plotdata", "--figure", "cost-time", "--out", path(&ct)]).status.success());
    assert_eq!(std::fs::read_to_string(&ct).unwrap().lines().count(), 26);

    let at = dir.path().join("at.csv");
    assert!(tailrisk(&["plotdata", "--figure", "athlete-time", "--out", path(&at)]).status.success());
    let with = std::fs::read_to_string(&at).unwrap();
    let without = std::fs::read_to_string(dir.path().join("at-without-outlier.csv")).unwrap();
    assert_eq!(with.lines().count(), without.lines().count() + 1);
    let max = |t: &str| {
        t.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).fold(0.0, f64::max)
    };
    assert!((max(&with) - 7.874).abs() < 0.01, "{}", max(&with));
    assert!(max(&without) < 2.0);
}

#[test]
fn report_on_tiny_dataset_degrades_gracefully() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tiny.csv");
    std::fs::write(
        &input,
        "name,year,season,country,events,athletes,outturn_cost_busd2015,overrun_pct_real\n\
         A 2000,2000,summer,X,100,1000,2.0,50\n\
         B 2004,2004,summer,Y,110,1100,3.0,120\n\
         C 2006,2006,winter,Z,80,800,1.5,30\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = tailrisk(&["report", "--input", path(&input), "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = std::fs::read_to_string(out.join("report.json")).unwrap();
    assert!(report.contains("\"insufficient\""), "{report}");
    assert!(out.join("ccdf.csv").exists());
}
