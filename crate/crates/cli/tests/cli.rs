use std::io::Write;
use std::process::{Command, Output};

use dtq_core::json::dt_entry_from_json;
use dtq_core::{DimVector, GradedSeries, RatFunc};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn dtq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn jordan_dt_table() {
    let o = dtq(&["dt", "--quiver", &data("jordan.json"), "--box", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 8);
    assert!(lines[2].split_whitespace().eq(["0", "1", "-t^-1", "yes", "no"]));
    for line in &lines[3..] {
        let cells: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(&cells[2..], ["0", "yes", "yes"]);
    }
}

#[test]
fn wallcross_passes() {
    let o = dtq(&[
        "check",
        "wallcross",
        "--quiver",
        &data("a2.json"),
        "--stability",
        &data("a2_chamberA.json"),
        "--stability2",
        &data("a2_chamberB.json"),
        "--box",
        "3,3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["first"]["residuals"].as_array().unwrap().is_empty());
    assert!(v["second"]["residuals"].as_array().unwrap().is_empty());
}

#[test]
fn series_csv() {
    let o = dtq(&[
        "series",
        "--quiver",
        &data("k2.json"),
        "--box",
        "2,2",
        "--format",
        "csv",
        "-N",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("d;t_exponent;coefficient"));
    for line in lines {
        let cells: Vec<&str> = line.split(';').collect();
        assert_eq!(cells.len(), 3);
        assert!(cells[1].parse::<i64>().unwrap() <= 8);
    }
}

#[test]
fn series_json_round_trips() {
    let o = dtq(&[
        "series",
        "--quiver",
        &data("a2.json"),
        "--stability",
        &data("a2_chamberA.json"),
        "--box",
        "2,2",
        "--semistable",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s: GradedSeries = serde_json::from_str(&stdout(&o)).unwrap();
    let expected = (-RatFunc::t()).checked_div(&(&RatFunc::one() - &RatFunc::q())).unwrap();
    assert_eq!(s.coeff(&DimVector::new(vec![1, 1])), expected);
}

#[test]
fn dt_json_round_trips() {
    let o = dtq(&[
        "dt",
        "--quiver",
        &data("k2.json"),
        "--stability",
        &data("k2_generic.json"),
        "--box",
        "3,3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut count = 0;
    for p in v["packages"].as_array().unwrap() {
        for e in p["entries"].as_array().unwrap() {
            let entry = dt_entry_from_json(e).unwrap();
            if entry.dim_vector == DimVector::new(vec![1, 1]) {
                assert_eq!(entry.omega, -(&RatFunc::t() + &RatFunc::t_pow(-1)));
            }
            count += 1;
        }
    }
    assert_eq!(count, 15);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "dt",
        "--quiver",
        &data("k2.json"),
        "--stability",
        &data("k2_generic.json"),
        "--box",
        "3,3",
    ];
    let a = dtq(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_dtq"))
        .args(args)
        .env("DTQ_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn non_generic_dt_is_an_input_error() {
    let o = dtq(&["dt", "--quiver", &data("k2.json"), "--box", "2,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("<(0,1), (1,0)> = 2"), "{}", stderr(&o));
}

#[test]
fn malformed_inputs_exit_2() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{{\"vertices\": [\"1\"], \"arrows\": [[\"1\"").unwrap();
    let o = dtq(&["dt", "--quiver", f.path().to_str().unwrap(), "--box", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = dtq(&["dt", "--quiver", &data("jordan.json"), "--box", "2,2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = dtq(&[
        "dt",
        "--quiver",
        &data("jordan.json"),
        "--stability",
        &data("a2_chamberA.json"),
        "--box",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = dtq(&["dt", "--quiver", &data("jordan.json"), "--box", "2", "--slope", "x/y"]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_dtq"))
        .args(["dt", "--quiver", &data("jordan.json"), "--box", "2"])
        .env("DTQ_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_budget_exceeded_exit_2() {
    let o = dtq(&[
        "check",
        "oracle",
        "--quiver",
        &data("k2.json"),
        "--box",
        "3,3",
        "--q",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn oracle_matches() {
    let o = dtq(&[
        "check",
        "oracle",
        "--quiver",
        &data("a2.json"),
        "--stability",
        &data("a2_chamberB.json"),
        "--box",
        "2,2",
        "--q",
        "4,9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("18 of 18 rows match\n"));
}

#[test]
fn stabilization_exit_codes() {
    let base = ["check", "stabilize", "--quiver", &data("jordan.json"), "--dim", "1"];
    let o = dtq(&[&base[..], &["--framings", "1;2;3;4;5"]].concat());
    assert_eq!(o.status.code(), Some(0));
    // a repeated framing cannot be strictly increasing
    let o = dtq(&[&base[..], &["--framings", "2;2"]].concat());
    assert_eq!(o.status.code(), Some(1));
    let o = dtq(&[&base[..], &["--framings", "3;2"]].concat());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn framed_pbw_and_classes() {
    let o = dtq(&[
        "check",
        "framed-pbw",
        "--quiver",
        &data("jordan.json"),
        "--box",
        "5",
        "--framing",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = dtq(&[
        "framed",
        "--quiver",
        &data("a2.json"),
        "--box",
        "0,1",
        "--framing",
        "1,0",
        "--slope",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let last = v.as_array().unwrap().last().unwrap().clone();
    assert_eq!(last["dim_vector"], serde_json::json!([0, 1]));
    assert_eq!(last["empty"], true);
    assert_eq!(last["dim"], -1);
}
