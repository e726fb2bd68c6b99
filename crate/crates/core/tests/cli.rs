use std::process::{Command, Output};

use stabkit::potential::FramePotentialReport;
use stabkit::ExactRational;

fn stabkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabkit"))
        .args(args)
        .env_remove("STABKIT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn frame_potential_csv_matches_json() {
    let base = [
        "frame-potential",
        "--d",
        "2",
        "--n",
        "1..3",
        "--t",
        "2..4",
        "--method",
        "all",
    ];
    let csv_out = stabkit(&[&base[..], &["--format", "csv"]].concat());
    let json_out = stabkit(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(csv_out.status.code(), Some(0));
    assert_eq!(json_out.status.code(), Some(0));

    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let reports: Vec<FramePotentialReport> = stdout(&json_out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 9);
    assert_eq!(reports.len(), 9);
    for (rec, rep) in records.iter().zip(&reports) {
        assert_eq!(rec[0].parse::<u64>().unwrap(), u64::from(rep.d));
        assert_eq!(rec[1].parse::<usize>().unwrap(), rep.n);
        assert_eq!(rec[2].parse::<u32>().unwrap(), rep.t);
        assert_eq!(rec[3].parse::<u64>().unwrap(), rep.dimension);
        assert_eq!(
            rec[4].parse::<ExactRational>().unwrap(),
            rep.value_recursion
        );
        assert_eq!(
            rec[5].parse::<ExactRational>().unwrap(),
            rep.value_combinatorial
        );
        assert_eq!(
            rec[6].parse::<f64>().unwrap(),
            rep.value_bruteforce.unwrap()
        );
        assert_eq!(rec[7].parse::<ExactRational>().unwrap(), rep.welch);
        assert_eq!(rec[8].parse::<bool>().unwrap(), rep.is_t_design);
        if rep.t == 3 {
            assert!(rep.is_t_design);
        }
        // lossless round trip
        let again = serde_json::to_string(rep).unwrap();
        assert_eq!(
            serde_json::from_str::<FramePotentialReport>(&again).unwrap(),
            *rep
        );
    }
    // rows sorted by (d, n, t)
    let keys: Vec<_> = reports.iter().map(|r| (r.n, r.t)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn enumerate_commands() {
    let o = stabkit(&["enumerate", "lagrangians", "--d", "2", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 15);

    let o = stabkit(&["enumerate", "states", "--d", "2", "--n", "1"]);
    assert_eq!(stdout(&o).lines().count(), 6);

    let o = stabkit(&[
        "enumerate",
        "spectrum",
        "--d",
        "2",
        "--n",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(
        stdout(&o),
        "k,enumerated,formula,match\n0,8,8,true\n1,6,6,true\n2,1,1,true\n"
    );
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("stabkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fp.csv");
    let o = stabkit(&[
        "frame-potential",
        "--d",
        "3",
        "--n",
        "1",
        "--t",
        "3",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("3,1,3,3,1/9,1/9,,1/10,false,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let o = stabkit(&["verify", "--d", "2", "--n", "2", "--t-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("summary: 13 passed, 0 failed\n"));

    let o = stabkit(&["verify", "--d", "4", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d must be prime"));

    let o = stabkit(&["verify", "--d", "2", "--n", "9"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds the cap"));

    let o = stabkit(&["frame-potential", "--d", "2", "--n", "2..1", "--t", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = stabkit(&["verify", "--d", "2", "--n", "1", "--state-cap", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = stabkit(&[
        "frame-potential",
        "--d",
        "2",
        "--n",
        "2",
        "--t",
        "2",
        "--method",
        "bruteforce",
        "--pair-cap",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = [
        "frame-potential",
        "--d",
        "2",
        "--n",
        "1..3",
        "--t",
        "1..6",
        "--method",
        "bruteforce",
        "--format",
        "csv",
    ];
    let one = stabkit(&[&args[..], &["--threads", "1"]].concat());
    let many = stabkit(&[&args[..], &["--threads", "8"]].concat());
    assert_eq!(one.stdout, many.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_stabkit"))
        .args(args)
        .env("STABKIT_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
}
