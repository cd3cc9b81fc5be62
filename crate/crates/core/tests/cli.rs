use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordan-bell"))
        .args(args)
        .env("LC_ALL", "de_DE.UTF-8")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn violation_three_parties() {
    let o = bin(&["violation", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lambda_max  0.236068"));
}

#[test]
fn violation_with_identical_settings_is_zero() {
    let o = bin(&["violation", "--n", "2", "--angles", "1.0,1.0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lambda_max  0.000000"));
}

#[test]
fn full_search_five_parties() {
    let o = bin(&[
        "violation",
        "--n",
        "5",
        "--full",
        "--restarts",
        "32",
        "--seed",
        "7",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    let lam: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((lam - 0.257836).abs() <= 1e-5, "{row}");
}

#[test]
fn table_rows() {
    let o = bin(&["table", "--n-max", "7", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "n,x,lambda_max\n3,0.786151,0.236068\n4,0.830913,0.249757\n5,0.860012,0.257836\n\
         6,0.880509,0.263187\n7,0.895745,0.266998\n"
    );
}

#[test]
fn game_report() {
    let out = stdout(&bin(&["game"]));
    assert!(out.contains("classical value     0.800000"));
    assert!(out.contains("quantum_simulated   0.847214"));
    assert!(out.contains("psi3prime_formula   0.825000"));
}

#[test]
fn verify_passes_by_default() {
    let o = bin(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("all 17 checks passed"));
}

#[test]
fn injected_fault_fails_char_poly_check() {
    let o = bin(&["verify", "--inject-fault", "char-poly-drop-beta"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("FAIL  char-poly-n3"));
    assert!(out.contains("1 failed: char-poly-n3"));
}

#[test]
fn over_tight_tolerance_reports_residuals() {
    let o = bin(&["verify", "--tol", "1e-15"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert!(!fails.is_empty());
    assert!(fails
        .iter()
        .all(|l| l.contains("residual") && !l.contains("inf")));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["violation", "--n", "1"],
        vec!["violation", "--angles", "0.2,1.5"],
        vec!["violation", "--n", "8", "--full"],
        vec!["table", "--n-max", "2"],
        vec!["state", "ghz"],
        vec!["classical", "--n", "0"],
        vec!["verify", "--tol", "-1"],
        vec!["--format", "xml", "game"],
        vec![],
    ] {
        let o = bin(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn state_and_classical() {
    let out = stdout(&bin(&["state", "psi2", "--format", "csv"]));
    assert!(out.starts_with("index,basis,re,im\n0,00,"));
    let out = stdout(&bin(&["classical", "--n", "7"]));
    assert!(out.contains("classical value  0.000000"));
    assert!(out.contains("strategies       16384"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("jordan-bell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let o = bin(&[
        "table",
        "--n-max",
        "4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "n,x,lambda_max\n3,0.786151,0.236068\n4,0.830913,0.249757\n"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "violation",
        "--n",
        "4",
        "--full",
        "--restarts",
        "4",
        "--seed",
        "3",
        "--format",
        "json",
    ];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
}
