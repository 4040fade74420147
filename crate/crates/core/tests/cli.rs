//! End-to-end checks of the `risgeo` binary.

use std::fs;
use std::process::{Command, Output};

fn risgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_risgeo"))
        .args(args)
        .output()
        .expect("run risgeo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_reference_scenario() {
    let o = risgeo(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn unknown_key_is_rejected() {
    let o = risgeo(&["--set", "foo=1", "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("foo"), "{}", stderr(&o));
}

#[test]
fn non_square_planar_count_fails_validation() {
    let o = risgeo(&[
        "--set",
        "total_elements=99",
        "--set",
        "geometry=2d",
        "validate",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(format!("{}{}", stdout(&o), stderr(&o)).contains("non-square"));
}

#[test]
fn ris_in_tx_plane_fails_validation() {
    let o = risgeo(&["--set", "ris_center=2,0,3", "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(format!("{}{}", stdout(&o), stderr(&o)).contains("ris-in-tx-plane"));
}

#[test]
fn beam_missing_the_surface_is_a_runtime_error() {
    let o = risgeo(&["--set", "ris_center=20,0.5,3", "power", "--geometry", "2d"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn scenario_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    fs::write(&path, "# deployment\nris_center = 0, 2, 3\nhpbw_deg = 5\n").unwrap();
    let o = risgeo(&[
        "--scenario",
        path.to_str().unwrap(),
        "--set",
        "geometry=3d",
        "neff",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("n_eff=6"), "{text}");
    assert!(text.contains("branch=cyl-contained"), "{text}");
}

#[test]
fn layout_csv_has_one_row_per_element() {
    let o = risgeo(&["layout", "--geometry", "2d"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("idx,x,y,z,r1,r2,az_t,el_t,az_r,el_r"));
    let n = risgeo(&["neff", "--geometry", "2d"]);
    let count: usize = stdout(&n)
        .lines()
        .find_map(|l| l.strip_prefix("n_eff="))
        .and_then(|v| v.parse().ok())
        .unwrap();
    assert_eq!(lines.count(), count);
}

#[test]
fn outage_is_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = risgeo(&[
            "--out",
            path.to_str().unwrap(),
            "outage",
            "--geometry",
            "2d",
            "--threshold-db",
            "0:30:5",
            "--seed",
            "7",
            "--samples",
            "20000",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        fs::read(path).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("rho_th_db,p_out_closed,p_out_mc")));
}

#[test]
fn reproduce_critical_beamwidth() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig3b.csv");
    let o = risgeo(&["--out", path.to_str().unwrap(), "reproduce", "fig3b"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(path).unwrap();
    let phi: f64 = text
        .lines()
        .find_map(|l| l.split("critical_hpbw_deg=").nth(1))
        .and_then(|v| v.trim().parse().ok())
        .expect("critical beamwidth comment");
    assert!((phi - 13.8).abs() <= 0.5, "{phi}");
}

#[test]
fn optimize_reports_every_geometry() {
    let o = risgeo(&["optimize", "--x-range", "0:10:0.5", "--metric", "snr"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for g in ["1d", "2d", "3d"] {
        assert!(text.contains(&format!("geometry={g}")), "{text}");
    }
}

#[test]
fn bad_range_is_a_parameter_error() {
    let o = risgeo(&["sweep", "--range", "5:1:0.1"]);
    assert_eq!(o.status.code(), Some(2));
}
