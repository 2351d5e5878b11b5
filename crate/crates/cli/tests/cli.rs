use std::process::{Command, Output};

use boomspec_core::report::{read_rows_csv, SpectrumReport, SuiteReport};
use boomspec_core::{Elt, FieldSpec, PermTable};

fn boomspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boomspec"))
        .args(args)
        .env_remove("BOOMSPEC_WORKERS")
        .output()
        .expect("run boomspec")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn spectrum_n1_table() {
    let o = boomspec(&["spectrum", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("modulus 0x13"));
    assert!(s.contains("{6:2, 4:1, 2:4, 0:8}"), "{s}");
    assert!(s
        .lines()
        .any(|l| l.split_whitespace().collect::<Vec<_>>() == ["0x0", "16", "0"]));
}

#[test]
fn spectrum_csv_has_one_row_per_element_and_round_trips() {
    let o = boomspec(&["spectrum", "--n", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# GF(2^8) modulus 0x11b\n"));
    let rows = SpectrumReport::read_csv(s.as_bytes()).unwrap();
    assert_eq!(rows.len(), 256);
    let f = FieldSpec::default_for(8).unwrap();
    let p = PermTable::power(&f, 83).unwrap();
    assert_eq!(rows, SpectrumReport::build(&p, Elt::ONE, 1).unwrap().rows);
}

#[test]
fn spectrum_structured_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inv.json");
    let o = boomspec(&[
        "spectrum",
        "--k",
        "8",
        "--exponent",
        "254",
        "--format",
        "structured",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let rep = SpectrumReport::from_structured(&text).unwrap();
    assert_eq!(rep.modulus, "0x11b");
    assert_eq!(rep.boomerang_uniformity_row, 6);
    assert_eq!(rep.to_structured().unwrap(), text);
}

#[test]
fn table_file_matches_power_map() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inv.tbl");
    let f = FieldSpec::default_for(8).unwrap();
    PermTable::power(&f, 254)
        .unwrap()
        .write_to(std::fs::File::create(&path).unwrap())
        .unwrap();
    let from_file = boomspec(&[
        "spectrum",
        "--table-file",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    let from_exp = boomspec(&[
        "spectrum",
        "--k",
        "8",
        "--exponent",
        "254",
        "--format",
        "csv",
    ]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&from_exp));
}

#[test]
fn classify_regions() {
    let f = FieldSpec::default_for(8).unwrap();
    let g = f.generator().unwrap();
    let mu = f.fmt_elt(f.pow(g, 51));
    let o = boomspec(&["classify", "--n", "2", "0x01", &mu, "0x2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("0x01: ONE"), "{s}");
    assert!(
        s.contains(&format!("{mu}: MU_STAR predicted beta 36")),
        "{s}"
    );
    let line = s.lines().find(|l| l.starts_with("0x02")).unwrap();
    assert!(
        line.contains("S2") && line.contains("A = ") && line.contains("U = "),
        "{line}"
    );
}

#[test]
fn verify_default_passes() {
    let o = boomspec(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(
        s.starts_with("verification suite: n = 2, modulus 0x11b: PASS"),
        "{s}"
    );
}

#[test]
fn verify_n4_without_long_is_refused() {
    let o = boomspec(&["verify", "--n", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("estimated"), "{err}");
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["spectrum", "--k", "8", "--exponent", "3"][..],
        &["spectrum", "--n", "1", "--modulus", "0x15"],
        &["spectrum", "--n", "1", "--k", "4", "--exponent", "7"],
        &["spectrum", "--k", "8"],
        &["classify", "--n", "2", "0x100"],
        &["verify", "--workers", "0"],
    ] {
        assert_eq!(boomspec(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_output_is_identical_across_worker_counts() {
    let outs: Vec<String> = ["1", "2", "8"]
        .iter()
        .map(|w| {
            let o = boomspec(&[
                "verify",
                "--n",
                "2",
                "--workers",
                w,
                "--format",
                "structured",
            ]);
            assert_eq!(o.status.code(), Some(0));
            stdout(&o)
        })
        .collect();
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0], outs[2]);
    let suite = SuiteReport::from_structured(&outs[0]).unwrap();
    assert!(suite.passed);
    assert_eq!(suite.to_structured().unwrap(), outs[0]);
}

#[test]
fn workers_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_boomspec"))
        .args([
            "verify",
            "--n",
            "1",
            "--check",
            "boomerang",
            "--format",
            "structured",
        ])
        .env("BOOMSPEC_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        stdout(&boomspec(&[
            "verify",
            "--n",
            "1",
            "--check",
            "boomerang",
            "--format",
            "structured"
        ]))
    );
}

#[test]
fn verify_csv_rows_round_trip() {
    let o = boomspec(&[
        "verify",
        "--n",
        "1",
        "--check",
        "boomerang",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("# GF(2^4) modulus 0x13\nb_hex,region,brute,predicted,match\n"));
    let rows = read_rows_csv(s.as_bytes()).unwrap();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r.matched));
}

#[test]
fn modulus_config_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("moduli.txt");
    std::fs::write(&path, "# alternative models\n4=0x19\n8=0x11d\n").unwrap();
    let o = boomspec(&[
        "verify",
        "--n",
        "1",
        "--modulus-config",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("modulus 0x19"));
}

#[test]
fn bench_lists_routes() {
    let o = boomspec(&["bench", "--k", "8", "--exponent", "254", "--workers", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for route in ["definition", "derivative_buckets", "pairs_quadratic"] {
        assert!(s.contains(route), "{s}");
    }
}
