//! Report formats, schema conformance and the command line contract.

use std::path::Path;
use std::process::Command;

use nonscatter::experiments::{read_csv, run_tau_sweep, write_report, ReportFormat, SweepConfig};

fn config(name: &str) -> SweepConfig {
    SweepConfig::from_path(&Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)).unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/sweep_table.schema.json")).unwrap();
    jsonschema::JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nonscatter"))
}

#[test]
fn json_report_satisfies_schema() {
    let mut cfg = config("coated_pec_tau.json");
    cfg.tau_grid = vec![1e-1, 1e-2];
    let table = run_tau_sweep(&cfg).unwrap();
    let mut buf = Vec::new();
    write_report(&table, ReportFormat::Json, &mut buf).unwrap();
    let value: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert!(schema().is_valid(&value));

    let mut broken = value.clone();
    broken["rows"][0]["status"] = "maybe".into();
    assert!(!schema().is_valid(&broken));
}

#[test]
fn failed_rows_serialize_as_null_and_validate() {
    let cfg = config("coated_pec_tau.json");
    let prep = nonscatter::experiments::prepare(&cfg).unwrap();
    let row = nonscatter::experiments::run_point(&prep, 0.1, f64::NAN);
    assert!(!row.is_ok());
    let mut table = run_tau_sweep(&SweepConfig { tau_grid: vec![0.1], ..cfg }).unwrap();
    table.rows.push(row);
    let value = serde_json::to_value(&table).unwrap();
    assert!(value["rows"][1]["ratio"].is_null());
    assert!(schema().is_valid(&value));
}

#[test]
fn sweep_tau_cli_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/coated_pec_tau.json");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}.csv"));
        let status = bin().arg("sweep-tau").arg(&cfg).arg("--output").arg(&out).status().unwrap();
        assert!(status.success());
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let table = read_csv(outputs[0].as_slice()).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert_eq!(table.metadata.config_digest, config("coated_pec_tau.json").digest());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &serde_json::Value| {
        let p = dir.path().join(name);
        std::fs::write(&p, body.to_string()).unwrap();
        p
    };
    let base = serde_json::to_value(config("transmission_eps.json")).unwrap();

    let mut unknown = base.clone();
    unknown["extra"] = 1.into();
    let code = bin().arg("sweep-eps").arg(write("unknown.json", &unknown)).status().unwrap().code();
    assert_eq!(code, Some(2));

    let code = bin().arg("sweep-eps").arg(dir.path().join("missing.json")).status().unwrap().code();
    assert_eq!(code, Some(2));

    // A transparent ball has no transmission eigenvalue to select.
    let mut transparent = base.clone();
    transparent["materials"]["core"]["epsilon"] = 1.0.into();
    let code = bin().arg("fit").arg(write("transparent.json", &transparent)).status().unwrap().code();
    assert_eq!(code, Some(2));

    // With sqrt(ε_b) equal to the ratio of the first two zeros of j_1, the
    // first zero of j_1 is both a PEC eigenvalue of Σ and a transmission
    // eigenvalue.
    let mut coincident = base.clone();
    coincident["materials"]["core"]["epsilon"] = 2.9557881369819943.into();
    let out = bin().arg("fit").arg(write("coincident.json", &coincident)).output().unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));

    let code = bin().arg("check").status().unwrap().code();
    assert_eq!(code, Some(0));
}
