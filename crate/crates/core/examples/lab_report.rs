//! Running a verification suite from code and writing its CSV/JSON report.
use qfinsler::lab::{run, ExperimentConfig};

fn main() -> qfinsler::Result<()> {
    let cfg = ExperimentConfig::from_json(
        r#"{"experiment": "girth2d", "seed": 3, "knobs": {"random_pairs": 5, "phi_psi_samples": 500}}"#,
    )?;
    let report = run(&cfg);
    for row in report.rows.iter().take(8) {
        println!("{:<32} {:<28} {:>12.8} margin {:+.2e}", row.case_id, row.quantity, row.value, row.margin);
    }
    println!("... {} rows, all passed: {}", report.rows.len(), report.passed());
    let dir = std::env::temp_dir().join("qfinsler-report");
    let (csv, json) = report.write(&dir)?;
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}
