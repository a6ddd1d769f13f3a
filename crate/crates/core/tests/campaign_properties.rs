use pradius::campaign::{
    replay, run_campaign, summarize, CampaignConfig, CampaignReport, CheckSelection, ReplayParams,
    VariantSelection,
};
use pradius::inequalities::{Variant, Verdict};
use pradius::schatten::PExponent;

fn config(checks: &[&str], dims: &[usize], trials: usize) -> CampaignConfig {
    let p = |v: f64| PExponent::new(v).unwrap();
    CampaignConfig {
        checks: CheckSelection::List(checks.iter().map(|s| s.to_string()).collect()),
        dims: dims.to_vec(),
        p_grid: vec![p(1.0), p(2.0), PExponent::INF],
        t_grid: vec![0.0, 0.5, 1.0],
        nu_grid: vec![0.5],
        trials,
        base_seed: 7,
        grid_points: 180,
        refine: true,
        variants: VariantSelection::Both,
    }
}

fn json(report: &CampaignReport) -> Vec<u8> {
    let mut out = Vec::new();
    report.write_json(&mut out).unwrap();
    out
}

fn schema_validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn self_adjoint_cell_counts() {
    let report = run_campaign(&config(&["WP-SA"], &[3], 5), 1).unwrap();
    let trials: Vec<_> = report.records.iter().filter(|r| r.operands.seed.is_some()).collect();
    assert_eq!(trials.len(), 15);
    assert!(trials.iter().all(|r| r.equality_attained && r.verdict == Verdict::CertifiedHolds));
    assert!(trials.iter().all(|r| r.operands.ensembles == ["hermitian"]));
    // the identity witness rides along at every exponent
    assert_eq!(report.records.len() - trials.len(), 3);
}

#[test]
fn misprint_is_caught_by_the_identity_pair() {
    let report = run_campaign(&config(&["REM-POSREF"], &[2], 4), 1).unwrap();
    let of = |v: Variant| report.records.iter().filter(move |r| r.params.variant == Some(v));
    assert!(of(Variant::AsPrinted)
        .any(|r| r.params.witness.as_deref() == Some("identity") && r.verdict == Verdict::CertifiedViolated));
    assert!(of(Variant::AsDerived).all(|r| r.verdict == Verdict::CertifiedHolds));
    assert_eq!(report.exit_code(), 0, "variant entries never raise the alarm");
    let row = report.summary.iter().find(|r| r.variant == Some(Variant::AsPrinted)).unwrap();
    assert!(row.certified_violated >= 1 && !row.theorem_level);
}

#[test]
fn reports_are_reproducible_and_schema_valid() {
    let cfg = config(&["THM1", "COR22", "EQ-MAXPM", "SCH-BLOCK", "W2-SQZERO"], &[2, 3], 3);
    let a = run_campaign(&cfg, 1).unwrap();
    let b = run_campaign(&cfg, 4).unwrap();
    assert_eq!(json(&a), json(&b));

    let value: serde_json::Value = serde_json::from_slice(&json(&a)).unwrap();
    let validator = schema_validator();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");

    // odd dimensions cannot host square-zero operands
    let row = a.summary.iter().find(|r| r.id == "W2-SQZERO").unwrap();
    assert!(!row.skipped.is_empty());
    assert!(a.records.iter().filter(|r| r.id == "W2-SQZERO").all(|r| r.operands.n == 2));
}

#[test]
fn schema_rejects_malformed_reports() {
    let a = run_campaign(&config(&["WP-UNIT"], &[2], 1), 1).unwrap();
    let mut value: serde_json::Value = serde_json::from_slice(&json(&a)).unwrap();
    let validator = schema_validator();
    assert!(validator.is_valid(&value));
    value["records"][0]["verdict"] = "maybe".into();
    assert!(!validator.is_valid(&value));
    value.as_object_mut().unwrap().remove("records");
    assert!(!validator.is_valid(&value));
}

#[test]
fn every_record_replays_bit_for_bit() {
    let cfg = config(&["THM2", "YAM", "HEINZ", "REM-MAXPM-INF", "SCH-MONO"], &[2, 4], 2);
    let report = run_campaign(&cfg, 1).unwrap();
    for rec in &report.records {
        let mut kv = vec![format!("n={}", rec.operands.n), format!("p={}", rec.p), format!("grid={}", cfg.grid_points)];
        if let Some(t) = rec.params.t {
            kv.push(format!("t={t}"));
        }
        if let Some(nu) = rec.params.nu {
            kv.push(format!("nu={nu}"));
        }
        if let Some(q) = rec.params.q {
            kv.push(format!("q={q}"));
        }
        if let Some(v) = rec.params.variant {
            kv.push(format!("variant={}", v.name()));
        }
        if let Some(w) = &rec.params.witness {
            kv.push(format!("witness={w}"));
        }
        let params = ReplayParams::parse(&kv).unwrap();
        let again = replay(&rec.id, rec.operands.seed.unwrap_or(0), &params).unwrap();
        assert_eq!(&again, rec, "{kv:?}");
    }
}

#[test]
fn csv_export_has_one_line_per_record() {
    let report = run_campaign(&config(&["EQ-MAXPM"], &[2], 2), 1).unwrap();
    let mut out = Vec::new();
    report.write_csv(&mut out).unwrap();
    let mut reader = csv::Reader::from_reader(out.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["id", "variant", "n", "p", "t", "nu", "seed", "lhs_lo", "lhs_hi", "rhs_lo", "rhs_hi", "slack", "verdict", "equality"]
    );
    let rows: Vec<_> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), report.records.len());
    for (row, rec) in rows.iter().zip(&report.records) {
        assert_eq!(&row[0], rec.id);
        assert_eq!(row[11].parse::<f64>().unwrap(), rec.slack);
    }
}

#[test]
fn summary_tables() {
    let mut report = run_campaign(&config(&["THM1"], &[2], 1), 1).unwrap();
    assert_eq!(report.summary.len(), 1);
    assert_eq!(report.summary[0].count, report.records.len());
    let table = summarize(&report);
    assert_eq!(table.lines().count(), 2);
    assert!(table.lines().nth(1).unwrap().starts_with("THM1"));
    report.records.clear();
    report.summary.clear();
    assert_eq!(summarize(&report).lines().count(), 1);
}

#[test]
fn config_files_are_strict() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/default_campaign.json")).unwrap();
    assert_eq!(CampaignConfig::from_json(&text).unwrap(), pradius::campaign::default_campaign());
    let with_extra = text.replacen('{', "{\"ensemble\": \"ginibre\",", 1);
    assert!(CampaignConfig::from_json(&with_extra).is_err());
    assert!(CampaignConfig::from_json(&text.replace("\"all\"", "\"THM9\"")).is_err());
}
