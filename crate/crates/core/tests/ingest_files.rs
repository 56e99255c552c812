use std::io::Write;

use torsionlab::bounds::BaseFieldData;
use torsionlab::ingest::*;
use torsionlab::perm::TransitiveTable;

fn resolver() -> GroupResolver {
    GroupResolver::new(TransitiveTable::bundled().clone())
}

fn without_signatures(ds: &Dataset) -> Vec<FieldRecord> {
    ds.records()
        .iter()
        .cloned()
        .map(|r| FieldRecord { signature: None, ..r })
        .collect()
}

#[test]
fn bundled_sample_is_reproducible() {
    let ds = imaginary_quadratic_dataset(10_000, true).unwrap();
    assert_eq!(ds.to_jsonl(), QUADRATIC_SAMPLE);
    let (parsed, report) = parse_str(QUADRATIC_SAMPLE, Format::Jsonl, Strictness::Strict, &mut resolver()).unwrap();
    assert_eq!(report.accepted, parsed.len());
    assert!(report.rejected.is_empty());
    assert_eq!(parsed.to_jsonl(), QUADRATIC_SAMPLE);
    assert_eq!(parsed.records(), ds.records());
}

#[test]
fn csv_round_trip_through_a_file() {
    let ds = imaginary_quadratic_dataset(2000, true).unwrap();
    let mut file = tempfile::Builder::new().suffix(".csv").tempfile().unwrap();
    file.write_all(ds.to_csv().as_bytes()).unwrap();
    let path = file.path();
    assert_eq!(Format::from_path(path), Format::Csv);
    let (back, _) = parse(path, Format::from_path(path), Strictness::Strict, &mut resolver()).unwrap();
    // the CSV header has no signature column
    assert_eq!(back.records(), without_signatures(&ds).as_slice());
    assert_eq!(back.to_csv(), ds.to_csv());
    assert_eq!(back.base, ds.base);
}

#[test]
fn counts_only_records_round_trip() {
    let ds = imaginary_quadratic_dataset(500, false).unwrap();
    assert!(ds.records().iter().all(|r| r.class_invariants.is_none()));
    for format in [Format::Jsonl, Format::Csv] {
        let text = if format == Format::Csv { ds.to_csv() } else { ds.to_jsonl() };
        let (back, _) = parse_str(&text, format, Strictness::Strict, &mut resolver()).unwrap();
        if format == Format::Csv {
            assert_eq!(back.records(), without_signatures(&ds).as_slice());
        } else {
            assert_eq!(back.records(), ds.records());
        }
    }
}

#[test]
fn sample_census_matches_discriminant_oracle() {
    let (ds, _) = parse_str(QUADRATIC_SAMPLE, Format::Jsonl, Strictness::Strict, &mut resolver()).unwrap();
    let census = to_census(&ds, "2T1");
    let want = torsionlab::quadforms::negative_fundamental_discriminants(10_000).len() as u64;
    assert_eq!(census.count_by_bound(10_000), want);
    assert_eq!(census.max_multiplicity(10_000), 1);
    assert_eq!(max_signed_multiplicity(&ds, "2T1"), 1);
    let report = rank_vs_bound(&ds, 2, &BaseFieldData::rationals(), &mut resolver()).unwrap();
    assert!(report.passed());
    assert_eq!(report.checked, ds.len());
    let odd = rank_vs_bound(&ds, 3, &BaseFieldData::rationals(), &mut resolver()).unwrap();
    assert_eq!((odd.checked, odd.skipped_not_ell_group), (0, ds.len()));
}

#[test]
fn malformed_rows_are_reported() {
    let text = concat!(
        r#"{"label":"a","degree":2,"group":"2T1","disc_norm":3,"disc_signed":-3,"signature":[0,1]}"#, "\n",
        r#"{"label":"b","degree":3,"group":"2T1","disc_norm":4}"#, "\n",
        r#"{"label":"c","degree":2,"group":"2T1","disc_norm":4,"disc_signed":5}"#, "\n",
        r#"{"label":"a","degree":2,"group":"2T1","disc_norm":7}"#, "\n",
        r#"{"label":"d","degree":2,"group":"9T99","disc_norm":8}"#, "\n",
        r#"{"label":"e","degree":2,"group":"2T1","disc_norm":8,"class_invariants":[2,3]}"#, "\n",
        "not json\n",
        r#"{"label":"f","degree":4,"group":"(1,2)(3,4)","disc_norm":9}"#, "\n",
        r#"{"label":"g","degree":4,"group":"(1,2,3,4)","disc_norm":9}"#, "\n",
    );
    let err = parse_str(text, Format::Jsonl, Strictness::Strict, &mut resolver()).unwrap_err();
    assert!(matches!(err, IngestError::Malformed(_)));
    let (ds, report) = parse_str(text, Format::Jsonl, Strictness::Lenient, &mut resolver()).unwrap();
    let labels: Vec<&str> = ds.records().iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels, ["a", "g"]);
    let lines: Vec<u64> = report.rejected.iter().map(|e| e.line).collect();
    assert_eq!(lines, [2, 3, 4, 5, 6, 7, 8]);
    assert_eq!(report.accepted, 2);
}

#[test]
fn missing_file_is_an_io_error() {
    let err = parse(
        std::path::Path::new("/nonexistent/fields.jsonl"),
        Format::Jsonl,
        Strictness::Strict,
        &mut resolver(),
    )
    .unwrap_err();
    assert!(matches!(err, IngestError::Io { .. }));
}
