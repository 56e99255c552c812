//! Runs in its own process so the environment override cannot leak into
//! other tests.

use std::io::Write;

use torsionlab::ingest::GroupResolver;
use torsionlab::perm::{TransitiveTable, DATA_ENV};

#[test]
fn data_variable_replaces_the_bundled_table() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = std::fs::File::create(dir.path().join("transitive_groups.txt")).unwrap();
    writeln!(file, "2T1 : (1,2)").unwrap();
    writeln!(file, "3T1 : (1,2,3)").unwrap();
    drop(file);

    std::env::set_var(DATA_ENV, dir.path());
    let table = TransitiveTable::load().unwrap();
    assert_eq!(table.entries().len(), 2);
    let mut resolver = GroupResolver::from_env().unwrap();
    assert!(resolver.resolve("3T1").is_ok());
    assert!(resolver.resolve("3T2").is_err());

    std::env::set_var(DATA_ENV, dir.path().join("transitive_groups.txt"));
    assert_eq!(TransitiveTable::load().unwrap().entries().len(), 2);

    std::env::set_var(DATA_ENV, dir.path().join("missing.txt"));
    assert!(TransitiveTable::load().is_err());

    std::env::remove_var(DATA_ENV);
    assert_eq!(TransitiveTable::load().unwrap().entries().len(), TransitiveTable::bundled().entries().len());
}
