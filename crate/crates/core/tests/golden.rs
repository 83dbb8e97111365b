//! Set `UPDATE_GOLDEN=1` to rewrite the stored report after an intended change.

use tailrisk::report::ReportBundle;
use tailrisk::GamesTable;

#[test]
fn seed_42_report_matches_golden() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/report.json");
    let json = ReportBundle::build(&GamesTable::bundled(), 42).to_json();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(path, &json).unwrap();
    }
    let golden = std::fs::read_to_string(path).unwrap();
    assert!(json == golden, "report drifted from {path}; rerun with UPDATE_GOLDEN=1 if intended");
}
