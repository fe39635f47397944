mod common;

use std::fs;
use std::path::Path;

use common::{dir_bytes, random_dataset, Shape};
use photosocial::ingest::{self, IngestError};
use photosocial::synth::{self, SynthConfig};
use photosocial::{BuildMode, Dataset};
use proptest::prelude::*;
use tempfile::tempdir;

fn load_strict(dir: &Path) -> Dataset {
    let (d, report) = ingest::load(dir, BuildMode::Strict).unwrap();
    assert!(report.errors.is_empty() && report.warnings.is_empty(), "{report:?}");
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn save_load_save_is_byte_identical(seed in any::<u64>()) {
        let d = random_dataset(seed, Shape::MEDIUM);
        let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
        ingest::save(&d, a.path()).unwrap();
        let loaded = load_strict(a.path());
        prop_assert_eq!(&loaded, &d);
        ingest::save(&loaded, b.path()).unwrap();
        prop_assert_eq!(dir_bytes(a.path()), dir_bytes(b.path()));
    }
}

#[test]
fn synthetic_corpus_round_trips() {
    let d = synth::generate(&SynthConfig::with_users(2000, 3)).unwrap();
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    ingest::save(&d, a.path()).unwrap();
    ingest::save(&load_strict(a.path()), b.path()).unwrap();
    assert_eq!(dir_bytes(a.path()), dir_bytes(b.path()));
}

/// Applies `edit` to one file of a saved dataset and returns the strict-load error report.
fn corrupt(file: &str, edit: impl FnOnce(String) -> String) -> Vec<String> {
    let d = random_dataset(11, Shape::MEDIUM);
    let dir = tempdir().unwrap();
    ingest::save(&d, dir.path()).unwrap();
    let path = dir.path().join(file);
    fs::write(&path, edit(fs::read_to_string(&path).unwrap())).unwrap();
    match ingest::load(dir.path(), BuildMode::Strict) {
        Err(IngestError::Invalid(report)) => report.errors.iter().map(|e| e.to_string()).collect(),
        other => panic!("expected a validation failure, got {other:?}"),
    }
}

fn append(line: &'static str) -> impl FnOnce(String) -> String {
    move |s| s + line
}

fn line_count(file: &str) -> usize {
    let d = random_dataset(11, Shape::MEDIUM);
    let dir = tempdir().unwrap();
    ingest::save(&d, dir.path()).unwrap();
    fs::read_to_string(dir.path().join(file)).unwrap().lines().count()
}

#[test]
fn malformed_rows_report_file_and_line() {
    let cases: Vec<(&str, Box<dyn FnOnce(String) -> String>)> = vec![
        ("users.tsv", Box::new(append("abc\t0\n"))),
        ("users.tsv", Box::new(append("999999\t2\n"))),
        ("users.tsv", Box::new(append("-4\t1\n"))),
        ("photos.tsv", Box::new(append("77777\t1\n"))),
        ("contacts.tsv", Box::new(append("1\t2\t3\n"))),
        ("comments.tsv", Box::new(append("1\t\t5\n"))),
        ("favorites.tsv", Box::new(append("1\t99999999999999999999999\n"))),
        ("memberships.tsv", Box::new(append("1\t2\r\n"))),
        ("photos.tsv", Box::new(append("77777\t4242424242\tdangling owner\n"))),
    ];
    for (file, edit) in cases {
        let line = line_count(file) + 1;
        let errors = corrupt(file, edit);
        let prefix = format!("{file}:{line}: ");
        assert!(errors.iter().any(|e| e.starts_with(&prefix)), "{file}: {errors:?}");
    }
}

#[test]
fn bad_header_is_line_one() {
    let errors = corrupt("groups.tsv", |s| s.replacen("group_id", "gid", 1));
    assert!(errors[0].starts_with("groups.tsv:1: "), "{errors:?}");
}

#[test]
fn empty_file_lacks_header() {
    let errors = corrupt("pool.tsv", |_| String::new());
    assert_eq!(errors, vec!["pool.tsv:1: missing header row".to_string()]);
}

#[test]
fn lenient_load_keeps_valid_rows() {
    let d = random_dataset(5, Shape::MEDIUM);
    let dir = tempdir().unwrap();
    ingest::save(&d, dir.path()).unwrap();
    let path = dir.path().join("users.tsv");
    let body = fs::read_to_string(&path).unwrap() + "junk\n";
    fs::write(&path, body).unwrap();
    let (loaded, report) = ingest::load(dir.path(), BuildMode::Lenient).unwrap();
    assert_eq!(loaded, d);
    assert_eq!(report.errors.len(), 1);
}

#[test]
fn unrepresentable_text_is_refused() {
    let mut r = photosocial::Records::default();
    r.users.push(photosocial::dataset::User { id: photosocial::UserId(1), is_pro: false });
    r.photos.push(photosocial::dataset::Photo {
        id: photosocial::PhotoId(2),
        owner: photosocial::UserId(1),
        title: "two\tcolumns".into(),
    });
    let d = Dataset::from_records(r).unwrap();
    let dir = tempdir().unwrap();
    assert!(matches!(ingest::save(&d, dir.path()), Err(IngestError::Unrepresentable { .. })));
}
