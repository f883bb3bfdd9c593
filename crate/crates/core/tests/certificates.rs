//! Stored certificates for the known bound lines.
//!
//! Set `CIRCUIT_WRITE_FIXTURES=1` to regenerate the files.

use std::path::PathBuf;

use circuit_core::bounds::{implies, known_lines, Certificate, Verdict};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("certificates")
}

fn fresh(name: &str) -> Certificate {
    let named = known_lines().into_iter().find(|l| l.name == name).unwrap();
    match implies(&named.system.build(), &named.line, &[]).unwrap() {
        Verdict::Implied(mut c) => {
            c.note = named.note.map(str::to_string);
            c
        }
        Verdict::Refuted(r) => panic!("{name} refuted at {:?}", r.point),
    }
}

#[test]
fn fixtures_match_and_verify() {
    let dir = fixture_dir();
    let write = std::env::var("CIRCUIT_WRITE_FIXTURES").is_ok_and(|v| v == "1");
    if write {
        std::fs::create_dir_all(&dir).unwrap();
    }
    for named in known_lines() {
        let path = dir.join(format!("{}.json", named.name));
        let cert = fresh(named.name);
        if write {
            std::fs::write(&path, cert.to_json() + "\n").unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let stored = Certificate::from_json(&text).unwrap();
        stored.verify().unwrap_or_else(|e| panic!("{}: {e}", named.name));
        assert_eq!(stored, cert, "{} differs from a fresh run", named.name);
    }
}

#[test]
fn round_trip_fixtures_record_the_sign() {
    for name in ["rt", "rt-late", "rt-late-swapped"] {
        let text = std::fs::read_to_string(fixture_dir().join(format!("{name}.json"))).unwrap();
        let stored = Certificate::from_json(&text).unwrap();
        assert!(stored.note.as_deref().unwrap_or("").contains("t <="), "{name}");
    }
}
