//! Exercises the C surface end to end from Rust: handles, error codes,
//! report strings, and the generated header's presence.

use std::ffi::{CStr, CString};
use std::path::PathBuf;

use bac_ffi::*;

fn fixture(rel: &str) -> CString {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../bac-core/tests/fixtures")
        .join(rel);
    CString::new(path.display().to_string()).unwrap()
}

#[test]
fn default_catalog_reports_its_size() {
    unsafe {
        let catalog = bac_catalog_default();
        assert!(!catalog.is_null());
        assert_eq!(bac_catalog_behavior_count(catalog), 62);
        bac_catalog_free(catalog);
    }
}

#[test]
fn opening_a_missing_catalog_sets_the_error() {
    unsafe {
        let path = CString::new("/nonexistent/catalog.toml").unwrap();
        let catalog = bac_catalog_open(path.as_ptr());
        assert!(catalog.is_null());
        assert_eq!(bac_last_error_code(), BacErrorCode::BacIoError);
        let message = bac_last_error_message();
        assert!(!message.is_null());
        let text = CStr::from_ptr(message).to_string_lossy();
        assert!(text.contains("catalog.toml"), "{text}");
    }
}

#[test]
fn lint_returns_findings_as_json() {
    unsafe {
        let catalog = bac_catalog_default();
        let source = CString::new(
            "T\nScenario: S\nGiven I go to \"X\"\nWhen I set the date \"1\" in the field \"F\"\n",
        )
        .unwrap();
        let name = CString::new("t.story").unwrap();
        let json = bac_lint_story(catalog, source.as_ptr(), name.as_ptr());
        assert!(!json.is_null());
        let text = CStr::from_ptr(json).to_str().unwrap();
        let findings: serde_json::Value = serde_json::from_str(text).unwrap();
        let list = findings.as_array().unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(list[0]["line"], 4);
        bac_string_free(json);
        bac_catalog_free(catalog);
    }
}

#[test]
fn prototype_check_round_trips_through_the_report() {
    unsafe {
        let catalog = bac_catalog_default();
        let story = fixture("table2/flight_tickets_search.story");
        let proto = fixture("table2/three_searchboxes.bmml");
        let json = bac_check_prototype(
            catalog,
            story.as_ptr(),
            proto.as_ptr(),
            std::ptr::null(),
            0,
        );
        assert!(!json.is_null(), "error: {:?}", unsafe_error_text());
        assert_eq!(bac_report_exit_code(json), 1);
        bac_string_free(json);
        bac_catalog_free(catalog);
    }
}

#[test]
fn gui_check_is_seed_deterministic() {
    unsafe {
        let catalog = bac_catalog_default();
        let story = fixture("table2/flight_search_gui.story");
        let map = fixture("table2/pagemap.toml");
        let a = bac_check_gui(catalog, story.as_ptr(), map.as_ptr(), 0, 1);
        let b = bac_check_gui(catalog, story.as_ptr(), map.as_ptr(), 0, 1);
        assert!(!a.is_null() && !b.is_null(), "error: {:?}", unsafe_error_text());
        assert_eq!(CStr::from_ptr(a).to_bytes(), CStr::from_ptr(b).to_bytes());
        bac_string_free(a);
        bac_string_free(b);
        bac_catalog_free(catalog);
    }
}

#[test]
fn task_check_accepts_models() {
    unsafe {
        let catalog = bac_catalog_default();
        let story = fixture("table2/flight_tickets_search.story");
        let scenarios = fixture("table2/roundtrip.scen");
        let models = fixture("table2/booking.hmst");
        let json = bac_check_tasks(catalog, story.as_ptr(), scenarios.as_ptr(), models.as_ptr());
        assert!(!json.is_null(), "error: {:?}", unsafe_error_text());
        assert_eq!(bac_report_exit_code(json), 1);
        bac_string_free(json);
        bac_catalog_free(catalog);
    }
}

#[test]
fn null_arguments_are_rejected() {
    unsafe {
        let catalog = bac_catalog_default();
        let json = bac_check_gui(catalog, std::ptr::null(), std::ptr::null(), 0, 1);
        assert!(json.is_null());
        assert_eq!(bac_last_error_code(), BacErrorCode::BacInvalidArgument);
        bac_catalog_free(catalog);
    }
}

#[test]
fn header_is_generated() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/bac.h");
    let text = std::fs::read_to_string(header).expect("header should exist after build");
    assert!(text.contains("typedef struct BacCatalog BacCatalog;"));
    assert!(text.contains("bac_check_gui"));
}

fn unsafe_error_text() -> String {
    unsafe {
        let message = bac_last_error_message();
        if message.is_null() {
            "<none>".to_string()
        } else {
            CStr::from_ptr(message).to_string_lossy().into_owned()
        }
    }
}
