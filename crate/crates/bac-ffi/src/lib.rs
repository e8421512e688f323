//! C ABI for the consistency checker, so other languages can bind.
//!
//! The surface follows the usual opaque-handle pattern: a catalog handle is
//! created, queried, and freed; check functions take file paths and return
//! newly-allocated JSON strings that the caller releases with
//! [`bac_string_free`]. On failure they return NULL and the error is
//! available through [`bac_last_error_message`] / [`bac_last_error_code`]
//! (per thread, valid until the next failing call).

use std::cell::RefCell;
use std::collections::HashMap;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::path::Path;

use bac_core::guicheck::{assess_final_gui, load_page_map, GuiAssessOptions, StaticDomRunner};
use bac_core::ontology::{default_catalog, load_catalog, OntologyCatalog};
use bac_core::protocheck::{assess_prototype, default_mapping, load_mapping, load_prototype};
use bac_core::report::{emit_json_report, StepResult};
use bac_core::story::{load_story, parse_story};
use bac_core::taskcheck::{assess_task_scenarios, load_scenarios, TaskAssessOptions};
use bac_core::RunMode;

/// Error category of the most recent failing call on this thread.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BacErrorCode {
    BacOk = 0,
    BacInvalidArgument = 1,
    BacParseError = 2,
    BacIoError = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<(BacErrorCode, Option<CString>)> =
        const { RefCell::new((BacErrorCode::BacOk, None)) };
}

fn set_error(code: BacErrorCode, message: &str) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = (code, Some(message)));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = (BacErrorCode::BacOk, None));
}

fn classify_error(err: &bac_core::Error) -> BacErrorCode {
    match err {
        bac_core::Error::Io { .. } => BacErrorCode::BacIoError,
        bac_core::Error::Config(_) => BacErrorCode::BacInvalidArgument,
        _ => BacErrorCode::BacParseError,
    }
}

/// Opaque catalog handle.
pub struct BacCatalog {
    inner: CatalogInner,
}

enum CatalogInner {
    Owned(OntologyCatalog),
    Shared(&'static OntologyCatalog),
}

impl BacCatalog {
    fn get(&self) -> &OntologyCatalog {
        match &self.inner {
            CatalogInner::Owned(c) => c,
            CatalogInner::Shared(c) => c,
        }
    }
}

/// # Safety
/// `ptr` must be NULL or a NUL-terminated C string valid for the call.
unsafe fn opt_str<'a>(ptr: *const c_char) -> Result<Option<&'a str>, ()> {
    if ptr.is_null() {
        return Ok(None);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(Some(s)),
        Err(_) => {
            set_error(BacErrorCode::BacInvalidArgument, "string is not valid UTF-8");
            Err(())
        }
    }
}

/// # Safety
/// As [`opt_str`], but NULL is an error.
unsafe fn req_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, ()> {
    match opt_str(ptr)? {
        Some(s) => Ok(s),
        None => {
            set_error(
                BacErrorCode::BacInvalidArgument,
                &format!("{what} must not be NULL"),
            );
            Err(())
        }
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(std::ptr::null_mut())
}

fn results_to_json(results: &[StepResult]) -> *mut c_char {
    clear_error();
    into_c_string(emit_json_report(results))
}

/// Returns a handle to the embedded default catalog. Never fails.
#[no_mangle]
pub extern "C" fn bac_catalog_default() -> *mut BacCatalog {
    clear_error();
    Box::into_raw(Box::new(BacCatalog {
        inner: CatalogInner::Shared(default_catalog()),
    }))
}

/// Loads a catalog file. Returns NULL on failure.
///
/// # Safety
/// `path` must be a NUL-terminated C string valid for the call.
#[no_mangle]
pub unsafe extern "C" fn bac_catalog_open(path: *const c_char) -> *mut BacCatalog {
    let Ok(path) = req_str(path, "path") else {
        return std::ptr::null_mut();
    };
    match load_catalog(Path::new(path)) {
        Ok(catalog) => {
            clear_error();
            Box::into_raw(Box::new(BacCatalog {
                inner: CatalogInner::Owned(catalog),
            }))
        }
        Err(e) => {
            set_error(classify_error(&e), &e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Frees a catalog handle. NULL is ignored.
///
/// # Safety
/// `catalog` must be NULL or a pointer returned by a `bac_catalog_*`
/// constructor, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bac_catalog_free(catalog: *mut BacCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Number of behavior records in the catalog; 0 for NULL.
///
/// # Safety
/// `catalog` must be NULL or a live catalog handle.
#[no_mangle]
pub unsafe extern "C" fn bac_catalog_behavior_count(catalog: *const BacCatalog) -> usize {
    if catalog.is_null() {
        return 0;
    }
    (*catalog).get().len()
}

/// Lints story source text against the catalog. Returns a JSON array of
/// findings (`file`, `line`, `step`, `reason`), or NULL on parse failure.
///
/// # Safety
/// `catalog` must be a live handle; `source` and `name` valid C strings
/// (`name` may be NULL).
#[no_mangle]
pub unsafe extern "C" fn bac_lint_story(
    catalog: *const BacCatalog,
    source: *const c_char,
    name: *const c_char,
) -> *mut c_char {
    if catalog.is_null() {
        set_error(BacErrorCode::BacInvalidArgument, "catalog must not be NULL");
        return std::ptr::null_mut();
    }
    let Ok(source) = req_str(source, "source") else {
        return std::ptr::null_mut();
    };
    let Ok(name) = opt_str(name) else {
        return std::ptr::null_mut();
    };
    let story = match parse_story(source, name.unwrap_or("<memory>")) {
        Ok(s) => s,
        Err(e) => {
            set_error(BacErrorCode::BacParseError, &e.to_string());
            return std::ptr::null_mut();
        }
    };
    let findings = bac_core::cli::lint_stories(std::slice::from_ref(&story), (*catalog).get());
    let json: Vec<serde_json::Value> = findings
        .iter()
        .map(|f| {
            serde_json::json!({
                "file": f.file,
                "line": f.line,
                "step": f.step_text,
                "reason": f.reason,
            })
        })
        .collect();
    clear_error();
    into_c_string(serde_json::to_string_pretty(&json).unwrap_or_default())
}

/// Assesses task-model scenarios. `models_path` may be NULL when every
/// scenario file is already enriched. Returns the JSON report or NULL.
///
/// # Safety
/// `catalog` must be a live handle; paths valid C strings.
#[no_mangle]
pub unsafe extern "C" fn bac_check_tasks(
    catalog: *const BacCatalog,
    story_path: *const c_char,
    scenarios_path: *const c_char,
    models_path: *const c_char,
) -> *mut c_char {
    if catalog.is_null() {
        set_error(BacErrorCode::BacInvalidArgument, "catalog must not be NULL");
        return std::ptr::null_mut();
    }
    let Ok(story_path) = req_str(story_path, "story_path") else {
        return std::ptr::null_mut();
    };
    let Ok(scenarios_path) = req_str(scenarios_path, "scenarios_path") else {
        return std::ptr::null_mut();
    };
    let Ok(models_path) = opt_str(models_path) else {
        return std::ptr::null_mut();
    };

    let run = || -> Result<Vec<StepResult>, bac_core::Error> {
        let story = load_story(Path::new(story_path))?;
        let models = match models_path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| bac_core::Error::Io {
                    path: p.to_string(),
                    source: e,
                })?;
                vec![bac_core::taskcheck::parse_task_model(&text, p)?]
            }
            None => Vec::new(),
        };
        let scenarios = load_scenarios(&[scenarios_path.into()], &models)?;
        let options = TaskAssessOptions::default().with_models(&models);
        Ok(assess_task_scenarios(&story, &scenarios, (*catalog).get(), &options).results)
    };
    match run() {
        Ok(results) => results_to_json(&results),
        Err(e) => {
            set_error(classify_error(&e), &e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Assesses a prototype file. `mapping_path` may be NULL for the embedded
/// mapping; `fail_fast` 0 assesses every step. Returns the JSON report or
/// NULL.
///
/// # Safety
/// `catalog` must be a live handle; paths valid C strings.
#[no_mangle]
pub unsafe extern "C" fn bac_check_prototype(
    catalog: *const BacCatalog,
    story_path: *const c_char,
    prototype_path: *const c_char,
    mapping_path: *const c_char,
    fail_fast: c_int,
) -> *mut c_char {
    if catalog.is_null() {
        set_error(BacErrorCode::BacInvalidArgument, "catalog must not be NULL");
        return std::ptr::null_mut();
    }
    let Ok(story_path) = req_str(story_path, "story_path") else {
        return std::ptr::null_mut();
    };
    let Ok(prototype_path) = req_str(prototype_path, "prototype_path") else {
        return std::ptr::null_mut();
    };
    let Ok(mapping_path) = opt_str(mapping_path) else {
        return std::ptr::null_mut();
    };

    let run = || -> Result<Vec<StepResult>, bac_core::Error> {
        let story = load_story(Path::new(story_path))?;
        let proto = load_prototype(Path::new(prototype_path))?;
        let mode = if fail_fast == 0 {
            RunMode::Continue
        } else {
            RunMode::FailFast
        };
        let results = match mapping_path {
            Some(p) => assess_prototype(
                &story,
                &proto,
                (*catalog).get(),
                &load_mapping(Path::new(p))?,
                mode,
            )?,
            None => assess_prototype(&story, &proto, (*catalog).get(), default_mapping(), mode)?,
        };
        Ok(results)
    };
    match run() {
        Ok(results) => results_to_json(&results),
        Err(e) => {
            set_error(classify_error(&e), &e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Assesses a final GUI behind a page map. `fail_fast` 0 assesses every
/// step; `seed` drives the data-generation behaviors. Returns the JSON
/// report or NULL.
///
/// # Safety
/// `catalog` must be a live handle; paths valid C strings.
#[no_mangle]
pub unsafe extern "C" fn bac_check_gui(
    catalog: *const BacCatalog,
    story_path: *const c_char,
    page_map_path: *const c_char,
    seed: u64,
    fail_fast: c_int,
) -> *mut c_char {
    if catalog.is_null() {
        set_error(BacErrorCode::BacInvalidArgument, "catalog must not be NULL");
        return std::ptr::null_mut();
    }
    let Ok(story_path) = req_str(story_path, "story_path") else {
        return std::ptr::null_mut();
    };
    let Ok(page_map_path) = req_str(page_map_path, "page_map_path") else {
        return std::ptr::null_mut();
    };

    let run = || -> Result<Vec<StepResult>, bac_core::Error> {
        let story = load_story(Path::new(story_path))?;
        let page_map = load_page_map(Path::new(page_map_path))?;
        let options = GuiAssessOptions {
            mode: if fail_fast == 0 {
                RunMode::Continue
            } else {
                RunMode::FailFast
            },
            seed,
            dataset: HashMap::new(),
            ..Default::default()
        };
        let mut runner = StaticDomRunner::new(page_map.clone());
        Ok(assess_final_gui(
            &story,
            &page_map,
            (*catalog).get(),
            &mut runner,
            &options,
        ))
    };
    match run() {
        Ok(results) => results_to_json(&results),
        Err(e) => {
            set_error(classify_error(&e), &e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Exit-code semantics over a JSON report produced by the check functions:
/// 0 consistent, 1 inconsistencies present, 2 unparsable report.
///
/// # Safety
/// `report_json` must be a valid C string.
#[no_mangle]
pub unsafe extern "C" fn bac_report_exit_code(report_json: *const c_char) -> c_int {
    let Ok(json) = req_str(report_json, "report_json") else {
        return 2;
    };
    let Ok(report) = serde_json::from_str::<bac_core::report::JsonReport>(json) else {
        set_error(BacErrorCode::BacParseError, "report JSON did not parse");
        return 2;
    };
    let summary = report.summary;
    let blocking = summary.task_model.inconsistent
        + summary.prototype.inconsistent
        + summary.final_gui.inconsistent
        + summary.task_model.unrecognized
        + summary.prototype.unrecognized
        + summary.final_gui.unrecognized;
    clear_error();
    if blocking > 0 {
        1
    } else {
        0
    }
}

/// Error category of the most recent failing call on this thread.
#[no_mangle]
pub extern "C" fn bac_last_error_code() -> BacErrorCode {
    LAST_ERROR.with(|slot| slot.borrow().0)
}

/// Message of the most recent failing call on this thread, or NULL. The
/// pointer is valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bac_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .1
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a pointer returned by one of the JSON-returning
/// functions, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
