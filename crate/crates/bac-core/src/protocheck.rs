//! Wireframe prototype assessment.
//!
//! Prototype XML files carry a flat list of `<control>` elements; a control
//! either stands alone or belongs to a group identified by the `isInGroup`
//! attribute, where a label carries the field name on behalf of a sibling
//! element. For each step, the assessor counts the controls representing
//! the step's field among the ontology-supported element types: exactly one
//! match passes.

use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;

use thiserror::Error;

use crate::ontology::{OntologyCatalog, Platform, StepBinding};
use crate::report::{
    Artifact, FailureSignal, ProtoFailure, Status, StepResult,
};
use crate::story::{Keyword, Story};
use crate::text::{is_near_name, match_key, percent_decode};
use crate::RunMode;

/// The shipped element mapping, embedded alongside the catalog.
pub const DEFAULT_MAPPING: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/balsamiq.mapping"));

const LABEL_TYPE_SUFFIX: &str = "::Label";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrototypeControl {
    pub control_id: String,
    /// Namespaced control type id, e.g. `com.balsamiq.mockups::TextInput`.
    pub control_type: String,
    /// Percent-decoded contents of the `<text>` property.
    pub text: Option<String>,
    /// Group membership; `None` when absent or `-1`.
    pub group_id: Option<String>,
}

impl PrototypeControl {
    fn is_label(&self) -> bool {
        self.control_type.ends_with(LABEL_TYPE_SUFFIX)
    }

    fn text_matches(&self, key: &str) -> bool {
        self.text
            .as_deref()
            .map(|t| match_key(t) == key)
            .unwrap_or(false)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Prototype {
    pub controls: Vec<PrototypeControl>,
    pub source_path: String,
    pub mockup_name: String,
    /// Controls whose text property contained invalid percent escapes.
    pub decode_warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum PrototypeError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{origin}: {message}")]
    Mapping { origin: String, message: String },
    #[error("element type {element:?} (behavior {behavior:?}) has no mapping entry")]
    MappingGap { element: String, behavior: String },
}

/// Parses a prototype XML file.
pub fn parse_prototype(text: &str, path: &str) -> Result<Prototype, PrototypeError> {
    let doc = roxmltree::Document::parse(text).map_err(|e| PrototypeError::Parse {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    let root = doc.root_element();
    let mockup_name = root
        .attribute("name")
        .map(str::to_string)
        .unwrap_or_else(|| {
            std::path::Path::new(path)
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("")
                .to_string()
        });

    let mut controls = Vec::new();
    let mut decode_warnings = Vec::new();
    let mut seen_ids = HashSet::new();
    for node in doc.descendants().filter(|n| n.has_tag_name("control")) {
        let control_id = node
            .attribute("controlID")
            .ok_or_else(|| PrototypeError::Parse {
                path: path.to_string(),
                message: "<control> element missing controlID".to_string(),
            })?
            .to_string();
        if !seen_ids.insert(control_id.clone()) {
            return Err(PrototypeError::Parse {
                path: path.to_string(),
                message: format!("duplicate controlID {control_id:?}"),
            });
        }
        let control_type = node
            .attribute("controlTypeID")
            .ok_or_else(|| PrototypeError::Parse {
                path: path.to_string(),
                message: format!("control {control_id:?} missing controlTypeID"),
            })?
            .to_string();
        let group_id = node
            .attribute("isInGroup")
            .filter(|v| *v != "-1" && !v.is_empty())
            .map(str::to_string);
        let text = node
            .children()
            .find(|c| c.has_tag_name("controlProperties"))
            .and_then(|props| props.children().find(|c| c.has_tag_name("text")))
            .and_then(|t| t.text())
            .map(|raw| {
                let (decoded, warned) = percent_decode(raw);
                if warned {
                    decode_warnings.push(format!(
                        "control {control_id}: invalid percent escape in text {raw:?}"
                    ));
                }
                decoded
            });
        controls.push(PrototypeControl {
            control_id,
            control_type,
            text,
            group_id,
        });
    }
    Ok(Prototype {
        controls,
        source_path: path.to_string(),
        mockup_name,
        decode_warnings,
    })
}

/// Loads a prototype file from disk.
pub fn load_prototype(path: &std::path::Path) -> Result<Prototype, crate::Error> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_prototype(&text, &path.display().to_string()).map_err(Into::into)
}

/// Mapping from catalog element names to concrete control type ids
/// (`*` matches any type).
#[derive(Debug, Clone, Default)]
pub struct ConcreteMapping {
    entries: BTreeMap<String, Vec<String>>,
}

impl ConcreteMapping {
    pub fn get(&self, element: &str) -> Option<&[String]> {
        self.entries.get(element).map(Vec::as_slice)
    }

    /// Resolves a set of catalog element names to a concrete type filter.
    /// Fails on the first name with no mapping entry.
    pub fn type_filter(
        &self,
        elements: &[String],
        behavior: &str,
    ) -> Result<TypeFilter, PrototypeError> {
        let mut filter = TypeFilter::default();
        for element in elements {
            let ids = self
                .entries
                .get(element)
                .ok_or_else(|| PrototypeError::MappingGap {
                    element: element.clone(),
                    behavior: behavior.to_string(),
                })?;
            for id in ids {
                if id == "*" {
                    filter.wildcard = true;
                } else {
                    filter.ids.insert(id.clone());
                }
            }
        }
        Ok(filter)
    }
}

/// Concrete control types admitted for a step.
#[derive(Debug, Clone, Default)]
pub struct TypeFilter {
    pub wildcard: bool,
    pub ids: HashSet<String>,
}

impl TypeFilter {
    pub fn admits(&self, control_type: &str) -> bool {
        self.wildcard || self.ids.contains(control_type)
    }
}

/// Parses a mapping file (`name = id[, id...]` records, `#` comments).
pub fn parse_mapping(text: &str, origin: &str) -> Result<ConcreteMapping, PrototypeError> {
    let mut entries = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((name, ids)) = line.split_once('=') else {
            return Err(PrototypeError::Mapping {
                origin: origin.to_string(),
                message: format!("line {}: expected `name = id[, id...]`", i + 1),
            });
        };
        let name = name.trim().to_string();
        let ids: Vec<String> = ids
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if name.is_empty() || ids.is_empty() {
            return Err(PrototypeError::Mapping {
                origin: origin.to_string(),
                message: format!("line {}: empty element name or id list", i + 1),
            });
        }
        entries.insert(name, ids);
    }
    Ok(ConcreteMapping { entries })
}

/// Loads a mapping file from disk.
pub fn load_mapping(path: &std::path::Path) -> Result<ConcreteMapping, crate::Error> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_mapping(&text, &path.display().to_string()).map_err(Into::into)
}

/// The embedded default mapping.
pub fn default_mapping() -> &'static ConcreteMapping {
    static MAPPING: OnceLock<ConcreteMapping> = OnceLock::new();
    MAPPING.get_or_init(|| {
        parse_mapping(DEFAULT_MAPPING, "<default mapping>")
            .expect("embedded default mapping must be valid")
    })
}

/// Counts the prototype elements representing `field_name`:
/// ungrouped controls whose text equals the name and whose type is
/// admitted, plus one per (group, matching label) pair where some sibling
/// in the group has an admitted type.
pub fn count_matching_elements(
    field_name: &str,
    filter: &TypeFilter,
    proto: &Prototype,
) -> usize {
    let key = match_key(field_name);
    let mut count = 0usize;

    for control in &proto.controls {
        if control.group_id.is_none() && control.text_matches(&key) && filter.admits(&control.control_type)
        {
            count += 1;
        }
    }

    for control in &proto.controls {
        let Some(group) = &control.group_id else {
            continue;
        };
        if !control.is_label() || !control.text_matches(&key) {
            continue;
        }
        let supported_sibling = proto.controls.iter().any(|c| {
            c.control_id != control.control_id
                && c.group_id.as_deref() == Some(group.as_str())
                && filter.admits(&c.control_type)
        });
        if supported_sibling {
            count += 1;
        }
    }

    count
}

/// Count under the looser rule where any grouped control with matching text
/// counts when some member of its group (itself included) has an admitted
/// type. Reported alongside the main count when the two disagree on the
/// verdict.
pub fn count_matching_elements_groupwise(
    field_name: &str,
    filter: &TypeFilter,
    proto: &Prototype,
) -> usize {
    let key = match_key(field_name);
    let mut count = 0usize;
    for control in &proto.controls {
        if !control.text_matches(&key) {
            continue;
        }
        match &control.group_id {
            None => {
                if filter.admits(&control.control_type) {
                    count += 1;
                }
            }
            Some(group) => {
                let member_supported = proto.controls.iter().any(|c| {
                    c.group_id.as_deref() == Some(group.as_str())
                        && filter.admits(&c.control_type)
                });
                if member_supported {
                    count += 1;
                }
            }
        }
    }
    count
}

/// How the prototype assessor treats a behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtoBehaviorClass {
    /// Count name-matching controls among the supported types.
    Presence,
    /// Compare page names (window controls or the mockup's own name).
    PageIdentity,
    /// Outcome assertions: untraceable on a static prototype.
    Untraceable,
    /// Count dialog controls (no field name to match).
    DialogPresence,
    /// No element column: nothing to assess.
    NoElement,
}

/// Derives the assessment class from the catalog record itself.
pub fn behavior_class(catalog: &OntologyCatalog, behavior_id: &str) -> ProtoBehaviorClass {
    let Some(entry) = catalog.entry(behavior_id) else {
        return ProtoBehaviorClass::NoElement;
    };
    if entry.elements.iter().all(|t| t.prototype.is_none()) {
        return ProtoBehaviorClass::NoElement;
    }
    let abstracts: Vec<&str> = entry
        .elements
        .iter()
        .map(|t| t.abstract_element.as_str())
        .collect();
    if abstracts.contains(&"Browser Window") {
        return ProtoBehaviorClass::PageIdentity;
    }
    let then_only = entry.keywords.len() == 1 && entry.keywords.contains(&Keyword::Then);
    if then_only {
        return ProtoBehaviorClass::Untraceable;
    }
    if abstracts.contains(&"Window Dialog") {
        return ProtoBehaviorClass::DialogPresence;
    }
    ProtoBehaviorClass::Presence
}

fn control_snapshot(proto: &Prototype) -> String {
    let mut out = format!("mockup {:?}\n", proto.mockup_name);
    for c in &proto.controls {
        out.push_str(&format!(
            "control {} type={} text={:?} group={}\n",
            c.control_id,
            c.control_type,
            c.text.as_deref().unwrap_or(""),
            c.group_id.as_deref().unwrap_or("-")
        ));
    }
    out
}

fn short_type(control_type: &str) -> &str {
    control_type
        .rsplit_once("::")
        .map(|(_, t)| t)
        .unwrap_or(control_type)
}

/// Evidence gathered for a zero-count failure.
fn zero_count_signal(
    field: &str,
    filter: &TypeFilter,
    proto: &Prototype,
) -> ProtoFailure {
    let key = match_key(field);
    let incompatible_type = proto
        .controls
        .iter()
        .find(|c| !c.is_label() && c.text_matches(&key) && !filter.admits(&c.control_type))
        .map(|c| short_type(&c.control_type).to_string());
    let split_label = proto.controls.iter().any(|c| c.is_label() && c.text_matches(&key))
        && proto.controls.iter().any(|c| filter.admits(&c.control_type) && !c.is_label());
    let near_name = proto
        .controls
        .iter()
        .filter_map(|c| c.text.as_deref())
        .find(|t| is_near_name(t, field))
        .map(str::to_string);
    ProtoFailure::Count {
        field: field.to_string(),
        count: 0,
        incompatible_type,
        split_label,
        near_name,
    }
}

/// Runs every scenario of the story against the prototype. In fail-fast
/// mode a scenario stops at its first failed (or unrecognized) step and the
/// remaining steps are reported as not performed.
pub fn assess_prototype(
    story: &Story,
    proto: &Prototype,
    catalog: &OntologyCatalog,
    mapping: &ConcreteMapping,
    mode: RunMode,
) -> Result<Vec<StepResult>, PrototypeError> {
    let mut results = Vec::new();

    for scenario in &story.scenarios {
        let mut stopped = false;
        for step in &scenario.steps {
            let make = |status: Status, evidence: String| {
                StepResult::new(
                    &story.title,
                    &scenario.title,
                    &step.text,
                    Artifact::Prototype,
                    status,
                    evidence,
                )
            };
            if stopped {
                results.push(make(Status::NotPerformed, String::new()));
                continue;
            }
            let binding: Option<StepBinding> = match catalog.match_step(step) {
                Ok(b) => b,
                Err(e) => {
                    results.push(make(Status::Unrecognized, e.to_string()));
                    if mode == RunMode::FailFast {
                        stopped = true;
                    }
                    continue;
                }
            };
            let Some(binding) = binding else {
                results.push(make(Status::Unrecognized, "no step is matching".to_string()));
                if mode == RunMode::FailFast {
                    stopped = true;
                }
                continue;
            };

            let class = behavior_class(catalog, &binding.behavior_id);
            let target = catalog.target_argument(&binding).unwrap_or_default();
            let result = match class {
                ProtoBehaviorClass::NoElement => {
                    make(Status::Skipped, "behavior has no prototype element to assess".into())
                }
                ProtoBehaviorClass::Untraceable => {
                    let signal = FailureSignal::Proto(ProtoFailure::Untraceable {
                        content: target.clone(),
                    });
                    let mut r = make(Status::Passed, "Expected: 1 | Actual: 0".into())
                        .failed(&signal);
                    r.evidence = format!("{} | {}", r.evidence, signal);
                    r.with_snapshot(control_snapshot(proto))
                }
                ProtoBehaviorClass::PageIdentity => {
                    let supported =
                        catalog.supported_elements(&binding.behavior_id, Platform::Prototype)
                            .expect("behavior id comes from this catalog");
                    let filter = mapping.type_filter(&supported, &binding.behavior_id)?;
                    let key = match_key(&target);
                    let mut count = proto
                        .controls
                        .iter()
                        .filter(|c| filter.admits(&c.control_type) && c.text_matches(&key))
                        .count();
                    if count == 0 && match_key(&proto.mockup_name) == key {
                        count = 1;
                    }
                    let evidence = format!("Expected: 1 | Actual: {count}");
                    match count {
                        1 => make(Status::Passed, evidence),
                        0 => {
                            let signal = FailureSignal::Proto(ProtoFailure::PageMismatch {
                                expected: target.clone(),
                                actual: Some(proto.mockup_name.clone()),
                            });
                            let mut r = make(Status::Passed, evidence).failed(&signal);
                            r.evidence = format!("{} | {}", r.evidence, signal);
                            r.with_snapshot(control_snapshot(proto))
                        }
                        n => {
                            let signal = FailureSignal::Proto(ProtoFailure::Count {
                                field: target.clone(),
                                count: n,
                                incompatible_type: None,
                                split_label: false,
                                near_name: None,
                            });
                            let mut r = make(Status::Passed, evidence).failed(&signal);
                            r.evidence = format!("{} | {}", r.evidence, signal);
                            r.with_snapshot(control_snapshot(proto))
                        }
                    }
                }
                ProtoBehaviorClass::DialogPresence => {
                    let supported =
                        catalog.supported_elements(&binding.behavior_id, Platform::Prototype)
                            .expect("behavior id comes from this catalog");
                    let filter = mapping.type_filter(&supported, &binding.behavior_id)?;
                    let count = proto
                        .controls
                        .iter()
                        .filter(|c| filter.admits(&c.control_type))
                        .count();
                    let evidence = format!("Expected: 1 | Actual: {count}");
                    if count == 1 {
                        make(Status::Passed, evidence)
                    } else {
                        let signal = FailureSignal::Proto(ProtoFailure::Count {
                            field: "dialog box".to_string(),
                            count,
                            incompatible_type: None,
                            split_label: false,
                            near_name: None,
                        });
                        let mut r = make(Status::Passed, evidence).failed(&signal);
                        r.evidence = format!("{} | {}", r.evidence, signal);
                        r.with_snapshot(control_snapshot(proto))
                    }
                }
                ProtoBehaviorClass::Presence => {
                    let supported =
                        catalog.supported_elements(&binding.behavior_id, Platform::Prototype)
                            .expect("behavior id comes from this catalog");
                    let filter = mapping.type_filter(&supported, &binding.behavior_id)?;
                    let count = count_matching_elements(&target, &filter, proto);
                    let mut evidence = format!("Expected: 1 | Actual: {count}");
                    let alt = count_matching_elements_groupwise(&target, &filter, proto);
                    if (alt == 1) != (count == 1) {
                        evidence.push_str(&format!(
                            " | note: group-wise counting would find {alt}"
                        ));
                    }
                    if count == 1 {
                        make(Status::Passed, evidence)
                    } else {
                        let signal = FailureSignal::Proto(if count == 0 {
                            zero_count_signal(&target, &filter, proto)
                        } else {
                            ProtoFailure::Count {
                                field: target.clone(),
                                count,
                                incompatible_type: None,
                                split_label: false,
                                near_name: None,
                            }
                        });
                        let mut r = make(Status::Passed, evidence).failed(&signal);
                        r.evidence = format!("{} | {}", r.evidence, signal);
                        r.with_snapshot(control_snapshot(proto))
                    }
                }
            };

            let failed = result.status == Status::Failed;
            results.push(result);
            if failed && mode == RunMode::FailFast {
                stopped = true;
            }
        }
    }

    Ok(results)
}
