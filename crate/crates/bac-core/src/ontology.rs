//! The behavior catalog: a queryable table of interactive behaviors, each
//! pairing step phrase templates with canonical task templates and the
//! interaction elements that support the behavior on each platform.
//!
//! The catalog ships as a flat TOML file (see `data/catalog.toml`); the
//! default copy is embedded in the binary. Matching a step against the
//! catalog is case-insensitive on template literals, whitespace-normalized,
//! and binds the step's quoted arguments to template placeholders in order.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::story::{Keyword, Step};
use crate::text::match_key;

/// The shipped catalog, embedded so the tools work without a data directory.
pub const DEFAULT_CATALOG_TOML: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/catalog.toml"));

/// Artifact platform whose element column is being queried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Platform {
    Abstract,
    Prototype,
    FinalGui,
}

/// Behavior grouping, mirroring the catalog's section headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    CheckboxRadio,
    Common,
    DataGeneration,
    DataProvider,
    Debug,
    Dialog,
    MouseControl,
    Table,
}

impl Category {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "CheckboxRadio" => Category::CheckboxRadio,
            "Common" => Category::Common,
            "DataGeneration" => Category::DataGeneration,
            "DataProvider" => Category::DataProvider,
            "Debug" => Category::Debug,
            "Dialog" => Category::Dialog,
            "MouseControl" => Category::MouseControl,
            "Table" => Category::Table,
            _ => return None,
        })
    }
}

/// A step phrase template such as `I set "<value>" in the field "<fieldname>"`.
///
/// Placeholders are quoted `<name>` segments; everything else is literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTemplate {
    raw: String,
    /// Normalized literal chunks between quoted segments (placeholders + 1).
    literal_keys: Vec<String>,
    placeholders: Vec<String>,
}

impl StepTemplate {
    fn parse(raw: &str) -> Result<Self, String> {
        let parts: Vec<&str> = raw.split('"').collect();
        if parts.len().is_multiple_of(2) {
            return Err(format!("unterminated quote in step template: {raw}"));
        }
        let mut literal_keys = Vec::new();
        let mut placeholders = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            if i % 2 == 0 {
                literal_keys.push(match_key(part));
            } else {
                let name = part
                    .strip_prefix('<')
                    .and_then(|p| p.strip_suffix('>'))
                    .ok_or_else(|| {
                        format!("quoted segment \"{part}\" in template {raw:?} is not a <placeholder>")
                    })?;
                if name.trim().is_empty() {
                    return Err(format!("empty placeholder name in template {raw:?}"));
                }
                if placeholders.iter().any(|p| p == name) {
                    return Err(format!("placeholder <{name}> repeats in template {raw:?}"));
                }
                placeholders.push(name.to_string());
            }
        }
        Ok(StepTemplate {
            raw: raw.to_string(),
            literal_keys,
            placeholders,
        })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn placeholders(&self) -> &[String] {
        &self.placeholders
    }

    /// Matches the template against step text, returning the quoted argument
    /// values bound to placeholders in order.
    fn matches(&self, step_text: &str) -> Option<Vec<String>> {
        let parts: Vec<&str> = step_text.split('"').collect();
        if parts.len().is_multiple_of(2) {
            return None;
        }
        let quoted = parts.len() / 2;
        if quoted != self.placeholders.len() {
            return None;
        }
        let mut values = Vec::with_capacity(quoted);
        for (i, part) in parts.iter().enumerate() {
            if i % 2 == 0 {
                if match_key(part) != self.literal_keys[i / 2] {
                    return None;
                }
            } else {
                values.push(part.to_string());
            }
        }
        Some(values)
    }

    /// Renders the template with the given placeholder values, in order.
    pub fn render(&self, values: &[&str]) -> String {
        let mut out = String::new();
        let raw_literals: Vec<&str> = self
            .raw
            .split('"')
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .map(|(_, s)| s)
            .collect();
        for (i, lit) in raw_literals.iter().enumerate() {
            out.push_str(lit);
            if i < self.placeholders.len() {
                out.push('"');
                out.push_str(values.get(i).copied().unwrap_or(""));
                out.push('"');
            }
        }
        out
    }
}

/// A canonical task name template such as `Set <fieldname>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskTemplate {
    raw: String,
    placeholders: Vec<String>,
}

impl TaskTemplate {
    fn parse(raw: &str) -> Result<Self, String> {
        let mut placeholders = Vec::new();
        let mut rest = raw;
        while let Some(start) = rest.find('<') {
            let Some(len) = rest[start..].find('>') else {
                return Err(format!("unterminated placeholder in task template {raw:?}"));
            };
            placeholders.push(rest[start + 1..start + len].to_string());
            rest = &rest[start + len + 1..];
        }
        Ok(TaskTemplate {
            raw: raw.to_string(),
            placeholders,
        })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    fn render(&self, values: &HashMap<&str, &str>) -> String {
        let mut out = self.raw.clone();
        for name in &self.placeholders {
            if let Some(v) = values.get(name.as_str()) {
                out = out.replace(&format!("<{name}>"), v);
            }
        }
        out
    }
}

/// One element row: the abstract element plus its per-platform concrete
/// names. `None` where the catalog column shows no element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementTriple {
    pub abstract_element: String,
    pub prototype: Option<String>,
    pub final_gui: Option<String>,
}

/// One behavior record of the catalog.
#[derive(Debug, Clone)]
pub struct BehaviorEntry {
    pub id: String,
    pub category: Category,
    pub keywords: BTreeSet<Keyword>,
    pub step_templates: Vec<StepTemplate>,
    /// Alternative groups of task templates. The first group whose
    /// placeholders are all bound is the one a step expands to; groups with
    /// several templates expand to several ordered task names.
    pub task_groups: Vec<Vec<TaskTemplate>>,
    pub elements: Vec<ElementTriple>,
}

/// A project-specific phrasing mapped onto an existing behavior.
#[derive(Debug, Clone)]
pub struct AliasRecord {
    pub template: StepTemplate,
    pub keywords: BTreeSet<Keyword>,
    pub behavior: String,
}

/// A successful step-to-behavior match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepBinding {
    pub behavior_id: String,
    /// placeholder name -> bound argument value, in template order.
    pub values: Vec<(String, String)>,
    pub matched_template: StepTemplate,
    pub via_alias: bool,
}

impl StepBinding {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.values
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }

    fn value_map(&self) -> HashMap<&str, &str> {
        self.values
            .iter()
            .map(|(n, v)| (n.as_str(), v.as_str()))
            .collect()
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("{origin}: cannot parse catalog: {message}")]
    Parse { origin: String, message: String },
    #[error("{origin}: empty catalog (no behavior records)")]
    Empty { origin: String },
    #[error("{origin}: duplicate behavior id {id:?}")]
    DuplicateId { origin: String, id: String },
    #[error("{origin}: behavior {id:?}: {message}")]
    Invalid {
        origin: String,
        id: String,
        message: String,
    },
    #[error("{origin}: alias {step:?} references unknown behavior {behavior:?}")]
    UnknownAliasTarget {
        origin: String,
        step: String,
        behavior: String,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchError {
    #[error("step {step:?} matches more than one behavior: {candidates:?} (catalog defect)")]
    AmbiguousMatch {
        step: String,
        candidates: Vec<String>,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown behavior {0:?}")]
pub struct UnknownBehavior(pub String);

#[derive(Debug, Deserialize)]
struct RawTriple {
    ontology: String,
    #[serde(default)]
    prototype: Option<String>,
    #[serde(default)]
    final_gui: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawBehavior {
    id: String,
    category: String,
    keywords: Vec<String>,
    steps: Vec<String>,
    tasks: Vec<Vec<String>>,
    #[serde(default)]
    elements: Vec<RawTriple>,
}

#[derive(Debug, Deserialize)]
struct RawAlias {
    step: String,
    #[serde(default)]
    keywords: Option<Vec<String>>,
    behavior: String,
}

#[derive(Debug, Deserialize)]
struct RawCatalog {
    #[serde(default)]
    behavior: Vec<RawBehavior>,
    #[serde(default)]
    alias: Vec<RawAlias>,
}

/// The loaded, validated behavior catalog. Immutable after load; all
/// queries are read-only.
#[derive(Debug)]
pub struct OntologyCatalog {
    entries: Vec<BehaviorEntry>,
    by_id: HashMap<String, usize>,
    aliases: Vec<AliasRecord>,
}

fn parse_keywords(
    origin: &str,
    id: &str,
    words: &[String],
) -> Result<BTreeSet<Keyword>, CatalogError> {
    let mut out = BTreeSet::new();
    for w in words {
        let kw = match w.as_str() {
            "Given" => Keyword::Given,
            "When" => Keyword::When,
            "Then" => Keyword::Then,
            other => {
                return Err(CatalogError::Invalid {
                    origin: origin.to_string(),
                    id: id.to_string(),
                    message: format!("unknown keyword {other:?}"),
                })
            }
        };
        out.insert(kw);
    }
    if out.is_empty() {
        return Err(CatalogError::Invalid {
            origin: origin.to_string(),
            id: id.to_string(),
            message: "empty keyword set".to_string(),
        });
    }
    Ok(out)
}

/// Parses and validates catalog TOML. `origin` names the source for errors.
pub fn parse_catalog(text: &str, origin: &str) -> Result<OntologyCatalog, CatalogError> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| CatalogError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })?;
    if raw.behavior.is_empty() {
        return Err(CatalogError::Empty {
            origin: origin.to_string(),
        });
    }

    let mut entries = Vec::with_capacity(raw.behavior.len());
    let mut by_id = HashMap::new();
    for rb in raw.behavior {
        let invalid = |message: String| CatalogError::Invalid {
            origin: origin.to_string(),
            id: rb.id.clone(),
            message,
        };
        let category = Category::parse(&rb.category)
            .ok_or_else(|| invalid(format!("unknown category {:?}", rb.category)))?;
        let keywords = parse_keywords(origin, &rb.id, &rb.keywords)?;
        if rb.steps.is_empty() {
            return Err(invalid("no step templates".to_string()));
        }
        let step_templates = rb
            .steps
            .iter()
            .map(|s| StepTemplate::parse(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        if rb.tasks.is_empty() || rb.tasks.iter().any(|g| g.is_empty()) {
            return Err(invalid("task template groups must be non-empty".to_string()));
        }
        let task_groups = rb
            .tasks
            .iter()
            .map(|group| {
                group
                    .iter()
                    .map(|t| TaskTemplate::parse(t))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        // every task placeholder must be bindable from some step template
        for group in &task_groups {
            for tt in group {
                for ph in &tt.placeholders {
                    let known = step_templates
                        .iter()
                        .any(|st| st.placeholders.iter().any(|p| p == ph));
                    if !known {
                        return Err(invalid(format!(
                            "task template {:?} uses placeholder <{ph}> not present in any step template",
                            tt.raw
                        )));
                    }
                }
            }
        }
        let elements = rb
            .elements
            .iter()
            .map(|t| {
                if t.ontology.trim().is_empty() {
                    Err(invalid("element row with empty ontology column".to_string()))
                } else {
                    Ok(ElementTriple {
                        abstract_element: t.ontology.clone(),
                        prototype: t.prototype.clone(),
                        final_gui: t.final_gui.clone(),
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;

        let idx = entries.len();
        if by_id.insert(rb.id.clone(), idx).is_some() {
            return Err(CatalogError::DuplicateId {
                origin: origin.to_string(),
                id: rb.id,
            });
        }
        entries.push(BehaviorEntry {
            id: rb.id,
            category,
            keywords,
            step_templates,
            task_groups,
            elements,
        });
    }

    let mut aliases = Vec::with_capacity(raw.alias.len());
    for ra in raw.alias {
        let Some(&target_idx) = by_id.get(&ra.behavior) else {
            return Err(CatalogError::UnknownAliasTarget {
                origin: origin.to_string(),
                step: ra.step,
                behavior: ra.behavior,
            });
        };
        let template = StepTemplate::parse(&ra.step).map_err(|message| CatalogError::Invalid {
            origin: origin.to_string(),
            id: ra.behavior.clone(),
            message,
        })?;
        let keywords = match &ra.keywords {
            Some(words) => parse_keywords(origin, &ra.behavior, words)?,
            None => entries[target_idx].keywords.clone(),
        };
        // the target must have a task group renderable from the alias bindings
        let coverable = entries[target_idx].task_groups.iter().any(|group| {
            group.iter().all(|tt| {
                tt.placeholders
                    .iter()
                    .all(|ph| template.placeholders.iter().any(|p| p == ph))
            })
        });
        if !coverable {
            return Err(CatalogError::Invalid {
                origin: origin.to_string(),
                id: ra.behavior.clone(),
                message: format!(
                    "alias {:?} does not bind the placeholders of any task group of {:?}",
                    template.raw, ra.behavior
                ),
            });
        }
        aliases.push(AliasRecord {
            template,
            keywords,
            behavior: ra.behavior,
        });
    }

    Ok(OntologyCatalog {
        entries,
        by_id,
        aliases,
    })
}

/// Loads a catalog file from disk.
pub fn load_catalog(path: &std::path::Path) -> Result<OntologyCatalog, crate::Error> {
    let text = std::fs::read_to_string(path).map_err(|e| crate::Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_catalog(&text, &path.display().to_string()).map_err(Into::into)
}

/// The embedded default catalog.
pub fn default_catalog() -> &'static OntologyCatalog {
    static CATALOG: OnceLock<OntologyCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        parse_catalog(DEFAULT_CATALOG_TOML, "<default catalog>")
            .expect("embedded default catalog must be valid")
    })
}

impl OntologyCatalog {
    pub fn entries(&self) -> &[BehaviorEntry] {
        &self.entries
    }

    pub fn aliases(&self) -> &[AliasRecord] {
        &self.aliases
    }

    pub fn entry(&self, id: &str) -> Option<&BehaviorEntry> {
        self.by_id.get(id).map(|&i| &self.entries[i])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matches a parsed step against the catalog. Returns the unique binding
    /// whose template literals equal the step text and whose keyword set
    /// admits the step's resolved keyword; `None` when nothing matches.
    pub fn match_step(&self, step: &Step) -> Result<Option<StepBinding>, MatchError> {
        let mut found: Option<StepBinding> = None;
        let mut candidates: Vec<String> = Vec::new();

        let consider = |behavior_id: &str,
                            template: &StepTemplate,
                            keywords: &BTreeSet<Keyword>,
                            via_alias: bool,
                            found: &mut Option<StepBinding>,
                            candidates: &mut Vec<String>| {
            if !keywords.contains(&step.keyword) {
                return;
            }
            if let Some(values) = template.matches(&step.text) {
                if let Some(existing) = found.as_ref() {
                    if existing.behavior_id != behavior_id {
                        if candidates.is_empty() {
                            candidates.push(existing.behavior_id.clone());
                        }
                        candidates.push(behavior_id.to_string());
                    }
                    return;
                }
                *found = Some(StepBinding {
                    behavior_id: behavior_id.to_string(),
                    values: template
                        .placeholders
                        .iter()
                        .cloned()
                        .zip(values)
                        .collect(),
                    matched_template: template.clone(),
                    via_alias,
                });
            }
        };

        for entry in &self.entries {
            for template in &entry.step_templates {
                consider(
                    &entry.id,
                    template,
                    &entry.keywords,
                    false,
                    &mut found,
                    &mut candidates,
                );
            }
        }
        for alias in &self.aliases {
            consider(
                &alias.behavior,
                &alias.template,
                &alias.keywords,
                true,
                &mut found,
                &mut candidates,
            );
        }

        if !candidates.is_empty() {
            return Err(MatchError::AmbiguousMatch {
                step: step.text.clone(),
                candidates,
            });
        }
        Ok(found)
    }

    /// Expands a binding into its canonical task names (one or two, per the
    /// selected task template group).
    pub fn derive_task_names(&self, binding: &StepBinding) -> Vec<String> {
        let Some(entry) = self.entry(&binding.behavior_id) else {
            return Vec::new();
        };
        let values = binding.value_map();
        let bound = |name: &String| values.contains_key(name.as_str());
        let group = entry
            .task_groups
            .iter()
            .find(|g| g.iter().all(|tt| tt.placeholders.iter().all(bound)))
            .or(entry.task_groups.first());
        match group {
            Some(g) => g.iter().map(|tt| tt.render(&values)).collect(),
            None => Vec::new(),
        }
    }

    /// Non-empty element names supporting the behavior on the platform, in
    /// catalog order, deduplicated.
    pub fn supported_elements(
        &self,
        behavior_id: &str,
        platform: Platform,
    ) -> Result<Vec<String>, UnknownBehavior> {
        let entry = self
            .entry(behavior_id)
            .ok_or_else(|| UnknownBehavior(behavior_id.to_string()))?;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for triple in &entry.elements {
            let value = match platform {
                Platform::Abstract => Some(&triple.abstract_element),
                Platform::Prototype => triple.prototype.as_ref(),
                Platform::FinalGui => triple.final_gui.as_ref(),
            };
            if let Some(v) = value {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
        }
        Ok(out)
    }

    /// The binding argument that names the UI element a step acts on: used
    /// by the prototype and final-GUI assessors to know what to look up.
    pub fn target_argument(&self, binding: &StepBinding) -> Option<String> {
        const PRIORITY: &[&str] = &[
            "fieldname",
            "address",
            "page",
            "tree",
            "table",
            "option",
            "content",
            "message",
            "variable",
            "value",
            "element",
        ];
        for name in PRIORITY {
            if let Some(v) = binding.get(name) {
                return Some(v.to_string());
            }
        }
        binding.values.first().map(|(_, v)| v.clone())
    }
}
