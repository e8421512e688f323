//! Task-scenario assessment.
//!
//! Raw scenario files extracted from a task model carry only task and object
//! id references; [`preformat`] resolves them against the reference model
//! into enriched scenarios (task name, optionality, value). Assessment then
//! searches, for every step of the BDD story, every scenario for the step's
//! canonical task names, logging each position found and deciding
//! consistency against the expected position.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use thiserror::Error;

use crate::ontology::OntologyCatalog;
use crate::report::{
    Artifact, FailureSignal, OccupyingTask, Status, StepResult, TaskFailure,
};
use crate::story::Story;
use crate::text::{is_near_name, match_key};

/// Reference task model: the id-indexed task and object tables.
#[derive(Debug, Clone, Default)]
pub struct TaskModelRef {
    pub tasks: HashMap<String, TaskInfo>,
    pub objects: HashMap<String, String>,
    pub source_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskInfo {
    pub name: String,
    pub optional: bool,
    pub task_type: String,
}

/// Scenario as exported: ordered task/object id references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawScenario {
    pub name: String,
    pub entries: Vec<RawEntry>,
    pub source_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEntry {
    pub task_id: String,
    pub object_id: Option<String>,
    pub object_value: Option<String>,
}

/// Scenario after preformatting: resolved names, optionality, and values.
/// Positions are 1-based indices into `tasks`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedTaskScenario {
    pub name: String,
    pub tasks: Vec<EnrichedTask>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedTask {
    pub name: String,
    pub optional: bool,
    pub value: Option<String>,
}

/// Either form a scenario file may take.
#[derive(Debug, Clone)]
pub enum ScenarioFile {
    Raw(RawScenario),
    Enriched(EnrichedTaskScenario),
}

#[derive(Debug, Error)]
pub enum TaskModelError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: scenario {scenario:?} references task id {task_id:?} absent from the model")]
    UnresolvedReference {
        path: String,
        scenario: String,
        task_id: String,
    },
}

fn xml_doc<'a>(
    text: &'a str,
    path: &str,
) -> Result<roxmltree::Document<'a>, TaskModelError> {
    roxmltree::Document::parse(text).map_err(|e| TaskModelError::Parse {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn required_attr(
    node: &roxmltree::Node,
    name: &str,
    path: &str,
) -> Result<String, TaskModelError> {
    node.attribute(name)
        .map(str::to_string)
        .ok_or_else(|| TaskModelError::Parse {
            path: path.to_string(),
            message: format!("<{}> element missing {name:?} attribute", node.tag_name().name()),
        })
}

/// Parses a reference task model: nested `<task id name type [optional]>`
/// elements plus `<object id name>` entries.
pub fn parse_task_model(text: &str, path: &str) -> Result<TaskModelRef, TaskModelError> {
    let doc = xml_doc(text, path)?;
    let mut tasks = HashMap::new();
    let mut objects = HashMap::new();
    for node in doc.descendants().filter(|n| n.is_element()) {
        match node.tag_name().name() {
            "task" => {
                let id = required_attr(&node, "id", path)?;
                let name = required_attr(&node, "name", path)?;
                if name.trim().is_empty() {
                    return Err(TaskModelError::Parse {
                        path: path.to_string(),
                        message: format!("task {id:?} has an empty name"),
                    });
                }
                let info = TaskInfo {
                    name,
                    optional: node.attribute("optional") == Some("true"),
                    task_type: node.attribute("type").unwrap_or("Abstract").to_string(),
                };
                if tasks.insert(id.clone(), info).is_some() {
                    return Err(TaskModelError::Parse {
                        path: path.to_string(),
                        message: format!("duplicate task id {id:?}"),
                    });
                }
            }
            "object" => {
                let id = required_attr(&node, "id", path)?;
                let name = required_attr(&node, "name", path)?;
                objects.insert(id, name);
            }
            _ => {}
        }
    }
    Ok(TaskModelRef {
        tasks,
        objects,
        source_path: path.to_string(),
    })
}

/// Parses a scenario file in either raw (`<taskref>`) or enriched
/// (`<task>`) form.
pub fn parse_scenario_file(text: &str, path: &str) -> Result<ScenarioFile, TaskModelError> {
    let doc = xml_doc(text, path)?;
    let root = doc.root_element();
    if root.tag_name().name() != "scenario" {
        return Err(TaskModelError::Parse {
            path: path.to_string(),
            message: format!(
                "expected <scenario> root element, found <{}>",
                root.tag_name().name()
            ),
        });
    }
    let name = required_attr(&root, "name", path)?;
    let children: Vec<_> = root.children().filter(|n| n.is_element()).collect();
    let raw_refs = children
        .iter()
        .filter(|n| n.tag_name().name() == "taskref")
        .count();
    if raw_refs > 0 {
        let mut entries = Vec::new();
        for node in &children {
            if node.tag_name().name() != "taskref" {
                continue;
            }
            entries.push(RawEntry {
                task_id: required_attr(node, "id", path)?,
                object_id: node.attribute("objectid").map(str::to_string),
                object_value: node.attribute("value").map(str::to_string),
            });
        }
        return Ok(ScenarioFile::Raw(RawScenario {
            name,
            entries,
            source_path: path.to_string(),
        }));
    }
    let mut tasks = Vec::new();
    for node in &children {
        if node.tag_name().name() != "task" {
            continue;
        }
        tasks.push(EnrichedTask {
            name: required_attr(node, "name", path)?,
            optional: node.attribute("optional") == Some("true"),
            value: node.attribute("value").map(str::to_string),
        });
    }
    Ok(ScenarioFile::Enriched(EnrichedTaskScenario { name, tasks }))
}

/// Resolves a raw scenario against the reference model, yielding the
/// enriched form used for assessment.
pub fn preformat(
    raw: &RawScenario,
    model: &TaskModelRef,
) -> Result<EnrichedTaskScenario, TaskModelError> {
    let mut tasks = Vec::with_capacity(raw.entries.len());
    for entry in &raw.entries {
        let info = model.tasks.get(&entry.task_id).ok_or_else(|| {
            TaskModelError::UnresolvedReference {
                path: raw.source_path.clone(),
                scenario: raw.name.clone(),
                task_id: entry.task_id.clone(),
            }
        })?;
        tasks.push(EnrichedTask {
            name: info.name.clone(),
            optional: info.optional,
            value: entry.object_value.clone(),
        });
    }
    Ok(EnrichedTaskScenario {
        name: raw.name.clone(),
        tasks,
    })
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Serializes an enriched scenario back to XML (the `.enriched.scen` form).
pub fn enriched_to_xml(scenario: &EnrichedTaskScenario) -> String {
    let mut out = format!("<scenario name=\"{}\">\n", xml_escape(&scenario.name));
    for task in &scenario.tasks {
        out.push_str(&format!(
            "  <task name=\"{}\" optional=\"{}\"",
            xml_escape(&task.name),
            task.optional
        ));
        if let Some(v) = &task.value {
            out.push_str(&format!(" value=\"{}\"", xml_escape(v)));
        }
        out.push_str("/>\n");
    }
    out.push_str("</scenario>\n");
    out
}

/// One log row: the outcome of searching one task name in one scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskLogRow {
    pub scenario_name: String,
    pub step_text: String,
    pub searched_task: String,
    pub expected_position: usize,
    /// 1-based positions where the task name matched, strictly increasing.
    pub found_positions: Vec<usize>,
    /// Value associated with each found position (`None` renders "No Value").
    pub values: Vec<Option<String>>,
    /// Optionality flag of each found task, for manual log inspection.
    pub optional_flags: Vec<bool>,
}

impl TaskLogRow {
    pub fn not_found(&self) -> bool {
        self.found_positions.is_empty()
    }
}

/// The full search log: exactly one row per (search string, scenario).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaskMatchLog {
    pub rows: Vec<TaskLogRow>,
}

/// Assessment output: the raw log plus per-step verdicts.
#[derive(Debug)]
pub struct TaskAssessment {
    pub log: TaskMatchLog,
    pub results: Vec<StepResult>,
}

/// Does any catalog task template produce `name` (placeholders standing for
/// non-empty text)? Returns the behavior id when one does.
fn recognize_task_name(catalog: &OntologyCatalog, name: &str) -> Option<String> {
    let key = match_key(name);
    for entry in catalog.entries() {
        for group in &entry.task_groups {
            for template in group {
                if template_recognizes(&match_key(template.raw()), &key) {
                    return Some(entry.id.clone());
                }
            }
        }
    }
    None
}

/// Matches a normalized task-template skeleton (placeholders as `<...>`)
/// against a normalized name, placeholders consuming at least one character.
fn template_recognizes(template_key: &str, name_key: &str) -> bool {
    // split the template into literal segments around <...> spans
    let mut literals: Vec<&str> = Vec::new();
    let mut rest = template_key;
    loop {
        match rest.find('<') {
            Some(start) => {
                literals.push(&rest[..start]);
                match rest[start..].find('>') {
                    Some(len) => rest = &rest[start + len + 1..],
                    None => return false, // malformed; treated as no match
                }
            }
            None => {
                literals.push(rest);
                break;
            }
        }
    }
    if literals.len() == 1 {
        return literals[0] == name_key;
    }
    let mut pos = 0usize;
    for (i, lit) in literals.iter().enumerate() {
        if i == 0 {
            if !name_key.starts_with(lit) {
                return false;
            }
            pos = lit.len();
        } else {
            // each placeholder consumes at least one character
            let search_from = pos + 1;
            if search_from > name_key.len() {
                return false;
            }
            if i == literals.len() - 1 {
                if lit.is_empty() {
                    return true;
                }
                let Some(found) = name_key[search_from..].rfind(*lit) else {
                    return false;
                };
                return search_from + found + lit.len() == name_key.len();
            }
            let Some(found) = name_key[search_from..].find(*lit) else {
                return false;
            };
            pos = search_from + found + lit.len();
        }
    }
    true
}

/// Options for [`assess_task_scenarios`].
#[derive(Debug, Default)]
pub struct TaskAssessOptions {
    /// Normalized names of every task in the reference model(s), used only
    /// to refine failure classification. `None` when no model was supplied.
    pub known_model_tasks: Option<HashSet<String>>,
    /// Task names excluded from position counting (e.g. system tasks).
    pub skip_task_names: Vec<String>,
}

impl TaskAssessOptions {
    /// Collects the model task-name set from reference models.
    pub fn with_models(mut self, models: &[TaskModelRef]) -> Self {
        if !models.is_empty() {
            self.known_model_tasks = Some(
                models
                    .iter()
                    .flat_map(|m| m.tasks.values())
                    .map(|t| match_key(&t.name))
                    .collect(),
            );
        }
        self
    }
}

/// Runs every step of the story against every scenario: all steps are
/// assessed (no fail-fast), absence is a result, not an error.
pub fn assess_task_scenarios(
    story: &Story,
    scenarios: &[EnrichedTaskScenario],
    catalog: &OntologyCatalog,
    options: &TaskAssessOptions,
) -> TaskAssessment {
    let skip: HashSet<String> = options
        .skip_task_names
        .iter()
        .map(|s| match_key(s))
        .collect();
    // scenarios with skipped tasks filtered out, positions recomputed
    let filtered: Vec<(String, Vec<EnrichedTask>)> = scenarios
        .iter()
        .map(|s| {
            let tasks: Vec<EnrichedTask> = s
                .tasks
                .iter()
                .filter(|t| !skip.contains(&match_key(&t.name)))
                .cloned()
                .collect();
            (s.name.clone(), tasks)
        })
        .collect();

    let mut log = TaskMatchLog::default();
    let mut results = Vec::new();

    for scenario in &story.scenarios {
        let mut expansions = 0usize; // running count of task expansions
        for step in &scenario.steps {
            let binding = match catalog.match_step(step) {
                Ok(Some(b)) => b,
                Ok(None) => {
                    results.push(StepResult::new(
                        &story.title,
                        &scenario.title,
                        &step.text,
                        Artifact::TaskModel,
                        Status::Unrecognized,
                        "no step is matching".to_string(),
                    ));
                    continue;
                }
                Err(e) => {
                    results.push(StepResult::new(
                        &story.title,
                        &scenario.title,
                        &step.text,
                        Artifact::TaskModel,
                        Status::Unrecognized,
                        e.to_string(),
                    ));
                    continue;
                }
            };

            let task_names = catalog.derive_task_names(&binding);
            let mut expected_list: Vec<usize> = Vec::new();
            let mut actual_list: Vec<usize> = Vec::new();
            let mut first_failure: Option<FailureSignal> = None;

            for task_name in &task_names {
                expansions += 1;
                let expected = expansions;
                expected_list.push(expected);
                let key = match_key(task_name);

                let mut found_at_expected = false;
                let mut all_positions: Vec<usize> = Vec::new();
                for (scn_name, tasks) in &filtered {
                    let mut positions = Vec::new();
                    let mut values = Vec::new();
                    let mut optionals = Vec::new();
                    for (i, task) in tasks.iter().enumerate() {
                        if match_key(&task.name) == key {
                            positions.push(i + 1);
                            values.push(task.value.clone());
                            optionals.push(task.optional);
                        }
                    }
                    if positions.contains(&expected) {
                        found_at_expected = true;
                    }
                    all_positions.extend(&positions);
                    log.rows.push(TaskLogRow {
                        scenario_name: scn_name.clone(),
                        step_text: step.text.clone(),
                        searched_task: task_name.clone(),
                        expected_position: expected,
                        found_positions: positions,
                        values,
                        optional_flags: optionals,
                    });
                }
                all_positions.sort_unstable();
                all_positions.dedup();
                actual_list.push(all_positions.first().copied().unwrap_or(0));

                if !found_at_expected && first_failure.is_none() {
                    first_failure = Some(if all_positions.is_empty() {
                        let near_name = filtered
                            .iter()
                            .flat_map(|(_, tasks)| tasks.iter())
                            .find(|t| is_near_name(&t.name, task_name))
                            .map(|t| t.name.clone());
                        let in_model = options
                            .known_model_tasks
                            .as_ref()
                            .map(|names| names.contains(&key));
                        let occupying = filtered
                            .iter()
                            .find(|(_, tasks)| tasks.len() >= expected)
                            .map(|(_, tasks)| {
                                let name = tasks[expected - 1].name.clone();
                                let recognized_as = recognize_task_name(catalog, &name);
                                OccupyingTask {
                                    name,
                                    recognized_as,
                                }
                            });
                        FailureSignal::Task(TaskFailure::NotFound {
                            searched: task_name.clone(),
                            expected,
                            near_name,
                            in_model,
                            occupying,
                        })
                    } else {
                        FailureSignal::Task(TaskFailure::WrongPosition {
                            searched: task_name.clone(),
                            expected,
                            found: all_positions.clone(),
                        })
                    });
                }
            }

            let fmt_positions = |list: &[usize]| -> String {
                let rendered: Vec<String> = list.iter().map(ToString::to_string).collect();
                if rendered.len() > 1 && rendered.windows(2).all(|w| w[0] == w[1]) {
                    rendered[0].clone()
                } else {
                    rendered.join("/")
                }
            };
            let evidence = format!(
                "Expected: {} | Actual: {}",
                fmt_positions(&expected_list),
                fmt_positions(&actual_list)
            );
            let result = StepResult::new(
                &story.title,
                &scenario.title,
                &step.text,
                Artifact::TaskModel,
                Status::Passed,
                evidence,
            );
            results.push(match &first_failure {
                Some(signal) => {
                    let mut r = result.failed(signal);
                    r.evidence = format!("{} | {}", r.evidence, signal);
                    r
                }
                None => result,
            });
        }
    }

    TaskAssessment { log, results }
}

/// Loads every `.scen` file in a directory (sorted by name), preformatting
/// raw ones against the models found in `models`.
pub fn load_scenarios(
    scenario_paths: &[std::path::PathBuf],
    models: &[TaskModelRef],
) -> Result<Vec<EnrichedTaskScenario>, crate::Error> {
    let mut out = Vec::new();
    for path in scenario_paths {
        let text = std::fs::read_to_string(path).map_err(|e| crate::Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let file = parse_scenario_file(&text, &path.display().to_string())?;
        match file {
            ScenarioFile::Enriched(s) => out.push(s),
            ScenarioFile::Raw(raw) => {
                let mut last_err = None;
                let mut enriched = None;
                for model in models {
                    match preformat(&raw, model) {
                        Ok(s) => {
                            enriched = Some(s);
                            break;
                        }
                        Err(e) => last_err = Some(e),
                    }
                }
                match (enriched, last_err) {
                    (Some(s), _) => out.push(s),
                    (None, Some(e)) => return Err(e.into()),
                    (None, None) => {
                        return Err(crate::Error::Config(format!(
                            "{}: raw scenario requires a reference task model (--models)",
                            path.display()
                        )))
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Writes the `.enriched.scen` sibling of a scenario file.
pub fn write_enriched(
    scenario: &EnrichedTaskScenario,
    original: &Path,
) -> Result<std::path::PathBuf, crate::Error> {
    let mut name = original
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scenario")
        .to_string();
    name.push_str(".enriched.scen");
    let target = original.with_file_name(name);
    std::fs::write(&target, enriched_to_xml(scenario)).map_err(|e| crate::Error::Io {
        path: target.display().to_string(),
        source: e,
    })?;
    Ok(target)
}
