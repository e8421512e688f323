//! Step verdicts, inconsistency classification, console logs, and the JSON
//! report.
//!
//! Assessors emit [`StepResult`]s carrying a [`FailureSignal`] for failed
//! steps; [`classify`] maps each signal onto its inconsistency category.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::taskcheck::TaskMatchLog;

/// Which artifact a result was produced against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Artifact {
    TaskModel,
    Prototype,
    FinalGui,
}

impl Artifact {
    pub fn label(self) -> &'static str {
        match self {
            Artifact::TaskModel => "task model",
            Artifact::Prototype => "prototype",
            Artifact::FinalGui => "final GUI",
        }
    }
}

/// Per-step verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    Pending,
    NotPerformed,
    Skipped,
    Unrecognized,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Passed => "PASSED",
            Status::Failed => "FAILED",
            Status::Pending => "PENDING",
            Status::NotPerformed => "NOT PERFORMED",
            Status::Skipped => "SKIPPED",
            Status::Unrecognized => "UNRECOGNIZED",
        }
    }
}

/// Inconsistency categories, grouped by the artifact column they belong to.
/// `InexistentElement` is shared by the prototype and final-GUI columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InconsistencyKind {
    // task models
    DifferentTaskName,
    TaskNotExtracted,
    WrongPosition,
    UnpairedBehavior,
    EquivalentBehaviorMissing,
    SpecModelConflict,
    // prototypes
    ExpectedActualConflict,
    LabelElementGroupSplit,
    InexistentElement,
    SemanticallyIncompatibleElement,
    AmbiguousElement,
    UntraceableInteraction,
    // final GUIs
    MessageNotIdentified,
    ElementOrValueNotFound,
    ValueDoesNotFit,
    FieldAlreadyFilled,
    ElementNotIdentified,
}

impl InconsistencyKind {
    /// Whether this category belongs to the given artifact's column.
    pub fn applies_to(self, artifact: Artifact) -> bool {
        use InconsistencyKind::*;
        match self {
            DifferentTaskName | TaskNotExtracted | WrongPosition | UnpairedBehavior
            | EquivalentBehaviorMissing | SpecModelConflict => artifact == Artifact::TaskModel,
            ExpectedActualConflict | LabelElementGroupSplit | SemanticallyIncompatibleElement
            | AmbiguousElement | UntraceableInteraction => artifact == Artifact::Prototype,
            InexistentElement => {
                artifact == Artifact::Prototype || artifact == Artifact::FinalGui
            }
            MessageNotIdentified | ElementOrValueNotFound | ValueDoesNotFit
            | FieldAlreadyFilled | ElementNotIdentified => artifact == Artifact::FinalGui,
        }
    }

    pub fn label(self) -> &'static str {
        use InconsistencyKind::*;
        match self {
            DifferentTaskName => "task with different name",
            TaskNotExtracted => "task not extracted to the scenario",
            WrongPosition => "task at wrong position",
            UnpairedBehavior => "unpaired behavior",
            EquivalentBehaviorMissing => "equivalent behavior missing",
            SpecModelConflict => "conflict between specification and modeling",
            ExpectedActualConflict => "conflict between expected and actual elements",
            LabelElementGroupSplit => "element and label in different groups",
            InexistentElement => "inexistent element",
            SemanticallyIncompatibleElement => "element semantically incompatible",
            AmbiguousElement => "more than one element to represent the same field",
            UntraceableInteraction => "untraceable interaction between screens",
            MessageNotIdentified => "message not identified",
            ElementOrValueNotFound => "element or value not found",
            ValueDoesNotFit => "value does not fit the field",
            FieldAlreadyFilled => "field already filled in",
            ElementNotIdentified => "element not identified",
        }
    }
}

/// The task occupying an expected position when the searched task is absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupyingTask {
    pub name: String,
    /// Behavior id whose task template produces `name`, when one exists.
    pub recognized_as: Option<String>,
}

/// Failure evidence from the task-scenario assessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TaskFailure {
    /// The task exists somewhere, but not at the expected position.
    WrongPosition {
        searched: String,
        expected: usize,
        found: Vec<usize>,
    },
    /// The task was not found in any scenario.
    NotFound {
        searched: String,
        expected: usize,
        /// A scenario task whose name is a near miss of `searched`.
        near_name: Option<String>,
        /// Whether `searched` exists in the reference task model
        /// (`None` when no model was supplied).
        in_model: Option<bool>,
        /// Task sitting at the expected position, if any scenario is long
        /// enough.
        occupying: Option<OccupyingTask>,
    },
}

/// Failure evidence from the prototype assessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtoFailure {
    /// Page-identity behaviors: the window/mockup name does not match.
    PageMismatch {
        expected: String,
        actual: Option<String>,
    },
    /// Element-count behaviors: the count is not exactly one.
    Count {
        field: String,
        count: usize,
        /// A control with a matching name was rejected by the type filter.
        incompatible_type: Option<String>,
        /// A label with a matching name exists, but its group holds no
        /// supporting element.
        split_label: bool,
        /// A control with a near-miss name exists.
        near_name: Option<String>,
    },
    /// Outcome assertions cannot be traced on a static prototype.
    Untraceable { content: String },
}

/// Failure evidence from the final-GUI assessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuiFailure {
    MessageMissing { content: String },
    /// No element-map entry exists for the name on the current screen.
    NoMapEntry { name: String, screen: Option<String> },
    /// The locator matched no node.
    NotLocated { name: String, locator: String },
    /// The locator matched several nodes.
    Ambiguous {
        name: String,
        locator: String,
        count: usize,
    },
    /// The located node's kind does not support the behavior.
    KindMismatch {
        name: String,
        kind: String,
        supported: Vec<String>,
    },
    ValueDoesNotFit {
        name: String,
        maxlength: usize,
        value: String,
    },
    AlreadyFilled { name: String, current: String },
    ScreenMismatch {
        expected: String,
        actual: Option<String>,
    },
    /// An expected value, option, or state was not present.
    ValueMismatch { name: String, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureSignal {
    Task(TaskFailure),
    Proto(ProtoFailure),
    Gui(GuiFailure),
}

/// Maps failure evidence onto its inconsistency category. Total and
/// deterministic: every signal maps to exactly one category valid for its
/// artifact column.
pub fn classify(signal: &FailureSignal) -> InconsistencyKind {
    use InconsistencyKind::*;
    match signal {
        FailureSignal::Task(t) => match t {
            TaskFailure::WrongPosition { .. } => WrongPosition,
            TaskFailure::NotFound {
                near_name,
                in_model,
                occupying,
                ..
            } => {
                if near_name.is_some() {
                    DifferentTaskName
                } else if *in_model == Some(true) {
                    TaskNotExtracted
                } else {
                    match occupying {
                        Some(occ) if occ.recognized_as.is_none() => UnpairedBehavior,
                        Some(_) => SpecModelConflict,
                        None if *in_model == Some(false) => EquivalentBehaviorMissing,
                        None => TaskNotExtracted,
                    }
                }
            }
        },
        FailureSignal::Proto(p) => match p {
            ProtoFailure::PageMismatch { .. } => ExpectedActualConflict,
            ProtoFailure::Untraceable { .. } => UntraceableInteraction,
            ProtoFailure::Count {
                count,
                incompatible_type,
                split_label,
                near_name,
                ..
            } => {
                if *count >= 2 {
                    AmbiguousElement
                } else if *split_label {
                    LabelElementGroupSplit
                } else if incompatible_type.is_some() {
                    SemanticallyIncompatibleElement
                } else if near_name.is_some() {
                    ExpectedActualConflict
                } else {
                    InexistentElement
                }
            }
        },
        FailureSignal::Gui(g) => match g {
            GuiFailure::MessageMissing { .. } => MessageNotIdentified,
            GuiFailure::NoMapEntry { .. } => InexistentElement,
            GuiFailure::NotLocated { .. } => ElementOrValueNotFound,
            GuiFailure::Ambiguous { .. } => ElementNotIdentified,
            GuiFailure::KindMismatch { .. } => ElementOrValueNotFound,
            GuiFailure::ValueDoesNotFit { .. } => ValueDoesNotFit,
            GuiFailure::AlreadyFilled { .. } => FieldAlreadyFilled,
            GuiFailure::ScreenMismatch { .. } => ElementOrValueNotFound,
            GuiFailure::ValueMismatch { .. } => ElementOrValueNotFound,
        },
    }
}

impl fmt::Display for FailureSignal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureSignal::Task(t) => match t {
                TaskFailure::WrongPosition {
                    searched,
                    expected,
                    found,
                } => write!(
                    f,
                    "task {searched:?} expected at {expected}, found at {}",
                    found
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
                TaskFailure::NotFound {
                    searched,
                    expected,
                    near_name,
                    occupying,
                    ..
                } => {
                    write!(f, "task {searched:?} expected at {expected}: Task not found!")?;
                    if let Some(n) = near_name {
                        write!(f, " (near name {n:?})")?;
                    }
                    if let Some(o) = occupying {
                        write!(f, " (position holds {:?})", o.name)?;
                    }
                    Ok(())
                }
            },
            FailureSignal::Proto(p) => match p {
                ProtoFailure::PageMismatch { expected, actual } => write!(
                    f,
                    "page {expected:?} not addressed by the prototype (mockup name: {})",
                    actual.as_deref().unwrap_or("none")
                ),
                ProtoFailure::Count { field, count, .. } => {
                    write!(f, "{count} elements represent {field:?} (expected exactly 1)")
                }
                ProtoFailure::Untraceable { content } => write!(
                    f,
                    "outcome {content:?} requires an interaction between screens that a static prototype cannot trace"
                ),
            },
            FailureSignal::Gui(g) => match g {
                GuiFailure::MessageMissing { content } => {
                    write!(f, "message {content:?} not displayed")
                }
                GuiFailure::NoMapEntry { name, screen } => write!(
                    f,
                    "Element not found in {:?}: no element map entry for {name:?}",
                    screen.as_deref().unwrap_or("<no screen>")
                ),
                GuiFailure::NotLocated { name, locator } => {
                    write!(f, "element {name:?} not located by {locator:?}")
                }
                GuiFailure::Ambiguous {
                    name,
                    locator,
                    count,
                } => write!(
                    f,
                    "Element not identified: locator {locator:?} for {name:?} matches {count} nodes"
                ),
                GuiFailure::KindMismatch {
                    name,
                    kind,
                    supported,
                } => write!(
                    f,
                    "element {name:?} is a {kind}, which does not support this behavior (supported: {})",
                    supported.join(", ")
                ),
                GuiFailure::ValueDoesNotFit {
                    name,
                    maxlength,
                    value,
                } => write!(
                    f,
                    "Value does not fit the field: {value:?} exceeds maxlength {maxlength} of {name:?}"
                ),
                GuiFailure::AlreadyFilled { name, current } => {
                    write!(f, "field {name:?} already filled in (current value {current:?})")
                }
                GuiFailure::ScreenMismatch { expected, actual } => write!(
                    f,
                    "expected screen {expected:?}, current screen {}",
                    actual.as_deref().unwrap_or("none")
                ),
                GuiFailure::ValueMismatch { name, detail } => {
                    write!(f, "{detail} (element {name:?})")
                }
            },
        }
    }
}

/// One assessed step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult {
    pub story_title: String,
    pub scenario_title: String,
    pub step_text: String,
    pub artifact: Artifact,
    pub status: Status,
    /// Human-readable evidence: positions found, element counts, locator
    /// used, values.
    pub evidence: String,
    pub classification: Option<InconsistencyKind>,
    /// Artifact snapshot captured for failures (control list or DOM).
    pub snapshot: Option<String>,
}

impl StepResult {
    pub fn new(
        story_title: &str,
        scenario_title: &str,
        step_text: &str,
        artifact: Artifact,
        status: Status,
        evidence: String,
    ) -> Self {
        StepResult {
            story_title: story_title.to_string(),
            scenario_title: scenario_title.to_string(),
            step_text: step_text.to_string(),
            artifact,
            status,
            evidence,
            classification: None,
            snapshot: None,
        }
    }

    /// Marks the result failed and attaches the classified signal.
    pub fn failed(mut self, signal: &FailureSignal) -> Self {
        let kind = classify(signal);
        debug_assert!(kind.applies_to(self.artifact));
        self.status = Status::Failed;
        self.classification = Some(kind);
        self
    }

    pub fn with_snapshot(mut self, snapshot: String) -> Self {
        self.snapshot = Some(snapshot);
        self
    }
}

/// Per-artifact tallies. `analyzed` always equals the sum of the others.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryCounts {
    pub analyzed: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    pub pending: usize,
    pub not_performed: usize,
    pub skipped: usize,
    pub unrecognized: usize,
}

impl SummaryCounts {
    fn add(&mut self, status: Status) {
        self.analyzed += 1;
        match status {
            Status::Passed => self.consistent += 1,
            Status::Failed => self.inconsistent += 1,
            Status::Pending => self.pending += 1,
            Status::NotPerformed => self.not_performed += 1,
            Status::Skipped => self.skipped += 1,
            Status::Unrecognized => self.unrecognized += 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub task_model: SummaryCounts,
    pub prototype: SummaryCounts,
    pub final_gui: SummaryCounts,
}

impl Summary {
    pub fn of(results: &[StepResult]) -> Summary {
        let mut summary = Summary::default();
        for r in results {
            let counts = match r.artifact {
                Artifact::TaskModel => &mut summary.task_model,
                Artifact::Prototype => &mut summary.prototype,
                Artifact::FinalGui => &mut summary.final_gui,
            };
            counts.add(r.status);
        }
        summary
    }
}

/// True when the run should exit non-zero: any failed or unrecognized step.
pub fn has_inconsistencies(results: &[StepResult]) -> bool {
    results
        .iter()
        .any(|r| matches!(r.status, Status::Failed | Status::Unrecognized))
}

// --- console output ---------------------------------------------------------

const GREEN: &str = "\x1b[32m";
const RED: &str = "\x1b[31m";
const YELLOW: &str = "\x1b[33m";
const DIM: &str = "\x1b[2m";
const RESET: &str = "\x1b[0m";

fn paint(color: bool, code: &str, text: &str) -> String {
    if color {
        format!("{code}{text}{RESET}")
    } else {
        text.to_string()
    }
}

/// Renders the task-search log: one line per (searched task, scenario) with
/// the position(s) found or "Task not found!", and the value or "No Value".
pub fn render_task_log(log: &TaskMatchLog) -> String {
    let mut out = String::new();
    for row in &log.rows {
        let position = if row.found_positions.is_empty() {
            "Task not found!".to_string()
        } else {
            format!(
                "Position(s): {}",
                row.found_positions
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        };
        let values = if row.values.is_empty() {
            "No Value".to_string()
        } else {
            row.values
                .iter()
                .map(|v| v.clone().unwrap_or_else(|| "No Value".to_string()))
                .collect::<Vec<_>>()
                .join(", ")
        };
        out.push_str(&format!(
            "Scenario \"{}\" | Task \"{}\" | {} | {}\n",
            row.scenario_name, row.searched_task, position, values
        ));
    }
    out
}

/// Renders step results as console lines with optional ANSI colors.
pub fn render_results(results: &[StepResult], color: bool) -> String {
    let mut out = String::new();
    let mut last_scenario: Option<(String, String, Artifact)> = None;
    for r in results {
        let key = (
            r.story_title.clone(),
            r.scenario_title.clone(),
            r.artifact,
        );
        if last_scenario.as_ref() != Some(&key) {
            out.push_str(&format!(
                "\n{} / Scenario: {} [{}]\n",
                r.story_title,
                r.scenario_title,
                r.artifact.label()
            ));
            last_scenario = Some(key);
        }
        let code = match r.status {
            Status::Passed => GREEN,
            Status::Failed | Status::Unrecognized => RED,
            Status::Pending => YELLOW,
            Status::NotPerformed | Status::Skipped => DIM,
        };
        let mut line = format!(
            "  [{}] {}",
            paint(color, code, r.status.label()),
            r.step_text
        );
        if !r.evidence.is_empty() {
            line.push_str(&format!("  -- {}", r.evidence));
        }
        if let Some(kind) = r.classification {
            line.push_str(&format!("  [{}]", kind.label()));
        }
        line.push('\n');
        out.push_str(&line);
    }
    out
}

// --- JSON report -------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonStep {
    pub text: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<InconsistencyKind>,
    pub evidence: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonScenario {
    pub title: String,
    pub artifact: Artifact,
    pub steps: Vec<JsonStep>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonStory {
    pub title: String,
    pub scenarios: Vec<JsonScenario>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonReport {
    pub summary: Summary,
    pub stories: Vec<JsonStory>,
}

/// Builds the stable-ordered report structure: stories in result order,
/// scenarios per artifact in result order, steps in execution order.
pub fn build_report(results: &[StepResult]) -> JsonReport {
    let mut stories: Vec<JsonStory> = Vec::new();
    for r in results {
        if stories.last().map(|s| s.title.as_str()) != Some(r.story_title.as_str()) {
            stories.push(JsonStory {
                title: r.story_title.clone(),
                scenarios: Vec::new(),
            });
        }
        let story = stories.last_mut().unwrap();
        let need_new = story
            .scenarios
            .last()
            .map(|s| s.title != r.scenario_title || s.artifact != r.artifact)
            .unwrap_or(true);
        if need_new {
            story.scenarios.push(JsonScenario {
                title: r.scenario_title.clone(),
                artifact: r.artifact,
                steps: Vec::new(),
            });
        }
        story.scenarios.last_mut().unwrap().steps.push(JsonStep {
            text: r.step_text.clone(),
            status: r.status,
            classification: r.classification,
            evidence: r.evidence.clone(),
            snapshot: r.snapshot.clone(),
        });
    }
    JsonReport {
        summary: Summary::of(results),
        stories,
    }
}

/// Serializes the report; the output is deterministic for identical inputs.
pub fn emit_json_report(results: &[StepResult]) -> String {
    let report = build_report(results);
    serde_json::to_string_pretty(&report).expect("report serialization cannot fail")
}
