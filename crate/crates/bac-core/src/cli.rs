//! Command-line entry point: file discovery, configuration, the assessment
//! commands, and exit-code semantics.
//!
//! Exit codes: 0 when every step is consistent, 1 when any step failed or
//! was not recognized, 2 on usage or I/O errors.

use std::collections::HashMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::guicheck::{
    assess_final_gui, load_page_map, GuiAssessOptions, PendingMarkers, StaticDomRunner,
};
use crate::ontology::{default_catalog, load_catalog, OntologyCatalog};
use crate::protocheck::{
    assess_prototype, default_mapping, load_mapping, load_prototype, ConcreteMapping,
};
use crate::report::{
    emit_json_report, has_inconsistencies, render_results, render_task_log, StepResult, Summary,
};
use crate::story::{load_story, Story};
use crate::taskcheck::{
    assess_task_scenarios, load_scenarios, parse_scenario_file, parse_task_model, preformat,
    write_enriched, ScenarioFile, TaskAssessOptions, TaskModelRef,
};
use crate::{Error, RunMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "bac",
    version,
    about = "Checks task-model scenarios, GUI prototypes, and final GUIs for consistency with BDD stories"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that every story step is recognized by the behavior catalog.
    Lint(LintArgs),
    /// Assess scenarios extracted from task models against the stories.
    CheckTasks(CheckTasksArgs),
    /// Assess a GUI prototype file against the stories.
    CheckProto(CheckProtoArgs),
    /// Assess final GUIs (static HTML documents) against the stories.
    CheckGui(CheckGuiArgs),
    /// Run all three assessments and merge the reports.
    CheckAll(CheckAllArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Story files or directories containing `.story` files.
    #[arg(long = "stories", required = true, num_args = 1.., value_name = "PATH")]
    stories: Vec<PathBuf>,
    /// Behavior catalog file; defaults to the embedded catalog.
    #[arg(long = "catalog", env = "BAC_CATALOG", value_name = "FILE")]
    catalog: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long = "report-out", value_name = "FILE")]
    report_out: Option<PathBuf>,
    /// Colorize console output.
    #[arg(long = "color", default_value_t = false)]
    color: bool,
}

#[derive(Debug, Args)]
struct LintArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct TaskInputs {
    /// Scenario files (`.scen`) or directories of them.
    #[arg(long = "scenarios", required = true, num_args = 1.., value_name = "PATH")]
    scenarios: Vec<PathBuf>,
    /// Reference task model files (`.hmst`) or directories of them.
    #[arg(long = "models", num_args = 1.., value_name = "PATH")]
    models: Vec<PathBuf>,
    /// Task names ignored during position counting (repeatable).
    #[arg(long = "skip-task-names", value_name = "NAME")]
    skip_task_names: Vec<String>,
    /// Write preformatted scenarios next to their sources as
    /// `<name>.enriched.scen`.
    #[arg(long = "write-enriched", default_value_t = false)]
    write_enriched: bool,
}

#[derive(Debug, Args)]
struct CheckTasksArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    tasks: TaskInputs,
}

#[derive(Debug, Args)]
struct ProtoInputs {
    /// The prototype file to assess (one per invocation).
    #[arg(long = "prototype", value_name = "FILE")]
    prototype: PathBuf,
    /// Element mapping file; defaults to the embedded mapping.
    #[arg(long = "mapping", value_name = "FILE")]
    mapping: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckProtoArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    proto: ProtoInputs,
    /// fail-fast (default) or continue.
    #[arg(long = "mode", default_value = "fail-fast")]
    mode: String,
}

#[derive(Debug, Args)]
struct GuiInputs {
    /// Page map binding screen and element names to documents and locators.
    #[arg(long = "page-map", value_name = "FILE")]
    page_map: PathBuf,
    /// Steps to withhold: "scenario title:step index" or a step-text
    /// substring (repeatable).
    #[arg(long = "pending", value_name = "MARKER")]
    pending: Vec<String>,
    /// Seed for data-generation behaviors.
    #[arg(long = "seed", default_value_t = 0)]
    seed: u64,
    /// Key-value file (`key = value` lines) backing dataset behaviors.
    #[arg(long = "dataset", value_name = "FILE")]
    dataset: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckGuiArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    gui: GuiInputs,
    /// fail-fast (default) or continue.
    #[arg(long = "mode", default_value = "fail-fast")]
    mode: String,
}

#[derive(Debug, Args)]
struct CheckAllArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    tasks: TaskInputs,
    #[command(flatten)]
    proto: ProtoInputs,
    #[command(flatten)]
    gui: GuiInputs,
    /// fail-fast (default) or continue, for the prototype and final-GUI
    /// assessments (task scenarios are always assessed in full).
    #[arg(long = "mode", default_value = "fail-fast")]
    mode: String,
}

fn parse_mode(s: &str) -> Result<RunMode, Error> {
    match s {
        "fail-fast" => Ok(RunMode::FailFast),
        "continue" => Ok(RunMode::Continue),
        other => Err(Error::Config(format!(
            "unknown mode {other:?} (expected fail-fast or continue)"
        ))),
    }
}

/// Expands files and directories into a sorted list of files carrying one
/// of the given extensions.
fn discover(paths: &[PathBuf], extensions: &[&str]) -> Result<Vec<PathBuf>, Error> {
    let mut out = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| Error::Io {
                    path: path.display().to_string(),
                    source: e,
                })?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| {
                    p.is_file()
                        && p.file_name()
                            .and_then(|n| n.to_str())
                            .map(|n| extensions.iter().any(|ext| n.ends_with(ext)))
                            .unwrap_or(false)
                })
                .collect();
            entries.sort();
            out.extend(entries);
        } else if path.is_file() {
            out.push(path.clone());
        } else {
            return Err(Error::Io {
                path: path.display().to_string(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
            });
        }
    }
    Ok(out)
}

/// Drops raw scenario files that have an `.enriched.scen` sibling in the
/// same listing, preferring the preformatted copy.
fn prefer_enriched(paths: Vec<PathBuf>) -> Vec<PathBuf> {
    let enriched_stems: Vec<String> = paths
        .iter()
        .filter_map(|p| p.file_name().and_then(|n| n.to_str()))
        .filter(|n| n.ends_with(".enriched.scen"))
        .map(|n| n.trim_end_matches(".enriched.scen").to_string())
        .collect();
    paths
        .into_iter()
        .filter(|p| {
            let Some(name) = p.file_name().and_then(|n| n.to_str()) else {
                return true;
            };
            if name.ends_with(".enriched.scen") {
                return true;
            }
            let stem = name.trim_end_matches(".scen");
            !enriched_stems.iter().any(|s| s == stem)
        })
        .collect()
}

fn load_stories(paths: &[PathBuf]) -> Result<Vec<Story>, Error> {
    let files = discover(paths, &[".story"])?;
    if files.is_empty() {
        return Err(Error::Config("no story files found".to_string()));
    }
    files.iter().map(|p| load_story(p)).collect()
}

fn resolve_catalog(path: &Option<PathBuf>) -> Result<CatalogHandle, Error> {
    match path {
        Some(p) => Ok(CatalogHandle::Owned(load_catalog(p)?)),
        None => Ok(CatalogHandle::Default(default_catalog())),
    }
}

enum CatalogHandle {
    Owned(OntologyCatalog),
    Default(&'static OntologyCatalog),
}

impl CatalogHandle {
    fn get(&self) -> &OntologyCatalog {
        match self {
            CatalogHandle::Owned(c) => c,
            CatalogHandle::Default(c) => c,
        }
    }
}

fn resolve_mapping(path: &Option<PathBuf>) -> Result<MappingHandle, Error> {
    match path {
        Some(p) => Ok(MappingHandle::Owned(load_mapping(p)?)),
        None => Ok(MappingHandle::Default(default_mapping())),
    }
}

enum MappingHandle {
    Owned(ConcreteMapping),
    Default(&'static ConcreteMapping),
}

impl MappingHandle {
    fn get(&self) -> &ConcreteMapping {
        match self {
            MappingHandle::Owned(m) => m,
            MappingHandle::Default(m) => m,
        }
    }
}

fn load_dataset(path: &Option<PathBuf>) -> Result<HashMap<String, String>, Error> {
    let Some(path) = path else {
        return Ok(HashMap::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut out = HashMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            out.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    Ok(out)
}

fn load_models(paths: &[PathBuf]) -> Result<Vec<TaskModelRef>, Error> {
    let files = discover(paths, &[".hmst"])?;
    files
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Io {
                path: p.display().to_string(),
                source: e,
            })?;
            parse_task_model(&text, &p.display().to_string()).map_err(Into::into)
        })
        .collect()
}

/// One lint finding: an unrecognized step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintFinding {
    pub file: String,
    pub line: usize,
    pub step_text: String,
    pub reason: String,
}

/// Checks every step of every story against the catalog, reporting the
/// steps no behavior matches.
pub fn lint_stories(stories: &[Story], catalog: &OntologyCatalog) -> Vec<LintFinding> {
    let mut findings = Vec::new();
    for story in stories {
        for scenario in &story.scenarios {
            for step in &scenario.steps {
                match catalog.match_step(step) {
                    Ok(Some(_)) => {}
                    Ok(None) => findings.push(LintFinding {
                        file: story.source_path.clone(),
                        line: step.line,
                        step_text: step.text.clone(),
                        reason: "no step is matching".to_string(),
                    }),
                    Err(e) => findings.push(LintFinding {
                        file: story.source_path.clone(),
                        line: step.line,
                        step_text: step.text.clone(),
                        reason: e.to_string(),
                    }),
                }
            }
        }
    }
    findings
}

struct TaskRunInputs {
    scenarios: Vec<crate::taskcheck::EnrichedTaskScenario>,
    options: TaskAssessOptions,
}

fn prepare_tasks(args: &TaskInputs, out: &mut dyn std::io::Write) -> Result<TaskRunInputs, Error> {
    let models = load_models(&args.models)?;
    let scenario_files = prefer_enriched(discover(&args.scenarios, &[".scen"])?);
    if scenario_files.is_empty() {
        return Err(Error::Config("no scenario files found".to_string()));
    }
    if args.write_enriched {
        for path in &scenario_files {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                source: e,
            })?;
            if let ScenarioFile::Raw(raw) = parse_scenario_file(&text, &path.display().to_string())?
            {
                let mut enriched = None;
                for model in &models {
                    if let Ok(s) = preformat(&raw, model) {
                        enriched = Some(s);
                        break;
                    }
                }
                if let Some(s) = enriched {
                    let target = write_enriched(&s, path)?;
                    writeln!(out, "wrote {}", target.display()).ok();
                }
            }
        }
    }
    let scenarios = load_scenarios(&scenario_files, &models)?;
    let options = TaskAssessOptions {
        known_model_tasks: None,
        skip_task_names: args.skip_task_names.clone(),
    }
    .with_models(&models);
    Ok(TaskRunInputs { scenarios, options })
}

fn run_tasks(
    stories: &[Story],
    inputs: &TaskRunInputs,
    catalog: &OntologyCatalog,
    out: &mut dyn std::io::Write,
) -> Vec<StepResult> {
    let mut results = Vec::new();
    for story in stories {
        let assessment =
            assess_task_scenarios(story, &inputs.scenarios, catalog, &inputs.options);
        write!(out, "{}", render_task_log(&assessment.log)).ok();
        results.extend(assessment.results);
    }
    results
}

fn run_proto(
    stories: &[Story],
    args: &ProtoInputs,
    mode: RunMode,
    catalog: &OntologyCatalog,
) -> Result<Vec<StepResult>, Error> {
    let proto = load_prototype(&args.prototype)?;
    let mapping = resolve_mapping(&args.mapping)?;
    let mut results = Vec::new();
    for story in stories {
        results.extend(assess_prototype(
            story,
            &proto,
            catalog,
            mapping.get(),
            mode,
        )?);
    }
    Ok(results)
}

fn run_gui(
    stories: &[Story],
    args: &GuiInputs,
    mode: RunMode,
    catalog: &OntologyCatalog,
) -> Result<Vec<StepResult>, Error> {
    let page_map = load_page_map(&args.page_map)?;
    let options = GuiAssessOptions {
        mode,
        pending: PendingMarkers::parse(&args.pending),
        seed: args.seed,
        dataset: load_dataset(&args.dataset)?,
    };
    let mut results = Vec::new();
    for story in stories {
        let mut runner = StaticDomRunner::new(page_map.clone());
        results.extend(assess_final_gui(
            story,
            &page_map,
            catalog,
            &mut runner,
            &options,
        ));
    }
    Ok(results)
}

/// Renders one assessment section: results followed by the summary lines
/// of the artifacts it covered. `check-all` emits one section per artifact
/// so its output is the concatenation of the individual commands' outputs.
fn render_section(results: &[StepResult], color: bool, out: &mut dyn std::io::Write) {
    write!(out, "{}", render_results(results, color)).ok();
    let summary = Summary::of(results);
    writeln!(out).ok();
    for (label, counts) in [
        ("task model", &summary.task_model),
        ("prototype", &summary.prototype),
        ("final GUI", &summary.final_gui),
    ] {
        if counts.analyzed > 0 {
            writeln!(
                out,
                "{label}: {} analyzed, {} consistent, {} inconsistent, {} pending, {} not performed, {} skipped, {} unrecognized",
                counts.analyzed,
                counts.consistent,
                counts.inconsistent,
                counts.pending,
                counts.not_performed,
                counts.skipped,
                counts.unrecognized
            )
            .ok();
        }
    }
}

fn finish(results: Vec<StepResult>, common: &CommonArgs) -> Result<i32, Error> {
    if let Some(path) = &common.report_out {
        std::fs::write(path, emit_json_report(&results)).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
    }
    Ok(if has_inconsistencies(&results) {
        EXIT_INCONSISTENT
    } else {
        EXIT_OK
    })
}

fn execute(cli: Cli, out: &mut dyn std::io::Write) -> Result<i32, Error> {
    match cli.command {
        Command::Lint(args) => {
            let catalog = resolve_catalog(&args.common.catalog)?;
            let stories = load_stories(&args.common.stories)?;
            let findings = lint_stories(&stories, catalog.get());
            for f in &findings {
                writeln!(
                    out,
                    "{}:{}: step is not recognized: {} ({})",
                    f.file, f.line, f.step_text, f.reason
                )
                .ok();
            }
            let total: usize = stories
                .iter()
                .flat_map(|s| &s.scenarios)
                .map(|s| s.steps.len())
                .sum();
            writeln!(
                out,
                "{} step(s) checked, {} not recognized",
                total,
                findings.len()
            )
            .ok();
            Ok(if findings.is_empty() {
                EXIT_OK
            } else {
                EXIT_INCONSISTENT
            })
        }
        Command::CheckTasks(args) => {
            let catalog = resolve_catalog(&args.common.catalog)?;
            let stories = load_stories(&args.common.stories)?;
            let inputs = prepare_tasks(&args.tasks, out)?;
            let results = run_tasks(&stories, &inputs, catalog.get(), out);
            render_section(&results, args.common.color, out);
            finish(results, &args.common)
        }
        Command::CheckProto(args) => {
            let catalog = resolve_catalog(&args.common.catalog)?;
            let stories = load_stories(&args.common.stories)?;
            let mode = parse_mode(&args.mode)?;
            let results = run_proto(&stories, &args.proto, mode, catalog.get())?;
            render_section(&results, args.common.color, out);
            finish(results, &args.common)
        }
        Command::CheckGui(args) => {
            let catalog = resolve_catalog(&args.common.catalog)?;
            let stories = load_stories(&args.common.stories)?;
            let mode = parse_mode(&args.mode)?;
            let results = run_gui(&stories, &args.gui, mode, catalog.get())?;
            render_section(&results, args.common.color, out);
            finish(results, &args.common)
        }
        Command::CheckAll(args) => {
            let catalog = resolve_catalog(&args.common.catalog)?;
            let stories = load_stories(&args.common.stories)?;
            let mode = parse_mode(&args.mode)?;
            let inputs = prepare_tasks(&args.tasks, out)?;
            let task_results = run_tasks(&stories, &inputs, catalog.get(), out);
            render_section(&task_results, args.common.color, out);
            let proto_results = run_proto(&stories, &args.proto, mode, catalog.get())?;
            render_section(&proto_results, args.common.color, out);
            let gui_results = run_gui(&stories, &args.gui, mode, catalog.get())?;
            render_section(&gui_results, args.common.color, out);
            let mut results = task_results;
            results.extend(proto_results);
            results.extend(gui_results);
            finish(results, &args.common)
        }
    }
}

/// Parses arguments and runs the selected command, returning the process
/// exit code. Output goes to `out`; errors are reported on stderr.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message (help/version go to stdout)
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::default_catalog;
    use crate::story::parse_story;

    #[test]
    fn lint_flags_only_the_unknown_phrasing() {
        let story = parse_story(
            "Flight Tickets Search\n\nScenario: Return Tickets Search\nGiven I go to \"Find Flights\"\nWhen I set the date \"12/15/2017\" in the field \"Depart\"\nAnd I set \"12/20/2017\" in the field \"Return\"\n",
            "lint.story",
        )
        .unwrap();
        let findings = lint_stories(&[story], default_catalog());
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].line, 5);
        assert!(findings[0].step_text.contains("I set the date"));
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut out = Vec::new();
        let code = run(["bac", "check-gui", "--stories", "x.story"], &mut out);
        assert_eq!(code, EXIT_USAGE); // missing --page-map
    }

    #[test]
    fn unreadable_story_path_exits_2() {
        let mut out = Vec::new();
        let code = run(
            ["bac", "lint", "--stories", "/nonexistent/path.story"],
            &mut out,
        );
        assert_eq!(code, EXIT_USAGE);
    }

    fn fixture(rel: &str) -> String {
        std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures")
            .join(rel)
            .display()
            .to_string()
    }

    #[test]
    fn lint_passes_on_known_phrasings() {
        let mut out = Vec::new();
        let code = run(
            [
                "bac",
                "lint",
                "--stories",
                &fixture("table2/flight_tickets_search.story"),
            ],
            &mut out,
        );
        assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&out));
    }

    #[test]
    fn check_all_output_concatenates_the_individual_commands() {
        let story = fixture("table2/flight_tickets_search.story");
        let scen = fixture("table2/roundtrip.scen");
        let model = fixture("table2/booking.hmst");
        let proto = fixture("table2/book_flights.bmml");
        let map = fixture("table2/pagemap.toml");

        let capture = |args: Vec<&str>| -> String {
            let mut out = Vec::new();
            let code = run(args, &mut out);
            assert_eq!(code, EXIT_INCONSISTENT);
            String::from_utf8(out).unwrap()
        };
        let tasks = capture(vec![
            "bac", "check-tasks", "--stories", &story, "--scenarios", &scen, "--models", &model,
        ]);
        let protos = capture(vec![
            "bac", "check-proto", "--stories", &story, "--prototype", &proto,
        ]);
        let guis = capture(vec![
            "bac", "check-gui", "--stories", &story, "--page-map", &map,
        ]);
        let all = capture(vec![
            "bac", "check-all", "--stories", &story, "--scenarios", &scen, "--models", &model,
            "--prototype", &proto, "--page-map", &map,
        ]);
        assert_eq!(all, format!("{tasks}{protos}{guis}"));
    }

    #[test]
    fn write_enriched_emits_preformatted_scenarios() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["roundtrip.scen", "booking.hmst"] {
            std::fs::copy(fixture(&format!("table2/{name}")), dir.path().join(name)).unwrap();
        }
        let mut out = Vec::new();
        let code = run(
            [
                "bac",
                "check-tasks",
                "--stories",
                &fixture("table2/flight_tickets_search.story"),
                "--scenarios",
                &dir.path().join("roundtrip.scen").display().to_string(),
                "--models",
                &dir.path().join("booking.hmst").display().to_string(),
                "--write-enriched",
            ],
            &mut out,
        );
        assert_eq!(code, EXIT_INCONSISTENT);
        let enriched = dir.path().join("roundtrip.enriched.scen");
        assert!(enriched.is_file());
        let text = std::fs::read_to_string(&enriched).unwrap();
        assert!(text.contains("Go to Book Flights"));
        assert!(text.contains("Sam, Déc 1, 2018"));

        // a later run over the directory prefers the enriched copy
        let mut out2 = Vec::new();
        let code2 = run(
            [
                "bac",
                "check-tasks",
                "--stories",
                &fixture("table2/flight_tickets_search.story"),
                "--scenarios",
                &dir.path().display().to_string(),
            ],
            &mut out2,
        );
        assert_eq!(code2, EXIT_INCONSISTENT);
    }
}
