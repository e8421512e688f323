//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use bac_core::cli::lint_stories;
use bac_core::guicheck::{
    assess_final_gui, load_page_map, GuiAssessOptions, StaticDomRunner,
};
use bac_core::ontology::default_catalog;
use bac_core::protocheck::{
    assess_prototype, count_matching_elements, default_mapping, parse_prototype,
};
use bac_core::report::{InconsistencyKind, Status, StepResult};
use bac_core::story::parse_story;
use bac_core::taskcheck::{
    assess_task_scenarios, EnrichedTask, EnrichedTaskScenario, TaskAssessOptions, TaskInfo,
    TaskModelRef,
};
use bac_core::RunMode;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn criterion(n: u32, desc: &str, check: impl FnOnce() -> Result<(), String>) {
    match check() {
        Ok(()) => println!("criterion {n} ({desc}): PASS"),
        Err(msg) => {
            println!("criterion {n} ({desc}): FAIL - {msg}");
            panic!("criterion {n} ({desc}) failed: {msg}");
        }
    }
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

fn fixture_str(rel: &str) -> String {
    fixture(rel).display().to_string()
}

fn bac() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bac"))
}

// -- criterion 1 --------------------------------------------------------------

#[test]
fn criterion_1_catalog_completeness() {
    criterion(1, "catalog completeness and template bijection", || {
        let catalog = default_catalog();
        ensure!(
            catalog.len() == 62,
            "expected 62 behavior records, found {}",
            catalog.len()
        );

        let started = Instant::now();
        let mut rendered = 0usize;
        for entry in catalog.entries() {
            for template in &entry.step_templates {
                let values: Vec<String> = (0..template.placeholders().len())
                    .map(|i| format!("value {i}"))
                    .collect();
                let refs: Vec<&str> = values.iter().map(String::as_str).collect();
                let text = template.render(&refs);
                for keyword in &entry.keywords {
                    let story =
                        parse_story(&format!("T\nScenario: S\n{keyword} {text}\n"), "b.story")
                            .map_err(|e| e.to_string())?;
                    let binding = catalog
                        .match_step(&story.scenarios[0].steps[0])
                        .map_err(|e| format!("ambiguity on {text:?}: {e}"))?
                        .ok_or_else(|| format!("{}: template {text:?} did not match", entry.id))?;
                    ensure!(
                        binding.behavior_id == entry.id,
                        "{}: template {text:?} matched {}",
                        entry.id,
                        binding.behavior_id
                    );
                    let bound: Vec<&str> =
                        binding.values.iter().map(|(_, v)| v.as_str()).collect();
                    ensure!(
                        bound == refs,
                        "{}: bindings {bound:?} differ from {refs:?}",
                        entry.id
                    );
                    rendered += 1;
                }
            }
        }
        let elapsed = started.elapsed();
        ensure!(rendered > 0, "no templates rendered");
        ensure!(
            elapsed < Duration::from_secs(1),
            "bijection sweep took {elapsed:?} (limit 1 s)"
        );
        Ok(())
    });
}

// -- criterion 2 --------------------------------------------------------------

fn check_task_oracle_instances(instances: usize, seed: u64) -> Result<(), String> {
    let catalog = default_catalog();
    let mut rng = StdRng::seed_from_u64(seed);
    for instance in 0..instances {
        let (src, _) = common::gen_story_source(&mut rng, 6);
        let scenarios = common::gen_task_scenarios(&mut rng, 5, 8);
        let story = parse_story(&src, "gen.story").map_err(|e| e.to_string())?;
        let assessment =
            assess_task_scenarios(&story, &scenarios, catalog, &TaskAssessOptions::default());

        // independent recomputation of the searched tasks and expected
        // positions: a running count of task expansions per scenario
        let mut independent: Vec<(String, usize)> = Vec::new();
        for scenario in &story.scenarios {
            let mut running = 0usize;
            for step in &scenario.steps {
                if let Ok(Some(binding)) = catalog.match_step(step) {
                    for name in catalog.derive_task_names(&binding) {
                        running += 1;
                        independent.push((name, running));
                    }
                }
            }
        }
        let n = scenarios.len();
        ensure!(
            assessment.log.rows.len() == independent.len() * n,
            "instance {instance}: {} rows, expected {}",
            assessment.log.rows.len(),
            independent.len() * n
        );
        for (chunk, (searched, expected)) in
            assessment.log.rows.chunks(n).zip(independent.iter())
        {
            for (row, scenario) in chunk.iter().zip(scenarios.iter()) {
                ensure!(
                    row.searched_task == *searched,
                    "instance {instance}: row searched {:?}, independent {:?}",
                    row.searched_task,
                    searched
                );
                ensure!(
                    row.expected_position == *expected,
                    "instance {instance}: expected position {} vs {}",
                    row.expected_position,
                    expected
                );
                let oracle = common::oracle_positions(scenario, searched);
                ensure!(
                    row.found_positions == oracle,
                    "instance {instance}: {:?} in {:?}: {:?} vs oracle {:?}",
                    searched,
                    scenario.name,
                    row.found_positions,
                    oracle
                );
            }
        }
    }
    Ok(())
}

#[test]
fn criterion_2_task_search_oracle() {
    criterion(2, "task-search positions equal the exhaustive-scan oracle", || {
        let started = Instant::now();
        check_task_oracle_instances(1000, 42)?;
        let elapsed = started.elapsed();
        ensure!(
            elapsed < Duration::from_secs(5),
            "1000 instances took {elapsed:?} (limit 5 s)"
        );
        Ok(())
    });
}

// -- criterion 3 --------------------------------------------------------------

fn check_count_oracle_instances(instances: usize, seed: u64) -> Result<(), String> {
    let catalog = default_catalog();
    let mapping = default_mapping();
    let set_supported = catalog
        .supported_elements("setInTheField", bac_core::ontology::Platform::Prototype)
        .unwrap();
    let set_filter = mapping
        .type_filter(&set_supported, "setInTheField")
        .map_err(|e| e.to_string())?;
    let story = parse_story(
        "T\nScenario: S\nWhen I set \"v\" in the field \"Companies\"\n",
        "count.story",
    )
    .map_err(|e| e.to_string())?;

    let mut rng = StdRng::seed_from_u64(seed);
    for instance in 0..instances {
        let proto = common::gen_prototype(&mut rng, 12, 4);
        let filter = common::gen_type_filter(&mut rng);
        for field in ["Companies", "Round Trip", "Departure Date", "Other", "Absent"] {
            let counted = count_matching_elements(field, &filter, &proto);
            let oracle = common::oracle_count(field, &filter, &proto);
            ensure!(
                counted == oracle,
                "instance {instance}: field {field:?}: {counted} vs oracle {oracle}"
            );
        }

        // verdict trichotomy along the real assessment path
        let count = count_matching_elements("Companies", &set_filter, &proto);
        let results = assess_prototype(&story, &proto, catalog, mapping, RunMode::FailFast)
            .map_err(|e| e.to_string())?;
        let status = results[0].status;
        match count {
            1 => ensure!(
                status == Status::Passed,
                "instance {instance}: count 1 but status {status:?}"
            ),
            _ => ensure!(
                status == Status::Failed,
                "instance {instance}: count {count} but status {status:?}"
            ),
        }
    }
    Ok(())
}

#[test]
fn criterion_3_prototype_count_oracle() {
    criterion(3, "prototype counts equal the brute-force oracle", || {
        let started = Instant::now();
        check_count_oracle_instances(1000, 43)?;
        let elapsed = started.elapsed();
        ensure!(
            elapsed < Duration::from_secs(5),
            "1000 instances took {elapsed:?} (limit 5 s)"
        );
        Ok(())
    });
}

// -- criterion 4 --------------------------------------------------------------

fn load_table2_scenarios() -> Result<Vec<EnrichedTaskScenario>, String> {
    let models = vec![bac_core::taskcheck::parse_task_model(
        &std::fs::read_to_string(fixture("table2/booking.hmst")).map_err(|e| e.to_string())?,
        "booking.hmst",
    )
    .map_err(|e| e.to_string())?];
    bac_core::taskcheck::load_scenarios(&[fixture("table2/roundtrip.scen")], &models)
        .map_err(|e| e.to_string())
}

#[test]
fn criterion_4_desk_scale_verdict_pattern() {
    criterion(4, "desk-scale reproduction of the reference verdict pattern", || {
        let catalog = default_catalog();
        let story = parse_story(
            &std::fs::read_to_string(fixture("table2/flight_tickets_search.story"))
                .map_err(|e| e.to_string())?,
            "flight_tickets_search.story",
        )
        .map_err(|e| e.to_string())?;

        // task scenarios: goTo found at 1, inform+choose expects 2/3
        let scenarios = load_table2_scenarios()?;
        let models = vec![bac_core::taskcheck::parse_task_model(
            &std::fs::read_to_string(fixture("table2/booking.hmst")).map_err(|e| e.to_string())?,
            "booking.hmst",
        )
        .map_err(|e| e.to_string())?];
        let options = TaskAssessOptions::default().with_models(&models);
        let tasks = assess_task_scenarios(&story, &scenarios, catalog, &options);
        ensure!(
            tasks.results[0].status == Status::Passed
                && tasks.results[0].evidence == "Expected: 1 | Actual: 1",
            "go-to step: {:?} {:?}",
            tasks.results[0].status,
            tasks.results[0].evidence
        );
        ensure!(
            tasks.results[1].status == Status::Failed
                && tasks.results[1].evidence.starts_with("Expected: 2/3 | Actual: 0"),
            "inform+choose step: {:?} {:?}",
            tasks.results[1].status,
            tasks.results[1].evidence
        );
        ensure!(
            tasks.results[2].classification == Some(InconsistencyKind::TaskNotExtracted),
            "round-trip task classification: {:?}",
            tasks.results[2].classification
        );

        // prototype: goTo count 0, choose "Round Trip" count 1
        let proto = parse_prototype(
            &std::fs::read_to_string(fixture("table2/book_flights.bmml"))
                .map_err(|e| e.to_string())?,
            "book_flights.bmml",
        )
        .map_err(|e| e.to_string())?;
        let proto_results =
            assess_prototype(&story, &proto, catalog, default_mapping(), RunMode::Continue)
                .map_err(|e| e.to_string())?;
        ensure!(
            proto_results[0].status == Status::Failed
                && proto_results[0].evidence.starts_with("Expected: 1 | Actual: 0"),
            "prototype go-to: {:?} {:?}",
            proto_results[0].status,
            proto_results[0].evidence
        );
        ensure!(
            proto_results[1].status == Status::Passed
                && proto_results[1].evidence.starts_with("Expected: 1 | Actual: 1"),
            "prototype inform+choose: {:?} {:?}",
            proto_results[1].status,
            proto_results[1].evidence
        );
        ensure!(
            proto_results[2].status == Status::Passed
                && proto_results[2].evidence.starts_with("Expected: 1 | Actual: 1"),
            "prototype round trip: {:?} {:?}",
            proto_results[2].status,
            proto_results[2].evidence
        );
        ensure!(
            proto_results[3].classification
                == Some(InconsistencyKind::UntraceableInteraction),
            "prototype message: {:?}",
            proto_results[3].classification
        );

        // final GUI: pass under the name "Flight Search", then the
        // three-character company field rejects "Air France"
        let gui_story = parse_story(
            &std::fs::read_to_string(fixture("table2/flight_search_gui.story"))
                .map_err(|e| e.to_string())?,
            "flight_search_gui.story",
        )
        .map_err(|e| e.to_string())?;
        let page_map = load_page_map(&fixture("table2/pagemap.toml")).map_err(|e| e.to_string())?;
        let mut runner = StaticDomRunner::new(page_map.clone());
        let gui_results = assess_final_gui(
            &gui_story,
            &page_map,
            catalog,
            &mut runner,
            &GuiAssessOptions::default(),
        );
        ensure!(
            gui_results[0].status == Status::Passed
                && gui_results[0].evidence == "Expected: Flight Search | Actual: Flight Search",
            "gui go-to: {:?} {:?}",
            gui_results[0].status,
            gui_results[0].evidence
        );
        ensure!(
            gui_results[2].status == Status::Passed,
            "gui round trip: {:?}",
            gui_results[2].status
        );
        let air_france = &gui_results[3];
        ensure!(
            air_france.status == Status::Failed
                && air_france.classification == Some(InconsistencyKind::ValueDoesNotFit)
                && air_france.evidence.contains("Value does not fit the field"),
            "gui company field: {:?} {:?}",
            air_france.status,
            air_france.evidence
        );

        // the three-searchbox prototype drives check-proto to exit 1
        let companies_story = fixture("table2");
        let _ = companies_story;
        let status = bac()
            .args([
                "check-proto",
                "--stories",
                &fixture_str("table2/flight_tickets_search.story"),
                "--prototype",
                &fixture_str("table2/three_searchboxes.bmml"),
            ])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            status.status.code() == Some(1),
            "check-proto on the three-searchbox fixture exited {:?}",
            status.status.code()
        );
        Ok(())
    });
}

// -- criterion 5 --------------------------------------------------------------

fn model_with(names: &[&str]) -> TaskModelRef {
    TaskModelRef {
        tasks: names
            .iter()
            .enumerate()
            .map(|(i, n)| {
                (
                    format!("t{i}"),
                    TaskInfo {
                        name: n.to_string(),
                        optional: false,
                        task_type: "Interactive".to_string(),
                    },
                )
            })
            .collect(),
        objects: HashMap::new(),
        source_path: "inline.hmst".to_string(),
    }
}

fn scenario_of(tasks: &[&str]) -> EnrichedTaskScenario {
    EnrichedTaskScenario {
        name: "fixture".to_string(),
        tasks: tasks
            .iter()
            .map(|n| EnrichedTask {
                name: n.to_string(),
                optional: false,
                value: None,
            })
            .collect(),
    }
}

/// The result list must contain exactly one failure, classified as `kind`.
fn exactly_one_failure(
    results: &[StepResult],
    kind: InconsistencyKind,
    label: &str,
) -> Result<(), String> {
    let failures: Vec<&StepResult> = results
        .iter()
        .filter(|r| r.status == Status::Failed)
        .collect();
    ensure!(
        failures.len() == 1,
        "{label}: {} failures, expected exactly 1: {results:?}",
        failures.len()
    );
    ensure!(
        failures[0].classification == Some(kind),
        "{label}: classified {:?}, expected {kind:?}",
        failures[0].classification
    );
    ensure!(
        results
            .iter()
            .all(|r| r.status != Status::Unrecognized),
        "{label}: unrecognized steps present"
    );
    Ok(())
}

#[test]
fn criterion_5_taxonomy_coverage() {
    criterion(5, "one dedicated fixture per inconsistency category", || {
        let catalog = default_catalog();

        // --- task-model categories ---
        // (label, story, scenario tasks, model tasks, expected kind)
        type TaskCase<'a> = (&'a str, &'a str, Vec<&'a str>, Vec<&'a str>, InconsistencyKind);
        let task_cases: Vec<TaskCase> = vec![
            (
                "different task name",
                "T\nScenario: S\nWhen I select \"Direct Flights Only\"\n",
                vec!["Select Only Direct Flights"],
                vec![],
                InconsistencyKind::DifferentTaskName,
            ),
            (
                "task not extracted",
                "T\nScenario: S\nGiven I go to \"Book Flights\"\nWhen I choose \"Round Trip\"\n",
                vec!["Go to Book Flights"],
                vec!["Go to Book Flights", "Choose Round Trip"],
                InconsistencyKind::TaskNotExtracted,
            ),
            (
                "wrong position",
                "T\nScenario: S\nGiven I go to \"A\"\nWhen I choose \"B\"\nWhen I select \"C\"\nWhen I click on \"D\"\nGiven I go to \"E\"\nWhen I set \"v\" in the field \"Departure Date\"\n",
                vec![
                    "Go to A",
                    "Choose B",
                    "Select C",
                    "Click on D",
                    "Go to E",
                    "Provide List of Airports",
                    "Provide List of Airports",
                    "Set Departure Date",
                ],
                vec![],
                InconsistencyKind::WrongPosition,
            ),
            (
                "unpaired behavior",
                "T\nScenario: S\nWhen I set \"6\" in the field \"Timeframe\"\n",
                vec!["Adjust Timeframe"],
                vec!["Adjust Timeframe"],
                InconsistencyKind::UnpairedBehavior,
            ),
            (
                "specification/modeling conflict",
                "T\nScenario: S\nWhen I set \"6\" in the field \"Timeframe\"\n",
                vec!["Click on Timeframe"],
                vec!["Click on Timeframe"],
                InconsistencyKind::SpecModelConflict,
            ),
            (
                "equivalent behavior missing",
                "T\nScenario: S\nGiven I go to \"Book Flights\"\nWhen I choose \"Premium Seat\"\n",
                vec!["Go to Book Flights"],
                vec!["Go to Book Flights"],
                InconsistencyKind::EquivalentBehaviorMissing,
            ),
        ];
        for (label, story_src, scenario_tasks, model_tasks, kind) in task_cases {
            let story = parse_story(story_src, "tax.story").map_err(|e| e.to_string())?;
            let scenarios = vec![scenario_of(&scenario_tasks)];
            let options = if model_tasks.is_empty() {
                TaskAssessOptions::default()
            } else {
                TaskAssessOptions::default().with_models(&[model_with(&model_tasks)])
            };
            let assessment = assess_task_scenarios(&story, &scenarios, catalog, &options);
            exactly_one_failure(&assessment.results, kind, label)?;
        }

        // --- prototype categories ---
        let searchbox_near = r#"<mockup name="m"><controls>
            <control controlID="0" controlTypeID="com.balsamiq.mockups::CheckBox" isInGroup="-1">
              <controlProperties><text>Only%20direct%20flights</text></controlProperties>
            </control></controls></mockup>"#;
        let label_split = std::fs::read_to_string(fixture("table2/book_flights.bmml"))
            .map_err(|e| e.to_string())?;
        let empty_proto = r#"<mockup name="m"><controls/></mockup>"#;
        let text_input = r#"<mockup name="m"><controls>
            <control controlID="0" controlTypeID="com.balsamiq.mockups::TextInput" isInGroup="-1">
              <controlProperties><text>Departure</text></controlProperties>
            </control></controls></mockup>"#;
        let three = std::fs::read_to_string(fixture("table2/three_searchboxes.bmml"))
            .map_err(|e| e.to_string())?;

        let proto_cases: Vec<(&str, &str, &str, InconsistencyKind)> = vec![
            (
                "expected/actual conflict",
                "T\nScenario: S\nWhen I select \"Direct Flights Only\"\n",
                searchbox_near,
                InconsistencyKind::ExpectedActualConflict,
            ),
            (
                "label and element in different groups",
                "T\nScenario: S\nWhen I set \"Sam, Déc 1, 2018\" in the field \"Departure Date\"\n",
                &label_split,
                InconsistencyKind::LabelElementGroupSplit,
            ),
            (
                "inexistent element",
                "T\nScenario: S\nWhen I set \"2\" in the field \"Number of Passengers\"\n",
                empty_proto,
                InconsistencyKind::InexistentElement,
            ),
            (
                "semantically incompatible element",
                "T\nScenario: S\nWhen I click on \"Departure\"\n",
                text_input,
                InconsistencyKind::SemanticallyIncompatibleElement,
            ),
            (
                "ambiguous element",
                "T\nScenario: S\nWhen I set \"Air France\" in the field \"Companies\"\n",
                &three,
                InconsistencyKind::AmbiguousElement,
            ),
            (
                "untraceable interaction",
                "T\nScenario: S\nThen will be displayed \"2. Sélectionner un voyage\"\n",
                empty_proto,
                InconsistencyKind::UntraceableInteraction,
            ),
        ];
        for (label, story_src, proto_xml, kind) in proto_cases {
            let story = parse_story(story_src, "tax.story").map_err(|e| e.to_string())?;
            let proto = parse_prototype(proto_xml, "tax.bmml").map_err(|e| e.to_string())?;
            let results =
                assess_prototype(&story, &proto, catalog, default_mapping(), RunMode::FailFast)
                    .map_err(|e| e.to_string())?;
            exactly_one_failure(&results, kind, label)?;
        }

        // --- final-GUI categories (one scenario per category) ---
        let story = parse_story(
            &std::fs::read_to_string(fixture("table2/gui_taxonomy.story"))
                .map_err(|e| e.to_string())?,
            "gui_taxonomy.story",
        )
        .map_err(|e| e.to_string())?;
        let page_map = load_page_map(&fixture("table2/pagemap.toml")).map_err(|e| e.to_string())?;
        let mut runner = StaticDomRunner::new(page_map.clone());
        let results = assess_final_gui(
            &story,
            &page_map,
            catalog,
            &mut runner,
            &GuiAssessOptions::default(),
        );
        let gui_expect = [
            ("message not identified", InconsistencyKind::MessageNotIdentified),
            ("element or value not found", InconsistencyKind::ElementOrValueNotFound),
            ("inexistent element", InconsistencyKind::InexistentElement),
            ("value does not fit", InconsistencyKind::ValueDoesNotFit),
            ("field already filled", InconsistencyKind::FieldAlreadyFilled),
            ("element not identified", InconsistencyKind::ElementNotIdentified),
        ];
        for (scenario_title, kind) in gui_expect {
            let scenario_results: Vec<StepResult> = results
                .iter()
                .filter(|r| r.scenario_title == scenario_title)
                .cloned()
                .collect();
            ensure!(
                !scenario_results.is_empty(),
                "gui scenario {scenario_title:?} produced no results"
            );
            exactly_one_failure(&scenario_results, kind, scenario_title)?;
        }
        Ok(())
    });
}

// -- criterion 6 --------------------------------------------------------------

#[test]
fn criterion_6_lint_fidelity() {
    criterion(6, "lint flags exactly the unknown step", || {
        let source = std::fs::read_to_string(fixture("stories/return_tickets_search.story"))
            .map_err(|e| e.to_string())?;
        let story = parse_story(&source, "return_tickets_search.story").map_err(|e| e.to_string())?;
        let findings = lint_stories(&[story], default_catalog());
        ensure!(
            findings.len() == 1,
            "expected exactly one finding, got {findings:?}"
        );
        ensure!(
            findings[0].step_text.starts_with("I set the date"),
            "flagged the wrong step: {:?}",
            findings[0].step_text
        );
        ensure!(findings[0].line == 9, "flagged line {}", findings[0].line);

        // and through the CLI: exit 1 with the same single flag
        let output = bac()
            .args(["lint", "--stories", &fixture_str("stories/return_tickets_search.story")])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            output.status.code() == Some(1),
            "lint exit code {:?}",
            output.status.code()
        );
        let stdout = String::from_utf8_lossy(&output.stdout);
        ensure!(
            stdout.contains("9: step is not recognized: I set the date"),
            "lint output: {stdout}"
        );
        ensure!(
            stdout.contains("9 step(s) checked, 1 not recognized"),
            "lint summary: {stdout}"
        );
        Ok(())
    });
}

// -- criterion 7 --------------------------------------------------------------

fn run_check_gui(report: &std::path::Path) -> Result<std::process::Output, String> {
    bac()
        .args([
            "check-gui",
            "--stories",
            &fixture_str("table2/flight_search_gui.story"),
            &fixture_str("table2/select_flight_gui.story"),
            &fixture_str("table2/confirm_flight_gui.story"),
            &fixture_str("table2/gui_taxonomy.story"),
            "--page-map",
            &fixture_str("table2/pagemap.toml"),
            "--seed",
            "0",
            "--pending",
            "Confirm a Flight Selection:3",
            "--pending",
            "Confirm a Flight Selection:4",
            "--report-out",
            &report.display().to_string(),
        ])
        .output()
        .map_err(|e| e.to_string())
}

fn prefix_property(statuses: &[Status]) -> bool {
    let stopper = statuses
        .iter()
        .position(|s| matches!(s, Status::Failed | Status::Unrecognized));
    match stopper {
        None => !statuses.contains(&Status::NotPerformed),
        Some(i) => {
            statuses[..i]
                .iter()
                .all(|s| matches!(s, Status::Passed | Status::Pending | Status::Skipped))
                && statuses[i + 1..].iter().all(|s| *s == Status::NotPerformed)
        }
    }
}

#[test]
fn criterion_7_determinism_and_fail_fast() {
    criterion(7, "byte-identical seeded reports and fail-fast shape", || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let report_a = dir.path().join("a.json");
        let report_b = dir.path().join("b.json");
        let out_a = run_check_gui(&report_a)?;
        let out_b = run_check_gui(&report_b)?;
        ensure!(
            out_a.status.code() == Some(1),
            "expected exit 1 (taxonomy failures present), got {:?}",
            out_a.status.code()
        );
        ensure!(
            out_a.status.code() == out_b.status.code(),
            "exit codes differ between runs"
        );
        let bytes_a = std::fs::read(&report_a).map_err(|e| e.to_string())?;
        let bytes_b = std::fs::read(&report_b).map_err(|e| e.to_string())?;
        ensure!(bytes_a == bytes_b, "reports differ between identical runs");

        let report: bac_core::report::JsonReport =
            serde_json::from_slice(&bytes_a).map_err(|e| e.to_string())?;
        let mut scenarios_checked = 0;
        for story in &report.stories {
            for scenario in &story.scenarios {
                let statuses: Vec<Status> = scenario.steps.iter().map(|s| s.status).collect();
                ensure!(
                    prefix_property(&statuses),
                    "scenario {:?} violates the fail-fast prefix shape: {statuses:?}",
                    scenario.title
                );
                scenarios_checked += 1;
            }
        }
        ensure!(scenarios_checked >= 8, "only {scenarios_checked} scenarios in the report");

        // the pending markers kept the confirmation steps unexecuted
        let confirm = report
            .stories
            .iter()
            .flat_map(|s| &s.scenarios)
            .find(|s| s.title == "Confirm a Flight Selection")
            .ok_or("confirmation scenario missing from the report")?;
        let statuses: Vec<Status> = confirm.steps.iter().map(|s| s.status).collect();
        ensure!(
            statuses == vec![Status::Passed, Status::Passed, Status::Pending, Status::Pending],
            "confirmation scenario statuses: {statuses:?}"
        );
        Ok(())
    });
}

// -- criterion 8 --------------------------------------------------------------

#[test]
fn criterion_8_end_to_end_runtime() {
    criterion(8, "representative end-to-end batch under 10 s", || {
        let started = Instant::now();

        check_task_oracle_instances(1000, 44)?;
        check_count_oracle_instances(1000, 45)?;

        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let report = dir.path().join("all.json");
        let output = bac()
            .args([
                "check-all",
                "--stories",
                &fixture_str("table2/flight_tickets_search.story"),
                "--scenarios",
                &fixture_str("table2/roundtrip.scen"),
                "--models",
                &fixture_str("table2/booking.hmst"),
                "--prototype",
                &fixture_str("table2/book_flights.bmml"),
                "--page-map",
                &fixture_str("table2/pagemap.toml"),
                "--mode",
                "continue",
                "--report-out",
                &report.display().to_string(),
            ])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            output.status.code() == Some(1),
            "check-all exit code {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        );
        let parsed: bac_core::report::JsonReport = serde_json::from_str(
            &std::fs::read_to_string(&report).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            parsed.summary.task_model.analyzed > 0
                && parsed.summary.prototype.analyzed > 0
                && parsed.summary.final_gui.analyzed > 0,
            "check-all did not cover all three artifacts: {:?}",
            parsed.summary
        );
        let stdout = String::from_utf8_lossy(&output.stdout);
        ensure!(
            stdout.contains("Task not found!") && stdout.contains("No Value"),
            "task log lines missing from check-all output"
        );

        let elapsed = started.elapsed();
        ensure!(
            elapsed < Duration::from_secs(10),
            "batch took {elapsed:?} (limit 10 s)"
        );
        Ok(())
    });
}
