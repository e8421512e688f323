//! Shared generators and brute-force oracles for the property and
//! acceptance suites. The oracles deliberately re-derive results by direct
//! enumeration, independent of the library's search and counting paths.

use rand::rngs::StdRng;
use rand::Rng;

use bac_core::protocheck::{Prototype, PrototypeControl, TypeFilter};
use bac_core::taskcheck::{EnrichedTask, EnrichedTaskScenario};
use bac_core::text::match_key;

// --- random BDD stories over the shipped vocabulary -------------------------

const FIELD_VOCAB: &[&str] = &[
    "Alpha",
    "Beta",
    "Round Trip",
    "Departure Date",
    "Search",
    "Companies",
];
const VALUE_VOCAB: &[&str] = &["1", "x y", "08:00", "Sam, Déc 1, 2018"];

/// One random step: the source line and how many task names it expands to.
fn gen_step(rng: &mut StdRng) -> (String, usize) {
    let field = FIELD_VOCAB[rng.gen_range(0..FIELD_VOCAB.len())];
    let value = VALUE_VOCAB[rng.gen_range(0..VALUE_VOCAB.len())];
    let other = FIELD_VOCAB[rng.gen_range(0..FIELD_VOCAB.len())];
    match rng.gen_range(0..7) {
        0 => (format!("Given I go to \"{field}\""), 1),
        1 => (format!("When I choose \"{field}\""), 1),
        2 => (format!("When I select \"{field}\""), 1),
        3 => (format!("When I set \"{value}\" in the field \"{field}\""), 1),
        4 => (
            format!("When I inform \"{value}\" and choose \"{other}\" in the field \"{field}\""),
            2,
        ),
        5 => (format!("When I click on \"{field}\""), 1),
        _ => (format!("When I submit \"{field}\""), 1),
    }
}

/// A story of up to `max_steps` steps plus the per-step expansion counts.
pub fn gen_story_source(rng: &mut StdRng, max_steps: usize) -> (String, Vec<usize>) {
    let count = rng.gen_range(1..=max_steps);
    let mut src = String::from("Generated\n\nScenario: G\n");
    let mut expansions = Vec::with_capacity(count);
    for _ in 0..count {
        let (line, n) = gen_step(rng);
        src.push_str(&line);
        src.push('\n');
        expansions.push(n);
    }
    (src, expansions)
}

/// Task names that sometimes collide with the generated steps' derived
/// tasks and sometimes do not.
fn gen_task_name(rng: &mut StdRng) -> String {
    let field = FIELD_VOCAB[rng.gen_range(0..FIELD_VOCAB.len())];
    let value = VALUE_VOCAB[rng.gen_range(0..VALUE_VOCAB.len())];
    match rng.gen_range(0..8) {
        0 => format!("Go to {field}"),
        1 => format!("Choose {field}"),
        2 => format!("Select {field}"),
        3 => format!("Set {field}"),
        4 => format!("Inform {value}"),
        5 => format!("Click on {field}"),
        6 => "Provide List of Airports".to_string(),
        _ => format!("Adjust {field}"),
    }
}

/// Up to `max_scenarios` scenarios of up to `max_tasks` tasks each.
pub fn gen_task_scenarios(
    rng: &mut StdRng,
    max_scenarios: usize,
    max_tasks: usize,
) -> Vec<EnrichedTaskScenario> {
    let n = rng.gen_range(1..=max_scenarios);
    (0..n)
        .map(|i| EnrichedTaskScenario {
            name: format!("scenario-{i}"),
            tasks: (0..rng.gen_range(0..=max_tasks))
                .map(|_| EnrichedTask {
                    name: gen_task_name(rng),
                    optional: rng.gen_bool(0.2),
                    value: if rng.gen_bool(0.3) {
                        Some(VALUE_VOCAB[rng.gen_range(0..VALUE_VOCAB.len())].to_string())
                    } else {
                        None
                    },
                })
                .collect(),
        })
        .collect()
}

/// Brute-force position scan: every index of every scenario compared by
/// normalized name.
pub fn oracle_positions(scenario: &EnrichedTaskScenario, searched: &str) -> Vec<usize> {
    let key = match_key(searched);
    let mut positions = Vec::new();
    for (i, task) in scenario.tasks.iter().enumerate() {
        if match_key(&task.name) == key {
            positions.push(i + 1);
        }
    }
    positions
}

// --- random prototypes -------------------------------------------------------

const CONTROL_TYPES: &[&str] = &[
    "com.balsamiq.mockups::RadioButton",
    "com.balsamiq.mockups::CheckBox",
    "com.balsamiq.mockups::TextInput",
    "com.balsamiq.mockups::SearchBox",
    "com.balsamiq.mockups::Calendar",
    "com.balsamiq.mockups::Label",
    "com.balsamiq.mockups::Button",
    "com.balsamiq.mockups::Paragraph",
];

const CONTROL_TEXTS: &[&str] = &["Companies", "Round Trip", "Departure Date", "Other"];

/// A prototype of up to `max_controls` controls spread over up to
/// `max_groups` groups.
pub fn gen_prototype(rng: &mut StdRng, max_controls: usize, max_groups: usize) -> Prototype {
    let count = rng.gen_range(0..=max_controls);
    let controls = (0..count)
        .map(|i| PrototypeControl {
            control_id: i.to_string(),
            control_type: CONTROL_TYPES[rng.gen_range(0..CONTROL_TYPES.len())].to_string(),
            text: if rng.gen_bool(0.75) {
                Some(CONTROL_TEXTS[rng.gen_range(0..CONTROL_TEXTS.len())].to_string())
            } else {
                None
            },
            group_id: if rng.gen_bool(0.5) {
                Some(format!("g{}", rng.gen_range(0..max_groups.max(1))))
            } else {
                None
            },
        })
        .collect();
    Prototype {
        controls,
        source_path: "generated.bmml".to_string(),
        mockup_name: "generated".to_string(),
        decode_warnings: Vec::new(),
    }
}

/// A random non-empty set of admitted control types.
pub fn gen_type_filter(rng: &mut StdRng) -> TypeFilter {
    let mut ids = std::collections::HashSet::new();
    let n = rng.gen_range(1..=4);
    for _ in 0..n {
        ids.insert(CONTROL_TYPES[rng.gen_range(0..CONTROL_TYPES.len())].to_string());
    }
    TypeFilter {
        wildcard: rng.gen_bool(0.05),
        ids,
    }
}

/// Independent count: builds the group table explicitly, then applies the
/// two counting rules by direct enumeration.
pub fn oracle_count(field: &str, filter: &TypeFilter, proto: &Prototype) -> usize {
    use std::collections::BTreeMap;
    let key = match_key(field);
    let text_eq = |c: &PrototypeControl| -> bool {
        c.text.as_deref().map(|t| match_key(t) == key).unwrap_or(false)
    };
    let is_label = |c: &PrototypeControl| c.control_type.ends_with("::Label");

    let mut total = 0usize;
    // rule 1: standalone controls carrying the name with an admitted type
    for c in &proto.controls {
        if c.group_id.is_none() && text_eq(c) && filter.admits(&c.control_type) {
            total += 1;
        }
    }
    // rule 2: per group, one hit per name-carrying label backed by a sibling
    let mut groups: BTreeMap<&str, Vec<&PrototypeControl>> = BTreeMap::new();
    for c in &proto.controls {
        if let Some(g) = &c.group_id {
            groups.entry(g.as_str()).or_default().push(c);
        }
    }
    for members in groups.values() {
        for label in members.iter().filter(|c| is_label(c) && text_eq(c)) {
            let backed = members
                .iter()
                .any(|c| c.control_id != label.control_id && filter.admits(&c.control_type));
            if backed {
                total += 1;
            }
        }
    }
    total
}
