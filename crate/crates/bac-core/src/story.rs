//! Parser for `.story` files: a title line, an optional narrative block,
//! and scenarios made of Given/When/Then steps.
//!
//! Quoted segments of a step are extracted as arguments in order, and
//! `And`/`But` steps inherit the keyword of the nearest preceding
//! non-continuation step.

use std::fmt;

use thiserror::Error;

use crate::text::normalize_quotes;

/// Resolved step kind after continuation keywords are folded away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Keyword {
    Given,
    When,
    Then,
}

impl Keyword {
    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Given => "Given",
            Keyword::When => "When",
            Keyword::Then => "Then",
        }
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Keyword exactly as written in the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawKeyword {
    Given,
    When,
    Then,
    And,
    But,
}

impl RawKeyword {
    fn from_word(word: &str) -> Option<Self> {
        match word.to_ascii_lowercase().as_str() {
            "given" => Some(RawKeyword::Given),
            "when" => Some(RawKeyword::When),
            "then" => Some(RawKeyword::Then),
            "and" => Some(RawKeyword::And),
            "but" => Some(RawKeyword::But),
            _ => None,
        }
    }

    pub fn is_continuation(self) -> bool {
        matches!(self, RawKeyword::And | RawKeyword::But)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RawKeyword::Given => "Given",
            RawKeyword::When => "When",
            RawKeyword::Then => "Then",
            RawKeyword::And => "And",
            RawKeyword::But => "But",
        }
    }

    fn resolved(self) -> Option<Keyword> {
        match self {
            RawKeyword::Given => Some(Keyword::Given),
            RawKeyword::When => Some(Keyword::When),
            RawKeyword::Then => Some(Keyword::Then),
            RawKeyword::And | RawKeyword::But => None,
        }
    }
}

/// One step of a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub raw_keyword: RawKeyword,
    /// Keyword after And/But resolution.
    pub keyword: Keyword,
    /// Step text with the keyword stripped.
    pub text: String,
    /// Contents of the double-quoted segments of `text`, in order.
    pub args: Vec<String>,
    /// 1-based line number in the source file.
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub title: String,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Narrative {
    pub role: String,
    pub feature: String,
    pub benefit: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Story {
    pub title: String,
    pub narrative: Option<Narrative>,
    pub scenarios: Vec<Scenario>,
    pub source_path: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoryError {
    #[error("{path}:{line}: step appears before any \"Scenario:\" header")]
    StepOutsideScenario { path: String, line: usize },
    #[error("{path}:{line}: \"{keyword}\" step has no preceding Given/When/Then")]
    DanglingContinuation {
        path: String,
        line: usize,
        keyword: String,
    },
    #[error("{path}:{line}: unterminated quote")]
    UnterminatedQuote { path: String, line: usize },
    #[error("{path}:{line}: scenario \"{title}\" has no steps")]
    EmptyScenario {
        path: String,
        line: usize,
        title: String,
    },
    #[error("{path}:{line}: scenario header has no title")]
    UntitledScenario { path: String, line: usize },
    #[error("{path}:{line}: narrative block must contain \"As a\", \"I want\" and \"So that\" lines")]
    IncompleteNarrative { path: String, line: usize },
    #[error("{path}: empty story (no scenarios)")]
    EmptyStory { path: String },
    #[error("{path}: story has no title line")]
    MissingTitle { path: String },
}

/// Extracts the quoted arguments of a step line. The line must contain an
/// even number of `"` characters.
fn extract_args(text: &str) -> Option<Vec<String>> {
    let parts: Vec<&str> = text.split('"').collect();
    if parts.len().is_multiple_of(2) {
        return None; // odd number of quotes
    }
    Some(
        parts
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 1)
            .map(|(_, s)| s.to_string())
            .collect(),
    )
}

fn strip_trailing_punct(s: &str) -> &str {
    s.trim_end_matches(['.', ',', ';', ':', '!'])
}

/// Recognizes a `Scenario:` header (an optional number before the colon is
/// tolerated) and returns its title.
fn scenario_title(trimmed: &str) -> Option<&str> {
    let lower = trimmed.to_ascii_lowercase();
    if !lower.starts_with("scenario") {
        return None;
    }
    let rest = &trimmed["scenario".len()..];
    let rest = rest
        .trim_start()
        .trim_start_matches(|c: char| c.is_ascii_digit());
    rest.trim_start().strip_prefix(':').map(str::trim)
}

/// Parses story source text. `path` is used only for error reporting and
/// provenance.
pub fn parse_story(source: &str, path: &str) -> Result<Story, StoryError> {
    let source = normalize_quotes(source);
    let lines: Vec<&str> = source.lines().collect();

    let mut title: Option<String> = None;
    let mut narrative: Option<Narrative> = None;
    let mut scenarios: Vec<Scenario> = Vec::new();
    // (header line, title, steps) of the scenario being collected
    let mut current: Option<(usize, String, Vec<Step>)> = None;

    let mut idx = 0usize;
    while idx < lines.len() {
        let line_no = idx + 1;
        let raw = lines[idx];
        idx += 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }

        if let Some(scn_title) = scenario_title(trimmed) {
            if scn_title.is_empty() {
                return Err(StoryError::UntitledScenario {
                    path: path.to_string(),
                    line: line_no,
                });
            }
            if let Some((hdr, t, steps)) = current.take() {
                if steps.is_empty() {
                    return Err(StoryError::EmptyScenario {
                        path: path.to_string(),
                        line: hdr,
                        title: t,
                    });
                }
                scenarios.push(Scenario { title: t, steps });
            }
            current = Some((line_no, scn_title.to_string(), Vec::new()));
            continue;
        }

        let first_word = trimmed.split_whitespace().next().unwrap_or("");
        if let Some(raw_kw) = RawKeyword::from_word(first_word) {
            let Some((_, _, steps)) = current.as_mut() else {
                return Err(StoryError::StepOutsideScenario {
                    path: path.to_string(),
                    line: line_no,
                });
            };
            let text = trimmed[first_word.len()..].trim().to_string();
            let args = extract_args(&text).ok_or(StoryError::UnterminatedQuote {
                path: path.to_string(),
                line: line_no,
            })?;
            let keyword = match raw_kw.resolved() {
                Some(k) => k,
                None => match steps.last() {
                    Some(prev) => prev.keyword,
                    None => {
                        return Err(StoryError::DanglingContinuation {
                            path: path.to_string(),
                            line: line_no,
                            keyword: raw_kw.as_str().to_string(),
                        })
                    }
                },
            };
            steps.push(Step {
                raw_keyword: raw_kw,
                keyword,
                text,
                args,
                line: line_no,
            });
            continue;
        }

        if title.is_none() && current.is_none() {
            title = Some(trimmed.to_string());
            continue;
        }

        if current.is_none()
            && narrative.is_none()
            && trimmed.to_ascii_lowercase().starts_with("narrative:")
        {
            let header_line = line_no;
            let mut fields: Vec<String> = Vec::new();
            let prefixes: [&[&str]; 3] = [&["As an", "As a"], &["I want"], &["So that"]];
            for expected in prefixes {
                let mut found = None;
                while idx < lines.len() {
                    let cand = lines[idx].trim();
                    idx += 1;
                    if cand.is_empty() || cand.starts_with('#') {
                        continue;
                    }
                    found = Some(cand);
                    break;
                }
                let value = found
                    .and_then(|cand| {
                        expected.iter().find_map(|p| {
                            cand.to_ascii_lowercase()
                                .starts_with(&p.to_ascii_lowercase())
                                .then(|| strip_trailing_punct(cand[p.len()..].trim()).trim())
                        })
                    })
                    .filter(|v| !v.is_empty())
                    .ok_or(StoryError::IncompleteNarrative {
                        path: path.to_string(),
                        line: header_line,
                    })?;
                fields.push(value.to_string());
            }
            narrative = Some(Narrative {
                benefit: fields.pop().unwrap(),
                feature: fields.pop().unwrap(),
                role: fields.pop().unwrap(),
            });
            continue;
        }

        // Any other line (free text, "Acceptance Criteria:" and the like) is
        // treated as description and skipped.
    }

    if let Some((hdr, t, steps)) = current.take() {
        if steps.is_empty() {
            return Err(StoryError::EmptyScenario {
                path: path.to_string(),
                line: hdr,
                title: t,
            });
        }
        scenarios.push(Scenario { title: t, steps });
    }

    if scenarios.is_empty() {
        return Err(StoryError::EmptyStory {
            path: path.to_string(),
        });
    }
    let Some(title) = title else {
        return Err(StoryError::MissingTitle {
            path: path.to_string(),
        });
    };

    Ok(Story {
        title,
        narrative,
        scenarios,
        source_path: path.to_string(),
    })
}

/// Reads and parses a story file.
pub fn load_story(path: &std::path::Path) -> Result<Story, crate::Error> {
    let source = std::fs::read_to_string(path).map_err(|e| crate::Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_story(&source, &path.display().to_string()).map_err(Into::into)
}

impl Story {
    /// Renders the story in canonical form: re-parsing the output yields a
    /// structurally equal story.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.title);
        out.push('\n');
        if let Some(n) = &self.narrative {
            out.push_str("\nNarrative:\n");
            out.push_str(&format!("As a {}\n", n.role));
            out.push_str(&format!("I want {}\n", n.feature));
            out.push_str(&format!("So that {}\n", n.benefit));
        }
        for scenario in &self.scenarios {
            out.push_str(&format!("\nScenario: {}\n", scenario.title));
            for step in &scenario.steps {
                out.push_str(&format!("{} {}\n", step.raw_keyword.as_str(), step.text));
            }
        }
        out
    }
}
