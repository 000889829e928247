//! Prompt rendering from versioned text templates.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::Difficulty;

use super::{TaskError, TaskInstance};

pub const TEMPLATE_VERSION: u32 = 1;

const STRUCTURAL: &str = include_str!("../../templates/structural_v1.txt");
const NEUTRAL: &str = include_str!("../../templates/neutral_v1.txt");
const KNOWLEDGE_BASE: &str = include_str!("../../templates/knowledge_base_v1.txt");
const KNOWLEDGE_PHYSICS: &str = include_str!("../../templates/knowledge_physics_v1.txt");
const KNOWLEDGE_NEUTRAL: &str = include_str!("../../templates/knowledge_neutral_v1.txt");
const EXAMPLE: &str = include_str!("../../templates/example_v1.txt");

const EASY_CLAUSE: &str = "either '1' (solid) or '0' (empty)";
const HARD_CLAUSE: &str = "a floating point number between 0 and 1, with one decimal place (e.g., 0.0, 0.1, 0.2, ..., 1.0)";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    #[default]
    Base,
    PhysicsEnhanced,
    PhysicsNeutral,
}

impl Style {
    pub fn as_str(self) -> &'static str {
        match self {
            Style::Base => "base",
            Style::PhysicsEnhanced => "physics_enhanced",
            Style::PhysicsNeutral => "physics_neutral",
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Style {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "base" => Ok(Style::Base),
            "physics_enhanced" => Ok(Style::PhysicsEnhanced),
            "physics_neutral" => Ok(Style::PhysicsNeutral),
            other => Err(format!("unknown prompt style {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PromptStyle {
    pub style: Style,
    pub shots: u8,
}

// 64-bit FNV-1a; only used to derive a per-instance stream id.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Few-shot examples for `instance`: uniform without replacement among pool
/// entries of the same subject and difficulty, excluding the instance itself.
pub fn select_examples<'a>(
    instance: &TaskInstance,
    shots: usize,
    pool: &'a [TaskInstance],
    seed: u64,
) -> Result<Vec<&'a TaskInstance>, TaskError> {
    if shots == 0 {
        return Ok(Vec::new());
    }
    let candidates: Vec<&TaskInstance> = pool
        .iter()
        .filter(|c| {
            c.subject == instance.subject
                && c.difficulty == instance.difficulty
                && c.id != instance.id
        })
        .collect();
    if candidates.len() < shots {
        return Err(TaskError::EmptyPool {
            needed: shots,
            available: candidates.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(&instance.id));
    Ok(index::sample(&mut rng, candidates.len(), shots)
        .into_iter()
        .map(|k| candidates[k])
        .collect())
}

/// Renders the full prompt text for `instance`.
pub fn render_prompt(
    instance: &TaskInstance,
    style: PromptStyle,
    pool: &[TaskInstance],
    seed: u64,
) -> Result<String, TaskError> {
    let d = instance.difficulty;
    let examples: String = select_examples(instance, style.shots as usize, pool, seed)?
        .into_iter()
        .map(|ex| {
            EXAMPLE
                .replace("{input}", &ex.input.render(d))
                .replace("{output}", &ex.ground_truth.render(d))
        })
        .collect();
    let (template, knowledge) = match style.style {
        Style::Base => (STRUCTURAL, KNOWLEDGE_BASE),
        Style::PhysicsEnhanced => (STRUCTURAL, KNOWLEDGE_PHYSICS),
        Style::PhysicsNeutral => (NEUTRAL, KNOWLEDGE_NEUTRAL),
    };
    let clause = match d {
        Difficulty::Easy => EASY_CLAUSE,
        Difficulty::Hard => HARD_CLAUSE,
    };
    // Substituted text never contains braces, so replacement order is irrelevant.
    Ok(template
        .replace("{examples}", &examples)
        .replace("{knowledge_block}", knowledge)
        .replace("{grid}", &instance.input.render(d))
        .replace("{difficulty_clause}", clause))
}
