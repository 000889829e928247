//! Stratified sampling of instances for a run.

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use topobench_core::{Difficulty, Subject, TaskInstance};

use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSpec {
    /// Empty means every subject.
    pub subjects: Vec<Subject>,
    /// Empty means both difficulties.
    pub difficulties: Vec<Difficulty>,
    /// Instances drawn per subject and difficulty.
    pub per_stratum: usize,
    pub seed: u64,
    /// Fail instead of taking the whole stratum when it is too small.
    pub strict: bool,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            subjects: Vec::new(),
            difficulties: Vec::new(),
            per_stratum: 100,
            seed: 0,
            strict: false,
        }
    }
}

/// Draws up to `per_stratum` instances uniformly without replacement from
/// every selected (subject, difficulty) stratum. Output is sorted by id.
pub fn sample_instances<'a>(
    dataset: &'a [TaskInstance],
    spec: &SampleSpec,
) -> Result<Vec<&'a TaskInstance>, HarnessError> {
    let subjects: &[Subject] = if spec.subjects.is_empty() {
        &Subject::ALL
    } else {
        &spec.subjects
    };
    let difficulties: &[Difficulty] = if spec.difficulties.is_empty() {
        &Difficulty::ALL
    } else {
        &spec.difficulties
    };
    let mut out = Vec::new();
    for &subject in subjects {
        for &difficulty in difficulties {
            let stratum: Vec<&TaskInstance> = dataset
                .iter()
                .filter(|t| t.subject == subject && t.difficulty == difficulty)
                .collect();
            if stratum.len() < spec.per_stratum && spec.strict {
                return Err(HarnessError::InsufficientInstances {
                    subject,
                    difficulty,
                    requested: spec.per_stratum,
                    available: stratum.len(),
                });
            }
            let n = spec.per_stratum.min(stratum.len());
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream((subject.index() as u64) << 1 | (difficulty == Difficulty::Hard) as u64);
            out.extend(
                index::sample(&mut rng, stratum.len(), n)
                    .into_iter()
                    .map(|k| stratum[k]),
            );
        }
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use topobench_core::{Cell, GravityVector, Grid};

    fn dataset(per_stratum: usize) -> Vec<TaskInstance> {
        let g = Grid::filled(2, 2, Cell::Value(0.0));
        let mut out = Vec::new();
        for s in 0..per_stratum {
            for subject in Subject::ALL {
                for difficulty in Difficulty::ALL {
                    out.push(TaskInstance {
                        id: format!("s{s:03}-{subject}-{difficulty}"),
                        subject,
                        difficulty,
                        rotation: 0,
                        gravity: GravityVector::DOWN,
                        input: g.clone(),
                        ground_truth: g.clone(),
                        mask: Vec::new(),
                    });
                }
            }
        }
        out
    }

    #[test]
    fn clamps_by_default_and_fails_when_strict() {
        let data = dataset(5);
        let spec = SampleSpec {
            per_stratum: 10,
            ..SampleSpec::default()
        };
        assert_eq!(sample_instances(&data, &spec).unwrap().len(), 80);
        let strict = SampleSpec {
            strict: true,
            ..spec
        };
        assert!(matches!(
            sample_instances(&data, &strict),
            Err(HarnessError::InsufficientInstances {
                requested: 10,
                available: 5,
                ..
            })
        ));
    }

    #[test]
    fn filters_sorted_and_seeded() {
        let data = dataset(20);
        let spec = SampleSpec {
            subjects: vec![Subject::Full, Subject::Cells(1)],
            difficulties: vec![Difficulty::Hard],
            per_stratum: 4,
            seed: 3,
            strict: true,
        };
        let a: Vec<&str> = sample_instances(&data, &spec)
            .unwrap()
            .iter()
            .map(|t| t.id.as_str())
            .collect();
        assert_eq!(a.len(), 8);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
        assert!(a.iter().all(|id| id.ends_with("-hard")));
        let b: Vec<&str> = sample_instances(&data, &spec)
            .unwrap()
            .iter()
            .map(|t| t.id.as_str())
            .collect();
        assert_eq!(a, b);
        let c: Vec<&str> = sample_instances(&data, &SampleSpec { seed: 4, ..spec })
            .unwrap()
            .iter()
            .map(|t| t.id.as_str())
            .collect();
        assert_ne!(a, c);
    }
}
