//! End-to-end evaluation run: sample, prompt, query, parse, score.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use topobench_core::{
    evaluate, parse_completion, render_prompt, Completion, Difficulty, MetricConfig, MetricReport,
    PromptStyle, Style, Subject, TaskInstance,
};

use crate::cache::CompletionCache;
use crate::client::{ModelClient, Query};
use crate::endpoint::ModelEndpoint;
use crate::sample::{sample_instances, SampleSpec};
use crate::HarnessError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub subjects: Vec<Subject>,
    pub difficulties: Vec<Difficulty>,
    pub per_stratum: usize,
    pub strict_sampling: bool,
    /// Drives sampling and few-shot selection.
    pub seed: u64,
    pub style: Style,
    pub shots: u8,
    /// Extra clockwise quarter turns applied to every sampled instance.
    pub rotation: u8,
    pub concurrency: usize,
    pub endpoint: ModelEndpoint,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            subjects: Vec::new(),
            difficulties: Vec::new(),
            per_stratum: 100,
            strict_sampling: false,
            seed: 0,
            style: Style::Base,
            shots: 0,
            rotation: 0,
            concurrency: 4,
            endpoint: ModelEndpoint::default(),
        }
    }
}

impl RunSpec {
    pub fn sample_spec(&self) -> SampleSpec {
        SampleSpec {
            subjects: self.subjects.clone(),
            difficulties: self.difficulties.clone(),
            per_stratum: self.per_stratum,
            seed: self.seed,
            strict: self.strict_sampling,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.concurrency == 0 {
            return Err(HarnessError::InvalidSpec(
                "concurrency must be at least 1".into(),
            ));
        }
        if self.rotation > 3 {
            return Err(HarnessError::InvalidSpec(format!(
                "rotation {} is not in 0..=3",
                self.rotation
            )));
        }
        Ok(())
    }
}

/// Scores for one instance, as written by `score` and read by `report`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreLine {
    pub id: String,
    pub subject: Subject,
    pub difficulty: Difficulty,
    pub metrics: MetricReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub id: String,
    pub subject: Subject,
    pub difficulty: Difficulty,
    pub rotation: u8,
    pub style: Style,
    pub shots: u8,
    pub endpoint: String,
    pub prompt: String,
    pub raw: Option<String>,
    pub completion: Option<Completion>,
    /// Prompt or model-call failure. The instance still counts as invalid.
    pub error: Option<String>,
    pub cached: bool,
    pub metrics: MetricReport,
    pub started_ms: u64,
    pub finished_ms: u64,
}

impl RunRecord {
    pub fn score_line(&self) -> ScoreLine {
        ScoreLine {
            id: self.id.clone(),
            subject: self.subject,
            difficulty: self.difficulty,
            metrics: self.metrics.clone(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    /// Sorted by id.
    pub records: Vec<RunRecord>,
    /// Calls that reached the client, i.e. cache misses.
    pub requests: usize,
    pub cache_hits: usize,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

struct Ctx<'a> {
    spec: &'a RunSpec,
    pool: &'a [TaskInstance],
    client: &'a dyn ModelClient,
    cache: Option<&'a CompletionCache>,
    metrics: &'a MetricConfig,
    endpoint: String,
    requests: AtomicUsize,
    hits: AtomicUsize,
}

impl Ctx<'_> {
    fn one(&self, inst: &TaskInstance) -> RunRecord {
        let started_ms = now_ms();
        let style = PromptStyle {
            style: self.spec.style,
            shots: self.spec.shots,
        };
        let mut rec = RunRecord {
            id: inst.id.clone(),
            subject: inst.subject,
            difficulty: inst.difficulty,
            rotation: inst.rotation,
            style: self.spec.style,
            shots: self.spec.shots,
            endpoint: self.endpoint.clone(),
            prompt: String::new(),
            raw: None,
            completion: None,
            error: None,
            cached: false,
            metrics: MetricReport::default(),
            started_ms,
            finished_ms: started_ms,
        };
        let mut flags = Vec::new();
        let completion = match render_prompt(inst, style, self.pool, self.spec.seed) {
            Err(e) => {
                rec.error = Some(format!("prompt: {e}"));
                Completion::ParseFailure(format!("prompt: {e}"))
            }
            Ok(prompt) => {
                rec.prompt = prompt;
                let key = CompletionCache::key(&self.endpoint, &rec.prompt);
                let hit = self.cache.and_then(|c| c.get(&key).ok().flatten());
                let raw = match hit {
                    Some(raw) => {
                        self.hits.fetch_add(1, Ordering::Relaxed);
                        rec.cached = true;
                        Ok(raw)
                    }
                    None => {
                        self.requests.fetch_add(1, Ordering::Relaxed);
                        let r = self.client.complete(&Query {
                            instance: inst,
                            prompt: &rec.prompt,
                        });
                        if let (Ok(raw), Some(c)) = (&r, self.cache) {
                            if c.put(&key, raw).is_err() {
                                flags.push("cache_write_failed".to_string());
                            }
                        }
                        r
                    }
                };
                match raw {
                    Ok(raw) => {
                        let c = parse_completion(&raw, inst.difficulty);
                        rec.raw = Some(raw);
                        c
                    }
                    Err(e) => {
                        rec.error = Some(format!("call: {e}"));
                        flags.push("call_error".to_string());
                        Completion::ParseFailure(format!("call: {e}"))
                    }
                }
            }
        };
        rec.metrics = evaluate(inst, &completion, self.metrics);
        rec.metrics.flags.extend(flags);
        rec.completion = Some(completion);
        rec.finished_ms = now_ms();
        rec
    }
}

/// Runs `client` over a stratified sample of `dataset`. Failures of single
/// instances are recorded and never abort the run.
pub fn run(
    dataset: &[TaskInstance],
    spec: &RunSpec,
    client: &dyn ModelClient,
    cache: Option<&CompletionCache>,
    metrics: &MetricConfig,
) -> Result<RunOutput, HarnessError> {
    spec.validate()?;
    let rotate = |t: &TaskInstance| {
        t.rotated(spec.rotation)
            .map_err(|e| HarnessError::InvalidSpec(e.to_string()))
    };
    let instances: Vec<TaskInstance> = sample_instances(dataset, &spec.sample_spec())?
        .into_iter()
        .map(rotate)
        .collect::<Result<_, _>>()?;
    // Examples must be shown in the same frame as the query.
    let pool: Vec<TaskInstance> = if spec.shots > 0 && spec.rotation > 0 {
        dataset.iter().map(rotate).collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    let ctx = Ctx {
        spec,
        pool: if pool.is_empty() { dataset } else { &pool },
        client,
        cache,
        metrics,
        endpoint: client.endpoint_id(),
        requests: AtomicUsize::new(0),
        hits: AtomicUsize::new(0),
    };
    let next = AtomicUsize::new(0);
    let workers = spec.concurrency.min(instances.len()).max(1);
    let mut records: Vec<RunRecord> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let k = next.fetch_add(1, Ordering::Relaxed);
                        let Some(inst) = instances.get(k) else { break };
                        out.push(ctx.one(inst));
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(RunOutput {
        records,
        requests: ctx.requests.into_inner(),
        cache_hits: ctx.hits.into_inner(),
    })
}
