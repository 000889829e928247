//! Offline clients for tests and calibration runs.

use std::collections::VecDeque;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use topobench_core::{Cell, Difficulty, Grid, TaskInstance};

use crate::client::{CallError, ModelClient, Query};

/// Answers with the ground truth.
pub struct EchoClient;

impl ModelClient for EchoClient {
    fn endpoint_id(&self) -> String {
        "mock://echo".into()
    }

    fn complete(&self, q: &Query<'_>) -> Result<String, CallError> {
        Ok(q.instance.ground_truth.render(q.instance.difficulty))
    }
}

/// Answers with the ground truth, every density replaced by zero.
pub struct AllZerosClient;

impl ModelClient for AllZerosClient {
    fn endpoint_id(&self) -> String {
        "mock://all-zeros".into()
    }

    fn complete(&self, q: &Query<'_>) -> Result<String, CallError> {
        let gt = &q.instance.ground_truth;
        let mut out = gt.clone();
        for ((i, j), c) in gt.iter() {
            if let Cell::Value(_) = c {
                out.set(i, j, Cell::Value(0.0));
            }
        }
        Ok(out.render(q.instance.difficulty))
    }
}

/// Ground truth with each masked cell flipped with probability `p`.
///
/// Flip decisions compare one uniform per masked cell against `p`, and the
/// uniforms depend only on `seed` and the instance id. Runs at different `p`
/// with the same seed are therefore nested: every cell flipped at `p` is also
/// flipped at any larger `p`.
pub struct NoiseClient {
    pub p: f64,
    pub seed: u64,
}

fn id_stream(id: &str) -> u64 {
    let digest = Sha256::digest(id.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

fn flip(c: Cell, d: Difficulty) -> Cell {
    match c {
        Cell::Value(v) => match d {
            Difficulty::Easy => Cell::Value(if v >= 0.5 { 0.0 } else { 1.0 }),
            Difficulty::Hard => Cell::Value(((1.0 - v) * 10.0).round() / 10.0),
        },
        other => other,
    }
}

impl NoiseClient {
    pub fn corrupt(&self, instance: &TaskInstance) -> Grid {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(id_stream(&instance.id));
        let mut out = instance.ground_truth.clone();
        for &(i, j) in &instance.mask {
            let u: f64 = rng.random();
            if u < self.p {
                out.set(i, j, flip(out.get(i, j), instance.difficulty));
            }
        }
        out
    }
}

impl ModelClient for NoiseClient {
    fn endpoint_id(&self) -> String {
        format!("mock://noise?p={}&seed={}", self.p, self.seed)
    }

    fn complete(&self, q: &Query<'_>) -> Result<String, CallError> {
        Ok(self.corrupt(q.instance).render(q.instance.difficulty))
    }
}

/// Replays a fixed sequence of responses, one per call.
pub struct ScriptedClient {
    responses: Mutex<VecDeque<Result<String, CallError>>>,
}

impl ScriptedClient {
    pub fn new(responses: impl IntoIterator<Item = Result<String, CallError>>) -> Self {
        ScriptedClient {
            responses: Mutex::new(responses.into_iter().collect()),
        }
    }
}

impl ModelClient for ScriptedClient {
    fn endpoint_id(&self) -> String {
        "mock://scripted".into()
    }

    fn complete(&self, _: &Query<'_>) -> Result<String, CallError> {
        self.responses
            .lock()
            .expect("script lock poisoned")
            .pop_front()
            .unwrap_or_else(|| Err(CallError::MalformedResponse("script exhausted".into())))
    }
}
