use std::collections::{HashMap, VecDeque};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::metrics::ConfidenceTrack;

/// The request kinds a generator understands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    DescribeToCcs,
    Reflect,
    Correct,
    Consensus,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::DescribeToCcs => "describe_to_ccs",
            Task::Reflect => "reflect",
            Task::Correct => "correct",
            Task::Consensus => "consensus",
        }
    }
}

/// Wire form of a generator request: `{task, payload}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub task: Task,
    pub payload: serde_json::Value,
}

impl Request {
    pub fn describe_to_ccs(description: &str) -> Self {
        Request { task: Task::DescribeToCcs, payload: json!({ "description": description }) }
    }

    pub fn reflect(description: &str, ground_truth: &str, issues: &str) -> Self {
        Request {
            task: Task::Reflect,
            payload: json!({ "description": description, "ground_truth": ground_truth, "issues": issues }),
        }
    }

    pub fn correct(description: &str, predicted: &str, confidence: &ConfidenceTrack) -> Self {
        Request {
            task: Task::Correct,
            payload: json!({ "description": description, "predicted": predicted, "confidence": confidence }),
        }
    }

    pub fn consensus(first: &str, second: &str) -> Self {
        Request { task: Task::Consensus, payload: json!({ "first": first, "second": second }) }
    }

    /// Hex SHA-256 of the compact JSON encoding. Object keys serialize in
    /// sorted order, so equal requests always hash equally.
    pub fn key(&self) -> String {
        let canonical = serde_json::to_string(self).expect("request serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn field(&self, name: &str) -> &str {
        self.payload.get(name).and_then(|v| v.as_str()).unwrap_or("")
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClientError {
    #[error("transport error: {0}")]
    Transport(String),
    #[error("request timed out")]
    Timeout,
    #[error("endpoint returned status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("no recorded response for {task} request {key}")]
    ReplayMiss { task: &'static str, key: String },
    #[error("scripted client has no response left for {0}")]
    Exhausted(&'static str),
    #[error("{0} requests are not supported by this client")]
    Unsupported(&'static str),
}

/// A text generator behind the quality-control loops.
///
/// Implementations answer a single [`Request`]; the typed helpers build the
/// request for each task. Clients are shared across batch workers.
pub trait GeneratorClient: Send + Sync {
    fn complete(&self, request: &Request) -> Result<String, ClientError>;

    /// Regenerates CCS text from a parameter description.
    fn describe_to_ccs(&self, description: &str) -> Result<String, ClientError> {
        self.complete(&Request::describe_to_ccs(description))
    }

    /// Produces a revised description given the ground truth and a diff.
    fn reflect(&self, description: &str, ground_truth: &str, issues: &str) -> Result<String, ClientError> {
        self.complete(&Request::reflect(description, ground_truth, issues))
    }

    /// Produces corrected CCS text for a low-confidence prediction.
    fn correct(&self, description: &str, predicted: &str, confidence: &ConfidenceTrack) -> Result<String, ClientError> {
        self.complete(&Request::correct(description, predicted, confidence))
    }

    /// Two-input agreement check; off unless a client opts in.
    fn consensus(&self, _first: &str, _second: &str) -> Result<String, ClientError> {
        Err(ClientError::Unsupported("consensus"))
    }
}

impl<C: GeneratorClient + ?Sized> GeneratorClient for &C {
    fn complete(&self, request: &Request) -> Result<String, ClientError> {
        (**self).complete(request)
    }
}

type Responder = dyn Fn(&Request) -> Result<String, ClientError> + Send + Sync;

/// Test double answering from a closure, a script or a lookup table.
/// Every request is logged.
pub struct MockClient {
    respond: Box<Responder>,
    log: Mutex<Vec<Request>>,
}

impl MockClient {
    pub fn from_fn(respond: impl Fn(&Request) -> Result<String, ClientError> + Send + Sync + 'static) -> Self {
        MockClient { respond: Box::new(respond), log: Mutex::new(Vec::new()) }
    }

    /// Answers each task from its own queue, in order.
    pub fn scripted(describe: Vec<String>, reflect: Vec<String>) -> Self {
        let queues = Mutex::new((VecDeque::from(describe), VecDeque::from(reflect)));
        Self::from_fn(move |r| {
            let mut q = queues.lock().expect("mock queue lock");
            match r.task {
                Task::DescribeToCcs => q.0.pop_front().ok_or(ClientError::Exhausted("describe_to_ccs")),
                Task::Reflect => q.1.pop_front().ok_or(ClientError::Exhausted("reflect")),
                other => Err(ClientError::Unsupported(other.as_str())),
            }
        })
    }

    /// Returns the CCS text registered for a description; `reflect` hands
    /// the description back unchanged and `correct` echoes the prediction.
    pub fn lookup(table: HashMap<String, String>) -> Self {
        Self::from_fn(move |r| match r.task {
            Task::DescribeToCcs => Ok(table.get(r.field("description")).cloned().unwrap_or_default()),
            Task::Reflect => Ok(r.field("description").to_string()),
            Task::Correct => Ok(r.field("predicted").to_string()),
            Task::Consensus => Err(ClientError::Unsupported("consensus")),
        })
    }

    pub fn requests(&self) -> Vec<Request> {
        self.log.lock().expect("mock log lock").clone()
    }

    pub fn count(&self, task: Task) -> usize {
        self.log.lock().expect("mock log lock").iter().filter(|r| r.task == task).count()
    }
}

impl GeneratorClient for MockClient {
    fn complete(&self, request: &Request) -> Result<String, ClientError> {
        self.log.lock().expect("mock log lock").push(request.clone());
        (self.respond)(request)
    }
}
