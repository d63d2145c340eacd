use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::client::{ClientError, GeneratorClient, Request, Task};

/// One recorded exchange. `key` is [`Request::key`] of the request.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub key: String,
    pub task: Task,
    pub payload: serde_json::Value,
    pub text: String,
}

impl TranscriptEntry {
    pub fn new(request: &Request, text: impl Into<String>) -> Self {
        TranscriptEntry { key: request.key(), task: request.task, payload: request.payload.clone(), text: text.into() }
    }
}

/// Answers requests from a recorded transcript, keyed by request content.
#[derive(Clone, Debug, Default)]
pub struct ReplayClient {
    responses: HashMap<String, String>,
}

impl ReplayClient {
    pub fn new(entries: impl IntoIterator<Item = TranscriptEntry>) -> Self {
        ReplayClient { responses: entries.into_iter().map(|e| (e.key, e.text)).collect() }
    }

    /// Reads a JSON-lines transcript. A line's key is recomputed from its
    /// task and payload, and must match when present.
    pub fn from_reader<R: BufRead>(source: R) -> io::Result<Self> {
        let mut entries = Vec::new();
        for (n, line) in source.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let bad = |m: String| io::Error::new(io::ErrorKind::InvalidData, format!("transcript line {}: {m}", n + 1));
            let entry: TranscriptEntry = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
            let key = Request { task: entry.task, payload: entry.payload.clone() }.key();
            if key != entry.key {
                return Err(bad(format!("key {} does not match its request ({key})", entry.key)));
            }
            entries.push(entry);
        }
        Ok(Self::new(entries))
    }

    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        Self::from_reader(BufReader::new(File::open(path)?))
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }
}

impl GeneratorClient for ReplayClient {
    fn complete(&self, request: &Request) -> Result<String, ClientError> {
        let key = request.key();
        self.responses.get(&key).cloned().ok_or(ClientError::ReplayMiss { task: request.task.as_str(), key })
    }
}

/// Wraps another client and keeps every successful exchange.
pub struct RecordingClient<C> {
    inner: C,
    entries: Mutex<Vec<TranscriptEntry>>,
}

impl<C: GeneratorClient> RecordingClient<C> {
    pub fn new(inner: C) -> Self {
        RecordingClient { inner, entries: Mutex::new(Vec::new()) }
    }

    pub fn entries(&self) -> Vec<TranscriptEntry> {
        self.entries.lock().expect("recorder lock").clone()
    }

    /// Writes the transcript as JSON lines, one entry per distinct request
    /// in first-seen order.
    pub fn write_transcript<W: Write>(&self, mut sink: W) -> io::Result<()> {
        let mut seen = std::collections::HashSet::new();
        for e in self.entries() {
            if seen.insert(e.key.clone()) {
                serde_json::to_writer(&mut sink, &e)?;
                sink.write_all(b"\n")?;
            }
        }
        sink.flush()
    }
}

impl<C: GeneratorClient> GeneratorClient for RecordingClient<C> {
    fn complete(&self, request: &Request) -> Result<String, ClientError> {
        let text = self.inner.complete(request)?;
        self.entries.lock().expect("recorder lock").push(TranscriptEntry::new(request, text.clone()));
        Ok(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::MockClient;

    #[test]
    fn record_then_replay() {
        let recorder = RecordingClient::new(MockClient::from_fn(|r| Ok(format!("{}!", r.field("description")))));
        assert_eq!(recorder.describe_to_ccs("a").unwrap(), "a!");
        assert_eq!(recorder.describe_to_ccs("a").unwrap(), "a!");
        assert_eq!(recorder.reflect("b", "g", "i").unwrap(), "b!");
        let mut buf = Vec::new();
        recorder.write_transcript(&mut buf).unwrap();
        assert_eq!(String::from_utf8_lossy(&buf).lines().count(), 2);

        let replay = ReplayClient::from_reader(buf.as_slice()).unwrap();
        assert_eq!(replay.len(), 2);
        assert_eq!(replay.describe_to_ccs("a").unwrap(), "a!");
        assert_eq!(replay.reflect("b", "g", "i").unwrap(), "b!");
        assert!(matches!(replay.describe_to_ccs("z"), Err(ClientError::ReplayMiss { task: "describe_to_ccs", .. })));
    }

    #[test]
    fn tampered_key_is_rejected() {
        let mut e = TranscriptEntry::new(&Request::describe_to_ccs("a"), "x");
        e.key = "00".repeat(32);
        let line = serde_json::to_string(&e).unwrap();
        assert!(ReplayClient::from_reader(line.as_bytes()).is_err());
    }
}
