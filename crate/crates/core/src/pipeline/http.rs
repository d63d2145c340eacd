use std::thread;
use std::time::Duration;

use serde::Deserialize;

use super::client::{ClientError, GeneratorClient, Request};

/// Environment variable holding the bearer token for [`HttpClient`].
pub const TOKEN_ENV: &str = "CCSKIT_API_TOKEN";

#[derive(Clone, Debug)]
pub struct HttpConfig {
    pub endpoint: String,
    pub token: Option<String>,
    pub timeout: Duration,
    /// Extra attempts after the first on transport errors, 429 and 5xx.
    pub retries: u32,
    /// Delay before the first retry; doubles on each further retry.
    pub backoff: Duration,
}

impl HttpConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        HttpConfig {
            endpoint: endpoint.into(),
            token: None,
            timeout: Duration::from_secs(60),
            retries: 3,
            backoff: Duration::from_millis(500),
        }
    }

    /// Reads the token from [`TOKEN_ENV`] when set.
    pub fn with_env_token(mut self) -> Self {
        self.token = std::env::var(TOKEN_ENV).ok().filter(|t| !t.is_empty());
        self
    }
}

#[derive(Deserialize)]
struct Reply {
    text: String,
}

/// Client for a remote endpoint taking `POST {task, payload}` and answering
/// `{text}`.
pub struct HttpClient {
    config: HttpConfig,
    http: reqwest::blocking::Client,
}

impl HttpClient {
    pub fn new(config: HttpConfig) -> Result<Self, ClientError> {
        let http = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        Ok(HttpClient { config, http })
    }

    fn attempt(&self, request: &Request) -> Result<String, (ClientError, bool)> {
        let mut call = self.http.post(&self.config.endpoint).json(request);
        if let Some(token) = &self.config.token {
            call = call.bearer_auth(token);
        }
        let response = call.send().map_err(|e| {
            let err = if e.is_timeout() { ClientError::Timeout } else { ClientError::Transport(e.to_string()) };
            (err, true)
        })?;
        let status = response.status();
        if !status.is_success() {
            let retry = status.is_server_error() || status.as_u16() == 429;
            let body = response.text().unwrap_or_default();
            return Err((ClientError::Status { status: status.as_u16(), body }, retry));
        }
        let body = response.text().map_err(|e| (ClientError::Transport(e.to_string()), true))?;
        serde_json::from_str::<Reply>(&body).map(|r| r.text).map_err(|e| (ClientError::Malformed(e.to_string()), false))
    }
}

impl GeneratorClient for HttpClient {
    fn complete(&self, request: &Request) -> Result<String, ClientError> {
        let mut delay = self.config.backoff;
        let mut tries = 0;
        loop {
            match self.attempt(request) {
                Ok(text) => return Ok(text),
                Err((err, retry)) => {
                    if !retry || tries >= self.config.retries {
                        return Err(err);
                    }
                    tries += 1;
                    thread::sleep(delay);
                    delay *= 2;
                }
            }
        }
    }
}
