//! Question answering over serialized analysis results through any
//! chat-completion compatible HTTP endpoint.

mod serialize;

use std::fmt;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use bibx_core::result::AnalysisResult;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use serialize::serialize_result;

pub const API_KEY_VAR: &str = "BIBX_LLM_API_KEY";
pub const SYSTEM_PROMPT: &str = "You are analyzing bibliometric results.";

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("no API key: set {API_KEY_VAR}")]
    MissingKey,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("service returned HTTP {status}: {excerpt}")]
    Service { status: u16, excerpt: String },
    #[error("request timed out after {0} attempts")]
    Timeout(u32),
    #[error("malformed response: {0}")]
    Protocol(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LlmError>;

/// An API key that never prints.
#[derive(Clone, PartialEq, Eq)]
pub struct ApiKey(String);

impl ApiKey {
    pub fn new(key: impl Into<String>) -> Self {
        ApiKey(key.into())
    }

    fn expose(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for ApiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ApiKey(<redacted>)")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LlmConfig {
    pub endpoint: String,
    pub model: String,
    #[serde(skip)]
    pub api_key: Option<ApiKey>,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_s: f64,
    pub context_budget_chars: usize,
}

impl Default for LlmConfig {
    fn default() -> Self {
        LlmConfig {
            endpoint: "https://api.openai.com/v1/chat/completions".into(),
            model: "gpt-4o-mini".into(),
            api_key: None,
            temperature: 0.2,
            max_tokens: 800,
            timeout_s: 60.0,
            context_budget_chars: 8000,
        }
    }
}

impl LlmConfig {
    /// Fills `api_key` from the environment when it is set and non-empty.
    pub fn with_env_key(mut self) -> Self {
        self.api_key = std::env::var(API_KEY_VAR).ok().filter(|k| !k.trim().is_empty()).map(ApiKey::new);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(LlmError::Config(format!("temperature {} outside [0, 2]", self.temperature)));
        }
        if self.max_tokens == 0 {
            return Err(LlmError::Config("max_tokens must be positive".into()));
        }
        if !(self.timeout_s > 0.0 && self.timeout_s.is_finite()) {
            return Err(LlmError::Config(format!("timeout_s must be positive, got {}", self.timeout_s)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt: u64,
    pub completion: u64,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exchange {
    pub context: String,
    pub question: String,
    pub answer: String,
    pub usage: TokenUsage,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

/// The JSON body sent to the endpoint.
pub fn request_body(config: &LlmConfig, context: &str, question: &str) -> Value {
    json!({
        "model": config.model,
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
        "messages": [
            {"role": "system", "content": SYSTEM_PROMPT},
            {"role": "user", "content": format!("{context}\n\nQuestion: {question}")},
        ],
    })
}

fn parse_response(text: &str) -> Result<(String, TokenUsage)> {
    let v: Value = serde_json::from_str(text).map_err(|e| LlmError::Protocol(e.to_string()))?;
    let answer = v
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .ok_or_else(|| LlmError::Protocol("missing choices[0].message.content".into()))?;
    let n = |p: &str| v.pointer(p).and_then(Value::as_u64).unwrap_or(0);
    let usage = TokenUsage {
        prompt: n("/usage/prompt_tokens"),
        completion: n("/usage/completion_tokens"),
        total: n("/usage/total_tokens"),
    };
    Ok((answer.to_string(), usage))
}

fn excerpt(body: &str) -> String {
    const MAX: usize = 300;
    let mut s: String = body.chars().take(MAX).collect();
    if body.chars().count() > MAX {
        s.push('…');
    }
    s
}

/// Sends one question about `result`. The key is checked before any connection
/// is made; a timed-out request is retried once.
pub fn ask(result: &AnalysisResult, question: &str, config: &LlmConfig) -> Result<Exchange> {
    let key = config.api_key.as_ref().ok_or(LlmError::MissingKey)?;
    config.validate()?;
    let context = serialize_result(result, config.context_budget_chars);
    let body = request_body(config, &context, question);
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs_f64(config.timeout_s))
        .build()
        .map_err(|e| LlmError::Transport(e.to_string()))?;

    let mut attempts = 0;
    let response = loop {
        attempts += 1;
        match client.post(&config.endpoint).bearer_auth(key.expose()).json(&body).send() {
            Ok(r) => break r,
            Err(e) if e.is_timeout() && attempts < 2 => continue,
            Err(e) if e.is_timeout() => return Err(LlmError::Timeout(attempts)),
            Err(e) => return Err(LlmError::Transport(e.to_string())),
        }
    };
    let status = response.status();
    let text = response.text().map_err(|e| {
        if e.is_timeout() {
            LlmError::Timeout(attempts)
        } else {
            LlmError::Transport(e.to_string())
        }
    })?;
    if status.as_u16() >= 400 {
        return Err(LlmError::Service { status: status.as_u16(), excerpt: excerpt(&text) });
    }
    let (answer, usage) = parse_response(&text)?;
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(Exchange { context, question: question.to_string(), answer, usage, timestamp })
}

/// Appends one exchange as a JSON line.
pub fn append_log(path: &Path, exchange: &Exchange) -> Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let line = serde_json::to_string(exchange).map_err(|e| LlmError::Protocol(e.to_string()))?;
    writeln!(f, "{line}")?;
    Ok(())
}

pub fn read_log(path: &Path) -> Result<Vec<Exchange>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| LlmError::Protocol(e.to_string())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_is_redacted_and_not_serialized() {
        let cfg = LlmConfig { api_key: Some(ApiKey::new("sk-secret")), ..LlmConfig::default() };
        assert!(!format!("{cfg:?}").contains("sk-secret"));
        assert!(!serde_json::to_string(&cfg).unwrap().contains("sk-secret"));
    }

    #[test]
    fn body_has_system_then_user() {
        let b = request_body(&LlmConfig::default(), "ctx", "why?");
        assert_eq!(b["messages"][0]["content"], SYSTEM_PROMPT);
        assert_eq!(b["messages"][1]["role"], "user");
        assert_eq!(b["messages"][1]["content"], "ctx\n\nQuestion: why?");
    }

    #[test]
    fn response_parsing() {
        let (a, u) = parse_response(
            r#"{"choices":[{"message":{"role":"assistant","content":"ok"}}],"usage":{"prompt_tokens":3,"completion_tokens":1,"total_tokens":4}}"#,
        )
        .unwrap();
        assert_eq!(a, "ok");
        assert_eq!(u, TokenUsage { prompt: 3, completion: 1, total: 4 });
        assert!(matches!(parse_response("{\"choices\":[]}"), Err(LlmError::Protocol(_))));
        assert!(matches!(parse_response("not json"), Err(LlmError::Protocol(_))));
    }

    #[test]
    fn config_bounds() {
        let bad = LlmConfig { temperature: 2.5, ..LlmConfig::default() };
        assert!(matches!(bad.validate(), Err(LlmError::Config(_))));
        assert!(LlmConfig::default().validate().is_ok());
    }
}
