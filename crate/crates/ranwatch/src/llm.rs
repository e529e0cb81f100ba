//! LLM-backed anomaly detection: prompt construction, verdict parsing, and
//! the pluggable classification backends.
//!
//! The pipeline contract is robustness: whatever bytes appear in message
//! names or backend responses, every message yields exactly one [`Verdict`]
//! and the stream runs to completion. Transport failures are retried, then
//! recorded as [`VerdictLabel::Indeterminate`]; response content is never an
//! error.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::hypoglyph;
use crate::message::MessageCatalog;
use crate::window::DetectionWindow;

/// Decoding temperature used for every experiment run; deterministic
/// outputs are part of the backend contract.
pub const TEMPERATURE: f64 = 0.0;

#[derive(Debug)]
pub enum BackendError {
    /// Connection, timeout, or non-success HTTP status.
    Transport(String),
}

impl fmt::Display for BackendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendError::Transport(msg) => write!(f, "backend transport: {msg}"),
        }
    }
}

impl std::error::Error for BackendError {}

/// Prompt text template. The template is a config artifact: load a custom
/// one from a TOML file to change the wording without rebuilding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub version: String,
    pub task_description: String,
    pub output_instruction: String,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        PromptTemplate {
            version: "v1".to_string(),
            task_description: "You are a security monitor for 5G Layer-3 signalling. \
                You receive recent RRC and NAS control-plane messages read from a shared \
                message store, one message per line in the form \
                \"protocol | name | tmsi | rnti\". Judge whether the latest message is \
                consistent with normal protocol behaviour for its UE, or anomalous - for \
                example a denial-of-service setup request reusing an existing TMSI, or a \
                tampered message name."
                .to_string(),
            output_instruction: "Answer with exactly one word: Normal or Anomalous."
                .to_string(),
        }
    }
}

impl PromptTemplate {
    pub fn from_file(path: &Path) -> Result<PromptTemplate, String> {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        toml::from_str(&text).map_err(|e| e.to_string())
    }
}

/// A constructed detection prompt: the task description as the system text
/// and the rendered window as the user text.
#[derive(Debug, Clone, PartialEq)]
pub struct Prompt {
    pub system: String,
    pub user: String,
    pub template_version: String,
}

impl Prompt {
    pub fn full_text(&self) -> String {
        format!("{}\n\n{}", self.system, self.user)
    }
}

/// Renders a window into prompt text: context oldest-first, the same-UE
/// previous message (or an explicit absence note), the latest message marked
/// for classification, then the output instruction. Message names pass
/// through byte-exact.
pub fn build_prompt(window: &DetectionWindow, template: &PromptTemplate) -> Prompt {
    let mut user = String::new();
    user.push_str("Context messages (oldest first):\n");
    if window.context.is_empty() {
        user.push_str("  (none)\n");
    } else {
        for (i, msg) in window.context.iter().enumerate() {
            user.push_str(&format!("  {}. {}\n", i + 1, msg.render()));
        }
    }
    user.push_str("\nPrevious message from the same UE:\n");
    match &window.ue_previous {
        Some(prev) => user.push_str(&format!("  {}\n", prev.render())),
        None => user.push_str("  (none)\n"),
    }
    user.push_str("\nLatest message (classify this one):\n");
    user.push_str(&format!("  {}\n", window.latest.render()));
    user.push('\n');
    user.push_str(&template.output_instruction);
    Prompt {
        system: template.task_description.clone(),
        user,
        template_version: template.version.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictLabel {
    Normal,
    Anomalous,
    /// The response matched neither verdict word, or the backend stayed
    /// unreachable through all retries.
    Indeterminate,
}

/// Case-insensitive verdict scan; "anomal" wins over "normal" when both
/// occur.
pub fn parse_verdict(raw: &str) -> VerdictLabel {
    let lower = raw.to_lowercase();
    if lower.contains("anomal") {
        VerdictLabel::Anomalous
    } else if lower.contains("normal") {
        VerdictLabel::Normal
    } else {
        VerdictLabel::Indeterminate
    }
}

/// One classification outcome, with the raw response preserved and the
/// wall-clock spent inside backend calls.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub label: VerdictLabel,
    pub raw_response: String,
    pub latency: Duration,
    pub retries: u32,
    pub note: Option<String>,
}

/// A classification backend. Implementations must treat response *content*
/// as opaque: only transport-level failures are errors.
pub trait Backend {
    fn id(&self) -> &str;
    fn complete(&mut self, prompt: &Prompt) -> Result<String, BackendError>;
}

const RETRY_BACKOFF_BASE: Duration = Duration::from_millis(100);

/// Runs one prompt through a backend: transport failures are retried with
/// exponential backoff, and whatever comes back is parsed into a verdict.
/// Never fails; latency covers time spent inside backend calls (backoff
/// sleeps excluded).
pub fn classify(prompt: &Prompt, backend: &mut dyn Backend, max_retries: u32) -> Verdict {
    let mut latency = Duration::ZERO;
    let mut attempt = 0u32;
    loop {
        let start = Instant::now();
        let result = backend.complete(prompt);
        latency += start.elapsed();
        match result {
            Ok(raw) => {
                return Verdict {
                    label: parse_verdict(&raw),
                    raw_response: raw,
                    latency,
                    retries: attempt,
                    note: None,
                };
            }
            Err(err) if attempt < max_retries => {
                std::thread::sleep(RETRY_BACKOFF_BASE * 2u32.pow(attempt));
                attempt += 1;
                let _ = err;
            }
            Err(err) => {
                return Verdict {
                    label: VerdictLabel::Indeterminate,
                    raw_response: String::new(),
                    latency,
                    retries: attempt,
                    note: Some(format!("backend unreachable after {attempt} retries: {err}")),
                };
            }
        }
    }
}

/// Replays a fixed list of responses in order; used to make end-to-end runs
/// exactly reproducible in tests.
#[derive(Debug, Clone)]
pub struct ScriptedBackend {
    responses: Vec<String>,
    cursor: usize,
}

impl ScriptedBackend {
    pub fn new(responses: Vec<String>) -> ScriptedBackend {
        ScriptedBackend { responses, cursor: 0 }
    }

    /// One response per line.
    pub fn from_file(path: &Path) -> std::io::Result<ScriptedBackend> {
        let text = std::fs::read_to_string(path)?;
        Ok(ScriptedBackend::new(text.lines().map(str::to_string).collect()))
    }
}

impl Backend for ScriptedBackend {
    fn id(&self) -> &str {
        "scripted"
    }

    fn complete(&mut self, _prompt: &Prompt) -> Result<String, BackendError> {
        let response = self
            .responses
            .get(self.cursor)
            .cloned()
            .ok_or_else(|| BackendError::Transport("scripted fixture exhausted".into()))?;
        self.cursor += 1;
        Ok(response)
    }
}

/// Deterministic rule-based stand-in for a real model. It parses the
/// rendered latest message out of the default prompt layout and flags
/// two things: message names whose confusable skeleton is outside the
/// benign catalog, and setup requests whose TMSI was already seen earlier
/// in the stream (the Blind DoS signature).
#[derive(Debug)]
pub struct MockRuleBackend {
    catalog_skeletons: HashSet<String>,
    seen_tmsis: HashSet<String>,
}

impl MockRuleBackend {
    pub fn new(catalog: &MessageCatalog) -> MockRuleBackend {
        MockRuleBackend {
            catalog_skeletons: catalog.names().map(str::to_string).collect(),
            seen_tmsis: HashSet::new(),
        }
    }

    /// (name, tmsi) of the rendered latest message, if the prompt follows
    /// the default layout.
    fn parse_latest(prompt: &Prompt) -> Option<(String, String)> {
        let mut lines = prompt.user.lines();
        lines.find(|l| l.starts_with("Latest message"))?;
        let fields: Vec<&str> = lines.next()?.trim().split(" | ").collect();
        if fields.len() < 4 {
            return None;
        }
        Some((fields[1].to_string(), fields[2].to_string()))
    }
}

impl Backend for MockRuleBackend {
    fn id(&self) -> &str {
        "mock"
    }

    fn complete(&mut self, prompt: &Prompt) -> Result<String, BackendError> {
        let Some((name, tmsi)) = Self::parse_latest(prompt) else {
            return Ok("Normal".to_string());
        };
        let skeleton = hypoglyph::skeleton(&name);
        let response = if !self.catalog_skeletons.contains(&skeleton) {
            format!("Anomalous - message name {name:?} is outside the catalog")
        } else if skeleton == "RRCSetupRequest" && self.seen_tmsis.contains(&tmsi) {
            format!("Anomalous - setup request reuses TMSI {tmsi} from an existing session")
        } else {
            "Normal".to_string()
        };
        self.seen_tmsis.insert(tmsi);
        Ok(response)
    }
}

/// Connection settings for a remote chat-completion server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BackendConfig {
    pub endpoint: String,
    pub model: String,
    /// Pinned to 0 for every experiment run; any other value is rejected.
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_s: f64,
    pub retries: u32,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            endpoint: "http://127.0.0.1:8000/v1/chat/completions".to_string(),
            model: "default".to_string(),
            temperature: TEMPERATURE,
            max_tokens: 16,
            timeout_s: 30.0,
            retries: 2,
        }
    }
}

impl BackendConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.temperature != TEMPERATURE {
            return Err(format!(
                "temperature must be {TEMPERATURE} for experiment runs, got {}",
                self.temperature
            ));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    temperature: f64,
    max_tokens: u32,
    messages: [ChatMessage<'a>; 2],
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'static str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatChoiceMessage,
}

#[derive(Deserialize)]
struct ChatChoiceMessage {
    content: String,
}

/// HTTP client for a chat-completion inference server. One system entry
/// carries the task description, one user entry the rendered window; the
/// first choice's message content is the raw verdict text.
pub struct RemoteBackend {
    config: BackendConfig,
    client: reqwest::blocking::Client,
}

impl RemoteBackend {
    pub fn new(config: BackendConfig) -> Result<RemoteBackend, BackendError> {
        config.validate().map_err(BackendError::Transport)?;
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs_f64(config.timeout_s))
            .build()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        Ok(RemoteBackend { config, client })
    }

    pub fn config(&self) -> &BackendConfig {
        &self.config
    }
}

impl Backend for RemoteBackend {
    fn id(&self) -> &str {
        "remote"
    }

    fn complete(&mut self, prompt: &Prompt) -> Result<String, BackendError> {
        let body = ChatRequest {
            model: &self.config.model,
            temperature: self.config.temperature,
            max_tokens: self.config.max_tokens,
            messages: [
                ChatMessage { role: "system", content: &prompt.system },
                ChatMessage { role: "user", content: &prompt.user },
            ],
        };
        let response = self
            .client
            .post(&self.config.endpoint)
            .json(&body)
            .send()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        let status = response.status();
        let text = response
            .text()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        if !status.is_success() {
            return Err(BackendError::Transport(format!("HTTP {status}: {text}")));
        }
        // content robustness: an unparseable success body is treated as the
        // response text itself, never as a failure
        match serde_json::from_str::<ChatResponse>(&text) {
            Ok(parsed) => Ok(parsed
                .choices
                .into_iter()
                .next()
                .map(|c| c.message.content)
                .unwrap_or(text)),
            Err(_) => Ok(text),
        }
    }
}
