//! HTTP clients speaking the de facto completions wire shape:
//! `{model, messages[{role, content}], temperature}` in,
//! `{choices[{message{content}}], usage{total_tokens}}` out, and the
//! analogous `{input}` / `{data[{embedding[]}]}` embedding shape.

use crate::client::{
    ChatClient, ChatRequest, ChatResponse, ClientError, EmbeddingClient,
};
use async_trait::async_trait;
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HttpClientConfig {
    /// Base URL up to the API root, e.g. `http://host:8000/v1`.
    pub base_url: String,
    pub model: String,
    /// Bearer token; usually injected from the environment.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub api_key: Option<String>,
    #[serde(default = "default_timeout_s")]
    pub timeout_s: u64,
}

fn default_timeout_s() -> u64 {
    60
}

#[derive(Serialize)]
struct WireMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatBody<'a> {
    model: &'a str,
    messages: Vec<WireMessage<'a>>,
    temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_tokens: Option<u32>,
}

#[derive(Deserialize)]
struct ChatReply {
    choices: Vec<ChatChoice>,
    #[serde(default)]
    usage: Option<WireUsage>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChoiceMessage,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    content: String,
}

#[derive(Deserialize)]
struct WireUsage {
    #[serde(default)]
    total_tokens: u64,
}

pub struct OpenAiChatClient {
    cfg: HttpClientConfig,
    http: reqwest::Client,
}

impl OpenAiChatClient {
    pub fn new(cfg: HttpClientConfig) -> Result<Self, ClientError> {
        let http = reqwest::Client::builder()
            .timeout(Duration::from_secs(cfg.timeout_s))
            .build()
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        Ok(OpenAiChatClient { cfg, http })
    }
}

#[async_trait]
impl ChatClient for OpenAiChatClient {
    async fn complete(&self, req: ChatRequest) -> Result<ChatResponse, ClientError> {
        let mut messages = Vec::new();
        if let Some(system) = &req.system {
            messages.push(WireMessage {
                role: "system",
                content: system,
            });
        }
        messages.push(WireMessage {
            role: "user",
            content: &req.user,
        });
        let body = ChatBody {
            model: &self.cfg.model,
            messages,
            temperature: req.controls.temperature,
            max_tokens: req.controls.max_tokens,
        };
        let url = format!("{}/chat/completions", self.cfg.base_url.trim_end_matches('/'));
        let start = Instant::now();
        let mut request = self.http.post(&url).json(&body);
        if let Some(key) = &self.cfg.api_key {
            request = request.bearer_auth(key);
        }
        let response = request
            .send()
            .await
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(ClientError::Transport(format!("HTTP {status} from {url}")));
        }
        let reply: ChatReply = response
            .json()
            .await
            .map_err(|e| ClientError::MalformedPayload(e.to_string()))?;
        let text = reply
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| ClientError::MalformedPayload("no choices in reply".into()))?;
        Ok(ChatResponse {
            text,
            total_tokens: reply.usage.map(|u| u.total_tokens).unwrap_or(0),
            latency: start.elapsed(),
        })
    }

    async fn ready(&self) -> bool {
        // any HTTP response (even an error status) proves reachability
        self.http.get(&self.cfg.base_url).send().await.is_ok()
    }
}

#[derive(Serialize)]
struct EmbeddingBody<'a> {
    model: &'a str,
    input: &'a str,
}

#[derive(Deserialize)]
struct EmbeddingReply {
    data: Vec<EmbeddingRow>,
}

#[derive(Deserialize)]
struct EmbeddingRow {
    embedding: Vec<f64>,
}

pub struct OpenAiEmbeddingClient {
    cfg: HttpClientConfig,
    http: reqwest::Client,
}

impl OpenAiEmbeddingClient {
    pub fn new(cfg: HttpClientConfig) -> Result<Self, ClientError> {
        let http = reqwest::Client::builder()
            .timeout(Duration::from_secs(cfg.timeout_s))
            .build()
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        Ok(OpenAiEmbeddingClient { cfg, http })
    }
}

#[async_trait]
impl EmbeddingClient for OpenAiEmbeddingClient {
    async fn embed(&self, text: &str) -> Result<Vec<f64>, ClientError> {
        let url = format!("{}/embeddings", self.cfg.base_url.trim_end_matches('/'));
        let body = EmbeddingBody {
            model: &self.cfg.model,
            input: text,
        };
        let mut request = self.http.post(&url).json(&body);
        if let Some(key) = &self.cfg.api_key {
            request = request.bearer_auth(key);
        }
        let response = request
            .send()
            .await
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(ClientError::Transport(format!("HTTP {status} from {url}")));
        }
        let reply: EmbeddingReply = response
            .json()
            .await
            .map_err(|e| ClientError::MalformedPayload(e.to_string()))?;
        reply
            .data
            .into_iter()
            .next()
            .map(|d| d.embedding)
            .ok_or_else(|| ClientError::MalformedPayload("no embedding rows in reply".into()))
    }

    async fn ready(&self) -> bool {
        self.http.get(&self.cfg.base_url).send().await.is_ok()
    }
}
