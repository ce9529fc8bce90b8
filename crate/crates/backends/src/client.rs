//! Client traits, retry policy, usage accounting, and the in-flight cap.

use async_trait::async_trait;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Duration;
use tokio::sync::{Semaphore, SemaphorePermit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClientError {
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("upstream payload malformed: {0}")]
    MalformedPayload(String),
    #[error("mock script exhausted")]
    ScriptExhausted,
}

/// Decoding controls forwarded to the completion endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodingControls {
    pub temperature: f64,
    pub max_tokens: Option<u32>,
}

impl Default for DecodingControls {
    fn default() -> Self {
        // judges and back-translation want deterministic decoding
        DecodingControls {
            temperature: 0.0,
            max_tokens: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatRequest {
    pub system: Option<String>,
    pub user: String,
    pub controls: DecodingControls,
}

impl ChatRequest {
    pub fn user_only(user: impl Into<String>) -> Self {
        ChatRequest {
            system: None,
            user: user.into(),
            controls: DecodingControls::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChatResponse {
    pub text: String,
    pub total_tokens: u64,
    pub latency: Duration,
}

/// A chat-completion backend. Implementations must be shareable across
/// concurrent callers.
#[async_trait]
pub trait ChatClient: Send + Sync {
    async fn complete(&self, req: ChatRequest) -> Result<ChatResponse, ClientError>;

    /// Reachability probe; mocks are always ready.
    async fn ready(&self) -> bool {
        true
    }
}

/// A text-embedding backend returning fixed-dimension vectors.
#[async_trait]
pub trait EmbeddingClient: Send + Sync {
    async fn embed(&self, text: &str) -> Result<Vec<f64>, ClientError>;

    async fn ready(&self) -> bool {
        true
    }
}

/// Running totals of external requests and token usage. One record per
/// client invocation, including retried attempts.
#[derive(Debug, Default)]
pub struct UsageLedger {
    requests: AtomicU64,
    total_tokens: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct UsageSnapshot {
    pub requests: u64,
    pub total_tokens: u64,
}

impl UsageLedger {
    pub fn record_request(&self) {
        self.requests.fetch_add(1, Ordering::Relaxed);
    }

    pub fn record_tokens(&self, tokens: u64) {
        self.total_tokens.fetch_add(tokens, Ordering::Relaxed);
    }

    pub fn snapshot(&self) -> UsageSnapshot {
        UsageSnapshot {
            requests: self.requests.load(Ordering::Relaxed),
            total_tokens: self.total_tokens.load(Ordering::Relaxed),
        }
    }
}

/// Exponential backoff policy for transport failures. Only transport
/// errors retry; malformed payloads surface immediately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_backoff: Duration,
    pub multiplier: f64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            base_backoff: Duration::from_millis(500),
            multiplier: 2.0,
        }
    }
}

impl RetryPolicy {
    /// No waiting between attempts; used by tests.
    pub fn immediate(max_attempts: u32) -> Self {
        RetryPolicy {
            max_attempts,
            base_backoff: Duration::ZERO,
            multiplier: 1.0,
        }
    }

    pub fn backoff_for(&self, attempt: u32) -> Duration {
        let factor = self.multiplier.powi(attempt.saturating_sub(1) as i32);
        self.base_backoff.mul_f64(factor)
    }
}

/// FIFO-fair cap on concurrently in-flight external requests.
#[derive(Debug)]
pub struct RequestLimiter {
    sem: Semaphore,
    cap: usize,
}

pub const DEFAULT_IN_FLIGHT_CAP: usize = 8;

impl Default for RequestLimiter {
    fn default() -> Self {
        Self::new(DEFAULT_IN_FLIGHT_CAP)
    }
}

impl RequestLimiter {
    pub fn new(cap: usize) -> Self {
        RequestLimiter {
            sem: Semaphore::new(cap.max(1)),
            cap: cap.max(1),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub async fn acquire(&self) -> SemaphorePermit<'_> {
        // tokio semaphores queue waiters fairly in FIFO order
        self.sem.acquire().await.expect("limiter semaphore never closes")
    }
}

pub type SharedChatClient = Arc<dyn ChatClient>;
pub type SharedEmbeddingClient = Arc<dyn EmbeddingClient>;
