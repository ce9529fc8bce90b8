//! Deterministic offline clients for tests and local runs.

use crate::client::{
    ChatClient, ChatRequest, ChatResponse, ClientError, EmbeddingClient,
};
use async_trait::async_trait;
use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Duration;

/// One scripted turn of a [`ScriptedChatClient`].
#[derive(Debug, Clone)]
pub enum ScriptedReply {
    Text(String),
    TransportFailure(String),
}

impl ScriptedReply {
    pub fn text(s: impl Into<String>) -> Self {
        ScriptedReply::Text(s.into())
    }

    pub fn failure(s: impl Into<String>) -> Self {
        ScriptedReply::TransportFailure(s.into())
    }
}

/// Replays a fixed reply sequence; errs with [`ClientError::ScriptExhausted`]
/// once the script runs out. Counts every invocation.
#[derive(Debug, Default)]
pub struct ScriptedChatClient {
    script: Mutex<VecDeque<ScriptedReply>>,
    calls: AtomicU64,
}

impl ScriptedChatClient {
    pub fn new(replies: Vec<ScriptedReply>) -> Self {
        ScriptedChatClient {
            script: Mutex::new(replies.into()),
            calls: AtomicU64::new(0),
        }
    }

    pub fn replying(texts: &[&str]) -> Self {
        Self::new(texts.iter().map(|t| ScriptedReply::text(*t)).collect())
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

#[async_trait]
impl ChatClient for ScriptedChatClient {
    async fn complete(&self, _req: ChatRequest) -> Result<ChatResponse, ClientError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let next = self.script.lock().unwrap().pop_front();
        match next {
            Some(ScriptedReply::Text(text)) => Ok(ChatResponse {
                total_tokens: text.split_whitespace().count() as u64,
                text,
                latency: Duration::ZERO,
            }),
            Some(ScriptedReply::TransportFailure(msg)) => Err(ClientError::Transport(msg)),
            None => Err(ClientError::ScriptExhausted),
        }
    }
}

/// Routes each request through a closure; handy for request-dependent mocks.
pub struct FnChatClient<F> {
    handler: F,
    calls: AtomicU64,
}

impl<F> FnChatClient<F>
where
    F: Fn(&ChatRequest) -> Result<String, ClientError> + Send + Sync,
{
    pub fn new(handler: F) -> Self {
        FnChatClient {
            handler,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

#[async_trait]
impl<F> ChatClient for FnChatClient<F>
where
    F: Fn(&ChatRequest) -> Result<String, ClientError> + Send + Sync,
{
    async fn complete(&self, req: ChatRequest) -> Result<ChatResponse, ClientError> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let text = (self.handler)(&req)?;
        Ok(ChatResponse {
            total_tokens: text.split_whitespace().count() as u64,
            text,
            latency: Duration::ZERO,
        })
    }
}

/// Exact text-to-vector table. Unknown texts are a transport error so tests
/// notice missing fixtures immediately.
#[derive(Debug, Default)]
pub struct ScriptedEmbeddingClient {
    table: HashMap<String, Vec<f64>>,
}

impl ScriptedEmbeddingClient {
    pub fn new(entries: Vec<(&str, Vec<f64>)>) -> Self {
        ScriptedEmbeddingClient {
            table: entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }
}

#[async_trait]
impl EmbeddingClient for ScriptedEmbeddingClient {
    async fn embed(&self, text: &str) -> Result<Vec<f64>, ClientError> {
        self.table
            .get(text)
            .cloned()
            .ok_or_else(|| ClientError::Transport(format!("no scripted embedding for {text:?}")))
    }
}

/// Deterministic offline embedder: a hashed bag of character n-grams
/// (n = 1..=3), L2-normalized. Identical texts embed identically; texts
/// sharing n-grams land close, disjoint scripts land near-orthogonal.
#[derive(Debug, Clone, Copy)]
pub struct NgramHashEmbedder {
    pub dim: usize,
}

impl Default for NgramHashEmbedder {
    fn default() -> Self {
        NgramHashEmbedder { dim: 256 }
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl NgramHashEmbedder {
    pub fn vector(&self, text: &str) -> Vec<f64> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut v = vec![0.0f64; self.dim];
        for n in 1..=3usize {
            if chars.len() < n {
                continue;
            }
            for window in chars.windows(n) {
                let key: String = window.iter().collect();
                let h = fnv1a64(key.as_bytes());
                v[(h % self.dim as u64) as usize] += 1.0;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in &mut v {
                *x /= norm;
            }
        }
        v
    }
}

#[async_trait]
impl EmbeddingClient for NgramHashEmbedder {
    async fn embed(&self, text: &str) -> Result<Vec<f64>, ClientError> {
        Ok(self.vector(text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[tokio::test]
    async fn scripted_chat_replays_in_order() {
        let client = ScriptedChatClient::replying(&["first", "second"]);
        let req = ChatRequest::user_only("x");
        assert_eq!(client.complete(req.clone()).await.unwrap().text, "first");
        assert_eq!(client.complete(req.clone()).await.unwrap().text, "second");
        assert_eq!(
            client.complete(req).await.unwrap_err(),
            ClientError::ScriptExhausted
        );
        assert_eq!(client.calls(), 3);
    }

    #[tokio::test]
    async fn ngram_embedder_is_deterministic_and_normalized() {
        let emb = NgramHashEmbedder::default();
        let a = emb.embed("我曾经在这看到过几艘陌生的船。").await.unwrap();
        let b = emb.embed("我曾经在这看到过几艘陌生的船。").await.unwrap();
        assert_eq!(a, b);
        let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
