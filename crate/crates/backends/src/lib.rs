//! Pluggable LLM backends and quality-reward computation.
//!
//! Everything external is reached through the [`client::ChatClient`] and
//! [`client::EmbeddingClient`] traits; deterministic scripted mocks make the
//! whole module testable offline. The [`quality::QualityEngine`] wires
//! clients, retry, usage accounting, and an in-flight cap into the three
//! quality rewards: back-translation fidelity, the binary fluency judge,
//! and the reason-based generative verdict.

pub mod client;
pub mod http;
pub mod mock;
pub mod prompts;
pub mod quality;

pub use client::{
    ChatClient, ChatRequest, ChatResponse, ClientError, DecodingControls, EmbeddingClient,
    RequestLimiter, RetryPolicy, UsageLedger, UsageSnapshot,
};
pub use quality::{
    cosine_similarity, parse_fluency_verdict, parse_genrm_verdict, FidelityConfig, GenRMOutput,
    QualityEngine, QualityError, QualityInputs, QualityMode, RubricCombiner,
};
