//! Quality rewards: back-translation semantic fidelity, the binary fluency
//! judge, and the reason-based generative verdict, plus the mode dispatch
//! that combines them.

use crate::client::{
    ChatRequest, ChatResponse, ClientError, RequestLimiter, RetryPolicy, SharedChatClient,
    SharedEmbeddingClient, UsageLedger, UsageSnapshot,
};
use crate::prompts;
use homura_core::lang::LanguageCode;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QualityError {
    #[error("upstream call failed after {attempts} attempts: {last}")]
    RetryExhausted { attempts: u32, last: String },
    #[error("upstream returned an empty completion")]
    EmptyCompletion,
    #[error("upstream error: {0}")]
    Client(#[from] ClientError),
    #[error("embedding dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cannot take cosine of a zero vector")]
    ZeroVector,
    #[error("fluency verdict unparseable: {0:?}")]
    UnparseableVerdict(String),
    #[error("reward-model output unparseable: {0}")]
    UnparseableDocument(String),
    #[error("fidelity clip bounds invalid: tau_min {0} > tau_max {1}")]
    InvalidClipBounds(f64, f64),
}

/// Clip bounds of the fidelity reward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityConfig {
    pub tau_min: f64,
    pub tau_max: f64,
}

impl Default for FidelityConfig {
    fn default() -> Self {
        FidelityConfig {
            tau_min: 0.0,
            tau_max: 0.8,
        }
    }
}

impl FidelityConfig {
    pub fn validate(&self) -> Result<(), QualityError> {
        if self.tau_min <= self.tau_max {
            Ok(())
        } else {
            Err(QualityError::InvalidClipBounds(self.tau_min, self.tau_max))
        }
    }
}

/// How rubric mode combines fidelity and fluency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RubricCombiner {
    /// R_bt · R_flu: fluency acts as a hard gate.
    #[default]
    Product,
    /// w_bt·R_bt + w_flu·R_flu.
    WeightedMean { w_bt: f64, w_flu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityMode {
    Rubric,
    Reason,
    ExternalRm,
}

/// Parsed generative-reward-model output: free-form reasoning plus a strict
/// binary score.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenRMOutput {
    #[serde(rename = "COT")]
    pub cot: String,
    pub score: u8,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GenRMDocument {
    #[serde(rename = "COT")]
    cot: String,
    score: serde_json::Value,
}

/// Cosine similarity of two equal-dimension non-zero vectors, clamped to
/// [-1, 1] against rounding spill.
pub fn cosine_similarity(u: &[f64], v: &[f64]) -> Result<f64, QualityError> {
    if u.len() != v.len() {
        return Err(QualityError::DimensionMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu2: f64 = u.iter().map(|a| a * a).sum();
    let nv2: f64 = v.iter().map(|b| b * b).sum();
    if nu2 == 0.0 || nv2 == 0.0 {
        return Err(QualityError::ZeroVector);
    }
    // sqrt of the product keeps the identity case exactly 1
    Ok((dot / (nu2 * nv2).sqrt()).clamp(-1.0, 1.0))
}

/// Parses the fluency judge's completion: `<<1>>` or `<<0>>` up to
/// surrounding whitespace, nothing else.
pub fn parse_fluency_verdict(completion: &str) -> Result<u8, QualityError> {
    match completion.trim() {
        "<<1>>" => Ok(1),
        "<<0>>" => Ok(0),
        other => Err(QualityError::UnparseableVerdict(other.to_string())),
    }
}

/// Extracts the outermost well-formed verdict document from a completion
/// that may wrap it in prose, then parses it strictly: exactly the fields
/// `COT` (string) and `score` (the number 0 or 1).
pub fn parse_genrm_verdict(completion: &str) -> Result<GenRMOutput, QualityError> {
    let bytes: Vec<char> = completion.chars().collect();
    let mut search_from = 0usize;
    while let Some(open_rel) = bytes[search_from..].iter().position(|&c| c == '{') {
        let open = search_from + open_rel;
        if let Some(close) = matching_brace(&bytes, open) {
            let doc: String = bytes[open..=close].iter().collect();
            match serde_json::from_str::<GenRMDocument>(&doc) {
                Ok(parsed) => {
                    let score = match parsed.score {
                        serde_json::Value::Number(ref n) => match n.as_u64() {
                            Some(0) => 0u8,
                            Some(1) => 1u8,
                            _ => {
                                return Err(QualityError::UnparseableDocument(format!(
                                    "score must be 0 or 1, got {n}"
                                )))
                            }
                        },
                        other => {
                            return Err(QualityError::UnparseableDocument(format!(
                                "score must be the number 0 or 1, got {other}"
                            )))
                        }
                    };
                    return Ok(GenRMOutput {
                        cot: parsed.cot,
                        score,
                    });
                }
                Err(_) => {
                    // not the verdict document; keep scanning
                    search_from = open + 1;
                }
            }
        } else {
            break;
        }
    }
    Err(QualityError::UnparseableDocument(
        "no well-formed verdict document found".into(),
    ))
}

/// Index of the brace matching `open`, honoring JSON strings and escapes.
fn matching_brace(chars: &[char], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    let mut in_string = false;
    let mut escaped = false;
    for (i, &c) in chars.iter().enumerate().skip(open) {
        if in_string {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_string = false;
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '{' => depth += 1,
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Inputs shared by every quality mode.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityInputs {
    pub context: String,
    pub source: String,
    pub translation: String,
    pub source_lang: LanguageCode,
    pub target_lang: LanguageCode,
}

/// Wires clients, retry, the in-flight cap, and usage accounting into the
/// quality rewards. Clone-cheap via shared handles.
#[derive(Clone)]
pub struct QualityEngine {
    chat: SharedChatClient,
    /// Separate endpoint for external-RM mode; falls back to `chat`.
    external_chat: Option<SharedChatClient>,
    embedding: SharedEmbeddingClient,
    ledger: Arc<UsageLedger>,
    limiter: Arc<RequestLimiter>,
    retry: RetryPolicy,
    fidelity: FidelityConfig,
    combiner: RubricCombiner,
}

impl QualityEngine {
    pub fn new(chat: SharedChatClient, embedding: SharedEmbeddingClient) -> Self {
        QualityEngine {
            chat,
            external_chat: None,
            embedding,
            ledger: Arc::new(UsageLedger::default()),
            limiter: Arc::new(RequestLimiter::default()),
            retry: RetryPolicy::default(),
            fidelity: FidelityConfig::default(),
            combiner: RubricCombiner::default(),
        }
    }

    pub fn with_retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    pub fn with_limiter(mut self, limiter: Arc<RequestLimiter>) -> Self {
        self.limiter = limiter;
        self
    }

    pub fn with_fidelity(mut self, fidelity: FidelityConfig) -> Self {
        self.fidelity = fidelity;
        self
    }

    pub fn with_combiner(mut self, combiner: RubricCombiner) -> Self {
        self.combiner = combiner;
        self
    }

    pub fn with_external_chat(mut self, client: SharedChatClient) -> Self {
        self.external_chat = Some(client);
        self
    }

    pub fn usage(&self) -> UsageSnapshot {
        self.ledger.snapshot()
    }

    pub fn ledger(&self) -> Arc<UsageLedger> {
        Arc::clone(&self.ledger)
    }

    pub async fn ready(&self) -> bool {
        self.chat.ready().await && self.embedding.ready().await
    }

    /// One guarded chat call: in-flight cap, ledger accounting per attempt,
    /// and retries with exponential backoff on transport failures.
    async fn chat_call(
        &self,
        client: &SharedChatClient,
        req: ChatRequest,
    ) -> Result<ChatResponse, QualityError> {
        let _permit = self.limiter.acquire().await;
        let mut last = String::new();
        for attempt in 1..=self.retry.max_attempts {
            self.ledger.record_request();
            match client.complete(req.clone()).await {
                Ok(resp) => {
                    self.ledger.record_tokens(resp.total_tokens);
                    if resp.text.trim().is_empty() {
                        return Err(QualityError::EmptyCompletion);
                    }
                    return Ok(resp);
                }
                Err(e @ (ClientError::Transport(_) | ClientError::ScriptExhausted)) => {
                    last = e.to_string();
                    if attempt < self.retry.max_attempts {
                        let backoff = self.retry.backoff_for(attempt);
                        if !backoff.is_zero() {
                            tokio::time::sleep(backoff).await;
                        }
                    }
                }
                Err(e @ ClientError::MalformedPayload(_)) => return Err(e.into()),
            }
        }
        Err(QualityError::RetryExhausted {
            attempts: self.retry.max_attempts,
            last,
        })
    }

    async fn embed_call(&self, text: &str) -> Result<Vec<f64>, QualityError> {
        let _permit = self.limiter.acquire().await;
        self.ledger.record_request();
        Ok(self.embedding.embed(text).await?)
    }

    /// Back-translates a hypothesis into the original source language.
    pub async fn back_translate(
        &self,
        hypothesis: &str,
        source_lang: LanguageCode,
    ) -> Result<String, QualityError> {
        let prompt = prompts::render_back_translate(source_lang, hypothesis);
        let resp = self.chat_call(&self.chat, ChatRequest::user_only(prompt)).await?;
        Ok(resp.text.trim().to_string())
    }

    /// Clipped embedding-cosine fidelity between source and reconstruction.
    pub async fn fidelity_reward(
        &self,
        source: &str,
        back_translation: &str,
    ) -> Result<f64, QualityError> {
        self.fidelity.validate()?;
        let u = self.embed_call(source).await?;
        let v = self.embed_call(back_translation).await?;
        let cos = cosine_similarity(&u, &v)?;
        Ok(cos.clamp(self.fidelity.tau_min, self.fidelity.tau_max))
    }

    /// Binary well-formedness verdict from the fluency judge.
    pub async fn fluency_reward(
        &self,
        context: &str,
        source_text: &str,
        translation: &str,
        target_lang: LanguageCode,
    ) -> Result<u8, QualityError> {
        let prompt = prompts::render_fluency_judge(target_lang, context, source_text, translation);
        let resp = self.chat_call(&self.chat, ChatRequest::user_only(prompt)).await?;
        parse_fluency_verdict(&resp.text)
    }

    /// Reason-based verdict: the judge back-translates, checks consistency
    /// and quality internally, and emits one binary score.
    pub async fn genrm_reward(
        &self,
        context: &str,
        source: &str,
        translation: &str,
    ) -> Result<(GenRMOutput, u8), QualityError> {
        self.genrm_reward_on(&self.chat.clone(), context, source, translation).await
    }

    async fn genrm_reward_on(
        &self,
        client: &SharedChatClient,
        context: &str,
        source: &str,
        translation: &str,
    ) -> Result<(GenRMOutput, u8), QualityError> {
        let prompt = prompts::render_genrm_judge(context, source, translation);
        let resp = self.chat_call(client, ChatRequest::user_only(prompt)).await?;
        let parsed = parse_genrm_verdict(&resp.text)?;
        let score = parsed.score;
        Ok((parsed, score))
    }

    /// Mode dispatch: rubric combines fidelity and fluency; reason and
    /// external-RM pass the generative verdict through as a real.
    pub async fn quality_reward(
        &self,
        inputs: &QualityInputs,
        mode: QualityMode,
    ) -> Result<f64, QualityError> {
        match mode {
            QualityMode::Rubric => {
                let bt = self
                    .back_translate(&inputs.translation, inputs.source_lang)
                    .await?;
                let r_bt = self.fidelity_reward(&inputs.source, &bt).await?;
                let r_flu = self
                    .fluency_reward(
                        &inputs.context,
                        &inputs.source,
                        &inputs.translation,
                        inputs.target_lang,
                    )
                    .await? as f64;
                Ok(match self.combiner {
                    RubricCombiner::Product => r_bt * r_flu,
                    RubricCombiner::WeightedMean { w_bt, w_flu } => {
                        w_bt * r_bt + w_flu * r_flu
                    }
                })
            }
            QualityMode::Reason => {
                let (_, score) = self
                    .genrm_reward(&inputs.context, &inputs.source, &inputs.translation)
                    .await?;
                Ok(score as f64)
            }
            QualityMode::ExternalRm => {
                let client = self
                    .external_chat
                    .clone()
                    .unwrap_or_else(|| self.chat.clone());
                let (_, score) = self
                    .genrm_reward_on(&client, &inputs.context, &inputs.source, &inputs.translation)
                    .await?;
                Ok(score as f64)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_basics() {
        assert_eq!(cosine_similarity(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&[1.0, 2.0], &[-1.0, -2.0]).unwrap(), -1.0);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!(matches!(
            cosine_similarity(&[1.0], &[1.0, 2.0]),
            Err(QualityError::DimensionMismatch(1, 2))
        ));
        assert!(matches!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 2.0]),
            Err(QualityError::ZeroVector)
        ));
    }

    #[test]
    fn fluency_verdicts() {
        assert_eq!(parse_fluency_verdict("<<1>>").unwrap(), 1);
        assert_eq!(parse_fluency_verdict("  <<0>>\n").unwrap(), 0);
        assert!(matches!(
            parse_fluency_verdict("The translation is fine."),
            Err(QualityError::UnparseableVerdict(_))
        ));
        assert!(parse_fluency_verdict("<<2>>").is_err());
        assert!(parse_fluency_verdict("<<1>> because ...").is_err());
    }

    #[test]
    fn genrm_verdict_parsing() {
        let ok = r#"{"COT": "reasoning here", "score": 1}"#;
        let parsed = parse_genrm_verdict(ok).unwrap();
        assert_eq!(parsed.score, 1);
        assert_eq!(parsed.cot, "reasoning here");

        // surrounding prose tolerated
        let wrapped = format!("Sure, here is my verdict:\n{ok}\nHope that helps!");
        assert_eq!(parse_genrm_verdict(&wrapped).unwrap().score, 1);

        // braces inside the reasoning string are fine
        let nested = r#"{"COT": "the set {a, b} is preserved", "score": 0}"#;
        assert_eq!(parse_genrm_verdict(nested).unwrap().score, 0);

        for bad in [
            r#"{"COT": "x", "score": 2}"#,
            r#"{"COT": "x"}"#,
            r#"{"score": 1}"#,
            r#"{"COT": "x", "score": "1"}"#,
            r#"{"COT": "x", "score": 1, "extra": true}"#,
            "no document at all",
            r#"{"COT": "unterminated"#,
        ] {
            assert!(parse_genrm_verdict(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn genrm_roundtrip_preserves_score() {
        for score in [0u8, 1] {
            let doc = GenRMOutput {
                cot: "steps \"quoted\" and {braced}".into(),
                score,
            };
            let serialized = serde_json::to_string(&doc).unwrap();
            let reparsed = parse_genrm_verdict(&serialized).unwrap();
            assert_eq!(reparsed, doc);
        }
    }
}
