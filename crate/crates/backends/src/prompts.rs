//! Byte-frozen prompt assets and their render functions.
//!
//! The templates live under `prompts/` and are embedded at compile time;
//! tests pin their SHA-256 digests so accidental edits are caught. Only the
//! named `{placeholder}` keys are substituted; every other brace in a
//! template is literal.

use homura_core::lang::LanguageCode;
use sha2::{Digest, Sha256};

pub const FLUENCY_JUDGE_TEMPLATE: &str = include_str!("../prompts/fluency_judge.txt");
pub const GENRM_JUDGE_TEMPLATE: &str = include_str!("../prompts/genrm_judge.txt");
pub const BACK_TRANSLATE_TEMPLATE: &str = include_str!("../prompts/back_translate.txt");

pub fn sha256_hex(data: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(data.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn language_name(lang: LanguageCode) -> &'static str {
    match lang {
        LanguageCode::Zh => "Chinese",
        LanguageCode::En => "English",
        LanguageCode::De => "German",
        LanguageCode::Es => "Spanish",
    }
}

/// Fluency-judge prompt with `{target_lang}`, `{context}`, `{text}`, and
/// `{translation}` substituted.
pub fn render_fluency_judge(
    target_lang: LanguageCode,
    context: &str,
    text: &str,
    translation: &str,
) -> String {
    FLUENCY_JUDGE_TEMPLATE
        .replace("{target_lang}", language_name(target_lang))
        .replace("{context}", context)
        .replace("{text}", text)
        .replace("{translation}", translation)
}

/// GenRM prompt with `{context}`, `{current_text}`, and `{translated_text}`
/// substituted.
pub fn render_genrm_judge(context: &str, source: &str, translation: &str) -> String {
    GENRM_JUDGE_TEMPLATE
        .replace("{context}", context)
        .replace("{current_text}", source)
        .replace("{translated_text}", translation)
}

/// Back-translation instruction targeting the original source language.
pub fn render_back_translate(source_lang: LanguageCode, text: &str) -> String {
    BACK_TRANSLATE_TEMPLATE
        .replace("{target_lang_name}", language_name(source_lang))
        .replace("{text}", text)
}
