//! Deterministic multilingual syllable counting.
//!
//! The counter is rule-based and dependency-free:
//! - Mandarin: one syllable per Han ideograph; embedded Latin-script words
//!   fall back to the English rule.
//! - English: vowel-group counting with silent final-e suppression,
//!   consonant+`le` restoration, and `-ed`/`-es` suffix handling.
//! - German: vowel-group counting with the diphthong set
//!   {au, ei, eu, äu, ai, ie}.
//! - Spanish: vowel-group counting with weak/strong nucleus rules
//!   (weak = i, u; accented weak vowels break diphthongs).
//!
//! Digits are expanded to the spoken-word syllable count of the target
//! language (composed readings for 0–9999, digit-by-digit beyond).
//! Letters outside every rule (emoji, Cyrillic in an English sentence)
//! contribute zero and are tallied in [`CountStats::unknown_letters`].

mod numbers;
mod western;

use crate::lang::LanguageCode;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Add;

/// A non-negative syllable count.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SyllableCount(pub u32);

impl SyllableCount {
    pub const ZERO: SyllableCount = SyllableCount(0);

    pub fn value(self) -> u32 {
        self.0
    }
}

impl From<u32> for SyllableCount {
    fn from(v: u32) -> Self {
        SyllableCount(v)
    }
}

impl Add for SyllableCount {
    type Output = SyllableCount;
    fn add(self, rhs: Self) -> Self {
        SyllableCount(self.0 + rhs.0)
    }
}

impl fmt::Display for SyllableCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Soft-failure tallies produced while counting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountStats {
    /// Letters that no language rule covers; they contribute zero syllables.
    pub unknown_letters: u32,
}

fn is_han(c: char) -> bool {
    matches!(u32::from(c),
        0x3400..=0x4DBF
        | 0x4E00..=0x9FFF
        | 0xF900..=0xFAFF
        | 0x20000..=0x2A6DF
        | 0x2A700..=0x2EBEF
        | 0x30000..=0x3134F)
}

fn is_word_char(c: char) -> bool {
    (c.is_alphabetic() && !is_han(c)) || c.is_ascii_digit() || c == '\'' || c == '\u{2019}'
}

/// Splits text into tokens: Han ideographs one per token, maximal
/// letter/digit runs as word tokens, every other non-space character as its
/// own token. Concatenating the tokens reproduces all letters and
/// ideographs of the input, in order.
pub fn tokenize(text: &str, _lang: LanguageCode) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if is_word_char(c) {
            word.push(c);
            continue;
        }
        if !word.is_empty() {
            tokens.push(std::mem::take(&mut word));
        }
        if c.is_whitespace() {
            continue;
        }
        tokens.push(c.to_string());
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

/// Counts the syllables of an utterance. Deterministic; punctuation and
/// whitespace contribute zero.
pub fn count_syllables(text: &str, lang: LanguageCode) -> SyllableCount {
    count_syllables_with_stats(text, lang).0
}

/// [`count_syllables`] plus soft-failure diagnostics.
pub fn count_syllables_with_stats(text: &str, lang: LanguageCode) -> (SyllableCount, CountStats) {
    let mut total = 0u32;
    let mut stats = CountStats::default();
    for token in tokenize(text, lang) {
        total += word_syllables_inner(&token, lang, &mut stats);
    }
    (SyllableCount(total), stats)
}

/// Counts the syllables of a single token. Tokens made only of punctuation
/// or symbols count zero; any token with at least one rule-covered letter
/// counts at least one.
pub fn count_word_syllables(word: &str, lang: LanguageCode) -> SyllableCount {
    let mut stats = CountStats::default();
    SyllableCount(word_syllables_inner(word, lang, &mut stats))
}

fn word_syllables_inner(token: &str, lang: LanguageCode, stats: &mut CountStats) -> u32 {
    // A token may interleave letter runs, digit runs, and Han ideographs
    // ("mp3", "A4纸"). Each run is counted by its own rule.
    let mut total = 0u32;
    let mut covered_letter = false;
    let mut letters = String::new();
    let mut digits = String::new();

    fn flush_letters(
        letters: &mut String,
        lang: LanguageCode,
        total: &mut u32,
        covered: &mut bool,
        stats: &mut CountStats,
    ) {
        if letters.is_empty() {
            return;
        }
        let (syl, any_known, unknown) = letter_run_syllables(letters, lang);
        *total += syl;
        *covered |= any_known;
        stats.unknown_letters += unknown;
        letters.clear();
    }
    fn flush_digits(digits: &mut String, lang: LanguageCode, total: &mut u32) {
        if digits.is_empty() {
            return;
        }
        *total += numbers::integer_syllables(digits, lang);
        digits.clear();
    }

    for c in token.chars() {
        if is_han(c) {
            flush_letters(&mut letters, lang, &mut total, &mut covered_letter, stats);
            flush_digits(&mut digits, lang, &mut total);
            total += 1;
            covered_letter = true;
        } else if c.is_ascii_digit() {
            flush_letters(&mut letters, lang, &mut total, &mut covered_letter, stats);
            digits.push(c);
        } else if c.is_alphabetic() {
            flush_digits(&mut digits, lang, &mut total);
            letters.push(c);
        }
        // apostrophes and anything else: no syllable contribution
    }
    flush_letters(&mut letters, lang, &mut total, &mut covered_letter, stats);
    flush_digits(&mut digits, lang, &mut total);

    if covered_letter {
        total.max(1)
    } else {
        total
    }
}

/// Counts one run of non-Han letters. Returns (syllables, whether any
/// letter was covered by the language rule, number of unknown letters).
fn letter_run_syllables(run: &str, lang: LanguageCode) -> (u32, bool, u32) {
    let mut known = String::new();
    let mut unknown = 0u32;
    for c in run.chars().flat_map(|c| c.to_lowercase()) {
        let keep = match lang {
            // Latin-script runs inside Mandarin text use the English rule.
            LanguageCode::Zh | LanguageCode::En => c.is_ascii_alphabetic(),
            LanguageCode::De => c.is_ascii_alphabetic() || matches!(c, 'ä' | 'ö' | 'ü' | 'ß'),
            LanguageCode::Es => {
                c.is_ascii_alphabetic()
                    || matches!(c, 'á' | 'é' | 'í' | 'ó' | 'ú' | 'ü' | 'ñ')
            }
        };
        if keep {
            known.push(c);
        } else {
            unknown += 1;
        }
    }
    if known.is_empty() {
        return (0, false, unknown);
    }
    let syl = match lang {
        LanguageCode::Zh | LanguageCode::En => western::english_word(&known),
        LanguageCode::De => western::german_word(&known),
        LanguageCode::Es => western::spanish_word(&known),
    };
    (syl.max(1), true, unknown)
}
