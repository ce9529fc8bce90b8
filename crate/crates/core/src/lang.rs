//! Supported languages and their cross-linguistic density constants.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A language code outside the supported set.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported language code: {0:?} (expected one of zh, en, de, es)")]
pub struct UnsupportedLanguage(pub String);

/// The four supported languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LanguageCode {
    Zh,
    En,
    De,
    Es,
}

impl LanguageCode {
    pub const ALL: [LanguageCode; 4] = [
        LanguageCode::Zh,
        LanguageCode::En,
        LanguageCode::De,
        LanguageCode::Es,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LanguageCode::Zh => "zh",
            LanguageCode::En => "en",
            LanguageCode::De => "de",
            LanguageCode::Es => "es",
        }
    }
}

impl FromStr for LanguageCode {
    type Err = UnsupportedLanguage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zh" => Ok(LanguageCode::Zh),
            "en" => Ok(LanguageCode::En),
            "de" => Ok(LanguageCode::De),
            "es" => Ok(LanguageCode::Es),
            other => Err(UnsupportedLanguage(other.to_string())),
        }
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-language syllabification constants: spoken syllable rate,
/// normalized information density, and the theoretical expansion factor
/// when translating out of Mandarin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanguageProfile {
    pub code: LanguageCode,
    /// Syllables per second of natural speech.
    pub syllable_rate: f64,
    /// Normalized per-syllable information density, in [0, 1].
    pub info_density: f64,
    /// Expected length expansion relative to a Mandarin source.
    pub theoretical_expansion_from_zh: f64,
}

const PROFILES: [LanguageProfile; 4] = [
    LanguageProfile {
        code: LanguageCode::Zh,
        syllable_rate: 5.18,
        info_density: 0.94,
        theoretical_expansion_from_zh: 1.00,
    },
    LanguageProfile {
        code: LanguageCode::En,
        syllable_rate: 6.19,
        info_density: 0.91,
        theoretical_expansion_from_zh: 1.03,
    },
    LanguageProfile {
        code: LanguageCode::De,
        syllable_rate: 5.97,
        info_density: 0.79,
        theoretical_expansion_from_zh: 1.19,
    },
    LanguageProfile {
        code: LanguageCode::Es,
        syllable_rate: 7.82,
        info_density: 0.63,
        theoretical_expansion_from_zh: 1.49,
    },
];

impl LanguageProfile {
    pub fn of(code: LanguageCode) -> &'static LanguageProfile {
        match code {
            LanguageCode::Zh => &PROFILES[0],
            LanguageCode::En => &PROFILES[1],
            LanguageCode::De => &PROFILES[2],
            LanguageCode::Es => &PROFILES[3],
        }
    }
}

/// Splits a `"zh-en"`-style pair into source and target codes.
pub fn parse_lang_pair(pair: &str) -> Result<(LanguageCode, LanguageCode), UnsupportedLanguage> {
    let mut it = pair.splitn(2, '-');
    let src = it.next().unwrap_or("");
    let tgt = it
        .next()
        .ok_or_else(|| UnsupportedLanguage(pair.to_string()))?;
    Ok((src.parse()?, tgt.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_constants_match_reference_table() {
        let zh = LanguageProfile::of(LanguageCode::Zh);
        assert_eq!(
            (zh.syllable_rate, zh.info_density, zh.theoretical_expansion_from_zh),
            (5.18, 0.94, 1.00)
        );
        let en = LanguageProfile::of(LanguageCode::En);
        assert_eq!(
            (en.syllable_rate, en.info_density, en.theoretical_expansion_from_zh),
            (6.19, 0.91, 1.03)
        );
        let de = LanguageProfile::of(LanguageCode::De);
        assert_eq!(
            (de.syllable_rate, de.info_density, de.theoretical_expansion_from_zh),
            (5.97, 0.79, 1.19)
        );
        let es = LanguageProfile::of(LanguageCode::Es);
        assert_eq!(
            (es.syllable_rate, es.info_density, es.theoretical_expansion_from_zh),
            (7.82, 0.63, 1.49)
        );
    }

    #[test]
    fn only_four_codes_parse() {
        for ok in ["zh", "en", "de", "es", "EN", " es "] {
            assert!(ok.parse::<LanguageCode>().is_ok(), "{ok}");
        }
        for bad in ["fr", "ja", "", "english", "zh-en"] {
            assert!(bad.parse::<LanguageCode>().is_err(), "{bad}");
        }
    }

    #[test]
    fn lang_pair_parses() {
        assert_eq!(
            parse_lang_pair("zh-en").unwrap(),
            (LanguageCode::Zh, LanguageCode::En)
        );
        assert!(parse_lang_pair("zh").is_err());
        assert!(parse_lang_pair("zh-fr").is_err());
    }
}
