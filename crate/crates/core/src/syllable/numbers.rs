//! Spoken-word syllable counts for integer tokens.
//!
//! Integers 0–9999 use the composed reading of the language (e.g. 21 as
//! "twenty-one", 二十一, "einundzwanzig", "veintiuno"); longer tokens and
//! tokens with leading zeros are read digit by digit.

use crate::lang::LanguageCode;

/// Syllables of a digit-only token under the given language.
pub fn integer_syllables(digits: &str, lang: LanguageCode) -> u32 {
    debug_assert!(digits.chars().all(|c| c.is_ascii_digit()));
    let digit_by_digit = digits.len() > 4 || (digits.len() > 1 && digits.starts_with('0'));
    if digit_by_digit {
        return digits
            .chars()
            .map(|c| digit_word(c as u32 - '0' as u32, lang))
            .sum();
    }
    let value: u32 = digits.parse().unwrap_or(0);
    composed(value, lang)
}

fn digit_word(d: u32, lang: LanguageCode) -> u32 {
    match lang {
        LanguageCode::Zh => 1,
        LanguageCode::En => {
            if d == 0 {
                2 // ze-ro
            } else {
                EN_ONES[d as usize]
            }
        }
        LanguageCode::De => {
            if d == 0 {
                1 // null
            } else {
                DE_ONES[d as usize]
            }
        }
        LanguageCode::Es => {
            if d == 0 {
                2 // ce-ro
            } else {
                ES_ONES[d as usize]
            }
        }
    }
}

fn composed(n: u32, lang: LanguageCode) -> u32 {
    match lang {
        LanguageCode::Zh => zh_composed(n),
        LanguageCode::En => en_composed(n),
        LanguageCode::De => de_composed(n),
        LanguageCode::Es => es_composed(n),
    }
}

// one..nine
const EN_ONES: [u32; 10] = [0, 1, 1, 1, 1, 1, 1, 2, 1, 1];
// ten..nineteen
const EN_TEENS: [u32; 10] = [1, 3, 1, 2, 2, 2, 2, 3, 2, 2];
// twenty..ninety
const EN_TENS: [u32; 8] = [2, 2, 2, 2, 2, 3, 2, 2];

fn en_composed(n: u32) -> u32 {
    if n == 0 {
        return 2; // zero
    }
    let mut s = 0;
    let thousands = n / 1000;
    let hundreds = (n / 100) % 10;
    let rest = n % 100;
    if thousands > 0 {
        s += EN_ONES[thousands as usize] + 2; // "X thou-sand"
    }
    if hundreds > 0 {
        s += EN_ONES[hundreds as usize] + 2; // "X hun-dred"
    }
    if rest > 0 {
        s += if rest < 10 {
            EN_ONES[rest as usize]
        } else if rest < 20 {
            EN_TEENS[(rest - 10) as usize]
        } else {
            EN_TENS[(rest / 10 - 2) as usize] + EN_ONES[(rest % 10) as usize]
        };
    }
    s
}

/// Mandarin composed reading: one syllable per character of the standard
/// spelling, with the single-零 rule for internal zeros.
fn zh_composed(n: u32) -> u32 {
    if n == 0 {
        return 1; // 零
    }
    if (10..20).contains(&n) {
        // bare 10..19 read 十 / 十X without a leading 一
        return 1 + u32::from(n % 10 != 0);
    }
    let places = [
        (n / 1000, 1u32),      // 千
        ((n / 100) % 10, 1u32), // 百
        ((n / 10) % 10, 1u32),  // 十
        (n % 10, 0u32),
    ];
    let mut len = 0u32;
    let mut started = false;
    let mut pending_zero = false;
    for (digit, unit_len) in places {
        if digit == 0 {
            if started {
                pending_zero = true;
            }
            continue;
        }
        if pending_zero {
            len += 1; // one 零 regardless of how many zero places were skipped
            pending_zero = false;
        }
        len += 1 + unit_len;
        started = true;
    }
    len
}

// eins..neun ("ein" as a prefix also counts 1)
const DE_ONES: [u32; 10] = [0, 1, 1, 1, 1, 1, 1, 2, 1, 1];
// zehn..neunzehn
const DE_TEENS: [u32; 10] = [1, 1, 1, 2, 2, 2, 2, 2, 2, 2];
// zwanzig..neunzig
const DE_TENS: [u32; 8] = [2, 2, 2, 2, 2, 2, 2, 2];

fn de_composed(n: u32) -> u32 {
    if n == 0 {
        return 1; // null
    }
    let mut s = 0;
    let thousands = n / 1000;
    let hundreds = (n / 100) % 10;
    let rest = n % 100;
    if thousands > 0 {
        s += DE_ONES[thousands as usize] + 2; // "(ein)tausend"
    }
    if hundreds > 0 {
        s += DE_ONES[hundreds as usize] + 2; // "(ein)hundert"
    }
    if rest > 0 {
        s += if rest < 10 {
            DE_ONES[rest as usize]
        } else if rest < 20 {
            DE_TEENS[(rest - 10) as usize]
        } else {
            let ones = rest % 10;
            let tens = DE_TENS[(rest / 10 - 2) as usize];
            if ones > 0 {
                DE_ONES[ones as usize] + 1 + tens // "einundzwanzig"
            } else {
                tens
            }
        };
    }
    s
}

// uno..nueve
const ES_ONES: [u32; 10] = [0, 2, 1, 1, 2, 2, 1, 2, 2, 2];
// diez..quince
const ES_LOW_TEENS: [u32; 6] = [1, 2, 2, 2, 3, 2];
// dieciséis..diecinueve (phonetic diphthong counting)
const ES_HIGH_TEENS: [u32; 4] = [3, 4, 3, 4];
// veintiuno..veintinueve
const ES_VEINTI: [u32; 9] = [3, 3, 3, 4, 4, 3, 4, 3, 4];
// treinta..noventa
const ES_TENS: [u32; 7] = [2, 3, 3, 3, 3, 3, 3];
// doscientos..novecientos
const ES_HUNDREDS: [u32; 8] = [3, 3, 4, 3, 3, 4, 4, 4];

fn es_composed(n: u32) -> u32 {
    if n == 0 {
        return 2; // ce-ro
    }
    let mut s = 0;
    let thousands = n / 1000;
    let hundreds = (n / 100) % 10;
    let rest = n % 100;
    if thousands > 0 {
        // "mil" / "dos mil"
        s += if thousands == 1 {
            0
        } else {
            ES_ONES[thousands as usize]
        } + 1;
    }
    if hundreds > 0 {
        s += if hundreds == 1 {
            if rest == 0 {
                1 // cien
            } else {
                2 // cien-to
            }
        } else {
            ES_HUNDREDS[(hundreds - 2) as usize]
        };
    }
    if rest > 0 {
        s += if rest < 10 {
            ES_ONES[rest as usize]
        } else if rest < 16 {
            ES_LOW_TEENS[(rest - 10) as usize]
        } else if rest < 20 {
            ES_HIGH_TEENS[(rest - 16) as usize]
        } else if rest == 20 {
            2 // veinte
        } else if rest < 30 {
            ES_VEINTI[(rest - 21) as usize]
        } else {
            let ones = rest % 10;
            let tens = ES_TENS[(rest / 10 - 3) as usize];
            if ones > 0 {
                tens + 1 + ES_ONES[ones as usize] // "treinta y uno"
            } else {
                tens
            }
        };
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::LanguageCode::*;

    #[test]
    fn english_readings() {
        // zero, one, seven, ten, eleven, nineteen, twenty-one, one hundred,
        // one hundred one, four thousand two hundred forty-three
        for (tok, want) in [
            ("0", 2),
            ("1", 1),
            ("7", 2),
            ("10", 1),
            ("11", 3),
            ("19", 2),
            ("21", 3),
            ("100", 3),
            ("101", 4),
            ("4243", 9),
        ] {
            assert_eq!(integer_syllables(tok, En), want, "{tok}");
        }
    }

    #[test]
    fn mandarin_readings() {
        // 零, 七, 十, 十一, 二十, 二十一, 一百, 一百零一, 一百一十,
        // 一千零一十, 九千九百九十九
        for (tok, want) in [
            ("0", 1),
            ("7", 1),
            ("10", 1),
            ("11", 2),
            ("20", 2),
            ("21", 3),
            ("100", 2),
            ("101", 4),
            ("110", 4),
            ("1010", 5),
            ("9999", 7),
        ] {
            assert_eq!(integer_syllables(tok, Zh), want, "{tok}");
        }
    }

    #[test]
    fn german_readings() {
        // null, sieben, elf, einundzwanzig, einhundert,
        // viertausendzweihundertdreiundvierzig
        for (tok, want) in [
            ("0", 1),
            ("7", 2),
            ("11", 1),
            ("21", 4),
            ("100", 3),
            ("4243", 10),
        ] {
            assert_eq!(integer_syllables(tok, De), want, "{tok}");
        }
    }

    #[test]
    fn spanish_readings() {
        // cero, siete, dieciséis, veintiuno, treinta y uno, cien, ciento uno,
        // dos mil veintiséis
        for (tok, want) in [
            ("0", 2),
            ("7", 2),
            ("16", 3),
            ("21", 3),
            ("31", 5),
            ("100", 1),
            ("101", 4),
            ("2026", 5),
        ] {
            assert_eq!(integer_syllables(tok, Es), want, "{tok}");
        }
    }

    #[test]
    fn long_or_zero_padded_tokens_read_digit_by_digit() {
        // 12345 -> one two three four five
        assert_eq!(integer_syllables("12345", En), 5);
        // 007 -> zero zero seven
        assert_eq!(integer_syllables("007", En), 6);
        assert_eq!(integer_syllables("00", Zh), 2);
    }
}
