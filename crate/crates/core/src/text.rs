//! Tokenization shared by the sentiment scorer and the feature hasher.

/// Splits on anything that is not alphanumeric or an apostrophe.
///
/// Tokens keep their original case; callers lowercase as needed.
pub fn tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
}

/// True when the token has at least one cased letter and all of them are upper case.
pub fn is_all_caps(s: &str) -> bool {
    let mut any = false;
    for c in s.chars().filter(|c| c.is_alphabetic()) {
        if c.is_lowercase() {
            return false;
        }
        if c.is_uppercase() {
            any = true;
        }
    }
    any
}

/// 64-bit FNV-1a. Stable across platforms and releases.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_punctuation_and_keeps_apostrophes() {
        let t: Vec<_> = tokens("Not good!! don't #GunsDown, ok?").collect();
        assert_eq!(t, vec!["Not", "good", "don't", "GunsDown", "ok"]);
    }

    #[test]
    fn caps_detection() {
        assert!(is_all_caps("GOOD"));
        assert!(is_all_caps("A1"));
        assert!(!is_all_caps("Good"));
        assert!(!is_all_caps("123"));
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
    }
}
