//! Text normalization helpers shared by the parsers and matchers.
//!
//! Matching across artifacts is case-insensitive and whitespace-normalized,
//! so every comparison funnels through [`match_key`].

/// Collapses runs of whitespace to single spaces and trims the ends.
pub fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Normalized, lowercased form used as a comparison key.
pub fn match_key(s: &str) -> String {
    normalize_ws(s).to_lowercase()
}

/// Replaces typographic double quotes with straight quotes.
///
/// Story files copied out of documents frequently carry “smart” quotes;
/// argument extraction only understands `"`.
pub fn normalize_quotes(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '\u{201C}' | '\u{201D}' | '\u{201E}' | '\u{201F}' => '"',
            other => other,
        })
        .collect()
}

/// Levenshtein distance over characters.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let cost = usize::from(ca != cb);
            cur[j + 1] = (prev[j + 1] + 1).min(cur[j] + 1).min(prev[j] + cost);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// True when the two phrases contain the same set of words, ignoring case
/// and order ("Direct Flights Only" vs "Only direct flights").
pub fn token_set_eq(a: &str, b: &str) -> bool {
    use std::collections::BTreeSet;
    let set = |s: &str| -> BTreeSet<String> {
        s.split_whitespace().map(|w| w.to_lowercase()).collect()
    };
    let sa = set(a);
    !sa.is_empty() && sa == set(b)
}

/// Near-name heuristic used for "different name" classifications: small
/// edit distance or equal word sets.
pub fn is_near_name(a: &str, b: &str) -> bool {
    let (ka, kb) = (match_key(a), match_key(b));
    if ka == kb {
        return false; // identical names are matches, not near-misses
    }
    edit_distance(&ka, &kb) <= 2 || token_set_eq(&ka, &kb)
}

/// Decodes `%XX` escapes. Invalid or truncated escapes are kept verbatim and
/// reported through the returned flag so callers can warn.
pub fn percent_decode(s: &str) -> (String, bool) {
    let bytes = s.as_bytes();
    let mut out: Vec<u8> = Vec::with_capacity(bytes.len());
    let mut had_invalid = false;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            if let Some(hex) = s.get(i + 1..i + 3) {
                if let Ok(v) = u8::from_str_radix(hex, 16) {
                    out.push(v);
                    i += 3;
                    continue;
                }
            }
            had_invalid = true;
        }
        out.push(bytes[i]);
        i += 1;
    }
    match String::from_utf8(out) {
        Ok(decoded) => (decoded, had_invalid),
        Err(e) => (String::from_utf8_lossy(e.as_bytes()).into_owned(), true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_collapses() {
        assert_eq!(normalize_ws("  a\t b \n c  "), "a b c");
    }

    #[test]
    fn smart_quotes_become_straight() {
        assert_eq!(normalize_quotes("I choose \u{201C}Round trip\u{201D}"), "I choose \"Round trip\"");
    }

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance("", "abc"), 3);
        assert_eq!(edit_distance("kitten", "sitting"), 3);
        assert_eq!(edit_distance("Timeframe", "Time frame"), 1);
    }

    #[test]
    fn near_names() {
        assert!(is_near_name("Direct Flights Only", "Only direct flights"));
        assert!(is_near_name("Select Flight", "Select Flights"));
        assert!(!is_near_name("Select Flight", "select flight")); // same key
        assert!(!is_near_name("Companies", "Number of Passengers"));
    }

    #[test]
    fn percent_decoding() {
        assert_eq!(percent_decode("Book%20Flights"), ("Book Flights".into(), false));
        assert_eq!(percent_decode("100%25"), ("100%".into(), false));
        let (s, warned) = percent_decode("50%ZZoff%2");
        assert_eq!(s, "50%ZZoff%2");
        assert!(warned);
    }
}
