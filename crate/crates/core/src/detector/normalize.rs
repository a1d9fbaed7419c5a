//! Text normalization shared by matcher compilation and content scanning.
//! Matching happens in normalized space on both sides, which is what makes
//! the soundness property ("every matched span appears in both content and
//! profile") checkable by plain substring search.

/// Casefold, replace punctuation with spaces, and collapse whitespace.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut last_space = true;
    for c in text.chars() {
        let c = if c.is_alphanumeric() { Some(c) } else { None };
        match c {
            Some(c) => {
                for l in c.to_lowercase() {
                    out.push(l);
                }
                last_space = false;
            }
            None => {
                if !last_space {
                    out.push(' ');
                    last_space = true;
                }
            }
        }
    }
    while out.ends_with(' ') {
        out.pop();
    }
    out
}

/// All ASCII digits of the text, concatenated. `"555-0142"` and
/// `"(555) 01 42"` normalize to the same stream, so grouping differences
/// never hide a numeric match.
pub fn digit_stream(text: &str) -> String {
    text.chars().filter(|c| c.is_ascii_digit()).collect()
}
