//! Fixed character widths, in ems, so text layout does not depend on installed fonts.

fn char_em(c: char) -> f64 {
    match c {
        'i' | 'j' | 'l' | '.' | ',' | ';' | ':' | '\'' | '|' | '!' | 'I' => 0.3,
        'f' | 't' | 'r' | '(' | ')' | '[' | ']' | '-' | ' ' => 0.4,
        'm' | 'w' | 'M' | 'W' | '@' => 0.85,
        'A'..='Z' => 0.68,
        '0'..='9' => 0.56,
        c if c.is_ascii() => 0.55,
        _ => 0.65,
    }
}

pub fn text_width(s: &str, size: f64) -> f64 {
    s.chars().map(char_em).sum::<f64>() * size
}

/// Cuts `s` so that it fits in `max_width`, marking the cut with `…`.
pub fn fit_text(s: &str, size: f64, max_width: f64) -> String {
    if text_width(s, size) <= max_width {
        return s.to_string();
    }
    let mut out = String::new();
    let mut w = char_em('…') * size;
    for c in s.chars() {
        w += char_em(c) * size;
        if w > max_width {
            break;
        }
        out.push(c);
    }
    out.push('…');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(text_width("", 10.0), 0.0);
        assert!(text_width("WWW", 10.0) > text_width("iii", 10.0));
        assert!(text_width(&fit_text("a long label here", 10.0, 40.0), 10.0) <= 40.0 + 1e-9);
    }
}
