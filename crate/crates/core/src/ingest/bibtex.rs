use super::{RawRecord, SourceDb};
use crate::error::{Error, Location, Result};

/// Parse a BibTeX export. Values keep nested braces verbatim; only the outer
/// delimiters are stripped. Text between entries (including `%` lines) is ignored.
pub fn parse_bibtex(bytes: &[u8], dialect: SourceDb) -> Result<Vec<RawRecord>> {
    if dialect == SourceDb::Pubmed {
        return Err(Error::usage("PubMed files are MEDLINE text, not BibTeX"));
    }
    let text = String::from_utf8_lossy(bytes);
    let map = OffsetMap::new(bytes);
    match (Parser { src: &text, b: text.as_bytes(), pos: 0, dialect }.entries()) {
        Ok(mut records) => {
            for r in &mut records {
                r.byte_span = (map.original(r.byte_span.0), map.original(r.byte_span.1));
            }
            Ok(records)
        }
        Err(Error::Parse { location: Location::Byte(b), message }) => {
            Err(Error::Parse { location: Location::Byte(map.original(b)), message })
        }
        Err(e) => Err(e),
    }
}

/// Translates offsets in the lossily decoded text back to the input bytes.
/// Each invalid UTF-8 sequence became a 3-byte U+FFFD.
struct OffsetMap {
    /// `(decoded_start, original_start, original_len)` of each replaced sequence.
    replaced: Vec<(usize, usize, usize)>,
}

impl OffsetMap {
    fn new(bytes: &[u8]) -> Self {
        let mut replaced = Vec::new();
        let (mut decoded, mut original) = (0, 0);
        for chunk in bytes.utf8_chunks() {
            decoded += chunk.valid().len();
            original += chunk.valid().len();
            if !chunk.invalid().is_empty() {
                replaced.push((decoded, original, chunk.invalid().len()));
                decoded += '\u{FFFD}'.len_utf8();
                original += chunk.invalid().len();
            }
        }
        OffsetMap { replaced }
    }

    fn original(&self, offset: usize) -> usize {
        let i = self.replaced.partition_point(|&(d, _, _)| d <= offset);
        if i == 0 {
            return offset;
        }
        let (d, o, len) = self.replaced[i - 1];
        let inside = offset - d;
        if inside < '\u{FFFD}'.len_utf8() {
            o + inside.min(len - 1)
        } else {
            o + len + (inside - '\u{FFFD}'.len_utf8())
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    b: &'a [u8],
    pos: usize,
    dialect: SourceDb,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { location: Location::Byte(offset), message: message.into() })
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.b.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn entries(mut self) -> Result<Vec<RawRecord>> {
        let mut out = Vec::new();
        let mut line_start = true;
        while let Some(c) = self.peek() {
            match c {
                b'%' if line_start => {
                    while !matches!(self.peek(), None | Some(b'\n')) {
                        self.pos += 1;
                    }
                }
                b'@' => {
                    if let Some(record) = self.entry()? {
                        out.push(record);
                    }
                    line_start = false;
                    continue;
                }
                b'\n' => {
                    line_start = true;
                    self.pos += 1;
                    continue;
                }
                c if c.is_ascii_whitespace() => {}
                _ => line_start = false,
            }
            self.pos += 1;
        }
        Ok(out)
    }

    /// Parse at an `@`. Returns `None` when the `@` does not open an entry.
    fn entry(&mut self) -> Result<Option<RawRecord>> {
        let start = self.pos;
        self.pos += 1;
        self.skip_ws();
        let type_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let entry_type = self.src[type_start..self.pos].to_ascii_uppercase();
        self.skip_ws();
        let close = match self.peek() {
            Some(b'{') => b'}',
            Some(b'(') => b')',
            _ => return Ok(None),
        };
        if entry_type.is_empty() {
            return Ok(None);
        }
        if matches!(entry_type.as_str(), "COMMENT" | "PREAMBLE" | "STRING") {
            self.skip_balanced(start)?;
            return Ok(None);
        }
        self.pos += 1;

        let mut record = RawRecord::new(self.dialect, start);
        record.push("ENTRYTYPE", entry_type);
        let key_start = self.pos;
        while !matches!(self.peek(), None | Some(b',')) && self.peek() != Some(close) {
            self.pos += 1;
        }
        if self.peek().is_none() {
            return err(start, "unterminated entry");
        }
        record.push("ID", self.src[key_start..self.pos].trim());

        loop {
            while matches!(self.peek(), Some(c) if c.is_ascii_whitespace() || c == b',') {
                self.pos += 1;
            }
            match self.peek() {
                None => return err(start, "unterminated entry"),
                Some(c) if c == close => {
                    self.pos += 1;
                    break;
                }
                _ => {}
            }
            let name_start = self.pos;
            while matches!(self.peek(), Some(c) if !c.is_ascii_whitespace() && !b"{}()=,\"#".contains(&c)) {
                self.pos += 1;
            }
            if name_start == self.pos {
                return err(self.pos, "expected a field name");
            }
            let name = self.src[name_start..self.pos].to_string();
            self.skip_ws();
            if self.peek() != Some(b'=') {
                return err(self.pos, format!("expected `=` after field `{name}`"));
            }
            self.pos += 1;
            let value = self.value(close)?;
            record.push(&name, value);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(c) if c == close => {}
                None => return err(start, "unterminated entry"),
                Some(_) => return err(self.pos, format!("expected `,` or `{}` after field `{name}`", close as char)),
            }
        }
        record.byte_span = (start, self.pos);
        Ok(Some(record))
    }

    fn value(&mut self, close: u8) -> Result<String> {
        let mut out = String::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'{') => {
                    let open = self.pos;
                    let end = self.matching_brace(open)?;
                    out.push_str(&self.src[open + 1..end]);
                    self.pos = end + 1;
                }
                Some(b'"') => {
                    let open = self.pos;
                    self.pos += 1;
                    let mut depth = 0usize;
                    loop {
                        match self.peek() {
                            None => return err(open, "unterminated quoted value"),
                            Some(b'\\') => self.pos += 2,
                            Some(b'{') => {
                                depth += 1;
                                self.pos += 1;
                            }
                            Some(b'}') => {
                                if depth == 0 {
                                    return err(self.pos, "unbalanced braces in quoted value");
                                }
                                depth -= 1;
                                self.pos += 1;
                            }
                            Some(b'"') if depth == 0 => break,
                            Some(_) => self.pos += 1,
                        }
                    }
                    let end = self.pos.min(self.b.len());
                    out.push_str(&self.src[open + 1..end]);
                    self.pos += 1;
                }
                Some(c) if c != b',' && c != close && c != b'#' => {
                    let s = self.pos;
                    while matches!(self.peek(), Some(c) if !c.is_ascii_whitespace() && !b",#{}()\"".contains(&c)) {
                        self.pos += 1;
                    }
                    if s == self.pos {
                        return err(s, "expected a value");
                    }
                    out.push_str(&self.src[s..self.pos]);
                }
                None => return err(self.pos, "unexpected end of input in value"),
                _ => return err(self.pos, "expected a value"),
            }
            self.skip_ws();
            if self.peek() == Some(b'#') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    /// Index of the `}` closing the `{` at `open`.
    fn matching_brace(&self, open: usize) -> Result<usize> {
        let mut depth = 0usize;
        let mut i = open;
        while i < self.b.len() {
            match self.b[i] {
                b'\\' => {
                    i += 2;
                    continue;
                }
                b'{' => depth += 1,
                b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(i);
                    }
                }
                _ => {}
            }
            i += 1;
        }
        err(open, "unbalanced braces")
    }

    fn skip_balanced(&mut self, start: usize) -> Result<()> {
        let open = self.b[self.pos];
        let close = if open == b'{' { b'}' } else { b')' };
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            if c == open {
                depth += 1;
            } else if c == close {
                depth -= 1;
                if depth == 0 {
                    self.pos += 1;
                    return Ok(());
                }
            }
            self.pos += 1;
        }
        err(start, "unbalanced braces")
    }
}

/// Render records back to BibTeX; every value is brace-delimited.
pub fn emit_bibtex(records: &[RawRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let entry_type = r.first("ENTRYTYPE").unwrap_or("MISC");
        let key = r.first("ID").unwrap_or("");
        out.push_str(&format!("@{entry_type}{{{key},\n"));
        for (tag, values) in &r.fields {
            if tag == "ENTRYTYPE" || tag == "ID" {
                continue;
            }
            for v in values {
                out.push_str(&format!("  {} = {{{v}}},\n", tag.to_lowercase()));
            }
        }
        out.push_str("}\n\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> Result<Vec<RawRecord>> {
        parse_bibtex(s.as_bytes(), SourceDb::Scopus)
    }

    #[test]
    fn nested_braces_kept() {
        let r = parse("@ARTICLE{x, title={A {B} C}, year={2016}}").unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].first("TITLE"), Some("A {B} C"));
        assert_eq!(r[0].first("YEAR"), Some("2016"));
        assert_eq!(r[0].first("ENTRYTYPE"), Some("ARTICLE"));
        assert_eq!(r[0].first("ID"), Some("x"));
    }

    #[test]
    fn empty_and_comment_only() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("% just a comment @ARTICLE{\n\n").unwrap().is_empty());
        assert!(parse("@comment{ ignore {me} }").unwrap().is_empty());
    }

    #[test]
    fn quoted_bare_and_concatenated_values() {
        let r = parse("@misc(k,\n  Title = \"Quoted {X}\",\n  year = 2020,\n  note = {a} # \"b\")").unwrap();
        assert_eq!(r[0].first("TITLE"), Some("Quoted {X}"));
        assert_eq!(r[0].first("YEAR"), Some("2020"));
        assert_eq!(r[0].first("NOTE"), Some("ab"));
    }

    #[test]
    fn unknown_fields_kept_and_repeated_tags_accumulate() {
        let r = parse("@article{k, foo-bar = {1}, foo-bar = {2}, Unique-ID = {WOS:1}}").unwrap();
        assert_eq!(r[0].get("FOO-BAR").unwrap(), &["1".to_string(), "2".to_string()]);
        assert_eq!(r[0].first("UNIQUE-ID"), Some("WOS:1"));
    }

    #[test]
    fn offsets_refer_to_input_bytes_after_invalid_utf8() {
        let mut src = b"@article{k, title={A}}\n".to_vec();
        src.splice(1..1, [0xff, 0xfe]);
        src.extend_from_slice(b"@article{j, \xff\xfe\xfd note }");
        match parse_bibtex(&src, SourceDb::Scopus) {
            Err(Error::Parse { location: Location::Byte(b), .. }) => assert!(b <= src.len(), "{b} > {}", src.len()),
            other => panic!("{other:?}"),
        }
        let ok = b"\xff\xfe@article{k, title={A\xff}}";
        let r = parse_bibtex(ok, SourceDb::Scopus).unwrap();
        assert_eq!(r[0].byte_span, (2, ok.len()));
    }

    #[test]
    fn unbalanced_braces_are_positioned() {
        let src = "@article{a, title={ok}}\n@article{b, title={broken}";
        match parse(src) {
            Err(Error::Parse { location: Location::Byte(b), .. }) => assert!(b >= 24, "offset {b}"),
            other => panic!("expected positioned error, got {other:?}"),
        }
        let src = "@article{b, title={never {closed}}";
        assert!(matches!(parse(src), Err(Error::Parse { location: Location::Byte(_), .. })));
    }

    #[test]
    fn entry_order_and_spans() {
        let src = "@a{1, t={x}}\n@b{2, t={y}}\n";
        let r = parse(src).unwrap();
        assert_eq!(r.iter().map(|x| x.first("ID").unwrap()).collect::<Vec<_>>(), vec!["1", "2"]);
        assert_eq!(&src[r[1].byte_span.0..r[1].byte_span.1], "@b{2, t={y}}");
    }

    fn balanced_value() -> impl Strategy<Value = String> {
        let leaf = "[a-zA-Z0-9 .;:'-]{0,12}".prop_map(String::from);
        leaf.prop_recursive(3, 16, 3, |inner| {
            prop::collection::vec(inner, 1..3).prop_map(|parts| format!("{{{}}}", parts.join(" ")))
        })
    }

    fn record() -> impl Strategy<Value = RawRecord> {
        ("[A-Z]{1,10}", "[a-z0-9:_]{0,10}", prop::collection::vec(("[a-z][a-z_-]{0,8}", balanced_value()), 0..6))
            .prop_map(|(ty, key, fields)| {
                let mut r = RawRecord::new(SourceDb::Wos, 0);
                r.push("ENTRYTYPE", ty);
                r.push("ID", key);
                for (name, value) in fields {
                    let name = name.to_uppercase();
                    if name == "ID" || name == "ENTRYTYPE" {
                        continue;
                    }
                    r.push(&name, value.trim().to_string());
                }
                r
            })
    }

    proptest! {
        #[test]
        fn emit_then_parse_round_trips(records in prop::collection::vec(record(), 0..4)) {
            let text = emit_bibtex(&records);
            let back = parse_bibtex(text.as_bytes(), SourceDb::Wos).unwrap();
            prop_assert_eq!(back.len(), records.len());
            for (a, b) in back.iter().zip(&records) {
                prop_assert_eq!(&a.fields, &b.fields);
            }
        }

        #[test]
        fn never_panics(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
            let _ = parse_bibtex(&bytes, SourceDb::Scopus);
        }
    }
}
