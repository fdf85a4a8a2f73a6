use super::{RawRecord, SourceDb};
use crate::error::{Error, Location, Result};

/// Parse MEDLINE tagged text (`TAG - value`, 6-space continuation lines,
/// blank lines between records).
pub fn parse_pubmed(bytes: &[u8]) -> Result<Vec<RawRecord>> {
    let text = String::from_utf8_lossy(bytes);
    let mut out = Vec::new();
    let mut current: Option<(RawRecord, usize)> = None;
    let mut last_tag: Option<String> = None;
    let mut offset = 0usize;

    for (idx, raw_line) in text.split('\n').enumerate() {
        let lineno = idx + 1;
        let line_start = offset;
        offset += raw_line.len() + 1;
        let line = raw_line.trim_end();

        if line.is_empty() {
            if let Some((record, first_line)) = current.take() {
                out.push(finish(record, first_line, line_start)?);
            }
            last_tag = None;
            continue;
        }

        if line.starts_with("      ") {
            let (Some((record, _)), Some(tag)) = (current.as_mut(), last_tag.as_ref()) else {
                return Err(Error::Parse {
                    location: Location::Line(lineno),
                    message: "continuation line without a preceding tag".into(),
                });
            };
            let values = record.fields.get_mut(tag).expect("last tag is present");
            let last = values.last_mut().expect("tag has a value");
            let more = line.trim();
            if !last.is_empty() {
                last.push(' ');
            }
            last.push_str(more);
            continue;
        }

        let Some((tag, value)) = split_tag_line(line) else {
            return Err(Error::Parse {
                location: Location::Line(lineno),
                message: format!("expected `TAG - value` or a continuation line, found `{}`", truncate(line, 40)),
            });
        };
        let (record, _) = current.get_or_insert_with(|| (RawRecord::new(SourceDb::Pubmed, line_start), lineno));
        record.push(&tag, value);
        last_tag = Some(tag);
    }
    if let Some((record, first_line)) = current.take() {
        out.push(finish(record, first_line, text.len())?);
    }
    Ok(out)
}

fn finish(mut record: RawRecord, first_line: usize, end: usize) -> Result<RawRecord> {
    record.byte_span.1 = end;
    if record.get("PMID").is_none() && record.get("TI").is_none() {
        return Err(Error::Parse {
            location: Location::Line(first_line),
            message: "record has neither PMID nor TI".into(),
        });
    }
    Ok(record)
}

fn split_tag_line(line: &str) -> Option<(String, String)> {
    let dash = line.find('-')?;
    if dash == 0 || dash > 7 {
        return None;
    }
    let tag = line[..dash].trim_end();
    if tag.is_empty() || tag.len() > 4 || !tag.bytes().all(|b| b.is_ascii_alphanumeric()) {
        return None;
    }
    let rest = &line[dash + 1..];
    let value = rest.strip_prefix(' ').unwrap_or(rest);
    Some((tag.to_ascii_uppercase(), value.trim().to_string()))
}

fn truncate(s: &str, n: usize) -> String {
    s.chars().take(n).collect()
}

/// Render records as MEDLINE text, one line per value.
pub fn emit_medline(records: &[RawRecord]) -> String {
    let mut out = String::new();
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for (tag, values) in &r.fields {
            for v in values {
                out.push_str(&format!("{tag:<4}- {v}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn continuation_lines_join_with_a_space() {
        let r = parse_pubmed(b"PMID- 1\nTI  - A title\n      more\n").unwrap();
        assert_eq!(r[0].first("TI"), Some("A title more"));
    }

    #[test]
    fn records_split_on_blank_lines_and_tags_accumulate() {
        let src = "PMID- 1\nFAU - Chen, Tzu-Yu\nFAU - Lin, Yu-Ling\n\n\nPMID- 2\nTI  - Second\n";
        let r = parse_pubmed(src.as_bytes()).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].get("FAU").unwrap().len(), 2);
        assert_eq!(r[0].get("FAU").unwrap()[1], "Lin, Yu-Ling");
        assert_eq!(r[1].first("TI"), Some("Second"));
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let src = "PMID- 1\nTI  - ok\nthis is not a tag line\n";
        match parse_pubmed(src.as_bytes()) {
            Err(Error::Parse { location: Location::Line(3), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn crlf_and_empty_file() {
        assert!(parse_pubmed(b"").unwrap().is_empty());
        let r = parse_pubmed(b"PMID- 9\r\nTI  - T\r\n").unwrap();
        assert_eq!(r[0].first("PMID"), Some("9"));
    }

    proptest! {
        #[test]
        fn emit_then_parse_round_trips(
            records in prop::collection::vec(
                prop::collection::vec(("[A-Z]{2,4}", "[A-Za-z0-9][A-Za-z0-9 ,.;()-]{0,30}[A-Za-z0-9.]"), 1..6),
                0..4,
            )
        ) {
            let records: Vec<RawRecord> = records
                .into_iter()
                .map(|fields| {
                    let mut r = RawRecord::new(SourceDb::Pubmed, 0);
                    r.push("PMID", "1");
                    for (tag, value) in fields {
                        r.push(&tag, value);
                    }
                    r
                })
                .collect();
            let text = emit_medline(&records);
            let back = parse_pubmed(text.as_bytes()).unwrap();
            prop_assert_eq!(back.len(), records.len());
            for (a, b) in back.iter().zip(&records) {
                prop_assert_eq!(&a.fields, &b.fields);
            }
        }

        #[test]
        fn never_panics(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
            let _ = parse_pubmed(&bytes);
        }
    }
}
