//! Extractors: from parsed messages to the canonical words the language
//! atoms check.
//!
//! Every extractor yields a word, or reports why there is none: the source
//! header or message being absent makes an atom inapplicable, while a source
//! that is present but impossible to canonicalize is malformed.

use crate::composer::{is_tchar, ExtractOutcome};
use crate::grammar::{word_from_bytes, Term, Word};

use super::parse::HttpMessage;
use super::{MessageInput, ValidationInput};

/// Every extractor id the HTTP profile engine serves.
pub const EXTRACTOR_IDS: &[&str] = &[
    "req-head",
    "resp-head",
    "req-host-value",
    "req-version",
    "resp-version",
    "req-te-value",
    "req-tecoding-value",
    "resp-tecoding-value",
    "req-cl-value",
    "resp-cl-value",
    "req-cl-len80",
    "resp-cl-len80",
    "req-chunked8",
    "resp-chunked8",
    "req-range-pair",
    "resp-status",
    "resp-warn-date-pair",
    "resp-lm-date-pair",
    "pair-upgrade",
    "req-version-cmp",
    "resp-version-cmp",
];

#[derive(Clone, Copy)]
enum Side {
    Req,
    Resp,
}

fn side_input<'a>(input: &'a ValidationInput, side: Side) -> Option<&'a MessageInput> {
    match side {
        Side::Req => input.request.as_ref(),
        Side::Resp => input.response.as_ref(),
    }
}

fn parsed<'a>(input: &'a ValidationInput, side: Side) -> Option<&'a HttpMessage> {
    match side_input(input, side) {
        Some(MessageInput::Parsed(m)) => Some(m),
        _ => None,
    }
}

/// Run the extractor with the given id. Unknown ids are malformed outcomes
/// rather than panics, so a hand-edited profile degrades into visible atom
/// failures.
pub fn extract(id: &str, input: &ValidationInput) -> ExtractOutcome {
    match id {
        "req-head" => head(input, Side::Req),
        "resp-head" => head(input, Side::Resp),
        "req-host-value" => host_value(input),
        "req-version" => version_digits(input, Side::Req),
        "resp-version" => version_digits(input, Side::Resp),
        "req-te-value" => joined_header(input, Side::Req, "TE"),
        "req-tecoding-value" => joined_header(input, Side::Req, "Transfer-Encoding"),
        "resp-tecoding-value" => joined_header(input, Side::Resp, "Transfer-Encoding"),
        "req-cl-value" => first_header_value(input, Side::Req, "Content-Length"),
        "resp-cl-value" => first_header_value(input, Side::Resp, "Content-Length"),
        "req-cl-len80" => content_length_word(input, Side::Req),
        "resp-cl-len80" => content_length_word(input, Side::Resp),
        "req-chunked8" => chunked_word(input, Side::Req),
        "resp-chunked8" => chunked_word(input, Side::Resp),
        "req-range-pair" => range_pair(input),
        "resp-status" => status_code(input),
        "resp-warn-date-pair" => warn_date_pair(input),
        "resp-lm-date-pair" => lm_date_pair(input),
        "pair-upgrade" => upgrade_pair(input),
        "req-version-cmp" => version_cmp(input, Side::Req),
        "resp-version-cmp" => version_cmp(input, Side::Resp),
        other => ExtractOutcome::Malformed(format!("unknown extractor {:?}", other)),
    }
}

/// The raw head bytes; a message that failed strict parsing is malformed
/// here and inapplicable everywhere else.
fn head(input: &ValidationInput, side: Side) -> ExtractOutcome {
    match side_input(input, side) {
        None => ExtractOutcome::NotApplicable,
        Some(MessageInput::Unparsed(e)) => ExtractOutcome::Malformed(e.to_string()),
        Some(MessageInput::Parsed(m)) => ExtractOutcome::Ok(word_from_bytes(&m.head_bytes())),
    }
}

fn host_value(input: &ValidationInput) -> ExtractOutcome {
    let Some(m) = parsed(input, Side::Req) else { return ExtractOutcome::NotApplicable };
    let hosts: Vec<_> = m.headers_named("Host").collect();
    match hosts.len() {
        0 => ExtractOutcome::NotApplicable,
        1 => ExtractOutcome::Ok(word_from_bytes(&hosts[0].value)),
        _ => ExtractOutcome::Malformed("more than one Host header".into()),
    }
}

fn version_digits(input: &ValidationInput, side: Side) -> ExtractOutcome {
    let Some(m) = parsed(input, side) else { return ExtractOutcome::NotApplicable };
    let (maj, min) = m.start.version();
    ExtractOutcome::Ok(word_from_bytes(&[b'0' + maj, b'0' + min]))
}

/// All values of the named header joined with commas; absent when none.
fn joined_header(input: &ValidationInput, side: Side, name: &str) -> ExtractOutcome {
    let Some(m) = parsed(input, side) else { return ExtractOutcome::NotApplicable };
    let values: Vec<&[u8]> = m.headers_named(name).map(|h| h.value.as_slice()).collect();
    if values.is_empty() {
        return ExtractOutcome::NotApplicable;
    }
    ExtractOutcome::Ok(word_from_bytes(&values.join(&b","[..])))
}

fn first_header_value(input: &ValidationInput, side: Side, name: &str) -> ExtractOutcome {
    let Some(m) = parsed(input, side) else { return ExtractOutcome::NotApplicable };
    match m.header(name) {
        None => ExtractOutcome::NotApplicable,
        Some(h) => ExtractOutcome::Ok(word_from_bytes(&h.value)),
    }
}

/// Content-Length as a width-80 digit block, least significant digit first,
/// followed by one marker symbol per body byte.
fn content_length_word(input: &ValidationInput, side: Side) -> ExtractOutcome {
    let Some(m) = parsed(input, side) else { return ExtractOutcome::NotApplicable };
    let headers: Vec<_> = m.headers_named("Content-Length").collect();
    if headers.is_empty() {
        return ExtractOutcome::NotApplicable;
    }
    if headers.len() > 1 {
        return ExtractOutcome::Malformed("more than one Content-Length header".into());
    }
    let v = &headers[0].value;
    if v.is_empty() || !v.iter().all(u8::is_ascii_digit) {
        return ExtractOutcome::Malformed("Content-Length is not a digit string".into());
    }
    let Some(block) = reversed_padded(v, 80) else {
        return ExtractOutcome::Malformed("Content-Length is wider than eighty digits".into());
    };
    let mut w = word_from_bytes(&block);
    w.extend(std::iter::repeat(Term::DOT).take(m.body.len()));
    ExtractOutcome::Ok(w)
}

/// Digits reversed then right-padded with zeros to the width; None when the
/// input is empty or too wide.
fn reversed_padded(digits: &[u8], width: usize) -> Option<Vec<u8>> {
    if digits.is_empty() || digits.len() > width {
        return None;
    }
    let mut out: Vec<u8> = digits.iter().rev().copied().collect();
    out.resize(width, b'0');
    Some(out)
}

/// Codings listed in Transfer-Encoding, trimmed and lowercased.
fn te_codings(m: &HttpMessage) -> Vec<Vec<u8>> {
    let values: Vec<&[u8]> = m.headers_named("Transfer-Encoding").map(|h| h.value.as_slice()).collect();
    if values.is_empty() {
        return Vec::new();
    }
    values
        .join(&b","[..])
        .split(|b| *b == b',')
        .map(|part| {
            let trimmed: Vec<u8> = part
                .iter()
                .copied()
                .skip_while(|b| *b == b' ' || *b == b'\t')
                .collect();
            let mut t: Vec<u8> =
                trimmed.iter().rev().copied().skip_while(|b| *b == b' ' || *b == b'\t').collect();
            t.reverse();
            t.make_ascii_lowercase();
            t
        })
        .collect()
}

/// Canonical word for a chunked body: per chunk, the size in hex reversed
/// and zero-padded to eight digits, one marker per data byte, then the
/// separator; the final zero-size chunk is included. Applicable only when
/// the last transfer coding is chunked.
fn chunked_word(input: &ValidationInput, side: Side) -> ExtractOutcome {
    let Some(m) = parsed(input, side) else { return ExtractOutcome::NotApplicable };
    let codings = te_codings(m);
    if codings.last().map(Vec::as_slice) != Some(b"chunked") {
        return ExtractOutcome::NotApplicable;
    }
    match chunk_canonical(&m.body) {
        Ok(w) => ExtractOutcome::Ok(w),
        Err(e) => ExtractOutcome::Malformed(e),
    }
}

fn find_crlf(bytes: &[u8], from: usize) -> Option<usize> {
    (from..bytes.len().saturating_sub(1)).find(|&i| bytes[i] == b'\r' && bytes[i + 1] == b'\n')
}

/// Walk a chunked body. Each chunk is a hex size line, then data delimited
/// by the next CRLF; the declared sizes are deliberately not trusted for
/// walking, so a size/data mismatch surfaces as a language failure instead
/// of a walk failure. The body must end with the zero chunk and its blank
/// line, nothing after.
fn chunk_canonical(body: &[u8]) -> Result<Word, String> {
    let mut pos = 0;
    let mut word = Word::new();
    loop {
        let Some(line_end) = find_crlf(body, pos) else {
            return Err(format!("chunk size line at body offset {} never ends", pos));
        };
        let line = &body[pos..line_end];
        if line.is_empty() {
            return Err(format!("empty chunk size line at body offset {}", pos));
        }
        let mut hex = Vec::with_capacity(line.len());
        for (k, b) in line.iter().enumerate() {
            let lb = b.to_ascii_lowercase();
            if !lb.is_ascii_hexdigit() {
                return Err(format!(
                    "invalid chunk size character at body offset {}",
                    pos + k
                ));
            }
            hex.push(lb);
        }
        let Some(block) = reversed_padded(&hex, 8) else {
            return Err(format!(
                "chunk size at body offset {} is wider than eight hex digits",
                pos
            ));
        };
        let is_last = hex.iter().all(|b| *b == b'0');
        pos = line_end + 2;
        if is_last {
            if body.len() < pos + 2 || &body[pos..pos + 2] != b"\r\n" {
                return Err("missing blank line after the last chunk".into());
            }
            if pos + 2 != body.len() {
                return Err("bytes after the end of the chunked body".into());
            }
            word.extend(word_from_bytes(&block));
            word.push(Term::SHARP);
            return Ok(word);
        }
        let Some(data_end) = find_crlf(body, pos) else {
            return Err(format!("chunk data at body offset {} never ends", pos));
        };
        word.extend(word_from_bytes(&block));
        word.extend(std::iter::repeat(Term::DOT).take(data_end - pos));
        word.push(Term::SHARP);
        pos = data_end + 2;
    }
}

/// Start and end of a two-bound byte range, each left-padded to ten digits.
/// Other range forms are legal but not this constraint's business.
fn range_pair(input: &ValidationInput) -> ExtractOutcome {
    let Some(m) = parsed(input, Side::Req) else { return ExtractOutcome::NotApplicable };
    let ranges: Vec<_> = m.headers_named("Range").collect();
    let [h] = ranges.as_slice() else {
        return match ranges.len() {
            0 => ExtractOutcome::NotApplicable,
            _ => ExtractOutcome::Malformed("more than one Range header".into()),
        };
    };
    let Some(rest) = h.value.strip_prefix(b"bytes=") else {
        return ExtractOutcome::NotApplicable;
    };
    let Some(dash) = rest.iter().position(|b| *b == b'-') else {
        return ExtractOutcome::NotApplicable;
    };
    let (start, end) = (&rest[..dash], &rest[dash + 1..]);
    let all_digits = |s: &[u8]| !s.is_empty() && s.iter().all(u8::is_ascii_digit);
    if !all_digits(start) || !all_digits(end) {
        return ExtractOutcome::NotApplicable;
    }
    let Some(s) = left_padded(start, 10) else {
        return ExtractOutcome::Malformed("range start is wider than ten digits".into());
    };
    let Some(e) = left_padded(end, 10) else {
        return ExtractOutcome::Malformed("range end is wider than ten digits".into());
    };
    let mut w = word_from_bytes(&s);
    w.extend(word_from_bytes(&e));
    ExtractOutcome::Ok(w)
}

fn left_padded(digits: &[u8], width: usize) -> Option<Vec<u8>> {
    if digits.len() > width {
        return None;
    }
    let mut out = vec![b'0'; width - digits.len()];
    out.extend_from_slice(digits);
    Some(out)
}

fn status_code(input: &ValidationInput) -> ExtractOutcome {
    let Some(m) = parsed(input, Side::Resp) else { return ExtractOutcome::NotApplicable };
    match &m.start {
        super::parse::StartLine::Status { code, .. } => {
            ExtractOutcome::Ok(word_from_bytes(format!("{:03}", code).as_bytes()))
        }
        _ => ExtractOutcome::NotApplicable,
    }
}

const DAY_NAMES: [&[u8]; 7] = [b"Mon", b"Tue", b"Wed", b"Thu", b"Fri", b"Sat", b"Sun"];
const MONTHS: [&[u8]; 12] = [
    b"Jan", b"Feb", b"Mar", b"Apr", b"May", b"Jun", b"Jul", b"Aug", b"Sep", b"Oct", b"Nov",
    b"Dec",
];

/// Canonicalize a fixed-form date ("Sun, 06 Nov 1994 08:49:37 GMT") to its
/// fourteen digits "YYYYMMDDhhmmss". Syntax only; no calendar checks.
pub(super) fn canon_http_date(v: &[u8]) -> Option<Vec<u8>> {
    if v.len() != 29 {
        return None;
    }
    if !DAY_NAMES.contains(&&v[0..3]) || &v[3..5] != b", " {
        return None;
    }
    let month = MONTHS.iter().position(|m| *m == &v[8..11])? + 1;
    let two_digits = |s: &[u8]| s.iter().all(u8::is_ascii_digit);
    if !two_digits(&v[5..7])
        || v[7] != b' '
        || v[11] != b' '
        || !two_digits(&v[12..14])
        || !two_digits(&v[14..16])
        || v[16] != b' '
        || !two_digits(&v[17..19])
        || v[19] != b':'
        || !two_digits(&v[20..22])
        || v[22] != b':'
        || !two_digits(&v[23..25])
        || &v[25..29] != b" GMT"
    {
        return None;
    }
    let mut out = Vec::with_capacity(14);
    out.extend_from_slice(&v[12..16]);
    out.push(b'0' + (month / 10) as u8);
    out.push(b'0' + (month % 10) as u8);
    out.extend_from_slice(&v[5..7]);
    out.extend_from_slice(&v[17..19]);
    out.extend_from_slice(&v[20..22]);
    out.extend_from_slice(&v[23..25]);
    Some(out)
}

/// The warn-date quoted at the end of a Warning header, paired with the
/// Date header value, both raw. Applicable only when the Warning value ends
/// in a quoted valid date and a Date header is present.
fn warn_date_pair(input: &ValidationInput) -> ExtractOutcome {
    let Some(m) = parsed(input, Side::Resp) else { return ExtractOutcome::NotApplicable };
    let Some(w) = m.header("Warning") else { return ExtractOutcome::NotApplicable };
    let v = &w.value;
    let Some(warn) = trailing_quoted(v).filter(|q| canon_http_date(q).is_some()) else {
        return ExtractOutcome::NotApplicable;
    };
    let Some(d) = m.header("Date") else { return ExtractOutcome::NotApplicable };
    if canon_http_date(&d.value).is_none() {
        return ExtractOutcome::Malformed("Date header is not a valid fixed-form date".into());
    }
    let mut word = word_from_bytes(warn);
    word.extend(word_from_bytes(&d.value));
    ExtractOutcome::Ok(word)
}

/// Content of a quoted string at the very end of the value, if any.
fn trailing_quoted(v: &[u8]) -> Option<&[u8]> {
    if v.len() < 2 || *v.last()? != b'"' {
        return None;
    }
    let open = v[..v.len() - 1].iter().rposition(|b| *b == b'"')?;
    Some(&v[open + 1..v.len() - 1])
}

/// Last-Modified and Date as canonical digit words, concatenated.
fn lm_date_pair(input: &ValidationInput) -> ExtractOutcome {
    let Some(m) = parsed(input, Side::Resp) else { return ExtractOutcome::NotApplicable };
    let (Some(lm), Some(d)) = (m.header("Last-Modified"), m.header("Date")) else {
        return ExtractOutcome::NotApplicable;
    };
    let Some(lmc) = canon_http_date(&lm.value) else {
        return ExtractOutcome::Malformed("Last-Modified is not a valid fixed-form date".into());
    };
    let Some(dc) = canon_http_date(&d.value) else {
        return ExtractOutcome::Malformed("Date header is not a valid fixed-form date".into());
    };
    let mut w = word_from_bytes(&lmc);
    w.extend(word_from_bytes(&dc));
    ExtractOutcome::Ok(w)
}

/// Upgrade protocol of request and response, each padded to width sixteen
/// with the marker symbol. Applicable only when both sides carry exactly
/// one Upgrade header.
fn upgrade_pair(input: &ValidationInput) -> ExtractOutcome {
    let (Some(req), Some(resp)) = (parsed(input, Side::Req), parsed(input, Side::Resp)) else {
        return ExtractOutcome::NotApplicable;
    };
    let mut word = Word::new();
    for m in [req, resp] {
        let upgrades: Vec<_> = m.headers_named("Upgrade").collect();
        let [h] = upgrades.as_slice() else {
            return match upgrades.len() {
                0 => ExtractOutcome::NotApplicable,
                _ => ExtractOutcome::Malformed("more than one Upgrade header".into()),
            };
        };
        let v = &h.value;
        if v.is_empty() || !v.iter().all(|b| is_tchar(*b) || *b == b'/') {
            return ExtractOutcome::Malformed(
                "Upgrade value is not a single protocol token".into(),
            );
        }
        if v.len() > 16 {
            return ExtractOutcome::Malformed("Upgrade value is longer than sixteen bytes".into());
        }
        word.extend(word_from_bytes(v));
        word.extend(std::iter::repeat(Term::DOT).take(16 - v.len()));
    }
    ExtractOutcome::Ok(word)
}

/// The message's version digits followed by "11", for comparison against
/// version 1.1.
fn version_cmp(input: &ValidationInput, side: Side) -> ExtractOutcome {
    let Some(m) = parsed(input, side) else { return ExtractOutcome::NotApplicable };
    let (maj, min) = m.start.version();
    ExtractOutcome::Ok(word_from_bytes(&[b'0' + maj, b'0' + min, b'1', b'1']))
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_message;
    use super::*;
    use crate::grammar::display_word;

    fn input_req(bytes: &[u8]) -> ValidationInput {
        ValidationInput {
            request: Some(MessageInput::Parsed(parse_message(bytes).unwrap())),
            response: None,
        }
    }

    fn input_resp(bytes: &[u8]) -> ValidationInput {
        ValidationInput {
            request: None,
            response: Some(MessageInput::Parsed(parse_message(bytes).unwrap())),
        }
    }

    fn ok_word(o: ExtractOutcome) -> Word {
        match o {
            ExtractOutcome::Ok(w) => w,
            other => panic!("expected a word, got {:?}", other),
        }
    }

    #[test]
    fn content_length_word_reverses_and_pads_to_eighty() {
        let mut raw = b"HTTP/1.1 200 OK\r\nContent-Length: 74\r\n\r\n".to_vec();
        raw.extend(std::iter::repeat(b'x').take(47));
        let input = input_resp(&raw);
        let w = ok_word(extract("resp-cl-len80", &input));
        let shown = display_word(&w);
        assert_eq!(shown.len(), 80 + 47);
        assert!(shown.starts_with("47"));
        assert_eq!(&shown[2..80], "0".repeat(78));
        assert_eq!(&shown[80..], ".".repeat(47));
    }

    #[test]
    fn content_length_absent_and_malformed() {
        let input = input_resp(b"HTTP/1.1 200 OK\r\n\r\n");
        assert_eq!(extract("resp-cl-len80", &input), ExtractOutcome::NotApplicable);
        let input = input_resp(b"HTTP/1.1 200 OK\r\nContent-Length: 4x\r\n\r\n");
        assert!(matches!(extract("resp-cl-len80", &input), ExtractOutcome::Malformed(_)));
        let input =
            input_resp(b"HTTP/1.1 200 OK\r\nContent-Length: 4\r\nContent-Length: 5\r\n\r\n");
        assert!(matches!(extract("resp-cl-len80", &input), ExtractOutcome::Malformed(_)));
    }

    #[test]
    fn chunked_word_covers_all_chunks_including_the_last() {
        let raw = b"HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n4\r\nWiki\r\n12\r\n 18 bytes of data \r\n0\r\n\r\n";
        let input = input_resp(raw);
        let w = ok_word(extract("resp-chunked8", &input));
        let shown = display_word(&w);
        let expect = format!(
            "{}{}#{}{}#{}#",
            "40000000",
            ".".repeat(4),
            "21000000",
            ".".repeat(18),
            "00000000"
        );
        assert_eq!(shown, expect);
    }

    #[test]
    fn chunked_is_inapplicable_without_the_coding() {
        let input = input_resp(b"HTTP/1.1 200 OK\r\n\r\n");
        assert_eq!(extract("resp-chunked8", &input), ExtractOutcome::NotApplicable);
        let input = input_resp(b"HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked, gzip\r\n\r\n");
        assert_eq!(extract("resp-chunked8", &input), ExtractOutcome::NotApplicable);
    }

    #[test]
    fn chunked_walk_failures_are_malformed() {
        let bad = [
            &b"HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n"[..],
            &b"HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\nzz\r\nab\r\n0\r\n\r\n"[..],
            &b"HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n0\r\n"[..],
            &b"HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n0\r\n\r\nextra"[..],
            &b"HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n123456789\r\n\r\n0\r\n\r\n"[..],
        ];
        for raw in bad {
            let input = input_resp(raw);
            assert!(
                matches!(extract("resp-chunked8", &input), ExtractOutcome::Malformed(_)),
                "{:?}",
                String::from_utf8_lossy(raw)
            );
        }
    }

    #[test]
    fn uppercase_chunk_sizes_are_canonicalized() {
        let raw = b"HTTP/1.1 200 OK\r\nTransfer-Encoding: chunked\r\n\r\n1A\r\nxxxxxxxxxxxxxxxxxxxxxxxxxx\r\n0\r\n\r\n";
        let w = ok_word(extract("resp-chunked8", &input_resp(raw)));
        assert!(display_word(&w).starts_with("a1000000"));
    }

    #[test]
    fn date_canonicalization() {
        assert_eq!(
            canon_http_date(b"Sun, 06 Nov 1994 08:49:37 GMT").unwrap(),
            b"19941106084937"
        );
        assert!(canon_http_date(b"Sun, 06 Nov 1994 08:49:37 UTC").is_none());
        assert!(canon_http_date(b"Sun,  6 Nov 1994 08:49:37 GMT").is_none());
        assert!(canon_http_date(b"Tui, 06 Nov 1994 08:49:37 GMT").is_none());
    }

    #[test]
    fn lm_date_pair_concatenates_canonical_forms() {
        let raw = b"HTTP/1.1 304 \r\nLast-Modified: Sat, 05 Nov 1994 08:49:37 GMT\r\nDate: Sun, 06 Nov 1994 08:49:37 GMT\r\n\r\n";
        let w = ok_word(extract("resp-lm-date-pair", &input_resp(raw)));
        assert_eq!(display_word(&w), "1994110508493719941106084937");
        let partial = b"HTTP/1.1 304 \r\nDate: Sun, 06 Nov 1994 08:49:37 GMT\r\n\r\n";
        assert_eq!(extract("resp-lm-date-pair", &input_resp(partial)), ExtractOutcome::NotApplicable);
        let bad = b"HTTP/1.1 304 \r\nLast-Modified: yesterday\r\nDate: Sun, 06 Nov 1994 08:49:37 GMT\r\n\r\n";
        assert!(matches!(
            extract("resp-lm-date-pair", &input_resp(bad)),
            ExtractOutcome::Malformed(_)
        ));
    }

    #[test]
    fn warn_date_pair_reads_the_trailing_quote() {
        let raw = b"HTTP/1.1 200 OK\r\nWarning: 113 - \"heuristic expiration\" \"Sun, 06 Nov 1994 08:49:37 GMT\"\r\nDate: Sun, 06 Nov 1994 08:49:37 GMT\r\n\r\n";
        let w = ok_word(extract("resp-warn-date-pair", &input_resp(raw)));
        assert_eq!(w.len(), 58);
        let no_date = b"HTTP/1.1 200 OK\r\nWarning: 113 - \"heuristic expiration\"\r\nDate: Sun, 06 Nov 1994 08:49:37 GMT\r\n\r\n";
        assert_eq!(
            extract("resp-warn-date-pair", &input_resp(no_date)),
            ExtractOutcome::NotApplicable
        );
    }

    #[test]
    fn range_pair_pads_both_bounds() {
        let input = input_req(b"GET / HTTP/1.1\r\nRange: bytes=99-200\r\n\r\n");
        let w = ok_word(extract("req-range-pair", &input));
        assert_eq!(display_word(&w), "00000000990000000200");
        for other in
            [&b"bytes=-500"[..], b"bytes=9500-", b"bytes=0-499,600-999", b"pages=1-2"]
        {
            let mut raw = b"GET / HTTP/1.1\r\nRange: ".to_vec();
            raw.extend_from_slice(other);
            raw.extend_from_slice(b"\r\n\r\n");
            assert_eq!(
                extract("req-range-pair", &input_req(&raw)),
                ExtractOutcome::NotApplicable,
                "{:?}",
                String::from_utf8_lossy(other)
            );
        }
        let wide = input_req(b"GET / HTTP/1.1\r\nRange: bytes=12345678901-2\r\n\r\n");
        assert!(matches!(extract("req-range-pair", &wide), ExtractOutcome::Malformed(_)));
    }

    #[test]
    fn upgrade_pair_pads_to_sixteen() {
        let input = ValidationInput {
            request: Some(MessageInput::Parsed(
                parse_message(b"GET / HTTP/1.1\r\nUpgrade: websocket\r\n\r\n").unwrap(),
            )),
            response: Some(MessageInput::Parsed(
                parse_message(b"HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\n\r\n")
                    .unwrap(),
            )),
        };
        let w = ok_word(extract("pair-upgrade", &input));
        assert_eq!(display_word(&w), format!("websocket{0}websocket{0}", ".".repeat(7)));
        let one_sided = input_req(b"GET / HTTP/1.1\r\nUpgrade: websocket\r\n\r\n");
        assert_eq!(extract("pair-upgrade", &one_sided), ExtractOutcome::NotApplicable);
    }

    #[test]
    fn version_and_status_extractors() {
        let input = input_req(b"GET / HTTP/1.0\r\n\r\n");
        assert_eq!(ok_word(extract("req-version", &input)), word_from_bytes(b"10"));
        assert_eq!(ok_word(extract("req-version-cmp", &input)), word_from_bytes(b"1011"));
        let input = input_resp(b"HTTP/1.1 101 Switching Protocols\r\n\r\n");
        assert_eq!(ok_word(extract("resp-status", &input)), word_from_bytes(b"101"));
        assert_eq!(extract("req-version", &input), ExtractOutcome::NotApplicable);
    }

    #[test]
    fn unparsed_message_is_malformed_for_head_only() {
        let input = ValidationInput {
            request: Some(MessageInput::Unparsed(
                parse_message(b"GET / HTTP/1.1\nX: y\r\n\r\n").unwrap_err(),
            )),
            response: None,
        };
        assert!(matches!(extract("req-head", &input), ExtractOutcome::Malformed(_)));
        assert_eq!(extract("req-host-value", &input), ExtractOutcome::NotApplicable);
        assert_eq!(extract("req-version", &input), ExtractOutcome::NotApplicable);
    }

    #[test]
    fn te_value_joins_multiple_headers() {
        let input = input_req(b"GET / HTTP/1.1\r\nTE: trailers\r\nTE: deflate\r\n\r\n");
        assert_eq!(ok_word(extract("req-te-value", &input)), word_from_bytes(b"trailers,deflate"));
    }
}
