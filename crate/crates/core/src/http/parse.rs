//! Strict parsing of HTTP/1.1 message heads.
//!
//! Lines end with CRLF and nothing else; a lone CR or LF is an error at its
//! byte offset, as is any character outside the field the grammar allows
//! there. Raw line bytes are preserved so a parsed message serializes back
//! byte for byte.

use std::fmt;

use crate::composer::is_tchar;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub offset: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "offset {}: {}", self.offset, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(offset: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { offset, msg: msg.into() })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Header {
    /// Field name as written (always ASCII token characters).
    pub name: String,
    /// Field value with surrounding optional whitespace removed.
    pub value: Vec<u8>,
    /// The full line as it appeared, without the CRLF.
    pub raw: Vec<u8>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StartLine {
    Request { method: String, target: String, version: (u8, u8), raw: Vec<u8> },
    Status { version: (u8, u8), code: u16, reason: Vec<u8>, raw: Vec<u8> },
}

impl StartLine {
    pub fn raw(&self) -> &[u8] {
        match self {
            StartLine::Request { raw, .. } | StartLine::Status { raw, .. } => raw,
        }
    }

    pub fn version(&self) -> (u8, u8) {
        match self {
            StartLine::Request { version, .. } | StartLine::Status { version, .. } => *version,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HttpMessage {
    pub start: StartLine,
    pub headers: Vec<Header>,
    pub body: Vec<u8>,
}

impl HttpMessage {
    pub fn is_request(&self) -> bool {
        matches!(self.start, StartLine::Request { .. })
    }

    /// First header with the given name, compared case-insensitively.
    pub fn header(&self, name: &str) -> Option<&Header> {
        self.headers.iter().find(|h| h.name.eq_ignore_ascii_case(name))
    }

    /// All headers with the given name, in order.
    pub fn headers_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Header> + 'a {
        self.headers.iter().filter(move |h| h.name.eq_ignore_ascii_case(name))
    }

    /// The start line, header lines, and terminating blank line.
    pub fn head_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(self.start.raw());
        out.extend_from_slice(b"\r\n");
        for h in &self.headers {
            out.extend_from_slice(&h.raw);
            out.extend_from_slice(b"\r\n");
        }
        out.extend_from_slice(b"\r\n");
        out
    }

    /// Byte-identical reconstruction of the parsed input.
    pub fn serialize(&self) -> Vec<u8> {
        let mut out = self.head_bytes();
        out.extend_from_slice(&self.body);
        out
    }
}

fn is_vchar(b: u8) -> bool {
    (0x21..=0x7e).contains(&b)
}

fn is_field_byte(b: u8) -> bool {
    is_vchar(b) || b == b' ' || b == b'\t' || b >= 0x80
}

/// Read one CRLF-terminated line starting at `*pos`; returns the byte range
/// of the line body and leaves `*pos` after the CRLF.
fn read_line(bytes: &[u8], pos: &mut usize) -> Result<(usize, usize), ParseError> {
    let start = *pos;
    let mut i = start;
    loop {
        match bytes.get(i) {
            None => return err(bytes.len(), "message head ends without a line terminator"),
            Some(b'\r') => {
                if bytes.get(i + 1) == Some(&b'\n') {
                    *pos = i + 2;
                    return Ok((start, i));
                }
                return err(i, "carriage return not followed by line feed");
            }
            Some(b'\n') => return err(i, "line feed without carriage return"),
            Some(_) => i += 1,
        }
    }
}

/// Parse "HTTP/" DIGIT "." DIGIT at `at`; returns the version.
fn parse_version(bytes: &[u8], at: usize, end: usize) -> Result<(u8, u8), ParseError> {
    let lit = b"HTTP/";
    for (k, want) in lit.iter().enumerate() {
        if at + k >= end || bytes[at + k] != *want {
            return err(at + k.min(end.saturating_sub(at)), "malformed protocol version");
        }
    }
    let d = at + lit.len();
    if d >= end || !bytes[d].is_ascii_digit() {
        return err(d.min(end), "protocol version major is not a digit");
    }
    if d + 1 >= end || bytes[d + 1] != b'.' {
        return err((d + 1).min(end), "protocol version needs a dot");
    }
    if d + 2 >= end || !bytes[d + 2].is_ascii_digit() {
        return err((d + 2).min(end), "protocol version minor is not a digit");
    }
    if d + 3 != end {
        return err(d + 3, "trailing bytes after the protocol version");
    }
    Ok((bytes[d] - b'0', bytes[d + 2] - b'0'))
}

fn parse_request_line(bytes: &[u8], start: usize, end: usize) -> Result<StartLine, ParseError> {
    let line = &bytes[start..end];
    let sp1 = match line.iter().position(|b| *b == b' ') {
        Some(0) => return err(start, "request line starts with a space"),
        Some(p) => p,
        None => return err(end, "request line needs a space after the method"),
    };
    for (k, b) in line[..sp1].iter().enumerate() {
        if !is_tchar(*b) {
            return err(start + k, "method contains an invalid character");
        }
    }
    let rest = &line[sp1 + 1..];
    let sp2 = match rest.iter().position(|b| *b == b' ') {
        Some(0) => return err(start + sp1 + 1, "request target is empty"),
        Some(p) => p,
        None => return err(end, "request line needs a space after the target"),
    };
    for (k, b) in rest[..sp2].iter().enumerate() {
        if !is_vchar(*b) {
            return err(start + sp1 + 1 + k, "request target contains an invalid character");
        }
    }
    let version = parse_version(bytes, start + sp1 + 1 + sp2 + 1, end)?;
    Ok(StartLine::Request {
        method: String::from_utf8(line[..sp1].to_vec()).unwrap(),
        target: String::from_utf8(rest[..sp2].to_vec()).unwrap(),
        version,
        raw: line.to_vec(),
    })
}

fn parse_status_line(bytes: &[u8], start: usize, end: usize) -> Result<StartLine, ParseError> {
    // "HTTP/X.Y" is 8 bytes, then " NNN " and the reason phrase.
    let ver_end = start + 8;
    if ver_end > end {
        return err(end, "status line is too short");
    }
    let version = parse_version(bytes, start, ver_end)?;
    if bytes.get(ver_end) != Some(&b' ') {
        return err(ver_end, "status line needs a space after the version");
    }
    let code_at = ver_end + 1;
    if code_at + 3 > end {
        return err(end, "status code needs three digits");
    }
    let code_bytes = &bytes[code_at..code_at + 3];
    for (k, b) in code_bytes.iter().enumerate() {
        if !b.is_ascii_digit() {
            return err(code_at + k, "status code needs three digits");
        }
    }
    if bytes.get(code_at + 3) != Some(&b' ') || code_at + 3 >= end {
        return err(
            (code_at + 3).min(end),
            "status line needs a space before the reason phrase",
        );
    }
    let reason_at = code_at + 4;
    for k in reason_at..end {
        if !is_field_byte(bytes[k]) {
            return err(k, "reason phrase contains an invalid character");
        }
    }
    let code = (code_bytes[0] - b'0') as u16 * 100
        + (code_bytes[1] - b'0') as u16 * 10
        + (code_bytes[2] - b'0') as u16;
    Ok(StartLine::Status {
        version,
        code,
        reason: bytes[reason_at..end].to_vec(),
        raw: bytes[start..end].to_vec(),
    })
}

fn parse_header_line(bytes: &[u8], start: usize, end: usize) -> Result<Header, ParseError> {
    let line = &bytes[start..end];
    let colon = match line.iter().position(|b| *b == b':') {
        Some(0) => return err(start, "header name is empty"),
        Some(p) => p,
        None => return err(start, "header line has no colon"),
    };
    for (k, b) in line[..colon].iter().enumerate() {
        if *b == b' ' || *b == b'\t' {
            return err(start + k, "whitespace is not allowed in a header name");
        }
        if !is_tchar(*b) {
            return err(start + k, "header name contains an invalid character");
        }
    }
    let value_part = &line[colon + 1..];
    for (k, b) in value_part.iter().enumerate() {
        if !is_field_byte(*b) {
            return err(start + colon + 1 + k, "header value contains an invalid character");
        }
    }
    let trimmed: &[u8] = {
        let mut s = 0;
        let mut e = value_part.len();
        while s < e && (value_part[s] == b' ' || value_part[s] == b'\t') {
            s += 1;
        }
        while e > s && (value_part[e - 1] == b' ' || value_part[e - 1] == b'\t') {
            e -= 1;
        }
        &value_part[s..e]
    };
    Ok(Header {
        name: String::from_utf8(line[..colon].to_vec()).unwrap(),
        value: trimmed.to_vec(),
        raw: line.to_vec(),
    })
}

/// Parse a full message: start line, header block, and the remaining bytes
/// as the body. The kind is decided by the first bytes: a status line always
/// begins with the protocol version, and no valid method can contain `/`.
pub fn parse_message(bytes: &[u8]) -> Result<HttpMessage, ParseError> {
    let mut pos = 0;
    let (s, e) = read_line(bytes, &mut pos)?;
    if e == s {
        return err(s, "message starts with an empty line");
    }
    let start = if bytes[s..e].starts_with(b"HTTP/") {
        parse_status_line(bytes, s, e)?
    } else {
        parse_request_line(bytes, s, e)?
    };
    let mut headers = Vec::new();
    loop {
        let (hs, he) = read_line(bytes, &mut pos)?;
        if hs == he {
            break;
        }
        headers.push(parse_header_line(bytes, hs, he)?);
    }
    Ok(HttpMessage { start, headers, body: bytes[pos..].to_vec() })
}

/// Parse a message and require it to be a request.
pub fn parse_request(bytes: &[u8]) -> Result<HttpMessage, ParseError> {
    let m = parse_message(bytes)?;
    if !m.is_request() {
        return err(0, "expected a request but found a status line");
    }
    Ok(m)
}

/// Parse a message and require it to be a response.
pub fn parse_response(bytes: &[u8]) -> Result<HttpMessage, ParseError> {
    let m = parse_message(bytes)?;
    if m.is_request() {
        return err(0, "expected a response but found a request line");
    }
    Ok(m)
}
