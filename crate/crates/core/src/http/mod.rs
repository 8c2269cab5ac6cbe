//! HTTP/1.1 exchange validation built on the language toolkit.
//!
//! A validation input carries an optional request and an optional response.
//! A profile binds language atoms to extractors over those messages; the
//! built-in catalog covers message-head syntax plus a set of header
//! consistency rules (framing lengths, host requirements, date ordering,
//! protocol upgrades, and more). Each rule is expressed as grammars or
//! regexes over canonical words, never as ad hoc code, so every check has
//! an inspectable language definition behind it.

pub mod catalog;
pub mod extract;
pub mod parse;

use std::collections::HashMap;
use std::time::Instant;

use crate::composer::{
    eval_atom, eval_expr, eval_expr_state, AtomReport, ConstraintReport, Overall, Profile,
    ValidationReport, VerdictState,
};

pub use parse::{
    parse_message, parse_request, parse_response, Header, HttpMessage, ParseError, StartLine,
};

/// One side of an exchange: either a parsed message or the reason parsing
/// failed. A failed parse still participates in validation so the syntax
/// constraint can report it.
pub enum MessageInput {
    Parsed(HttpMessage),
    Unparsed(ParseError),
}

impl MessageInput {
    pub fn from_request_bytes(bytes: &[u8]) -> MessageInput {
        match parse::parse_request(bytes) {
            Ok(m) => MessageInput::Parsed(m),
            Err(e) => MessageInput::Unparsed(e),
        }
    }

    pub fn from_response_bytes(bytes: &[u8]) -> MessageInput {
        match parse::parse_response(bytes) {
            Ok(m) => MessageInput::Parsed(m),
            Err(e) => MessageInput::Unparsed(e),
        }
    }
}

#[derive(Default)]
pub struct ValidationInput {
    pub request: Option<MessageInput>,
    pub response: Option<MessageInput>,
}

impl ValidationInput {
    pub fn new() -> ValidationInput {
        ValidationInput::default()
    }

    pub fn with_request_bytes(mut self, bytes: &[u8]) -> ValidationInput {
        self.request = Some(MessageInput::from_request_bytes(bytes));
        self
    }

    pub fn with_response_bytes(mut self, bytes: &[u8]) -> ValidationInput {
        self.response = Some(MessageInput::from_response_bytes(bytes));
        self
    }

    /// True when any provided side failed to parse.
    pub fn has_parse_failure(&self) -> bool {
        [&self.request, &self.response]
            .iter()
            .any(|s| matches!(s, Some(MessageInput::Unparsed(_))))
    }
}

/// Evaluate every atom of the profile against the input and assemble the
/// report. Atom evaluation is independent of atom order; expressions read
/// verdicts by id.
pub fn validate_http(profile: &Profile, input: &ValidationInput) -> ValidationReport {
    let t0 = Instant::now();
    let mut states: HashMap<String, VerdictState> = HashMap::new();
    let mut atom_reports: HashMap<String, AtomReport> = HashMap::new();
    for a in &profile.atoms {
        let ta = Instant::now();
        let outcome = extract::extract(&a.extractor, input);
        let v = eval_atom(a, &outcome);
        states.insert(a.id.clone(), v.state);
        atom_reports.insert(
            a.id.clone(),
            AtomReport {
                id: a.id.clone(),
                verdict: v.state,
                note: v.note,
                ms: ta.elapsed().as_secs_f64() * 1000.0,
            },
        );
    }
    let constraints = profile
        .constraints
        .iter()
        .map(|c| ConstraintReport {
            id: c.id.clone(),
            description: c.description.clone(),
            verdict: eval_expr_state(&c.expr, &states).unwrap_or(VerdictState::Fail),
            atoms: c
                .atom_ids
                .iter()
                .filter_map(|id| atom_reports.get(id).cloned())
                .collect(),
        })
        .collect();
    let overall = if eval_expr(&profile.root, &states).unwrap_or(false) {
        Overall::Pass
    } else {
        Overall::Fail
    };
    ValidationReport { overall, constraints, timing_ms: t0.elapsed().as_secs_f64() * 1000.0 }
}
