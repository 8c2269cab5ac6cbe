//! Context-free grammar representation.
//!
//! A grammar is the usual tuple (variables, terminals, start, rules). Terminals
//! are bytes plus two abstract markers (`<sharp>`, `<dot>`) that never collide
//! with input bytes. Rules are kept in insertion order; `size` counts
//! `1 + |rhs|` per rule.

use std::collections::HashMap;
use std::fmt;

/// Terminal symbol: a byte (0..=255) or one of two abstract markers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(u16);

impl Term {
    /// Abstract delimiter marker, distinct from every byte.
    pub const SHARP: Term = Term(256);
    /// Abstract filler marker, distinct from every byte.
    pub const DOT: Term = Term(257);
    pub const COUNT: usize = 258;

    pub fn byte(b: u8) -> Term {
        Term(b as u16)
    }

    pub fn as_byte(self) -> Option<u8> {
        if self.0 < 256 {
            Some(self.0 as u8)
        } else {
            None
        }
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Term::SHARP => write!(f, "<sharp>"),
            Term::DOT => write!(f, "<dot>"),
            Term(b) if (0x20..0x7f).contains(&b) => {
                let c = b as u8 as char;
                match c {
                    '\'' => write!(f, "'\\''"),
                    '\\' => write!(f, "'\\\\'"),
                    _ => write!(f, "'{}'", c),
                }
            }
            Term(b) => match b as u8 {
                b'\r' => write!(f, "'\\r'"),
                b'\n' => write!(f, "'\\n'"),
                b'\t' => write!(f, "'\\t'"),
                other => write!(f, "'\\x{:02x}'", other),
            },
        }
    }
}

/// Dense bitset over the terminal universe.
#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct TermSet {
    bits: [u64; 5],
}

impl TermSet {
    pub fn new() -> TermSet {
        TermSet::default()
    }

    pub fn insert(&mut self, t: Term) {
        self.bits[t.index() / 64] |= 1 << (t.index() % 64);
    }

    pub fn contains(&self, t: Term) -> bool {
        self.bits[t.index() / 64] & (1 << (t.index() % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Term> + '_ {
        (0..Term::COUNT as u16).map(Term).filter(|t| self.contains(*t))
    }
}

impl FromIterator<Term> for TermSet {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> TermSet {
        let mut s = TermSet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

impl fmt::Debug for TermSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Index of a variable within its grammar.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct VarId(pub(crate) u32);

/// Grammar symbol: terminal or variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Symbol {
    T(Term),
    V(VarId),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub lhs: VarId,
    pub rhs: Vec<Symbol>,
}

/// A word over the terminal alphabet.
pub type Word = Vec<Term>;

pub fn word_from_bytes(bytes: &[u8]) -> Word {
    bytes.iter().map(|b| Term::byte(*b)).collect()
}

/// Compact human-readable rendering of a word, for notes and counterexamples.
pub fn display_word(w: &[Term]) -> String {
    let mut out = String::new();
    for t in w {
        match *t {
            Term::SHARP => out.push('#'),
            Term::DOT => out.push('.'),
            other => {
                let b = other.as_byte().unwrap();
                if (0x20..0x7f).contains(&b) {
                    out.push(b as char);
                } else {
                    out.push_str(&format!("\\x{:02x}", b));
                }
            }
        }
    }
    out
}

/// Validation finding for a structurally suspect grammar.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Diagnostic {
    /// A rule's rhs references a variable that no rule defines.
    RhsVariableUndefined { rule: usize, var: String },
    /// The start variable has no defining rule.
    StartUndefined { var: String },
    /// A rule's rhs uses a terminal outside the declared terminal set.
    TerminalNotDeclared { rule: usize, term: Term },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::RhsVariableUndefined { rule, var } => {
                write!(f, "rule {}: rhs variable {} has no defining rule", rule, var)
            }
            Diagnostic::StartUndefined { var } => {
                write!(f, "start variable {} has no defining rule", var)
            }
            Diagnostic::TerminalNotDeclared { rule, term } => {
                write!(f, "rule {}: terminal {} is not in the declared alphabet", rule, term)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Grammar {
    vars: Vec<String>,
    var_ids: HashMap<String, VarId>,
    terminals: TermSet,
    start: VarId,
    rules: Vec<Rule>,
}

impl Grammar {
    /// Create an empty grammar whose start variable is `start`.
    pub fn new(start: &str) -> Grammar {
        let mut g = Grammar {
            vars: Vec::new(),
            var_ids: HashMap::new(),
            terminals: TermSet::new(),
            start: VarId(0),
            rules: Vec::new(),
        };
        g.start = g.var(start);
        g
    }

    /// Intern a variable name, declaring it on first use.
    pub fn var(&mut self, name: &str) -> VarId {
        if let Some(id) = self.var_ids.get(name) {
            return *id;
        }
        let id = VarId(self.vars.len() as u32);
        self.vars.push(name.to_string());
        self.var_ids.insert(name.to_string(), id);
        id
    }

    pub fn lookup_var(&self, name: &str) -> Option<VarId> {
        self.var_ids.get(name).copied()
    }

    pub fn var_name(&self, id: VarId) -> &str {
        &self.vars[id.0 as usize]
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn start(&self) -> VarId {
        self.start
    }

    pub fn set_start(&mut self, id: VarId) {
        self.start = id;
    }

    pub fn declare_terminal(&mut self, t: Term) {
        self.terminals.insert(t);
    }

    pub fn declare_terminals(&mut self, ts: impl IntoIterator<Item = Term>) {
        for t in ts {
            self.terminals.insert(t);
        }
    }

    pub fn terminals(&self) -> &TermSet {
        &self.terminals
    }

    pub fn add_rule(&mut self, lhs: VarId, rhs: Vec<Symbol>) {
        self.rules.push(Rule { lhs, rhs });
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    /// Grammar size: sum of `1 + |rhs|` over all rules.
    pub fn size(&self) -> usize {
        self.rules.iter().map(|r| 1 + r.rhs.len()).sum()
    }

    /// Structural validation. An empty result means the grammar is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut defined = vec![false; self.vars.len()];
        for r in &self.rules {
            defined[r.lhs.0 as usize] = true;
        }
        let mut out = Vec::new();
        if !defined[self.start.0 as usize] {
            out.push(Diagnostic::StartUndefined { var: self.vars[self.start.0 as usize].clone() });
        }
        for (i, r) in self.rules.iter().enumerate() {
            for sym in &r.rhs {
                match sym {
                    Symbol::V(v) => {
                        if !defined[v.0 as usize] {
                            out.push(Diagnostic::RhsVariableUndefined {
                                rule: i,
                                var: self.vars[v.0 as usize].clone(),
                            });
                        }
                    }
                    Symbol::T(t) => {
                        if !self.terminals.contains(*t) {
                            out.push(Diagnostic::TerminalNotDeclared { rule: i, term: *t });
                        }
                    }
                }
            }
        }
        out
    }

    /// Render in the line-oriented text format parsed by [`Grammar::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("%start {}\n", self.var_name(self.start)));
        for r in &self.rules {
            out.push_str(self.var_name(r.lhs));
            out.push_str(" ->");
            for sym in &r.rhs {
                out.push(' ');
                match sym {
                    Symbol::T(t) => out.push_str(&t.to_string()),
                    Symbol::V(v) => out.push_str(self.var_name(*v)),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text format: one `LHS -> sym ...` rule per line, an empty rhs
    /// for epsilon, `'c'`/`'\xHH'` terminals, `<sharp>`/`<dot>` markers,
    /// optional `%start NAME` header, `#` comments.
    pub fn parse_text(text: &str) -> Result<Grammar, TextError> {
        let mut g = Grammar::new("S");
        g.vars.clear();
        g.var_ids.clear();
        let mut start_name: Option<String> = None;
        let mut first_lhs: Option<VarId> = None;

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let toks = tokenize(raw, line)?;
            if toks.is_empty() {
                continue;
            }
            if let Tok::Directive(name) = &toks[0] {
                if name != "start" {
                    return Err(TextError { line, msg: format!("unknown directive %{}", name) });
                }
                if toks.len() != 2 {
                    return Err(TextError { line, msg: "%start takes one variable name".into() });
                }
                match &toks[1] {
                    Tok::Ident(n) => start_name = Some(n.clone()),
                    _ => return Err(TextError { line, msg: "%start takes one variable name".into() }),
                }
                continue;
            }
            let lhs = match &toks[0] {
                Tok::Ident(n) => n.clone(),
                _ => return Err(TextError { line, msg: "rule must start with a variable name".into() }),
            };
            if toks.len() < 2 || toks[1] != Tok::Arrow {
                return Err(TextError { line, msg: "expected -> after rule lhs".into() });
            }
            let lhs_id = g.var(&lhs);
            first_lhs.get_or_insert(lhs_id);
            let mut rhs = Vec::new();
            for t in &toks[2..] {
                match t {
                    Tok::Ident(n) => rhs.push(Symbol::V(g.var(n))),
                    Tok::Terminal(term) => {
                        g.terminals.insert(*term);
                        rhs.push(Symbol::T(*term));
                    }
                    Tok::Arrow => {
                        return Err(TextError { line, msg: "unexpected -> in rhs".into() })
                    }
                    Tok::Directive(_) => {
                        return Err(TextError { line, msg: "unexpected directive in rhs".into() })
                    }
                }
            }
            g.rules.push(Rule { lhs: lhs_id, rhs });
        }

        if g.rules.is_empty() && start_name.is_none() {
            return Err(TextError { line: 0, msg: "grammar has no rules".into() });
        }
        g.start = match start_name {
            Some(name) => g.var(&name),
            None => first_lhs.expect("at least one rule"),
        };
        Ok(g)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TextError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for TextError {}

#[derive(PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    Terminal(Term),
    Arrow,
    Directive(String),
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Tok>, TextError> {
    let err = |msg: String| TextError { line: lineno, msg };
    let mut toks = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '#' => break,
            '-' => {
                chars.next();
                if chars.next() != Some('>') {
                    return Err(err("expected -> ".into()));
                }
                toks.push(Tok::Arrow);
            }
            '%' => {
                chars.next();
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Directive(name));
            }
            '\'' => {
                chars.next();
                let t = match chars.next() {
                    None => return Err(err("unterminated terminal".into())),
                    Some('\\') => match chars.next() {
                        Some('\\') => Term::byte(b'\\'),
                        Some('\'') => Term::byte(b'\''),
                        Some('r') => Term::byte(b'\r'),
                        Some('n') => Term::byte(b'\n'),
                        Some('t') => Term::byte(b'\t'),
                        Some('x') => {
                            let hi = chars.next().and_then(|c| c.to_digit(16));
                            let lo = chars.next().and_then(|c| c.to_digit(16));
                            match (hi, lo) {
                                (Some(h), Some(l)) => Term::byte((h * 16 + l) as u8),
                                _ => return Err(err("bad \\x escape in terminal".into())),
                            }
                        }
                        other => {
                            return Err(err(format!("bad escape {:?} in terminal", other)))
                        }
                    },
                    Some(c) if c.is_ascii() && !c.is_ascii_control() => Term::byte(c as u8),
                    Some(c) => return Err(err(format!("non-ascii terminal {:?}", c))),
                };
                if chars.next() != Some('\'') {
                    return Err(err("unterminated terminal".into()));
                }
                toks.push(Tok::Terminal(t));
            }
            '<' => {
                chars.next();
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some('>') => break,
                        Some(c) if c.is_ascii_alphabetic() => name.push(c),
                        _ => return Err(err("unterminated <> marker".into())),
                    }
                }
                match name.as_str() {
                    "sharp" => toks.push(Tok::Terminal(Term::SHARP)),
                    "dot" => toks.push(Tok::Terminal(Term::DOT)),
                    other => return Err(err(format!("unknown marker <{}>", other))),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(name));
            }
            other => return Err(err(format!("unexpected character {:?}", other))),
        }
    }
    Ok(toks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Grammar {
        let mut g = Grammar::new("S");
        let s = g.start();
        let x = g.var("X");
        g.declare_terminals([Term::byte(b'a'), Term::byte(b'b')]);
        g.add_rule(s, vec![Symbol::T(Term::byte(b'a')), Symbol::V(x)]);
        g.add_rule(x, vec![]);
        g.add_rule(x, vec![Symbol::T(Term::byte(b'b')), Symbol::V(x)]);
        g
    }

    #[test]
    fn size_counts_one_plus_rhs_len_per_rule() {
        let g = sample();
        assert_eq!(g.size(), 3 + 1 + 3);
        assert_eq!(Grammar::new("S").size(), 0);
    }

    #[test]
    fn validate_accepts_well_formed() {
        assert_eq!(sample().validate(), vec![]);
    }

    #[test]
    fn validate_reports_undefined_rhs_variable() {
        let mut g = Grammar::new("S");
        let s = g.start();
        let x = g.var("X");
        g.declare_terminal(Term::byte(b'a'));
        g.add_rule(s, vec![Symbol::T(Term::byte(b'a')), Symbol::V(x)]);
        let diags = g.validate();
        assert_eq!(
            diags,
            vec![Diagnostic::RhsVariableUndefined { rule: 0, var: "X".into() }]
        );
    }

    #[test]
    fn validate_reports_start_without_rules() {
        let mut g = Grammar::new("S");
        let x = g.var("X");
        g.add_rule(x, vec![]);
        assert_eq!(g.validate(), vec![Diagnostic::StartUndefined { var: "S".into() }]);
    }

    #[test]
    fn validate_reports_undeclared_terminal() {
        let mut g = Grammar::new("S");
        let s = g.start();
        g.add_rule(s, vec![Symbol::T(Term::byte(b'a'))]);
        assert_eq!(
            g.validate(),
            vec![Diagnostic::TerminalNotDeclared { rule: 0, term: Term::byte(b'a') }]
        );
    }

    #[test]
    fn text_round_trip() {
        let g = sample();
        let text = g.to_text();
        let back = Grammar::parse_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.rule_count(), g.rule_count());
        assert_eq!(back.size(), g.size());
    }

    #[test]
    fn text_parses_epsilon_markers_escapes_and_comments() {
        let text = "\
# demo
%start S
S -> 'a' <sharp> B '\\x41' <dot>
B ->   # epsilon
";
        let g = Grammar::parse_text(text).unwrap();
        assert_eq!(g.rule_count(), 2);
        assert_eq!(g.rules()[1].rhs, vec![]);
        assert_eq!(
            g.rules()[0].rhs,
            vec![
                Symbol::T(Term::byte(b'a')),
                Symbol::T(Term::SHARP),
                Symbol::V(g.lookup_var("B").unwrap()),
                Symbol::T(Term::byte(b'A')),
                Symbol::T(Term::DOT),
            ]
        );
        assert!(g.terminals().contains(Term::SHARP));
        assert!(g.terminals().contains(Term::byte(b'A')));
    }

    #[test]
    fn text_default_start_is_first_lhs() {
        let g = Grammar::parse_text("A -> 'x'\nB -> 'y'\n").unwrap();
        assert_eq!(g.var_name(g.start()), "A");
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let e = Grammar::parse_text("S -> 'a\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = Grammar::parse_text("S -> 'a'\nX 'b'\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn term_display_escapes() {
        assert_eq!(Term::byte(b'a').to_string(), "'a'");
        assert_eq!(Term::byte(b'\'').to_string(), "'\\''");
        assert_eq!(Term::byte(b'\\').to_string(), "'\\\\'");
        assert_eq!(Term::byte(0x0d).to_string(), "'\\r'");
        assert_eq!(Term::byte(0x01).to_string(), "'\\x01'");
        assert_eq!(Term::SHARP.to_string(), "<sharp>");
        assert_eq!(Term::DOT.to_string(), "<dot>");
    }

    #[test]
    fn termset_basics() {
        let s: TermSet = [Term::byte(b'a'), Term::SHARP, Term::byte(0)].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert!(s.contains(Term::SHARP));
        assert!(!s.contains(Term::DOT));
        assert_eq!(s.iter().count(), 3);
    }
}
