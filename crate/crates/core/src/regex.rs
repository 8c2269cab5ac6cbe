//! Regular expressions with anchored full-word semantics.
//!
//! A pattern matches a word only when the entire word is in its language, so
//! "contains" checks must be written with explicit `.*` padding, mirroring
//! grammar membership. Matching simulates a Thompson construction NFA with a
//! frontier set, linear time per input symbol, no backtracking.
//!
//! Syntax: literals, `.` (any byte except CR/LF), `[...]` classes with ranges
//! and `^` negation, grouping, `|`, `*`, `+`, `?`, and escapes
//! (`\\ \. \* \+ \? \| \( \) \[ \] \- \xHH \r \n \t \d \w \s`).

use std::fmt;

use crate::grammar::{Term, TermSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Ast {
    /// Matches only the empty word.
    Epsilon,
    /// Matches nothing at all.
    Fail,
    Lit(Term),
    Class(TermSet),
    Concat(Vec<Ast>),
    Alt(Vec<Ast>),
    Star(Box<Ast>),
    Plus(Box<Ast>),
    Opt(Box<Ast>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RegexError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for RegexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pattern offset {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for RegexError {}

struct NfaState {
    eps: Vec<u32>,
    on: Option<(TermSet, u32)>,
}

impl fmt::Debug for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Regex({:?})", self.pattern)
    }
}

/// A parsed and compiled pattern.
pub struct Regex {
    pattern: String,
    ast: Ast,
    states: Vec<NfaState>,
    start: u32,
    accept: u32,
}

impl Regex {
    pub fn parse(pattern: &str) -> Result<Regex, RegexError> {
        let ast = Parser { bytes: pattern.as_bytes(), pos: 0 }.parse()?;
        let mut b = Builder { states: Vec::new() };
        let (start, accept) = b.build(&ast);
        Ok(Regex { pattern: pattern.to_string(), ast, states: b.states, start, accept })
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn ast(&self) -> &Ast {
        &self.ast
    }

    /// Anchored full-word match.
    pub fn is_match(&self, w: &[Term]) -> bool {
        let mut cur = vec![false; self.states.len()];
        let mut next = vec![false; self.states.len()];
        let mut stack = Vec::new();
        add_state(&self.states, &mut cur, &mut stack, self.start);
        for t in w {
            for v in next.iter_mut() {
                *v = false;
            }
            let mut any = false;
            for (i, active) in cur.iter().enumerate() {
                if !active {
                    continue;
                }
                if let Some((set, to)) = &self.states[i].on {
                    if set.contains(*t) {
                        add_state(&self.states, &mut next, &mut stack, *to);
                        any = true;
                    }
                }
            }
            if !any {
                return false;
            }
            std::mem::swap(&mut cur, &mut next);
        }
        cur[self.accept as usize]
    }
}

fn add_state(states: &[NfaState], set: &mut [bool], stack: &mut Vec<u32>, s: u32) {
    stack.push(s);
    while let Some(s) = stack.pop() {
        if set[s as usize] {
            continue;
        }
        set[s as usize] = true;
        for e in &states[s as usize].eps {
            stack.push(*e);
        }
    }
}

/// Convenience wrapper around [`Regex::is_match`].
pub fn regex_match(r: &Regex, w: &[Term]) -> bool {
    r.is_match(w)
}

struct Builder {
    states: Vec<NfaState>,
}

impl Builder {
    fn state(&mut self) -> u32 {
        self.states.push(NfaState { eps: Vec::new(), on: None });
        (self.states.len() - 1) as u32
    }

    fn eps(&mut self, from: u32, to: u32) {
        self.states[from as usize].eps.push(to);
    }

    fn build(&mut self, ast: &Ast) -> (u32, u32) {
        match ast {
            Ast::Epsilon => {
                let s = self.state();
                let e = self.state();
                self.eps(s, e);
                (s, e)
            }
            Ast::Fail => {
                let s = self.state();
                let e = self.state();
                (s, e)
            }
            Ast::Lit(t) => {
                let mut set = TermSet::new();
                set.insert(*t);
                self.build(&Ast::Class(set))
            }
            Ast::Class(set) => {
                let s = self.state();
                let e = self.state();
                self.states[s as usize].on = Some((*set, e));
                (s, e)
            }
            Ast::Concat(parts) => {
                let s = self.state();
                let mut cur = s;
                for p in parts {
                    let (ps, pe) = self.build(p);
                    self.eps(cur, ps);
                    cur = pe;
                }
                (s, cur)
            }
            Ast::Alt(parts) => {
                let s = self.state();
                let e = self.state();
                for p in parts {
                    let (ps, pe) = self.build(p);
                    self.eps(s, ps);
                    self.eps(pe, e);
                }
                (s, e)
            }
            Ast::Star(inner) => {
                let s = self.state();
                let e = self.state();
                let (is, ie) = self.build(inner);
                self.eps(s, is);
                self.eps(s, e);
                self.eps(ie, is);
                self.eps(ie, e);
                (s, e)
            }
            Ast::Plus(inner) => {
                let s = self.state();
                let e = self.state();
                let (is, ie) = self.build(inner);
                self.eps(s, is);
                self.eps(ie, is);
                self.eps(ie, e);
                (s, e)
            }
            Ast::Opt(inner) => {
                let s = self.state();
                let e = self.state();
                let (is, ie) = self.build(inner);
                self.eps(s, is);
                self.eps(s, e);
                self.eps(ie, e);
                (s, e)
            }
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, RegexError> {
        Err(RegexError { pos: self.pos, msg: msg.to_string() })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn parse(mut self) -> Result<Ast, RegexError> {
        let ast = self.alt()?;
        if self.pos != self.bytes.len() {
            return self.err("unexpected character");
        }
        Ok(ast)
    }

    fn alt(&mut self) -> Result<Ast, RegexError> {
        let mut parts = vec![self.concat()?];
        while self.peek() == Some(b'|') {
            self.bump();
            parts.push(self.concat()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Ast::Alt(parts) })
    }

    fn concat(&mut self) -> Result<Ast, RegexError> {
        let mut parts = Vec::new();
        while let Some(b) = self.peek() {
            if b == b'|' || b == b')' {
                break;
            }
            parts.push(self.repeat()?);
        }
        Ok(match parts.len() {
            0 => Ast::Epsilon,
            1 => parts.pop().unwrap(),
            _ => Ast::Concat(parts),
        })
    }

    fn repeat(&mut self) -> Result<Ast, RegexError> {
        let mut node = self.atom()?;
        while let Some(b) = self.peek() {
            node = match b {
                b'*' => Ast::Star(Box::new(node)),
                b'+' => Ast::Plus(Box::new(node)),
                b'?' => Ast::Opt(Box::new(node)),
                _ => break,
            };
            self.bump();
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Ast, RegexError> {
        match self.peek() {
            None => self.err("expected an atom"),
            Some(b'(') => {
                self.bump();
                let inner = self.alt()?;
                if self.bump() != Some(b')') {
                    return self.err("missing )");
                }
                Ok(inner)
            }
            Some(b'[') => {
                self.bump();
                self.class()
            }
            Some(b'.') => {
                self.bump();
                Ok(Ast::Class(any_byte_set()))
            }
            Some(b'\\') => {
                self.bump();
                self.escape(false)
            }
            Some(b) if b"*+?)".contains(&b) => self.err("repetition without operand"),
            Some(b) => {
                self.bump();
                Ok(Ast::Lit(Term::byte(b)))
            }
        }
    }

    fn escape(&mut self, in_class: bool) -> Result<Ast, RegexError> {
        let Some(b) = self.bump() else {
            return self.err("dangling backslash");
        };
        let lit = |b: u8| Ok(Ast::Lit(Term::byte(b)));
        match b {
            b'\\' | b'.' | b'*' | b'+' | b'?' | b'|' | b'(' | b')' | b'[' | b']' | b'-' | b'^' => {
                lit(b)
            }
            b'r' => lit(b'\r'),
            b'n' => lit(b'\n'),
            b't' => lit(b'\t'),
            b'x' => {
                let hi = self.bump().and_then(hex_val);
                let lo = self.bump().and_then(hex_val);
                match (hi, lo) {
                    (Some(h), Some(l)) => lit(h * 16 + l),
                    _ => self.err("bad \\x escape"),
                }
            }
            b'd' => Ok(Ast::Class(byte_range_set(b'0', b'9'))),
            b'w' => {
                let mut s = byte_range_set(b'0', b'9');
                for t in byte_range_set(b'a', b'z').iter() {
                    s.insert(t);
                }
                for t in byte_range_set(b'A', b'Z').iter() {
                    s.insert(t);
                }
                s.insert(Term::byte(b'_'));
                Ok(Ast::Class(s))
            }
            b's' => {
                let mut s = TermSet::new();
                for b in [b' ', b'\t', b'\r', b'\n'] {
                    s.insert(Term::byte(b));
                }
                Ok(Ast::Class(s))
            }
            other => {
                let _ = in_class;
                self.pos -= 1;
                self.err(&format!("unknown escape \\{}", other as char))
            }
        }
    }

    fn class(&mut self) -> Result<Ast, RegexError> {
        let negate = if self.peek() == Some(b'^') {
            self.bump();
            true
        } else {
            false
        };
        let mut set = TermSet::new();
        let mut first = true;
        loop {
            let lo = match self.peek() {
                None => return self.err("unterminated class"),
                Some(b']') if !first => {
                    self.bump();
                    break;
                }
                Some(b'\\') => {
                    self.bump();
                    match self.escape(true)? {
                        Ast::Lit(t) => ClassItem::Byte(t.as_byte().unwrap()),
                        Ast::Class(s) => ClassItem::Set(s),
                        _ => unreachable!(),
                    }
                }
                Some(b) => {
                    self.bump();
                    ClassItem::Byte(b)
                }
            };
            first = false;
            match lo {
                ClassItem::Set(s) => {
                    for t in s.iter() {
                        set.insert(t);
                    }
                }
                ClassItem::Byte(lo) => {
                    if self.peek() == Some(b'-') && self.bytes.get(self.pos + 1) != Some(&b']') {
                        self.bump();
                        let hi = match self.bump() {
                            None => return self.err("unterminated class range"),
                            Some(b'\\') => match self.escape(true)? {
                                Ast::Lit(t) => t.as_byte().unwrap(),
                                _ => return self.err("class range bound must be a single byte"),
                            },
                            Some(b) => b,
                        };
                        if hi < lo {
                            return self.err("class range out of order");
                        }
                        for t in byte_range_set(lo, hi).iter() {
                            set.insert(t);
                        }
                    } else {
                        set.insert(Term::byte(lo));
                    }
                }
            }
        }
        if negate {
            let mut flipped = TermSet::new();
            for b in 0..=255u8 {
                if !set.contains(Term::byte(b)) {
                    flipped.insert(Term::byte(b));
                }
            }
            set = flipped;
        }
        Ok(Ast::Class(set))
    }
}

enum ClassItem {
    Byte(u8),
    Set(TermSet),
}

fn hex_val(b: u8) -> Option<u8> {
    (b as char).to_digit(16).map(|v| v as u8)
}

fn byte_range_set(lo: u8, hi: u8) -> TermSet {
    (lo..=hi).map(Term::byte).collect()
}

/// Every byte except CR and LF; the meaning of `.`.
fn any_byte_set() -> TermSet {
    let mut s = TermSet::new();
    for b in 0..=255u8 {
        if b != b'\r' && b != b'\n' {
            s.insert(Term::byte(b));
        }
    }
    s
}
