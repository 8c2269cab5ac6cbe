//! Chart-based recognition for arbitrary context-free grammars.
//!
//! Standard Earley recognition: no normal-form conversion, epsilon and unit
//! rules work directly, ambiguity costs nothing because only membership is
//! reported. Worst case is cubic in the word length. Two implementation
//! choices matter for throughput:
//!
//! * variables whose rules are all single terminals are inlined as character
//!   classes, so alternatives like a 70-rule `tchar` cost one item instead of
//!   seventy per position;
//! * nullable variables advance their predictor at prediction time, which
//!   makes same-set completion walks unnecessary.

use std::collections::HashSet;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};

use crate::grammar::{Diagnostic, Grammar, Symbol, Term, TermSet};

/// Multiply-xor hasher for small fixed-width keys on the hot path.
#[derive(Default)]
pub(crate) struct FxHasher {
    state: u64,
}

impl Hasher for FxHasher {
    fn finish(&self) -> u64 {
        self.state
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.write_u64(*b as u64);
        }
    }

    fn write_u32(&mut self, v: u32) {
        self.write_u64(v as u64);
    }

    fn write_u64(&mut self, v: u64) {
        self.state = (self.state.rotate_left(5) ^ v).wrapping_mul(0x517c_c1b7_2722_0a95);
    }

    fn write_usize(&mut self, v: usize) {
        self.write_u64(v as u64);
    }
}

pub(crate) type FxBuild = BuildHasherDefault<FxHasher>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum CSym {
    Term(Term),
    Class(u32),
    Var(u32),
}

struct CRule {
    lhs: u32,
    rhs: Vec<CSym>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Item {
    rule: u32,
    dot: u32,
    origin: u32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MembershipError {
    /// The grammar failed structural validation.
    InvalidGrammar(Vec<Diagnostic>),
    /// The word uses a symbol outside the grammar's terminal alphabet.
    SymbolNotInAlphabet { index: usize, term: Term },
}

impl fmt::Display for MembershipError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipError::InvalidGrammar(ds) => {
                write!(f, "invalid grammar: ")?;
                for (i, d) in ds.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{}", d)?;
                }
                Ok(())
            }
            MembershipError::SymbolNotInAlphabet { index, term } => {
                write!(f, "word symbol {} at index {} is not in the terminal alphabet", term, index)
            }
        }
    }
}

impl std::error::Error for MembershipError {}

/// A grammar compiled for repeated membership queries.
pub struct Recognizer {
    rules: Vec<CRule>,
    rules_by_lhs: Vec<Vec<u32>>,
    nullable: Vec<bool>,
    classes: Vec<TermSet>,
    aug_rule: u32,
    terminals: TermSet,
}

impl Recognizer {
    /// Compile a grammar. Fails when [`Grammar::validate`] reports anything.
    pub fn new(g: &Grammar) -> Result<Recognizer, MembershipError> {
        let diags = g.validate();
        if !diags.is_empty() {
            return Err(MembershipError::InvalidGrammar(diags));
        }
        let nvars = g.var_count();

        // A variable is class-inlinable when every one of its rules is a single
        // terminal. Occurrences in rule bodies become class symbols; the rules
        // themselves stay, so such a variable still works as a start symbol.
        let mut single_only = vec![true; nvars];
        let mut has_rule = vec![false; nvars];
        let mut class_sets = vec![TermSet::new(); nvars];
        for r in g.rules() {
            let v = var_index(r);
            has_rule[v] = true;
            match r.rhs.as_slice() {
                [Symbol::T(t)] => class_sets[v].insert(*t),
                _ => single_only[v] = false,
            }
        }
        let mut class_of = vec![None; nvars];
        let mut classes = Vec::new();
        for v in 0..nvars {
            if single_only[v] && has_rule[v] {
                class_of[v] = Some(classes.len() as u32);
                classes.push(class_sets[v]);
            }
        }

        let mut rules: Vec<CRule> = g
            .rules()
            .iter()
            .map(|r| CRule {
                lhs: var_index(r) as u32,
                rhs: r
                    .rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::T(t) => CSym::Term(*t),
                        Symbol::V(v) => match class_of[v.0 as usize] {
                            Some(c) => CSym::Class(c),
                            None => CSym::Var(v.0),
                        },
                    })
                    .collect(),
            })
            .collect();

        let aug_var = nvars as u32;
        let aug_rule = rules.len() as u32;
        rules.push(CRule { lhs: aug_var, rhs: vec![CSym::Var(g.start().0)] });

        let mut rules_by_lhs = vec![Vec::new(); nvars + 1];
        for (i, r) in rules.iter().enumerate() {
            rules_by_lhs[r.lhs as usize].push(i as u32);
        }

        let mut nullable = vec![false; nvars + 1];
        loop {
            let mut changed = false;
            for r in &rules {
                if nullable[r.lhs as usize] {
                    continue;
                }
                let all_nullable = r.rhs.iter().all(|s| match s {
                    CSym::Var(v) => nullable[*v as usize],
                    _ => false,
                });
                if all_nullable {
                    nullable[r.lhs as usize] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        Ok(Recognizer { rules, rules_by_lhs, nullable, classes, aug_rule, terminals: *g.terminals() })
    }

    /// Membership with the alphabet precondition checked.
    pub fn membership(&self, w: &[Term]) -> Result<bool, MembershipError> {
        for (i, t) in w.iter().enumerate() {
            if !self.terminals.contains(*t) {
                return Err(MembershipError::SymbolNotInAlphabet { index: i, term: *t });
            }
        }
        Ok(self.recognize(w))
    }

    /// Raw chart recognition; symbols outside the alphabet simply never match.
    pub fn recognize(&self, w: &[Term]) -> bool {
        let n = w.len();
        let mut all: Vec<Item> = Vec::with_capacity(64);
        let mut next: Vec<Item> = Vec::new();
        let mut bounds: Vec<usize> = Vec::with_capacity(n + 2);
        let mut seen: HashSet<(u32, u32, u32), FxBuild> = HashSet::default();
        let mut predicted_stamp = vec![0u32; self.rules_by_lhs.len()];
        let mut completed: Vec<(u32, u32)> = Vec::new();

        all.push(Item { rule: self.aug_rule, dot: 0, origin: 0 });
        bounds.push(0);

        for k in 0..=n {
            let stamp = k as u32 + 1;
            seen.clear();
            completed.clear();
            seen.insert((self.aug_rule, 0, 0).into());

            let mut i = bounds[k];
            while i < all.len() {
                let item = all[i];
                i += 1;
                let rhs = &self.rules[item.rule as usize].rhs;
                match rhs.get(item.dot as usize) {
                    None => {
                        let lhs = self.rules[item.rule as usize].lhs;
                        if completed.contains(&(lhs, item.origin)) {
                            continue;
                        }
                        completed.push((lhs, item.origin));
                        let j = item.origin as usize;
                        let end = if j == k { all.len() } else { bounds[j + 1] };
                        for idx in bounds[j]..end {
                            let waiter = all[idx];
                            let wrhs = &self.rules[waiter.rule as usize].rhs;
                            if wrhs.get(waiter.dot as usize) == Some(&CSym::Var(lhs)) {
                                let adv =
                                    Item { rule: waiter.rule, dot: waiter.dot + 1, origin: waiter.origin };
                                if seen.insert((adv.rule, adv.dot, adv.origin)) {
                                    all.push(adv);
                                }
                            }
                        }
                    }
                    Some(CSym::Var(v)) => {
                        let v = *v as usize;
                        if predicted_stamp[v] != stamp {
                            predicted_stamp[v] = stamp;
                            for r in &self.rules_by_lhs[v] {
                                let it = Item { rule: *r, dot: 0, origin: k as u32 };
                                if seen.insert((it.rule, it.dot, it.origin)) {
                                    all.push(it);
                                }
                            }
                        }
                        if self.nullable[v] {
                            let adv = Item { rule: item.rule, dot: item.dot + 1, origin: item.origin };
                            if seen.insert((adv.rule, adv.dot, adv.origin)) {
                                all.push(adv);
                            }
                        }
                    }
                    Some(CSym::Term(t)) => {
                        if k < n && w[k] == *t {
                            next.push(Item { rule: item.rule, dot: item.dot + 1, origin: item.origin });
                        }
                    }
                    Some(CSym::Class(c)) => {
                        if k < n && self.classes[*c as usize].contains(w[k]) {
                            next.push(Item { rule: item.rule, dot: item.dot + 1, origin: item.origin });
                        }
                    }
                }
            }

            if k < n {
                if next.is_empty() {
                    return false;
                }
                bounds.push(all.len());
                all.append(&mut next);
            }
        }

        all[bounds[n]..]
            .iter()
            .any(|it| it.rule == self.aug_rule && it.dot == 1 && it.origin == 0)
    }
}

fn var_index(r: &crate::grammar::Rule) -> usize {
    r.lhs.0 as usize
}

/// One-shot membership: compile and query.
///
/// The word must stay within the grammar's declared alphabet; a foreign symbol
/// is an error, not a rejection.
pub fn cfg_membership(g: &Grammar, w: &[Term]) -> Result<bool, MembershipError> {
    Recognizer::new(g)?.membership(w)
}

/// Membership in an intersection of languages: true exactly when every
/// grammar accepts `w`, short-circuiting on the first rejection. The empty
/// intersection is universal.
pub fn intersect_membership(gs: &[Grammar], w: &[Term]) -> Result<bool, MembershipError> {
    for g in gs {
        if !cfg_membership(g, w)? {
            return Ok(false);
        }
    }
    Ok(true)
}
