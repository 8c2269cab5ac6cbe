//! Boolean composition of membership atoms into verdicts and reports.
//!
//! An atom binds one language (grammar or regex) to one extractor; a
//! constraint is an expression over atom verdicts. Verdicts are tri-state:
//! pass, fail, or skipped for atoms whose extraction was not applicable.
//! Expression evaluation treats skipped as vacuously true inside `And` (and
//! under `Not`) and as false inside `Or`, so inapplicable conditional checks
//! never fail a conjunction and never satisfy a disjunction on their own.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::earley::{MembershipError, Recognizer};
use crate::grammar::{Grammar, Term, TermSet, Word};
use crate::idioms::{self, DigitOrder, LenParams, OrderSpec};
use crate::regex::Regex;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ValidatorExpr {
    True,
    False,
    Atom(String),
    And(Vec<ValidatorExpr>),
    Or(Vec<ValidatorExpr>),
    Not(Box<ValidatorExpr>),
}

impl ValidatorExpr {
    pub fn atom(id: impl Into<String>) -> ValidatorExpr {
        ValidatorExpr::Atom(id.into())
    }

    pub fn not(e: ValidatorExpr) -> ValidatorExpr {
        ValidatorExpr::Not(Box::new(e))
    }

    /// Atom ids referenced anywhere in the tree, in first-occurrence order.
    pub fn atom_ids(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_ids(&mut out);
        out
    }

    fn collect_ids<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ValidatorExpr::True | ValidatorExpr::False => {}
            ValidatorExpr::Atom(id) => {
                if !out.contains(&id.as_str()) {
                    out.push(id);
                }
            }
            ValidatorExpr::And(cs) | ValidatorExpr::Or(cs) => {
                for c in cs {
                    c.collect_ids(out);
                }
            }
            ValidatorExpr::Not(c) => c.collect_ids(out),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictState {
    Pass,
    Fail,
    Skipped,
}

/// Verdict for one atom or one constraint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub id: String,
    pub state: VerdictState,
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(id: impl Into<String>, state: VerdictState) -> Verdict {
        Verdict { id: id.into(), state, note: None }
    }

    pub fn with_note(id: impl Into<String>, state: VerdictState, note: impl Into<String>) -> Verdict {
        Verdict { id: id.into(), state, note: Some(note.into()) }
    }
}

/// Result of running an extractor: the canonical word, or why there is none.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExtractOutcome {
    /// The source the extractor reads is absent; the atom does not apply.
    NotApplicable,
    /// The source exists but cannot be canonicalized.
    Malformed(String),
    Ok(Word),
}

/// The language an atom checks its canonical word against.
pub enum Language {
    Cfg(Recognizer),
    Rx(Regex),
}

impl Language {
    fn matches(&self, w: &[Term]) -> Result<bool, MembershipError> {
        match self {
            Language::Cfg(r) => r.membership(w),
            Language::Rx(r) => Ok(r.is_match(w)),
        }
    }
}

pub struct Atom {
    pub id: String,
    pub language: Language,
    pub extractor: String,
    pub required: bool,
}

/// Evaluate one atom against its extraction outcome.
///
/// Absent input yields skipped (or fail when the atom is required); malformed
/// input and engine errors yield fail with a note.
pub fn eval_atom(a: &Atom, input: &ExtractOutcome) -> Verdict {
    match input {
        ExtractOutcome::NotApplicable => {
            if a.required {
                Verdict::with_note(&a.id, VerdictState::Fail, "required input absent")
            } else {
                Verdict::new(&a.id, VerdictState::Skipped)
            }
        }
        ExtractOutcome::Malformed(msg) => Verdict::with_note(&a.id, VerdictState::Fail, msg.clone()),
        ExtractOutcome::Ok(w) => match a.language.matches(w) {
            Ok(true) => Verdict::new(&a.id, VerdictState::Pass),
            Ok(false) => Verdict::new(&a.id, VerdictState::Fail),
            Err(e) => Verdict::with_note(&a.id, VerdictState::Fail, e.to_string()),
        },
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalError {
    UnresolvedAtom(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnresolvedAtom(id) => write!(f, "expression references unknown atom {:?}", id),
        }
    }
}

impl std::error::Error for EvalError {}

/// Three-valued evaluation; composite nodes collapse skipped at their boundary.
fn eval3(e: &ValidatorExpr, verdicts: &HashMap<String, VerdictState>) -> Result<VerdictState, EvalError> {
    use VerdictState::*;
    Ok(match e {
        ValidatorExpr::True => Pass,
        ValidatorExpr::False => Fail,
        ValidatorExpr::Atom(id) => {
            *verdicts.get(id).ok_or_else(|| EvalError::UnresolvedAtom(id.clone()))?
        }
        ValidatorExpr::And(cs) => {
            let mut r = Pass;
            for c in cs {
                // Skipped counts as true inside a conjunction.
                if eval3(c, verdicts)? == Fail {
                    r = Fail;
                }
            }
            r
        }
        ValidatorExpr::Or(cs) => {
            let mut r = Fail;
            for c in cs {
                // Skipped counts as false inside a disjunction.
                if eval3(c, verdicts)? == Pass {
                    r = Pass;
                }
            }
            r
        }
        ValidatorExpr::Not(c) => match eval3(c, verdicts)? {
            Pass => Fail,
            // Not(skipped) is true: a skipped check never fails a conjunction.
            Fail | Skipped => Pass,
        },
    })
}

/// Boolean evaluation under the tri-state convention; a bare skipped atom at
/// the root counts as true, matching the conjunction context it sits in.
pub fn eval_expr(e: &ValidatorExpr, verdicts: &HashMap<String, VerdictState>) -> Result<bool, EvalError> {
    Ok(eval3(e, verdicts)? != VerdictState::Fail)
}

/// Like [`eval_expr`] but without the final collapse: a bare atom reference
/// keeps its skipped state. Composite nodes still collapse skipped children
/// at their own boundaries.
pub fn eval_expr_state(
    e: &ValidatorExpr,
    verdicts: &HashMap<String, VerdictState>,
) -> Result<VerdictState, EvalError> {
    eval3(e, verdicts)
}

// ---- reports ----

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomReport {
    pub id: String,
    pub verdict: VerdictState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub id: String,
    pub description: String,
    pub verdict: VerdictState,
    pub atoms: Vec<AtomReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub overall: Overall,
    pub constraints: Vec<ConstraintReport>,
    pub timing_ms: f64,
}

// ---- profile documents ----

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtomDoc {
    pub id: String,
    pub kind: String,
    pub language_path: String,
    pub extractor: String,
    #[serde(default)]
    pub required: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintDoc {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub atoms: Vec<String>,
    pub expr: ExprDoc,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExprDoc {
    Bool(bool),
    Atom { atom: String },
    And { and: Vec<ExprDoc> },
    Or { or: Vec<ExprDoc> },
    Not { not: Box<ExprDoc> },
}

impl ExprDoc {
    pub fn to_expr(&self) -> ValidatorExpr {
        match self {
            ExprDoc::Bool(true) => ValidatorExpr::True,
            ExprDoc::Bool(false) => ValidatorExpr::False,
            ExprDoc::Atom { atom } => ValidatorExpr::Atom(atom.clone()),
            ExprDoc::And { and } => ValidatorExpr::And(and.iter().map(ExprDoc::to_expr).collect()),
            ExprDoc::Or { or } => ValidatorExpr::Or(or.iter().map(ExprDoc::to_expr).collect()),
            ExprDoc::Not { not } => ValidatorExpr::not(not.to_expr()),
        }
    }

    pub fn from_expr(e: &ValidatorExpr) -> ExprDoc {
        match e {
            ValidatorExpr::True => ExprDoc::Bool(true),
            ValidatorExpr::False => ExprDoc::Bool(false),
            ValidatorExpr::Atom(id) => ExprDoc::Atom { atom: id.clone() },
            ValidatorExpr::And(cs) => ExprDoc::And { and: cs.iter().map(ExprDoc::from_expr).collect() },
            ValidatorExpr::Or(cs) => ExprDoc::Or { or: cs.iter().map(ExprDoc::from_expr).collect() },
            ValidatorExpr::Not(c) => ExprDoc::Not { not: Box::new(ExprDoc::from_expr(c)) },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub atoms: Vec<AtomDoc>,
    pub expr: ExprDoc,
    #[serde(default)]
    pub meta: Vec<ConstraintDoc>,
}

pub struct ConstraintMeta {
    pub id: String,
    pub description: String,
    pub atom_ids: Vec<String>,
    pub expr: ValidatorExpr,
}

/// A fully resolved profile: compiled atoms, root expression, constraint rows.
pub struct Profile {
    pub atoms: Vec<Atom>,
    pub root: ValidatorExpr,
    pub constraints: Vec<ConstraintMeta>,
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Profile({} atoms, {} constraints)", self.atoms.len(), self.constraints.len())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProfileIssue(pub String);

impl fmt::Display for ProfileIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Load and resolve a profile document.
///
/// `language_path` values are file paths relative to `base_dir`, or `gen:`
/// URLs that invoke the idiom generators directly (see [`resolve_gen_url`]).
/// `known_extractors` is the id set the evaluation engine can serve; every
/// atom must reference one of them. Constraint rows in `meta` must partition
/// the atom set: each atom appears in exactly one row (zero rows means no
/// constraint reporting, which is only sensible for throwaway profiles).
pub fn load_profile(
    doc: &ProfileDoc,
    base_dir: &Path,
    known_extractors: &[&str],
) -> Result<Profile, Vec<ProfileIssue>> {
    let mut issues = Vec::new();
    let mut atoms = Vec::new();
    let mut ids: Vec<&str> = Vec::new();

    for a in &doc.atoms {
        if ids.contains(&a.id.as_str()) {
            issues.push(ProfileIssue(format!("duplicate atom id {:?}", a.id)));
        }
        ids.push(&a.id);
        if !known_extractors.contains(&a.extractor.as_str()) {
            issues.push(ProfileIssue(format!(
                "atom {:?} references unknown extractor {:?}",
                a.id, a.extractor
            )));
        }
        let language = match a.kind.as_str() {
            "cfg" => load_cfg_language(&a.language_path, base_dir)
                .map(Language::Cfg)
                .map_err(|e| format!("atom {:?}: {}", a.id, e)),
            "regex" => load_regex_language(&a.language_path, base_dir)
                .map(Language::Rx)
                .map_err(|e| format!("atom {:?}: {}", a.id, e)),
            other => Err(format!("atom {:?}: unknown kind {:?}", a.id, other)),
        };
        match language {
            Ok(language) => atoms.push(Atom {
                id: a.id.clone(),
                language,
                extractor: a.extractor.clone(),
                required: a.required,
            }),
            Err(msg) => issues.push(ProfileIssue(msg)),
        }
    }

    let root = doc.expr.to_expr();
    for id in root.atom_ids() {
        if !ids.contains(&id) {
            issues.push(ProfileIssue(format!("root expression references unknown atom {:?}", id)));
        }
    }

    let mut assigned: HashMap<&str, &str> = HashMap::new();
    let mut constraints = Vec::new();
    for c in &doc.meta {
        let expr = c.expr.to_expr();
        for id in expr.atom_ids() {
            if !c.atoms.iter().any(|a| a == id) {
                issues.push(ProfileIssue(format!(
                    "constraint {:?} expression uses atom {:?} outside its atom list",
                    c.id, id
                )));
            }
        }
        for a in &c.atoms {
            if !ids.contains(&a.as_str()) {
                issues.push(ProfileIssue(format!(
                    "constraint {:?} references unknown atom {:?}",
                    c.id, a
                )));
            }
            if let Some(prev) = assigned.insert(a, &c.id) {
                issues.push(ProfileIssue(format!(
                    "atom {:?} assigned to both constraints {:?} and {:?}",
                    a, prev, c.id
                )));
            }
        }
        constraints.push(ConstraintMeta {
            id: c.id.clone(),
            description: c.description.clone(),
            atom_ids: c.atoms.clone(),
            expr,
        });
    }
    if !doc.meta.is_empty() {
        for id in &ids {
            if !assigned.contains_key(id) {
                issues.push(ProfileIssue(format!("atom {:?} not assigned to any constraint", id)));
            }
        }
    }

    if issues.is_empty() {
        Ok(Profile { atoms, root, constraints })
    } else {
        Err(issues)
    }
}

fn load_cfg_language(path: &str, base_dir: &Path) -> Result<Recognizer, String> {
    let g = if let Some(url) = path.strip_prefix("gen:") {
        resolve_gen_url(url)?
    } else {
        let full = base_dir.join(path);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| format!("cannot read grammar {:?}: {}", full, e))?;
        Grammar::parse_text(&text).map_err(|e| format!("grammar {:?}: {}", full, e))?
    };
    Recognizer::new(&g).map_err(|e| format!("grammar {:?}: {}", path, e))
}

fn load_regex_language(path: &str, base_dir: &Path) -> Result<Regex, String> {
    let full = base_dir.join(path);
    let text = std::fs::read_to_string(&full)
        .map_err(|e| format!("cannot read regex {:?}: {}", full, e))?;
    let pattern = text
        .lines()
        .map(str::trim_end)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| format!("regex file {:?} has no pattern line", full))?;
    Regex::parse(pattern).map_err(|e| format!("regex {:?}: {}", full, e))
}

/// Resolve a `gen:` language URL (the part after the scheme prefix).
///
/// Forms: `len?n=80&base=10&body=dot[&order=msd][&delim=sharp]`,
/// `chunk?n=8&base=16&body=dot`, `eq?n=29&i=7&sigma=date`,
/// `leq?n=14&i=3&sigma=digits`. Alphabets: `digits`, `date`, `upgrade`,
/// `lit:<chars>`; the `leq` order is the listed symbol order.
pub fn resolve_gen_url(url: &str) -> Result<Grammar, String> {
    let (kind, query) = url.split_once('?').unwrap_or((url, ""));
    let mut params: HashMap<&str, &str> = HashMap::new();
    for pair in query.split('&').filter(|p| !p.is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| format!("bad gen parameter {:?}", pair))?;
        params.insert(k, v);
    }
    let need = |k: &str| -> Result<&str, String> {
        params.get(k).copied().ok_or_else(|| format!("gen:{} needs parameter {:?}", kind, k))
    };
    let num = |k: &str| -> Result<usize, String> {
        need(k)?.parse::<usize>().map_err(|_| format!("gen parameter {:?} is not a number", k))
    };

    let result = match kind {
        "len" | "chunk" => {
            let body = match need("body")? {
                "dot" => [Term::DOT].into_iter().collect::<TermSet>(),
                other => match other.strip_prefix("lit:") {
                    Some(chars) => chars.bytes().map(Term::byte).collect(),
                    None => return Err(format!("unknown body alphabet {:?}", other)),
                },
            };
            let order = match params.get("order").copied().unwrap_or("lsd") {
                "lsd" => DigitOrder::LsdFirst,
                "msd" => DigitOrder::MsdFirst,
                other => return Err(format!("unknown digit order {:?}", other)),
            };
            let delimiter = if kind == "chunk" || params.get("delim").copied() == Some("sharp") {
                Some(Term::SHARP)
            } else {
                None
            };
            let p = LenParams { n: num("n")?, base: num("base")?, body, order, delimiter };
            if kind == "len" {
                idioms::gen_len(&p)
            } else {
                idioms::gen_chunk(&p)
            }
            .map_err(|e| e.to_string())?
        }
        "eq" => {
            let sigma = named_alphabet(need("sigma")?)?;
            idioms::gen_eq_component(num("n")?, num("i")?, &sigma).map_err(|e| e.to_string())?
        }
        "leq" => {
            let ord = OrderSpec::new(ordered_alphabet(need("sigma")?)?).map_err(|e| e.to_string())?;
            idioms::gen_leq_component(num("n")?, num("i")?, &ord).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown gen kind {:?}", other)),
    };
    Ok(result)
}

fn ordered_alphabet(name: &str) -> Result<Vec<Term>, String> {
    if let Some(chars) = name.strip_prefix("lit:") {
        return Ok(chars.bytes().map(Term::byte).collect());
    }
    match name {
        "digits" => Ok((b'0'..=b'9').map(Term::byte).collect()),
        "date" => {
            // RFC 1123 date characters: digits, letters, space, comma, colon.
            let mut v: Vec<Term> = (b'0'..=b'9').map(Term::byte).collect();
            v.extend((b'A'..=b'Z').map(Term::byte));
            v.extend((b'a'..=b'z').map(Term::byte));
            v.extend([b' ', b',', b':'].map(Term::byte));
            Ok(v)
        }
        "upgrade" => {
            // Token characters plus '/' for protocol versions, plus the
            // reserved pad filler for width alignment.
            let mut v: Vec<Term> = Vec::new();
            for b in 0x21..=0x7eu8 {
                if is_tchar(b) || b == b'/' {
                    v.push(Term::byte(b));
                }
            }
            v.push(Term::DOT);
            Ok(v)
        }
        other => Err(format!("unknown alphabet {:?}", other)),
    }
}

fn named_alphabet(name: &str) -> Result<TermSet, String> {
    Ok(ordered_alphabet(name)?.into_iter().collect())
}

pub(crate) fn is_tchar(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b"!#$%&'*+-.^_`|~".contains(&b)
}
