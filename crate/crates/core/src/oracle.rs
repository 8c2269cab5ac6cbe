//! Independent reference definitions and exhaustive comparison harness.
//!
//! Every language family the generators produce also has a direct
//! implementation here, written straight from the language definition with
//! no grammar machinery involved. The harness enumerates all words over a
//! family's alphabet up to a length bound and compares the generated
//! grammar (or validator) against the direct definition, so a bug in either
//! route shows up as a counterexample. Enumeration is in shortlex order, so
//! a reported counterexample is the least disagreement.

use std::fmt;

use crate::earley::Recognizer;
use crate::grammar::{Grammar, Term, TermSet, Word};
use crate::idioms::{
    digit_value, CompiledValidator, DigitOrder, GeneralEqParams, LanguageValidator, LenParams,
    OrderSpec,
};

/// A language family instance, described by parameters alone.
pub enum IdiomSpec {
    Len(LenParams),
    Chunk(LenParams),
    /// Both halves equal: `xy` with `x = y`, each of width `n`.
    Eq { n: usize, sigma: TermSet },
    /// Halves agree at one position (1-based `i`).
    EqComponent { n: usize, i: usize, sigma: TermSet },
    /// First half less-or-equal second half as equal-width words.
    Leq { n: usize, ord: OrderSpec },
    /// Halves ordered at one position (1-based `i`).
    LeqComponent { n: usize, i: usize, ord: OrderSpec },
    /// All blocks of the filler-separated layout equal; fillers are single
    /// fixed words here so the definition stays direct.
    GeneralEq { n: usize, sigma: TermSet, first: Word, middle: Word, last: Word },
    /// All blocks carry symbol `c` at position `i`.
    GeneralEqComponent {
        n: usize,
        sigma: TermSet,
        first: Word,
        middle: Word,
        last: Word,
        i: usize,
        c: Term,
    },
}

impl IdiomSpec {
    /// The alphabet member words are drawn from; enumeration uses this.
    pub fn alphabet(&self) -> TermSet {
        match self {
            IdiomSpec::Len(p) | IdiomSpec::Chunk(p) => p.alphabet(),
            IdiomSpec::Eq { sigma, .. } | IdiomSpec::EqComponent { sigma, .. } => sigma.clone(),
            IdiomSpec::Leq { ord, .. } | IdiomSpec::LeqComponent { ord, .. } => ord.set(),
            IdiomSpec::GeneralEq { sigma, first, middle, last, .. }
            | IdiomSpec::GeneralEqComponent { sigma, first, middle, last, .. } => {
                let mut s = sigma.clone();
                for t in first.iter().chain(middle).chain(last) {
                    s.insert(*t);
                }
                s
            }
        }
    }
}

/// Direct membership test, straight from the language definition.
pub fn oracle_membership(spec: &IdiomSpec, w: &[Term]) -> bool {
    match spec {
        IdiomSpec::Len(p) => len_member(p, w),
        IdiomSpec::Chunk(p) => chunk_member(p, w),
        IdiomSpec::Eq { n, sigma } => {
            halves(*n, sigma, w).is_some_and(|(x, y)| x == y)
        }
        IdiomSpec::EqComponent { n, i, sigma } => {
            halves(*n, sigma, w).is_some_and(|(x, y)| x[i - 1] == y[i - 1])
        }
        IdiomSpec::Leq { n, ord } => halves(*n, &ord.set(), w).is_some_and(|(x, y)| {
            // Equal widths, so the padded comparison is plain positionwise
            // lexicographic comparison of ranks.
            for (a, b) in x.iter().zip(y.iter()) {
                let (ra, rb) = (ord.rank(*a).unwrap(), ord.rank(*b).unwrap());
                if ra != rb {
                    return ra < rb;
                }
            }
            true
        }),
        IdiomSpec::LeqComponent { n, i, ord } => halves(*n, &ord.set(), w)
            .is_some_and(|(x, y)| ord.rank(x[i - 1]).unwrap() <= ord.rank(y[i - 1]).unwrap()),
        IdiomSpec::GeneralEq { n, sigma, first, middle, last } => {
            blocks(*n, sigma, first, middle, last, w)
                .is_some_and(|bs| bs.windows(2).all(|p| p[0] == p[1]))
        }
        IdiomSpec::GeneralEqComponent { n, sigma, first, middle, last, i, c } => {
            blocks(*n, sigma, first, middle, last, w)
                .is_some_and(|bs| bs.iter().all(|b| b[i - 1] == *c))
        }
    }
}

fn len_member(p: &LenParams, w: &[Term]) -> bool {
    if w.len() < p.n {
        return false;
    }
    let (block, rest) = w.split_at(p.n);
    let body = match p.delimiter {
        Some(d) => match rest.split_first() {
            Some((&first, tail)) if first == d => tail,
            _ => return false,
        },
        None => rest,
    };
    let mut value: u128 = 0;
    for (pos, &t) in block.iter().enumerate() {
        let Some(v) = digit_value(t, p.base) else { return false };
        let weight = match p.order {
            DigitOrder::LsdFirst => pos,
            DigitOrder::MsdFirst => p.n - 1 - pos,
        };
        value += (v as u128) * (p.base as u128).pow(weight as u32);
    }
    body.iter().all(|t| p.body.contains(*t)) && body.len() as u128 == value
}

fn chunk_member(p: &LenParams, w: &[Term]) -> bool {
    let Some(d) = p.delimiter else { return false };
    if w.last() != Some(&d) {
        return false;
    }
    let inner = LenParams { delimiter: None, ..p.clone() };
    // Trailing delimiter, so split yields the chunks plus one empty tail.
    let parts: Vec<&[Term]> = w.split(|t| *t == d).collect();
    parts[..parts.len() - 1].iter().all(|seg| len_member(&inner, seg))
}

fn halves<'a>(n: usize, sigma: &TermSet, w: &'a [Term]) -> Option<(&'a [Term], &'a [Term])> {
    if w.len() != 2 * n || w.iter().any(|t| !sigma.contains(*t)) {
        return None;
    }
    Some(w.split_at(n))
}

/// Split a filler-separated layout into its blocks, if the word has one.
/// Layout: block, first-filler, then `k >= 0` repetitions of block plus
/// middle-filler, then block, last-filler. Block count and positions are
/// forced by the total length.
fn blocks<'a>(
    n: usize,
    sigma: &TermSet,
    first: &[Term],
    middle: &[Term],
    last: &[Term],
    w: &'a [Term],
) -> Option<Vec<&'a [Term]>> {
    let fixed = 2 * n + first.len() + last.len();
    if w.len() < fixed {
        return None;
    }
    let per = n + middle.len();
    let rem = w.len() - fixed;
    if rem % per != 0 {
        return None;
    }
    let k = rem / per;
    let mut out = Vec::with_capacity(k + 2);
    let mut pos = 0;
    let take_block = |pos: &mut usize, out: &mut Vec<&'a [Term]>| -> bool {
        let b = &w[*pos..*pos + n];
        *pos += n;
        if b.iter().any(|t| !sigma.contains(*t)) {
            return false;
        }
        out.push(b);
        true
    };
    let expect = |pos: &mut usize, word: &[Term]| -> bool {
        let ok = &w[*pos..*pos + word.len()] == word;
        *pos += word.len();
        ok
    };
    if !take_block(&mut pos, &mut out) || !expect(&mut pos, first) {
        return None;
    }
    for _ in 0..k {
        if !take_block(&mut pos, &mut out) || !expect(&mut pos, middle) {
            return None;
        }
    }
    if !take_block(&mut pos, &mut out) || !expect(&mut pos, last) {
        return None;
    }
    debug_assert_eq!(pos, w.len());
    Some(out)
}

// ---- exhaustive comparison ----

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// The implementation under test: a single grammar or a validator.
pub enum EquivTarget {
    Grammar(Grammar),
    Validator(LanguageValidator),
}

enum CompiledTarget {
    G(Recognizer),
    V(CompiledValidator),
}

impl CompiledTarget {
    fn accepts(&self, w: &[Term]) -> bool {
        match self {
            CompiledTarget::G(r) => r.membership(w).unwrap_or(false),
            CompiledTarget::V(v) => v.accepts(w),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivReport {
    pub agree: bool,
    /// Least disagreement in shortlex order, if any.
    pub counterexample: Option<Word>,
    pub words_checked: u64,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleError {
    BudgetExceeded { needed: u128, budget: u64 },
    Target(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::BudgetExceeded { needed, budget } => write!(
                f,
                "enumeration would visit {} words, over the budget of {}",
                needed, budget
            ),
            OracleError::Target(msg) => write!(f, "cannot compile comparison target: {}", msg),
        }
    }
}

impl std::error::Error for OracleError {}

/// Number of words over an alphabet of the given size with length at most
/// `max_len`.
pub fn words_up_to(alphabet_size: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut pow: u128 = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(alphabet_size as u128);
    }
    total
}

/// Largest length bound not above `desired` whose enumeration fits the
/// budget. Length 0 always fits.
pub fn max_len_within_budget(alphabet_size: usize, desired: usize, budget: u64) -> usize {
    let mut best = 0;
    for l in 0..=desired {
        if words_up_to(alphabet_size, l) <= budget as u128 {
            best = l;
        }
    }
    best
}

/// Enumerate every word over the family's alphabet up to `max_len` in
/// shortlex order and compare the direct definition against the target. A
/// disagreement stops the run; `words_checked` then counts through the
/// counterexample.
pub fn exhaustive_equiv(
    spec: &IdiomSpec,
    target: &EquivTarget,
    max_len: usize,
    budget: u64,
) -> Result<EquivReport, OracleError> {
    let alpha: Vec<Term> = spec.alphabet().iter().collect();
    let needed = words_up_to(alpha.len(), max_len);
    if needed > budget as u128 {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }
    let target = match target {
        EquivTarget::Grammar(g) => {
            CompiledTarget::G(Recognizer::new(g).map_err(|e| OracleError::Target(e.to_string()))?)
        }
        EquivTarget::Validator(v) => {
            CompiledTarget::V(v.compile().map_err(|e| OracleError::Target(e.to_string()))?)
        }
    };

    let mut checked: u64 = 0;
    for len in 0..=max_len {
        if len > 0 && alpha.is_empty() {
            break;
        }
        // Odometer over symbol indices; alphabet order is ascending, so
        // words of one length come out lexicographically.
        let mut idx = vec![0usize; len];
        let mut word: Word = vec![alpha.first().copied().unwrap_or(Term::SHARP); len];
        loop {
            checked += 1;
            let expect = oracle_membership(spec, &word);
            let got = target.accepts(&word);
            if expect != got {
                return Ok(EquivReport {
                    agree: false,
                    counterexample: Some(word.clone()),
                    words_checked: checked,
                });
            }
            if !advance(&mut idx, &mut word, &alpha) {
                break;
            }
        }
    }
    Ok(EquivReport { agree: true, counterexample: None, words_checked: checked })
}

/// Step the rightmost position; returns false once the odometer wraps.
fn advance(idx: &mut [usize], word: &mut [Term], alpha: &[Term]) -> bool {
    for p in (0..idx.len()).rev() {
        idx[p] += 1;
        if idx[p] < alpha.len() {
            word[p] = alpha[idx[p]];
            return true;
        }
        idx[p] = 0;
        word[p] = alpha[0];
    }
    false
}

// ---- residual counting ----

/// Count the distinct residual languages of the length-prescribing language
/// after exactly `n` digits have been read, by probing each digit block with
/// every candidate continuation length. For an `n`-digit block in base `b`
/// the continuations worth distinguishing are bodies of length up to
/// `b^n - 1`, so blocks are probed with all lengths through `b^n`.
pub fn residual_count(p: &LenParams) -> Result<u64, OracleError> {
    let spec_probe_limit = (p.base as u128).checked_pow(p.n as u32);
    let Some(limit) = spec_probe_limit.filter(|l| *l <= 1 << 16) else {
        return Err(OracleError::BudgetExceeded {
            needed: spec_probe_limit.unwrap_or(u128::MAX),
            budget: 1 << 16,
        });
    };
    let limit = limit as usize;
    let body_sym = p.body.iter().next().expect("body alphabet is nonempty");
    let spec = IdiomSpec::Len(p.clone());

    let mut signatures: Vec<Vec<bool>> = Vec::new();
    let mut block = vec![0usize; p.n];
    loop {
        let mut prefix: Word = block.iter().map(|&d| crate::idioms::digit_term(d)).collect();
        if let Some(d) = p.delimiter {
            prefix.push(d);
        }
        let mut sig = Vec::with_capacity(limit + 1);
        let mut w = prefix.clone();
        for l in 0..=limit {
            if l > 0 {
                w.push(body_sym);
            }
            sig.push(oracle_membership(&spec, &w));
        }
        if !signatures.contains(&sig) {
            signatures.push(sig);
        }
        // Next digit block.
        let mut pos = p.n;
        loop {
            if pos == 0 {
                return Ok(signatures.len() as u64);
            }
            pos -= 1;
            if block[pos] + 1 < p.base {
                block[pos] += 1;
                break;
            }
            block[pos] = 0;
        }
    }
}

// ---- the standard comparison matrix ----

pub struct MatrixEntry {
    pub name: String,
    pub spec: IdiomSpec,
    pub target: EquivTarget,
    /// Desired bound; the runner may lower it to fit the budget.
    pub max_len: usize,
}

pub struct MatrixOutcome {
    pub name: String,
    pub max_len_used: usize,
    pub report: EquivReport,
}

/// Run one entry, lowering the length bound to the largest that fits.
pub fn run_entry(e: &MatrixEntry, budget: u64) -> Result<MatrixOutcome, OracleError> {
    let alpha = e.spec.alphabet().len();
    let max_len = max_len_within_budget(alpha, e.max_len, budget);
    let report = exhaustive_equiv(&e.spec, &e.target, max_len, budget)?;
    Ok(MatrixOutcome { name: e.name.clone(), max_len_used: max_len, report })
}

/// The cross-family comparison matrix: every generator family at small
/// parameters, components and validators both, with length bounds of
/// `2n + 6`.
pub fn standard_matrix() -> Vec<MatrixEntry> {
    use crate::idioms as x;
    let mut out: Vec<MatrixEntry> = Vec::new();
    let aset = |bytes: &[u8]| -> TermSet { bytes.iter().map(|b| Term::byte(*b)).collect() };

    for base in [2usize, 3] {
        for n in 1..=3usize {
            let p = LenParams::new(n, base, aset(b"a"));
            out.push(MatrixEntry {
                name: format!("len-n{}-b{}", n, base),
                spec: IdiomSpec::Len(p.clone()),
                target: EquivTarget::Grammar(x::gen_len(&p).unwrap()),
                max_len: 2 * n + 6,
            });
        }
    }
    let pd = LenParams::new(2, 2, aset(b"a")).with_delimiter(Term::SHARP);
    out.push(MatrixEntry {
        name: "len-delim-n2-b2".into(),
        spec: IdiomSpec::Len(pd.clone()),
        target: EquivTarget::Grammar(x::gen_len(&pd).unwrap()),
        max_len: 10,
    });
    let pm = LenParams::new(2, 2, aset(b"a")).with_order(DigitOrder::MsdFirst);
    out.push(MatrixEntry {
        name: "len-msd-n2-b2".into(),
        spec: IdiomSpec::Len(pm.clone()),
        target: EquivTarget::Grammar(x::gen_len(&pm).unwrap()),
        max_len: 10,
    });
    for n in 1..=2usize {
        let p = LenParams::new(n, 2, aset(b"a")).with_delimiter(Term::SHARP);
        out.push(MatrixEntry {
            name: format!("chunk-n{}-b2", n),
            spec: IdiomSpec::Chunk(p.clone()),
            target: EquivTarget::Grammar(x::gen_chunk(&p).unwrap()),
            max_len: 2 * n + 6,
        });
    }

    for sigma in [aset(b"ab"), aset(b"abc")] {
        let tag = sigma.len();
        for n in 1..=3usize {
            if n <= 2 {
                for i in 1..=n {
                    out.push(MatrixEntry {
                        name: format!("eq-n{}-s{}-i{}", n, tag, i),
                        spec: IdiomSpec::EqComponent { n, i, sigma: sigma.clone() },
                        target: EquivTarget::Grammar(
                            x::gen_eq_component(n, i, &sigma).unwrap(),
                        ),
                        max_len: 2 * n + 6,
                    });
                }
            }
            out.push(MatrixEntry {
                name: format!("eq-n{}-s{}-validator", n, tag),
                spec: IdiomSpec::Eq { n, sigma: sigma.clone() },
                target: EquivTarget::Validator(x::eq_validator(n, &sigma).unwrap()),
                max_len: 2 * n + 6,
            });
        }
    }

    let ord = OrderSpec::digits(3);
    for n in 1..=3usize {
        if n <= 2 {
            for i in 1..=n {
                out.push(MatrixEntry {
                    name: format!("leq-n{}-i{}", n, i),
                    spec: IdiomSpec::LeqComponent { n, i, ord: ord.clone() },
                    target: EquivTarget::Grammar(x::gen_leq_component(n, i, &ord).unwrap()),
                    max_len: 2 * n + 6,
                });
            }
        }
        out.push(MatrixEntry {
            name: format!("leq-n{}-validator", n),
            spec: IdiomSpec::Leq { n, ord: ord.clone() },
            target: EquivTarget::Validator(x::leq_validator(n, &ord).unwrap()),
            max_len: 2 * n + 6,
        });
    }

    let word = |s: &[u8]| -> Word { s.iter().map(|b| Term::byte(*b)).collect() };
    for (tag, f, m, l) in [("empty", &b""[..], &b""[..], &b""[..]), ("sep", b"+", b"-", b"!")] {
        for n in 1..=2usize {
            let params = GeneralEqParams {
                n,
                sigma: aset(b"ab"),
                first: x::word_grammar(&word(f)),
                middle: x::word_grammar(&word(m)),
                last: x::word_grammar(&word(l)),
            };
            out.push(MatrixEntry {
                name: format!("general-eq-n{}-{}", n, tag),
                spec: IdiomSpec::GeneralEq {
                    n,
                    sigma: aset(b"ab"),
                    first: word(f),
                    middle: word(m),
                    last: word(l),
                },
                target: EquivTarget::Validator(x::general_eq_validator(&params).unwrap()),
                max_len: 2 * n + 6,
            });
            if n == 1 {
                out.push(MatrixEntry {
                    name: format!("general-eq-n{}-{}-i1-a", n, tag),
                    spec: IdiomSpec::GeneralEqComponent {
                        n,
                        sigma: aset(b"ab"),
                        first: word(f),
                        middle: word(m),
                        last: word(l),
                        i: 1,
                        c: Term::byte(b'a'),
                    },
                    target: EquivTarget::Grammar(
                        x::gen_general_eq_component(&params, 1, Term::byte(b'a')).unwrap(),
                    ),
                    max_len: 8,
                });
            }
        }
    }

    out
}
