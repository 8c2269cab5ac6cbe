//! Generators for the grammar idioms the validator toolkit is built from.
//!
//! Each generator emits a small context-free grammar (or a boolean
//! combination of grammars) for a family of languages that ordinary
//! protocol-validation tasks keep needing: digit blocks whose numeric value
//! prescribes the length of the body that follows, repeated chunks of that
//! shape, positionwise equality of two fixed-width fields, digitwise ordering
//! of two fixed-width fields, and equality of every repeated block in a
//! filler-separated sequence. The constructions stay deliberately small; the
//! exact rule counts are part of the public contract and are asserted by the
//! tests.

use std::fmt;

use crate::composer::ValidatorExpr;
use crate::earley::{MembershipError, Recognizer};
use crate::grammar::{Grammar, Symbol, Term, TermSet, VarId, Word};

/// Which end of the digit block carries the least significant digit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DigitOrder {
    LsdFirst,
    MsdFirst,
}

/// Parameters for the length-prescribing languages.
///
/// A member word is an `n`-digit block in the given base followed by a body
/// over `body` whose length equals the numeric value of the block (least
/// significant digit first by default). With a `delimiter`, the block and the
/// body are separated by that symbol, which must not occur among the digits
/// or the body alphabet.
#[derive(Clone, Debug)]
pub struct LenParams {
    pub n: usize,
    pub base: usize,
    pub body: TermSet,
    pub order: DigitOrder,
    pub delimiter: Option<Term>,
}

impl LenParams {
    pub fn new(n: usize, base: usize, body: TermSet) -> LenParams {
        LenParams { n, base, body, order: DigitOrder::LsdFirst, delimiter: None }
    }

    pub fn with_delimiter(mut self, d: Term) -> LenParams {
        self.delimiter = Some(d);
        self
    }

    pub fn with_order(mut self, order: DigitOrder) -> LenParams {
        self.order = order;
        self
    }

    /// Digit terminals for this base, value order.
    pub fn digits(&self) -> Vec<Term> {
        (0..self.base).map(digit_term).collect()
    }

    /// All symbols a member word may contain.
    pub fn alphabet(&self) -> TermSet {
        let mut s: TermSet = self.digits().into_iter().collect();
        for t in self.body.iter() {
            s.insert(t);
        }
        if let Some(d) = self.delimiter {
            s.insert(d);
        }
        s
    }

    fn check(&self) -> Result<(), IdiomError> {
        if self.n == 0 {
            return Err(IdiomError::InvalidParams("digit block width must be at least 1".into()));
        }
        if !(2..=16).contains(&self.base) {
            return Err(IdiomError::InvalidParams("base must be between 2 and 16".into()));
        }
        if self.body.is_empty() {
            return Err(IdiomError::InvalidParams("body alphabet must be nonempty".into()));
        }
        if let Some(d) = self.delimiter {
            if self.body.contains(d) || (0..self.base).any(|v| digit_term(v) == d) {
                return Err(IdiomError::InvalidParams(format!(
                    "delimiter {} collides with a digit or body symbol",
                    d
                )));
            }
        }
        Ok(())
    }
}

/// Terminal used for digit value `d` (0..16): '0'..'9' then 'a'..'f'.
pub fn digit_term(d: usize) -> Term {
    Term::byte(b"0123456789abcdef"[d])
}

/// Numeric value of a digit terminal under the given base, if it is one.
pub fn digit_value(t: Term, base: usize) -> Option<usize> {
    (0..base).find(|&v| digit_term(v) == t)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IdiomError {
    InvalidParams(String),
    PositionOutOfRange { i: usize, n: usize },
    MissingDelimiter,
    SymbolOutsideOrder(Term),
    InvalidEmbedded(String),
}

impl fmt::Display for IdiomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdiomError::InvalidParams(msg) => write!(f, "invalid parameters: {}", msg),
            IdiomError::PositionOutOfRange { i, n } => {
                write!(f, "position {} is out of range 1..={}", i, n)
            }
            IdiomError::MissingDelimiter => write!(f, "this generator needs a delimiter symbol"),
            IdiomError::SymbolOutsideOrder(t) => {
                write!(f, "symbol {} is not in the comparison order", t)
            }
            IdiomError::InvalidEmbedded(msg) => write!(f, "embedded grammar is invalid: {}", msg),
        }
    }
}

impl std::error::Error for IdiomError {}

/// Stable short tag for a terminal, used in variable and atom names.
fn sym_tag(t: Term) -> String {
    match t.as_byte() {
        Some(b) if b.is_ascii_alphanumeric() => (b as char).to_string(),
        _ => format!("x{}", t.index()),
    }
}

// ---- length-prescribing languages ----

/// Grammar for the language of digit blocks followed by a body of the
/// prescribed length.
///
/// Construction: a start rule enters a chain `X0..Xn` that reads one digit
/// per step; reading digit `d` at a position of weight `base^k` also emits
/// `d` copies of a filler variable `Fk`, and `Fj` expands to `base` copies of
/// `F(j-1)` down to `F0`, which yields one body symbol. The body therefore
/// has exactly the block's numeric value as its length. In base 2 the chain
/// ends through a separate terminator variable `E`; in larger bases the chain
/// end carries the terminator directly. Rule counts are part of the
/// contract: base 2 has `3n + 2 + |body|` rules and size `10n + 2 + 2|body|`
/// (one more symbol with a delimiter); base `b >= 3` has
/// `b*n + n + 1 + |body|` rules.
pub fn gen_len(p: &LenParams) -> Result<Grammar, IdiomError> {
    p.check()?;
    let mut g = Grammar::new("S");
    let s = g.start();
    let x: Vec<VarId> = (0..=p.n).map(|i| g.var(&format!("X{}", i))).collect();
    let f: Vec<VarId> = (0..p.n).map(|j| g.var(&format!("F{}", j))).collect();

    for v in 0..p.base {
        g.declare_terminal(digit_term(v));
    }
    for t in p.body.iter() {
        g.declare_terminal(t);
    }
    if let Some(d) = p.delimiter {
        g.declare_terminal(d);
    }

    g.add_rule(s, vec![Symbol::V(x[0])]);
    for i in 0..p.n {
        // Weight of the digit read at step i.
        let k = match p.order {
            DigitOrder::LsdFirst => i,
            DigitOrder::MsdFirst => p.n - 1 - i,
        };
        for d in 0..p.base {
            let mut rhs = vec![Symbol::T(digit_term(d)), Symbol::V(x[i + 1])];
            rhs.extend(std::iter::repeat(Symbol::V(f[k])).take(d));
            g.add_rule(x[i], rhs);
        }
    }
    let terminator: Vec<Symbol> = p.delimiter.map(Symbol::T).into_iter().collect();
    if p.base == 2 {
        let e = g.var("E");
        g.add_rule(x[p.n], vec![Symbol::V(e)]);
        g.add_rule(e, terminator);
    } else {
        g.add_rule(x[p.n], terminator);
    }
    for j in 1..p.n {
        g.add_rule(f[j], vec![Symbol::V(f[j - 1]); p.base]);
    }
    for c in p.body.iter() {
        g.add_rule(f[0], vec![Symbol::T(c)]);
    }
    debug_assert!(g.validate().is_empty());
    Ok(g)
}

/// Grammar for one-or-more delimited repetitions of the length-prescribing
/// language: every chunk is a digit block plus body, terminated by the
/// delimiter. Adds exactly two rules on top of the delimiterless grammar.
pub fn gen_chunk(p: &LenParams) -> Result<Grammar, IdiomError> {
    let delim = p.delimiter.ok_or(IdiomError::MissingDelimiter)?;
    let mut inner = p.clone();
    inner.delimiter = None;
    // The colliding-delimiter check must still see the delimiter.
    p.check()?;
    let mut g = gen_len(&inner)?;
    let s = g.start();
    let z = g.var("Z");
    g.declare_terminal(delim);
    g.add_rule(z, vec![Symbol::V(s), Symbol::T(delim), Symbol::V(z)]);
    g.add_rule(z, vec![Symbol::V(s), Symbol::T(delim)]);
    g.set_start(z);
    debug_assert!(g.validate().is_empty());
    Ok(g)
}

// ---- fixed-width field equality ----

/// Grammar for words `xy` with `|x| = |y| = n` over `sigma` where the i-th
/// symbol of `x` equals the i-th symbol of `y` (1-based `i`).
///
/// One rule per alphabet symbol pins position `i` of both halves to that
/// symbol; a shared filler variable covers every other position. Exactly
/// `2 * |sigma|` rules, each start rule with a right-hand side of length
/// `2n`.
pub fn gen_eq_component(n: usize, i: usize, sigma: &TermSet) -> Result<Grammar, IdiomError> {
    check_component(n, i, sigma)?;
    let mut g = Grammar::new("S");
    let s = g.start();
    let t = g.var("T");
    for c in sigma.iter() {
        g.declare_terminal(c);
    }
    for c in sigma.iter() {
        let mut rhs = Vec::with_capacity(2 * n);
        rhs.extend(vec![Symbol::V(t); i - 1]);
        rhs.push(Symbol::T(c));
        rhs.extend(vec![Symbol::V(t); n - 1]);
        rhs.push(Symbol::T(c));
        rhs.extend(vec![Symbol::V(t); n - i]);
        g.add_rule(s, rhs);
    }
    for c in sigma.iter() {
        g.add_rule(t, vec![Symbol::T(c)]);
    }
    debug_assert!(g.validate().is_empty());
    Ok(g)
}

fn check_component(n: usize, i: usize, sigma: &TermSet) -> Result<(), IdiomError> {
    if n == 0 {
        return Err(IdiomError::InvalidParams("field width must be at least 1".into()));
    }
    if sigma.is_empty() {
        return Err(IdiomError::InvalidParams("alphabet must be nonempty".into()));
    }
    if i == 0 || i > n {
        return Err(IdiomError::PositionOutOfRange { i, n });
    }
    Ok(())
}

/// Conjunction of all `n` positionwise equality components: accepts `xy`
/// exactly when `x = y`.
pub fn eq_validator(n: usize, sigma: &TermSet) -> Result<LanguageValidator, IdiomError> {
    check_component(n, 1, sigma)?;
    let mut atoms = Vec::new();
    let mut children = Vec::new();
    for i in 1..=n {
        let id = format!("eq{}", i);
        atoms.push((id.clone(), gen_eq_component(n, i, sigma)?));
        children.push(ValidatorExpr::Atom(id));
    }
    Ok(LanguageValidator { atoms, expr: ValidatorExpr::And(children) })
}

// ---- fixed-width field ordering ----

/// A total order on a set of terminals, given by listing them ascending.
#[derive(Clone, Debug)]
pub struct OrderSpec {
    symbols: Vec<Term>,
    rank: Vec<Option<u16>>,
}

impl OrderSpec {
    pub fn new(symbols: Vec<Term>) -> Result<OrderSpec, IdiomError> {
        if symbols.is_empty() {
            return Err(IdiomError::InvalidParams("order must contain at least one symbol".into()));
        }
        let mut rank = vec![None; Term::COUNT];
        for (r, t) in symbols.iter().enumerate() {
            if rank[t.index()].is_some() {
                return Err(IdiomError::InvalidParams(format!("symbol {} listed twice", t)));
            }
            rank[t.index()] = Some(r as u16);
        }
        Ok(OrderSpec { symbols, rank })
    }

    /// The digits of a base in ascending value order.
    pub fn digits(base: usize) -> OrderSpec {
        OrderSpec::new((0..base).map(digit_term).collect()).unwrap()
    }

    pub fn symbols(&self) -> &[Term] {
        &self.symbols
    }

    pub fn set(&self) -> TermSet {
        self.symbols.iter().copied().collect()
    }

    pub fn min(&self) -> Term {
        self.symbols[0]
    }

    pub fn rank(&self, t: Term) -> Option<usize> {
        self.rank[t.index()].map(|r| r as usize)
    }

    /// Padded lexicographic comparison: the shorter word is left-padded with
    /// the minimal symbol, then the words are compared position by position.
    pub fn leq_star(&self, x: &[Term], y: &[Term]) -> Result<bool, IdiomError> {
        let (px, py) = pad_for_compare(x, y, self)?;
        for (a, b) in px.iter().zip(py.iter()) {
            let ra = self.rank(*a).unwrap();
            let rb = self.rank(*b).unwrap();
            if ra != rb {
                return Ok(ra < rb);
            }
        }
        Ok(true)
    }
}

/// Left-pad the shorter of `x` and `y` with the order's minimal symbol so
/// both have equal length. Errors if either word uses a symbol outside the
/// order.
pub fn pad_for_compare(x: &[Term], y: &[Term], ord: &OrderSpec) -> Result<(Word, Word), IdiomError> {
    for &t in x.iter().chain(y.iter()) {
        if ord.rank(t).is_none() {
            return Err(IdiomError::SymbolOutsideOrder(t));
        }
    }
    let w = x.len().max(y.len());
    let pad = |v: &[Term]| -> Word {
        let mut out = vec![ord.min(); w - v.len()];
        out.extend_from_slice(v);
        out
    };
    Ok((pad(x), pad(y)))
}

/// Grammar for words `xy` with `|x| = |y| = n` where the i-th symbol of `x`
/// is less-or-equal the i-th symbol of `y` in the given order.
///
/// One start rule per symbol `a` pins position `i` of `x` to `a` and sends
/// position `i` of `y` to a variable that accepts exactly the symbols
/// greater-or-equal `a`.
pub fn gen_leq_component(n: usize, i: usize, ord: &OrderSpec) -> Result<Grammar, IdiomError> {
    check_component(n, i, &ord.set())?;
    let mut g = Grammar::new("S");
    let s = g.start();
    let t = g.var("T");
    let uppers: Vec<VarId> =
        ord.symbols().iter().map(|a| g.var(&format!("T_{}", sym_tag(*a)))).collect();
    for c in ord.symbols() {
        g.declare_terminal(*c);
    }
    for (ra, a) in ord.symbols().iter().enumerate() {
        let mut rhs = Vec::with_capacity(2 * n);
        rhs.extend(vec![Symbol::V(t); i - 1]);
        rhs.push(Symbol::T(*a));
        rhs.extend(vec![Symbol::V(t); n - 1]);
        rhs.push(Symbol::V(uppers[ra]));
        rhs.extend(vec![Symbol::V(t); n - i]);
        g.add_rule(s, rhs);
    }
    for (ra, _) in ord.symbols().iter().enumerate() {
        for c in &ord.symbols()[ra..] {
            g.add_rule(uppers[ra], vec![Symbol::T(*c)]);
        }
    }
    for c in ord.symbols() {
        g.add_rule(t, vec![Symbol::T(*c)]);
    }
    debug_assert!(g.validate().is_empty());
    Ok(g)
}

/// Validator for `xy` with `x` less-or-equal `y` as equal-width words:
/// either all positions agree, or some position `i` is the first
/// disagreement and there `x` is strictly below `y`. Built from the equality
/// components and the ordering components.
pub fn leq_validator(n: usize, ord: &OrderSpec) -> Result<LanguageValidator, IdiomError> {
    let sigma = ord.set();
    check_component(n, 1, &sigma)?;
    let mut atoms = Vec::new();
    for i in 1..=n {
        atoms.push((format!("eq{}", i), gen_eq_component(n, i, &sigma)?));
    }
    for i in 1..=n {
        atoms.push((format!("le{}", i), gen_leq_component(n, i, ord)?));
    }
    let eq = |i: usize| ValidatorExpr::Atom(format!("eq{}", i));
    let le = |i: usize| ValidatorExpr::Atom(format!("le{}", i));
    let mut branches = vec![ValidatorExpr::And((1..=n).map(eq).collect())];
    for i in 1..=n {
        let mut conj: Vec<ValidatorExpr> = (1..i).map(eq).collect();
        conj.push(ValidatorExpr::not(eq(i)));
        conj.push(le(i));
        branches.push(ValidatorExpr::And(conj));
    }
    Ok(LanguageValidator { atoms, expr: ValidatorExpr::Or(branches) })
}

/// Validator comparing two 14-digit timestamps in `YYYYMMDDhhmmss` form:
/// accepts the concatenation when the first is not after the second.
pub fn date_compare_validator() -> LanguageValidator {
    leq_validator(14, &OrderSpec::digits(10)).unwrap()
}

// ---- block equality across filler-separated repetitions ----

/// Parameters for the repeated-block equality languages: words consist of
/// `k + 2` copies of some block in `sigma^n` (any `k >= 0`), with a word of
/// the first filler language after the first block, a word of the middle
/// filler language after each of the `k` middle blocks, and a word of the
/// last filler language after the final block.
pub struct GeneralEqParams {
    pub n: usize,
    pub sigma: TermSet,
    pub first: Grammar,
    pub middle: Grammar,
    pub last: Grammar,
}

/// Grammar for the words of the repeated-block layout in which every block
/// carries symbol `c` at position `i` (1-based). The filler grammars are
/// embedded with prefixed variable names.
pub fn gen_general_eq_component(
    p: &GeneralEqParams,
    i: usize,
    c: Term,
) -> Result<Grammar, IdiomError> {
    check_component(p.n, i, &p.sigma)?;
    if !p.sigma.contains(c) {
        return Err(IdiomError::InvalidParams(format!("symbol {} is not in the alphabet", c)));
    }
    let mut g = Grammar::new("S");
    let s = g.start();
    let t = g.var("T");
    let pv = g.var("P");
    let q = g.var("Q");
    for a in p.sigma.iter() {
        g.declare_terminal(a);
    }
    let first = embed(&mut g, &p.first, "fm_")?;
    let middle = embed(&mut g, &p.middle, "mm_")?;
    let last = embed(&mut g, &p.last, "lm_")?;

    // S -> P first Q P last ; Q -> P middle Q | eps ; P -> T^(i-1) c T^(n-i)
    g.add_rule(
        s,
        vec![Symbol::V(pv), Symbol::V(first), Symbol::V(q), Symbol::V(pv), Symbol::V(last)],
    );
    g.add_rule(q, vec![Symbol::V(pv), Symbol::V(middle), Symbol::V(q)]);
    g.add_rule(q, vec![]);
    let mut rhs = Vec::with_capacity(p.n);
    rhs.extend(vec![Symbol::V(t); i - 1]);
    rhs.push(Symbol::T(c));
    rhs.extend(vec![Symbol::V(t); p.n - i]);
    g.add_rule(pv, rhs);
    for a in p.sigma.iter() {
        g.add_rule(t, vec![Symbol::T(a)]);
    }
    debug_assert!(g.validate().is_empty());
    Ok(g)
}

/// Copy `src` into `dst` with every variable renamed under `prefix`;
/// returns the copied start variable.
fn embed(dst: &mut Grammar, src: &Grammar, prefix: &str) -> Result<VarId, IdiomError> {
    let issues = src.validate();
    if !issues.is_empty() {
        let msgs: Vec<String> = issues.iter().map(|d| d.to_string()).collect();
        return Err(IdiomError::InvalidEmbedded(msgs.join("; ")));
    }
    let map: Vec<VarId> = (0..src.var_count())
        .map(|v| dst.var(&format!("{}{}", prefix, src.var_name(VarId(v as u32)))))
        .collect();
    for t in src.terminals().iter() {
        dst.declare_terminal(t);
    }
    for r in src.rules() {
        let rhs = r
            .rhs
            .iter()
            .map(|sym| match sym {
                Symbol::T(t) => Symbol::T(*t),
                Symbol::V(v) => Symbol::V(map[v.0 as usize]),
            })
            .collect();
        dst.add_rule(map[r.lhs.0 as usize], rhs);
    }
    Ok(map[src.start().0 as usize])
}

/// Validator for full block equality: for every position some symbol is
/// carried by all blocks there, hence all blocks are equal.
pub fn general_eq_validator(p: &GeneralEqParams) -> Result<LanguageValidator, IdiomError> {
    check_component(p.n, 1, &p.sigma)?;
    let mut atoms = Vec::new();
    let mut conj = Vec::new();
    for i in 1..=p.n {
        let mut disj = Vec::new();
        for c in p.sigma.iter() {
            let id = format!("blk{}_{}", i, sym_tag(c));
            atoms.push((id.clone(), gen_general_eq_component(p, i, c)?));
            disj.push(ValidatorExpr::Atom(id));
        }
        conj.push(ValidatorExpr::Or(disj));
    }
    Ok(LanguageValidator { atoms, expr: ValidatorExpr::And(conj) })
}

/// Grammar accepting exactly one word.
pub fn word_grammar(w: &[Term]) -> Grammar {
    let mut g = Grammar::new("S");
    let s = g.start();
    for &t in w {
        g.declare_terminal(t);
    }
    g.add_rule(s, w.iter().map(|t| Symbol::T(*t)).collect());
    g
}

// ---- boolean combinations of grammars as one language ----

/// A language given as a boolean expression over named component grammars.
pub struct LanguageValidator {
    pub atoms: Vec<(String, Grammar)>,
    pub expr: ValidatorExpr,
}

/// Expression with atom references resolved to indices.
enum IxExpr {
    True,
    False,
    Atom(usize),
    And(Vec<IxExpr>),
    Or(Vec<IxExpr>),
    Not(Box<IxExpr>),
}

fn resolve(e: &ValidatorExpr, ids: &[String]) -> Result<IxExpr, MembershipError> {
    Ok(match e {
        ValidatorExpr::True => IxExpr::True,
        ValidatorExpr::False => IxExpr::False,
        ValidatorExpr::Atom(id) => {
            let ix = ids
                .iter()
                .position(|x| x == id)
                .unwrap_or_else(|| panic!("validator expression references unknown atom {:?}", id));
            IxExpr::Atom(ix)
        }
        ValidatorExpr::And(cs) => {
            IxExpr::And(cs.iter().map(|c| resolve(c, ids)).collect::<Result<_, _>>()?)
        }
        ValidatorExpr::Or(cs) => {
            IxExpr::Or(cs.iter().map(|c| resolve(c, ids)).collect::<Result<_, _>>()?)
        }
        ValidatorExpr::Not(c) => IxExpr::Not(Box::new(resolve(c, ids)?)),
    })
}

impl LanguageValidator {
    pub fn compile(&self) -> Result<CompiledValidator, MembershipError> {
        let mut recs = Vec::new();
        let ids: Vec<String> = self.atoms.iter().map(|(id, _)| id.clone()).collect();
        for (_, g) in &self.atoms {
            recs.push(Recognizer::new(g)?);
        }
        let expr = resolve(&self.expr, &ids)?;
        Ok(CompiledValidator { atoms: recs, expr })
    }
}

/// Compiled form of a [`LanguageValidator`]; atom results are computed
/// lazily and memoized per word, and `And`/`Or` short-circuit.
pub struct CompiledValidator {
    atoms: Vec<Recognizer>,
    expr: IxExpr,
}

impl CompiledValidator {
    pub fn accepts(&self, w: &[Term]) -> bool {
        let mut memo: Vec<Option<bool>> = vec![None; self.atoms.len()];
        self.eval(&self.expr, w, &mut memo)
    }

    fn eval(&self, e: &IxExpr, w: &[Term], memo: &mut Vec<Option<bool>>) -> bool {
        match e {
            IxExpr::True => true,
            IxExpr::False => false,
            IxExpr::Atom(ix) => {
                if let Some(v) = memo[*ix] {
                    return v;
                }
                // A symbol outside an atom's alphabet just means the word is
                // not in that atom's language.
                let v = self.atoms[*ix].membership(w).unwrap_or(false);
                memo[*ix] = Some(v);
                v
            }
            IxExpr::And(cs) => cs.iter().all(|c| self.eval(c, w, memo)),
            IxExpr::Or(cs) => cs.iter().any(|c| self.eval(c, w, memo)),
            IxExpr::Not(c) => !self.eval(c, w, memo),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::word_from_bytes;
    use crate::oracle::{self, EquivTarget, IdiomSpec};

    fn set(bytes: &[u8]) -> TermSet {
        bytes.iter().map(|b| Term::byte(*b)).collect()
    }

    fn accepts(g: &Grammar, w: &[u8]) -> bool {
        let r = Recognizer::new(g).unwrap();
        r.membership(&word_from_bytes(w)).unwrap_or(false)
    }

    #[test]
    fn base2_rule_count_and_size_follow_the_documented_formulas() {
        for n in 1..=32 {
            let p = LenParams::new(n, 2, set(b"abc"));
            let g = gen_len(&p).unwrap();
            assert_eq!(g.rule_count(), 3 * n + 2 + 3, "rules at n={}", n);
            assert_eq!(g.size(), 10 * n + 2 + 2 * 3, "size at n={}", n);
            assert!(g.validate().is_empty());
        }
        // Width 1 has no filler-doubling rules at all.
        let g = gen_len(&LenParams::new(1, 2, set(b"ab"))).unwrap();
        assert_eq!(g.rule_count(), 5 + 2);
    }

    #[test]
    fn base2_n3_three_body_symbols_has_14_rules_size_38() {
        let g = gen_len(&LenParams::new(3, 2, set(b"abc"))).unwrap();
        assert_eq!(g.rule_count(), 14);
        assert_eq!(g.size(), 38);
    }

    #[test]
    fn base10_n80_single_body_symbol_has_882_rules() {
        let p = LenParams::new(80, 10, [Term::DOT].into_iter().collect());
        let g = gen_len(&p).unwrap();
        assert_eq!(g.rule_count(), 10 * 80 + 80 + 1 + 1);
        assert_eq!(g.rule_count(), 882);
        assert!(g.validate().is_empty());
    }

    #[test]
    fn len_membership_frozen_examples() {
        // Value of "110" least-significant-first is 1 + 2 + 0 = 3.
        let g = gen_len(&LenParams::new(3, 2, set(b"abc"))).unwrap();
        assert!(accepts(&g, b"110abc"));
        assert!(accepts(&g, b"000"));
        assert!(!accepts(&g, b"01a"));
        assert!(!accepts(&g, b"110ab"));
        assert!(!accepts(&g, b"110abcc"));
        assert!(!accepts(&g, b""));
    }

    #[test]
    fn len_with_delimiter_requires_the_separator() {
        let p = LenParams::new(3, 2, set(b"abc")).with_delimiter(Term::SHARP);
        let g = gen_len(&p).unwrap();
        let r = Recognizer::new(&g).unwrap();
        let mut w = word_from_bytes(b"110");
        w.push(Term::SHARP);
        w.extend(word_from_bytes(b"abc"));
        assert!(r.membership(&w).unwrap());
        assert!(!r.membership(&word_from_bytes(b"110abc")).unwrap());
        assert_eq!(g.size(), 10 * 3 + 3 + 2 * 3);
    }

    #[test]
    fn msd_order_reverses_the_digit_block() {
        let lsd = gen_len(&LenParams::new(3, 2, set(b"abc"))).unwrap();
        let msd =
            gen_len(&LenParams::new(3, 2, set(b"abc")).with_order(DigitOrder::MsdFirst)).unwrap();
        assert!(accepts(&msd, b"011abc"));
        assert!(!accepts(&msd, b"110abc"));
        // Exhaustively: msd accepts exactly the words whose digit block is
        // the reverse of an lsd member's.
        let rl = Recognizer::new(&lsd).unwrap();
        let rm = Recognizer::new(&msd).unwrap();
        let alpha: Vec<Term> = LenParams::new(3, 2, set(b"abc")).alphabet().iter().collect();
        let mut stack: Vec<Word> = vec![Word::new()];
        while let Some(w) = stack.pop() {
            if w.len() >= 3 {
                let mut rev = w.clone();
                rev[..3].reverse();
                assert_eq!(rl.membership(&w).unwrap(), rm.membership(&rev).unwrap(), "w={:?}", w);
            } else {
                assert!(!rl.membership(&w).unwrap());
                assert!(!rm.membership(&w).unwrap());
            }
            if w.len() < 7 {
                for &a in &alpha {
                    let mut x = w.clone();
                    x.push(a);
                    stack.push(x);
                }
            }
        }
    }

    #[test]
    fn chunk_frozen_examples_and_rule_count() {
        let p = LenParams::new(1, 2, set(b"a")).with_delimiter(Term::SHARP);
        let g = gen_chunk(&p).unwrap();
        let inner = gen_len(&LenParams::new(1, 2, set(b"a"))).unwrap();
        assert_eq!(g.rule_count(), inner.rule_count() + 2);
        let r = Recognizer::new(&g).unwrap();
        let w = |s: &str| -> Word {
            s.bytes().map(|b| if b == b'#' { Term::SHARP } else { Term::byte(b) }).collect()
        };
        assert!(r.membership(&w("1a#")).unwrap());
        assert!(r.membership(&w("1a#0#")).unwrap());
        assert!(r.membership(&w("0#")).unwrap());
        assert!(!r.membership(&w("")).unwrap());
        assert!(!r.membership(&w("#")).unwrap());
        assert!(!r.membership(&w("1a")).unwrap());
        assert!(!r.membership(&w("1a#0")).unwrap());
    }

    #[test]
    fn chunk_requires_a_delimiter() {
        let p = LenParams::new(1, 2, set(b"a"));
        assert_eq!(gen_chunk(&p).unwrap_err(), IdiomError::MissingDelimiter);
    }

    #[test]
    fn len_rejects_bad_params() {
        assert!(matches!(
            gen_len(&LenParams::new(0, 2, set(b"a"))),
            Err(IdiomError::InvalidParams(_))
        ));
        assert!(matches!(
            gen_len(&LenParams::new(1, 17, set(b"a"))),
            Err(IdiomError::InvalidParams(_))
        ));
        assert!(matches!(
            gen_len(&LenParams::new(1, 2, TermSet::new())),
            Err(IdiomError::InvalidParams(_))
        ));
        let bad = LenParams::new(1, 2, set(b"a")).with_delimiter(Term::byte(b'a'));
        assert!(matches!(gen_len(&bad), Err(IdiomError::InvalidParams(_))));
    }

    #[test]
    fn eq_component_frozen_examples() {
        let sigma = set(b"ab");
        let g1 = gen_eq_component(2, 1, &sigma).unwrap();
        let g2 = gen_eq_component(2, 2, &sigma).unwrap();
        assert_eq!(g1.rule_count(), 2 * 2);
        for r in g1.rules().iter().take(2) {
            assert_eq!(r.rhs.len(), 4);
        }
        // "abaa": first symbols agree (a = a), second symbols differ (b, a).
        assert!(accepts(&g1, b"abaa"));
        assert!(!accepts(&g2, b"abaa"));
        assert!(!accepts(&g1, b"aba"));
        assert!(!accepts(&g1, b"abaaa"));
    }

    #[test]
    fn eq_validator_accepts_exactly_repeated_halves() {
        let sigma = set(b"h2c");
        let v = eq_validator(3, &sigma).unwrap().compile().unwrap();
        assert!(v.accepts(&word_from_bytes(b"h2ch2c")));
        assert!(!v.accepts(&word_from_bytes(b"h2cc2h")));
        assert!(!v.accepts(&word_from_bytes(b"h2ch2")));
        assert!(!v.accepts(&word_from_bytes(b"h2ch2cc")));
    }

    #[test]
    fn eq_position_out_of_range_errors() {
        let sigma = set(b"ab");
        assert_eq!(
            gen_eq_component(2, 3, &sigma).unwrap_err(),
            IdiomError::PositionOutOfRange { i: 3, n: 2 }
        );
        assert_eq!(
            gen_eq_component(2, 0, &sigma).unwrap_err(),
            IdiomError::PositionOutOfRange { i: 0, n: 2 }
        );
    }

    #[test]
    fn leq_component_frozen_examples() {
        let ord = OrderSpec::digits(10);
        let g = gen_leq_component(2, 1, &ord).unwrap();
        assert!(accepts(&g, b"0521"));
        assert!(!accepts(&g, b"2105"));
        // Equality at the pinned position also satisfies less-or-equal.
        assert!(accepts(&g, b"2925"));
    }

    #[test]
    fn leq_validator_matches_numeric_comparison() {
        let ord = OrderSpec::digits(10);
        let v = leq_validator(2, &ord).unwrap().compile().unwrap();
        assert!(v.accepts(&word_from_bytes(b"0521")));
        assert!(!v.accepts(&word_from_bytes(b"2105")));
        assert!(v.accepts(&word_from_bytes(b"4242")));
        let v4 = leq_validator(4, &ord).unwrap().compile().unwrap();
        assert!(v4.accepts(&word_from_bytes(b"28337026")));
        assert!(!v4.accepts(&word_from_bytes(b"70262833")));
        // Cross-check against integer comparison on all 4-digit pairs for a
        // sampled stride.
        for a in (0..100).step_by(7) {
            for b in (0..100).step_by(13) {
                let w = word_from_bytes(format!("{:02}{:02}", a, b).as_bytes());
                assert_eq!(v.accepts(&w), a <= b, "a={} b={}", a, b);
            }
        }
    }

    #[test]
    fn pad_for_compare_frozen_examples() {
        let ord = OrderSpec::digits(10);
        let (x, y) =
            pad_for_compare(&word_from_bytes(b"5"), &word_from_bytes(b"21"), &ord).unwrap();
        assert_eq!((x, y), (word_from_bytes(b"05"), word_from_bytes(b"21")));
        let ab = OrderSpec::new(vec![Term::byte(b'a'), Term::byte(b'b')]).unwrap();
        let (x, y) = pad_for_compare(&word_from_bytes(b""), &word_from_bytes(b"ab"), &ab).unwrap();
        assert_eq!((x, y), (word_from_bytes(b"aa"), word_from_bytes(b"ab")));
        assert!(ab.leq_star(&word_from_bytes(b""), &word_from_bytes(b"ab")).unwrap());
        assert_eq!(
            pad_for_compare(&word_from_bytes(b"z"), &word_from_bytes(b"ab"), &ab).unwrap_err(),
            IdiomError::SymbolOutsideOrder(Term::byte(b'z'))
        );
        assert!(ord.leq_star(&word_from_bytes(b"5"), &word_from_bytes(b"21")).unwrap());
        assert!(!ord.leq_star(&word_from_bytes(b"21"), &word_from_bytes(b"5")).unwrap());
    }

    fn geq_params(n: usize, first: &[u8], middle: &[u8], last: &[u8]) -> GeneralEqParams {
        GeneralEqParams {
            n,
            sigma: set(b"ab"),
            first: word_grammar(&word_from_bytes(first)),
            middle: word_grammar(&word_from_bytes(middle)),
            last: word_grammar(&word_from_bytes(last)),
        }
    }

    #[test]
    fn general_eq_with_empty_fillers_accepts_plain_repetition() {
        let p = geq_params(1, b"", b"", b"");
        let v = general_eq_validator(&p).unwrap().compile().unwrap();
        // Zero middle blocks is allowed: two copies and nothing else.
        assert!(v.accepts(&word_from_bytes(b"aa")));
        assert!(v.accepts(&word_from_bytes(b"bbb")));
        assert!(!v.accepts(&word_from_bytes(b"ab")));
        assert!(!v.accepts(&word_from_bytes(b"a")));
        assert!(!v.accepts(&word_from_bytes(b"")));
    }

    #[test]
    fn general_eq_with_filler_words_checks_all_blocks() {
        let p = geq_params(2, b"+", b"-", b"!");
        let v = general_eq_validator(&p).unwrap().compile().unwrap();
        assert!(v.accepts(&word_from_bytes(b"ab+ab!")));
        assert!(v.accepts(&word_from_bytes(b"ab+ab-ab!")));
        assert!(v.accepts(&word_from_bytes(b"ba+ba-ba-ba!")));
        assert!(!v.accepts(&word_from_bytes(b"ab+ba!")));
        assert!(!v.accepts(&word_from_bytes(b"ab+ab-ba!")));
        assert!(!v.accepts(&word_from_bytes(b"ab+ab")));
        assert!(!v.accepts(&word_from_bytes(b"abab!")));
    }

    #[test]
    fn general_eq_component_pins_one_position() {
        let p = geq_params(2, b"+", b"-", b"!");
        let g = gen_general_eq_component(&p, 1, Term::byte(b'a')).unwrap();
        let r = Recognizer::new(&g).unwrap();
        assert!(r.membership(&word_from_bytes(b"ab+aa!")).unwrap_or(false));
        assert!(!r.membership(&word_from_bytes(b"ab+ba!")).unwrap_or(false));
    }

    #[test]
    fn general_eq_rejects_invalid_embedded_grammar() {
        let mut bad = Grammar::new("S");
        let s = bad.start();
        let ghost = bad.var("Ghost");
        bad.add_rule(s, vec![Symbol::V(ghost)]);
        let p = GeneralEqParams {
            n: 1,
            sigma: set(b"ab"),
            first: bad,
            middle: word_grammar(&[]),
            last: word_grammar(&[]),
        };
        assert!(matches!(
            gen_general_eq_component(&p, 1, Term::byte(b'a')),
            Err(IdiomError::InvalidEmbedded(_))
        ));
    }

    #[test]
    fn small_generators_agree_with_the_direct_definitions() {
        let rows: Vec<(IdiomSpec, EquivTarget, usize)> = vec![
            (
                IdiomSpec::Len(LenParams::new(2, 2, set(b"a"))),
                EquivTarget::Grammar(gen_len(&LenParams::new(2, 2, set(b"a"))).unwrap()),
                8,
            ),
            (
                IdiomSpec::Chunk(LenParams::new(1, 2, set(b"a")).with_delimiter(Term::SHARP)),
                EquivTarget::Grammar(
                    gen_chunk(&LenParams::new(1, 2, set(b"a")).with_delimiter(Term::SHARP))
                        .unwrap(),
                ),
                7,
            ),
            (
                IdiomSpec::Eq { n: 2, sigma: set(b"ab") },
                EquivTarget::Validator(eq_validator(2, &set(b"ab")).unwrap()),
                6,
            ),
        ];
        for (spec, target, max_len) in &rows {
            let rep =
                oracle::exhaustive_equiv(spec, target, *max_len, oracle::DEFAULT_BUDGET).unwrap();
            assert!(rep.agree, "counterexample: {:?}", rep.counterexample);
        }
    }
}
