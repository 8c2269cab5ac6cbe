//! The built-in validation catalog: the message-head grammar, the shipped
//! regexes, and the profile document tying atoms to constraints.
//!
//! The profile is defined here programmatically; the files under
//! `profiles/` are generated from these definitions and checked against
//! them by the asset tests, so the shipped assets can never drift from the
//! code.

use crate::composer::{
    resolve_gen_url, Atom, AtomDoc, ConstraintDoc, ConstraintMeta, ExprDoc, Language, Profile,
    ProfileDoc, ValidatorExpr,
};
use crate::earley::Recognizer;
use crate::grammar::{Grammar, Symbol, Term, VarId};
use crate::regex::Regex;

pub const ANY_RX: &str = ".*";
pub const CONTAINS_CHUNKED_RX: &str = r"(.*[ \t,])?chunked([ \t,;].*)?";
pub const STATUS_101_RX: &str = "101";
pub const VERSION_11_RX: &str = "11";
pub const HOST_VALUE_RX: &str = "[!-~]+";

/// The regex files the profile references, as (relative path, pattern).
pub fn regex_assets() -> Vec<(&'static str, &'static str)> {
    vec![
        ("rx/any.rx", ANY_RX),
        ("rx/contains-chunked.rx", CONTAINS_CHUNKED_RX),
        ("rx/status-101.rx", STATUS_101_RX),
        ("rx/version-11.rx", VERSION_11_RX),
        ("rx/host-value.rx", HOST_VALUE_RX),
    ]
}

fn add_class(g: &mut Grammar, name: &str, bytes: impl Iterator<Item = u8>) -> VarId {
    let v = g.var(name);
    for b in bytes {
        let t = Term::byte(b);
        g.declare_terminal(t);
        g.add_rule(v, vec![Symbol::T(t)]);
    }
    v
}

/// Grammar for a complete message head: a request line or a status line,
/// the header block, and the terminating blank line. Mirrors exactly what
/// the strict parser accepts, so the two routes can be compared.
pub fn core_message_grammar() -> Grammar {
    let mut g = Grammar::new("Head");
    let head = g.start();
    let req_line = g.var("ReqLine");
    let stat_line = g.var("StatLine");
    let block = g.var("Block");
    let line = g.var("Line");
    let method = g.var("Method");
    let target = g.var("Target");
    let version = g.var("Version");
    let reason = g.var("Reason");
    let name = g.var("Name");
    let field = g.var("Field");

    let tc = add_class(&mut g, "TC", (0x21..=0x7eu8).filter(|b| crate::composer::is_tchar(*b)));
    let vc = add_class(&mut g, "VC", 0x21..=0x7eu8);
    let dg = add_class(&mut g, "DG", b'0'..=b'9');
    let fc = add_class(
        &mut g,
        "FC",
        (0x21..=0x7eu8).chain([b' ', b'\t']).chain(0x80..=0xffu8),
    );

    let t = |b: u8| {
        Symbol::T(Term::byte(b))
    };
    for b in [b'H', b'T', b'P', b'/', b'.', b':', b' ', b'\r', b'\n'] {
        g.declare_terminal(Term::byte(b));
    }

    g.add_rule(head, vec![Symbol::V(req_line), Symbol::V(block)]);
    g.add_rule(head, vec![Symbol::V(stat_line), Symbol::V(block)]);
    g.add_rule(
        req_line,
        vec![
            Symbol::V(method),
            t(b' '),
            Symbol::V(target),
            t(b' '),
            Symbol::V(version),
            t(b'\r'),
            t(b'\n'),
        ],
    );
    g.add_rule(method, vec![Symbol::V(tc), Symbol::V(method)]);
    g.add_rule(method, vec![Symbol::V(tc)]);
    g.add_rule(target, vec![Symbol::V(vc), Symbol::V(target)]);
    g.add_rule(target, vec![Symbol::V(vc)]);
    g.add_rule(
        version,
        vec![t(b'H'), t(b'T'), t(b'T'), t(b'P'), t(b'/'), Symbol::V(dg), t(b'.'), Symbol::V(dg)],
    );
    g.add_rule(
        stat_line,
        vec![
            Symbol::V(version),
            t(b' '),
            Symbol::V(dg),
            Symbol::V(dg),
            Symbol::V(dg),
            t(b' '),
            Symbol::V(reason),
            t(b'\r'),
            t(b'\n'),
        ],
    );
    g.add_rule(reason, vec![Symbol::V(fc), Symbol::V(reason)]);
    g.add_rule(reason, vec![]);
    g.add_rule(block, vec![Symbol::V(line), Symbol::V(block)]);
    g.add_rule(block, vec![t(b'\r'), t(b'\n')]);
    g.add_rule(line, vec![Symbol::V(name), t(b':'), Symbol::V(field), t(b'\r'), t(b'\n')]);
    g.add_rule(name, vec![Symbol::V(tc), Symbol::V(name)]);
    g.add_rule(name, vec![Symbol::V(tc)]);
    g.add_rule(field, vec![Symbol::V(fc), Symbol::V(field)]);
    g.add_rule(field, vec![]);
    debug_assert!(g.validate().is_empty());
    g
}

fn cfg(id: &str, path: &str, extractor: &str) -> AtomDoc {
    AtomDoc {
        id: id.into(),
        kind: "cfg".into(),
        language_path: path.into(),
        extractor: extractor.into(),
        required: false,
    }
}

fn rx(id: &str, path: &str, extractor: &str) -> AtomDoc {
    AtomDoc {
        id: id.into(),
        kind: "regex".into(),
        language_path: path.into(),
        extractor: extractor.into(),
        required: false,
    }
}

fn required(mut a: AtomDoc) -> AtomDoc {
    a.required = true;
    a
}

fn atom(id: &str) -> ValidatorExpr {
    ValidatorExpr::Atom(id.into())
}

/// First-difference ordering over width-n atoms: all positions equal, or
/// positions before `i` equal, position `i` unequal and ordered.
fn first_difference_leq(eq_prefix: &str, le_prefix: &str, n: usize) -> ValidatorExpr {
    let eq = |i: usize| atom(&format!("{}{}", eq_prefix, i));
    let le = |i: usize| atom(&format!("{}{}", le_prefix, i));
    let mut branches = vec![ValidatorExpr::And((1..=n).map(eq).collect())];
    for i in 1..=n {
        let mut conj: Vec<ValidatorExpr> = (1..i).map(eq).collect();
        conj.push(ValidatorExpr::not(eq(i)));
        conj.push(le(i));
        branches.push(ValidatorExpr::And(conj));
    }
    ValidatorExpr::Or(branches)
}

struct CatalogBuilder {
    atoms: Vec<AtomDoc>,
    meta: Vec<ConstraintDoc>,
    root: Vec<ValidatorExpr>,
}

impl CatalogBuilder {
    fn constraint(&mut self, id: &str, description: &str, atoms: Vec<AtomDoc>, expr: ValidatorExpr) {
        self.meta.push(ConstraintDoc {
            id: id.into(),
            description: description.into(),
            atoms: atoms.iter().map(|a| a.id.clone()).collect(),
            expr: ExprDoc::from_expr(&expr),
        });
        self.atoms.extend(atoms);
        self.root.push(expr);
    }
}

/// The full built-in profile document.
pub fn profile_doc() -> ProfileDoc {
    let mut b = CatalogBuilder { atoms: Vec::new(), meta: Vec::new(), root: Vec::new() };

    b.constraint(
        "message-syntax",
        "Request and response heads match the message-head grammar.",
        vec![
            cfg("ms-req", "core_message.cfg", "req-head"),
            cfg("ms-resp", "core_message.cfg", "resp-head"),
        ],
        ValidatorExpr::And(vec![atom("ms-req"), atom("ms-resp")]),
    );

    b.constraint(
        "host-required",
        "An HTTP/1.1 request carries exactly one plausible Host header.",
        vec![
            rx("host-value", "rx/host-value.rx", "req-host-value"),
            rx("host-v11", "rx/version-11.rx", "req-version"),
        ],
        ValidatorExpr::Or(vec![atom("host-value"), ValidatorExpr::not(atom("host-v11"))]),
    );

    b.constraint(
        "te-no-chunked",
        "A request TE header never lists the chunked coding.",
        vec![rx("te-chunked", "rx/contains-chunked.rx", "req-te-value")],
        ValidatorExpr::not(atom("te-chunked")),
    );

    b.constraint(
        "content-length-matches",
        "A Content-Length value equals the size of the body it frames.",
        vec![
            cfg("cl-req", "gen:len?n=80&base=10&body=dot", "req-cl-len80"),
            cfg("cl-resp", "gen:len?n=80&base=10&body=dot", "resp-cl-len80"),
        ],
        ValidatorExpr::And(vec![atom("cl-req"), atom("cl-resp")]),
    );

    b.constraint(
        "chunked-framing-valid",
        "Every chunk size in a chunked body equals its data length, through the final zero chunk.",
        vec![
            cfg("chunk-req", "gen:chunk?n=8&base=16&body=dot", "req-chunked8"),
            cfg("chunk-resp", "gen:chunk?n=8&base=16&body=dot", "resp-chunked8"),
        ],
        ValidatorExpr::And(vec![atom("chunk-req"), atom("chunk-resp")]),
    );

    b.constraint(
        "no-cl-te-together",
        "No message carries both Content-Length and Transfer-Encoding.",
        vec![
            rx("clte-req-cl", "rx/any.rx", "req-cl-value"),
            rx("clte-req-te", "rx/any.rx", "req-tecoding-value"),
            rx("clte-resp-cl", "rx/any.rx", "resp-cl-value"),
            rx("clte-resp-te", "rx/any.rx", "resp-tecoding-value"),
        ],
        ValidatorExpr::And(vec![
            ValidatorExpr::Or(vec![
                ValidatorExpr::not(atom("clte-req-cl")),
                ValidatorExpr::not(atom("clte-req-te")),
            ]),
            ValidatorExpr::Or(vec![
                ValidatorExpr::not(atom("clte-resp-cl")),
                ValidatorExpr::not(atom("clte-resp-te")),
            ]),
        ]),
    );

    let mut range_atoms = Vec::new();
    for i in 1..=10 {
        range_atoms.push(cfg(
            &format!("range-eq{}", i),
            &format!("gen:eq?n=10&i={}&sigma=digits", i),
            "req-range-pair",
        ));
    }
    for i in 1..=10 {
        range_atoms.push(cfg(
            &format!("range-le{}", i),
            &format!("gen:leq?n=10&i={}&sigma=digits", i),
            "req-range-pair",
        ));
    }
    b.constraint(
        "range-order",
        "A two-bound byte range has its start not after its end.",
        range_atoms,
        first_difference_leq("range-eq", "range-le", 10),
    );

    let mut warn_atoms = Vec::new();
    for i in 1..=29 {
        warn_atoms.push(cfg(
            &format!("warn-eq{}", i),
            &format!("gen:eq?n=29&i={}&sigma=date", i),
            "resp-warn-date-pair",
        ));
    }
    b.constraint(
        "warning-date-equals-date",
        "A warn-date quoted in a Warning header equals the Date header value.",
        warn_atoms,
        ValidatorExpr::And((1..=29).map(|i| atom(&format!("warn-eq{}", i))).collect()),
    );

    let mut lmd_atoms = Vec::new();
    for i in 1..=14 {
        lmd_atoms.push(cfg(
            &format!("lmd-eq{}", i),
            &format!("gen:eq?n=14&i={}&sigma=digits", i),
            "resp-lm-date-pair",
        ));
    }
    for i in 1..=14 {
        lmd_atoms.push(cfg(
            &format!("lmd-le{}", i),
            &format!("gen:leq?n=14&i={}&sigma=digits", i),
            "resp-lm-date-pair",
        ));
    }
    b.constraint(
        "last-modified-not-after-date",
        "Last-Modified does not postdate the Date header.",
        lmd_atoms,
        first_difference_leq("lmd-eq", "lmd-le", 14),
    );

    let mut up_atoms = vec![rx("up-101", "rx/status-101.rx", "resp-status")];
    for i in 1..=16 {
        up_atoms.push(required(cfg(
            &format!("up-eq{}", i),
            &format!("gen:eq?n=16&i={}&sigma=upgrade", i),
            "pair-upgrade",
        )));
    }
    b.constraint(
        "upgrade-equality",
        "A switching-protocols response names the same Upgrade protocol as the request.",
        up_atoms,
        ValidatorExpr::Or(vec![
            ValidatorExpr::not(atom("up-101")),
            ValidatorExpr::And((1..=16).map(|i| atom(&format!("up-eq{}", i))).collect()),
        ]),
    );

    let mut ver_atoms = Vec::new();
    for side in ["req", "resp"] {
        for i in 1..=2 {
            ver_atoms.push(cfg(
                &format!("ver-{}-eq{}", side, i),
                &format!("gen:eq?n=2&i={}&sigma=digits", i),
                &format!("{}-version-cmp", side),
            ));
        }
        for i in 1..=2 {
            ver_atoms.push(cfg(
                &format!("ver-{}-le{}", side, i),
                &format!("gen:leq?n=2&i={}&sigma=digits", i),
                &format!("{}-version-cmp", side),
            ));
        }
    }
    b.constraint(
        "version-compare",
        "Both message versions are at most 1.1.",
        ver_atoms,
        ValidatorExpr::And(vec![
            first_difference_leq("ver-req-eq", "ver-req-le", 2),
            first_difference_leq("ver-resp-eq", "ver-resp-le", 2),
        ]),
    );

    ProfileDoc {
        atoms: b.atoms,
        expr: ExprDoc::from_expr(&ValidatorExpr::And(b.root)),
        meta: b.meta,
    }
}

/// The built-in profile with every language compiled in, no files needed.
pub fn builtin_profile() -> Profile {
    let doc = profile_doc();
    let atoms = doc
        .atoms
        .iter()
        .map(|a| Atom {
            id: a.id.clone(),
            language: builtin_language(a),
            extractor: a.extractor.clone(),
            required: a.required,
        })
        .collect();
    Profile {
        atoms,
        root: doc.expr.to_expr(),
        constraints: doc
            .meta
            .iter()
            .map(|c| ConstraintMeta {
                id: c.id.clone(),
                description: c.description.clone(),
                atom_ids: c.atoms.clone(),
                expr: c.expr.to_expr(),
            })
            .collect(),
    }
}

fn builtin_language(a: &AtomDoc) -> Language {
    match a.kind.as_str() {
        "cfg" => {
            let g = if let Some(url) = a.language_path.strip_prefix("gen:") {
                resolve_gen_url(url).expect("catalog gen url resolves")
            } else {
                assert_eq!(a.language_path, "core_message.cfg", "unexpected catalog path");
                core_message_grammar()
            };
            Language::Cfg(Recognizer::new(&g).expect("catalog grammar compiles"))
        }
        "regex" => {
            let pattern = regex_assets()
                .iter()
                .find(|(p, _)| *p == a.language_path)
                .map(|(_, pat)| *pat)
                .expect("catalog regex path is shipped");
            Language::Rx(Regex::parse(pattern).expect("catalog regex parses"))
        }
        other => unreachable!("catalog atom kind {:?}", other),
    }
}
