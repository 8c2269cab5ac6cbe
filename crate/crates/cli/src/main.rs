//! Command-line front end: grammar generation, oracle verification, message
//! validation, and batch corpus runs.
//!
//! Exit codes: 0 on success (message valid, oracles agree), 1 when a message
//! is invalid or an oracle disagrees, 2 for usage, I/O, or configuration
//! errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cfval_core::composer::{load_profile, Overall, Profile, ProfileDoc, ValidationReport, VerdictState};
use cfval_core::grammar::{display_word, Term, TermSet};
use cfval_core::http::catalog::builtin_profile;
use cfval_core::http::extract::EXTRACTOR_IDS;
use cfval_core::http::{validate_http, ValidationInput};
use cfval_core::idioms::{
    gen_chunk, gen_eq_component, gen_general_eq_component, gen_len, gen_leq_component,
    word_grammar, DigitOrder, GeneralEqParams, LenParams, OrderSpec,
};
use cfval_core::oracle::{run_entry, standard_matrix, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(
    name = "cfval",
    version,
    about = "Build and run validators made of grammar and regex membership checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a generated grammar in the plain text rule format.
    #[command(subcommand)]
    Gen(GenKind),
    /// Run every generator against its brute-force oracle and summarize.
    Verify {
        /// Word-enumeration budget per matrix row.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Validate one message, or a request/response pair, against a profile.
    Validate {
        /// Profile document to load; the built-in HTTP profile when omitted.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Message file. Read as a response when it starts with HTTP/,
        /// as a request otherwise.
        #[arg(long)]
        message: PathBuf,
        /// Response file; makes --message the request of a pair.
        #[arg(long)]
        paired: Option<PathBuf>,
        /// Print the full report as JSON instead of a plain summary.
        #[arg(long)]
        json: bool,
    },
    /// Validate every labeled message in a directory and summarize.
    Corpus {
        /// Directory holding the message files.
        #[arg(long)]
        dir: PathBuf,
        /// Label file: one `filename,valid|invalid` line per case. A file
        /// named *.req.http with a *.resp.http sibling is validated as a
        /// pair.
        #[arg(long)]
        labels: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Length-field language: an n-digit block followed by that many body
    /// symbols.
    Len(LenArgs),
    /// One or more delimited length-field blocks.
    Chunk(LenArgs),
    /// Component i of the fixed-width equality family.
    Eq {
        /// Block width.
        #[arg(long)]
        n: usize,
        /// Component position, 1-based.
        #[arg(long)]
        i: usize,
        /// Block symbols, as a string of ASCII characters.
        #[arg(long)]
        alphabet: String,
    },
    /// Component i of the fixed-width ordered-comparison family.
    Leq {
        #[arg(long)]
        n: usize,
        /// Component position, 1-based.
        #[arg(long)]
        i: usize,
        /// Block symbols in ascending order, as a string of ASCII characters.
        #[arg(long)]
        alphabet: String,
    },
    /// Component (i, sym) of the general equality family with literal
    /// filler words.
    GeneralEq {
        #[arg(long)]
        n: usize,
        /// Component position, 1-based.
        #[arg(long)]
        i: usize,
        /// Component symbol.
        #[arg(long)]
        sym: char,
        #[arg(long)]
        alphabet: String,
        /// Filler before the first block.
        #[arg(long, default_value = "")]
        first: String,
        /// Filler between blocks.
        #[arg(long, default_value = "")]
        middle: String,
        /// Filler after the last block.
        #[arg(long, default_value = "")]
        last: String,
    },
}

#[derive(Args)]
struct LenArgs {
    /// Width of the digit block.
    #[arg(long)]
    n: usize,
    /// Digit base, 2 to 10.
    #[arg(long, default_value_t = 2)]
    base: usize,
    /// Body symbols, as a string of ASCII characters.
    #[arg(long = "body-alphabet")]
    body_alphabet: String,
    /// Most significant digit first instead of the default least-first.
    #[arg(long)]
    msd_first: bool,
    /// End the word with the reserved delimiter symbol.
    #[arg(long)]
    delimited: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen(kind) => {
            print!("{}", generate(kind)?.to_text());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { budget } => verify(budget),
        Command::Validate { profile, message, paired, json } => {
            validate(profile.as_deref(), &message, paired.as_deref(), json)
        }
        Command::Corpus { dir, labels } => corpus(&dir, &labels),
    }
}

fn alphabet(s: &str) -> Result<Vec<Term>, String> {
    if s.is_empty() {
        return Err("alphabet is empty".into());
    }
    s.chars()
        .map(|c| {
            u8::try_from(c as u32)
                .map(Term::byte)
                .map_err(|_| format!("alphabet symbol {:?} is not a single byte", c))
        })
        .collect()
}

fn alphabet_set(s: &str) -> Result<TermSet, String> {
    Ok(alphabet(s)?.into_iter().collect())
}

fn len_params(a: &LenArgs) -> Result<LenParams, String> {
    let mut p = LenParams::new(a.n, a.base, alphabet_set(&a.body_alphabet)?);
    if a.msd_first {
        p = p.with_order(DigitOrder::MsdFirst);
    }
    if a.delimited {
        p = p.with_delimiter(Term::SHARP);
    }
    Ok(p)
}

fn generate(kind: GenKind) -> Result<cfval_core::grammar::Grammar, String> {
    match kind {
        GenKind::Len(a) => gen_len(&len_params(&a)?).map_err(|e| e.to_string()),
        GenKind::Chunk(a) => {
            let mut p = len_params(&a)?;
            if p.delimiter.is_none() {
                p = p.with_delimiter(Term::SHARP);
            }
            gen_chunk(&p).map_err(|e| e.to_string())
        }
        GenKind::Eq { n, i, alphabet: a } => {
            gen_eq_component(n, i, &alphabet_set(&a)?).map_err(|e| e.to_string())
        }
        GenKind::Leq { n, i, alphabet: a } => {
            let ord = OrderSpec::new(alphabet(&a)?).map_err(|e| e.to_string())?;
            gen_leq_component(n, i, &ord).map_err(|e| e.to_string())
        }
        GenKind::GeneralEq { n, i, sym, alphabet: a, first, middle, last } => {
            let sigma = alphabet_set(&a)?;
            let word = |s: &str| -> Result<Vec<Term>, String> {
                if s.is_empty() {
                    Ok(Vec::new())
                } else {
                    alphabet(s)
                }
            };
            let params = GeneralEqParams {
                n,
                sigma,
                first: word_grammar(&word(&first)?),
                middle: word_grammar(&word(&middle)?),
                last: word_grammar(&word(&last)?),
            };
            let c = u8::try_from(sym as u32)
                .map(Term::byte)
                .map_err(|_| format!("symbol {:?} is not a single byte", sym))?;
            gen_general_eq_component(&params, i, c).map_err(|e| e.to_string())
        }
    }
}

fn verify(budget: u64) -> Result<ExitCode, String> {
    let mut rows = Vec::new();
    let mut all_agree = true;
    for entry in standard_matrix() {
        let outcome = run_entry(&entry, budget).map_err(|e| format!("{}: {:?}", entry.name, e))?;
        all_agree &= outcome.report.agree;
        rows.push(serde_json::json!({
            "name": outcome.name,
            "max_len": outcome.max_len_used,
            "words_checked": outcome.report.words_checked,
            "agree": outcome.report.agree,
            "counterexample": outcome.report.counterexample.as_deref().map(display_word),
        }));
    }
    let summary = serde_json::json!({ "all_agree": all_agree, "rows": rows });
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    Ok(if all_agree { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn load_profile_arg(path: Option<&Path>) -> Result<Profile, String> {
    let Some(path) = path else { return Ok(builtin_profile()) };
    let raw = fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    let doc: ProfileDoc =
        serde_json::from_str(&raw).map_err(|e| format!("{}: {}", path.display(), e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    load_profile(&doc, base, EXTRACTOR_IDS).map_err(|issues| {
        let lines: Vec<String> = issues.iter().map(|i| format!("  {}", i)).collect();
        format!("profile {} failed to load:\n{}", path.display(), lines.join("\n"))
    })
}

fn read_input(message: &Path, paired: Option<&Path>) -> Result<ValidationInput, String> {
    let bytes = fs::read(message).map_err(|e| format!("{}: {}", message.display(), e))?;
    if let Some(paired) = paired {
        let resp = fs::read(paired).map_err(|e| format!("{}: {}", paired.display(), e))?;
        return Ok(ValidationInput::new().with_request_bytes(&bytes).with_response_bytes(&resp));
    }
    Ok(if bytes.starts_with(b"HTTP/") {
        ValidationInput::new().with_response_bytes(&bytes)
    } else {
        ValidationInput::new().with_request_bytes(&bytes)
    })
}

fn print_report(report: &ValidationReport) {
    println!(
        "overall: {}",
        match report.overall {
            Overall::Pass => "pass",
            Overall::Fail => "fail",
        }
    );
    for c in &report.constraints {
        let verdict = match c.verdict {
            VerdictState::Pass => "pass",
            VerdictState::Fail => "FAIL",
            VerdictState::Skipped => "skipped",
        };
        println!("  {:<28} {}", c.id, verdict);
        if c.verdict == VerdictState::Fail {
            for a in &c.atoms {
                if a.verdict == VerdictState::Fail {
                    match &a.note {
                        Some(note) => println!("      {}: {}", a.id, note),
                        None => println!("      {}: word not in the language", a.id),
                    }
                }
            }
        }
    }
}

fn validate(
    profile: Option<&Path>,
    message: &Path,
    paired: Option<&Path>,
    json: bool,
) -> Result<ExitCode, String> {
    let profile = load_profile_arg(profile)?;
    let input = read_input(message, paired)?;
    let report = validate_http(&profile, &input);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        print_report(&report);
    }
    Ok(match report.overall {
        Overall::Pass => ExitCode::SUCCESS,
        Overall::Fail => ExitCode::from(1),
    })
}

fn corpus(dir: &Path, labels: &Path) -> Result<ExitCode, String> {
    let profile = builtin_profile();
    let text = fs::read_to_string(labels).map_err(|e| format!("{}: {}", labels.display(), e))?;
    let mut total = 0u64;
    let mut agree = 0u64;
    let mut disagree: Vec<String> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, label) = line
            .rsplit_once(',')
            .ok_or_else(|| format!("{}:{}: expected `file,label`", labels.display(), lineno + 1))?;
        let expected = match label.trim() {
            "valid" => true,
            "invalid" => false,
            other => {
                return Err(format!(
                    "{}:{}: unknown label {:?}",
                    labels.display(),
                    lineno + 1,
                    other
                ))
            }
        };
        let path = dir.join(name.trim());
        let paired = name
            .trim()
            .strip_suffix(".req.http")
            .map(|stem| dir.join(format!("{}.resp.http", stem)))
            .filter(|p| p.exists());
        let input = read_input(&path, paired.as_deref())?;
        let report = validate_http(&profile, &input);
        total += 1;
        if (report.overall == Overall::Pass) == expected {
            agree += 1;
        } else {
            disagree.push(name.trim().to_string());
        }
    }
    let summary = serde_json::json!({ "total": total, "agree": agree, "disagree": disagree });
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    Ok(if disagree.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
