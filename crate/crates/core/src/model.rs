//! The plain-text model format: lexer, parser, canonical printer and
//! resolution into categories, functors and pseudofunctors.
//!
//! The grammar is in `docs/model-format.md`. In short, a file is a sequence
//! of blocks
//!
//! ```text
//! category "C" { object "a"  arrow "f" "a" "b"  identity "a" "1a"  compose "g" "f" "h" }
//! functor "u" "T" "S" { object "x" "a"  arrow "p" "f" }
//! pseudofunctor "P" "B" { poset "a" { element "lo"  element "hi"  le "lo" "hi" }  transition "f" "lo" "hi" }
//! expect "entry" "u" { topological true }
//! ```
//!
//! Identifiers are double-quoted strings, statements are keyword-led and
//! need no separator, and `#` starts a comment running to the end of the line.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::fincat::{CategoryData, FinCat, FunctorData, FunctorMap, ValidationReport};
use crate::grothendieck::PosetPseudofunctor;
use crate::lattice::FinPoset;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// One poset of a pseudofunctor section, as written: elements in order and
/// the generating `≤` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PosetData {
    pub object: String,
    pub elements: Vec<String>,
    pub le: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PseudofunctorData {
    pub name: String,
    pub base: String,
    pub posets: Vec<PosetData>,
    /// `(arrow, values)`; values are `φ*(y)` for the elements `y` of the
    /// target poset in their declared order.
    pub transitions: Vec<(String, Vec<String>)>,
}

/// Expected classification flags of one functor.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectation {
    pub entry: String,
    pub functor: String,
    pub flags: Vec<(String, bool)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelFile {
    pub categories: Vec<CategoryData>,
    pub functors: Vec<FunctorData>,
    pub pseudofunctors: Vec<PseudofunctorData>,
    pub expectations: Vec<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Open,
    Close,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.char_indices().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    /// Next token with its starting position.
    fn next(&mut self) -> std::result::Result<Option<(Tok, usize, usize)>, ParseError> {
        loop {
            match self.chars.peek().map(|&(_, c)| c) {
                None => return Ok(None),
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(_) => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let c = self.bump().expect("peeked");
        let tok = match c {
            '{' => Tok::Open,
            '}' => Tok::Close,
            '"' => {
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => {
                            return Err(ParseError {
                                line,
                                column,
                                message: "unterminated string".into(),
                            })
                        }
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some(other) => {
                                return Err(self.error(format!("unknown escape `\\{other}`")))
                            }
                            None => return Err(self.error("unterminated string")),
                        },
                        Some(ch) => s.push(ch),
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::from(c);
                while let Some(&(_, d)) = self.chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '-' {
                        s.push(d);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Word(s)
            }
            other => {
                return Err(ParseError {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        Ok(Some((tok, line, column)))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    peeked: Option<(Tok, usize, usize)>,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn peek(&mut self) -> PResult<Option<&(Tok, usize, usize)>> {
        if self.peeked.is_none() {
            self.peeked = self.lex.next()?;
        }
        Ok(self.peeked.as_ref())
    }

    fn take(&mut self) -> PResult<Option<(Tok, usize, usize)>> {
        self.peek()?;
        Ok(self.peeked.take())
    }

    fn eof_error(&self, what: &str) -> ParseError {
        self.lex.error(format!("unexpected end of input, expected {what}"))
    }

    fn string(&mut self) -> PResult<String> {
        match self.take()? {
            Some((Tok::Str(s), _, _)) => Ok(s),
            Some((t, line, column)) => Err(ParseError {
                line,
                column,
                message: format!("expected a quoted identifier, found {}", describe(&t)),
            }),
            None => Err(self.eof_error("a quoted identifier")),
        }
    }

    fn open(&mut self) -> PResult<()> {
        match self.take()? {
            Some((Tok::Open, _, _)) => Ok(()),
            Some((t, line, column)) => Err(ParseError {
                line,
                column,
                message: format!("expected `{{`, found {}", describe(&t)),
            }),
            None => Err(self.eof_error("`{`")),
        }
    }

    fn boolean(&mut self) -> PResult<bool> {
        match self.take()? {
            Some((Tok::Word(w), _, _)) if w == "true" => Ok(true),
            Some((Tok::Word(w), _, _)) if w == "false" => Ok(false),
            Some((t, line, column)) => Err(ParseError {
                line,
                column,
                message: format!("expected `true` or `false`, found {}", describe(&t)),
            }),
            None => Err(self.eof_error("`true` or `false`")),
        }
    }

    /// Strings up to the next keyword or closing brace.
    fn strings(&mut self) -> PResult<Vec<String>> {
        let mut out = Vec::new();
        while let Some((Tok::Str(_), _, _)) = self.peek()? {
            out.push(self.string()?);
        }
        Ok(out)
    }

    /// Keyword statements until `}`; `stmt` handles one keyword.
    fn block(&mut self, mut stmt: impl FnMut(&mut Self, &str, usize, usize) -> PResult<()>) -> PResult<()> {
        self.open()?;
        loop {
            match self.take()? {
                Some((Tok::Close, _, _)) => return Ok(()),
                Some((Tok::Word(w), line, column)) => stmt(self, &w, line, column)?,
                Some((t, line, column)) => {
                    return Err(ParseError {
                        line,
                        column,
                        message: format!("expected a key or `}}`, found {}", describe(&t)),
                    })
                }
                None => return Err(self.eof_error("`}`")),
            }
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("`{w}`"),
        Tok::Str(s) => format!("\"{s}\""),
        Tok::Open => "`{`".into(),
        Tok::Close => "`}`".into(),
    }
}

fn unknown(key: &str, section: &str, line: usize, column: usize) -> ParseError {
    ParseError {
        line,
        column,
        message: format!("unknown key `{key}` in {section}"),
    }
}

pub fn parse(src: &str) -> std::result::Result<ModelFile, ParseError> {
    let mut p = Parser {
        lex: Lexer::new(src),
        peeked: None,
    };
    let mut m = ModelFile::default();
    while let Some((tok, line, column)) = p.take()? {
        let Tok::Word(w) = tok else {
            return Err(ParseError {
                line,
                column,
                message: format!("expected a section keyword, found {}", describe(&tok)),
            });
        };
        match w.as_str() {
            "category" => {
                let mut d = CategoryData::new(p.string()?);
                p.block(|p, key, line, column| {
                    match key {
                        "object" => {
                            d.object(p.string()?);
                        }
                        "arrow" => {
                            let (id, s, t) = (p.string()?, p.string()?, p.string()?);
                            d.arrow(id, s, t);
                        }
                        "identity" => {
                            let (o, a) = (p.string()?, p.string()?);
                            d.identity(o, a);
                        }
                        "compose" => {
                            let (g, f, h) = (p.string()?, p.string()?, p.string()?);
                            d.compose(g, f, h);
                        }
                        _ => return Err(unknown(key, "category", line, column)),
                    }
                    Ok(())
                })?;
                m.categories.push(d);
            }
            "functor" => {
                let mut d = FunctorData::new(p.string()?, p.string()?, p.string()?);
                p.block(|p, key, line, column| {
                    match key {
                        "object" => d.objects.push((p.string()?, p.string()?)),
                        "arrow" => d.arrows.push((p.string()?, p.string()?)),
                        _ => return Err(unknown(key, "functor", line, column)),
                    }
                    Ok(())
                })?;
                m.functors.push(d);
            }
            "pseudofunctor" => {
                let mut d = PseudofunctorData {
                    name: p.string()?,
                    base: p.string()?,
                    ..Default::default()
                };
                p.block(|p, key, line, column| {
                    match key {
                        "poset" => {
                            let mut q = PosetData {
                                object: p.string()?,
                                ..Default::default()
                            };
                            p.block(|p, key, line, column| {
                                match key {
                                    "element" => q.elements.push(p.string()?),
                                    "le" => q.le.push((p.string()?, p.string()?)),
                                    _ => return Err(unknown(key, "poset", line, column)),
                                }
                                Ok(())
                            })?;
                            d.posets.push(q);
                        }
                        "transition" => {
                            let a = p.string()?;
                            d.transitions.push((a, p.strings()?));
                        }
                        _ => return Err(unknown(key, "pseudofunctor", line, column)),
                    }
                    Ok(())
                })?;
                m.pseudofunctors.push(d);
            }
            "expect" => {
                let mut e = Expectation {
                    entry: p.string()?,
                    functor: p.string()?,
                    flags: Vec::new(),
                };
                p.block(|p, key, line, column| {
                    if !FLAG_NAMES.contains(&key) {
                        return Err(unknown(key, "expect", line, column));
                    }
                    e.flags.push((key.to_string(), p.boolean()?));
                    Ok(())
                })?;
                m.expectations.push(e);
            }
            other => {
                return Err(ParseError {
                    line,
                    column,
                    message: format!("unknown section `{other}`"),
                })
            }
        }
    }
    Ok(m)
}

/// Flag names accepted in `expect` blocks, in report order.
pub const FLAG_NAMES: [&str; 7] = [
    "faithful",
    "prefibration",
    "fibration",
    "pretopological",
    "topological",
    "e-functor",
    "m-functor",
];

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for ModelFile {
    /// The canonical form: one statement per line, blocks separated by a
    /// blank line, items in stored order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        let mut sep = |out: &mut String| {
            if !std::mem::take(&mut first) {
                out.push('\n');
            }
        };
        for c in &self.categories {
            sep(&mut out);
            writeln!(out, "category {} {{", quote(&c.name))?;
            for o in &c.objects {
                writeln!(out, "  object {}", quote(o))?;
            }
            for a in &c.arrows {
                writeln!(out, "  arrow {} {} {}", quote(&a.id), quote(&a.src), quote(&a.tgt))?;
            }
            for (o, a) in &c.identities {
                writeln!(out, "  identity {} {}", quote(o), quote(a))?;
            }
            for k in &c.compositions {
                writeln!(
                    out,
                    "  compose {} {} {}",
                    quote(&k.after),
                    quote(&k.first),
                    quote(&k.result)
                )?;
            }
            out.push_str("}\n");
        }
        for u in &self.functors {
            sep(&mut out);
            writeln!(out, "functor {} {} {} {{", quote(&u.name), quote(&u.source), quote(&u.target))?;
            for (x, y) in &u.objects {
                writeln!(out, "  object {} {}", quote(x), quote(y))?;
            }
            for (a, b) in &u.arrows {
                writeln!(out, "  arrow {} {}", quote(a), quote(b))?;
            }
            out.push_str("}\n");
        }
        for p in &self.pseudofunctors {
            sep(&mut out);
            writeln!(out, "pseudofunctor {} {} {{", quote(&p.name), quote(&p.base))?;
            for q in &p.posets {
                writeln!(out, "  poset {} {{", quote(&q.object))?;
                for e in &q.elements {
                    writeln!(out, "    element {}", quote(e))?;
                }
                for (a, b) in &q.le {
                    writeln!(out, "    le {} {}", quote(a), quote(b))?;
                }
                out.push_str("  }\n");
            }
            for (a, vals) in &p.transitions {
                write!(out, "  transition {}", quote(a))?;
                for v in vals {
                    write!(out, " {}", quote(v))?;
                }
                out.push('\n');
            }
            out.push_str("}\n");
        }
        for e in &self.expectations {
            sep(&mut out);
            writeln!(out, "expect {} {} {{", quote(&e.entry), quote(&e.functor))?;
            for (k, v) in &e.flags {
                writeln!(out, "  {k} {v}")?;
            }
            out.push_str("}\n");
        }
        f.write_str(&out)
    }
}

/// A model file with every reference resolved.
#[derive(Clone, Debug, Default)]
pub struct Resolved {
    pub categories: Vec<Arc<FinCat>>,
    pub functors: Vec<FunctorMap>,
    pub pseudofunctors: Vec<PosetPseudofunctor>,
    pub expectations: Vec<Expectation>,
}

impl Resolved {
    pub fn category(&self, name: &str) -> Option<&Arc<FinCat>> {
        self.categories.iter().find(|c| c.name() == name)
    }

    pub fn functor(&self, name: &str) -> Option<&FunctorMap> {
        self.functors.iter().find(|u| u.name == name)
    }

    /// Axiom check of every section, as (section kind, name, report).
    pub fn validate(&self) -> Vec<(&'static str, String, ValidationReport)> {
        let mut out = Vec::new();
        for c in &self.categories {
            out.push(("category", c.name().to_string(), c.validate()));
        }
        for u in &self.functors {
            out.push(("functor", u.name.clone(), u.validate()));
        }
        for p in &self.pseudofunctors {
            out.push(("pseudofunctor", p.name.clone(), p.validate()));
        }
        out
    }
}

impl ModelFile {
    pub fn read(path: &std::path::Path) -> Result<ModelFile> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(parse(&text)?)
    }

    /// Builds every section. Categories are not validated here.
    pub fn resolve(&self) -> Result<Resolved> {
        let mut cats: HashMap<&str, Arc<FinCat>> = HashMap::new();
        let mut categories = Vec::new();
        for d in &self.categories {
            let c = Arc::new(d.build()?);
            if cats.insert(d.name.as_str(), c.clone()).is_some() {
                return Err(Error::Duplicate(d.name.clone()));
            }
            categories.push(c);
        }
        let lookup = |name: &str| {
            cats.get(name)
                .cloned()
                .ok_or_else(|| Error::UnknownSection(name.to_string()))
        };
        let functors = self
            .functors
            .iter()
            .map(|d| d.build(lookup(&d.source)?, lookup(&d.target)?))
            .collect::<Result<Vec<_>>>()?;
        let pseudofunctors = self
            .pseudofunctors
            .iter()
            .map(|d| pseudofunctor_from_data(d, lookup(&d.base)?))
            .collect::<Result<Vec<_>>>()?;
        for e in &self.expectations {
            if !functors.iter().any(|u| u.name == e.functor) {
                return Err(Error::UnknownSection(e.functor.clone()));
            }
        }
        Ok(Resolved {
            categories,
            functors,
            pseudofunctors,
            expectations: self.expectations.clone(),
        })
    }

    /// Adds a category unless one with the same name is already present.
    pub fn add_category(&mut self, c: &FinCat) {
        if !self.categories.iter().any(|d| d.name == c.name()) {
            self.categories.push(c.to_data());
        }
    }

    /// Adds a functor together with its source and target.
    pub fn add_functor(&mut self, u: &FunctorMap) {
        self.add_category(&u.source);
        self.add_category(&u.target);
        self.functors.push(u.to_data());
    }

    pub fn add_pseudofunctor(&mut self, p: &PosetPseudofunctor) {
        self.add_category(&p.base);
        self.pseudofunctors.push(pseudofunctor_to_data(p));
    }
}

pub fn pseudofunctor_to_data(p: &PosetPseudofunctor) -> PseudofunctorData {
    let b = &*p.base;
    PseudofunctorData {
        name: p.name.clone(),
        base: b.name().to_string(),
        posets: b
            .objects()
            .map(|s| {
                let q = &p.posets[s.idx()];
                PosetData {
                    object: b.obj_name(s).to_string(),
                    elements: q.elements.clone(),
                    le: q
                        .hasse_edges()
                        .into_iter()
                        .map(|(x, y)| (q.elements[x].clone(), q.elements[y].clone()))
                        .collect(),
                }
            })
            .collect(),
        transitions: b
            .arrows()
            .map(|a| {
                let src = &p.posets[b.src(a).idx()];
                (
                    b.arr_name(a).to_string(),
                    p.transitions[a.idx()].iter().map(|&v| src.elements[v].clone()).collect(),
                )
            })
            .collect(),
    }
}

pub fn pseudofunctor_from_data(d: &PseudofunctorData, base: Arc<FinCat>) -> Result<PosetPseudofunctor> {
    let mut posets: Vec<Option<FinPoset>> = vec![None; base.num_objects()];
    for q in &d.posets {
        let s = base.obj(&q.object)?;
        let index = |e: &str| {
            q.elements
                .iter()
                .position(|x| x == e)
                .ok_or_else(|| Error::UnknownObject(format!("{e} (in poset over {})", q.object)))
        };
        let mut edges = Vec::with_capacity(q.le.len());
        for (a, b) in &q.le {
            edges.push((index(a)?, index(b)?));
        }
        for (i, e) in q.elements.iter().enumerate() {
            if q.elements[..i].contains(e) {
                return Err(Error::Duplicate(e.clone()));
            }
        }
        if posets[s.idx()].replace(FinPoset::from_edges(q.elements.clone(), &edges)).is_some() {
            return Err(Error::Duplicate(q.object.clone()));
        }
    }
    let posets = posets
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| {
                Error::MissingAssignment(base.obj_name(crate::fincat::Obj(i as u32)).to_string())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut transitions: Vec<Option<Vec<usize>>> = vec![None; base.num_arrows()];
    for (a, vals) in &d.transitions {
        let ai = base.arr(a)?;
        let src = &posets[base.src(ai).idx()];
        let tab = vals
            .iter()
            .map(|v| {
                src.index(v)
                    .ok_or_else(|| Error::UnknownObject(format!("{v} (in transition {a})")))
            })
            .collect::<Result<Vec<_>>>()?;
        if transitions[ai.idx()].replace(tab).is_some() {
            return Err(Error::Duplicate(a.clone()));
        }
    }
    let transitions = transitions
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            t.ok_or_else(|| {
                Error::MissingAssignment(base.arr_name(crate::fincat::Arr(i as u32)).to_string())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PosetPseudofunctor {
        name: d.name.clone(),
        base,
        posets,
        transitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"
# a single arrow
category "I" {
  object "0"
  object "1"
  arrow "00" "0" "0"
  arrow "01" "0" "1"
  arrow "11" "1" "1"
  identity "0" "00"
  identity "1" "11"
  compose "00" "00" "00"
  compose "01" "00" "01"
  compose "11" "01" "01"
  compose "11" "11" "11"
}

pseudofunctor "P" "I" {
  poset "0" { element "lo" element "hi" le "lo" "hi" }
  poset "1" { element "lo" element "hi" le "lo" "hi" }
  transition "00" "lo" "hi"
  transition "01" "lo" "hi"
  transition "11" "lo" "hi"
}
"#;

    #[test]
    fn parse_print_parse_is_stable() {
        let m = parse(SMALL).unwrap();
        let printed = m.to_string();
        let again = parse(&printed).unwrap();
        assert_eq!(m, again);
        assert_eq!(again.to_string(), printed);
        let r = m.resolve().unwrap();
        assert!(r.pseudofunctors[0].validate().is_valid());
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let e = parse("category \"C\" {\n  objekt \"a\"\n}\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("objekt"));
        let e = parse("categories \"C\" {}").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
    }

    #[test]
    fn strings_round_trip_escapes() {
        let mut m = ModelFile::default();
        let mut d = CategoryData::new("odd \"name\" \\ here");
        d.object("a\nb");
        m.categories.push(d);
        assert_eq!(parse(&m.to_string()).unwrap(), m);
    }

    #[test]
    fn unterminated_string_reports_its_start() {
        let e = parse("category \"C {").unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
    }
}
