//! Concrete syntax for types, terms and formulas: lexer, parser, printer.
//!
//! The grammar is documented in `docs/syntax.md`. Printing and parsing
//! round-trip: `parse(print(t)) == t` for any term whose constants are
//! declared in the signature used for parsing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::formula::{logical, BuiltinRel, Formula};
use crate::term::{Const, ConstKind, Eigen, MetaVar, Node, SimpleType, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError { line: pos.line, col: pos.col, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

// ---------------------------------------------------------------------------
// Signature

/// Declared non-logical constants.
#[derive(Debug, Clone)]
pub struct Signature {
    consts: BTreeMap<String, Const>,
    /// Declare unknown identifiers on first use (as propositions, or with the
    /// type their position demands).
    pub auto_declare: bool,
}

impl Default for Signature {
    fn default() -> Signature {
        Signature { consts: BTreeMap::new(), auto_declare: true }
    }
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    /// Signature that rejects undeclared identifiers.
    pub fn strict() -> Signature {
        Signature { consts: BTreeMap::new(), auto_declare: false }
    }

    pub fn declare(&mut self, name: &str, ty: SimpleType) -> Result<Const, String> {
        if is_keyword(name) {
            return Err(format!("`{name}` is reserved"));
        }
        match self.consts.get(name) {
            Some(c) if c.ty != ty => Err(format!("`{name}` redeclared: {} vs {}", c.ty, ty)),
            Some(c) => Ok(c.clone()),
            None => {
                let c = Const::nonlogical(name, ty);
                self.consts.insert(name.to_string(), c.clone());
                Ok(c)
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&Const> {
        self.consts.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Const> {
        self.consts.values()
    }

    /// Record every non-logical constant occurring in `t`.
    pub fn absorb_term(&mut self, t: &Term) {
        t.any(&mut |s| {
            if let Node::Const(c) = s.node() {
                if c.kind == ConstKind::NonLogical {
                    self.consts.entry(c.name.to_string()).or_insert_with(|| c.clone());
                }
            }
            false
        });
    }
}

const KEYWORDS: &[&str] = &["all", "ex", "top", "sig"];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Builtin(String),
    Int(u64),
    Meta(u32),
    Eigen(u32),
    Sym(&'static str),
    Newline,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Builtin(s) => write!(f, "`#{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Meta(n) => write!(f, "`?{n}`"),
            Tok::Eigen(n) => write!(f, "`${n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Newline => write!(f, "end of line"),
        }
    }
}

const SYMBOLS: &[&str] = &[
    "|-", "-o", "->", "=>", "(", ")", ":", ".", ",", ";", "|", "&", "*", "+", "!", "\\", "[", "]", "{", "}",
    "@",
];

/// Split `src` into tokens. With `newlines`, line ends are significant and
/// reported as [`Tok::Newline`].
pub fn lex(src: &str, newlines: bool) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            if newlines && !matches!(out.last(), Some((Tok::Newline, _)) | None) {
                out.push((Tok::Newline, pos));
            }
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| ParseError::new(pos, format!("numeral `{s}` out of range")))?;
            out.push((Tok::Int(n), pos));
        } else if c == '#' || c == '?' || c == '$' {
            i += 1;
            let body_start = i;
            if c == '#' {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[body_start..i].iter().collect();
                if name.is_empty() {
                    return Err(ParseError::new(pos, "expected a builtin name after `#`"));
                }
                out.push((Tok::Builtin(name), pos));
            } else {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[body_start..i].iter().collect();
                let n: u32 = s
                    .parse()
                    .map_err(|_| ParseError::new(pos, format!("expected a number after `{c}`")))?;
                out.push((if c == '?' { Tok::Meta(n) } else { Tok::Eigen(n) }, pos));
            }
        } else {
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(**s))
                .ok_or_else(|| ParseError::new(pos, format!("unexpected character `{c}`")))?;
            i += sym.chars().count();
        out.push((Tok::Sym(sym), pos));
        }
        col += i - start;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

#[derive(Debug, Clone)]
enum Raw {
    Ident(String, Pos),
    Builtin(String, Pos),
    Int(u64, Pos),
    Meta(u32, Option<SimpleType>, Pos),
    Eigen(u32, Option<SimpleType>, Pos),
    Top(Pos),
    App(Box<Raw>, Vec<Raw>),
    Bin(&'static str, Box<Raw>, Box<Raw>, Pos),
    Bang(Box<Raw>, Pos),
    Binder(&'static str, String, SimpleType, Box<Raw>, Pos),
}

impl Raw {
    fn pos(&self) -> Pos {
        match self {
            Raw::Ident(_, p)
            | Raw::Builtin(_, p)
            | Raw::Int(_, p)
            | Raw::Meta(_, _, p)
            | Raw::Eigen(_, _, p)
            | Raw::Top(p)
            | Raw::Bin(_, _, _, p)
            | Raw::Bang(_, p)
            | Raw::Binder(_, _, _, _, p) => *p,
            Raw::App(h, _) => h.pos(),
        }
    }
}

/// Token-stream parser shared by all textual formats.
pub struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    end: Pos,
    pub sig: &'a mut Signature,
    ctx: Vec<(String, SimpleType)>,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, sig: &'a mut Signature, newlines: bool) -> Result<Parser<'a>, ParseError> {
        let toks = lex(src, newlines)?;
        let lines = src.lines().count().max(1);
        let last_len = src.lines().last().map_or(0, |l| l.chars().count());
        Ok(Parser { toks, i: 0, end: Pos { line: lines, col: last_len + 1 }, sig, ctx: Vec::new() })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    pub fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |(_, p)| *p)
    }

    pub fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    pub fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(t, _)| t.clone());
        self.i += 1;
        t
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{s}`")))
        }
    }

    pub fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Tok::Newline)) {
            self.i += 1;
        }
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.pos(), format!("expected {wanted}, found {t}")),
            None => ParseError::new(self.pos(), format!("expected {wanted}, found end of input")),
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn int(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.i += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    pub fn ty(&mut self) -> Result<SimpleType, ParseError> {
        let a = self.atype()?;
        if self.eat_sym("->") {
            Ok(SimpleType::arrow(a, self.ty()?))
        } else {
            Ok(a)
        }
    }

    fn atype(&mut self) -> Result<SimpleType, ParseError> {
        if self.eat_sym("(") {
            let t = self.ty()?;
            self.expect_sym(")")?;
            return Ok(t);
        }
        let pos = self.pos();
        let name = self.ident()?;
        match name.as_str() {
            "o" => Ok(SimpleType::O),
            "i" => Ok(SimpleType::Iota),
            "nat" => Ok(SimpleType::Nat),
            "prog" => Ok(SimpleType::Prog),
            other => Err(ParseError::new(pos, format!("unknown type `{other}`"))),
        }
    }

    /// `sig name : type .` — caller has checked for the `sig` keyword.
    pub fn declaration(&mut self) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Ident(k)) if k == "sig" => {}
            _ => return Err(ParseError::new(pos, "expected `sig`")),
        }
        let pos = self.pos();
        let name = self.ident()?;
        self.expect_sym(":")?;
        let ty = self.ty()?;
        self.expect_sym(".")?;
        self.sig.declare(&name, ty).map_err(|m| ParseError::new(pos, m))?;
        Ok(())
    }

    pub fn is_declaration(&self) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == "sig")
    }

    /// Parse and type a term; `expected` guides auto-declaration.
    pub fn term(&mut self, expected: Option<&SimpleType>) -> Result<Term, ParseError> {
        let raw = self.expr()?;
        self.elaborate(&raw, expected)
    }

    pub fn formula(&mut self) -> Result<Formula, ParseError> {
        Ok(Formula::from_term(self.term(Some(&SimpleType::O))?))
    }

    /// Comma-separated formulas up to (not including) any token in `stop`.
    pub fn formula_list(&mut self, stop: &[&str]) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if stop.iter().any(|s| self.is_sym(s)) {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if !self.eat_sym(",") {
                return Ok(out);
            }
        }
    }

    fn expr(&mut self) -> Result<Raw, ParseError> {
        if let Some(b) = self.binder()? {
            return Ok(b);
        }
        let lhs = self.level(0)?;
        let pos = self.pos();
        for op in [logical::LOLLI, logical::IMP] {
            if self.eat_sym(op) {
                let rhs = self.expr()?;
                return Ok(Raw::Bin(op, Box::new(lhs), Box::new(rhs), pos));
            }
        }
        Ok(lhs)
    }

    fn binder(&mut self) -> Result<Option<Raw>, ParseError> {
        let pos = self.pos();
        let kind = match self.peek() {
            Some(Tok::Ident(s)) if s == "all" => logical::ALL,
            Some(Tok::Ident(s)) if s == "ex" => logical::EX,
            Some(Tok::Sym("\\")) => "\\",
            _ => return Ok(None),
        };
        self.i += 1;
        let name = self.ident()?;
        self.expect_sym(":")?;
        let ty = self.ty()?;
        self.expect_sym(".")?;
        let body = self.expr()?;
        Ok(Some(Raw::Binder(kind, name, ty, Box::new(body), pos)))
    }

    /// Right-associative infix levels: `+`, `&`, `*`.
    fn level(&mut self, n: usize) -> Result<Raw, ParseError> {
        const OPS: [&str; 3] = [logical::OPLUS, logical::WITH, logical::TENSOR];
        if n == OPS.len() {
            return self.unary();
        }
        let lhs = self.level(n + 1)?;
        let pos = self.pos();
        if self.eat_sym(OPS[n]) {
            let rhs = match self.binder()? {
                Some(b) => b,
                None => self.level(n)?,
            };
            return Ok(Raw::Bin(OPS[n], Box::new(lhs), Box::new(rhs), pos));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Raw, ParseError> {
        let pos = self.pos();
        if self.eat_sym("!") {
            let inner = match self.binder()? {
                Some(b) => b,
                None => self.unary()?,
            };
            return Ok(Raw::Bang(Box::new(inner), pos));
        }
        let head = self.atom()?;
        let mut args = Vec::new();
        while self.starts_atom() {
            args.push(self.atom()?);
        }
        Ok(if args.is_empty() { head } else { Raw::App(Box::new(head), args) })
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => !matches!(s.as_str(), "all" | "ex" | "sig"),
            Some(Tok::Builtin(_) | Tok::Int(_) | Tok::Meta(_) | Tok::Eigen(_)) => true,
            Some(Tok::Sym("(")) => true,
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if s == "top" => {
                self.i += 1;
                Ok(Raw::Top(pos))
            }
            Some(Tok::Ident(s)) if !is_keyword(&s) => {
                self.i += 1;
                Ok(Raw::Ident(s, pos))
            }
            Some(Tok::Builtin(s)) => {
                self.i += 1;
                Ok(Raw::Builtin(s, pos))
            }
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(Raw::Int(n, pos))
            }
            Some(Tok::Meta(n)) => {
                self.i += 1;
                let ty = if self.eat_sym(":") { Some(self.atype()?) } else { None };
                Ok(Raw::Meta(n, ty, pos))
            }
            Some(Tok::Eigen(n)) => {
                self.i += 1;
                let ty = if self.eat_sym(":") { Some(self.atype()?) } else { None };
                Ok(Raw::Eigen(n, ty, pos))
            }
            Some(Tok::Sym("(")) => {
                self.i += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    // -- elaboration ---------------------------------------------------------

    fn lookup_bound(&self, name: &str) -> Option<(u32, SimpleType)> {
        self.ctx
            .iter()
            .rev()
            .position(|(n, _)| n == name)
            .map(|i| (i as u32, self.ctx[self.ctx.len() - 1 - i].1.clone()))
    }

    fn resolve_ident(&mut self, name: &str, ty_if_new: SimpleType, pos: Pos) -> Result<Term, ParseError> {
        if let Some((i, _)) = self.lookup_bound(name) {
            return Ok(Term::bound(i));
        }
        if let Some(c) = self.sig.get(name) {
            return Ok(Term::constant(c.clone()));
        }
        if !self.sig.auto_declare {
            return Err(ParseError::new(pos, format!("undeclared identifier `{name}`")));
        }
        let c = self.sig.declare(name, ty_if_new).map_err(|m| ParseError::new(pos, m))?;
        Ok(Term::constant(c))
    }

    fn ident_type(&self, name: &str) -> Option<SimpleType> {
        if let Some((_, ty)) = self.lookup_bound(name) {
            return Some(ty);
        }
        self.sig.get(name).map(|c| c.ty.clone())
    }

    fn elaborate(&mut self, raw: &Raw, expected: Option<&SimpleType>) -> Result<Term, ParseError> {
        let (t, ty) = self.elab(raw, expected)?;
        if let Some(e) = expected {
            if *e != ty {
                return Err(ParseError::new(raw.pos(), format!("expected type {e}, found {ty}")));
            }
        }
        Ok(t)
    }

    fn elab(&mut self, raw: &Raw, expected: Option<&SimpleType>) -> Result<(Term, SimpleType), ParseError> {
        let o = SimpleType::O;
        match raw {
            Raw::Ident(name, pos) => {
                let ty = self.ident_type(name).unwrap_or_else(|| expected.cloned().unwrap_or(SimpleType::O));
                let t = self.resolve_ident(name, ty.clone(), *pos)?;
                Ok((t, ty))
            }
            Raw::Builtin(name, pos) => {
                let rel = BuiltinRel::from_name(name)
                    .ok_or_else(|| ParseError::new(*pos, format!("unknown builtin `#{name}`")))?;
                let c = rel.constant();
                let ty = c.ty.clone();
                Ok((Term::constant(c), ty))
            }
            Raw::Int(n, _) => Ok((Term::nat(*n), SimpleType::Nat)),
            Raw::Meta(id, ty, pos) => {
                let ty = ty
                    .clone()
                    .or_else(|| expected.cloned())
                    .ok_or_else(|| ParseError::new(*pos, "metavariable needs a type annotation"))?;
                Ok((Term::meta(MetaVar { id: *id, ty: ty.clone() }), ty))
            }
            Raw::Eigen(id, ty, pos) => {
                let ty = ty
                    .clone()
                    .or_else(|| expected.cloned())
                    .ok_or_else(|| ParseError::new(*pos, "eigenvariable needs a type annotation"))?;
                Ok((Term::eigen(Eigen { id: *id, ty: ty.clone() }), ty))
            }
            Raw::Top(_) => Ok((Formula::top().into_term(), o)),
            Raw::Bang(inner, _) => {
                let g = self.elaborate(inner, Some(&o))?;
                Ok((Formula::bang(Formula::from_term(g)).into_term(), o))
            }
            Raw::Bin(op, a, b, _) => {
                let a = Formula::from_term(self.elaborate(a, Some(&o))?);
                let b = Formula::from_term(self.elaborate(b, Some(&o))?);
                let f = match *op {
                    logical::WITH => Formula::with(a, b),
                    logical::LOLLI => Formula::lolli(a, b),
                    logical::IMP => Formula::imp(a, b),
                    logical::TENSOR => Formula::tensor(a, b),
                    logical::OPLUS => Formula::oplus(a, b),
                    _ => unreachable!("operator table"),
                };
                Ok((f.into_term(), o))
            }
            Raw::Binder(kind, name, ty, body, pos) => {
                let (body_expected, is_lam) = match *kind {
                    "\\" => match expected {
                        Some(SimpleType::Arrow(dom, cod)) => {
                            if **dom != *ty {
                                return Err(ParseError::new(
                                    *pos,
                                    format!("binder type {ty} does not match expected {dom}"),
                                ));
                            }
                            (Some((**cod).clone()), true)
                        }
                        _ => (None, true),
                    },
                    _ => (Some(o.clone()), false),
                };
                self.ctx.push((name.clone(), ty.clone()));
                let r = self.elab(body, body_expected.as_ref());
                self.ctx.pop();
                let (b, bty) = r?;
                if let Some(e) = &body_expected {
                    if *e != bty {
                        return Err(ParseError::new(body.pos(), format!("expected type {e}, found {bty}")));
                    }
                }
                let lam = Term::lam(ty.clone(), name, b);
                if is_lam {
                    Ok((lam, SimpleType::arrow(ty.clone(), bty)))
                } else if *kind == logical::ALL {
                    Ok((Formula::forall_lam(ty.clone(), lam).into_term(), o))
                } else {
                    Ok((Formula::exists_lam(ty.clone(), lam).into_term(), o))
                }
            }
            Raw::App(head, args) => {
                // Unknown heads are declared from their argument types.
                if let Raw::Ident(name, pos) = &**head {
                    if self.ident_type(name).is_none() {
                        let mut arg_terms = Vec::new();
                        let mut arg_tys = Vec::new();
                        for a in args {
                            let (t, ty) = self.elab(a, None)?;
                            arg_terms.push(t);
                            arg_tys.push(ty);
                        }
                        let result = expected.cloned().unwrap_or(SimpleType::O);
                        let ty = SimpleType::curried(&arg_tys, result.clone());
                        let h = self.resolve_ident(name, ty, *pos)?;
                        return Ok((Term::apps(h, arg_terms), result));
                    }
                }
                let (mut t, mut ty) = self.elab(head, None)?;
                for a in args {
                    let (dom, cod) = match ty {
                        SimpleType::Arrow(d, c) => (*d, *c),
                        other => {
                            return Err(ParseError::new(
                                a.pos(),
                                format!("term of type {other} applied to an argument"),
                            ))
                        }
                    };
                    let at = self.elaborate(a, Some(&dom))?;
                    t = Term::app(t, at);
                    ty = cod;
                }
                Ok((t, ty))
            }
        }
    }
}

pub fn parse_type(src: &str) -> Result<SimpleType, ParseError> {
    let mut sig = Signature::new();
    let mut p = Parser::new(src, &mut sig, false)?;
    let t = p.ty()?;
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}

/// Parse a closed term; `sig` lines may precede it.
pub fn parse_term(src: &str, sig: &mut Signature, expected: Option<&SimpleType>) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, sig, false)?;
    while p.is_declaration() {
        p.declaration()?;
    }
    let t = p.term(expected)?;
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}

pub fn parse_formula(src: &str, sig: &mut Signature) -> Result<Formula, ParseError> {
    Ok(Formula::from_term(parse_term(src, sig, Some(&SimpleType::O))?))
}

// ---------------------------------------------------------------------------
// Printer

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Prec {
    Top,
    Imp,
    Oplus,
    With,
    Tensor,
    Bang,
    App,
    Atom,
}

fn binary_prec(name: &str) -> Option<Prec> {
    match name {
        logical::LOLLI | logical::IMP => Some(Prec::Imp),
        logical::OPLUS => Some(Prec::Oplus),
        logical::WITH => Some(Prec::With),
        logical::TENSOR => Some(Prec::Tensor),
        _ => None,
    }
}

fn open(w: &mut dyn fmt::Write, paren: bool) -> fmt::Result {
    if paren {
        w.write_char('(')?;
    }
    Ok(())
}

fn close(w: &mut dyn fmt::Write, paren: bool) -> fmt::Result {
    if paren {
        w.write_char(')')?;
    }
    Ok(())
}

fn write_atype(w: &mut dyn fmt::Write, ty: &SimpleType) -> fmt::Result {
    if ty.is_arrow() {
        write!(w, "({ty})")
    } else {
        write!(w, "{ty}")
    }
}

/// Print `t` with bound variables named from `names` (innermost last).
pub fn write_term(w: &mut dyn fmt::Write, t: &Term, names: &mut Vec<String>, prec: Prec) -> fmt::Result {
    let (head, args) = t.spine();
    if let Node::Const(c) = head.node() {
        if c.kind == ConstKind::Logical {
            match (&*c.name, args.as_slice()) {
                (logical::TOP, []) => return w.write_str("top"),
                (logical::BANG, [a]) => {
                    let paren = prec > Prec::Bang;
                    open(w, paren)?;
                    w.write_char('!')?;
                    write_term(w, a, names, Prec::Bang)?;
                    return close(w, paren);
                }
                (op, [a, b]) if binary_prec(op).is_some() => {
                    let p = binary_prec(op).expect("checked");
                    let paren = prec > p;
                    open(w, paren)?;
                    write_term(w, a, names, next_prec(p))?;
                    write!(w, " {op} ")?;
                    write_term(w, b, names, p)?;
                    return close(w, paren);
                }
                (q @ (logical::ALL | logical::EX), [body]) => {
                    if let Node::Lam(ty, hint, inner) = body.node() {
                        let paren = prec > Prec::Top;
                        open(w, paren)?;
                        let name = fresh_name(&hint.0, inner, names);
                        write!(w, "{q} {name} : {ty}. ")?;
                        names.push(name);
                        let r = write_term(w, inner, names, Prec::Top);
                        names.pop();
                        r?;
                        return close(w, paren);
                    }
                }
                _ => {}
            }
        }
    }
    if args.is_empty() {
        return write_atom(w, t, names, prec);
    }
    let paren = prec > Prec::App;
    open(w, paren)?;
    write_atom(w, head, names, Prec::Atom)?;
    for a in args {
        w.write_char(' ')?;
        write_term(w, a, names, Prec::Atom)?;
    }
    close(w, paren)
}

fn next_prec(p: Prec) -> Prec {
    match p {
        Prec::Top => Prec::Imp,
        Prec::Imp => Prec::Oplus,
        Prec::Oplus => Prec::With,
        Prec::With => Prec::Tensor,
        Prec::Tensor => Prec::Bang,
        Prec::Bang => Prec::App,
        Prec::App | Prec::Atom => Prec::Atom,
    }
}

fn write_atom(w: &mut dyn fmt::Write, t: &Term, names: &mut Vec<String>, prec: Prec) -> fmt::Result {
    match t.node() {
        Node::Bound(i) => {
            let i = *i as usize;
            if i < names.len() {
                w.write_str(&names[names.len() - 1 - i])
            } else {
                write!(w, "^{i}")
            }
        }
        Node::Free(v) => w.write_str(&v.name),
        Node::Const(c) => match c.kind {
            ConstKind::Builtin => write!(w, "#{}", c.name),
            ConstKind::Logical if c.name.as_ref() == logical::TOP => w.write_str("top"),
            ConstKind::Logical => write!(w, "({})", c.name),
            ConstKind::NonLogical => w.write_str(&c.name),
        },
        Node::Nat(n) => write!(w, "{n}"),
        Node::Meta(m) => {
            write!(w, "?{}:", m.id)?;
            write_atype(w, &m.ty)
        }
        Node::Eigen(e) => {
            write!(w, "${}:", e.id)?;
            write_atype(w, &e.ty)
        }
        Node::Lam(ty, hint, body) => {
            let paren = prec > Prec::Top;
            open(w, paren)?;
            let name = fresh_name(&hint.0, body, names);
            write!(w, "\\{name} : {ty}. ")?;
            names.push(name);
            let r = write_term(w, body, names, Prec::Top);
            names.pop();
            r?;
            close(w, paren)
        }
        Node::App(..) => write_term(w, t, names, prec),
    }
}

/// A binder name based on `hint` that neither shadows an enclosing binder
/// nor captures a free name of `body`.
fn fresh_name(hint: &str, body: &Term, names: &[String]) -> String {
    let mut taken: BTreeSet<String> = names.iter().cloned().collect();
    body.any(&mut |s| {
        match s.node() {
            Node::Free(v) => {
                taken.insert(v.name.to_string());
            }
            Node::Const(c) if c.kind == ConstKind::NonLogical => {
                taken.insert(c.name.to_string());
            }
            _ => {}
        }
        false
    });
    let mut name = if hint.is_empty() || is_keyword(hint) { "x".to_string() } else { hint.to_string() };
    while taken.contains(&name) || is_keyword(&name) {
        name.push('\'');
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(src: &str) -> String {
        let mut sig = Signature::new();
        let f = parse_formula(src, &mut sig).unwrap();
        let printed = f.to_string();
        let again = parse_formula(&printed, &mut sig).unwrap();
        assert_eq!(f, again, "{src} printed as {printed}");
        printed
    }

    #[test]
    fn precedence_of_connectives() {
        assert_eq!(roundtrip("a * b & c + d -o e"), "a * b & c + d -o e");
        assert_eq!(roundtrip("(a -o b) -o c"), "(a -o b) -o c");
        assert_eq!(roundtrip("a -o b => c"), "a -o b => c");
        assert_eq!(roundtrip("!a * b"), "!a * b");
        assert_eq!(roundtrip("!(a * b)"), "!(a * b)");
        assert_eq!(roundtrip("a & (b & c)"), "a & b & c");
        assert_eq!(roundtrip("(a & b) & c"), "(a & b) & c");
    }

    #[test]
    fn quantifiers_and_application() {
        let mut sig = Signature::new();
        sig.declare("p", SimpleType::arrow(SimpleType::Iota, SimpleType::O)).unwrap();
        sig.declare("c", SimpleType::Iota).unwrap();
        let f = parse_formula("all x : i. p x -o p c", &mut sig).unwrap();
        assert_eq!(f.to_string(), "all x : i. p x -o p c");
        let g = parse_formula("ex y : i. p y", &mut sig).unwrap();
        assert!(matches!(g.view(), crate::formula::View::Exists(_)));
        assert_eq!(roundtrip("a & (all x : i. q x)"), "a & (all x : i. q x)");
    }

    #[test]
    fn auto_declares_predicates_from_arguments() {
        let mut sig = Signature::new();
        let f = parse_formula("m 0 5", &mut sig).unwrap();
        assert_eq!(sig.get("m").unwrap().ty, SimpleType::curried(&[SimpleType::Nat, SimpleType::Nat], SimpleType::O));
        assert_eq!(f.to_string(), "m 0 5");
    }

    #[test]
    fn builtins_metas_and_eigens() {
        let src = "#add3 ?1:nat 2 ?3:nat * #gt $4:nat 0";
        assert_eq!(roundtrip(src), src);
    }

    #[test]
    fn strict_signature_rejects_unknown_names() {
        let mut sig = Signature::strict();
        let err = parse_formula("a & b", &mut sig).unwrap_err();
        assert_eq!((err.line, err.col), (1, 1));
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        let mut sig = Signature::new();
        let err = parse_formula("a &\n  & b", &mut sig).unwrap_err();
        assert_eq!((err.line, err.col), (2, 3));
    }

    #[test]
    fn ill_typed_application_is_rejected() {
        let mut sig = Signature::new();
        sig.declare("x", SimpleType::Iota).unwrap();
        sig.declare("y", SimpleType::Iota).unwrap();
        assert!(parse_term("x y", &mut sig, None).is_err());
    }

    #[test]
    fn lambda_terms() {
        let mut sig = Signature::new();
        sig.declare("f", SimpleType::curried(&[SimpleType::Iota, SimpleType::Iota], SimpleType::Iota)).unwrap();
        sig.declare("c", SimpleType::Iota).unwrap();
        let t = parse_term("\\x : i. f x x", &mut sig, None).unwrap();
        assert_eq!(t.to_string(), "\\x : i. f x x");
        let applied = Term::app(t, Term::constant(sig.get("c").unwrap().clone()));
        assert_eq!(applied.to_string(), "f c c");
    }

    #[test]
    fn types_parse_right_associatively() {
        let t = parse_type("nat -> nat -> o").unwrap();
        assert_eq!(t, SimpleType::curried(&[SimpleType::Nat, SimpleType::Nat], SimpleType::O));
        assert_eq!(parse_type("(nat -> o) -> o").unwrap().to_string(), "(nat -> o) -> o");
    }
}
