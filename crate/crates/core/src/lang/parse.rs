//! Surface syntax of programs and memory files.
//!
//! Binding strength, tightest first: `*`, then `+`/`-` (left
//! associative), then `>`, then `<-` (right associative), then `;` (right
//! associative). A `while` body extends as far right as possible.

use thiserror::Error;

use super::{Memory, Program};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct LangParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(u64),
    Sym(&'static str),
    While,
    Do,
    End,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::While => f.write_str("`while`"),
            Tok::Do => f.write_str("`do`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn err(line: usize, col: usize, message: impl Into<String>) -> LangParseError {
    LangParseError { line, col, message: message.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize, usize)>, LangParseError> {
    let mut toks = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                bump(&mut chars);
            }
            let n = s.parse().map_err(|_| err(l, k, format!("numeral `{s}` is too large")))?;
            toks.push((Tok::Num(n), l, k));
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                s.push(d);
                bump(&mut chars);
            }
            let t = match s.as_str() {
                "while" => Tok::While,
                "do" => Tok::Do,
                _ => return Err(err(l, k, format!("unknown word `{s}`"))),
            };
            toks.push((t, l, k));
        } else {
            bump(&mut chars);
            let sym = match c {
                '<' if chars.peek() == Some(&'-') => {
                    bump(&mut chars);
                    "<-"
                }
                '*' => "*",
                '+' => "+",
                '-' => "-",
                '>' => ">",
                ';' => ";",
                '(' => "(",
                ')' => ")",
                _ => return Err(err(l, k, format!("unexpected character `{c}`"))),
            };
            toks.push((Tok::Sym(sym), l, k));
        }
    }
    toks.push((Tok::End, line, col));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(t) if *t == s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> LangParseError {
        let (t, line, col) = &self.toks[self.pos];
        err(*line, *col, format!("expected {expected}, found {t}"))
    }

    fn seq(&mut self) -> Result<Program, LangParseError> {
        let a = self.assign()?;
        if self.eat(";") {
            Ok(Program::seq(a, self.seq()?))
        } else {
            Ok(a)
        }
    }

    fn assign(&mut self) -> Result<Program, LangParseError> {
        let a = self.cmp()?;
        if self.eat("<-") {
            Ok(Program::assign(a, self.assign()?))
        } else {
            Ok(a)
        }
    }

    fn cmp(&mut self) -> Result<Program, LangParseError> {
        let a = self.sum()?;
        if self.eat(">") {
            Ok(Program::gt(a, self.sum()?))
        } else {
            Ok(a)
        }
    }

    fn sum(&mut self) -> Result<Program, LangParseError> {
        let mut a = self.unary()?;
        loop {
            if self.eat("+") {
                a = Program::add(a, self.unary()?);
            } else if self.eat("-") {
                a = Program::sub(a, self.unary()?);
            } else {
                return Ok(a);
            }
        }
    }

    fn unary(&mut self) -> Result<Program, LangParseError> {
        if self.eat("*") {
            return Ok(Program::deref(self.unary()?));
        }
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Program::Num(n))
            }
            Tok::Sym("(") => {
                self.bump();
                let p = self.seq()?;
                if !self.eat(")") {
                    return Err(self.unexpected("`)`"));
                }
                Ok(p)
            }
            Tok::While => {
                self.bump();
                let guard = self.seq()?;
                if !matches!(self.peek(), Tok::Do) {
                    return Err(self.unexpected("`do`"));
                }
                self.bump();
                Ok(Program::while_do(guard, self.seq()?))
            }
            _ => Err(self.unexpected("a program")),
        }
    }
}

pub fn parse_program(src: &str) -> Result<Program, LangParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let prog = p.seq()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(prog)
}

/// Memory files hold one `loc value` pair per line; blank lines and text
/// after `#` are ignored.
pub fn parse_memory(src: &str) -> Result<Memory, LangParseError> {
    let mut m = Memory::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let col = raw.len() - raw.trim_start().len() + 1;
        let [loc, value] = fields.as_slice() else {
            return Err(err(i + 1, col, "expected `loc value`"));
        };
        let num = |s: &str| s.parse::<u64>().map_err(|_| err(i + 1, col, format!("`{s}` is not a natural number")));
        let (loc, value) = (num(loc)?, num(value)?);
        if m.insert(loc, value).is_some() {
            return Err(err(i + 1, col, format!("location {loc} is given twice")));
        }
    }
    Ok(m)
}
