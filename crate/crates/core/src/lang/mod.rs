//! The small imperative language: numerals, arithmetic, comparison,
//! memory lookup and update, sequencing and while loops.
//!
//! ```text
//! 2 <- *0 ; (0 <- *1 ; 1 <- *2)
//! while *1 > 0 do (0 <- *0 + *1 ; 1 <- *1 - 1)
//! ```

mod eval;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

pub use eval::{
    check_derivation, eval_oracle, run_sum, DerivationError, Derivation, EvalError, EvalRule, Evaluation, Side,
};
pub use parse::{parse_memory, parse_program, LangParseError};

/// A memory: finitely many locations holding naturals.
pub type Memory = BTreeMap<u64, u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Program {
    Num(u64),
    Add(Box<Program>, Box<Program>),
    /// Truncated subtraction.
    Sub(Box<Program>, Box<Program>),
    /// 1 if the left value is greater, else 0.
    Gt(Box<Program>, Box<Program>),
    Deref(Box<Program>),
    /// Store the right value at the location given by the left one.
    Assign(Box<Program>, Box<Program>),
    Seq(Box<Program>, Box<Program>),
    While(Box<Program>, Box<Program>),
}

impl Program {
    pub fn add(a: Program, b: Program) -> Program {
        Program::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Program, b: Program) -> Program {
        Program::Sub(Box::new(a), Box::new(b))
    }

    pub fn gt(a: Program, b: Program) -> Program {
        Program::Gt(Box::new(a), Box::new(b))
    }

    pub fn deref(a: Program) -> Program {
        Program::Deref(Box::new(a))
    }

    pub fn assign(loc: Program, value: Program) -> Program {
        Program::Assign(Box::new(loc), Box::new(value))
    }

    pub fn seq(a: Program, b: Program) -> Program {
        Program::Seq(Box::new(a), Box::new(b))
    }

    pub fn while_do(guard: Program, body: Program) -> Program {
        Program::While(Box::new(guard), Box::new(body))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Program::Num(_) => 1,
            Program::Deref(a) => 1 + a.size(),
            Program::Add(a, b)
            | Program::Sub(a, b)
            | Program::Gt(a, b)
            | Program::Assign(a, b)
            | Program::Seq(a, b)
            | Program::While(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn is_loop_free(&self) -> bool {
        match self {
            Program::Num(_) => true,
            Program::While(..) => false,
            Program::Deref(a) => a.is_loop_free(),
            Program::Add(a, b) | Program::Sub(a, b) | Program::Gt(a, b) | Program::Assign(a, b) | Program::Seq(a, b) => {
                a.is_loop_free() && b.is_loop_free()
            }
        }
    }

    fn level(&self) -> u8 {
        match self {
            Program::Seq(..) => 0,
            Program::Assign(..) => 1,
            Program::Gt(..) => 2,
            Program::Add(..) | Program::Sub(..) => 3,
            Program::Deref(_) => 4,
            Program::Num(_) | Program::While(..) => 5,
        }
    }

    /// Print at binding strength `min`; `open` says nothing follows on the
    /// right, which a `while` needs since its body extends as far as it can.
    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8, open: bool) -> fmt::Result {
        let parens = self.level() < min || (matches!(self, Program::While(..)) && !open);
        let open = open || parens;
        if parens {
            f.write_str("(")?;
        }
        match self {
            Program::Num(n) => write!(f, "{n}")?,
            Program::Add(a, b) | Program::Sub(a, b) => {
                a.write(f, 3, false)?;
                f.write_str(if matches!(self, Program::Add(..)) { " + " } else { " - " })?;
                b.write(f, 4, open)?;
            }
            Program::Gt(a, b) => {
                a.write(f, 3, false)?;
                f.write_str(" > ")?;
                b.write(f, 3, open)?;
            }
            Program::Deref(a) => {
                f.write_str("*")?;
                a.write(f, 4, open)?;
            }
            Program::Assign(a, b) => {
                a.write(f, 2, false)?;
                f.write_str(" <- ")?;
                b.write(f, 1, open)?;
            }
            Program::Seq(a, b) => {
                a.write(f, 1, false)?;
                f.write_str(" ; ")?;
                b.write(f, 0, open)?;
            }
            Program::While(c, b) => {
                f.write_str("while ")?;
                c.write(f, 0, false)?;
                f.write_str(" do ")?;
                b.write(f, 0, open)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0, true)
    }
}

/// `2 <- *0 ; (0 <- *1 ; 1 <- *2)`: exchange locations 0 and 1 through 2.
pub fn swap_program() -> Program {
    let mv = |to, from| Program::assign(Program::Num(to), Program::deref(Program::Num(from)));
    Program::seq(mv(2, 0), Program::seq(mv(0, 1), mv(1, 2)))
}

/// `while *1 > 0 do (0 <- *0 + *1 ; 1 <- *1 - 1)`: add `*1 + ... + 1` to
/// location 0.
pub fn sum_loop() -> Program {
    let at = |l| Program::deref(Program::Num(l));
    Program::while_do(
        Program::gt(at(1), Program::Num(0)),
        Program::seq(
            Program::assign(Program::Num(0), Program::add(at(0), at(1))),
            Program::assign(Program::Num(1), Program::sub(at(1), Program::Num(1))),
        ),
    )
}

/// `0 <- 0 ; (1 <- n ; U)` with `U` the [`sum_loop`].
pub fn sum_program(n: u64) -> Program {
    Program::seq(
        Program::assign(Program::Num(0), Program::Num(0)),
        Program::seq(Program::assign(Program::Num(1), Program::Num(n)), sum_loop()),
    )
}

/// Render a memory as `loc value` lines in location order.
pub fn format_memory(m: &Memory) -> String {
    m.iter().map(|(l, v)| format!("{l} {v}\n")).collect()
}
