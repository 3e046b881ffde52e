//! Big-step reference interpreter that records its derivation.

use std::fmt;

use thiserror::Error;

use super::{sum_program, Memory, Program};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvalRule {
    Num,
    Add,
    Sub,
    GtTrue,
    GtFalse,
    Deref,
    Assign,
    Seq,
    WhileFalse,
    WhileTrue,
}

impl EvalRule {
    pub const ALL: [EvalRule; 10] = [
        EvalRule::Num,
        EvalRule::Add,
        EvalRule::Sub,
        EvalRule::GtTrue,
        EvalRule::GtFalse,
        EvalRule::Deref,
        EvalRule::Assign,
        EvalRule::Seq,
        EvalRule::WhileFalse,
        EvalRule::WhileTrue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EvalRule::Num => "num",
            EvalRule::Add => "add",
            EvalRule::Sub => "sub",
            EvalRule::GtTrue => "gtTrue",
            EvalRule::GtFalse => "gtFalse",
            EvalRule::Deref => "deref",
            EvalRule::Assign => "assign",
            EvalRule::Seq => "seq",
            EvalRule::WhileFalse => "whileFalse",
            EvalRule::WhileTrue => "whileTrue",
        }
    }
}

impl fmt::Display for EvalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Side condition of a rule instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Side {
    /// The memory holds `value` at `loc`.
    Lookup { loc: u64, value: u64 },
    Greater(u64, u64),
    NotGreater(u64, u64),
}

/// `⟨program, input⟩ ⇓ (value, output)` with its premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: EvalRule,
    pub program: Program,
    pub input: Memory,
    pub value: u64,
    pub output: Memory,
    pub premises: Vec<Derivation>,
    pub side: Vec<Side>,
}

impl Drop for Derivation {
    fn drop(&mut self) {
        let mut stack = std::mem::take(&mut self.premises);
        while let Some(mut d) = stack.pop() {
            stack.append(&mut d.premises);
        }
    }
}

impl Derivation {
    /// Visit every rule instance, parents before children.
    pub fn visit(&self, f: &mut impl FnMut(&Derivation)) {
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            f(d);
            stack.extend(d.premises.iter().rev());
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    pub fn count(&self, rule: EvalRule) -> usize {
        let mut n = 0;
        self.visit(&mut |d| n += usize::from(d.rule == rule));
        n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: u64,
    pub memory: Memory,
    pub derivation: Derivation,
    /// Rule instances used.
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("location {loc} is not in memory")]
    Stuck { loc: u64 },
    #[error("step budget exhausted after {steps} rule instances")]
    BudgetExhausted { steps: u64 },
}

struct Evaluator {
    steps: u64,
    budget: u64,
}

impl Evaluator {
    fn tick(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(EvalError::BudgetExhausted { steps: self.steps });
        }
        Ok(())
    }

    fn eval(&mut self, p: &Program, m: Memory) -> Result<Derivation, EvalError> {
        self.tick()?;
        let node = |rule, input, value, output, premises, side| Derivation {
            rule,
            program: p.clone(),
            input,
            value,
            output,
            premises,
            side,
        };
        Ok(match p {
            Program::Num(n) => node(EvalRule::Num, m.clone(), *n, m, vec![], vec![]),
            Program::Add(a, b) | Program::Sub(a, b) | Program::Gt(a, b) => {
                let d1 = self.eval(a, m.clone())?;
                let d2 = self.eval(b, d1.output.clone())?;
                let (n1, n2) = (d1.value, d2.value);
                let out = d2.output.clone();
                let (rule, value, side) = match p {
                    Program::Add(..) => (EvalRule::Add, n1.wrapping_add(n2), vec![]),
                    Program::Sub(..) => (EvalRule::Sub, n1.saturating_sub(n2), vec![]),
                    _ if n1 > n2 => (EvalRule::GtTrue, 1, vec![Side::Greater(n1, n2)]),
                    _ => (EvalRule::GtFalse, 0, vec![Side::NotGreater(n1, n2)]),
                };
                node(rule, m, value, out, vec![d1, d2], side)
            }
            Program::Deref(a) => {
                let d = self.eval(a, m.clone())?;
                let loc = d.value;
                let value = *d.output.get(&loc).ok_or(EvalError::Stuck { loc })?;
                let out = d.output.clone();
                node(EvalRule::Deref, m, value, out, vec![d], vec![Side::Lookup { loc, value }])
            }
            Program::Assign(a, b) => {
                let d1 = self.eval(a, m.clone())?;
                let d2 = self.eval(b, d1.output.clone())?;
                let loc = d1.value;
                let old = *d2.output.get(&loc).ok_or(EvalError::Stuck { loc })?;
                let mut out = d2.output.clone();
                out.insert(loc, d2.value);
                let value = d2.value;
                node(EvalRule::Assign, m, value, out, vec![d1, d2], vec![Side::Lookup { loc, value: old }])
            }
            Program::Seq(a, b) => {
                let d1 = self.eval(a, m.clone())?;
                let d2 = self.eval(b, d1.output.clone())?;
                let (value, out) = (d2.value, d2.output.clone());
                node(EvalRule::Seq, m, value, out, vec![d1, d2], vec![])
            }
            Program::While(c, b) => return self.eval_while(p, c, b, m),
        })
    }

    /// Loops run iteratively; the nested derivation is assembled afterwards.
    fn eval_while(&mut self, p: &Program, c: &Program, b: &Program, m: Memory) -> Result<Derivation, EvalError> {
        let mut rounds = Vec::new();
        let mut input = m;
        let last = loop {
            let d1 = self.eval(c, input.clone())?;
            if d1.value == 0 {
                let out = d1.output.clone();
                break Derivation {
                    rule: EvalRule::WhileFalse,
                    program: p.clone(),
                    input,
                    value: 0,
                    output: out,
                    premises: vec![d1],
                    side: vec![],
                };
            }
            let d2 = self.eval(b, d1.output.clone())?;
            let next = d2.output.clone();
            rounds.push((input, d1, d2));
            input = next;
            self.tick()?;
        };
        let mut d = last;
        while let Some((input, d1, d2)) = rounds.pop() {
            let side = vec![Side::Greater(d1.value, 0)];
            let (value, output) = (d.value, d.output.clone());
            d = Derivation {
                rule: EvalRule::WhileTrue,
                program: p.clone(),
                input,
                value,
                output,
                premises: vec![d1, d2, d],
                side,
            };
        }
        Ok(d)
    }
}

/// Evaluate `p` in `m`, using at most `budget` rule instances.
pub fn eval_oracle(p: &Program, m: &Memory, budget: u64) -> Result<Evaluation, EvalError> {
    let mut ev = Evaluator { steps: 0, budget };
    let derivation = ev.eval(p, m.clone())?;
    Ok(Evaluation { value: derivation.value, memory: derivation.output.clone(), derivation, steps: ev.steps })
}

/// Run `0 <- 0 ; (1 <- n ; U)` from a memory defined at 0 and 1.
pub fn run_sum(n: u64) -> Result<(u64, Memory), EvalError> {
    let m = Memory::from([(0, 0), (1, 0)]);
    let e = eval_oracle(&sum_program(n), &m, u64::MAX)?;
    Ok((e.value, e.memory))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{rule} instance for `{program}`: {reason}")]
pub struct DerivationError {
    pub rule: EvalRule,
    pub program: String,
    pub reason: String,
}

/// Re-verify every rule instance of `d` against its schema.
pub fn check_derivation(d: &Derivation) -> Result<(), DerivationError> {
    let mut stack = vec![d];
    while let Some(d) = stack.pop() {
        check_instance(d).map_err(|reason| DerivationError {
            rule: d.rule,
            program: d.program.to_string(),
            reason: reason.to_string(),
        })?;
        stack.extend(&d.premises);
    }
    Ok(())
}

fn check_instance(d: &Derivation) -> Result<(), &'static str> {
    let ps = &d.premises;
    let arity = match d.rule {
        EvalRule::Num => 0,
        EvalRule::Deref | EvalRule::WhileFalse => 1,
        EvalRule::WhileTrue => 3,
        _ => 2,
    };
    if ps.len() != arity {
        return Err("wrong number of premises");
    }
    // Premises thread memory left to right, starting from the input.
    let mut mem = &d.input;
    for q in ps {
        if &q.input != mem {
            return Err("premise memories are not threaded");
        }
        mem = &q.output;
    }
    let last_out = mem;
    let shape_ok = match (d.rule, &d.program) {
        (EvalRule::Num, Program::Num(_)) | (EvalRule::Deref, Program::Deref(_)) => true,
        (EvalRule::Add, Program::Add(..)) | (EvalRule::Sub, Program::Sub(..)) => true,
        (EvalRule::GtTrue | EvalRule::GtFalse, Program::Gt(..)) => true,
        (EvalRule::Assign, Program::Assign(..)) | (EvalRule::Seq, Program::Seq(..)) => true,
        (EvalRule::WhileFalse | EvalRule::WhileTrue, Program::While(..)) => true,
        _ => false,
    };
    if !shape_ok {
        return Err("rule does not match the program");
    }
    if ps.iter().zip(parts(&d.program)).any(|(q, p)| &q.program != p) {
        return Err("premise evaluates the wrong subprogram");
    }
    let v = |i: usize| ps[i].value;
    let ok = match d.rule {
        EvalRule::Num => matches!(d.program, Program::Num(n) if n == d.value) && d.output == d.input,
        EvalRule::Add => d.value == v(0).wrapping_add(v(1)) && &d.output == last_out,
        EvalRule::Sub => d.value == v(0).saturating_sub(v(1)) && &d.output == last_out,
        EvalRule::GtTrue => v(0) > v(1) && d.value == 1 && &d.output == last_out,
        EvalRule::GtFalse => v(0) <= v(1) && d.value == 0 && &d.output == last_out,
        EvalRule::Deref => last_out.get(&v(0)) == Some(&d.value) && &d.output == last_out,
        EvalRule::Assign => {
            let mut expect = last_out.clone();
            last_out.contains_key(&v(0))
                && expect.insert(v(0), v(1)).is_some()
                && d.value == v(1)
                && d.output == expect
        }
        EvalRule::Seq => d.value == v(1) && &d.output == last_out,
        EvalRule::WhileFalse => v(0) == 0 && d.value == 0 && &d.output == last_out,
        EvalRule::WhileTrue => {
            v(0) > 0 && ps[2].program == d.program && d.value == v(2) && &d.output == last_out
        }
    };
    if ok {
        Ok(())
    } else {
        Err("conclusion does not follow from the premises")
    }
}

fn parts(p: &Program) -> Vec<&Program> {
    match p {
        Program::Num(_) => vec![],
        Program::Deref(a) => vec![a],
        Program::Add(a, b)
        | Program::Sub(a, b)
        | Program::Gt(a, b)
        | Program::Assign(a, b)
        | Program::Seq(a, b)
        | Program::While(a, b) => vec![a, b],
    }
}
