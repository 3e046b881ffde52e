//! Backchaining proof search.
//!
//! [`prove`] searches depth-first for a proof in the backchaining system:
//! right rules are applied eagerly, and an atomic goal is closed by
//! backchaining first on bounded clauses (in context order) and then on
//! unbounded ones. Bounded resources are consumed lazily, so a tensor never
//! guesses a context split. The returned tree is checkable with
//! [`crate::kernel::check_reduced`].

pub mod builtins;
mod machine;
pub mod unify;

use std::fmt;

use thiserror::Error;

pub use builtins::{solve_builtin, Insufficient};
pub use unify::{Substitution, UnifyError};

use crate::formula::Formula;
use crate::kernel::{ProofTree, Rule, Sequent};
use crate::term::Term;

pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of backchaining steps, counting ones later undone.
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET }
    }
}

/// The clause a backchaining step used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseRef {
    /// Index into the node's unbounded context.
    Unbounded(usize),
    /// Bounded resource; the first `n` ids are the query's Δ in order,
    /// later ids are hypotheses introduced during search.
    Bounded(usize),
}

impl fmt::Display for ClauseRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClauseRef::Unbounded(i) => write!(f, "u{i}"),
            ClauseRef::Bounded(i) => write!(f, "b{i}"),
        }
    }
}

/// One backchaining step of a found proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BcEvent {
    pub rule: Rule,
    pub clause: ClauseRef,
    /// Head after the final substitution.
    pub head: Formula,
    /// Instances chosen for the clause's universal quantifiers, outermost
    /// first.
    pub instances: Vec<Term>,
}

impl fmt::Display for BcEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.rule, self.clause, self.head)
    }
}

#[derive(Clone, Debug)]
pub struct Proved {
    pub tree: ProofTree,
    pub subst: Substitution,
    /// Backchaining steps of `tree` in pre-order.
    pub trace: Vec<BcEvent>,
    /// Backchaining steps attempted, including abandoned ones.
    pub steps: u64,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Proved(Box<Proved>),
    Unprovable { steps: u64 },
    BudgetExhausted { steps: u64 },
}

impl Outcome {
    pub fn proved(&self) -> Option<&Proved> {
        match self {
            Outcome::Proved(p) => Some(p),
            _ => None,
        }
    }

    pub fn steps(&self) -> u64 {
        match self {
            Outcome::Proved(p) => p.steps,
            Outcome::Unprovable { steps } | Outcome::BudgetExhausted { steps } => *steps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("`{0}` is not a goal formula")]
    NotGoal(Formula),
    #[error("`{0}` is not a clause formula")]
    NotClause(Formula),
    #[error("goal `{0}` has no rigid head")]
    Flexible(Formula),
    #[error(transparent)]
    Builtin(#[from] Insufficient),
}

/// Search for a proof of `Γ ; Δ ⊢ goal`.
pub fn prove(gamma: &[Formula], delta: &[Formula], goal: &Formula, cfg: &SearchConfig) -> Result<Outcome, EngineError> {
    if let Some(f) = gamma.iter().chain(delta).find(|f| !f.is_clause()) {
        return Err(EngineError::NotClause(f.clone()));
    }
    if !goal.is_goal() {
        return Err(EngineError::NotGoal(goal.clone()));
    }
    machine::Machine::new(gamma, delta, goal, cfg).run()
}

pub fn prove_sequent(s: &Sequent, cfg: &SearchConfig) -> Result<Outcome, EngineError> {
    prove(&s.gamma, &s.delta, &s.goal, cfg)
}

#[cfg(test)]
mod tests;
