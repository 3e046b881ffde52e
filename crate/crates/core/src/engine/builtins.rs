//! Ground arithmetic relations.

use thiserror::Error;

use super::unify::Substitution;
use crate::formula::BuiltinRel;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("arguments of #{rel} are not sufficiently instantiated: {args}")]
pub struct Insufficient {
    pub rel: &'static str,
    pub args: String,
}

/// Decide `rel(args)` under `s`, binding the computed argument of `add3` and
/// `sub3` (and one side of `eq`) when it is still open. `Ok(false)` means
/// the relation fails; bindings made on success stay in `s`.
pub fn solve_builtin(rel: BuiltinRel, args: &[Term], s: &mut Substitution) -> Result<bool, Insufficient> {
    let args: Vec<Term> = args.iter().map(|a| s.resolve(a)).collect();
    let nats: Vec<Option<u64>> = args.iter().map(Term::as_nat).collect();
    let insufficient = || Insufficient {
        rel: rel.name(),
        args: args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "),
    };
    if args.len() != rel.arity() {
        return Err(insufficient());
    }
    if let Some(ns) = nats.iter().copied().collect::<Option<Vec<u64>>>() {
        return Ok(rel.holds(&ns));
    }
    let computed = match (rel, nats.as_slice()) {
        (BuiltinRel::Add3, [Some(a), Some(b), None]) => match a.checked_add(*b) {
            Some(c) => (2, c),
            None => return Ok(false),
        },
        (BuiltinRel::Sub3, [Some(a), Some(b), None]) => (2, a.saturating_sub(*b)),
        (BuiltinRel::Eq, [Some(a), None]) => (1, *a),
        (BuiltinRel::Eq, [None, Some(b)]) => (0, *b),
        _ => return Err(insufficient()),
    };
    let mark = s.mark();
    match s.unify(&args[computed.0], &Term::nat(computed.1)) {
        Ok(()) => Ok(true),
        Err(_) => {
            s.undo_to(mark);
            Ok(false)
        }
    }
}
