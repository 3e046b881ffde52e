//! First-order unification over β-normal terms with an undo trail.
//!
//! Metavariables and eigenvariables share one numbering that doubles as a
//! creation order: a metavariable may only be bound to terms whose
//! eigenvariables were created before it. Binding a metavariable to a term
//! that mentions younger metavariables lowers their level so the discipline
//! survives later bindings.

use std::collections::HashMap;

use thiserror::Error;

use crate::term::{MetaVar, Node, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum UnifyError {
    #[error("terms do not unify")]
    Clash,
    #[error("occurs check failed")]
    Occurs,
    #[error("eigenvariable escapes its scope")]
    Scope,
    #[error("term outside the supported first-order fragment")]
    OutOfFragment,
}

#[derive(Debug, Clone)]
enum Undo {
    Bind(u32),
    Level(u32, Option<u32>),
}

/// Bindings of metavariables to terms, with a trail for backtracking.
#[derive(Debug, Clone, Default)]
pub struct Substitution {
    map: HashMap<u32, Term>,
    levels: HashMap<u32, u32>,
    trail: Vec<Undo>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn get(&self, id: u32) -> Option<&Term> {
        self.map.get(&id)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Bound metavariables in increasing id order.
    pub fn bindings(&self) -> Vec<(u32, Term)> {
        let mut v: Vec<_> = self.map.iter().map(|(k, t)| (*k, t.clone())).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    fn level(&self, m: &MetaVar) -> u32 {
        self.levels.get(&m.id).copied().unwrap_or(m.id)
    }

    /// Trail position for [`Substitution::undo_to`].
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("nonempty") {
                Undo::Bind(id) => {
                    self.map.remove(&id);
                }
                Undo::Level(id, old) => match old {
                    Some(l) => {
                        self.levels.insert(id, l);
                    }
                    None => {
                        self.levels.remove(&id);
                    }
                },
            }
        }
    }

    /// Forget the trail; bindings are kept.
    pub fn commit(&mut self) {
        self.trail.clear();
    }

    /// Follow bindings at the root of `t`.
    pub fn walk(&self, t: &Term) -> Term {
        let mut cur = t.clone();
        while let Node::Meta(m) = cur.node() {
            match self.map.get(&m.id) {
                Some(b) => cur = b.clone(),
                None => break,
            }
        }
        cur
    }

    /// Apply the substitution everywhere in `t`.
    pub fn resolve(&self, t: &Term) -> Term {
        let mut memo = HashMap::new();
        self.resolve_memo(t, &mut memo)
    }

    /// [`Substitution::resolve`] sharing results across calls through `memo`.
    pub fn resolve_memo(&self, t: &Term, memo: &mut HashMap<u32, Term>) -> Term {
        if !t.contains_meta() {
            return t.clone();
        }
        t.map_leaves(&mut |s| match s.node() {
            Node::Meta(m) => {
                if let Some(r) = memo.get(&m.id) {
                    return Some(r.clone());
                }
                let b = self.map.get(&m.id)?.clone();
                let r = self.resolve_memo(&b, memo);
                memo.insert(m.id, r.clone());
                Some(r)
            }
            _ => None,
        })
    }

    pub fn unify(&mut self, a: &Term, b: &Term) -> Result<(), UnifyError> {
        let a = self.walk(a);
        let b = self.walk(b);
        if a == b {
            return Ok(());
        }
        match (a.node(), b.node()) {
            (Node::Meta(x), _) => self.bind(x, &b),
            (_, Node::Meta(y)) => self.bind(y, &a),
            (Node::Nat(n), Node::App(f, arg)) | (Node::App(f, arg), Node::Nat(n)) if is_succ(f) => {
                if *n == 0 {
                    Err(UnifyError::Clash)
                } else {
                    self.unify(arg, &Term::nat(n - 1))
                }
            }
            (Node::App(f1, a1), Node::App(f2, a2)) => {
                self.unify(f1, f2)?;
                self.unify(a1, a2)
            }
            (Node::Lam(t1, _, b1), Node::Lam(t2, _, b2)) if t1 == t2 => self.unify(b1, b2),
            _ => Err(UnifyError::Clash),
        }
    }

    fn bind(&mut self, x: &MetaVar, t: &Term) -> Result<(), UnifyError> {
        if !t.is_closed() {
            return Err(UnifyError::OutOfFragment);
        }
        let level = self.level(x);
        self.check(x.id, level, t)?;
        self.map.insert(x.id, t.clone());
        self.trail.push(Undo::Bind(x.id));
        Ok(())
    }

    /// Occurs and scope check of `t` against a metavariable at `level`.
    fn check(&mut self, id: u32, level: u32, t: &Term) -> Result<(), UnifyError> {
        match t.node() {
            Node::Meta(m) => {
                if let Some(b) = self.map.get(&m.id).cloned() {
                    return self.check(id, level, &b);
                }
                if m.id == id {
                    return Err(UnifyError::Occurs);
                }
                if self.level(m) > level {
                    let old = self.levels.insert(m.id, level);
                    self.trail.push(Undo::Level(m.id, old));
                }
                Ok(())
            }
            Node::Eigen(e) if e.id > level => Err(UnifyError::Scope),
            Node::App(f, a) => {
                self.check(id, level, f)?;
                self.check(id, level, a)
            }
            Node::Lam(_, _, b) => self.check(id, level, b),
            _ => Ok(()),
        }
    }
}

fn is_succ(f: &Term) -> bool {
    f.as_const().is_some_and(|c| &*c.name == "s")
}

/// Most general unifier of `a` and `b` extending `s`.
pub fn unify(a: &Term, b: &Term, s: &Substitution) -> Result<Substitution, UnifyError> {
    let mut out = s.clone();
    out.unify(a, b)?;
    out.commit();
    Ok(out)
}
