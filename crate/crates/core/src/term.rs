//! Simply typed λ-terms.
//!
//! Bound variables are de Bruijn indices, so α-equivalent terms are
//! structurally equal. Binder names survive only as printing hints and are
//! ignored by `Eq`, `Ord` and `Hash`. Every smart constructor returns a
//! β-normal term; [`Term::app_raw`] is the single escape hatch for building
//! redexes explicitly.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    /// Propositions.
    O,
    /// Individuals.
    Iota,
    Nat,
    Prog,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(arg: SimpleType, result: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(arg), Box::new(result))
    }

    /// `a1 -> a2 -> ... -> result`
    pub fn curried(args: &[SimpleType], result: SimpleType) -> SimpleType {
        args.iter()
            .rev()
            .fold(result, |acc, a| SimpleType::arrow(a.clone(), acc))
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, SimpleType::Arrow(..))
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::O => write!(f, "o"),
            SimpleType::Iota => write!(f, "i"),
            SimpleType::Nat => write!(f, "nat"),
            SimpleType::Prog => write!(f, "prog"),
            SimpleType::Arrow(a, b) if a.is_arrow() => write!(f, "({a}) -> {b}"),
            SimpleType::Arrow(a, b) => write!(f, "{a} -> {b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstKind {
    /// Connectives and quantifiers.
    Logical,
    /// User symbols; atoms headed by these are rigid.
    NonLogical,
    /// Arithmetic relations decided by the engine.
    Builtin,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Const {
    pub name: Arc<str>,
    pub ty: SimpleType,
    pub kind: ConstKind,
}

impl Const {
    pub fn new(name: &str, ty: SimpleType, kind: ConstKind) -> Const {
        Const { name: name.into(), ty, kind }
    }

    pub fn nonlogical(name: &str, ty: SimpleType) -> Const {
        Const::new(name, ty, ConstKind::NonLogical)
    }
}

/// A free (named) variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Arc<str>,
    pub ty: SimpleType,
}

impl Var {
    pub fn new(name: &str, ty: SimpleType) -> Var {
        Var { name: name.into(), ty }
    }
}

/// Unification variable. Its `id` doubles as a scope stamp shared with
/// eigenvariables: a metavariable may only be bound to terms whose
/// eigenvariables are older than it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaVar {
    pub id: u32,
    pub ty: SimpleType,
}

/// Fresh constant introduced by a ∀R step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eigen {
    pub id: u32,
    pub ty: SimpleType,
}

/// Binder name kept for printing; invisible to comparisons.
#[derive(Clone, Debug)]
pub struct Hint(pub Arc<str>);

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}
impl Eq for Hint {}
impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Hint) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Hint {
    fn cmp(&self, _: &Hint) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}
impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Bound(u32),
    Free(Var),
    Const(Const),
    Nat(u64),
    Meta(MetaVar),
    Eigen(Eigen),
    Lam(SimpleType, Hint, Term),
    App(Term, Term),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(Arc<Node>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("ill-typed application: `{func}` has type {func_ty}, argument has type {arg_ty}")]
    IllTypedApplication {
        func: String,
        func_ty: SimpleType,
        arg_ty: SimpleType,
    },
    #[error("unbound name `{0}`")]
    UnboundName(String),
    #[error("type mismatch: expected {expected}, found {found}")]
    Mismatch {
        expected: SimpleType,
        found: SimpleType,
    },
    #[error("loose bound variable #{0}")]
    LooseBound(u32),
}

pub type TypeEnv = HashMap<Arc<str>, SimpleType>;

impl Term {
    fn mk(node: Node) -> Term {
        Term(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn bound(index: u32) -> Term {
        Term::mk(Node::Bound(index))
    }

    pub fn free(var: Var) -> Term {
        Term::mk(Node::Free(var))
    }

    /// Constants `z : nat` and `s : nat -> nat` are folded into numerals.
    pub fn constant(c: Const) -> Term {
        if c.kind == ConstKind::NonLogical && &*c.name == "z" && c.ty == SimpleType::Nat {
            return Term::nat(0);
        }
        Term::mk(Node::Const(c))
    }

    pub fn nat(n: u64) -> Term {
        Term::mk(Node::Nat(n))
    }

    pub fn meta(m: MetaVar) -> Term {
        Term::mk(Node::Meta(m))
    }

    pub fn eigen(e: Eigen) -> Term {
        Term::mk(Node::Eigen(e))
    }

    /// The successor constant `s`.
    pub fn succ_const() -> Term {
        Term::mk(Node::Const(Const::nonlogical(
            "s",
            SimpleType::arrow(SimpleType::Nat, SimpleType::Nat),
        )))
    }

    pub fn lam(ty: SimpleType, hint: &str, body: Term) -> Term {
        Term::mk(Node::Lam(ty, Hint(hint.into()), body))
    }

    /// Application, contracting any redex it creates.
    pub fn app(func: Term, arg: Term) -> Term {
        match func.node() {
            Node::Lam(_, _, body) => instantiate(body, &arg),
            Node::Const(c) if is_succ(c) => match arg.node() {
                Node::Nat(n) => Term::nat(n + 1),
                _ => Term::mk(Node::App(func, arg)),
            },
            _ => Term::mk(Node::App(func, arg)),
        }
    }

    /// Application without contraction; may build a β-redex.
    pub fn app_raw(func: Term, arg: Term) -> Term {
        Term::mk(Node::App(func, arg))
    }

    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// `λx. t` where free occurrences of `var` in `t` become the bound variable.
    pub fn abstract_var(var: &Var, body: &Term) -> Term {
        let inner = abstract_at(body, var, 0);
        Term::lam(var.ty.clone(), &var.name, inner)
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Node::App(f, a) = cur.node() {
            args.push(a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.node() {
            Node::Nat(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&Const> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_meta(&self) -> Option<&MetaVar> {
        match self.node() {
            Node::Meta(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        !has_loose_bound(self, 0)
    }

    /// Does any subterm satisfy `pred`?
    pub fn any(&self, pred: &mut impl FnMut(&Term) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self.node() {
            Node::Lam(_, _, b) => b.any(pred),
            Node::App(f, a) => f.any(pred) || a.any(pred),
            _ => false,
        }
    }

    pub fn contains_meta(&self) -> bool {
        self.any(&mut |t| matches!(t.node(), Node::Meta(_)))
    }

    /// Occurrence test for constants and eigenvariables (by identity).
    pub fn mentions(&self, atom: &Term) -> bool {
        self.any(&mut |t| t == atom)
    }

    pub fn metas(&self, out: &mut Vec<MetaVar>) {
        self.any(&mut |t| {
            if let Node::Meta(m) = t.node() {
                if !out.contains(m) {
                    out.push(m.clone());
                }
            }
            false
        });
    }

    /// Rebuild bottom-up, replacing leaves through `f`; re-normalizes.
    pub fn map_leaves(&self, f: &mut impl FnMut(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        match self.node() {
            Node::Lam(ty, h, b) => {
                let nb = b.map_leaves(f);
                if Arc::ptr_eq(&nb.0, &b.0) {
                    self.clone()
                } else {
                    Term::mk(Node::Lam(ty.clone(), h.clone(), nb))
                }
            }
            Node::App(fun, a) => {
                let nf = fun.map_leaves(f);
                let na = a.map_leaves(f);
                if Arc::ptr_eq(&nf.0, &fun.0) && Arc::ptr_eq(&na.0, &a.0) {
                    self.clone()
                } else {
                    Term::app(nf, na)
                }
            }
            _ => self.clone(),
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Lam(_, _, b) => 1 + b.size(),
            Node::App(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }
}

fn is_succ(c: &Const) -> bool {
    c.kind == ConstKind::NonLogical
        && &*c.name == "s"
        && c.ty == SimpleType::arrow(SimpleType::Nat, SimpleType::Nat)
}

fn has_loose_bound(t: &Term, depth: u32) -> bool {
    match t.node() {
        Node::Bound(i) => *i >= depth,
        Node::Lam(_, _, b) => has_loose_bound(b, depth + 1),
        Node::App(f, a) => has_loose_bound(f, depth) || has_loose_bound(a, depth),
        _ => false,
    }
}

/// Add `by` to every bound index at or above `cutoff`.
fn shift(t: &Term, by: u32, cutoff: u32) -> Term {
    if by == 0 {
        return t.clone();
    }
    shift_changed(t, by, cutoff).unwrap_or_else(|| t.clone())
}

/// `None` when nothing changes, so untouched subterms stay shared.
fn shift_changed(t: &Term, by: u32, cutoff: u32) -> Option<Term> {
    match t.node() {
        Node::Bound(i) if *i >= cutoff => Some(Term::bound(i + by)),
        Node::Lam(ty, h, b) => {
            shift_changed(b, by, cutoff + 1).map(|b| Term::mk(Node::Lam(ty.clone(), h.clone(), b)))
        }
        Node::App(f, a) => match (shift_changed(f, by, cutoff), shift_changed(a, by, cutoff)) {
            (None, None) => None,
            (f2, a2) => Some(Term::mk(Node::App(f2.unwrap_or_else(|| f.clone()), a2.unwrap_or_else(|| a.clone())))),
        },
        _ => None,
    }
}

/// Replace index `depth` with `arg` (shifted by `depth`), lowering the
/// indices above it. Rebuilds through [`Term::app`] so the result is normal.
fn subst_bound(t: &Term, depth: u32, arg: &Term) -> Term {
    subst_changed(t, depth, arg).unwrap_or_else(|| t.clone())
}

fn subst_changed(t: &Term, depth: u32, arg: &Term) -> Option<Term> {
    match t.node() {
        Node::Bound(i) if *i == depth => Some(shift(arg, depth, 0)),
        Node::Bound(i) if *i > depth => Some(Term::bound(i - 1)),
        Node::Lam(ty, h, b) => {
            subst_changed(b, depth + 1, arg).map(|b| Term::mk(Node::Lam(ty.clone(), h.clone(), b)))
        }
        Node::App(f, a) => match (subst_changed(f, depth, arg), subst_changed(a, depth, arg)) {
            (None, None) => None,
            (f2, a2) => Some(Term::app(f2.unwrap_or_else(|| f.clone()), a2.unwrap_or_else(|| a.clone()))),
        },
        _ => None,
    }
}

/// Body of an abstraction applied to `arg`.
pub fn instantiate(body: &Term, arg: &Term) -> Term {
    subst_bound(body, 0, arg)
}

fn abstract_at(t: &Term, var: &Var, depth: u32) -> Term {
    match t.node() {
        Node::Free(v) if v == var => Term::bound(depth),
        Node::Lam(ty, h, b) => Term::mk(Node::Lam(ty.clone(), h.clone(), abstract_at(b, var, depth + 1))),
        Node::App(f, a) => Term::app(abstract_at(f, var, depth), abstract_at(a, var, depth)),
        _ => t.clone(),
    }
}

/// Full β-normalization (also folds `s n` into numerals).
pub fn beta_normalize(t: &Term) -> Term {
    match t.node() {
        Node::Lam(ty, h, b) => Term::mk(Node::Lam(ty.clone(), h.clone(), beta_normalize(b))),
        Node::App(f, a) => Term::app(beta_normalize(f), beta_normalize(a)),
        Node::Const(c) => Term::constant(c.clone()),
        _ => t.clone(),
    }
}

/// Capture-avoiding `t[s/x]`.
pub fn substitute(t: &Term, x: &Var, s: &Term, env: &TypeEnv) -> Result<Term, TypeError> {
    let sty = infer_type(s, env)?;
    if sty != x.ty {
        return Err(TypeError::Mismatch { expected: x.ty.clone(), found: sty });
    }
    Ok(subst_free(t, x, s, 0))
}

fn subst_free(t: &Term, x: &Var, s: &Term, depth: u32) -> Term {
    match t.node() {
        Node::Free(v) if v == x => shift(s, depth, 0),
        Node::Lam(ty, h, b) => Term::mk(Node::Lam(ty.clone(), h.clone(), subst_free(b, x, s, depth + 1))),
        Node::App(f, a) => Term::app(subst_free(f, x, s, depth), subst_free(a, x, s, depth)),
        _ => t.clone(),
    }
}

/// Equality modulo renaming of bound variables.
pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    a == b
}

pub fn infer_type(t: &Term, env: &TypeEnv) -> Result<SimpleType, TypeError> {
    infer_in(t, env, &mut Vec::new())
}

fn infer_in(t: &Term, env: &TypeEnv, ctx: &mut Vec<SimpleType>) -> Result<SimpleType, TypeError> {
    match t.node() {
        Node::Bound(i) => {
            let i = *i as usize;
            if i < ctx.len() {
                Ok(ctx[ctx.len() - 1 - i].clone())
            } else {
                Err(TypeError::LooseBound(i as u32))
            }
        }
        Node::Free(v) => match env.get(&v.name) {
            Some(ty) if *ty == v.ty => Ok(ty.clone()),
            Some(ty) => Err(TypeError::Mismatch { expected: ty.clone(), found: v.ty.clone() }),
            None => Err(TypeError::UnboundName(v.name.to_string())),
        },
        Node::Const(c) => Ok(c.ty.clone()),
        Node::Nat(_) => Ok(SimpleType::Nat),
        Node::Meta(m) => Ok(m.ty.clone()),
        Node::Eigen(e) => Ok(e.ty.clone()),
        Node::Lam(ty, _, b) => {
            ctx.push(ty.clone());
            let r = infer_in(b, env, ctx);
            ctx.pop();
            Ok(SimpleType::arrow(ty.clone(), r?))
        }
        Node::App(f, a) => {
            let fty = infer_in(f, env, ctx)?;
            let aty = infer_in(a, env, ctx)?;
            match fty {
                SimpleType::Arrow(dom, cod) if *dom == aty => Ok(*cod),
                _ => Err(TypeError::IllTypedApplication { func: f.to_string(), func_ty: fty, arg_ty: aty }),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Printing

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names = Vec::new();
        crate::text::write_term(f, self, &mut names, crate::text::Prec::Top)
    }
}
