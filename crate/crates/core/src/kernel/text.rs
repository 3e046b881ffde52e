//! Proof files.
//!
//! ```text
//! % optional comments
//! sig a1 : o.
//! (impR ; |- a1 & a2 => a1 * a2
//!   (absorb@0 a1 & a2 ; |- a1 * a2
//!     ...))
//! ```
//!
//! Each node is `(rule[@principal] Γ ; Δ |- G [witness] {U | B | head}`
//! followed by its premises and a closing parenthesis. A node header must fit
//! on one line; premises start on later lines. The witness is present for
//! `forallL`, `forallR` and `existsR`, the triple for `BCu` and `BCb`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::formula::{ClauseTriple, View};
use crate::term::{ConstKind, Node, SimpleType, Term};
use crate::text::{ParseError, Parser, Signature};

use super::{write_formulas, ProofTree, Rule, Sequent};

pub fn parse_proof(src: &str, sig: &mut Signature) -> Result<ProofTree, ParseError> {
    let mut p = Parser::new(src, sig, true)?;
    p.skip_newlines();
    while p.is_declaration() {
        p.declaration()?;
        p.skip_newlines();
    }
    let tree = node(&mut p)?;
    p.skip_newlines();
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    Ok(tree)
}

fn node(p: &mut Parser<'_>) -> Result<ProofTree, ParseError> {
    p.expect_sym("(")?;
    let pos = p.pos();
    let name = p.ident()?;
    let rule = Rule::from_name(&name).ok_or_else(|| ParseError::new(pos, format!("unknown rule `{name}`")))?;
    let principal = if p.eat_sym("@") { Some(p.int()? as usize) } else { None };
    let gamma = p.formula_list(&[";"])?;
    p.expect_sym(";")?;
    let delta = p.formula_list(&["|-"])?;
    p.expect_sym("|-")?;
    let goal = p.formula()?;
    let conclusion = Sequent::new(gamma, delta, goal);
    let mut tree = ProofTree::new(rule, conclusion, Vec::new());
    tree.principal = principal;
    if p.eat_sym("[") {
        let expected = witness_type(&tree);
        tree.witness = Some(p.term(expected.as_ref())?);
        p.expect_sym("]")?;
    }
    if p.eat_sym("{") {
        let unbounded = p.formula_list(&["|"])?;
        p.expect_sym("|")?;
        let bounded = p.formula_list(&["|"])?;
        p.expect_sym("|")?;
        let head = p.formula()?;
        p.expect_sym("}")?;
        tree.triple = Some(ClauseTriple { unbounded, bounded, head });
    }
    loop {
        p.skip_newlines();
        if p.eat_sym(")") {
            return Ok(tree);
        }
        if !p.is_sym("(") {
            return Err(p.unexpected("a premise or `)`"));
        }
        tree.premises.push(node(p)?);
    }
}

/// Type of the quantifier a witness instantiates, when it can be determined.
fn witness_type(t: &ProofTree) -> Option<SimpleType> {
    let f = match t.rule {
        Rule::ForallL => t.conclusion.delta.get(t.principal?)?.clone(),
        _ => t.conclusion.goal.clone(),
    };
    match f.view() {
        View::Forall(q) | View::Exists(q) => Some(q.ty),
        _ => None,
    }
}

/// Print a proof with `sig` lines for every non-logical constant it uses.
pub fn print_proof(t: &ProofTree) -> String {
    let mut consts = BTreeMap::new();
    collect_consts(t, &mut consts);
    let mut out = String::new();
    for (name, ty) in &consts {
        let _ = writeln!(out, "sig {name} : {ty}.");
    }
    write_node(&mut out, t, 0);
    out.push('\n');
    out
}

fn collect_consts(t: &ProofTree, out: &mut BTreeMap<String, SimpleType>) {
    let mut add = |x: &Term| {
        x.any(&mut |s| {
            if let Node::Const(c) = s.node() {
                if c.kind == ConstKind::NonLogical && &*c.name != "s" {
                    out.entry(c.name.to_string()).or_insert_with(|| c.ty.clone());
                }
            }
            false
        });
    };
    t.visit(&mut |_, n| {
        let s = &n.conclusion;
        for f in s.gamma.iter().chain(&s.delta).chain([&s.goal]) {
            add(f.term());
        }
        if let Some(w) = &n.witness {
            add(w);
        }
        if let Some(tr) = &n.triple {
            for f in tr.unbounded.iter().chain(&tr.bounded).chain([&tr.head]) {
                add(f.term());
            }
        }
    });
}

fn write_node(out: &mut String, t: &ProofTree, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push('(');
    out.push_str(t.rule.name());
    if let Some(i) = t.principal {
        let _ = write!(out, "@{i}");
    }
    out.push(' ');
    write_header(out, &t.conclusion);
    if let Some(w) = &t.witness {
        let _ = write!(out, " [{w}]");
    }
    if let Some(tr) = &t.triple {
        let _ = write!(out, " {{{tr}}}");
    }
    for q in &t.premises {
        out.push('\n');
        write_node(out, q, depth + 1);
    }
    out.push(')');
}

fn write_header(out: &mut String, s: &Sequent) {
    let _ = write_formulas(out, &s.gamma);
    if !s.gamma.is_empty() {
        out.push(' ');
    }
    out.push_str("; ");
    let _ = write_formulas(out, &s.delta);
    if !s.delta.is_empty() {
        out.push(' ');
    }
    let _ = write!(out, "|- {}", s.goal);
}

/// Parse a sequent `Γ ; Δ |- G` on its own.
pub fn parse_sequent(src: &str, sig: &mut Signature) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(src, sig, false)?;
    while p.is_declaration() {
        p.declaration()?;
    }
    let gamma = p.formula_list(&[";"])?;
    p.expect_sym(";")?;
    let delta = p.formula_list(&["|-"])?;
    p.expect_sym("|-")?;
    let goal = p.formula()?;
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    Ok(Sequent::new(gamma, delta, goal))
}
