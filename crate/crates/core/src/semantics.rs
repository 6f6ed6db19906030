//! Regular-tree semantics of closed types.
//!
//! A [`SemState`] is a closed term together with a parity bit counting the
//! pending dualizations of the right spine. Its tree is obtained lazily:
//! [`head_normal`] unfolds binders until a constructor shows up and returns
//! the child states. Negative variables are read through an internal `Flip`
//! marker that toggles the parity, so the dual of a recursive type never has
//! to be written out.
//!
//! Since the trees are regular, the set of states reachable from any start
//! state is finite, and equality and duality of trees are decided by a plain
//! pair search ([`tree_equal`], [`tree_dual_related`]).

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::search::{explore, Step};
use crate::syntax::{free_vars, is_contractive, Name, Polarity, TypeExpr, VarOcc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("type is not closed: free {}", display_vars(.0))]
    Open(Vec<VarOcc>),
    #[error("type is not contractive")]
    NonContractive,
}

fn display_vars(vs: &[VarOcc]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A step in a counterexample path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Move {
    UnfoldLeft,
    UnfoldRight,
    MsgChild,
    ContChild,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::UnfoldLeft => "unfold-left",
            Move::UnfoldRight => "unfold-right",
            Move::MsgChild => "msg-child",
            Move::ContChild => "cont-child",
        })
    }
}

/// Verdict of an equivalence or duality check. A failed check carries the
/// path from the inputs to the first pair whose heads disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub verdict: bool,
    pub witness: Option<Vec<Move>>,
    /// Distinct pairs the search looked at.
    pub pairs_explored: usize,
}

// Terms extended with the dualizing marker.
#[derive(Debug, PartialEq, Eq, Hash)]
enum Ext {
    Int,
    End,
    In(Arc<Ext>, Arc<Ext>),
    Out(Arc<Ext>, Arc<Ext>),
    Var(Name),
    Neg(Name),
    Rec(Name, Arc<Ext>),
    Flip(Arc<Ext>),
}

impl Ext {
    fn from_type(t: &TypeExpr) -> Arc<Ext> {
        Arc::new(match t {
            TypeExpr::Int => Ext::Int,
            TypeExpr::End => Ext::End,
            TypeExpr::In(m, c) => Ext::In(Ext::from_type(m), Ext::from_type(c)),
            TypeExpr::Out(m, c) => Ext::Out(Ext::from_type(m), Ext::from_type(c)),
            TypeExpr::Var(x) => Ext::Var(x.clone()),
            TypeExpr::NegVar(x) => Ext::Neg(x.clone()),
            TypeExpr::Rec(x, b) => Ext::Rec(x.clone(), Ext::from_type(b)),
        })
    }
}

fn occurs(t: &Ext, x: &Name) -> bool {
    match t {
        Ext::Int | Ext::End => false,
        Ext::Var(y) | Ext::Neg(y) => y == x,
        Ext::In(m, c) | Ext::Out(m, c) => occurs(m, x) || occurs(c, x),
        Ext::Rec(y, b) => y != x && occurs(b, x),
        Ext::Flip(b) => occurs(b, x),
    }
}

// `t[pos/X][neg/~X]` for closed replacements; untouched subtrees are shared.
fn subst_closed(t: &Arc<Ext>, x: &Name, pos: &Arc<Ext>, neg: &Arc<Ext>) -> Arc<Ext> {
    if !occurs(t, x) {
        return t.clone();
    }
    match &**t {
        Ext::Var(_) => pos.clone(),
        Ext::Neg(_) => neg.clone(),
        Ext::In(m, c) => Arc::new(Ext::In(subst_closed(m, x, pos, neg), subst_closed(c, x, pos, neg))),
        Ext::Out(m, c) => Arc::new(Ext::Out(subst_closed(m, x, pos, neg), subst_closed(c, x, pos, neg))),
        Ext::Rec(y, b) => Arc::new(Ext::Rec(y.clone(), subst_closed(b, x, pos, neg))),
        Ext::Flip(b) => Arc::new(Ext::Flip(subst_closed(b, x, pos, neg))),
        Ext::Int | Ext::End => unreachable!("no occurrence"),
    }
}

// Nameless form used for state identity.
#[derive(Debug, PartialEq, Eq, Hash)]
enum Key {
    Int,
    End,
    In(Box<Key>, Box<Key>),
    Out(Box<Key>, Box<Key>),
    Bound(usize, Polarity),
    Free(Name, Polarity),
    Rec(Box<Key>),
    Flip(Box<Key>),
}

fn key_of(t: &Ext, env: &mut Vec<Name>) -> Key {
    let var = |env: &Vec<Name>, x: &Name, pol| match env.iter().rev().position(|b| b == x) {
        Some(i) => Key::Bound(i, pol),
        None => Key::Free(x.clone(), pol),
    };
    match t {
        Ext::Int => Key::Int,
        Ext::End => Key::End,
        Ext::In(m, c) => Key::In(Box::new(key_of(m, env)), Box::new(key_of(c, env))),
        Ext::Out(m, c) => Key::Out(Box::new(key_of(m, env)), Box::new(key_of(c, env))),
        Ext::Var(x) => var(env, x, Polarity::Positive),
        Ext::Neg(x) => var(env, x, Polarity::Negative),
        Ext::Rec(x, b) => {
            env.push(x.clone());
            let k = key_of(b, env);
            env.pop();
            Key::Rec(Box::new(k))
        }
        Ext::Flip(b) => Key::Flip(Box::new(key_of(b, env))),
    }
}

/// A closed (extended) term and a spine parity. States are identified up to
/// renaming of bound variables.
#[derive(Clone)]
pub struct SemState {
    term: Arc<Ext>,
    parity: Parity,
    key: Arc<Key>,
}

impl SemState {
    fn new(term: Arc<Ext>, parity: Parity) -> Self {
        let key = Arc::new(key_of(&term, &mut Vec::new()));
        SemState { term, parity, key }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// The underlying term, with `dual(...)` marking a pending dualization.
    pub fn term_text(&self) -> String {
        let mut out = String::new();
        write_ext(&self.term, &mut out);
        out
    }
}

fn write_ext(t: &Ext, out: &mut String) {
    match t {
        Ext::Int => out.push_str("int"),
        Ext::End => out.push_str("end"),
        Ext::In(m, c) | Ext::Out(m, c) => {
            out.push(if matches!(t, Ext::In(..)) { '?' } else { '!' });
            let atomic = matches!(**m, Ext::Int | Ext::End | Ext::Var(_) | Ext::Neg(_));
            if !atomic {
                out.push('(');
            }
            write_ext(m, out);
            if !atomic {
                out.push(')');
            }
            out.push('.');
            write_ext(c, out);
        }
        Ext::Var(x) => out.push_str(&format!("{x:?}")),
        Ext::Neg(x) => out.push_str(&format!("~{x:?}")),
        Ext::Rec(x, b) => {
            out.push_str(&format!("rec {x:?}."));
            write_ext(b, out);
        }
        Ext::Flip(b) => {
            out.push_str("dual(");
            write_ext(b, out);
            out.push(')');
        }
    }
}

impl PartialEq for SemState {
    fn eq(&self, other: &Self) -> bool {
        self.parity == other.parity && self.key == other.key
    }
}

impl Eq for SemState {}

impl Hash for SemState {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.parity.hash(state);
        self.key.hash(state);
    }
}

impl fmt::Debug for SemState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.term_text(), self.parity)
    }
}

/// One-step observation of a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeadForm {
    End,
    Int,
    In { msg: SemState, cont: SemState },
    Out { msg: SemState, cont: SemState },
}

impl HeadForm {
    pub fn label(&self) -> Label {
        match self {
            HeadForm::End => Label::End,
            HeadForm::Int => Label::Int,
            HeadForm::In { .. } => Label::In,
            HeadForm::Out { .. } => Label::Out,
        }
    }

    fn children(&self) -> Option<(&SemState, &SemState)> {
        match self {
            HeadForm::In { msg, cont } | HeadForm::Out { msg, cont } => Some((msg, cont)),
            _ => None,
        }
    }
}

/// Node labels of type trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    #[serde(rename = "end")]
    End,
    #[serde(rename = "int")]
    Int,
    #[serde(rename = "?")]
    In,
    #[serde(rename = "!")]
    Out,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::End => "end",
            Label::Int => "int",
            Label::In => "?",
            Label::Out => "!",
        })
    }
}

/// The state denoting the tree of a closed contractive type.
pub fn tree_of(t: &TypeExpr) -> Result<SemState, SemanticsError> {
    if !is_contractive(t) {
        return Err(SemanticsError::NonContractive);
    }
    let fv = free_vars(t);
    if !fv.is_empty() {
        return Err(SemanticsError::Open(fv.into_iter().collect()));
    }
    Ok(SemState::new(Ext::from_type(t), Parity::Even))
}

/// Unfolds binders and dualization markers until a constructor is exposed.
///
/// `rec X.S` steps to `S[rec X.S / X][dual(rec X.S) / ~X]`, a marker flips
/// the parity. At odd parity `?` and `!` swap; the continuation keeps the
/// parity while the message always restarts at even parity.
pub fn head_normal(s: &SemState) -> HeadForm {
    let mut term = s.term.clone();
    let mut parity = s.parity;
    loop {
        let next = match &*term {
            Ext::Rec(x, b) => {
                let neg = Arc::new(Ext::Flip(term.clone()));
                subst_closed(b, x, &term, &neg)
            }
            Ext::Flip(inner) => {
                parity = parity.flip();
                inner.clone()
            }
            Ext::End => return HeadForm::End,
            Ext::Int => return HeadForm::Int,
            Ext::In(m, c) | Ext::Out(m, c) => {
                let msg = SemState::new(m.clone(), Parity::Even);
                let cont = SemState::new(c.clone(), parity);
                let is_in = matches!(*term, Ext::In(..));
                return if is_in == (parity == Parity::Even) {
                    HeadForm::In { msg, cont }
                } else {
                    HeadForm::Out { msg, cont }
                };
            }
            Ext::Var(_) | Ext::Neg(_) => unreachable!("semantic states are closed"),
        };
        term = next;
    }
}

/// The dual tree: flips the parity of the state.
pub fn coidual(s: &SemState) -> SemState {
    SemState { term: s.term.clone(), parity: s.parity.flip(), key: s.key.clone() }
}

fn step_equal(pair: &(SemState, SemState)) -> Step<(SemState, SemState)> {
    let (h1, h2) = (head_normal(&pair.0), head_normal(&pair.1));
    if h1.label() != h2.label() {
        return Step::Mismatch;
    }
    match (h1.children(), h2.children()) {
        (Some((m1, c1)), Some((m2, c2))) => {
            Step::Next(vec![(Move::MsgChild, (m1.clone(), m2.clone())), (Move::ContChild, (c1.clone(), c2.clone()))])
        }
        _ => Step::Related,
    }
}

/// Decides whether two states denote the same tree.
pub fn tree_equal(s1: &SemState, s2: &SemState) -> CheckReport {
    let outcome = explore((s1.clone(), s2.clone()), |p| p.clone(), step_equal, None).expect("no budget given");
    CheckReport { verdict: outcome.verdict, witness: outcome.witness, pairs_explored: outcome.visited }
}

/// Decides whether the tree of `s2` is the dual of the tree of `s1`: the
/// same shape, `?`/`!` exchanged along the right spine, everything else
/// identical.
pub fn tree_dual_related(s1: &SemState, s2: &SemState) -> CheckReport {
    tree_equal(&coidual(s1), s2)
}

/// Follows a `msg-child`/`cont-child` path from both states and returns the
/// heads found at its end, or `None` if the path leaves the trees.
pub fn replay(s1: &SemState, s2: &SemState, path: &[Move]) -> Option<(HeadForm, HeadForm)> {
    let mut a = s1.clone();
    let mut b = s2.clone();
    for mv in path {
        let (ha, hb) = (head_normal(&a), head_normal(&b));
        let ((ma, ca), (mb, cb)) = (ha.children()?, hb.children()?);
        match mv {
            Move::MsgChild => {
                a = ma.clone();
                b = mb.clone();
            }
            Move::ContChild => {
                a = ca.clone();
                b = cb.clone();
            }
            Move::UnfoldLeft | Move::UnfoldRight => return None,
        }
    }
    Some((head_normal(&a), head_normal(&b)))
}

/// All states reachable from `s` through children of head forms, including
/// `s` itself, in discovery order.
pub fn reachable_states(s: &SemState) -> Vec<SemState> {
    let mut seen: HashSet<SemState> = HashSet::new();
    let mut order = Vec::new();
    let mut todo = vec![s.clone()];
    while let Some(st) = todo.pop() {
        if !seen.insert(st.clone()) {
            continue;
        }
        order.push(st.clone());
        if let Some((m, c)) = head_normal(&st).children() {
            todo.push(c.clone());
            todo.push(m.clone());
        }
    }
    order
}

/// A finite prefix of a tree. Below the cut-off depth nodes become holes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeView {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub msg: Option<Box<TreeView>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cont: Option<Box<TreeView>>,
    pub hole: bool,
}

impl TreeView {
    fn hole() -> Self {
        TreeView { label: None, msg: None, cont: None, hole: true }
    }

    /// Indented rendering, one node per line, holes shown as `_`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, indent: usize, out: &mut String) {
        out.push_str(&"  ".repeat(indent));
        match self.label {
            Some(l) if !self.hole => out.push_str(&l.to_string()),
            _ => out.push('_'),
        }
        out.push('\n');
        for child in [&self.msg, &self.cont].into_iter().flatten() {
            child.write_text(indent + 1, out);
        }
    }

    /// Bracket notation, e.g. `!(!(_, _), _)`.
    pub fn to_compact(&self) -> String {
        match (&self.label, &self.msg, &self.cont) {
            (_, _, _) if self.hole => "_".to_string(),
            (Some(l), Some(m), Some(c)) => format!("{l}({}, {})", m.to_compact(), c.to_compact()),
            (Some(l), _, _) => l.to_string(),
            _ => "_".to_string(),
        }
    }
}

pub fn unfold_to_depth(s: &SemState, depth: usize) -> TreeView {
    if depth == 0 {
        return TreeView::hole();
    }
    let head = head_normal(s);
    let label = Some(head.label());
    match head.children() {
        Some((m, c)) => TreeView {
            label,
            msg: Some(Box::new(unfold_to_depth(m, depth - 1))),
            cont: Some(Box::new(unfold_to_depth(c, depth - 1))),
            hole: false,
        },
        None => TreeView { label, msg: None, cont: None, hole: false },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn st(s: &str) -> SemState {
        tree_of(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn tree_of_rejects_open_and_non_contractive() {
        assert_eq!(st("end").parity(), Parity::Even);
        assert!(matches!(tree_of(&parse("!X.end").unwrap()), Err(SemanticsError::Open(_))));
        let bad = TypeExpr::rec("X", TypeExpr::var("X"));
        assert_eq!(tree_of(&bad).unwrap_err(), SemanticsError::NonContractive);
    }

    #[test]
    fn head_of_running_example() {
        let s = st("rec X.!X.X");
        match head_normal(&s) {
            HeadForm::Out { msg, cont } => {
                assert_eq!(msg, s);
                assert_eq!(cont, s);
            }
            other => panic!("unexpected {other:?}"),
        }
        match head_normal(&coidual(&s)) {
            HeadForm::In { msg, cont } => {
                assert_eq!(msg, s);
                assert_eq!(msg.parity(), Parity::Even);
                assert_eq!(cont, coidual(&s));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(head_normal(&coidual(&st("end"))), HeadForm::End);
    }

    #[test]
    fn dual_of_receiving_forever_is_sending_forever() {
        let r = tree_equal(&coidual(&st("rec X.?int.X")), &st("rec X.!int.X"));
        assert!(r.verdict);
        let r = tree_equal(&coidual(&coidual(&st("rec X.?X.X"))), &st("rec X.?X.X"));
        assert!(r.verdict);
    }

    #[test]
    fn tree_equality_examples() {
        assert!(tree_equal(&st("rec X.?int.X"), &st("?int.rec X.?int.X")).verdict);
        assert!(tree_equal(&st("end"), &st("end")).verdict);
        let r = tree_equal(&st("rec X.?int.X"), &st("rec X.!int.X"));
        assert!(!r.verdict);
        assert_eq!(r.witness, Some(vec![]));
    }

    #[test]
    fn tree_duality_examples() {
        assert!(tree_dual_related(&st("rec X.!X.X"), &st("rec X.?(rec X.!X.X).X")).verdict);
        assert!(tree_dual_related(&st("end"), &st("end")).verdict);
        let r = tree_dual_related(&st("rec X.?X.X"), &st("rec X.!X.X"));
        assert!(!r.verdict);
        // the disagreement sits in the message subtree
        let w = r.witness.unwrap();
        assert_eq!(w.first(), Some(&Move::MsgChild));
        let (h1, h2) = replay(&coidual(&st("rec X.?X.X")), &st("rec X.!X.X"), &w).unwrap();
        assert_ne!(h1.label(), h2.label());
    }

    #[test]
    fn negative_variable_trees() {
        // s = !s.t, t = dual s = ?s.s
        let s = st("rec X.!X.~X");
        let view = unfold_to_depth(&s, 2);
        assert_eq!(view.to_compact(), "!(!(_, _), ?(_, _))");
        assert_eq!(unfold_to_depth(&s, 3).to_compact(), "!(!(!(_, _), ?(_, _)), ?(!(_, _), !(_, _)))");
        let t = coidual(&s);
        match head_normal(&s) {
            HeadForm::Out { cont, .. } => assert!(tree_equal(&cont, &t).verdict),
            other => panic!("unexpected {other:?}"),
        }
        match head_normal(&t) {
            HeadForm::In { msg, cont } => {
                assert!(tree_equal(&msg, &s).verdict);
                assert!(tree_equal(&cont, &s).verdict);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reachable_state_counts() {
        assert_eq!(reachable_states(&st("end")).len(), 1);
        assert_eq!(reachable_states(&st("rec X.!X.X")).len(), 1);
        assert_eq!(reachable_states(&coidual(&st("rec X.!X.X"))).len(), 2);
    }

    #[test]
    fn depth_views() {
        assert_eq!(unfold_to_depth(&st("end"), 5).to_compact(), "end");
        let v = unfold_to_depth(&st("rec X.!X.X"), 1);
        assert_eq!(v.to_compact(), "!(_, _)");
        assert_eq!(unfold_to_depth(&coidual(&st("rec X.!X.X")), 1).to_compact(), "?(_, _)");
        assert_eq!(v.to_text(), "!\n  _\n  _\n");
        let json = serde_json::to_string(&unfold_to_depth(&st("!int.end"), 2)).unwrap();
        assert_eq!(
            json,
            r#"{"label":"!","msg":{"label":"int","hole":false},"cont":{"label":"end","hole":false},"hole":false}"#
        );
    }

    #[test]
    fn figure_of_dual_tree() {
        // u with t ⊥ u for t = tree of rec X.!X.X, three levels deep
        let u = unfold_to_depth(&coidual(&st("rec X.!X.X")), 3);
        assert_eq!(u.to_compact(), "?(!(!(_, _), !(_, _)), ?(!(_, _), ?(_, _)))");
    }
}
