//! Abstract syntax of recursive session types.
//!
//! A [`TypeExpr`] is either a message-only `int`, or a session type built from
//! `end`, input `?T.S`, output `!T.S`, recursion variables and `rec X.S`
//! binders. Every binder `rec X` binds both the positive occurrence `X` and the
//! negative occurrence `~X` in its body; `~X` stands for the dual of the
//! enclosing recursive type.
//!
//! Names carry a numeric tag next to the user-visible base so that binders can
//! be made pairwise distinct without changing how the type prints.

mod alpha;
mod normal;
mod subst;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

pub use alpha::{alpha_eq, DeBruijn};
pub use normal::{is_contractive, is_normal, normalize, NonContractive};
pub use subst::{apply_subst_seq, subst_neg_swap, substitute, SubstSeq};

/// A type variable name: the base the user wrote plus a disambiguating tag.
///
/// Free names produced by the parser have tag `0`; binders get fresh tags.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    base: Arc<str>,
    tag: u32,
}

impl Name {
    pub fn new(base: &str) -> Self {
        Name { base: Arc::from(base), tag: 0 }
    }

    pub fn with_tag(base: &str, tag: u32) -> Self {
        Name { base: Arc::from(base), tag }
    }

    /// Same base, different tag.
    pub fn retag(&self, tag: u32) -> Self {
        Name { base: self.base.clone(), tag }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tag == 0 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}#{}", self.base, self.tag)
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.base)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// A variable occurrence: `X` (positive) or `~X` (negative).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarOcc {
    pub name: Name,
    pub polarity: Polarity,
}

impl VarOcc {
    pub fn pos(name: Name) -> Self {
        VarOcc { name, polarity: Polarity::Positive }
    }

    pub fn neg(name: Name) -> Self {
        VarOcc { name, polarity: Polarity::Negative }
    }

    /// The expression `X` or `~X` this occurrence denotes.
    pub fn to_expr(&self) -> TypeExpr {
        match self.polarity {
            Polarity::Positive => TypeExpr::Var(self.name.clone()),
            Polarity::Negative => TypeExpr::NegVar(self.name.clone()),
        }
    }
}

impl fmt::Display for VarOcc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.polarity {
            Polarity::Positive => write!(f, "{}", self.name),
            Polarity::Negative => write!(f, "~{}", self.name),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TypeExpr {
    Int,
    End,
    /// `?msg.cont`
    In(Box<TypeExpr>, Box<TypeExpr>),
    /// `!msg.cont`
    Out(Box<TypeExpr>, Box<TypeExpr>),
    Var(Name),
    NegVar(Name),
    Rec(Name, Box<TypeExpr>),
}

impl TypeExpr {
    pub fn input(msg: TypeExpr, cont: TypeExpr) -> Self {
        TypeExpr::In(Box::new(msg), Box::new(cont))
    }

    pub fn output(msg: TypeExpr, cont: TypeExpr) -> Self {
        TypeExpr::Out(Box::new(msg), Box::new(cont))
    }

    pub fn var(name: &str) -> Self {
        TypeExpr::Var(Name::new(name))
    }

    pub fn neg_var(name: &str) -> Self {
        TypeExpr::NegVar(Name::new(name))
    }

    pub fn rec(name: &str, body: TypeExpr) -> Self {
        TypeExpr::Rec(Name::new(name), Box::new(body))
    }

    pub fn is_rec(&self) -> bool {
        matches!(self, TypeExpr::Rec(..))
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }

    pub fn has_neg_vars(&self) -> bool {
        match self {
            TypeExpr::NegVar(_) => true,
            TypeExpr::Int | TypeExpr::End | TypeExpr::Var(_) => false,
            TypeExpr::In(m, c) | TypeExpr::Out(m, c) => m.has_neg_vars() || c.has_neg_vars(),
            TypeExpr::Rec(_, b) => b.has_neg_vars(),
        }
    }

    /// One-step unfolding of a top-level binder: `rec X.S` becomes
    /// `S[rec X.S / X]`. Negative occurrences of `X` are left alone; other
    /// forms are returned unchanged.
    pub fn unfold_once(&self) -> TypeExpr {
        match self {
            TypeExpr::Rec(x, body) => substitute(body, &VarOcc::pos(x.clone()), self),
            other => other.clone(),
        }
    }

    /// Renames every binder to a fresh tag so that binders are pairwise
    /// distinct and distinct from free names. Bases are kept.
    pub fn canonicalize(&self) -> TypeExpr {
        let mut next = free_names(self).iter().map(Name::tag).max().unwrap_or(0) + 1;
        let mut env: Vec<(Name, Name)> = Vec::new();
        canon(self, &mut env, &mut next)
    }

    /// Iterates over all binder names, outermost first.
    pub fn binders(&self) -> Vec<Name> {
        let mut out = Vec::new();
        fn go(t: &TypeExpr, out: &mut Vec<Name>) {
            match t {
                TypeExpr::Rec(x, b) => {
                    out.push(x.clone());
                    go(b, out);
                }
                TypeExpr::In(m, c) | TypeExpr::Out(m, c) => {
                    go(m, out);
                    go(c, out);
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    pub(crate) fn max_tag(&self) -> u32 {
        match self {
            TypeExpr::Int | TypeExpr::End => 0,
            TypeExpr::Var(x) | TypeExpr::NegVar(x) => x.tag,
            TypeExpr::In(m, c) | TypeExpr::Out(m, c) => m.max_tag().max(c.max_tag()),
            TypeExpr::Rec(x, b) => x.tag.max(b.max_tag()),
        }
    }
}

fn canon(t: &TypeExpr, env: &mut Vec<(Name, Name)>, next: &mut u32) -> TypeExpr {
    let lookup = |env: &Vec<(Name, Name)>, x: &Name| {
        env.iter().rev().find(|(old, _)| old == x).map(|(_, new)| new.clone()).unwrap_or_else(|| x.clone())
    };
    match t {
        TypeExpr::Int => TypeExpr::Int,
        TypeExpr::End => TypeExpr::End,
        TypeExpr::Var(x) => TypeExpr::Var(lookup(env, x)),
        TypeExpr::NegVar(x) => TypeExpr::NegVar(lookup(env, x)),
        TypeExpr::In(m, c) => TypeExpr::input(canon(m, env, next), canon(c, env, next)),
        TypeExpr::Out(m, c) => TypeExpr::output(canon(m, env, next), canon(c, env, next)),
        TypeExpr::Rec(x, b) => {
            let fresh = x.retag(*next);
            *next += 1;
            env.push((x.clone(), fresh.clone()));
            let body = canon(b, env, next);
            env.pop();
            TypeExpr::Rec(fresh, Box::new(body))
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print(self))
    }
}

/// Free variable occurrences of both polarities. `rec X` binds `X` and `~X`.
pub fn free_vars(t: &TypeExpr) -> BTreeSet<VarOcc> {
    let mut out = BTreeSet::new();
    let mut bound: Vec<&Name> = Vec::new();
    collect_free(t, &mut bound, &mut out);
    out
}

fn collect_free<'a>(t: &'a TypeExpr, bound: &mut Vec<&'a Name>, out: &mut BTreeSet<VarOcc>) {
    match t {
        TypeExpr::Int | TypeExpr::End => {}
        TypeExpr::Var(x) => {
            if !bound.contains(&x) {
                out.insert(VarOcc::pos(x.clone()));
            }
        }
        TypeExpr::NegVar(x) => {
            if !bound.contains(&x) {
                out.insert(VarOcc::neg(x.clone()));
            }
        }
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => {
            collect_free(m, bound, out);
            collect_free(c, bound, out);
        }
        TypeExpr::Rec(x, b) => {
            bound.push(x);
            collect_free(b, bound, out);
            bound.pop();
        }
    }
}

/// Free variable names regardless of polarity.
pub fn free_names(t: &TypeExpr) -> BTreeSet<Name> {
    free_vars(t).into_iter().map(|v| v.name).collect()
}

/// Leaves count 1, a binder adds 1, and a `?`/`!` node adds nothing beyond
/// its two children.
pub fn size(t: &TypeExpr) -> usize {
    match t {
        TypeExpr::Int | TypeExpr::End | TypeExpr::Var(_) | TypeExpr::NegVar(_) => 1,
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => size(m) + size(c),
        TypeExpr::Rec(_, b) => 1 + size(b),
    }
}

/// Number of syntax nodes, counting `?`/`!` nodes as well.
pub fn node_count(t: &TypeExpr) -> usize {
    match t {
        TypeExpr::Int | TypeExpr::End | TypeExpr::Var(_) | TypeExpr::NegVar(_) => 1,
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => 1 + node_count(m) + node_count(c),
        TypeExpr::Rec(_, b) => 1 + node_count(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn p(s: &str) -> TypeExpr {
        parse(s).unwrap()
    }

    #[test]
    fn free_vars_of_end_is_empty() {
        assert!(free_vars(&TypeExpr::End).is_empty());
    }

    #[test]
    fn free_vars_tracks_polarity() {
        let fv = free_vars(&p("!X.~Y"));
        let expected: BTreeSet<_> = [VarOcc::pos(Name::new("X")), VarOcc::neg(Name::new("Y"))].into_iter().collect();
        assert_eq!(fv, expected);
    }

    #[test]
    fn binder_bounds_both_polarities() {
        let t = p("rec X.!X.~X");
        assert!(free_vars(&t).is_empty());

        // brute force: every leaf occurrence sits under a binder of its name
        fn leaves(t: &TypeExpr, under: &mut Vec<Name>, unbound: &mut usize) {
            match t {
                TypeExpr::Var(x) | TypeExpr::NegVar(x) => {
                    if !under.iter().any(|b| b == x) {
                        *unbound += 1;
                    }
                }
                TypeExpr::In(m, c) | TypeExpr::Out(m, c) => {
                    leaves(m, under, unbound);
                    leaves(c, under, unbound);
                }
                TypeExpr::Rec(x, b) => {
                    under.push(x.clone());
                    leaves(b, under, unbound);
                    under.pop();
                }
                _ => {}
            }
        }
        let mut unbound = 0;
        leaves(&t, &mut Vec::new(), &mut unbound);
        assert_eq!(unbound, 0);
    }

    #[test]
    fn size_examples() {
        assert_eq!(size(&TypeExpr::End), 1);
        assert_eq!(size(&p("rec X.?X.?X.?X.X")), 5);
        assert_eq!(size(&p("!int.end")), 2);
    }

    #[test]
    fn canonicalize_makes_binders_distinct() {
        let t = TypeExpr::rec(
            "X",
            TypeExpr::output(
                TypeExpr::rec("X", TypeExpr::output(TypeExpr::var("X"), TypeExpr::var("X"))),
                TypeExpr::var("X"),
            ),
        );
        let c = t.canonicalize();
        let bs = c.binders();
        assert_eq!(bs.len(), 2);
        assert_ne!(bs[0], bs[1]);
        assert!(alpha_eq(&t, &c));
    }

    #[test]
    fn unfold_once_substitutes_positive_occurrences() {
        let t = p("rec X.!X.~X");
        let u = t.unfold_once();
        match u {
            TypeExpr::Out(m, c) => {
                assert!(alpha_eq(&m, &t));
                assert!(matches!(*c, TypeExpr::NegVar(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
