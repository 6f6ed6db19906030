//! Syntactic duality functions.
//!
//! - [`naive_dual`]: the structural dual, `dual(rec X.S) = rec X.dual(S)` and
//!   `dual(X) = X`. Only sound when every message type is closed.
//! - [`message_closure`] / [`mcl`]: close every message type by pushing
//!   `[rec X.S / X]` into a substitution sequence at each binder.
//! - [`mcdual`] / [`mcdual_closed`]: the naive dual with message closure done
//!   in the same pass.
//! - [`lm_dual`], [`lmp_dual`]: duals that map spine variables to negative
//!   variables and so never grow the type.
//! - [`cdual`]: like [`lmp_dual`], but replaces the introduced negative
//!   variables by the original recursive type at the end.
//! - [`is_tailrec`]: the tail-recursive formation rules, where message types
//!   must themselves be tail recursive over the empty context.
//! - [`has_closed_messages`]: the weaker condition that every message type on
//!   the spine is closed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::syntax::{apply_subst_seq, free_vars, subst_neg_swap, substitute, Name, SubstSeq, TypeExpr, VarOcc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("negative variable ~{0} is outside the domain of this duality")]
    NegativeVariable(Name),
    #[error("`int` is not a session type")]
    NotSession,
    #[error("substitution does not close the type (free: {})", vars(.0))]
    NotClosing(Vec<VarOcc>),
}

fn vars(vs: &[VarOcc]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn first_neg_var(t: &TypeExpr) -> Option<Name> {
    match t {
        TypeExpr::NegVar(x) => Some(x.clone()),
        TypeExpr::Int | TypeExpr::End | TypeExpr::Var(_) => None,
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => first_neg_var(m).or_else(|| first_neg_var(c)),
        TypeExpr::Rec(_, b) => first_neg_var(b),
    }
}

fn reject_neg_vars(t: &TypeExpr) -> Result<(), DualityError> {
    match first_neg_var(t) {
        Some(x) => Err(DualityError::NegativeVariable(x)),
        None => Ok(()),
    }
}

pub fn naive_dual(s: &TypeExpr) -> Result<TypeExpr, DualityError> {
    reject_neg_vars(s)?;
    naive(s)
}

fn naive(s: &TypeExpr) -> Result<TypeExpr, DualityError> {
    Ok(match s {
        TypeExpr::End => TypeExpr::End,
        TypeExpr::In(m, c) => TypeExpr::output((**m).clone(), naive(c)?),
        TypeExpr::Out(m, c) => TypeExpr::input((**m).clone(), naive(c)?),
        TypeExpr::Var(x) => TypeExpr::Var(x.clone()),
        TypeExpr::Rec(x, b) => TypeExpr::Rec(x.clone(), Box::new(naive(b)?)),
        TypeExpr::Int => return Err(DualityError::NotSession),
        TypeExpr::NegVar(x) => return Err(DualityError::NegativeVariable(x.clone())),
    })
}

/// Names allowed in tail position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TailRecContext(BTreeSet<Name>);

impl TailRecContext {
    pub fn empty() -> Self {
        TailRecContext::default()
    }

    pub fn with(&self, x: Name) -> Self {
        let mut names = self.0.clone();
        names.insert(x);
        TailRecContext(names)
    }

    pub fn contains(&self, x: &Name) -> bool {
        self.0.contains(x)
    }

    pub fn names(&self) -> &BTreeSet<Name> {
        &self.0
    }
}

impl FromIterator<Name> for TailRecContext {
    fn from_iter<I: IntoIterator<Item = Name>>(iter: I) -> Self {
        TailRecContext(iter.into_iter().collect())
    }
}

/// `⊢_ctx t tailrec`: message types must be tail recursive over the empty
/// context, variables must be in `ctx`, binders extend `ctx`. Negative
/// variables are never tail recursive.
pub fn is_tailrec(t: &TypeExpr, ctx: &TailRecContext) -> bool {
    match t {
        TypeExpr::Int | TypeExpr::End => true,
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => is_tailrec(m, &TailRecContext::empty()) && is_tailrec(c, ctx),
        TypeExpr::Var(x) => ctx.contains(x),
        TypeExpr::NegVar(_) => false,
        TypeExpr::Rec(x, b) => is_tailrec(b, &ctx.with(x.clone())),
    }
}

/// Whether every message type along the continuations of `t` is closed.
/// Messages nested inside messages are not inspected.
pub fn has_closed_messages(t: &TypeExpr) -> bool {
    match t {
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => m.is_closed() && has_closed_messages(c),
        TypeExpr::Rec(_, b) => has_closed_messages(b),
        _ => true,
    }
}

fn check_closing(t: &TypeExpr, seq: &SubstSeq) -> Result<(), DualityError> {
    let fv = free_vars(&apply_subst_seq(t, seq));
    if fv.is_empty() {
        Ok(())
    } else {
        Err(DualityError::NotClosing(fv.into_iter().collect()))
    }
}

/// `mcl_σ(t)`. The sequence must close `t`.
pub fn message_closure(t: &TypeExpr, seq: &SubstSeq) -> Result<TypeExpr, DualityError> {
    reject_neg_vars(t)?;
    check_closing(t, seq)?;
    closure(t, seq)
}

fn closure(t: &TypeExpr, seq: &SubstSeq) -> Result<TypeExpr, DualityError> {
    Ok(match t {
        TypeExpr::End => TypeExpr::End,
        TypeExpr::Var(x) => TypeExpr::Var(x.clone()),
        TypeExpr::In(m, c) => TypeExpr::input(closed_message(m, seq), closure(c, seq)?),
        TypeExpr::Out(m, c) => TypeExpr::output(closed_message(m, seq), closure(c, seq)?),
        TypeExpr::Rec(x, b) => {
            let inner = seq.prepend(VarOcc::pos(x.clone()), t.clone());
            TypeExpr::Rec(x.clone(), Box::new(closure(b, &inner)?))
        }
        TypeExpr::Int => return Err(DualityError::NotSession),
        TypeExpr::NegVar(x) => return Err(DualityError::NegativeVariable(x.clone())),
    })
}

fn closed_message(m: &TypeExpr, seq: &SubstSeq) -> TypeExpr {
    let closed = apply_subst_seq(m, seq);
    debug_assert!(closed.is_closed(), "closing sequence leaves messages closed");
    closed
}

/// Message closure of a closed type.
pub fn mcl(t: &TypeExpr) -> Result<TypeExpr, DualityError> {
    message_closure(t, &SubstSeq::empty())
}

/// `mcdual_σ(s)`: naive duality and message closure in one pass.
pub fn mcdual(s: &TypeExpr, seq: &SubstSeq) -> Result<TypeExpr, DualityError> {
    reject_neg_vars(s)?;
    check_closing(s, seq)?;
    otf(s, seq)
}

fn otf(s: &TypeExpr, seq: &SubstSeq) -> Result<TypeExpr, DualityError> {
    Ok(match s {
        TypeExpr::End => TypeExpr::End,
        TypeExpr::Var(x) => TypeExpr::Var(x.clone()),
        TypeExpr::In(m, c) => TypeExpr::output(closed_message(m, seq), otf(c, seq)?),
        TypeExpr::Out(m, c) => TypeExpr::input(closed_message(m, seq), otf(c, seq)?),
        TypeExpr::Rec(x, b) => {
            let inner = seq.prepend(VarOcc::pos(x.clone()), s.clone());
            TypeExpr::Rec(x.clone(), Box::new(otf(b, &inner)?))
        }
        TypeExpr::Int => return Err(DualityError::NotSession),
        TypeExpr::NegVar(x) => return Err(DualityError::NegativeVariable(x.clone())),
    })
}

pub fn mcdual_closed(s: &TypeExpr) -> Result<TypeExpr, DualityError> {
    mcdual(s, &SubstSeq::empty())
}

/// Dual with negative variables; at a binder the dualized body has `X` and
/// `~X` exchanged.
pub fn lm_dual(s: &TypeExpr) -> Result<TypeExpr, DualityError> {
    Ok(match s {
        TypeExpr::End => TypeExpr::End,
        TypeExpr::Var(x) => TypeExpr::NegVar(x.clone()),
        TypeExpr::NegVar(x) => TypeExpr::Var(x.clone()),
        TypeExpr::In(m, c) => TypeExpr::output((**m).clone(), lm_dual(c)?),
        TypeExpr::Out(m, c) => TypeExpr::input((**m).clone(), lm_dual(c)?),
        TypeExpr::Rec(x, b) => TypeExpr::Rec(x.clone(), Box::new(subst_neg_swap(&lm_dual(b)?, x))),
        TypeExpr::Int => return Err(DualityError::NotSession),
    })
}

/// Same result as [`lm_dual`], computed by replacing `X` with `~X` in the body
/// before dualizing it.
pub fn lmp_dual(s: &TypeExpr) -> Result<TypeExpr, DualityError> {
    Ok(match s {
        TypeExpr::End => TypeExpr::End,
        TypeExpr::Var(x) => TypeExpr::NegVar(x.clone()),
        TypeExpr::NegVar(x) => TypeExpr::Var(x.clone()),
        TypeExpr::In(m, c) => TypeExpr::output((**m).clone(), lmp_dual(c)?),
        TypeExpr::Out(m, c) => TypeExpr::input((**m).clone(), lmp_dual(c)?),
        TypeExpr::Rec(x, b) => {
            let negated = substitute(b, &VarOcc::pos(x.clone()), &TypeExpr::NegVar(x.clone()));
            TypeExpr::Rec(x.clone(), Box::new(lmp_dual(&negated)?))
        }
        TypeExpr::Int => return Err(DualityError::NotSession),
    })
}

/// [`lmp_dual`] followed, at each binder, by replacing `~X` with the original
/// `rec X.S`. On types without negative variables the result has none either.
pub fn cdual(s: &TypeExpr) -> Result<TypeExpr, DualityError> {
    Ok(match s {
        TypeExpr::End => TypeExpr::End,
        TypeExpr::Var(x) => TypeExpr::NegVar(x.clone()),
        TypeExpr::NegVar(x) => TypeExpr::Var(x.clone()),
        TypeExpr::In(m, c) => TypeExpr::output((**m).clone(), cdual(c)?),
        TypeExpr::Out(m, c) => TypeExpr::input((**m).clone(), cdual(c)?),
        TypeExpr::Rec(x, b) => {
            let negated = substitute(b, &VarOcc::pos(x.clone()), &TypeExpr::NegVar(x.clone()));
            let body = substitute(&cdual(&negated)?, &VarOcc::neg(x.clone()), s);
            TypeExpr::Rec(x.clone(), Box::new(body))
        }
        TypeExpr::Int => return Err(DualityError::NotSession),
    })
}

/// The available dual constructions, by their command-line names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DualMethod {
    Naive,
    MclThenNaive,
    Otf,
    Lm,
    Lmp,
    Cdual,
}

impl DualMethod {
    pub const ALL: [DualMethod; 6] = [
        DualMethod::Naive,
        DualMethod::MclThenNaive,
        DualMethod::Otf,
        DualMethod::Lm,
        DualMethod::Lmp,
        DualMethod::Cdual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DualMethod::Naive => "naive",
            DualMethod::MclThenNaive => "mcl-then-naive",
            DualMethod::Otf => "otf",
            DualMethod::Lm => "lm",
            DualMethod::Lmp => "lmp",
            DualMethod::Cdual => "cdual",
        }
    }

    pub fn apply(self, s: &TypeExpr) -> Result<TypeExpr, DualityError> {
        match self {
            DualMethod::Naive => naive_dual(s),
            DualMethod::MclThenNaive => naive_dual(&mcl(s)?),
            DualMethod::Otf => mcdual_closed(s),
            DualMethod::Lm => lm_dual(s),
            DualMethod::Lmp => lmp_dual(s),
            DualMethod::Cdual => cdual(s),
        }
    }
}

impl fmt::Display for DualMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DualMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DualMethod::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown duality method `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{tree_dual_related, tree_of};
    use crate::syntax::{alpha_eq, size};
    use crate::text::parse;

    fn p(s: &str) -> TypeExpr {
        parse(s).unwrap()
    }

    fn assert_alpha(got: &TypeExpr, want: &str) {
        assert!(alpha_eq(got, &p(want)), "got {got}, want {want}");
    }

    #[test]
    fn naive_examples() {
        assert_alpha(&naive_dual(&p("rec X.?int.X")).unwrap(), "rec X.!int.X");
        assert_eq!(naive_dual(&TypeExpr::End).unwrap(), TypeExpr::End);
        assert_alpha(&naive_dual(&p("rec X.?X.X")).unwrap(), "rec X.!X.X");
        assert!(matches!(naive_dual(&p("rec X.!~X.X")), Err(DualityError::NegativeVariable(_))));
        assert_eq!(naive_dual(&TypeExpr::Int), Err(DualityError::NotSession));
    }

    #[test]
    fn tailrec_examples() {
        let empty = TailRecContext::empty();
        assert!(!is_tailrec(&p("rec X.!(?int.X).end"), &empty));
        assert!(is_tailrec(&TypeExpr::End, &empty));
        assert!(is_tailrec(&p("rec X.?int.X"), &empty));
        assert!(!is_tailrec(&p("rec X.?X.X"), &empty));
        assert!(is_tailrec(&p("rec X.?(rec Y.!int.Y).X"), &empty));
        assert!(!is_tailrec(&p("X"), &empty));
        assert!(is_tailrec(&p("X"), &empty.with(Name::new("X"))));
        assert!(!is_tailrec(&p("rec X.!int.~X"), &empty));
    }

    #[test]
    fn closure_closes_spine_messages_only() {
        let closed = mcl(&p("rec X.!X.X")).unwrap();
        assert!(has_closed_messages(&closed));
        // the copied message carries its own open message `X`
        assert!(!is_tailrec(&closed, &TailRecContext::empty()));
        assert!(!has_closed_messages(&p("rec X.!(?int.X).end")));
        assert!(has_closed_messages(&p("rec X.!(rec Y.!Y.Y).X")));
    }

    #[test]
    fn closure_examples() {
        assert_alpha(&mcl(&p("rec X.!X.X")).unwrap(), "rec X.!(rec X.!X.X).X");
        assert_eq!(mcl(&TypeExpr::End).unwrap(), TypeExpr::End);
        let s = p("rec X.?X.?X.?X.X");
        let closed = mcl(&s).unwrap();
        let want = TypeExpr::rec(
            "X",
            TypeExpr::input(s.clone(), TypeExpr::input(s.clone(), TypeExpr::input(s.clone(), TypeExpr::var("X")))),
        );
        assert!(alpha_eq(&closed, &want));
        assert_eq!(size(&closed), 17);
    }

    #[test]
    fn closure_needs_closing_sequence() {
        assert!(matches!(mcl(&p("!X.end")), Err(DualityError::NotClosing(_))));
        let seq = SubstSeq::empty().then(VarOcc::pos(Name::new("X")), TypeExpr::End);
        assert_alpha(&message_closure(&p("!X.end"), &seq).unwrap(), "!end.end");
        assert_alpha(&mcdual(&p("!X.end"), &seq).unwrap(), "?end.end");
    }

    #[test]
    fn otf_examples() {
        let s = p("rec X.!X.X");
        assert_alpha(&mcdual_closed(&s).unwrap(), "rec X.?(rec X.!X.X).X");
        assert_eq!(mcdual_closed(&TypeExpr::End).unwrap(), TypeExpr::End);
    }

    #[test]
    fn otf_nested_binders_close_messages_innermost_first() {
        // The message of rec X.rec Y.!Y.X is Y, closed by [S2/Y] then [S1/X].
        let s1 = p("rec X.rec Y.!Y.X");
        let d = mcdual_closed(&s1).unwrap();
        let want = parse("rec X.rec Y.?(rec Y.!Y.(rec X.rec Y.!Y.X)).X").unwrap();
        assert!(alpha_eq(&d, &want), "got {d}");
        assert!(alpha_eq(&d, &cdual(&s1).unwrap()));
        assert!(alpha_eq(&d, &naive_dual(&mcl(&s1).unwrap()).unwrap()));
        let (a, b) = (tree_of(&d).unwrap(), tree_of(&s1).unwrap());
        assert!(tree_dual_related(&a, &b).verdict);

        // Appending instead of prepending leaves the message open, and
        // closing it under the outer binder gives a type that is not dual.
        let appended = p("rec X.rec Y.?(rec Y.!Y.X).X");
        assert!(!tree_dual_related(&tree_of(&appended).unwrap(), &b).verdict);
    }

    #[test]
    fn lm_examples() {
        let s = p("rec X.!X.X");
        assert_alpha(&lm_dual(&s).unwrap(), "rec X.?~X.X");
        assert_eq!(lm_dual(&TypeExpr::neg_var("X")).unwrap(), TypeExpr::var("X"));
        assert_eq!(lm_dual(&TypeExpr::End).unwrap(), TypeExpr::End);
        assert_alpha(&lmp_dual(&s).unwrap(), "rec X.?~X.X");
        assert_eq!(lmp_dual(&TypeExpr::var("X")).unwrap(), TypeExpr::neg_var("X"));
        assert_alpha(&lmp_dual(&p("?int.end")).unwrap(), "!int.end");
        assert_eq!(lm_dual(&TypeExpr::Int), Err(DualityError::NotSession));
    }

    #[test]
    fn cdual_examples() {
        assert_alpha(&cdual(&p("rec X.!X.X")).unwrap(), "rec X.?(rec X.!X.X).X");
        assert_eq!(cdual(&TypeExpr::End).unwrap(), TypeExpr::End);
    }

    #[test]
    fn method_names_round_trip() {
        for m in DualMethod::ALL {
            assert_eq!(m.name().parse::<DualMethod>().unwrap(), m);
        }
        assert!("bogus".parse::<DualMethod>().is_err());
    }
}
