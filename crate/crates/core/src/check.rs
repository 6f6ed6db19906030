//! Coinductive equivalence and duality checks on `rec` terms.
//!
//! Both relations are decided by a greatest-fixpoint search over pairs of
//! terms, with the rules applied in a fixed order:
//!
//! 1. if the right term is `rec`, unfold it;
//! 2. otherwise, if the left term is `rec`, unfold it;
//! 3. otherwise compare heads and continue with the children.
//!
//! For duality the heads must be `?`/`!` crossed (or both `end`), messages are
//! compared for equivalence and continuations for duality. A pair met again
//! is assumed related. Pairs are compared up to α-equivalence.
//!
//! A negative variable `~X` bound by `rec X.S` is unfolded to
//! [`lm_dual`]`(rec X.S)`.

use thiserror::Error;

use crate::duality::{lm_dual, DualityError};
use crate::search::{explore, Step};
use crate::semantics::{CheckReport, Move};
use crate::syntax::{free_vars, is_contractive, size, substitute, DeBruijn, TypeExpr, VarOcc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("type is not closed: {0}")]
    Open(String),
    #[error("type is not contractive: {0}")]
    NonContractive(String),
    #[error("`int` cannot take part in a duality check: {0}")]
    NotSession(String),
    #[error("explored {explored} pairs, more than the budget of {budget}")]
    BudgetExceeded { explored: usize, budget: usize },
}

/// Which coinductive relation a pair is checked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Equiv,
    Dual,
}

type Pair = (Relation, TypeExpr, TypeExpr);

/// The pair-count budget the checks are expected to stay within.
pub fn pair_budget(t: &TypeExpr, u: &TypeExpr) -> usize {
    4 * size(t) * size(u)
}

fn validate(t: &TypeExpr) -> Result<(), CheckError> {
    if !t.is_closed() {
        let free: Vec<String> = free_vars(t).iter().map(ToString::to_string).collect();
        return Err(CheckError::Open(format!("{t} has free {}", free.join(", "))));
    }
    if !is_contractive(t) {
        return Err(CheckError::NonContractive(t.to_string()));
    }
    Ok(())
}

pub fn check_equiv(t: &TypeExpr, u: &TypeExpr) -> Result<CheckReport, CheckError> {
    run(Relation::Equiv, t, u, None)
}

pub fn check_dual(r: &TypeExpr, s: &TypeExpr) -> Result<CheckReport, CheckError> {
    run(Relation::Dual, r, s, None)
}

/// [`check_equiv`], giving up once more than `budget` pairs were explored.
pub fn check_equiv_with_budget(t: &TypeExpr, u: &TypeExpr, budget: usize) -> Result<CheckReport, CheckError> {
    run(Relation::Equiv, t, u, Some(budget))
}

/// [`check_dual`], giving up once more than `budget` pairs were explored.
pub fn check_dual_with_budget(r: &TypeExpr, s: &TypeExpr, budget: usize) -> Result<CheckReport, CheckError> {
    run(Relation::Dual, r, s, Some(budget))
}

fn run(rel: Relation, l: &TypeExpr, r: &TypeExpr, budget: Option<usize>) -> Result<CheckReport, CheckError> {
    validate(l)?;
    validate(r)?;
    if rel == Relation::Dual {
        for t in [l, r] {
            if *t == TypeExpr::Int {
                return Err(CheckError::NotSession(t.to_string()));
            }
        }
    }
    let root = (rel, l.clone(), r.clone());
    let key = |(rel, a, b): &Pair| (*rel, DeBruijn::of(a), DeBruijn::of(b));
    let outcome = explore(root, key, step, budget)
        .map_err(|e| CheckError::BudgetExceeded { explored: e.visited, budget: budget.unwrap_or(usize::MAX) })?;
    Ok(CheckReport { verdict: outcome.verdict, witness: outcome.witness, pairs_explored: outcome.visited })
}

/// `S[rec X.S/X][lm_dual(rec X.S)/~X]` for `t = rec X.S`.
pub fn unfold(t: &TypeExpr) -> TypeExpr {
    match t {
        TypeExpr::Rec(x, body) => {
            let once = substitute(body, &VarOcc::pos(x.clone()), t);
            if once.has_neg_vars() {
                let dual = lm_dual(t).unwrap_or_else(|e: DualityError| panic!("unfolding {t}: {e}"));
                substitute(&once, &VarOcc::neg(x.clone()), &dual)
            } else {
                once
            }
        }
        other => other.clone(),
    }
}

fn step((rel, l, r): &Pair) -> Step<Pair> {
    if r.is_rec() {
        return Step::Next(vec![(Move::UnfoldRight, (*rel, l.clone(), unfold(r)))]);
    }
    if l.is_rec() {
        return Step::Next(vec![(Move::UnfoldLeft, (*rel, unfold(l), r.clone()))]);
    }
    match children(*rel, l, r) {
        Some(next) => next,
        None => Step::Mismatch,
    }
}

fn children(rel: Relation, l: &TypeExpr, r: &TypeExpr) -> Option<Step<Pair>> {
    use TypeExpr::*;
    let (m1, c1, m2, c2) = match (rel, l, r) {
        (_, End, End) => return Some(Step::Related),
        (Relation::Equiv, Int, Int) => return Some(Step::Related),
        (Relation::Equiv, In(m1, c1), In(m2, c2)) | (Relation::Equiv, Out(m1, c1), Out(m2, c2)) => (m1, c1, m2, c2),
        (Relation::Dual, In(m1, c1), Out(m2, c2)) | (Relation::Dual, Out(m1, c1), In(m2, c2)) => (m1, c1, m2, c2),
        _ => return None,
    };
    Some(Step::Next(vec![
        (Move::MsgChild, (Relation::Equiv, (**m1).clone(), (**m2).clone())),
        (Move::ContChild, (rel, (**c1).clone(), (**c2).clone())),
    ]))
}

/// Whether the rules reject the pair outright: neither side is `rec` and the
/// heads do not match.
pub fn heads_conflict(rel: Relation, l: &TypeExpr, r: &TypeExpr) -> bool {
    !l.is_rec() && !r.is_rec() && children(rel, l, r).is_none()
}

/// Follows a witness path from the input pair. Returns the pair reached, or
/// `None` if some move does not apply.
pub fn replay_check(rel: Relation, l: &TypeExpr, r: &TypeExpr, path: &[Move]) -> Option<Pair> {
    let mut pair = (rel, l.clone(), r.clone());
    for mv in path {
        let next = match step(&pair) {
            Step::Next(moves) => moves.into_iter().find(|(m, _)| m == mv)?.1,
            Step::Related | Step::Mismatch => return None,
        };
        pair = next;
    }
    Some(pair)
}
