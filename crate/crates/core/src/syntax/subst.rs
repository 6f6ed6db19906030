use std::collections::BTreeSet;

use super::{free_names, Name, Polarity, TypeExpr, VarOcc};

/// Replaces the free occurrences of `target` (name and polarity) in `t` by `u`.
///
/// A binder for the target's name blocks substitution of either polarity.
/// Binders that would capture a free name of `u` are renamed on the way down,
/// so the result is correct even when the Barendregt convention does not hold.
pub fn substitute(t: &TypeExpr, target: &VarOcc, u: &TypeExpr) -> TypeExpr {
    let fv_u = free_names(u);
    let mut fresh = FreshTags::new(t.max_tag().max(u.max_tag()));
    subst_in(t, target, u, &fv_u, &mut fresh)
}

struct FreshTags(u32);

impl FreshTags {
    fn new(max_seen: u32) -> Self {
        FreshTags(max_seen)
    }

    fn next(&mut self, like: &Name) -> Name {
        self.0 += 1;
        like.retag(self.0)
    }
}

fn occurs_free(t: &TypeExpr, target: &VarOcc) -> bool {
    match t {
        TypeExpr::Int | TypeExpr::End => false,
        TypeExpr::Var(x) => target.polarity == Polarity::Positive && *x == target.name,
        TypeExpr::NegVar(x) => target.polarity == Polarity::Negative && *x == target.name,
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => occurs_free(m, target) || occurs_free(c, target),
        TypeExpr::Rec(x, b) => *x != target.name && occurs_free(b, target),
    }
}

fn subst_in(t: &TypeExpr, target: &VarOcc, u: &TypeExpr, fv_u: &BTreeSet<Name>, fresh: &mut FreshTags) -> TypeExpr {
    match t {
        TypeExpr::Int | TypeExpr::End => t.clone(),
        TypeExpr::Var(x) if target.polarity == Polarity::Positive && *x == target.name => u.clone(),
        TypeExpr::NegVar(x) if target.polarity == Polarity::Negative && *x == target.name => u.clone(),
        TypeExpr::Var(_) | TypeExpr::NegVar(_) => t.clone(),
        TypeExpr::In(m, c) => TypeExpr::input(subst_in(m, target, u, fv_u, fresh), subst_in(c, target, u, fv_u, fresh)),
        TypeExpr::Out(m, c) => {
            TypeExpr::output(subst_in(m, target, u, fv_u, fresh), subst_in(c, target, u, fv_u, fresh))
        }
        TypeExpr::Rec(x, _) if *x == target.name => t.clone(),
        TypeExpr::Rec(x, b) => {
            if !occurs_free(b, target) {
                return t.clone();
            }
            if fv_u.contains(x) {
                let y = fresh.next(x);
                let b = rename(b, x, &y);
                TypeExpr::Rec(y, Box::new(subst_in(&b, target, u, fv_u, fresh)))
            } else {
                TypeExpr::Rec(x.clone(), Box::new(subst_in(b, target, u, fv_u, fresh)))
            }
        }
    }
}

/// Renames free occurrences of `from` (both polarities) to `to`.
fn rename(t: &TypeExpr, from: &Name, to: &Name) -> TypeExpr {
    match t {
        TypeExpr::Int | TypeExpr::End => t.clone(),
        TypeExpr::Var(x) if x == from => TypeExpr::Var(to.clone()),
        TypeExpr::NegVar(x) if x == from => TypeExpr::NegVar(to.clone()),
        TypeExpr::Var(_) | TypeExpr::NegVar(_) => t.clone(),
        TypeExpr::In(m, c) => TypeExpr::input(rename(m, from, to), rename(c, from, to)),
        TypeExpr::Out(m, c) => TypeExpr::output(rename(m, from, to), rename(c, from, to)),
        TypeExpr::Rec(x, _) if x == from => t.clone(),
        TypeExpr::Rec(x, b) => TypeExpr::Rec(x.clone(), Box::new(rename(b, from, to))),
    }
}

/// Exchanges free `X` and `~X` throughout `t`. A binder for `X` stops the swap.
pub fn subst_neg_swap(t: &TypeExpr, x: &Name) -> TypeExpr {
    match t {
        TypeExpr::Int | TypeExpr::End => t.clone(),
        TypeExpr::Var(y) if y == x => TypeExpr::NegVar(y.clone()),
        TypeExpr::NegVar(y) if y == x => TypeExpr::Var(y.clone()),
        TypeExpr::Var(_) | TypeExpr::NegVar(_) => t.clone(),
        TypeExpr::In(m, c) => TypeExpr::input(subst_neg_swap(m, x), subst_neg_swap(c, x)),
        TypeExpr::Out(m, c) => TypeExpr::output(subst_neg_swap(m, x), subst_neg_swap(c, x)),
        TypeExpr::Rec(y, _) if y == x => t.clone(),
        TypeExpr::Rec(y, b) => TypeExpr::Rec(y.clone(), Box::new(subst_neg_swap(b, x))),
    }
}

/// An ordered sequence of single-variable substitutions, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubstSeq {
    steps: Vec<(VarOcc, TypeExpr)>,
}

impl SubstSeq {
    pub fn empty() -> Self {
        SubstSeq::default()
    }

    pub fn from_steps(steps: Vec<(VarOcc, TypeExpr)>) -> Self {
        SubstSeq { steps }
    }

    /// `[u/target] ; self`
    pub fn prepend(&self, target: VarOcc, u: TypeExpr) -> Self {
        let mut steps = Vec::with_capacity(self.steps.len() + 1);
        steps.push((target, u));
        steps.extend(self.steps.iter().cloned());
        SubstSeq { steps }
    }

    /// `self ; [u/target]`
    pub fn then(mut self, target: VarOcc, u: TypeExpr) -> Self {
        self.steps.push((target, u));
        self
    }

    pub fn steps(&self) -> &[(VarOcc, TypeExpr)] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    /// The substituted variables.
    pub fn domain(&self) -> BTreeSet<Name> {
        self.steps.iter().map(|(v, _)| v.name.clone()).collect()
    }

    /// True when applying the sequence to `t` leaves no free variables.
    pub fn is_closing_for(&self, t: &TypeExpr) -> bool {
        apply_subst_seq(t, self).is_closed()
    }
}

pub fn apply_subst_seq(t: &TypeExpr, seq: &SubstSeq) -> TypeExpr {
    seq.steps.iter().fold(t.clone(), |acc, (target, u)| substitute(&acc, target, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq;
    use crate::text::parse;

    fn p(s: &str) -> TypeExpr {
        parse(s).unwrap()
    }

    fn x() -> Name {
        Name::new("X")
    }

    #[test]
    fn substitute_replaces_variable() {
        assert_eq!(substitute(&TypeExpr::var("X"), &VarOcc::pos(x()), &TypeExpr::End), TypeExpr::End);
    }

    #[test]
    fn positive_substitution_skips_negative_occurrence() {
        let t = TypeExpr::neg_var("X");
        assert_eq!(substitute(&t, &VarOcc::pos(x()), &TypeExpr::End), t);
    }

    #[test]
    fn negative_substitution() {
        let t = p("?~X.X");
        let s = p("rec X.!X.X");
        let got = substitute(&t, &VarOcc::neg(x()), &s);
        assert!(alpha_eq(&got, &TypeExpr::input(s.clone(), TypeExpr::var("X"))));
    }

    #[test]
    fn binder_blocks_both_polarities() {
        let t = TypeExpr::rec("X", TypeExpr::output(TypeExpr::var("X"), TypeExpr::neg_var("X")));
        assert_eq!(substitute(&t, &VarOcc::pos(x()), &TypeExpr::End), t);
        assert_eq!(substitute(&t, &VarOcc::neg(x()), &TypeExpr::End), t);
    }

    #[test]
    fn substitution_avoids_capture() {
        // (rec Y.!X.Y)[Y/X] must not capture the free Y
        let t = TypeExpr::rec("Y", TypeExpr::output(TypeExpr::var("X"), TypeExpr::var("Y")));
        let got = substitute(&t, &VarOcc::pos(x()), &TypeExpr::var("Y"));
        match &got {
            TypeExpr::Rec(b, body) => {
                assert_ne!(*b, Name::new("Y"));
                assert_eq!(**body, TypeExpr::output(TypeExpr::var("Y"), TypeExpr::Var(b.clone())));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn neg_swap_examples() {
        let t = p("?X.~X");
        assert_eq!(subst_neg_swap(&t, &x()), p("?~X.X"));
        let y = TypeExpr::var("Y");
        assert_eq!(subst_neg_swap(&y, &x()), y);
        assert_eq!(subst_neg_swap(&subst_neg_swap(&t, &x()), &x()), t);
    }

    #[test]
    fn seq_application_examples() {
        let t = p("rec X.!X.X");
        assert_eq!(apply_subst_seq(&t, &SubstSeq::empty()), t);

        let s1 = p("rec X.!X.X");
        let s2 = p("rec Y.!Y.X");
        let seq = SubstSeq::empty().then(VarOcc::pos(x()), s1).then(VarOcc::pos(Name::new("Y")), s2.clone());
        assert!(alpha_eq(&apply_subst_seq(&TypeExpr::var("Y"), &seq), &s2));

        let seq = SubstSeq::empty().then(VarOcc::pos(x()), TypeExpr::End).then(VarOcc::pos(x()), p("!int.end"));
        assert_eq!(apply_subst_seq(&TypeExpr::var("X"), &seq), TypeExpr::End);
    }

    #[test]
    fn closing_sequences() {
        let t = p("!X.Y");
        let seq = SubstSeq::empty().then(VarOcc::pos(x()), TypeExpr::End);
        assert!(!seq.is_closing_for(&t));
        let seq = seq.then(VarOcc::pos(Name::new("Y")), TypeExpr::End);
        assert!(seq.is_closing_for(&t));
        assert_eq!(seq.domain().len(), 2);
    }
}
