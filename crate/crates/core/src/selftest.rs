//! Differential property suite over generated types.
//!
//! Each property runs on every type of one or more generator configurations.
//! The first failure is shrunk and reported with the seed that produced it.

use std::fmt;

use serde::Serialize;

use crate::check::{check_dual, check_equiv, pair_budget, unfold};
use crate::duality::{
    cdual, has_closed_messages, is_tailrec, lm_dual, lmp_dual, mcdual, mcdual_closed, mcl, message_closure, naive_dual,
    TailRecContext,
};
use crate::generate::{minimize, subterms, GenConfig, Generator};
use crate::semantics::{coidual, tree_dual_related, tree_equal, tree_of};
use crate::syntax::{alpha_eq, free_vars, is_normal, normalize, size, Polarity, SubstSeq, TypeExpr, VarOcc};
use crate::text::{parse, print};

/// The generator configurations the suite draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    /// Unrestricted positive types: open messages and nested binders.
    Plain,
    /// Only tail-recursive types.
    Tailrec,
    /// Negative variables allowed.
    NegVars,
}

impl Flavor {
    pub fn config(self, seed: u64) -> GenConfig {
        let base = GenConfig { seed, ..GenConfig::default() };
        match self {
            Flavor::Plain => base,
            Flavor::Tailrec => GenConfig { tailrec_only: true, ..base },
            Flavor::NegVars => GenConfig { allow_neg_vars: true, ..base },
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Plain => "plain",
            Flavor::Tailrec => "tailrec",
            Flavor::NegVars => "neg-vars",
        })
    }
}

const POSITIVE: &[Flavor] = &[Flavor::Plain, Flavor::Tailrec];
const ALL: &[Flavor] = &[Flavor::Plain, Flavor::Tailrec, Flavor::NegVars];

/// A named predicate over closed generated types.
pub struct Property {
    pub name: &'static str,
    pub flavors: &'static [Flavor],
    pub holds: fn(&TypeExpr) -> bool,
}

/// The properties expected to hold on every generated type.
pub fn properties() -> Vec<Property> {
    vec![
        Property { name: "otf-equals-mcl-then-naive", flavors: POSITIVE, holds: otf_equals_mcl_then_naive },
        Property { name: "lm-equals-lmp", flavors: POSITIVE, holds: lm_equals_lmp },
        Property { name: "otf-equals-cdual", flavors: POSITIVE, holds: otf_equals_cdual },
        Property { name: "duals-agree-exactly", flavors: POSITIVE, holds: duals_agree_exactly },
        Property { name: "cdual-tree-sound", flavors: POSITIVE, holds: |s| sound(s, cdual(s).ok()) },
        Property { name: "otf-tree-sound", flavors: POSITIVE, holds: |s| sound(s, mcdual_closed(s).ok()) },
        Property {
            name: "mcl-then-naive-tree-sound",
            flavors: POSITIVE,
            holds: |s| sound(s, mcl(s).and_then(|c| naive_dual(&c)).ok()),
        },
        Property { name: "lm-tree-sound", flavors: ALL, holds: lm_tree_sound },
        Property { name: "check-equiv-matches-trees", flavors: ALL, holds: check_equiv_matches_trees },
        Property { name: "check-dual-matches-trees", flavors: ALL, holds: check_dual_matches_trees },
        Property { name: "checks-within-budget", flavors: ALL, holds: checks_within_budget },
        Property { name: "naive-sound-on-tailrec", flavors: &[Flavor::Tailrec], holds: naive_sound },
        Property { name: "mcl-closes-messages", flavors: POSITIVE, holds: mcl_closes_messages },
        Property {
            name: "naive-sound-on-closed-messages",
            flavors: &[Flavor::Plain],
            holds: |s| !has_closed_messages(s) || naive_sound(s),
        },
        Property { name: "lm-preserves-size", flavors: ALL, holds: lm_preserves_size },
        Property { name: "cdual-involution", flavors: POSITIVE, holds: cdual_involution },
        Property { name: "tailrec-context-lemmas", flavors: ALL, holds: tailrec_context_lemmas },
        Property { name: "normalize-sound", flavors: ALL, holds: normalize_sound },
        Property { name: "print-parse-round-trip", flavors: ALL, holds: round_trip },
    ]
}

/// Naive duality on arbitrary types. Known not to hold; it exists so the
/// suite can demonstrate that it finds the failure.
pub fn naive_on_all_types() -> Property {
    Property { name: "naive-sound-on-all-types", flavors: &[Flavor::Plain], holds: naive_sound }
}

/// Message closure judged by the full tail-recursive formation rules. Fails
/// as soon as a closed message copied into place has open messages of its
/// own, as in `mcl(rec X.!X.X)`.
pub fn mcl_tailrec_formal() -> Property {
    Property { name: "mcl-is-tailrec", flavors: POSITIVE, holds: mcl_is_tailrec }
}

/// Properties that generated types refute.
pub fn refuted_properties() -> Vec<Property> {
    vec![naive_on_all_types(), mcl_tailrec_formal()]
}

fn otf_equals_mcl_then_naive(s: &TypeExpr) -> bool {
    let top = match (mcdual_closed(s), mcl(s).and_then(|c| naive_dual(&c))) {
        (Ok(a), Ok(b)) => alpha_eq(&a, &b),
        _ => false,
    };
    top && rec_bodies(s).all(|(body, seq)| match (mcdual(body, &seq), message_closure(body, &seq)) {
        (Ok(a), Ok(c)) => naive_dual(&c).is_ok_and(|b| alpha_eq(&a, &b)),
        _ => false,
    })
}

// Bodies of closed `rec X.B` subterms, each with the sequence `[rec X.B / X]`.
fn rec_bodies(s: &TypeExpr) -> impl Iterator<Item = (&TypeExpr, SubstSeq)> {
    subterms(s).into_iter().filter_map(|t| match t {
        TypeExpr::Rec(x, b) if t.is_closed() => Some((&**b, SubstSeq::empty().then(VarOcc::pos(x.clone()), t.clone()))),
        _ => None,
    })
}

fn lm_equals_lmp(s: &TypeExpr) -> bool {
    subterms(s).into_iter().all(|t| match (lm_dual(t), lmp_dual(t)) {
        (Ok(a), Ok(b)) => alpha_eq(&a, &b),
        (Err(_), Err(_)) => true,
        _ => false,
    })
}

fn otf_equals_cdual(s: &TypeExpr) -> bool {
    matches!((mcdual_closed(s), cdual(s)), (Ok(a), Ok(b)) if alpha_eq(&a, &b))
}

// The agreeing duals compared without identifying bound names.
fn duals_agree_exactly(s: &TypeExpr) -> bool {
    let (Ok(otf), Ok(fused), Ok(c)) = (mcdual_closed(s), mcl(s).and_then(|c| naive_dual(&c)), cdual(s)) else {
        return false;
    };
    otf == fused && otf == c && lm_dual(s).ok() == lmp_dual(s).ok()
}

fn sound(s: &TypeExpr, d: Option<TypeExpr>) -> bool {
    let Some(d) = d else { return false };
    match (tree_of(&d), tree_of(s)) {
        (Ok(a), Ok(b)) => tree_dual_related(&a, &b).verdict,
        _ => false,
    }
}

fn lm_tree_sound(s: &TypeExpr) -> bool {
    let Ok(d) = lm_dual(s) else { return false };
    match (tree_of(s), tree_of(&d)) {
        (Ok(a), Ok(b)) => tree_equal(&coidual(&a), &b).verdict,
        _ => false,
    }
}

// Types to compare `s` against, related to it or not.
fn partners(s: &TypeExpr) -> Vec<TypeExpr> {
    let mut out = vec![s.clone(), unfold(s), TypeExpr::End];
    out.extend(lm_dual(s).ok());
    out.extend(lm_dual(s).and_then(|d| lm_dual(&d)).ok());
    out.extend(cdual(s).ok());
    out.extend(naive_dual(s).ok());
    out.extend(normalize(s).ok());
    out.extend(subterms(s).into_iter().filter(|t| t.is_closed()).cloned());
    out
}

fn check_equiv_matches_trees(s: &TypeExpr) -> bool {
    let Ok(ts) = tree_of(s) else { return false };
    partners(s).iter().all(|u| {
        let (Ok(tu), Ok(report)) = (tree_of(u), check_equiv(s, u)) else { return false };
        report.verdict == tree_equal(&ts, &tu).verdict
    })
}

fn check_dual_matches_trees(s: &TypeExpr) -> bool {
    let Ok(ts) = tree_of(s) else { return false };
    partners(s).iter().filter(|u| **u != TypeExpr::Int).all(|u| {
        let (Ok(tu), Ok(report)) = (tree_of(u), check_dual(s, u)) else { return false };
        report.verdict == tree_dual_related(&ts, &tu).verdict
    })
}

fn checks_within_budget(s: &TypeExpr) -> bool {
    partners(s).iter().filter(|u| **u != TypeExpr::Int).all(|u| {
        let budget = pair_budget(s, u);
        let equiv = check_equiv(s, u).is_ok_and(|r| r.pairs_explored <= budget);
        let dual = check_dual(s, u).is_ok_and(|r| r.pairs_explored <= budget);
        equiv && dual
    })
}

fn naive_sound(s: &TypeExpr) -> bool {
    naive_dual(s).is_ok_and(|d| check_dual(s, &d).is_ok_and(|r| r.verdict))
}

fn mcl_is_tailrec(s: &TypeExpr) -> bool {
    let top = mcl(s).is_ok_and(|c| is_tailrec(&c, &TailRecContext::empty()));
    top && rec_bodies(s).all(|(body, seq)| {
        let ctx: TailRecContext = seq.domain().into_iter().collect();
        message_closure(body, &seq).is_ok_and(|c| is_tailrec(&c, &ctx))
    })
}

fn mcl_closes_messages(s: &TypeExpr) -> bool {
    mcl(s).is_ok_and(|c| has_closed_messages(&c))
        && rec_bodies(s).all(|(body, seq)| message_closure(body, &seq).is_ok_and(|c| has_closed_messages(&c)))
}

fn lm_preserves_size(s: &TypeExpr) -> bool {
    let n = size(s);
    lm_dual(s).is_ok_and(|d| size(&d) == n) && lmp_dual(s).is_ok_and(|d| size(&d) == n)
}

fn cdual_involution(s: &TypeExpr) -> bool {
    let Ok(twice) = cdual(s).and_then(|d| cdual(&d)) else { return false };
    match (tree_of(&twice), tree_of(s)) {
        (Ok(a), Ok(b)) => tree_equal(&a, &b).verdict,
        _ => false,
    }
}

// For every subterm and every context made of the type's binders with at most
// one left out: tail recursion bounds the free variables, and unused names can
// be dropped from the context.
fn tailrec_context_lemmas(s: &TypeExpr) -> bool {
    let binders = s.binders();
    let mut contexts: Vec<TailRecContext> = vec![binders.iter().cloned().collect()];
    for skip in &binders {
        contexts.push(binders.iter().filter(|b| *b != skip).cloned().collect());
    }
    subterms(s).into_iter().all(|t| {
        let fv = free_vars(t);
        contexts.iter().all(|ctx| {
            if !is_tailrec(t, ctx) {
                return true;
            }
            let bounded = fv.iter().all(|v| v.polarity == Polarity::Positive && ctx.contains(&v.name));
            let strengthened = ctx.names().iter().all(|x| {
                fv.iter().any(|v| &v.name == x) || {
                    let smaller: TailRecContext = ctx.names().iter().filter(|y| *y != x).cloned().collect();
                    is_tailrec(t, &smaller)
                }
            });
            bounded && strengthened
        })
    })
}

fn normalize_sound(s: &TypeExpr) -> bool {
    let Ok(n) = normalize(s) else { return false };
    if !is_normal(&n) {
        return false;
    }
    match (tree_of(&n), tree_of(s)) {
        (Ok(a), Ok(b)) => tree_equal(&a, &b).verdict,
        _ => false,
    }
}

fn round_trip(s: &TypeExpr) -> bool {
    parse(&print(s)).is_ok_and(|t| alpha_eq(&t, s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub seed: u64,
    /// Position of the failing type in the generated stream.
    pub index: usize,
    pub original: String,
    pub shrunk: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub property: String,
    pub flavor: Flavor,
    pub passed: usize,
    pub total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl PropertyOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for PropertyOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.ok() { "ok  " } else { "FAIL" };
        write!(f, "{mark} {:<32} [{}] {}/{}", self.property, self.flavor, self.passed, self.total)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n     seed {} sample {}: {}\n     shrunk: {}", c.seed, c.index, c.original, c.shrunk)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub count: usize,
    pub outcomes: Vec<PropertyOutcome>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(PropertyOutcome::ok)
    }
}

/// Generates `count` types per flavor from `seed` and checks `property` on
/// each of them.
pub fn run_property(property: &Property, flavor: Flavor, seed: u64, count: usize) -> PropertyOutcome {
    let generator = Generator::new(flavor.config(seed)).expect("suite configurations are valid");
    let mut passed = 0;
    let mut counterexample = None;
    for (index, t) in generator.take(count).enumerate() {
        if (property.holds)(&t) {
            passed += 1;
        } else if counterexample.is_none() {
            let shrunk = minimize(&t, |u| !(property.holds)(u));
            counterexample = Some(Counterexample { seed, index, original: print(&t), shrunk: print(&shrunk) });
        }
    }
    PropertyOutcome { property: property.name.to_string(), flavor, passed, total: count, counterexample }
}

/// Runs [`properties`], and [`refuted_properties`] too if asked.
pub fn run_selftest(seed: u64, count: usize, include_refuted: bool) -> SelftestReport {
    let mut props = properties();
    if include_refuted {
        props.extend(refuted_properties());
    }
    let outcomes = props.iter().flat_map(|p| p.flavors.iter().map(move |f| run_property(p, *f, seed, count))).collect();
    SelftestReport { seed, count, outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = run_selftest(1, 40, false);
        for o in &report.outcomes {
            assert!(o.ok(), "{o}");
        }
    }

    #[test]
    fn naive_on_all_types_is_refuted() {
        let o = run_property(&naive_on_all_types(), Flavor::Plain, 1, 200);
        assert!(!o.ok());
        let c = o.counterexample.unwrap();
        let shrunk = parse(&c.shrunk).unwrap();
        assert!(!naive_sound(&shrunk));
        assert!(size(&shrunk) <= size(&parse(&c.original).unwrap()));
    }

    #[test]
    fn formal_tailrec_of_closure_is_refuted() {
        assert!(!mcl_is_tailrec(&parse("rec X.!X.X").unwrap()));
        assert!(!run_property(&mcl_tailrec_formal(), Flavor::Plain, 1, 200).ok());
    }
}
