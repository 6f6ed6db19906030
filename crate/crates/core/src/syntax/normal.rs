use thiserror::Error;

use super::{substitute, Name, TypeExpr, VarOcc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("non-contractive type: binder chain {chain:?} reaches its own variable")]
pub struct NonContractive {
    pub chain: Vec<Name>,
}

/// Finds a chain `rec X1. ... rec Xn. X` (or `~X`) with `X` among the `Xi`.
pub(crate) fn offending_chain(t: &TypeExpr) -> Option<Vec<Name>> {
    match t {
        TypeExpr::Int | TypeExpr::End | TypeExpr::Var(_) | TypeExpr::NegVar(_) => None,
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => offending_chain(m).or_else(|| offending_chain(c)),
        TypeExpr::Rec(_, _) => {
            let mut chain = Vec::new();
            let mut cur = t;
            while let TypeExpr::Rec(x, b) = cur {
                chain.push(x.clone());
                cur = b;
            }
            match cur {
                TypeExpr::Var(y) | TypeExpr::NegVar(y) if chain.contains(y) => Some(chain),
                _ => offending_chain(cur),
            }
        }
    }
}

/// True iff every chain of binders reaches a constructor or a variable bound
/// outside the chain. Negative occurrences count like positive ones.
pub fn is_contractive(t: &TypeExpr) -> bool {
    offending_chain(t).is_none()
}

/// Brings a contractive type into normal form: no binder directly under a
/// binder and no binder whose body is a variable.
///
/// `rec X.rec Y.S` is coalesced into `rec X.S[X/Y][~X/~Y]` and `rec X.Y`
/// becomes `Y`.
pub fn normalize(t: &TypeExpr) -> Result<TypeExpr, NonContractive> {
    if let Some(chain) = offending_chain(t) {
        return Err(NonContractive { chain });
    }
    Ok(norm(t))
}

fn norm(t: &TypeExpr) -> TypeExpr {
    match t {
        TypeExpr::Int | TypeExpr::End | TypeExpr::Var(_) | TypeExpr::NegVar(_) => t.clone(),
        TypeExpr::In(m, c) => TypeExpr::input(norm(m), norm(c)),
        TypeExpr::Out(m, c) => TypeExpr::output(norm(m), norm(c)),
        TypeExpr::Rec(x, b) => {
            let mut body = norm(b);
            loop {
                match body {
                    TypeExpr::Rec(y, inner) => {
                        let pos = substitute(&inner, &VarOcc::pos(y.clone()), &TypeExpr::Var(x.clone()));
                        body = substitute(&pos, &VarOcc::neg(y), &TypeExpr::NegVar(x.clone()));
                    }
                    TypeExpr::Var(ref y) | TypeExpr::NegVar(ref y) => {
                        debug_assert!(y != x, "contractivity was checked");
                        return body;
                    }
                    other => return TypeExpr::Rec(x.clone(), Box::new(other)),
                }
            }
        }
    }
}

/// True when `t` has no `rec` directly under `rec` and no `rec` over a variable.
pub fn is_normal(t: &TypeExpr) -> bool {
    match t {
        TypeExpr::Int | TypeExpr::End | TypeExpr::Var(_) | TypeExpr::NegVar(_) => true,
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => is_normal(m) && is_normal(c),
        TypeExpr::Rec(_, b) => match **b {
            TypeExpr::Rec(..) | TypeExpr::Var(_) | TypeExpr::NegVar(_) => false,
            _ => is_normal(b),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq;
    use crate::text::parse;

    fn p(s: &str) -> TypeExpr {
        parse(s).unwrap()
    }

    fn rec(x: &str, b: TypeExpr) -> TypeExpr {
        TypeExpr::rec(x, b)
    }

    #[test]
    fn contractivity_examples() {
        assert!(!is_contractive(&rec("X", TypeExpr::var("X"))));
        assert!(is_contractive(&TypeExpr::End));
        assert!(!is_contractive(&rec("X", rec("Y", TypeExpr::var("X")))));
        assert!(!is_contractive(&rec("X", rec("Y", TypeExpr::neg_var("X")))));
        assert!(is_contractive(&rec("X", rec("Y", TypeExpr::var("Z")))));
        // nested inside a message
        assert!(!is_contractive(&TypeExpr::output(rec("X", TypeExpr::var("X")), TypeExpr::End)));
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&p("rec X.rec Y.!Y.X")).unwrap();
        assert!(alpha_eq(&n, &p("rec X.!X.X")));
        assert_eq!(normalize(&p("?int.end")).unwrap(), p("?int.end"));
        assert_eq!(normalize(&p("rec X.Y")).unwrap(), TypeExpr::var("Y"));
        assert!(normalize(&rec("X", TypeExpr::var("X"))).is_err());
    }

    #[test]
    fn coalescing_maps_both_polarities() {
        let n = normalize(&p("rec X.rec Y.!~Y.X")).unwrap();
        assert!(alpha_eq(&n, &p("rec X.!~X.X")));
        assert!(is_normal(&n));
    }

    #[test]
    fn triple_chain_collapses() {
        let n = normalize(&p("rec X.rec Y.rec Z.!Y.?Z.X")).unwrap();
        assert!(alpha_eq(&n, &p("rec X.!X.?X.X")));
    }
}
