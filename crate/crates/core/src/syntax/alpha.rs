use super::{Name, Polarity, TypeExpr};

/// Nameless form of a [`TypeExpr`]: bound occurrences become indices counting
/// binders outward, free occurrences keep their names.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum DeBruijn {
    Int,
    End,
    In(Box<DeBruijn>, Box<DeBruijn>),
    Out(Box<DeBruijn>, Box<DeBruijn>),
    Bound(usize, Polarity),
    Free(Name, Polarity),
    Rec(Box<DeBruijn>),
}

impl DeBruijn {
    pub fn of(t: &TypeExpr) -> Self {
        let mut env = Vec::new();
        to_db(t, &mut env)
    }
}

fn to_db<'a>(t: &'a TypeExpr, env: &mut Vec<&'a Name>) -> DeBruijn {
    let var = |env: &Vec<&Name>, x: &Name, pol| match env.iter().rev().position(|b| *b == x) {
        Some(i) => DeBruijn::Bound(i, pol),
        None => DeBruijn::Free(x.clone(), pol),
    };
    match t {
        TypeExpr::Int => DeBruijn::Int,
        TypeExpr::End => DeBruijn::End,
        TypeExpr::Var(x) => var(env, x, Polarity::Positive),
        TypeExpr::NegVar(x) => var(env, x, Polarity::Negative),
        TypeExpr::In(m, c) => DeBruijn::In(Box::new(to_db(m, env)), Box::new(to_db(c, env))),
        TypeExpr::Out(m, c) => DeBruijn::Out(Box::new(to_db(m, env)), Box::new(to_db(c, env))),
        TypeExpr::Rec(x, b) => {
            env.push(x);
            let body = to_db(b, env);
            env.pop();
            DeBruijn::Rec(Box::new(body))
        }
    }
}

/// Equality up to consistent renaming of bound names. A binder renames both
/// polarities of its variable at once.
pub fn alpha_eq(t: &TypeExpr, u: &TypeExpr) -> bool {
    let mut env_t = Vec::new();
    let mut env_u = Vec::new();
    go(t, u, &mut env_t, &mut env_u)
}

// Walks both terms in lockstep instead of building two nameless copies.
fn go<'a>(t: &'a TypeExpr, u: &'a TypeExpr, et: &mut Vec<&'a Name>, eu: &mut Vec<&'a Name>) -> bool {
    let same_var = |et: &Vec<&Name>, eu: &Vec<&Name>, x: &Name, y: &Name| {
        let ix = et.iter().rev().position(|b| *b == x);
        let iy = eu.iter().rev().position(|b| *b == y);
        match (ix, iy) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        }
    };
    match (t, u) {
        (TypeExpr::Int, TypeExpr::Int) | (TypeExpr::End, TypeExpr::End) => true,
        (TypeExpr::Var(x), TypeExpr::Var(y)) | (TypeExpr::NegVar(x), TypeExpr::NegVar(y)) => same_var(et, eu, x, y),
        (TypeExpr::In(m1, c1), TypeExpr::In(m2, c2)) | (TypeExpr::Out(m1, c1), TypeExpr::Out(m2, c2)) => {
            go(m1, m2, et, eu) && go(c1, c2, et, eu)
        }
        (TypeExpr::Rec(x, b1), TypeExpr::Rec(y, b2)) => {
            et.push(x);
            eu.push(y);
            let r = go(b1, b2, et, eu);
            et.pop();
            eu.pop();
            r
        }
        _ => false,
    }
}
