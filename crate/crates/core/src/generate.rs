//! Seeded random session types and counterexample shrinking.
//!
//! Generated types are closed and contractive by construction: a variable is
//! only emitted once a `?` or `!` separates it from its binder. Binders are
//! named `X`, `Y`, `Z`, `W` in turn, each with its own tag, so every binder in
//! a generated type is distinct.
//!
//! ```
//! use session_duality::generate::{gen_type, GenConfig};
//! use session_duality::syntax::is_contractive;
//!
//! let t = gen_type(&GenConfig { seed: 7, ..GenConfig::default() }).unwrap();
//! assert!(t.is_closed() && is_contractive(&t));
//! ```

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::syntax::{alpha_eq, is_contractive, size, substitute, Name, TypeExpr, VarOcc};

/// Relative frequencies of the constructors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    pub end: u32,
    pub input: u32,
    pub output: u32,
    pub var: u32,
    pub neg_var: u32,
    pub rec: u32,
    /// Message is `int`.
    pub msg_int: u32,
    /// Message is a session type.
    pub msg_session: u32,
}

impl Default for Weights {
    fn default() -> Self {
        Weights { end: 2, input: 3, output: 3, var: 2, neg_var: 1, rec: 2, msg_int: 2, msg_session: 1 }
    }
}

impl Weights {
    fn all_zero(&self) -> bool {
        [self.end, self.input, self.output, self.var, self.neg_var, self.rec, self.msg_int, self.msg_session]
            .iter()
            .all(|w| *w == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    /// Nodes at this depth are leaves.
    pub max_depth: usize,
    pub allow_neg_vars: bool,
    /// Only generate types whose message types are closed.
    pub tailrec_only: bool,
    pub weights: Weights,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { seed: 0, max_depth: 5, allow_neg_vars: false, tailrec_only: false, weights: Weights::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("max_depth must be at least 1")]
    ZeroDepth,
    #[error("at least one weight must be positive")]
    AllWeightsZero,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_depth == 0 {
            return Err(ConfigError::ZeroDepth);
        }
        if self.weights.all_zero() {
            return Err(ConfigError::AllWeightsZero);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    End,
    Input,
    Output,
    Var,
    NegVar,
    Rec,
}

// Binders in scope; only the first `guarded` may be used as variables here.
#[derive(Clone, Default)]
struct Scope {
    binders: Vec<Name>,
    guarded: usize,
}

impl Scope {
    fn usable(&self) -> &[Name] {
        &self.binders[..self.guarded]
    }

    fn guard(&self) -> Scope {
        Scope { binders: self.binders.clone(), guarded: self.binders.len() }
    }

    fn bind(&self, x: Name) -> Scope {
        let mut binders = self.binders.clone();
        binders.push(x);
        Scope { binders, guarded: self.guarded }
    }
}

const BASES: [&str; 4] = ["X", "Y", "Z", "W"];

/// An endless stream of types drawn from one seed.
pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
    binders_made: u32,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Ok(Generator { cfg, rng, binders_made: 0 })
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn next_type(&mut self) -> TypeExpr {
        self.binders_made = 0;
        self.session(0, &Scope::default())
    }

    fn fresh_binder(&mut self) -> Name {
        let n = self.binders_made;
        self.binders_made += 1;
        Name::with_tag(BASES[n as usize % BASES.len()], n + 1)
    }

    fn pick<T: Copy>(&mut self, options: &[(T, u32)]) -> Option<T> {
        let dist = WeightedIndex::new(options.iter().map(|(_, w)| *w)).ok()?;
        Some(options[dist.sample(&mut self.rng)].0)
    }

    fn session(&mut self, depth: usize, scope: &Scope) -> TypeExpr {
        let w = self.cfg.weights.clone();
        let has_vars = !scope.usable().is_empty();
        let neg_ok = self.cfg.allow_neg_vars && !self.cfg.tailrec_only;
        let mut options = vec![(Kind::End, w.end)];
        if has_vars {
            options.push((Kind::Var, w.var));
            if neg_ok {
                options.push((Kind::NegVar, w.neg_var));
            }
        }
        if depth < self.cfg.max_depth {
            options.extend([(Kind::Input, w.input), (Kind::Output, w.output), (Kind::Rec, w.rec)]);
        }
        match self.pick(&options).unwrap_or(Kind::End) {
            Kind::End => TypeExpr::End,
            Kind::Var => TypeExpr::Var(self.choose_var(scope)),
            Kind::NegVar => TypeExpr::NegVar(self.choose_var(scope)),
            Kind::Rec => {
                let x = self.fresh_binder();
                let body = self.session(depth + 1, &scope.bind(x.clone()));
                TypeExpr::Rec(x, Box::new(body))
            }
            Kind::Input => {
                let (m, c) = self.communication(depth, scope);
                TypeExpr::input(m, c)
            }
            Kind::Output => {
                let (m, c) = self.communication(depth, scope);
                TypeExpr::output(m, c)
            }
        }
    }

    fn choose_var(&mut self, scope: &Scope) -> Name {
        let usable = scope.usable();
        let options: Vec<(usize, u32)> = (0..usable.len()).map(|i| (i, 1)).collect();
        usable[self.pick(&options).expect("non-empty scope")].clone()
    }

    fn communication(&mut self, depth: usize, scope: &Scope) -> (TypeExpr, TypeExpr) {
        let w = &self.cfg.weights;
        let session_msg = self.pick(&[(false, w.msg_int), (true, w.msg_session)]).unwrap_or(false);
        let guarded = scope.guard();
        let msg = if session_msg {
            let msg_scope = if self.cfg.tailrec_only { Scope::default() } else { guarded.clone() };
            self.session(depth + 1, &msg_scope)
        } else {
            TypeExpr::Int
        };
        let cont = self.session(depth + 1, &guarded);
        (msg, cont)
    }
}

impl Iterator for Generator {
    type Item = TypeExpr;

    fn next(&mut self) -> Option<TypeExpr> {
        Some(self.next_type())
    }
}

/// The first type of the stream for `cfg`.
pub fn gen_type(cfg: &GenConfig) -> Result<TypeExpr, ConfigError> {
    Ok(Generator::new(cfg.clone())?.next_type())
}

/// Every subterm of `t`, including `t`, in pre-order.
pub fn subterms(t: &TypeExpr) -> Vec<&TypeExpr> {
    let mut out = vec![t];
    match t {
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => {
            out.extend(subterms(m));
            out.extend(subterms(c));
        }
        TypeExpr::Rec(_, b) => out.extend(subterms(b)),
        _ => {}
    }
    out
}

/// One-step simplifications of a closed contractive type. Each candidate is a
/// closed contractive type of smaller size.
pub fn shrink(t: &TypeExpr) -> Vec<TypeExpr> {
    let limit = size(t);
    let mut out: Vec<TypeExpr> = Vec::new();
    for u in edits(t, false) {
        if size(&u) < limit && u.is_closed() && is_contractive(&u) && !out.iter().any(|v| alpha_eq(v, &u)) {
            out.push(u);
        }
    }
    out
}

fn edits(t: &TypeExpr, is_message: bool) -> Vec<TypeExpr> {
    let mut out = Vec::new();
    if is_message {
        if *t != TypeExpr::Int {
            out.push(TypeExpr::Int);
        }
    } else if *t != TypeExpr::End {
        out.push(TypeExpr::End);
    }
    match t {
        TypeExpr::In(m, c) | TypeExpr::Out(m, c) => {
            out.push((**c).clone());
            let rebuild = |m: TypeExpr, c: TypeExpr| match t {
                TypeExpr::In(..) => TypeExpr::input(m, c),
                _ => TypeExpr::output(m, c),
            };
            out.extend(edits(m, true).into_iter().map(|m2| rebuild(m2, (**c).clone())));
            out.extend(edits(c, false).into_iter().map(|c2| rebuild((**m).clone(), c2)));
        }
        TypeExpr::Rec(x, b) => {
            let dropped = substitute(b, &VarOcc::pos(x.clone()), &TypeExpr::End);
            out.push(substitute(&dropped, &VarOcc::neg(x.clone()), &TypeExpr::End));
            out.extend(edits(b, false).into_iter().map(|b2| TypeExpr::Rec(x.clone(), Box::new(b2))));
        }
        _ => {}
    }
    out
}

/// Greedily shrinks `t` while `fails` keeps holding.
pub fn minimize(t: &TypeExpr, mut fails: impl FnMut(&TypeExpr) -> bool) -> TypeExpr {
    let mut current = t.clone();
    while let Some(next) = shrink(&current).into_iter().find(|u| fails(u)) {
        current = next;
    }
    current
}
