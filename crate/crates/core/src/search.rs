//! Greatest-fixpoint search over pairs.
//!
//! A pair already visited counts as related. The search is a depth-first walk
//! that stops at the first mismatch and reports the moves that lead to it.

use std::collections::HashSet;
use std::hash::Hash;

use crate::semantics::Move;

pub(crate) enum Step<P> {
    /// The pair is related without looking further.
    Related,
    /// The pair can never be related.
    Mismatch,
    /// The pair is related iff every successor is.
    Next(Vec<(Move, P)>),
}

pub(crate) struct Outcome {
    pub verdict: bool,
    pub witness: Option<Vec<Move>>,
    pub visited: usize,
}

#[derive(Debug)]
pub(crate) struct BudgetExceeded {
    pub visited: usize,
}

pub(crate) fn explore<P, K, FK, FS>(
    root: P,
    mut key: FK,
    mut step: FS,
    budget: Option<usize>,
) -> Result<Outcome, BudgetExceeded>
where
    K: Hash + Eq,
    FK: FnMut(&P) -> K,
    FS: FnMut(&P) -> Step<P>,
{
    let mut visited: HashSet<K> = HashSet::new();
    let mut path: Vec<Move> = Vec::new();
    // each frame remembers whether entering it pushed a move onto `path`
    let mut stack: Vec<(bool, std::vec::IntoIter<(Move, P)>)> = Vec::new();

    let mut pending = Some((None, root));
    loop {
        if let Some((mv, pair)) = pending.take() {
            let entered = mv.is_some();
            if let Some(mv) = mv {
                path.push(mv);
            }
            if visited.insert(key(&pair)) {
                if let Some(limit) = budget {
                    if visited.len() > limit {
                        return Err(BudgetExceeded { visited: visited.len() });
                    }
                }
                match step(&pair) {
                    Step::Related => {}
                    Step::Mismatch => {
                        return Ok(Outcome { verdict: false, witness: Some(path), visited: visited.len() });
                    }
                    Step::Next(children) => {
                        stack.push((entered, children.into_iter()));
                        continue;
                    }
                }
            }
            if entered {
                path.pop();
            }
        }
        let Some((_, children)) = stack.last_mut() else {
            break;
        };
        match children.next() {
            Some((mv, pair)) => pending = Some((Some(mv), pair)),
            None => {
                let (entered, _) = stack.pop().expect("non-empty");
                if entered {
                    path.pop();
                }
            }
        }
    }
    Ok(Outcome { verdict: true, witness: None, visited: visited.len() })
}
