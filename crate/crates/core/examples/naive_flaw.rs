// Naive duality goes wrong when a recursion variable is sent as a message.
//
// `rec X.?X.X` receives a value of its own type. The naive dual
// `rec X.!X.X` sends a value of *its* own type, so the message types no
// longer agree after one unfolding.

use std::error::Error;

use session_duality::check::{check_dual, heads_conflict, replay_check, Relation};
use session_duality::duality::{is_tailrec, naive_dual, TailRecContext};
use session_duality::parse;

pub fn run() -> Result<(), Box<dyn Error>> {
    let s = parse("rec X.?X.X")?;
    let d = naive_dual(&s)?;
    println!("S       = {s}");
    println!("dual(S) = {d}");

    let report = check_dual(&s, &d)?;
    println!("S ⊥ dual(S)? {}", report.verdict);
    let path = report.witness.clone().unwrap_or_default();
    let moves: Vec<String> = path.iter().map(ToString::to_string).collect();
    println!("witness: {}", moves.join(" "));

    let (rel, l, r) = replay_check(Relation::Dual, &s, &d, &path).ok_or("witness does not replay")?;
    assert!(heads_conflict(rel, &l, &r));
    println!("at the end of the path: {l}  vs  {r}  ({rel:?})");

    // On tail-recursive types naive duality is fine.
    let ok = parse("rec X.?int.X")?;
    assert!(is_tailrec(&ok, &TailRecContext::empty()));
    println!("{ok} ⊥ {}: {}", naive_dual(&ok)?, check_dual(&ok, &naive_dual(&ok)?)?.verdict);

    // Variables in tail position only is not enough.
    let sneaky = parse("rec X.!(?int.X).end")?;
    println!("{sneaky} tail recursive? {}", is_tailrec(&sneaky, &TailRecContext::empty()));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
