// Types as regular trees.
//
// A closed type denotes a possibly infinite tree. Here a few of them are cut
// off at a fixed depth and printed, together with the finite set of states
// the tree is built from.

use std::error::Error;

use session_duality::parse;
use session_duality::semantics::{coidual, reachable_states, tree_equal, tree_of, unfold_to_depth};

pub fn run() -> Result<(), Box<dyn Error>> {
    for text in ["rec X.!X.X", "rec X.!~X.X", "rec X.?int.!int.X"] {
        let state = tree_of(&parse(text)?)?;
        println!("{text}");
        println!("  depth 3: {}", unfold_to_depth(&state, 3).to_compact());
        println!("  states:  {}", reachable_states(&state).len());
        print!("{}", indent(&unfold_to_depth(&state, 3).to_text()));
    }

    // ~X denotes the dual of the whole type: the first message of rec X.!~X.X
    // is the dual of rec X.!~X.X.
    let s = tree_of(&parse("rec X.!~X.X")?)?;
    let dual = coidual(&s);
    let other = tree_of(&parse("rec X.?~X.X")?)?;
    println!("dual of rec X.!~X.X equals rec X.?~X.X: {}", tree_equal(&dual, &other).verdict);
    Ok(())
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("    {l}\n")).collect()
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
