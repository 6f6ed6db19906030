// Normal forms: no `rec` directly under `rec`, no `rec X.Y`.

use std::error::Error;

use session_duality::parse;
use session_duality::semantics::{tree_equal, tree_of};
use session_duality::syntax::{is_normal, normalize};

pub fn run() -> Result<(), Box<dyn Error>> {
    for text in ["rec X.rec Y.!Y.X", "rec X.rec Y.?~Y.!X.Y", "!(rec X.rec Y.rec Z.?int.Z).end", "rec X.?int.X"] {
        let t = parse(text)?;
        let n = normalize(&t)?;
        let same = tree_equal(&tree_of(&t)?, &tree_of(&n)?).verdict;
        println!("{text:<32} -> {:<24} normal: {}  same tree: {same}", n.to_string(), is_normal(&n));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
