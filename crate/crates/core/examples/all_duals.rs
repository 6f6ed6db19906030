// Every duality construction side by side, each verified on trees.

use std::error::Error;

use session_duality::duality::DualMethod;
use session_duality::parse;
use session_duality::semantics::{tree_dual_related, tree_of};
use session_duality::syntax::size;

pub fn run() -> Result<(), Box<dyn Error>> {
    for text in ["rec X.!X.X", "rec X.rec Y.!Y.X", "rec X.?int.!(rec Y.?X.Y).X"] {
        let s = parse(text)?;
        println!("S = {s}   (size {})", size(&s));
        for method in DualMethod::ALL {
            let d = method.apply(&s)?;
            let sound = tree_dual_related(&tree_of(&s)?, &tree_of(&d)?).verdict;
            println!(
                "  {:<15} {:<45} size {:<3} {}",
                method.name(),
                d.to_string(),
                size(&d),
                if sound { "dual" } else { "NOT dual" }
            );
        }
    }

    // Only the negative-variable duals accept negative variables.
    let s = parse("rec X.!~X.X")?;
    println!("S = {s}");
    for method in [DualMethod::Lm, DualMethod::Lmp, DualMethod::Naive] {
        match method.apply(&s) {
            Ok(d) => println!("  {:<15} {d}", method.name()),
            Err(e) => println!("  {:<15} error: {e}", method.name()),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
