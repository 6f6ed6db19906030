// Coinductive equivalence and duality checks with counterexample paths.

use std::error::Error;

use session_duality::check::{check_dual, check_equiv, pair_budget};
use session_duality::parse;

pub fn run() -> Result<(), Box<dyn Error>> {
    let cases = [
        ("equiv", "rec X.!int.X", "!int.rec X.!int.X"),
        ("equiv", "rec X.!int.!int.X", "rec Y.!int.Y"),
        ("equiv", "rec X.!int.X", "rec X.!int.?int.X"),
        ("dual", "rec X.?int.X", "rec X.!int.!int.X"),
        ("dual", "rec X.!X.X", "rec X.?(rec X.!X.X).X"),
        ("dual", "rec X.?X.X", "rec X.!X.X"),
    ];
    for (kind, left, right) in cases {
        let (l, r) = (parse(left)?, parse(right)?);
        let report = if kind == "equiv" { check_equiv(&l, &r)? } else { check_dual(&l, &r)? };
        println!("{kind:<5} {left}  ~  {right}");
        println!("      verdict {}  pairs {}/{}", report.verdict, report.pairs_explored, pair_budget(&l, &r));
        if let Some(path) = report.witness {
            let moves: Vec<String> = path.iter().map(ToString::to_string).collect();
            println!("      witness {}", moves.join(" "));
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
