// Message closure can grow a type quadratically; the negative-variable duals
// keep its size.

use std::error::Error;

use session_duality::duality::{lm_dual, mcl};
use session_duality::syntax::size;
use session_duality::TypeExpr;

/// `rec X.?X.⋯?X.X` with `n` inputs.
pub fn receiver_of_self(n: usize) -> TypeExpr {
    let body = (0..n).fold(TypeExpr::var("X"), |acc, _| TypeExpr::input(TypeExpr::var("X"), acc));
    TypeExpr::rec("X", body)
}

pub fn run() -> Result<(), Box<dyn Error>> {
    println!("{:>3} {:>6} {:>10} {:>8}", "n", "size", "mcl size", "lm size");
    for n in 1..=16 {
        let s = receiver_of_self(n);
        let closed = mcl(&s)?;
        assert_eq!(size(&s), n + 2);
        assert_eq!(size(&closed), n * (n + 2) + 2);
        println!("{n:>3} {:>6} {:>10} {:>8}", size(&s), size(&closed), size(&lm_dual(&s)?));
    }
    println!("mcl(S_3) = {}", mcl(&receiver_of_self(3))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
