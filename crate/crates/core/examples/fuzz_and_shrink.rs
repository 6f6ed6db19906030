// Random types, and shrinking a failure down to its core.
//
// Naive duality is checked on generated types until it fails; the failing
// type is then shrunk while it keeps failing.

use std::error::Error;

use session_duality::check::check_dual;
use session_duality::duality::naive_dual;
use session_duality::generate::{minimize, GenConfig, Generator};
use session_duality::TypeExpr;

fn naive_is_wrong(t: &TypeExpr) -> bool {
    naive_dual(t).is_ok_and(|d| check_dual(t, &d).is_ok_and(|r| !r.verdict))
}

pub fn run() -> Result<(), Box<dyn Error>> {
    let cfg = GenConfig { seed: 42, ..GenConfig::default() };
    let samples: Vec<TypeExpr> = Generator::new(cfg.clone())?.take(5).collect();
    for t in &samples {
        println!("sample: {t}");
    }

    let (index, failing) = Generator::new(cfg)?
        .take(1000)
        .enumerate()
        .find(|(_, t)| naive_is_wrong(t))
        .ok_or("no failure in 1000 samples")?;
    let small = minimize(&failing, naive_is_wrong);
    println!("sample {index} breaks naive duality: {failing}");
    println!("shrunk to: {small}   dual: {}", naive_dual(&small)?);

    let tail = GenConfig { seed: 42, tailrec_only: true, ..GenConfig::default() };
    let broken = Generator::new(tail)?.take(1000).filter(naive_is_wrong).count();
    println!("tail-recursive samples where naive duality fails: {broken}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
