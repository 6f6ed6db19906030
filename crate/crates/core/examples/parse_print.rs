// Reading and writing session types.
//
// Run with `cargo run --example parse_print`.

use std::error::Error;

use session_duality::syntax::{alpha_eq, size, DeBruijn};
use session_duality::{parse, print};

pub fn run() -> Result<(), Box<dyn Error>> {
    let t = parse("rec X. ?(rec Y.!Y.X). X")?;
    println!("parsed:   {t}");
    println!("size:     {}", size(&t));

    // Binders keep their names when printed, unless that would capture.
    let shadowed = parse("rec X.?(rec X.!X.X).X")?;
    println!("shadowed: {}", print(&shadowed));

    // Bound names do not matter for equality up to renaming.
    let renamed = parse("rec Z.?(rec W.!W.Z).Z")?;
    assert!(alpha_eq(&t, &renamed));
    assert_eq!(DeBruijn::of(&t), DeBruijn::of(&renamed));
    println!("{t}  =α  {renamed}");

    for bad in ["?int.", "rec X.X", "!int.end)"] {
        let e = parse(bad).unwrap_err();
        println!("{bad:<12} -> {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
