// Driving the `sessdual` command line from code.

use std::error::Error;
use std::io;

use session_duality::cli::run as sessdual;

pub fn run() -> Result<(), Box<dyn Error>> {
    let invocations: [&[&str]; 5] = [
        &["sessdual", "dual", "--method", "otf", "--verify", "rec X.!X.X"],
        &["sessdual", "--json", "check-dual", "rec X.?X.X", "rec X.!X.X"],
        &["sessdual", "analyze", "rec X.?X.?X.?X.X"],
        &["sessdual", "--show-tree", "3", "normalize", "rec X.rec Y.!Y.X"],
        &["sessdual", "selftest", "--seed", "7", "--count", "20"],
    ];
    for argv in invocations {
        println!("$ {}", argv.join(" "));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = sessdual(argv.iter().copied(), &mut io::empty(), &mut out, &mut err);
        print!("{}{}", String::from_utf8(out)?, String::from_utf8(err)?);
        println!("[exit {code}]");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
