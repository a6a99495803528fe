// Driving the command-line front end without a subprocess.

use flopgw::cli::{parse_insertion, run_args};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = parse_insertion("tau_4 xi", 2)?;
    println!("parsed: {}", p.insertion);

    let out = run_args([
        "flopgw",
        "verify-flop",
        "--r",
        "2",
        "--insertions",
        "h^2,h^2,h^2*xi^3",
        "--d1-max",
        "8",
    ]);
    print!("{}", out.stdout);
    println!("exit code {}", out.code);

    let out = run_args(["flopgw", "npoint", "--r", "2", "--insertions", "h^2,q"]);
    print!("exit code {}: {}", out.code, out.stderr);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("cli example");
}
