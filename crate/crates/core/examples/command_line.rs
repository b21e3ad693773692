//! Drives the command-line front end in-process and shows the JSON envelope
//! produced for a fit.

fn main() {
    let args = ["pngkme", "--seed", "7", "--output", "json", "fit", "--model", "ee"];
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = pngkme::cli::run(args, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");
}
