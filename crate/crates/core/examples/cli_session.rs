//! Driving the command-line front end from code.
//!
//! ```bash
//! cargo run --example cli_session
//! ```

fn main() {
    let sessions: [&[&str]; 4] = [
        &["verify", "pentagonal", "--prec", "50"],
        &["residues", "--knot", "3_1r", "-j", "0", "--prec", "10", "--json"],
        &["surgery", "--knot", "4_1", "-p", "-2", "-a", "1", "--prec", "12"],
        &["surgery", "--knot", "4_1", "-p", "5", "--method", "fk"],
    ];
    for args in sessions {
        println!("$ qhabiro {}", args.join(" "));
        let argv = std::iter::once("qhabiro").chain(args.iter().copied());
        let code = qhabiro::cli::run(argv, &mut std::io::stdout(), &mut std::io::stderr());
        println!("exit {code}\n");
    }
}
