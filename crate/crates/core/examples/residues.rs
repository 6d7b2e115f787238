//! Residues of inverted Habiro series, the residue theorem, the theta route
//! from GM coefficients and the named identity checks.
//!
//! ```bash
//! cargo run --example residues
//! ```

use qhabiro::cli::{verify_identity, IDENTITIES};
use qhabiro::knot::Registry;
use qhabiro::residue::{residue_family, residue_theorem_check, residue_theta};

fn main() -> qhabiro::Result<()> {
    let reg = Registry::new();
    let trefoil = reg.get("3_1r")?;
    let fam = residue_family(&trefoil.omega, 3, 12)?;
    for j in 0..=3 {
        println!("3_1r r_{j} = {}", fam.get(j).expect("in window"));
    }
    println!("symmetric: {}", fam.symmetric());
    println!("theta route r_1 = {}", residue_theta(&trefoil, 1, 12)?);
    println!("sum of residues of 4_1: {}", residue_theorem_check(&reg.get("4_1")?.omega, 30)?);

    for name in IDENTITIES {
        let r = verify_identity(&reg, name, 20)?;
        println!("{:<22} {} {}", name, if r.ok { "OK" } else { "FAIL" }, r.detail);
    }
    Ok(())
}
