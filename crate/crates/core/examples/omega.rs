//! Products in the ring of inverted Habiro series, as used for connected
//! sums, and instance checks of the basis multiplication rule.
//!
//! ```bash
//! cargo run --example omega
//! ```

use qhabiro::knot::Registry;
use qhabiro::omega::{gamma, lbc_product_bound, omega_mul, verify_sigma_product};

fn main() -> qhabiro::Result<()> {
    println!("gamma^1_(-1,-1) = {}", gamma(-1, -1, 1));
    println!("sigma_(-2) sigma_(-3) rule holds: {}", verify_sigma_product(-2, -3, 8, 30)?);

    let reg = Registry::new();
    let l = reg.get("3_1l")?;
    let granny = omega_mul(&l.omega, &l.omega, 5, 12)?;
    for k in 0..5 {
        println!("3_1l#3_1l a_(-{}) = {}", k + 1, granny.coeff(k, 12)?);
    }
    println!("degree bound with C = -4: {}", lbc_product_bound(&granny, -2, -2, 5, 12)?);

    let square = reg.get("3_1l#3_1r")?;
    println!("3_1l#3_1r a_(-2) = {}", square.a_coeff(1, 12)?.truncate(12));
    Ok(())
}
