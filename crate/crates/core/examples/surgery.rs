//! Ẑ of integral surgeries on knots by the three routes, with
//! normalization and divergence detection.
//!
//! ```bash
//! cargo run --example surgery
//! ```

use qhabiro::knot::Registry;
use qhabiro::surgery::{zhat, Method, SurgeryParams};

fn main() -> qhabiro::Result<()> {
    let reg = Registry::new();
    let left = reg.get("3_1l")?;
    for method in [Method::Fk, Method::Residues, Method::Ih] {
        let z = zhat(&left, SurgeryParams::new(-1, 0, 30, method)?)?;
        println!("-1 surgery on 3_1l via {method:?}: q^({}) * ({})", z.delta, z.series);
    }

    let fig8 = reg.get("4_1")?;
    for a in 0..3 {
        let z = zhat(&fig8, SurgeryParams::new(-3, a, 15, Method::Residues)?)?;
        println!("-3 surgery on 4_1, a = {a}: q^({}) * ({})", z.delta, z.series);
    }

    match zhat(&fig8, SurgeryParams::new(5, 0, 20, Method::Fk)?) {
        Ok(z) => println!("unexpected: {}", z.series),
        Err(e) => println!("+5 surgery on 4_1: {e}"),
    }
    Ok(())
}
