//! Figure-eight numerics at roots of unity: periodicity, volume growth,
//! perturbative coefficients and the integral quotient series.
//!
//! ```bash
//! cargo run --release --example asymptotics
//! ```

use qhabiro::asympt::{extract_phi, growth_rate, periodicity_check, phi_quotient_check, volume_41, to_f64, Hp};
use qhabiro::knot::Registry;

fn main() -> qhabiro::Result<()> {
    let reg = Registry::new();
    let k = reg.get("4_1")?;

    let period = periodicity_check(&k, 60, 256, 1e-9)?;
    println!("period {} with values {:?}", period.period, period.values);

    let ns: Vec<i64> = (100..=200).step_by(10).collect();
    let g = growth_rate(&k, &ns, 256)?;
    println!("growth {:.10}, volume {:.10}", g.estimate, to_f64(&volume_41(&Hp::new(128))));

    let ns: Vec<i64> = (160..=400).step_by(10).collect();
    let phi = extract_phi(&k, 2, &ns, 512)?;
    println!("perturbative coefficients {:?}", phi.coeffs);

    println!("quotient series {:?}", phi_quotient_check(3)?);
    Ok(())
}
