//! Balanced q-combinatorics: quantum integers, binomials, curly brackets,
//! Pochhammer symbols, truncated theta functions and Jacobi symbols.
//!
//! ```bash
//! cargo run --example qcomb
//! ```

use num_rational::Ratio;
use qhabiro::qcomb::*;

fn main() -> qhabiro::Result<()> {
    println!("[5] = {}", qint(5));
    println!("[6 choose 3] = {}", qbinom(6, 3));
    println!("[-2 choose 3] = {}", qbinom(-2, 3));
    println!("{{3}}_2 = {}", curly_poch(3, 2));
    println!("(q;q)_4 = {}", poch(Ratio::from_integer(1), Some(4), 0)?);
    println!("(q;q)_inf = {}", poch(Ratio::from_integer(1), None, 20)?);
    for (u, s) in theta_trunc(1, 2, 12) {
        println!("theta_1, x^{u}: {s}");
    }
    let row: Vec<i8> = (0..12).map(|a| jacobi_symbol(a, 15)).collect::<qhabiro::Result<_>>()?;
    println!("(a | 15) for a = 0..11: {row:?}");
    Ok(())
}
