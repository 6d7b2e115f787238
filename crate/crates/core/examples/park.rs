//! Park's Laurent polynomials from the explicit double sum and from the
//! residue definition.
//!
//! ```bash
//! cargo run --example park
//! ```

use qhabiro::surgery::{park_poly_explicit, park_poly_residue};

fn main() -> qhabiro::Result<()> {
    for p in 1..=3 {
        for a in 0..p {
            for k in 0..=3 {
                let e = park_poly_explicit(p, a, k)?;
                let r = park_poly_residue(p, a, k)?;
                println!("p={p} a={a} k={k}: {e}{}", if e == r { "" } else { "  (definitions differ)" });
            }
        }
    }
    Ok(())
}
