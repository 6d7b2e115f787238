//! The dictionary between GM coefficients f_k and inverted Habiro
//! coefficients a_{-k-1}, and the lower bound condition.
//!
//! ```bash
//! cargo run --example transforms
//! ```

use qhabiro::knot::Registry;
use qhabiro::transform::{a_from_f, f_from_a, fk_degree_check, lbc_check, CoeffSeq, Side};
use qhabiro::QSeries;

fn main() -> qhabiro::Result<()> {
    let reg = Registry::new();
    let fig8 = reg.get("4_1")?;
    for (k, f) in f_from_a(&fig8.omega.seq, 4, None)?.iter().enumerate() {
        println!("4_1 f_{k} = {f}");
    }

    let mut delta = vec![QSeries::zero(); 5];
    delta[0] = QSeries::one();
    for (k, a) in a_from_f(&CoeffSeq::from_list(Side::F, delta), 4, None)?.iter().enumerate() {
        println!("f = (1, 0, ...): a_(-{}) = {a}", k + 1);
    }

    for name in ["3_1l", "3_1r", "4_1"] {
        let k = reg.get(name)?;
        let r = lbc_check(&k.omega.seq, 30)?;
        let f = CoeffSeq::from_list(Side::F, k.f_prefix(15, None)?);
        println!("{name}: LBC constant {} (argmin {:?}), GM degree bound holds: {}", r.best_constant, r.argmin, fk_degree_check(&f, r.best_constant, 15)?);
    }
    Ok(())
}
