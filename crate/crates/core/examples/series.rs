//! Truncated Laurent series: arithmetic, valuations, unit inversion and
//! bounded infinite sums.
//!
//! ```bash
//! cargo run --example series
//! ```

use num_rational::Ratio;
use qhabiro::qcomb::qpoch_inf;
use qhabiro::series::{sum_bounded, DegreeBound};
use qhabiro::QSeries;

fn main() -> qhabiro::Result<()> {
    let a = QSeries::from_ints(-1, &[1, 1, 1]);
    println!("(q^-1 + 1 + q)^2 = {}", &a * &a);

    let mixed = &QSeries::from_ints_trunc(0, &[1, 1], 2) + &QSeries::monomial_rat(1, Ratio::new(1, 2));
    println!("mixed scales: {mixed}");

    // Partition numbers as the inverse of the Euler function.
    let p = qpoch_inf(12).invert_unit(12)?;
    println!("1/(q)_inf = {p}");
    println!("valuation of q^2 (q)_inf: {:?}", qpoch_inf(5).shift_int(2).delta());

    // Σ_k q^{k^2}: the bound k^2 tells the summation where to stop.
    let theta = sum_bounded(|k| Ok(QSeries::monomial(1, k * k)), &DegreeBound::new(0, |k| k * k), 30)?;
    println!("sum q^(k^2) = {theta}");

    println!("json: {}", serde_json::to_string(&a.truncate(1)).expect("serializable"));
    println!("mirror of q^-1 + 2 q^3: {}", QSeries::from_ints(-1, &[1, 0, 0, 0, 2]).mirror()?);
    Ok(())
}
