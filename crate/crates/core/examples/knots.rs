//! The knot registry: built-ins, mirrors, composites and knots loaded from
//! JSON definitions.
//!
//! ```bash
//! cargo run --example knots
//! ```

use qhabiro::knot::Registry;

const TWIST: &str = r#"[
  {"name": "my_fig8", "generator": {"kind": "monomial", "sign": {"alpha": 0, "beta": 0},
   "exponent": {"c2": "0", "c1": "0", "c0": "0"}}, "f_closed_form": "builtin:4_1"},
  {"name": "square", "generator": {"kind": "composite", "summands": ["3_1l", "3_1r"]}}
]"#;

fn main() -> qhabiro::Result<()> {
    let reg = Registry::new();
    println!("loaded {:?}", reg.load_str(TWIST)?);
    println!("registered: {:?}", reg.names());

    let l = reg.get("3_1l")?;
    let m = l.mirror()?;
    for k in 0..4 {
        println!("3_1l a_(-{0}) = {1:<8} mirror = {2}", k + 1, l.a_exact(k)?.to_string(), m.a_exact(k)?);
    }
    println!("my_fig8 f_3 = {}", reg.get("my_fig8")?.f_coeff(3, None)?);
    let sq = reg.get("square")?;
    println!("square: LBC constant {:?}, a_(-2) = {}", sq.lbc(), sq.a_coeff(1, 10)?.truncate(10));
    Ok(())
}
