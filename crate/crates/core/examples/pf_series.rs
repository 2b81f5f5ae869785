//! Frobenius solutions of the Picard–Fuchs equation and the inverse mirror map.

use std::error::Error;
use std::fmt::Write;

use k3mirror::picard_fuchs::{apply_operator, frobenius_basis, mirror_map, pf_operator};

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    let order = 12;
    let fb = frobenius_basis(order)?;
    writeln!(out, "Π  = {}", fb.pi.to_strings(8)?.join(", "))?;
    writeln!(out, "g₁ = {}", fb.g1.to_strings(4)?.join(", "))?;
    writeln!(out, "g₂ = {}", fb.g2.to_strings(4)?.join(", "))?;
    let op = pf_operator();
    for (j, y) in fb.solutions().iter().enumerate() {
        writeln!(out, "P(y{j}) = 0 through x^{order}: {}", apply_operator(&op, y).is_zero_through_prec())?;
    }
    let mm = mirror_map(20)?;
    writeln!(out, "x(q) = {}", mm.x_of_q.to_strings(10)?.join(", "))?;
    writeln!(out, "integral through q^20: {}", mm.is_integral()?)?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
