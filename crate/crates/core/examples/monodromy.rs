//! Numerical monodromy of the Frobenius basis around 0, 1/36 and 1/4.

use std::error::Error;
use std::fmt::Write;

use k3mirror::monodromy::{all_monodromies, cmat_det, cmat_mul, DEFAULT_BASEPOINT};

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    let [m0, m1, m4] = all_monodromies(DEFAULT_BASEPOINT)?;
    for m in [&m0, &m1, &m4] {
        let inv = &m.invariants;
        writeln!(
            out,
            "x = {:<5} det = {:+.9}  trace = {:+.9}  |M²−I| = {:.1e}  residual = {:.1e}  steps = {}",
            m.point.to_string(),
            inv.det.re,
            inv.trace.re,
            inv.order2_residual,
            m.residual,
            m.stats.accepted_steps
        )?;
    }
    let prod = cmat_mul(&cmat_mul(&m4.matrix, &m1.matrix), &m0.matrix);
    writeln!(out, "det(M_1/4 · M_1/36 · M_0) = {:+.9}", cmat_det(&prod).re)?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
