//! Exact checks of the Schwarzian derivative of the mirror coordinate and
//! of its standard form in z = 48x/(12x+1).

use std::error::Error;
use std::fmt::Write;

use k3mirror::picard_fuchs::{schwarzian_check, standard_form_check};

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    let s = schwarzian_check(40)?;
    writeln!(out, "2x²(1−36x)²(1−4x)²·{{t,x}} through x^40: {}", if s.passed { "pass" } else { "FAIL" })?;
    writeln!(out, "  leading coefficients: {}", s.computed[..6].join(", "))?;
    let z = standard_form_check(30)?;
    writeln!(out, "{{t,z}} standard form through z^30: {}", if z.passed { "pass" } else { "FAIL" })?;
    writeln!(out, "  z⁻², z⁻¹, z⁰ coefficients: {}", z.computed[..3].join(", "))?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
