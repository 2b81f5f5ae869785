//! The degree-12 monodromy matrices and the exact checks relating them to
//! Γ₀(6)+ and the discriminant of U ⊕ ⟨12⟩.

use std::error::Error;
use std::fmt::Write;

use k3mirror::modular::{gamma0_plus_generators, r_map, table1, verify_section5, Gamma0Variant};

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    let t = table1(6)?;
    writeln!(out, "T̄  = {:?}", t.t_bar)?;
    writeln!(out, "S̄₁ = {:?}", t.s1_bar)?;
    writeln!(out, "S̄₂ = {:?}", t.s2_bar)?;
    for g in gamma0_plus_generators(6, Gamma0Variant::Plus)? {
        writeln!(out, "R({g}) = {:?}", r_map(&g, 6)?.matrix)?;
    }
    let rep = verify_section5(6)?;
    for c in &rep.checks {
        writeln!(out, "({}) {}  {}", c.id, if c.passed { "pass" } else { "FAIL" }, c.description)?;
    }
    writeln!(out, "all passed: {}", rep.all_passed())?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
