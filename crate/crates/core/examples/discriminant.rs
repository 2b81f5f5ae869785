//! Discriminant forms and the kernel O(L)* for U ⊕ ⟨12⟩.

use std::error::Error;
use std::fmt::Write;

use k3mirror::discriminant::{cyclic_disc_isometry_count, discriminant_group, in_kernel_star, induced_disc_action};
use k3mirror::lattice::make_standard;
use k3mirror::modular::table1;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    for (name, n) in [("two_n", Some(6)), ("U_plus_Mn", Some(6)), ("Mcheck_n", Some(6)), ("K3", None)] {
        let l = make_standard(name, n)?;
        let d = discriminant_group(&l)?;
        writeln!(out, "{:<12} A = {}", l.name(), serde_json::to_string(&d.to_record())?)?;
    }
    let l = make_standard("U_plus_Mn", Some(6))?;
    let [tb, s1b, s2b] = table1(6)?.isometries()?;
    for (label, g) in [("T̄", &tb), ("S̄₁", &s1b), ("S̄₂", &s2b)] {
        let act = induced_disc_action(&l, g)?;
        let mult = act.cyclic_multiplier().map(|m| m.to_string()).unwrap_or_default();
        writeln!(out, "{label}: v ↦ {mult}·v on Z/12, in O* = {}", in_kernel_star(&l, g)?)?;
    }
    writeln!(out, "-id in O*: {}", in_kernel_star(&l, &l.identity_isometry().negate())?)?;
    for n in [1u64, 2, 6, 30, 210] {
        writeln!(out, "|O(A_<{}>)| = {}", 2 * n, cyclic_disc_isometry_count(n))?;
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
