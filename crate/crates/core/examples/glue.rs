//! Gluing (U ⊕ ⟨12⟩) ⊕ (U ⊕ M̌₆) into the Mukai lattice and testing which
//! isometries extend.

use std::error::Error;
use std::fmt::Write;

use k3mirror::discriminant::{construct_mirror_embedding, glue_extends, mirror_transport};
use k3mirror::modular::table1;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    let gd = construct_mirror_embedding(6)?;
    let over = gd.overlattice();
    let (p, q) = over.signature()?;
    writeln!(
        out,
        "overlattice: index {}, unimodular {}, even {}, signature ({p},{q})",
        gd.index,
        over.is_unimodular(),
        over.is_even()
    )?;
    writeln!(out, "glue record: {}", serde_json::to_string(&gd.to_record())?)?;
    let [tb, s1b, s2b] = table1(6)?.isometries()?;
    let id = gd.k_lattice().identity_isometry();
    for (label, g) in [("T̄", &tb), ("S̄₁", &s1b), ("S̄₂", &s2b)] {
        let plain = glue_extends(&gd, g, &id)?.is_some();
        let paired = glue_extends(&gd, g, &mirror_transport(g, 6)?)?.is_some();
        writeln!(out, "({label}, id) extends: {plain:<5}  ({label}, mirror of {label}) extends: {paired}")?;
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
