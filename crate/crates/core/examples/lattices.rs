//! Standard lattices: signatures, parity, the Gram matrix Σ of U ⊕ ⟨2n⟩.

use std::error::Error;
use std::fmt::Write;

use k3mirror::lattice::make_standard;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    let cases: [(&str, Option<i64>); 8] = [
        ("U", None),
        ("E8minus", None),
        ("K3", None),
        ("Mukai", None),
        ("two_n", Some(6)),
        ("U_plus_Mn", Some(6)),
        ("Mcheck_n", Some(6)),
        ("U_plus_Mcheck_n", Some(6)),
    ];
    writeln!(out, "{:<18} {:>4} {:>9} {:>6} {:>10}", "lattice", "rank", "signature", "even", "det")?;
    for (name, n) in cases {
        let l = make_standard(name, n)?;
        let (p, q) = l.signature()?;
        writeln!(out, "{:<18} {:>4} {:>9} {:>6} {:>10}", l.name(), l.rank(), format!("({p},{q})"), l.is_even(), l.det())?;
    }
    let sigma = make_standard("U_plus_Mn", Some(6))?;
    writeln!(out, "Σ(6) = {}", serde_json::to_string(&sigma.to_record())?)?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
