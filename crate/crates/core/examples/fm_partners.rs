//! Fourier–Mukai partner counts against the symplectic monodromy index.

use std::error::Error;
use std::fmt::Write;

use k3mirror::modular::{fm_partner_count, monodromy_index, monodromy_index_report};

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    writeln!(out, "{:>5} {:>8} {:>7} {:>10} {:>6}", "n", "|O(A)|", "FM", "index", "match")?;
    for n in [1i64, 2, 3, 6, 12, 30, 60, 210, 2310] {
        let fm = fm_partner_count(2 * n)?;
        let idx = monodromy_index(n)?;
        let rep = monodromy_index_report(n)?;
        writeln!(out, "{n:>5} {:>8} {fm:>7} {idx:>10} {:>6}", rep.disc_isometries, fm == idx)?;
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
