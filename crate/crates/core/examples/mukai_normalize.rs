//! Mukai-vector actions on a degree-12 K3 and the normalization of an
//! isotropic vector to a positive-rank, coprime, ample form.

use std::error::Error;
use std::fmt::Write;

use k3mirror::arith::int;
use k3mirror::mukai::{normalize_mukai_vector, Action, MukaiVector, NsContext};

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    let ctx = NsContext::rank_one(6)?;
    let x = MukaiVector::from_i64(2, &[1], 5);
    let actions = [
        Action::Shift,
        Action::Switch,
        Action::Iota2,
        Action::Tensor { b: vec![int(1)] },
        Action::Twist { w: MukaiVector::from_i64(1, &[0], 1) },
    ];
    for a in &actions {
        let y = ctx.apply_action(a, &x)?;
        writeln!(
            out,
            "{:<40} {:?} ↦ {:?}  ⟨y,y⟩ = {}",
            serde_json::to_string(a)?,
            x,
            y,
            ctx.mukai_pairing(&y, &y)?
        )?;
    }
    let v = MukaiVector::from_i64(0, &[0], 1);
    let u = MukaiVector::from_i64(1, &[0], 0);
    let res = normalize_mukai_vector(&ctx, &v, &u)?;
    writeln!(out, "normalize v = {v:?}, u = {u:?}")?;
    writeln!(out, "  word = {}", serde_json::to_string(&res.word)?)?;
    writeln!(out, "  v' = {:?}, u' = {:?}, ⟨u',v'⟩ = {}", res.v, res.u, ctx.mukai_pairing(&res.u, &res.v)?)?;
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
