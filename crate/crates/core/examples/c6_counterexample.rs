//! The set distance δ_W is not a metric: on the 6-cycle,
//! δ(X, Y) + δ(Y, Z) = 2 < 3 = δ(X, Z).

use graphon::{builtin, delta_sets, Graphon, IntervalSet};

fn main() -> graphon::Result<()> {
    let c6 = builtin::cycle(6)?;
    let p = c6.partition().clone();
    let w: Graphon = c6.into();
    let x = IntervalSet::blocks(&p, &[0])?;
    let y = IntervalSet::blocks(&p, &[1, 2])?;
    let z = IntervalSet::blocks(&p, &[3])?;
    println!("X = {x}\nY = {y}\nZ = {z}");
    println!("δ(X, Y) = {}", delta_sets(&w, &x, &y)?);
    println!("δ(Y, Z) = {}", delta_sets(&w, &y, &z)?);
    println!("δ(X, Z) = {}", delta_sets(&w, &x, &z)?);
    Ok(())
}
