//! Small-time heat asymptotics: `log p_t(U, V) / log t` tends to δ_W(U, V).

use graphon::{builtin, delta_sets, varadhan_slope, Graphon, IntervalSet, TimeGrid};

fn main() -> graphon::Result<()> {
    let c6 = builtin::cycle(6)?;
    let p = c6.partition().clone();
    let w: Graphon = c6.into();
    let grid = TimeGrid::standard();
    let u = IntervalSet::block(&p, 0);
    for j in 0..6 {
        let v = IntervalSet::block(&p, j);
        let est = varadhan_slope(&w, &u, &v, &grid)?;
        println!(
            "V = block {j}: slope {:.6} (residual {:.1e}), δ = {}",
            est.slope,
            est.residual,
            delta_sets(&w, &u, &v)?
        );
    }

    // arbitrary interval unions work too
    let a: IntervalSet = "0.05..0.1,0.4..0.45".parse()?;
    let b: IntervalSet = "0.7..0.72".parse()?;
    let est = varadhan_slope(&w, &a, &b, &grid)?;
    println!(
        "{a} to {b}: slope {:.4}, δ = {}",
        est.slope,
        delta_sets(&w, &a, &b)?
    );
    Ok(())
}
