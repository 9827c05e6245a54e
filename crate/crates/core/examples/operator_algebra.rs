//! Step graphon algebra: composition powers, degrees and coarsening.

use graphon::{builtin, coarsen, mat, Graphon, Partition};

fn main() -> graphon::Result<()> {
    let c6 = builtin::cycle(6)?;
    for m in 1..=3 {
        let wm = c6.comp_power(m)?;
        println!(
            "C6∘{m} first row: {:?}",
            wm.blocks().row(0).iter().collect::<Vec<_>>()
        );
    }
    println!("degree {:?}", c6.degree().values().as_slice());

    // W∘2 of the circular band is ½ − Δ for τ = ¼
    let band = builtin::circular_band(0.25, 256)?;
    let square = band.comp_power(2)?;
    println!("band∘2 at (0.1, 0.35) = {:.4}", square.eval(0.1, 0.35)?);

    let halves = Partition::uniform(2);
    let w: Graphon = builtin::one_minus_max(128)?.into();
    println!(
        "block averages of 1 − max(x, y) over halves:\n{}",
        mat(&halves, &w)
    );
    println!("coarsened: {:?}", coarsen(&halves, &w).blocks().as_slice());
    Ok(())
}
