//! Entries of analytic matrix functions `f(Lt)` decay like `t^d` where `d` is
//! the graph distance, for any positive weighting of the edges and any
//! diagonal.

use graphon::builtin::cycle_adjacency;
use graphon::{general_varadhan_slope, TaylorFamily, TimeGrid};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> graphon::Result<()> {
    let a = cycle_adjacency(6);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut weights = DMatrix::zeros(6, 6);
    for i in 0..6 {
        for j in i..6 {
            if a[(i, j)] != 0.0 {
                let v = rng.random_range(0.5..1.5);
                weights[(i, j)] = v;
                weights[(j, i)] = v;
            }
        }
    }
    let diagonal: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();

    for family in [TaylorFamily::exp(), TaylorFamily::resolvent()] {
        let slopes: Vec<String> = (0..6)
            .map(|j| {
                general_varadhan_slope(
                    &a,
                    &weights,
                    &diagonal,
                    &family,
                    0,
                    j,
                    &TimeGrid::standard(),
                )
                .map(|e| format!("{:.3}", e.slope))
            })
            .collect::<graphon::Result<_>>()?;
        println!("{:>9}: {}", family.name(), slopes.join("  "));
    }
    Ok(())
}
