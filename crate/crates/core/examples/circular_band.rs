//! The circular band graphon `W(x, y) = 1{Δ(x, y) ≤ τ}` has
//! `d_W = ⌈Δ/τ⌉`. Prints the field on a coarse grid of points.

use graphon::builtin::{circular_band, circular_distance};
use graphon::{distance_field, Graphon};

fn main() -> graphon::Result<()> {
    let tau = 1.0 / 7.0;
    let w: Graphon = circular_band(tau, 700)?.into();
    let field = distance_field(&w);
    println!("diameter {}", field.layer_count());

    let points: Vec<f64> = (0..10).map(|k| (k as f64 + 0.5) / 10.0).collect();
    for &x in &points {
        let row: Vec<String> = points
            .iter()
            .map(|&y| field.at(x, y).map(|d| d.to_string()))
            .collect::<graphon::Result<_>>()?;
        println!("{}", row.join(" "));
    }
    let (x, y) = (0.05, 0.55);
    println!(
        "d_W({x}, {y}) = {}, ceil(Δ/τ) = {}",
        field.at(x, y)?,
        (circular_distance(x, y) / tau).ceil()
    );
    Ok(())
}
