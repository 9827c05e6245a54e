//! Communicability distance and its spectral embedding.

use graphon::metrics::Embedder;
use graphon::{builtin, communicability_distance, IntervalSet};

fn main() -> graphon::Result<()> {
    let b = builtin::bipartite();
    let (x, y) = (
        IntervalSet::interval(0.0, 0.5)?,
        IntervalSet::interval(0.5, 1.0)?,
    );
    println!(
        "bipartite d_C = {:.12} (e^-1/4 = {:.12})",
        communicability_distance(&b, &x, &y)?,
        (-0.25f64).exp()
    );

    let c6 = builtin::cycle(6)?;
    let embedder = Embedder::new(&c6, 3)?;
    println!(
        "top eigenvalues {:?}",
        embedder.spectrum().eigenvalues[..3].to_vec()
    );
    let sets: Vec<IntervalSet> = ["0..0.2", "0.3..0.5", "0.5..0.9"]
        .iter()
        .map(|s| s.parse())
        .collect::<graphon::Result<_>>()?;
    for s in &sets {
        let e = embedder.embed(s);
        println!("{s}: {:?} residual {:.3e}", e.coordinates, e.residual);
    }
    // truncated embedding distance plus the pair residual recovers d_C
    let (a, c) = (embedder.embed(&sets[0]), embedder.embed(&sets[2]));
    let gap: f64 = a
        .coordinates
        .iter()
        .zip(&c.coordinates)
        .map(|(p, q)| (p - q).powi(2))
        .sum();
    let r = embedder.pair_residual(&sets[0], &sets[2]);
    println!(
        "sqrt(gap² + r²) = {:.12}, d_C = {:.12}",
        (gap + r * r).sqrt(),
        communicability_distance(&c6, &sets[0], &sets[2])?
    );
    Ok(())
}
